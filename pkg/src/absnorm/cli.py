"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 domain error, 4 property violation,
5 precondition error.  All numeric output uses 17 significant digits and
fixed seeds, so identical invocations produce byte-identical output.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import bgp, boundary, support
from ._backend import backend_name
from .config import DEFAULT_TOL
from .errors import (
    DomainError,
    PreconditionError,
    SpecError,
    SpecParseError,
    UndecidedCaseError,
)
from .normspec import parse_spec

EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_VIOLATION = 4
EXIT_PRECONDITION = 5


def _fmt17(v: float) -> str:
    return format(float(v), ".17g")


def _fail(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _tolerances(pairs):
    overrides = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise click.UsageError(f"--tol expects name=value, got {pair!r}")
        try:
            overrides[name] = float(value)
        except ValueError:
            raise click.UsageError(f"--tol value for {name!r} is not a number: {value!r}")
    try:
        return DEFAULT_TOL.override(**overrides)
    except KeyError as exc:
        raise click.UsageError(str(exc))


def _spec_from(text):
    return parse_spec(text)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SpecParseError as exc:
            _fail(EXIT_PARSE, str(exc))
        except SpecError as exc:
            _fail(EXIT_PARSE, f"spec error: {exc}")
        except DomainError as exc:
            _fail(EXIT_DOMAIN, f"domain error: {exc}")
        except PreconditionError as exc:
            _fail(EXIT_PRECONDITION, f"precondition error: {exc}")
        except UndecidedCaseError as exc:
            _fail(EXIT_VIOLATION, f"undecided case: {exc}")

    return wrapper


def common_options(fn):
    fn = click.option("--verbose", "-v", count=True, help="Diagnostics on stderr.")(fn)
    fn = click.option("--tol", "tol_pairs", multiple=True, metavar="NAME=VALUE",
                      help="Tolerance override (repeatable).")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True,
                      help="Seed recorded in reports and used for sampling.")(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None,
                      help="Write output to a file instead of stdout.")(fn)
    fn = click.option("--norm", "norm_text", required=True, metavar="SPEC",
                      help="Norm spec: p:<float|inf>, mix:<w>:<spec>:<spec>, "
                           "curve:x1,y1;x2,y2;...")(fn)
    return fn


def _verbose_banner(verbose):
    if verbose:
        click.echo(f"kernel backend: {backend_name()}", err=True)


@click.group()
def cli():
    """Toolkit for absolute normalized norms on the plane."""


@cli.command("eval")
@common_options
@click.option("--point", required=True, metavar="X,Y", help="Evaluation point.")
@handle_errors
def cmd_eval(norm_text, point, out, seed, tol_pairs, verbose):
    """Value of the norm at a point."""
    _verbose_banner(verbose)
    _tolerances(tol_pairs)
    spec = _spec_from(norm_text)
    parts = point.split(",")
    if len(parts) != 2:
        raise click.UsageError(f"--point expects X,Y, got {point!r}")
    try:
        x, y = float(parts[0]), float(parts[1])
    except ValueError:
        raise click.UsageError(f"--point coordinates must be numbers: {point!r}")
    from .normspec import eval_norm

    _emit(_fmt17(eval_norm(spec, (x, y))) + "\n", out)


@cli.command("psi")
@common_options
@click.option("--t", "t_value", required=True, type=float, help="Parameter in [0, 1].")
@handle_errors
def cmd_psi(norm_text, t_value, out, seed, tol_pairs, verbose):
    """Norm along the segment parametrization (1-t, t)."""
    _verbose_banner(verbose)
    _tolerances(tol_pairs)
    spec = _spec_from(norm_text)
    _emit(_fmt17(boundary.psi_curve(spec, t_value)) + "\n", out)


@cli.command("boundary")
@common_options
@click.option("--n", "n_points", type=int, default=33, show_default=True,
              help="Grid size on [-1, 1], inclusive.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@handle_errors
def cmd_boundary(norm_text, n_points, fmt, out, seed, tol_pairs, verbose):
    """Tabulate the upper boundary curve with certified brackets."""
    _verbose_banner(verbose)
    _tolerances(tol_pairs)
    spec = _spec_from(norm_text)
    rows = boundary.tabulate(spec, n_points)
    text = boundary.table_to_csv(rows) if fmt == "csv" else boundary.table_to_json(rows)
    _emit(text, out)


@cli.command("classify")
@common_options
@click.option("--grid", type=int, default=101, show_default=True)
@handle_errors
def cmd_classify(norm_text, grid, out, seed, tol_pairs, verbose):
    """Strict convexity/monotonicity, basis smoothness and the sum verdict."""
    _verbose_banner(verbose)
    tol = _tolerances(tol_pairs)
    spec = _spec_from(norm_text)
    conv = boundary.classify_convexity(spec, grid=grid, tol=tol)
    verdict = bgp.bgp_sum_verdict(spec, tol=tol)
    payload = {
        "norm": spec.label,
        "strictly_convex": conv.strictly_convex,
        "strictly_monotone": conv.strictly_monotone,
        "smooth_01": verdict.smooth_at_01,
        "smooth_10": verdict.smooth_at_10,
        "bgp_sum": verdict.verdict,
        "notes": verdict.notes,
        "seed": seed,
    }
    _emit(json.dumps(payload, indent=2) + "\n", out)


@cli.command("support")
@common_options
@click.option("--x0", type=float, default=None, help="Interior location in (-1, 1).")
@click.option("--endpoint", "endpoint_side", type=click.Choice(["left", "right"]),
              default=None, help="Endpoint analysis instead of an interior point.")
@click.option("--samples", type=int, default=33, show_default=True,
              help="Number of representative functionals.")
@handle_errors
def cmd_support(norm_text, x0, endpoint_side, samples, out, seed, tol_pairs, verbose):
    """Support-functional set at a sphere point."""
    _verbose_banner(verbose)
    tol = _tolerances(tol_pairs)
    if (x0 is None) == (endpoint_side is None):
        raise click.UsageError("exactly one of --x0 and --endpoint is required")
    spec = _spec_from(norm_text)
    if x0 is not None:
        result = support.support_set_interior(spec, x0, samples=samples, tol=tol)
    else:
        result = support.support_set_endpoint(spec, endpoint_side, samples=samples, tol=tol)
    payload = result.to_json_dict()
    payload["norm"] = spec.label
    payload["seed"] = seed
    _emit(json.dumps(payload, indent=2) + "\n", out)


@cli.command("validate")
@common_options
@click.option("--samples", type=int, default=10000, show_default=True)
@handle_errors
def cmd_validate(norm_text, samples, out, seed, tol_pairs, verbose):
    """Sampled validation of the absolute-normalized-norm axioms."""
    _verbose_banner(verbose)
    _tolerances(tol_pairs)
    spec = _spec_from(norm_text)
    from .normspec import validate_norm

    report = validate_norm(spec, sample_count=samples, seed=seed)
    _emit(json.dumps(report.to_json_dict(), indent=2) + "\n", out)
    if not report.passed:
        sys.exit(EXIT_VIOLATION)


@cli.command("bgp-check")
@common_options
@click.option("--epsilons", default=None, metavar="E1,E2,...",
              help="Epsilon grid (default: the built-in dyadic grid).")
@click.option("--s-max", "s_max", type=float, default=None,
              help="Upper end of the scale grid (default 64*(1+eps)).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True, help="csv exports the margin table.")
@handle_errors
def cmd_bgp_check(norm_text, epsilons, s_max, fmt, out, seed, tol_pairs, verbose):
    """Cross-check basis smoothness against the tail conditions."""
    _verbose_banner(verbose)
    tol = _tolerances(tol_pairs)
    spec = _spec_from(norm_text)
    if epsilons:
        try:
            eps = tuple(float(e) for e in epsilons.split(","))
        except ValueError:
            raise click.UsageError(f"--epsilons must be numbers: {epsilons!r}")
    else:
        eps = bgp.DEFAULT_EPSILONS
    report = bgp.equivalence_crosscheck(spec, epsilons=eps, s_max=s_max, tol=tol)
    w1 = bgp.check_condition(spec, "first", eps, s_max=s_max, tol=tol)
    w2 = bgp.check_condition(spec, "second", eps, s_max=s_max, tol=tol)
    if fmt == "csv":
        _emit(bgp.witness_margins_csv(w1 + w2), out)
    else:
        payload = {
            "norm": spec.label,
            "consistent": report.consistent,
            "detail": report.detail,
            "witnesses": {
                "first": [w.to_json_dict(include_samples=False) for w in w1],
                "second": [w.to_json_dict(include_samples=False) for w in w2],
            },
            "seed": seed,
        }
        _emit(json.dumps(payload, indent=2) + "\n", out)
    if report.consistent == "no":
        sys.exit(EXIT_VIOLATION)


def _parse_component(text):
    spec_text, sep, dim_text = text.rpartition(",")
    if not sep:
        raise click.UsageError(f"component must be <spec>,<dim>, got {text!r}")
    try:
        dim = int(dim_text)
    except ValueError:
        raise click.UsageError(f"component dimension must be an integer: {dim_text!r}")
    spec = _spec_from(spec_text)
    if spec.kind == "p":
        return bgp.lp_space(spec.p, dim)
    if dim != 2:
        raise click.UsageError(
            f"non-p component norms act on the plane; got dimension {dim}"
        )
    return bgp.space_from_spec(spec)


@cli.command("lemma")
@common_options
@click.option("--X", "x_space", required=True, metavar="SPEC,DIM",
              help="First component space.")
@click.option("--Y", "y_space", required=True, metavar="SPEC,DIM",
              help="Second component space.")
@click.option("--y", "y_center", required=True, metavar="V1,V2,...",
              help="Center of the avoided ball in the second component.")
@click.option("--r", "radius", required=True, type=float, help="Radius, 0 < r < norm(y).")
@click.option("--s", "s_value", type=float, default=None,
              help="Scale override (default: auto-selected admissible scale).")
@click.option("--samples", type=int, default=100000, show_default=True)
@handle_errors
def cmd_lemma(norm_text, x_space, y_space, y_center, radius, s_value, samples,
              out, seed, tol_pairs, verbose):
    """Verify the convergence lemma's ball containments by sampling."""
    _verbose_banner(verbose)
    tol = _tolerances(tol_pairs)
    spec = _spec_from(norm_text)
    X = _parse_component(x_space)
    Y = _parse_component(y_space)
    try:
        center = [float(v) for v in y_center.split(",")]
    except ValueError:
        raise click.UsageError(f"--y must be numbers: {y_center!r}")
    report = bgp.lemma_inclusion_verify(
        spec, X, Y, center, radius, sample_count=samples, seed=seed, s=s_value, tol=tol
    )
    payload = report.to_json_dict()
    payload["norm"] = spec.label
    _emit(json.dumps(payload, indent=2) + "\n", out)
    if report.violations or not report.zero_excluded:
        sys.exit(EXIT_VIOLATION)


def main():
    cli(prog_name="absnorm")


if __name__ == "__main__":
    main()
