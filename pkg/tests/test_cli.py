import json
import subprocess
import sys

import pytest


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "absnorm.cli", *args],
        capture_output=True,
        text=True,
    )


# ---------------------------------------------------------------------------
# eval / psi


def test_eval_euclidean_sphere_point():
    p = run_cli("eval", "--norm", "p:2", "--point", "0.6,0.8")
    assert p.returncode == 0
    assert p.stdout == "1\n"


def test_eval_taxicab():
    p = run_cli("eval", "--norm", "p:1", "--point", "0.3,0.4")
    assert p.returncode == 0
    assert float(p.stdout) == pytest.approx(0.7, abs=1e-15)


def test_eval_axis_is_one():
    p = run_cli("eval", "--norm", "p:1", "--point", "1,0")
    assert p.stdout == "1\n"


def test_eval_output_roundtrips_to_same_string():
    p = run_cli("eval", "--norm", "mix:0.3:p:1.5:p:inf", "--point", "0.37,-0.81")
    value = float(p.stdout)
    assert format(value, ".17g") + "\n" == p.stdout


def test_eval_unknown_kind_exits_2():
    p = run_cli("eval", "--norm", "q:7", "--point", "1,1")
    assert p.returncode == 2
    assert "q" in p.stderr
    assert "position 0" in p.stderr


def test_eval_bad_point_exits_2():
    p = run_cli("eval", "--norm", "p:2", "--point", "1;2")
    assert p.returncode == 2


def test_eval_nonfinite_point_exits_3():
    p = run_cli("eval", "--norm", "p:2", "--point", "inf,0")
    assert p.returncode == 3


def test_psi_values():
    p = run_cli("psi", "--norm", "p:1", "--t", "0.5")
    assert p.stdout == "1\n"
    p = run_cli("psi", "--norm", "p:2", "--t", "0.5")
    assert float(p.stdout) == pytest.approx(0.7071067811865476, abs=1e-15)


def test_psi_domain_error_exits_3():
    p = run_cli("psi", "--norm", "p:2", "--t", "1.5")
    assert p.returncode == 3


# ---------------------------------------------------------------------------
# boundary


def test_boundary_csv_golden():
    p = run_cli("boundary", "--norm", "p:2", "--n", "5")
    assert p.returncode == 0
    assert p.stdout.splitlines() == [
        "x,f,flo,fhi",
        "-1,0,0,0",
        "-0.5,0.8660254037844386,0.8660254037844386,0.8660254037844386",
        "0,1,1,1",
        "0.5,0.8660254037844386,0.8660254037844386,0.8660254037844386",
        "1,0,0,0",
    ]


def test_boundary_plateau_and_diamond():
    p = run_cli("boundary", "--norm", "p:inf", "--n", "3")
    fs = [line.split(",")[1] for line in p.stdout.splitlines()[1:]]
    assert fs == ["1", "1", "1"]
    p = run_cli("boundary", "--norm", "p:1", "--n", "3")
    fs = [line.split(",")[1] for line in p.stdout.splitlines()[1:]]
    assert fs == ["0", "1", "0"]


def test_boundary_json_mirror():
    p = run_cli("boundary", "--norm", "p:1", "--n", "3", "--format", "json")
    rows = json.loads(p.stdout)
    assert [r["f"] for r in rows] == [0.0, 1.0, 0.0]
    assert set(rows[0]) == {"x", "f", "flo", "fhi"}


def test_boundary_rejects_tiny_grid():
    p = run_cli("boundary", "--norm", "p:2", "--n", "1")
    assert p.returncode == 3


# ---------------------------------------------------------------------------
# classify / support


def test_classify_euclidean():
    p = run_cli("classify", "--norm", "p:2")
    data = json.loads(p.stdout)
    assert data["strictly_convex"] == "yes"
    assert data["strictly_monotone"] == "yes"
    assert data["smooth_01"] == "smooth"
    assert data["bgp_sum"] == "preserved"
    assert data["seed"] == 0


def test_classify_taxicab_and_sup():
    data = json.loads(run_cli("classify", "--norm", "p:1").stdout)
    assert data["strictly_convex"] == "no"
    assert data["bgp_sum"] == "unknown"
    data = json.loads(run_cli("classify", "--norm", "p:inf").stdout)
    assert data["strictly_monotone"] == "no"
    assert data["bgp_sum"] == "preserved"


def test_support_interior_taxicab():
    p = run_cli("support", "--norm", "p:1", "--x0", "0", "--samples", "5")
    data = json.loads(p.stdout)
    assert data["slope_interval"][0] == pytest.approx(-1.0, abs=1e-9)
    assert data["slope_interval"][1] == pytest.approx(1.0, abs=1e-9)
    assert all(rep["B"] == pytest.approx(1.0, abs=1e-9) for rep in data["representatives"])


def test_support_endpoint_cases():
    data = json.loads(run_cli("support", "--norm", "p:2", "--endpoint", "right").stdout)
    assert data["case"] == "iii"
    assert data["representatives"] == [{"A": 1.0, "B": 0.0}]
    assert data["parameters"]["a"] == "-inf"
    data = json.loads(run_cli("support", "--norm", "p:inf", "--endpoint", "right").stdout)
    assert data["case"] == "ii"


def test_support_requires_exactly_one_location():
    p = run_cli("support", "--norm", "p:2")
    assert p.returncode == 2
    p = run_cli("support", "--norm", "p:2", "--x0", "0", "--endpoint", "right")
    assert p.returncode == 2


def test_support_undecided_case_exits_4():
    p = run_cli("support", "--norm", "curve:0,1;1,5e-10", "--endpoint", "right")
    assert p.returncode == 4
    assert "undecided" in p.stderr.lower()


# ---------------------------------------------------------------------------
# validate / bgp-check / lemma


def test_validate_reports_pass():
    p = run_cli("validate", "--norm", "mix:0.5:p:1:p:inf", "--samples", "2000", "--seed", "9")
    data = json.loads(p.stdout)
    assert p.returncode == 0
    assert data["passed"] is True
    assert data["seed"] == 9


def test_bgp_check_consistent():
    p = run_cli("bgp-check", "--norm", "p:2", "--epsilons", "0.5,1")
    assert p.returncode == 0
    data = json.loads(p.stdout)
    assert data["consistent"] == "yes"
    assert data["witnesses"]["first"][0]["holds"] == "yes"


def test_bgp_check_csv_margins():
    p = run_cli("bgp-check", "--norm", "p:2", "--epsilons", "0.5", "--format", "csv")
    lines = p.stdout.splitlines()
    assert lines[0] == "epsilon,s,margin"
    assert len(lines) == 1 + 2 * 512


def test_lemma_hand_instance():
    p = run_cli("lemma", "--norm", "p:2", "--X", "p:2,1", "--Y", "p:2,1",
                "--y", "2", "--r", "1", "--s", "3", "--samples", "2000", "--seed", "7")
    assert p.returncode == 0
    data = json.loads(p.stdout)
    assert data["epsilon"] == 1.0
    assert data["t"] == pytest.approx(5 ** 0.5, abs=1e-12)
    assert data["violations"] == []
    assert data["zero_excluded"] is True


def test_lemma_precondition_exits_5():
    p = run_cli("lemma", "--norm", "p:1", "--X", "p:2,1", "--Y", "p:2,1",
                "--y", "2", "--r", "1", "--samples", "100")
    assert p.returncode == 5
    assert "epsilon=1" in p.stderr


def test_lemma_component_parsing_errors():
    p = run_cli("lemma", "--norm", "p:2", "--X", "p:2", "--Y", "p:2,1",
                "--y", "2", "--r", "1")
    assert p.returncode == 2
    p = run_cli("lemma", "--norm", "p:2", "--X", "curve:0,1;1,0,3", "--Y", "p:2,1",
                "--y", "2", "--r", "1")
    assert p.returncode == 2


# ---------------------------------------------------------------------------
# global flags and exit-code contract


def test_unknown_command_exits_2():
    p = run_cli("frobnicate", "--norm", "p:2")
    assert p.returncode == 2


def test_unknown_flag_exits_2():
    p = run_cli("eval", "--norm", "p:2", "--point", "1,0", "--frob")
    assert p.returncode == 2


def test_unknown_tolerance_name_exits_2():
    p = run_cli("eval", "--norm", "p:2", "--point", "1,0", "--tol", "bogus=1e-3")
    assert p.returncode == 2


def test_tolerance_override_accepted():
    p = run_cli("classify", "--norm", "p:2", "--tol", "smooth=1e-5")
    assert p.returncode == 0


def test_out_writes_file(tmp_path):
    target = tmp_path / "curve.csv"
    p = run_cli("boundary", "--norm", "p:2", "--n", "5", "--out", str(target))
    assert p.returncode == 0
    assert p.stdout == ""
    assert target.read_text().startswith("x,f,flo,fhi")


def test_verbose_reports_backend_on_stderr():
    p = run_cli("eval", "--norm", "p:2", "--point", "1,0", "-v")
    assert "kernel backend:" in p.stderr
    assert p.stdout == "1\n"


# ---------------------------------------------------------------------------
# determinism


DETERMINISM_CASES = [
    ("eval", "--norm", "p:2", "--point", "0.6,0.8"),
    ("psi", "--norm", "mix:0.5:p:1:p:inf", "--t", "0.25"),
    ("boundary", "--norm", "curve:0,1;0.5,0.9;1,0", "--n", "17"),
    ("boundary", "--norm", "p:1.5", "--n", "9", "--format", "json"),
    ("classify", "--norm", "mix:0.25:p:1:p:inf"),
    ("support", "--norm", "p:1", "--x0", "0"),
    ("support", "--norm", "curve:0,1;0.5,0.9;1,0", "--endpoint", "right"),
    ("validate", "--norm", "p:3", "--samples", "500", "--seed", "13"),
    ("bgp-check", "--norm", "p:1.5", "--epsilons", "0.25,1"),
    ("lemma", "--norm", "p:2", "--X", "p:1,2", "--Y", "p:inf,2",
     "--y", "0,2", "--r", "0.5", "--samples", "2000", "--seed", "21"),
]


@pytest.mark.parametrize("args", DETERMINISM_CASES, ids=lambda a: a[0])
def test_repeated_invocations_are_byte_identical(args, tmp_path):
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    out1 = tmp_path / "run1.txt"
    out2 = tmp_path / "run2.txt"
    run_cli(*args, "--out", str(out1))
    run_cli(*args, "--out", str(out2))
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_text() == first.stdout
