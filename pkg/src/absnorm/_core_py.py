"""Pure-Python/numpy kernels: norm evaluation and boundary bisection.

This module mirrors the compiled extension ``absnorm._core`` exactly; one of
the two is selected at import time by ``absnorm._backend``.  Scalar paths use
``math`` for speed, batch paths are numpy-vectorized.

Plan encoding (shared with the compiled core): a spec tree is flattened into
parallel arrays in topological order (children before parents, root last).
Node kinds: 0 = finite p-norm (param = p), 1 = sup norm, 2 = mixture
(param = weight of child c0), 3 = curve gauge (vertices vx/vy[voff:voff+vcnt],
segment slopes vslope[soff:soff+vcnt-1]).
"""

import math

import numpy as np

MAX_NODES = 64
GAUGE_ITERS = 60
BOUNDARY_ITERS = 48

P_FINITE, P_SUP, MIXTURE, CURVE = 0, 1, 2, 3


class Kernel:
    def __init__(self, kind, param, c0, c1, voff, vcnt, soff, vx, vy, vslope):
        if len(kind) > MAX_NODES:
            raise ValueError(f"plan exceeds {MAX_NODES} nodes")
        # list copies for the scalar loops, arrays for the batch loops
        self._kind = [int(k) for k in kind]
        self._param = [float(p) for p in param]
        self._c0 = [int(i) for i in c0]
        self._c1 = [int(i) for i in c1]
        self._voff = [int(i) for i in voff]
        self._vcnt = [int(i) for i in vcnt]
        self._soff = [int(i) for i in soff]
        self._vx = [float(t) for t in vx]
        self._vy = [float(t) for t in vy]
        self._vslope = [float(t) for t in vslope]
        self._avx = np.asarray(vx, dtype=np.float64)
        self._avy = np.asarray(vy, dtype=np.float64)
        self._avslope = np.asarray(vslope, dtype=np.float64)
        self._n = len(self._kind)

    # -- scalar ------------------------------------------------------------

    def _height(self, node, x):
        # piecewise-linear interpolant of the curve node at x in [0, 1]
        vx = self._vx
        lo = self._voff[node]
        hi = lo + self._vcnt[node] - 1
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            if vx[mid] <= x:
                lo = mid
            else:
                hi = mid
        seg = self._soff[node] + (lo - self._voff[node])
        return self._vy[lo] + self._vslope[seg] * (x - vx[lo])

    def _gauge(self, node, u, v):
        # Minkowski gauge of the symmetrized under-curve region, resolved by
        # bisection on the scale factor bracketed by [sup-norm, taxicab-norm]
        lo = u if u > v else v
        hi = u + v
        if hi <= lo:  # origin or axis points: gauge is exact
            return lo
        for _ in range(GAUGE_ITERS):
            mid = 0.5 * (lo + hi)
            if v / mid <= self._height(node, u / mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    def eval(self, a, b):
        u = abs(a)
        v = abs(b)
        vals = [0.0] * self._n
        for i in range(self._n):
            k = self._kind[i]
            if k == P_FINITE:
                p = self._param[i]
                m = u if u > v else v
                if m == 0.0:
                    vals[i] = 0.0
                elif p == 1.0:
                    vals[i] = u + v
                elif p == 2.0:
                    vals[i] = math.hypot(u, v)
                else:
                    q = (v if u > v else u) / m
                    vals[i] = m * (1.0 + q**p) ** (1.0 / p)
            elif k == P_SUP:
                vals[i] = u if u > v else v
            elif k == MIXTURE:
                lam = self._param[i]
                vals[i] = lam * vals[self._c0[i]] + (1.0 - lam) * vals[self._c1[i]]
            else:
                vals[i] = self._gauge(i, u, v)
        return vals[self._n - 1]

    # -- batch -------------------------------------------------------------

    def _height_vec(self, node, x):
        off = self._voff[node]
        cnt = self._vcnt[node]
        vx = self._avx[off:off + cnt]
        vy = self._avy[off:off + cnt]
        sl = self._avslope[self._soff[node]:self._soff[node] + cnt - 1]
        idx = np.clip(np.searchsorted(vx, x, side="right") - 1, 0, cnt - 2)
        return vy[idx] + sl[idx] * (x - vx[idx])

    def _gauge_vec(self, node, u, v):
        lo = np.maximum(u, v)
        hi = u + v
        exact = hi <= lo
        for _ in range(GAUGE_ITERS):
            mid = 0.5 * (lo + hi)
            safe = np.where(mid > 0.0, mid, 1.0)
            inside = v / safe <= self._height_vec(node, u / safe)
            hi = np.where(inside, mid, hi)
            lo = np.where(inside, lo, mid)
        return np.where(exact, np.maximum(u, v), 0.5 * (lo + hi))

    def eval_batch(self, a, b, out):
        u = np.abs(a)
        v = np.abs(b)
        vals = [None] * self._n
        for i in range(self._n):
            k = self._kind[i]
            if k == P_FINITE:
                p = self._param[i]
                if p == 1.0:
                    vals[i] = u + v
                elif p == 2.0:
                    vals[i] = np.hypot(u, v)
                else:
                    m = np.maximum(u, v)
                    q = np.minimum(u, v) / np.where(m > 0.0, m, 1.0)
                    vals[i] = np.where(m > 0.0, m * (1.0 + q**p) ** (1.0 / p), 0.0)
            elif k == P_SUP:
                vals[i] = np.maximum(u, v)
            elif k == MIXTURE:
                lam = self._param[i]
                vals[i] = lam * vals[self._c0[i]] + (1.0 - lam) * vals[self._c1[i]]
            else:
                vals[i] = self._gauge_vec(i, u, v)
        out[:] = vals[self._n - 1]

    # -- boundary curve ----------------------------------------------------

    def boundary_bracket(self, x):
        """Certified bracket for the upper boundary height at x, |x| <= 1.

        Bisects the monotone predicate "(x, t) inside the unit ball" on
        t in [0, 1]; at |x| = 1 this yields the vertical-section supremum,
        which equals the one-sided limit of the curve for a closed ball.
        """
        u = abs(x)
        if u > 1.0:
            return (math.nan, math.nan)
        if self.eval(u, 1.0) <= 1.0:
            return (1.0, 1.0)
        lo, hi = 0.0, 1.0
        for _ in range(BOUNDARY_ITERS):
            mid = 0.5 * (lo + hi)
            if self.eval(u, mid) <= 1.0:
                lo = mid
            else:
                hi = mid
        return (lo, hi)

    def boundary_batch(self, xs, flo, fhi):
        u = np.abs(np.asarray(xs, dtype=np.float64))
        n = u.size
        top = np.empty(n)
        self.eval_batch(u, np.ones(n), top)
        plateau = top <= 1.0
        lo = np.zeros(n)
        hi = np.ones(n)
        vals = np.empty(n)
        for _ in range(BOUNDARY_ITERS):
            mid = 0.5 * (lo + hi)
            self.eval_batch(u, mid, vals)
            inside = vals <= 1.0
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        lo = np.where(plateau, 1.0, lo)
        hi = np.where(plateau, 1.0, hi)
        bad = u > 1.0
        flo[:] = np.where(bad, np.nan, lo)
        fhi[:] = np.where(bad, np.nan, hi)
