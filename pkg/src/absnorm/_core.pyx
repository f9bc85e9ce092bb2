# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: norm evaluation and boundary bisection.

Mirror of ``absnorm._core_py`` (see there for the plan encoding); selected at
import time by ``absnorm._backend`` when the extension was built.
"""

from libc.math cimport fabs, fmax, fmin, hypot, pow, NAN


cdef int MAX_NODES = 64
cdef int GAUGE_ITERS = 60
cdef int BOUNDARY_ITERS = 48


cdef class Kernel:
    cdef signed char[::1] kind
    cdef double[::1] param
    cdef int[::1] c0
    cdef int[::1] c1
    cdef int[::1] voff
    cdef int[::1] vcnt
    cdef int[::1] soff
    cdef double[::1] vx
    cdef double[::1] vy
    cdef double[::1] vslope
    cdef int n

    def __init__(self, kind, param, c0, c1, voff, vcnt, soff, vx, vy, vslope):
        if kind.shape[0] > MAX_NODES:
            raise ValueError(f"plan exceeds {MAX_NODES} nodes")
        self.kind = kind
        self.param = param
        self.c0 = c0
        self.c1 = c1
        self.voff = voff
        self.vcnt = vcnt
        self.soff = soff
        self.vx = vx
        self.vy = vy
        self.vslope = vslope
        self.n = kind.shape[0]

    cdef double _height(self, int node, double x) noexcept nogil:
        cdef int lo = self.voff[node]
        cdef int hi = lo + self.vcnt[node] - 1
        cdef int mid
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            if self.vx[mid] <= x:
                lo = mid
            else:
                hi = mid
        return self.vy[lo] + self.vslope[self.soff[node] + (lo - self.voff[node])] * (x - self.vx[lo])

    cdef double _gauge(self, int node, double u, double v) noexcept nogil:
        cdef double lo = fmax(u, v)
        cdef double hi = u + v
        cdef double mid
        cdef int it
        if hi <= lo:
            return lo
        for it in range(GAUGE_ITERS):
            mid = 0.5 * (lo + hi)
            if v / mid <= self._height(node, u / mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    cdef double _eval(self, double a, double b) noexcept nogil:
        cdef double u = fabs(a)
        cdef double v = fabs(b)
        cdef double vals[64]
        cdef double p, lam, m, q
        cdef int i
        cdef signed char k
        for i in range(self.n):
            k = self.kind[i]
            if k == 0:
                p = self.param[i]
                m = fmax(u, v)
                if m == 0.0:
                    vals[i] = 0.0
                elif p == 1.0:
                    vals[i] = u + v
                elif p == 2.0:
                    vals[i] = hypot(u, v)
                else:
                    q = fmin(u, v) / m
                    vals[i] = m * pow(1.0 + pow(q, p), 1.0 / p)
            elif k == 1:
                vals[i] = fmax(u, v)
            elif k == 2:
                lam = self.param[i]
                vals[i] = lam * vals[self.c0[i]] + (1.0 - lam) * vals[self.c1[i]]
            else:
                vals[i] = self._gauge(i, u, v)
        return vals[self.n - 1]

    def eval(self, double a, double b):
        return self._eval(a, b)

    def eval_batch(self, const double[::1] a, const double[::1] b, double[::1] out):
        cdef Py_ssize_t i
        cdef Py_ssize_t n = a.shape[0]
        with nogil:
            for i in range(n):
                out[i] = self._eval(a[i], b[i])

    cdef void _bbracket(self, double x, double* plo, double* phi) noexcept nogil:
        cdef double u = fabs(x)
        cdef double lo, hi, mid
        cdef int it
        if u > 1.0:
            plo[0] = NAN
            phi[0] = NAN
            return
        if self._eval(u, 1.0) <= 1.0:
            plo[0] = 1.0
            phi[0] = 1.0
            return
        lo = 0.0
        hi = 1.0
        for it in range(BOUNDARY_ITERS):
            mid = 0.5 * (lo + hi)
            if self._eval(u, mid) <= 1.0:
                lo = mid
            else:
                hi = mid
        plo[0] = lo
        phi[0] = hi

    def boundary_bracket(self, double x):
        cdef double lo, hi
        self._bbracket(x, &lo, &hi)
        return (lo, hi)

    def boundary_batch(self, const double[::1] xs, double[::1] flo, double[::1] fhi):
        cdef Py_ssize_t i
        cdef Py_ssize_t n = xs.shape[0]
        cdef double lo, hi
        with nogil:
            for i in range(n):
                self._bbracket(xs[i], &lo, &hi)
                flo[i] = lo
                fhi[i] = hi
