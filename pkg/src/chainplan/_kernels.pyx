# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels.

Hot inner loops of the planner: exact polynomial propagation of
chain-of-integrators states under constant control, and the closed-form
second-order planning core that the recursive planner evaluates massively
during manifold interception.  A pure Python twin lives in _kernels_py;
chainplan.kinematics picks one at import time.
"""

from libc.math cimport fabs, sqrt

BACKEND = "compiled"

DEF MAX_STATES = 24


cdef inline void _prop(const double* x, int n, double u, double t, double* out) noexcept nogil:
    # y_k = u t^k/k! + sum_{i=0}^{k-1} x_{k-i} t^i/i!   (states 1-indexed)
    cdef int k, i
    cdef double acc, term
    for k in range(1, n + 1):
        acc = 0.0
        term = 1.0
        for i in range(k):
            acc += x[k - 1 - i] * term
            term *= t / (i + 1)
        acc += u * term
        out[k - 1] = acc


def propagate(x, double u, double t):
    """State after time t under constant control u. Exact up to float error."""
    cdef double xs[MAX_STATES]
    cdef double ys[MAX_STATES]
    cdef int n = len(x)
    if n > MAX_STATES:
        raise ValueError("system order above compiled limit %d" % MAX_STATES)
    cdef int k
    for k in range(n):
        xs[k] = x[k]
    _prop(xs, n, u, t, ys)
    return tuple(ys[k] for k in range(n))


def propagate_chain(x, us, ts):
    """End states of successive constant-control stages. Returns a list."""
    cdef double xs[MAX_STATES]
    cdef double ys[MAX_STATES]
    cdef int n = len(x)
    if n > MAX_STATES:
        raise ValueError("system order above compiled limit %d" % MAX_STATES)
    cdef int k, j
    cdef int m = len(us)
    for k in range(n):
        xs[k] = x[k]
    out = []
    for j in range(m):
        _prop(xs, n, us[j], ts[j], ys)
        for k in range(n):
            xs[k] = ys[k]
        out.append(tuple(ys[k] for k in range(n)))
    return out


def integral_top(x, double u, double t):
    """Time integral of the highest state over [0, t] under constant u."""
    cdef double xs[MAX_STATES]
    cdef int n = len(x)
    if n > MAX_STATES:
        raise ValueError("system order above compiled limit %d" % MAX_STATES)
    cdef int k, i
    for k in range(n):
        xs[k] = x[k]
    cdef double acc = 0.0
    cdef double term = t
    for i in range(1, n + 1):
        acc += xs[n - i] * term
        term *= t / (i + 1)
    acc += u * term
    return acc


cdef int _plan2_core(double v0, double p0, double vf, double pf,
                     double M0, double M1, double eps,
                     double* us, double* ts) noexcept nogil:
    """Second-order planning core.  M1 <= 0 means the velocity is unbounded.

    Writes up to 3 (control, duration) stages; returns the stage count,
    or -1 for the degenerate start == goal case.
    Strategy: project the start onto the braking manifold of the goal; when
    below it, ramp up to the peak (or the velocity bound plus a cruise) and
    come back down; mirrored when above.
    """
    cdef double mirror = 1.0
    cdef double disp, pstar, gap, scale, w2, w, t1, t3, tr
    cdef int i
    while True:
        if v0 >= vf:
            disp = (v0 * v0 - vf * vf) / (2.0 * M0)
        else:
            disp = (vf * vf - v0 * v0) / (2.0 * M0)
        pstar = pf - disp
        gap = p0 - pstar
        scale = fabs(pstar)
        if scale < 1.0:
            scale = 1.0
        if fabs(gap) <= eps * scale:
            if v0 == vf and p0 == pf:
                return -1
            if vf >= v0:
                us[0] = mirror * M0
            else:
                us[0] = -mirror * M0
            ts[0] = fabs(vf - v0) / M0
            return 1
        if gap > 0.0:
            # above the manifold: solve the mirrored problem, flip controls
            v0 = -v0
            p0 = -p0
            vf = -vf
            pf = -pf
            mirror = -mirror
            continue
        break
    w2 = M0 * (pf - p0) + 0.5 * (v0 * v0 + vf * vf)
    if w2 < 0.0:
        w2 = 0.0
    w = sqrt(w2)
    if M1 <= 0.0 or w <= M1:
        us[0] = mirror * M0
        ts[0] = (w - v0) / M0
        us[1] = -mirror * M0
        ts[1] = (w - vf) / M0
        return 2
    t1 = (M1 - v0) / M0
    t3 = (M1 - vf) / M0
    tr = (pf - p0 - (M1 * M1 - v0 * v0) / (2.0 * M0)
          - (M1 * M1 - vf * vf) / (2.0 * M0)) / M1
    us[0] = mirror * M0
    ts[0] = t1
    us[1] = 0.0
    ts[1] = tr
    us[2] = -mirror * M0
    ts[2] = t3
    return 3


def plan2(double v0, double p0, double vf, double pf,
          double M0, double M1, double eps):
    """Plan the two-state problem (velocity bound M1, M1 <= 0 for unbounded).

    Returns a tuple of (control, duration) stages; empty for start == goal.
    The position is unconstrained here; callers layer position handling.
    """
    cdef double us[3]
    cdef double ts[3]
    cdef int m = _plan2_core(v0, p0, vf, pf, M0, M1, eps, us, ts)
    if m < 0:
        return ()
    return tuple((us[i], ts[i]) for i in range(m))
