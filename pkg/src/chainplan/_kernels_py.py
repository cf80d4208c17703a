"""Pure Python twin of the compiled kernels.

Selected by chainplan.kinematics when the compiled extension is unavailable
or when CHAINPLAN_PURE is set.  Must stay behaviourally identical to
_kernels.pyx; the benchmark suite compares the two.
"""

from math import fabs, sqrt

BACKEND = "python"


def propagate(x, u, t):
    """State after time t under constant control u. Exact up to float error."""
    n = len(x)
    out = []
    for k in range(1, n + 1):
        acc = 0.0
        term = 1.0
        for i in range(k):
            acc += x[k - 1 - i] * term
            term *= t / (i + 1)
        acc += u * term
        out.append(acc)
    return tuple(out)


def propagate_chain(x, us, ts):
    """End states of successive constant-control stages. Returns a list."""
    out = []
    cur = tuple(x)
    for u, t in zip(us, ts):
        cur = propagate(cur, u, t)
        out.append(cur)
    return out


def integral_top(x, u, t):
    """Time integral of the highest state over [0, t] under constant u."""
    n = len(x)
    acc = 0.0
    term = t
    for i in range(1, n + 1):
        acc += x[n - i] * term
        term *= t / (i + 1)
    acc += u * term
    return acc


def plan2(v0, p0, vf, pf, M0, M1, eps):
    """Plan the two-state problem (velocity bound M1, M1 <= 0 for unbounded).

    Returns a tuple of (control, duration) stages; empty for start == goal.
    The position is unconstrained here; callers layer position handling.
    """
    mirror = 1.0
    while True:
        if v0 >= vf:
            disp = (v0 * v0 - vf * vf) / (2.0 * M0)
        else:
            disp = (vf * vf - v0 * v0) / (2.0 * M0)
        pstar = pf - disp
        gap = p0 - pstar
        scale = max(1.0, fabs(pstar))
        if fabs(gap) <= eps * scale:
            if v0 == vf and p0 == pf:
                return ()
            u = mirror * M0 if vf >= v0 else -mirror * M0
            return ((u, fabs(vf - v0) / M0),)
        if gap > 0.0:
            v0, p0, vf, pf = -v0, -p0, -vf, -pf
            mirror = -mirror
            continue
        break
    w2 = M0 * (pf - p0) + 0.5 * (v0 * v0 + vf * vf)
    if w2 < 0.0:
        w2 = 0.0
    w = sqrt(w2)
    if M1 <= 0.0 or w <= M1:
        return ((mirror * M0, (w - v0) / M0), (-mirror * M0, (w - vf) / M0))
    t1 = (M1 - v0) / M0
    t3 = (M1 - vf) / M0
    tr = (pf - p0 - (M1 * M1 - v0 * v0) / (2.0 * M0)
          - (M1 * M1 - vf * vf) / (2.0 * M0)) / M1
    return ((mirror * M0, t1), (0.0, tr), (-mirror * M0, t3))
