"""Exact kinematics of chain-of-integrators under constant control.

Propagation and the per-segment machinery (state polynomials, stationary
points, bound violation checks).  The inner numeric loops are delegated to a
compiled extension when available; set CHAINPLAN_PURE=1 to force the pure
Python fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

if os.environ.get("CHAINPLAN_PURE"):
    from . import _kernels_py as _kernels
else:
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _kernels

BACKEND: str = _kernels.BACKEND

propagate = _kernels.propagate
propagate_chain = _kernels.propagate_chain
integral_top = _kernels.integral_top
plan2 = _kernels.plan2

_FACT = [1.0]
for _i in range(1, 32):
    _FACT.append(_FACT[-1] * _i)


@dataclass(frozen=True)
class Polynomial:
    """Real univariate polynomial; ``coeffs[i]`` multiplies ``t**i``."""

    coeffs: tuple[float, ...]

    def __call__(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i] != 0.0:
                return i
        return 0

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) <= 1:
            return Polynomial((0.0,))
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.coeffs)


def state_polynomial(x, u: float, k: int) -> Polynomial:
    """Polynomial giving state k along a constant-control segment.

    Evaluating it at t equals propagate(x, u, t)[k-1]; degree k.
    """
    n = len(x)
    if not 1 <= k <= n:
        raise ValueError(f"state index {k} outside 1..{n}")
    coeffs = [0.0] * (k + 1)
    coeffs[0] = x[k - 1]
    for i in range(1, k):
        coeffs[i] = x[k - 1 - i] / _FACT[i]
    coeffs[k] = u / _FACT[k]
    return Polynomial(tuple(coeffs))


def _refine_root(p: Polynomial, lo: float, hi: float, tol: float) -> float:
    """Locate the sign change of a monotone-on-bracket polynomial by bisection."""
    flo = p(lo)
    if flo == 0.0:
        return lo
    fhi = p(hi)
    if fhi == 0.0:
        return hi
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = p(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) != (fm < 0.0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def real_roots(p: Polynomial, interval: tuple[float, float],
               tol: float = 1e-12, dedup: float = 1e-10) -> list[float]:
    """All real roots of p on [a, b], sorted, deduplicated within ``dedup``.

    Roots are isolated by subdividing at derivative roots (recursively down
    to the linear case), then polished by bisection to ``tol``.  Raises
    ValueError for the identically zero polynomial.
    """
    a, b = interval
    if a > b:
        raise ValueError(f"empty interval [{a}, {b}]")
    if p.is_zero():
        raise ValueError("identically zero on interval")
    deg = p.degree
    # function-value tolerance for flagging a grazing (even-multiplicity) root
    span = max(1.0, abs(a), abs(b))
    fscale = sum(abs(c) * span ** i for i, c in enumerate(p.coeffs))
    feps = 1e-12 * max(1.0, fscale)
    if deg == 0:
        return []
    breakpoints = [a, b]
    if deg >= 2:
        breakpoints = sorted(set([a, b]) | set(real_roots(p.derivative(), interval, tol, dedup)))
    roots = []
    for t in breakpoints:
        if abs(p(t)) <= feps:
            roots.append(t)
    for lo, hi in zip(breakpoints, breakpoints[1:]):
        flo, fhi = p(lo), p(hi)
        if abs(flo) <= feps or abs(fhi) <= feps:
            continue
        if (flo < 0.0) != (fhi < 0.0):
            roots.append(_refine_root(p, lo, hi, tol))
    roots.sort()
    out: list[float] = []
    for r in roots:
        if not out or r - out[-1] > dedup:
            out.append(r)
    return out


@dataclass(frozen=True)
class Violation:
    """A state bound exceeded along a segment: which state, when, how much."""

    k: int
    t: float
    value: float


def segment_bound_check(x, u: float, T: float, M, eps: float = 1e-9) -> Optional[Violation]:
    """Check |xk(t)| <= Mk + eps along one constant-control segment.

    Evaluates each bounded state at the segment ends and at its interior
    stationary points (enough for polynomials); returns the first violation
    or None.
    """
    if T < 0.0:
        raise ValueError(f"segment duration must be >= 0, got {T}")
    n = len(x)
    for k in range(1, n + 1):
        bound = M[k]
        if bound is None:
            continue
        poly = state_polynomial(x, u, k)
        times = [0.0, T]
        if T > 0.0 and k >= 2:
            # stationary points of state k are the roots of state k-1
            deriv = state_polynomial(x, u, k - 1)
            if not deriv.is_zero():
                times.extend(t for t in real_roots(deriv, (0.0, T)) if 0.0 < t < T)
        times.sort()
        for t in times:
            v = poly(t)
            if abs(v) > bound + eps:
                return Violation(k, t, v)
    return None
