"""Slow, independent ground-truth solvers used by tests and cross-checks.

Deliberately shares only the kinematics primitives (and the law catalog,
which the exhaustive search enumerates over) with the planning path: the
closed forms are derived separately and the stage systems are re-assembled
here from scratch and solved with a library root finder.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import root

from . import kinematics, laws
from .model import Asl, Behavior, Problem, TangentMarker, VirtualGroup


class OracleError(RuntimeError):
    pass


def double_integrator_tf(x0, xf, M0: float, M1: Optional[float] = None) -> float:
    """Minimum time for the two-state problem by the classical peak-speed
    construction: one up-down (or down-up) speed profile, clipped to the
    speed bound with a cruise when the peak exceeds it."""
    v0, p0 = float(x0[0]), float(x0[1])
    vf, pf = float(xf[0]), float(xf[1])
    if M1 is not None and (abs(v0) > M1 or abs(vf) > M1):
        raise OracleError("boundary speed outside its bound")
    dp = pf - p0
    best: Optional[float] = None
    for up in (True, False):
        sign = 1.0 if up else -1.0
        rad = sign * M0 * dp + 0.5 * (v0 * v0 + vf * vf)
        if rad < 0.0:
            continue
        w = sign * sqrt(rad)
        # the peak (trough) must dominate both boundary speeds on its side
        if up and w < max(v0, vf) - 1e-15:
            continue
        if not up and w > min(v0, vf) + 1e-15:
            continue
        if M1 is None or abs(w) <= M1:
            tf = (2.0 * w - v0 - vf) / M0 if up else (v0 + vf - 2.0 * w) / M0
        else:
            vc = sign * M1
            cruise = (dp - (vc * vc - v0 * v0) / (2.0 * M0 * sign)
                      - (vc * vc - vf * vf) / (2.0 * M0 * sign)) / vc
            if cruise < -1e-12:
                continue
            tf = abs(vc - v0) / M0 + abs(vc - vf) / M0 + max(0.0, cruise)
        if tf >= -1e-12 and (best is None or tf < best):
            best = max(0.0, tf)
    if best is None:
        raise OracleError("no speed profile fits the boundary data")
    return best


@dataclass(frozen=True)
class OracleResult:
    t_f: float
    law: str
    bracket: tuple[float, float]


def _law_residuals(elements, x0, xf, M, n):
    """Residual closure for a signed plain/marker law, built directly on the
    propagation primitive."""
    M0 = M[0]

    def fun(times):
        res = []
        cur = tuple(x0)
        ti = 0
        for e in elements:
            if isinstance(e, Behavior):
                u = e.sign * M0 if e.value == 0 else 0.0
                cur = kinematics.propagate(cur, u, times[ti])
                ti += 1
                if e.value != 0:
                    res.append(cur[e.value - 1] - e.sign * M[e.value])
                    res.extend(cur[j] for j in range(e.value - 1))
            else:  # TangentMarker
                k = e.behavior.value
                res.append(cur[k - 1] - e.behavior.sign * M[k])
                res.extend(cur[k - 1 - j] for j in range(1, e.degree))
        res.extend(cur[k] - xf[k] for k in range(n))
        return np.array(res)

    return fun


def exhaustive_tf(problem: Problem, law_set: Optional[Sequence[Asl]] = None,
                  seeds: int = 32, tol: float = 1e-10) -> OracleResult:
    """Minimum time over every catalog law by multi-start root finding.

    Each unsigned law is tried with both terminal signs; converged,
    nonnegative, bound-respecting solutions compete on total time.  Only
    orders up to 3 are supported (the catalog is exact there).
    """
    n = problem.n
    if n > 3:
        raise OracleError("exhaustive search supports orders 1..3")
    x0, xf, M = problem.x0, problem.xf, problem.M
    candidates = law_set if law_set is not None else laws.enumerate_af(n)
    rng = np.random.default_rng(12345)
    tau = 1.0
    for k in range(1, n + 1):
        Mk = M[k - 1]
        if Mk is None:
            continue
        delta = abs(xf[k - 1] - x0[k - 1])
        if delta > 0.0:
            tau = max(tau, (2.0 * delta / Mk) ** (1.0 / k))
    best: Optional[tuple[float, str]] = None
    for law in candidates:
        if any(isinstance(e, VirtualGroup) for e in law.elements):
            raise OracleError("virtual groups do not occur at orders 1..3")
        for last in (1, -1):
            signed = laws.assign_signs(law, last)
            stage_count = sum(1 for e in signed.elements if isinstance(e, Behavior))
            riding = sum(e.value for e in signed.elements if isinstance(e, Behavior))
            marker = sum(e.degree for e in signed.elements
                         if isinstance(e, TangentMarker))
            if stage_count != riding + marker + n:
                continue
            if any(isinstance(e, Behavior) and e.value > 0 and M[e.value] is None
                   for e in signed.elements):
                continue
            fun = _law_residuals(signed.elements, x0, xf, M, n)
            hits = 0
            for trial in range(seeds):
                if trial == 0:
                    guess = np.full(stage_count, tau / stage_count)
                else:
                    # swing solutions sit well above the boundary-difference
                    # scale; climb a geometric ladder while restarting
                    scale = tau * (2.0 ** ((trial - 1) % 4))
                    guess = scale * rng.random(stage_count)
                sol = root(fun, guess, method="hybr", tol=1e-12,
                           options={"maxfev": 40 * (stage_count + 1)})
                if not sol.success and float(np.max(np.abs(sol.fun))) > tol:
                    if trial + 1 >= 8 and hits == 0:
                        break  # law looks unsolvable for this data
                    continue
                times = sol.x
                if np.any(times < -1e-9):
                    continue
                times = np.clip(times, 0.0, None)
                if float(np.max(np.abs(fun(times)))) > tol:
                    continue
                if not _feasible(signed.elements, x0, M, times):
                    continue
                tf = float(np.sum(times))
                hits += 1
                if best is None or tf < best[0] - 1e-15:
                    best = (tf, laws.canonical(law))
                if hits >= 3:
                    break
    if best is None:
        raise OracleError("no catalog law admits a feasible solution")
    return OracleResult(best[0], best[1], (best[0] - tol, best[0] + tol))


def _feasible(elements, x0, M, times) -> bool:
    cur = tuple(x0)
    ti = 0
    M0 = M[0]
    for e in elements:
        if not isinstance(e, Behavior):
            continue
        u = e.sign * M0 if e.value == 0 else 0.0
        if kinematics.segment_bound_check(cur, u, float(times[ti]), M, 1e-9):
            return False
        cur = kinematics.propagate(cur, u, float(times[ti]))
        ti += 1
    return True
