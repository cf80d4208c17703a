#!/usr/bin/env python3
"""Benchmark the compiled extension kernels against the pure Python fallback.

Three tiers:
  micro   - raw kernel calls (propagate, second-order core)
  solve   - full third-order planning, which hammers the kernels through
            manifold interception
  batch   - a fourth-order plan (deep recursion)

Run after building the extension (pip install -e .); the pure numbers come
from re-importing the planner stack with CHAINPLAN_PURE=1 in a subprocess.
"""

import json
import os
import subprocess
import sys

WORK = r"""
import time, json
import chainplan.kinematics as K
from chainplan.model import Problem
from chainplan import planner

out = {"backend": K.BACKEND}

x = (0.3, -0.2, 1.1, 0.7)
t0 = time.perf_counter()
N = 200_000
for _ in range(N):
    K.propagate(x, -1.0, 0.37)
out["propagate_us"] = (time.perf_counter() - t0) / N * 1e6

t0 = time.perf_counter()
N = 200_000
for _ in range(N):
    K.plan2(0.4, -1.2, -0.3, 2.0, 1.0, 1.0, 1e-9)
out["plan2_us"] = (time.perf_counter() - t0) / N * 1e6

p3 = Problem(3, (1.0, -0.375, 4.0), (0.0, 0.0, 0.0), (1.0, 1.0, 1.5, 4.0))
t0 = time.perf_counter()
N = 20
for _ in range(N):
    planner.plan(p3)
out["plan3_ms"] = (time.perf_counter() - t0) / N * 1e3

p4 = Problem(4, (0.75, -0.375, 2.0, 9.0), (0.25, 0.5, -2.0, -5.0),
             (1.0, 1.0, 1.5, 4.0, 20.0))
t0 = time.perf_counter()
N = 3
for _ in range(N):
    planner.plan(p4)
out["plan4_ms"] = (time.perf_counter() - t0) / N * 1e3

print(json.dumps(out))
"""


def run(pure: bool) -> dict:
    env = dict(os.environ)
    if pure:
        env["CHAINPLAN_PURE"] = "1"
    else:
        env.pop("CHAINPLAN_PURE", None)
    res = subprocess.run([sys.executable, "-c", WORK], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main() -> int:
    fast = run(pure=False)
    slow = run(pure=True)
    if fast["backend"] == slow["backend"]:
        print("compiled extension unavailable; both runs used the fallback")
    rows = [
        ("propagate (n=4)", "propagate_us", "us"),
        ("order-2 core", "plan2_us", "us"),
        ("order-3 plan", "plan3_ms", "ms"),
        ("order-4 plan", "plan4_ms", "ms"),
    ]
    print(f"{'kernel':<18} {fast['backend']:>12} {slow['backend']:>12} {'speedup':>9}")
    for label, key, unit in rows:
        ratio = slow[key] / fast[key]
        print(f"{label:<18} {fast[key]:>9.2f} {unit} {slow[key]:>9.2f} {unit} "
              f"{ratio:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
