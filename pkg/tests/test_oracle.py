import math

import numpy as np
import pytest

from chainplan import planner
from chainplan.model import Problem
from chainplan.oracle import OracleError, double_integrator_tf, exhaustive_tf


class TestDoubleIntegrator:
    def test_symmetric_two_bang(self):
        assert double_integrator_tf((0.0, 0.5), (0.0, 0.0), 1.0, None) == \
            pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_cruise(self):
        assert double_integrator_tf((0.0, 2.0), (0.0, 0.0), 1.0, 1.0) == \
            pytest.approx(3.0, abs=1e-12)

    def test_zero_motion(self):
        assert double_integrator_tf((0.0, 0.0), (0.0, 0.0), 1.0, 1.0) == 0.0

    def test_speed_outside_bound_rejected(self):
        with pytest.raises(OracleError):
            double_integrator_tf((2.0, 0.0), (0.0, 0.0), 1.0, 1.0)

    def test_mirror_symmetric(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            x0 = (float(rng.uniform(-1, 1)), float(rng.uniform(-3, 3)))
            xf = (float(rng.uniform(-1, 1)), float(rng.uniform(-3, 3)))
            a = double_integrator_tf(x0, xf, 1.0, 1.0)
            b = double_integrator_tf(tuple(-v for v in x0),
                                     tuple(-v for v in xf), 1.0, 1.0)
            assert a == pytest.approx(b, abs=1e-12)


class TestExhaustive:
    def test_matches_plan_on_cruise_profile(self):
        prob = Problem(3, (1.0, -0.375, 4.0), (0.0, 0.0, 0.0),
                       (1.0, 1.0, 1.5, 4.0))
        res = exhaustive_tf(prob)
        traj = planner.plan(prob)
        assert abs(res.t_f - traj.t_f) <= 1e-6
        assert res.law == "0102010"
        assert res.bracket[0] <= res.t_f <= res.bracket[1]

    def test_cross_oracle_second_order(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            M = (1.0, 1.0, None)
            x0 = (float(rng.uniform(-1, 1)), float(rng.uniform(-2, 2)))
            xf = (float(rng.uniform(-1, 1)), float(rng.uniform(-2, 2)))
            prob = Problem(2, x0, xf, M)
            res = exhaustive_tf(prob)
            assert res.t_f == pytest.approx(
                double_integrator_tf(x0, xf, 1.0, 1.0), abs=1e-9)

    def test_order_above_three_rejected(self):
        prob = Problem(4, (0.0,) * 4, (0.1,) * 4, (1.0, 1.0, 1.5, 4.0, 20.0))
        with pytest.raises(OracleError):
            exhaustive_tf(prob)

    def test_dynamically_infeasible_raises(self):
        prob = Problem(3, (0.52, -0.17, 2.73), (0.37, -1.16, 3.61),
                       (1.0, 1.0, 1.5, 4.0))
        with pytest.raises(OracleError):
            exhaustive_tf(prob)
