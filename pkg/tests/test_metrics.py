import pytest
from hypothesis import given, strategies as st

from chainplan import planner
from chainplan.metrics import (
    SampledControl,
    em_mse,
    is_success,
    sample_control,
    terminal_error,
    tv_total_variation,
)
from chainplan.model import Asl, Problem, Segment, Trajectory


class TestTerminalError:
    def test_exact_hit(self):
        assert terminal_error((0.0, 0.0), (0.0, 0.0), (1.0, 1.0, 1.0)) == 0.0

    def test_single_component(self):
        assert terminal_error((0.1,), (0.0,), (1.0, 1.0)) == pytest.approx(0.1)

    def test_pythagorean(self):
        assert terminal_error((0.3, 0.4), (0.0, 0.0), (1.0, 1.0, 1.0)) == \
            pytest.approx(0.5)

    def test_unbounded_scale(self):
        # unbounded components normalize by max(1, |target|)
        assert terminal_error((0.0, 8.0), (0.0, 10.0), (1.0, 1.0, None)) == \
            pytest.approx(0.2)


class TestEmMse:
    def test_saturated_control_is_zero(self):
        assert em_mse([(1.0, 2.0), (-1.0, 1.0)], 1.0) == 0.0

    def test_half_bound_is_one(self):
        assert em_mse([(0.5, 3.0)], 1.0) == pytest.approx(1.0)

    def test_zero_control_is_zero(self):
        assert em_mse([(0.0, 5.0)], 1.0) == 0.0

    def test_zero_horizon(self):
        assert em_mse([], 1.0) == 0.0

    def test_sampled_constant_half(self):
        sc = SampledControl(4.0, (0.5,) * 11, 1.0)
        assert em_mse(sc) == pytest.approx(1.0)

    def test_piecewise_matches_dense_sampling(self):
        pieces = [(1.0, 0.7), (0.3, 1.1), (-1.0, 0.4), (0.0, 0.8)]
        exact = em_mse(pieces, 1.0)
        tf = sum(t for _, t in pieces)
        samples = []
        for i in range(100_001):
            t = tf * i / 100_000
            acc = 0.0
            u = pieces[-1][0]
            for uu, dur in pieces:
                if t <= acc + dur:
                    u = uu
                    break
                acc += dur
            samples.append(u)
        approx = em_mse(SampledControl(tf, tuple(samples), 1.0))
        assert approx == pytest.approx(exact, abs=1e-4)

    @given(st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=2,
                    max_size=30))
    def test_bounded_between_zero_and_one(self, us):
        val = em_mse(SampledControl(1.0, tuple(min(max(u, -1), 1) for u in us),
                                    1.0))
        assert 0.0 <= val <= 1.0 + 1e-12


class TestTotalVariation:
    def test_constant_is_zero(self):
        assert tv_total_variation(SampledControl(1.0, (0.7, 0.7, 0.7), 1.0)) == 0.0

    def test_alternating_is_one(self):
        sc = SampledControl(1.0, (1.0, -1.0, 1.0, -1.0, 1.0), 1.0)
        assert tv_total_variation(sc) == pytest.approx(1.0)

    def test_single_step(self):
        sc = SampledControl(1.0, (-1.0, 1.0, 1.0), 1.0)
        assert tv_total_variation(sc) == pytest.approx(0.5)

    @given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=2,
                    max_size=30))
    def test_bounded(self, us):
        val = tv_total_variation(SampledControl(1.0, tuple(us), 1.0))
        assert 0.0 <= val <= 1.0 + 1e-12


class TestIsSuccess:
    def test_planned_trajectory_succeeds(self):
        prob = Problem(3, (1.0, -0.375, 4.0), (0.0, 0.0, 0.0),
                       (1.0, 1.0, 1.5, 4.0))
        traj = planner.plan(prob)
        assert is_success(traj, prob)

    def test_terminal_miss_fails(self):
        prob = Problem(1, (0.0,), (1.0,), (1.0, None))
        short = Trajectory((Segment(1.0, 0.5, (0.0,)),), 0.5, Asl(()), prob)
        assert not is_success(short, prob)

    def test_bound_violation_fails(self):
        prob = Problem(2, (1.0, 0.0), (-1.0, 0.0), (1.0, 1.0, 0.4))
        bad = Trajectory((Segment(-1.0, 2.0, (1.0, 0.0)),), 2.0, Asl(()), prob)
        assert not is_success(bad, prob)


class TestPlannerControls:
    def test_em_exactly_zero_on_planned(self):
        import numpy as np
        from chainplan import sampling
        rng = np.random.default_rng(33)
        done = 0
        while done < 5:
            n = int(rng.integers(2, 5))
            prob = sampling.random_problem(n, sampling.default_bounds(n), rng, 0.8)
            try:
                traj = planner.plan(prob)
            except planner.PlanError:
                continue
            assert em_mse(traj) == 0.0
            done += 1

    def test_sample_control_grid(self):
        prob = Problem(2, (0.0, 2.0), (0.0, 0.0), (1.0, 1.0, None))
        traj = planner.plan(prob)
        sc = sample_control(traj, 6)
        assert len(sc.samples) == 7
        assert sc.samples[0] == -1.0
        assert sc.samples[-1] == 1.0
        assert sc.t_f == traj.t_f
