import pytest
from hypothesis import given, settings, strategies as st

from chainplan import _kernels_py
from chainplan import kinematics
from chainplan.kinematics import (
    Polynomial,
    Violation,
    propagate,
    real_roots,
    segment_bound_check,
    state_polynomial,
)

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
short = st.floats(min_value=0.0, max_value=5.0, allow_nan=False)


class TestPropagate:
    def test_unit_input_from_rest(self):
        assert propagate((0.0, 0.0, 0.0), 1.0, 1.0) == \
            (1.0, 0.5, pytest.approx(1.0 / 6.0, abs=1e-15))

    def test_zero_time_identity(self):
        x = (0.3, -0.2, 7.0)
        assert propagate(x, -1.0, 0.0) == x

    def test_semigroup_example(self):
        x = (0.3, -0.2)
        once = propagate(x, -1.0, 0.5)
        twice = propagate(propagate(x, -1.0, 0.2), -1.0, 0.3)
        assert twice == pytest.approx(once, rel=1e-12)

    @given(st.lists(finite, min_size=1, max_size=6), finite, short, short)
    def test_semigroup_property(self, x, u, s, t):
        x = tuple(x)
        joint = propagate(x, u, s + t)
        split = propagate(propagate(x, u, s), u, t)
        for a, b in zip(split, joint):
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


class TestStatePolynomial:
    def test_rest_to_motion(self):
        p = state_polynomial((0.0, 0.0), 1.0, 2)
        assert p.coeffs == (0.0, 0.0, 0.5)

    def test_constant_velocity(self):
        p = state_polynomial((1.0, 0.0), 0.0, 2)
        assert p.coeffs == (0.0, 1.0, 0.0)

    def test_coefficients(self):
        p = state_polynomial((1.0, 2.0, 3.0), -1.0, 3)
        assert p.coeffs == (3.0, 2.0, 0.5, pytest.approx(-1.0 / 6.0))

    @given(st.lists(finite, min_size=2, max_size=5), finite,
           st.data())
    def test_derivative_matches_lower_state(self, x, u, data):
        x = tuple(x)
        k = data.draw(st.integers(min_value=2, max_value=len(x)))
        upper = state_polynomial(x, u, k).derivative()
        lower = state_polynomial(x, u, k - 1)
        for a, b in zip(upper.coeffs, lower.coeffs):
            assert a == pytest.approx(b, rel=1e-12, abs=1e-15)

    @given(st.lists(finite, min_size=1, max_size=5), finite, short, st.data())
    def test_evaluation_matches_propagate(self, x, u, t, data):
        x = tuple(x)
        k = data.draw(st.integers(min_value=1, max_value=len(x)))
        assert state_polynomial(x, u, k)(t) == \
            pytest.approx(propagate(x, u, t)[k - 1], rel=1e-12, abs=1e-12)


class TestRealRoots:
    def test_parabola(self):
        assert real_roots(Polynomial((-1.0, 0.0, 1.0)), (0.0, 2.0)) == \
            [pytest.approx(1.0, abs=1e-12)]

    def test_cubic(self):
        roots = real_roots(Polynomial((0.0, -1.0, 0.0, 1.0)), (-2.0, 2.0))
        assert roots == pytest.approx([-1.0, 0.0, 1.0], abs=1e-12)

    def test_double_root_reported_once(self):
        roots = real_roots(Polynomial((0.09, -0.6, 1.0)), (0.0, 1.0))
        assert roots == [pytest.approx(0.3, abs=1e-10)]

    def test_zero_polynomial_raises(self):
        with pytest.raises(ValueError, match="identically zero"):
            real_roots(Polynomial((0.0, 0.0)), (0.0, 1.0))

    def test_constant_has_no_roots(self):
        assert real_roots(Polynomial((2.0,)), (0.0, 1.0)) == []

    def test_endpoint_roots(self):
        roots = real_roots(Polynomial((0.0, 1.0)), (0.0, 1.0))
        assert roots == [0.0]


class TestSegmentBoundCheck:
    def test_peak_inside_bound(self):
        assert segment_bound_check((1.0, 0.0), -1.0, 2.0, (1.0, 1.0, 0.6)) is None

    def test_peak_violation(self):
        v = segment_bound_check((1.0, 0.0), -1.0, 2.0, (1.0, 1.0, 0.4))
        assert v == Violation(2, pytest.approx(1.0, abs=1e-9),
                              pytest.approx(0.5, abs=1e-12))

    def test_zero_duration(self):
        assert segment_bound_check((0.5, 0.2), 1.0, 0.0, (1.0, 1.0, 1.0)) is None

    def test_unbounded_states_skipped(self):
        assert segment_bound_check((1.0, 0.0), 1.0, 50.0, (1.0, None, None)) is None

    @given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=2,
                    max_size=4),
           st.sampled_from((-1.0, 0.0, 1.0)),
           st.floats(min_value=0.01, max_value=4.0))
    @settings(max_examples=40, deadline=None)
    def test_matches_dense_sampling(self, x, u, T):
        x = tuple(x)
        n = len(x)
        M = (1.0,) + (2.0,) * n
        verdict = segment_bound_check(x, u, T, M, 1e-9)
        dense_bad = None
        for i in range(10_001):
            t = T * i / 10_000
            s = propagate(x, u, t)
            for k in range(1, n + 1):
                if abs(s[k - 1]) > 2.0 + 1e-7:
                    dense_bad = (k, t)
                    break
            if dense_bad:
                break
        assert (verdict is None) == (dense_bad is None)


class TestKernelParity:
    """The compiled extension and the pure fallback must agree exactly."""

    compiled = kinematics.BACKEND == "compiled"

    @pytest.mark.skipif(not compiled, reason="compiled kernels unavailable")
    @given(st.lists(finite, min_size=1, max_size=6), finite, short)
    def test_propagate(self, x, u, t):
        x = tuple(x)
        a = kinematics.propagate(x, u, t)
        b = _kernels_py.propagate(x, u, t)
        assert a == pytest.approx(b, rel=1e-15, abs=1e-15)

    @pytest.mark.skipif(not compiled, reason="compiled kernels unavailable")
    @given(st.lists(finite, min_size=1, max_size=6), finite, short)
    def test_integral_top(self, x, u, t):
        x = tuple(x)
        a = kinematics.integral_top(x, u, t)
        b = _kernels_py.integral_top(x, u, t)
        assert a == pytest.approx(b, rel=1e-14, abs=1e-14)

    @pytest.mark.skipif(not compiled, reason="compiled kernels unavailable")
    @given(finite, finite, finite, finite,
           st.floats(min_value=0.1, max_value=4.0),
           st.sampled_from((-1.0, 0.5, 1.0, 2.0)))
    @settings(max_examples=200)
    def test_plan2(self, v0, p0, vf, pf, M0, M1):
        if M1 > 0:
            v0 = max(-M1, min(M1, v0))
            vf = max(-M1, min(M1, vf))
        a = kinematics.plan2(v0, p0, vf, pf, M0, M1, 1e-9)
        b = _kernels_py.plan2(v0, p0, vf, pf, M0, M1, 1e-9)
        assert len(a) == len(b)
        for (ua, ta), (ub, tb) in zip(a, b):
            assert ua == ub
            assert ta == pytest.approx(tb, rel=1e-15, abs=1e-15)
