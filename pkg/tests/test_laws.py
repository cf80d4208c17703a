import pytest
from hypothesis import given, settings, strategies as st

from chainplan import laws
from chainplan.model import Asl, Behavior, asl_parse, asl_to_string

AF2_EXPECTED = {"00", "010"}

AF3_EXPECTED = {
    "000", "0010", "0100", "01010",
    "00200", "002010", "010200", "0102010",
    "00(3,2)000", "00(3,2)0010", "00(3,2)0100", "00(3,2)01010",
    "00(3,2)00200", "00(3,2)002010", "00(3,2)010200", "00(3,2)0102010",
    "010(3,2)000", "010(3,2)0010", "010(3,2)0100", "010(3,2)01010",
    "010(3,2)00200", "010(3,2)002010", "010(3,2)010200", "010(3,2)0102010",
}


class TestDimension:
    @pytest.mark.parametrize("text,dim", [
        ("0", 1),
        ("10", 1),
        ("2010", 1),
        ("00", 2),
        ("1010", 2),
        ("02010", 2),
        ("000", 3),
        ("0010", 3),
        ("0102010", 3),
        ("010(4,2)0102010(3)0102010", 4),
        ("0102010(3)0100", 4),
    ])
    def test_catalog_values(self, text, dim):
        assert laws.dimension(asl_parse(text)) == dim

    def test_signed_same_as_unsigned(self):
        law = asl_parse("0102010")
        assert laws.dimension(laws.assign_signs(law, 1)) == 3


class TestAssignSigns:
    def test_odd_successor_copies(self):
        assert asl_to_string(laws.assign_signs(asl_parse("010"), 1)) == "-0 -1 +0"

    def test_adjacent_zeros_alternate(self):
        assert asl_to_string(laws.assign_signs(asl_parse("00"), 1)) == "-0 +0"

    def test_even_successor_flips(self):
        assert asl_to_string(laws.assign_signs(asl_parse("020"), -1)) == "-0 +2 -0"

    def test_marker_bridges_same_sign(self):
        out = laws.assign_signs(asl_parse("00(4,2)000"), -1)
        assert asl_to_string(out) == "+0 -0 (-4,2) -0 +0 -0"

    def test_group_last_member_opposes_follower(self):
        out = laws.assign_signs(asl_parse("0102010(3)0100"), 1)
        assert asl_to_string(out) == "-0 -1 +0 -2 +0 +1 -0 ( -3 ) +0 +1 -0 +0"

    @given(st.integers(min_value=1, max_value=3), st.data())
    def test_mirror(self, order, data):
        catalog = laws.enumerate_af(order)
        law = catalog[data.draw(st.integers(0, len(catalog) - 1))]
        plus = laws.assign_signs(law, 1)
        minus = laws.assign_signs(law, -1)
        assert minus == plus.negated()

    @given(st.integers(min_value=1, max_value=4), st.data())
    @settings(deadline=None)
    def test_assigned_laws_validate(self, order, data):
        catalog = laws.enumerate_af(order)
        law = catalog[data.draw(st.integers(0, len(catalog) - 1))]
        sign = data.draw(st.sampled_from((1, -1)))
        assert laws.validate(laws.assign_signs(law, sign)) == []


class TestValidate:
    def test_clean_law(self):
        assert laws.validate(asl_parse("-0 -1 +0")) == []

    def test_group_parity_violation(self):
        bad = Asl((Behavior(0), laws.VirtualGroup((Behavior(0), Behavior(1))),
                   Behavior(0)))
        rules = {v.rule for v in laws.validate(bad)}
        assert "group-even-evens" in rules

    def test_group_tail_must_ride(self):
        bad = Asl((Behavior(0), laws.VirtualGroup((Behavior(1), Behavior(0))),
                   Behavior(0)))
        rules = {v.rule for v in laws.validate(bad)}
        assert "group-tail-max" in rules

    def test_group_needs_context(self):
        bad = Asl((laws.VirtualGroup((Behavior(2),)), Behavior(0)))
        rules = {v.rule for v in laws.validate(bad)}
        assert "group-context" in rules

    def test_marker_sign_mismatch_flagged(self):
        raw = asl_parse("+0 (+4,2) +0 -0")
        rules = {v.rule for v in laws.validate(raw)}
        assert rules == set()
        flipped = asl_parse("+0 (-4,2) +0 -0")
        rules = {v.rule for v in laws.validate(flipped)}
        assert "marker-flank-sign" in rules

    def test_marker_degree_strict(self):
        rules = {v.rule for v in laws.validate(asl_parse("0(4,4)0"))}
        assert "marker-degree" in rules


class TestSimplify:
    def test_zero_dimension_suffix_dropped(self):
        out = laws.simplify(asl_parse("0102(0103)0102010"))
        assert asl_to_string(out) == "01020102010"

    def test_surviving_group_untouched(self):
        text = "0102(3)0102010"
        assert asl_to_string(laws.simplify(asl_parse(text))) == text

    def test_no_groups_identity(self):
        law = asl_parse("0102010")
        assert laws.simplify(law) == law

    def test_idempotent(self):
        once = laws.simplify(asl_parse("0102(0103)0102010"))
        assert laws.simplify(once) == once


class TestEnumerate:
    def test_order_1(self):
        assert {laws.canonical(a) for a in laws.enumerate_af(1)} == {"0"}

    def test_order_2(self):
        assert {laws.canonical(a) for a in laws.enumerate_af(2)} == AF2_EXPECTED

    def test_order_3_exact(self):
        got = {laws.canonical(a) for a in laws.enumerate_af(3)}
        assert got == AF3_EXPECTED

    def test_order_3_count(self):
        assert len(laws.enumerate_af(3)) == 24

    def test_order_4_contains_known_catalog_entries(self):
        got = {laws.canonical(a) for a in laws.enumerate_af(4)}
        assert "0000" in got
        assert "010(4,2)0102010(3)0102010" in got

    def test_enumerated_laws_validate_and_have_full_dimension(self):
        for n in (1, 2, 3, 4):
            for law in laws.enumerate_af(n):
                assert laws.dimension(law) == n
                assert laws.validate(law) == []

    def test_cap_exceeded(self):
        with pytest.raises(laws.LawEnumerationError):
            laws.enumerate_af(5, cap=100)

    def test_memoized(self):
        assert laws.enumerate_af(3) is laws.enumerate_af(3)

    def test_canonical_round_trip(self):
        for law in laws.enumerate_af(3):
            assert asl_parse(laws.canonical(law)) == law
