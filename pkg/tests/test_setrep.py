from __future__ import annotations

import pytest

import atomloop as al
from atomloop.setrep import ParseError

from conftest import brute_headers


W = al.Wildcard


def mr(*pairs, widths=None):
    widths = widths or (3,) * len(pairs)
    return al.MultiRange(widths, pairs)


GEO_W4 = al.Geometry.wildcard(4)
GEO_M33 = al.Geometry.multirange((3, 3))


class TestParsing:
    def test_wildcard_round_trip(self):
        s = al.parse_ruleset("110*", GEO_W4)
        assert s == W("110*")
        assert al.format_ruleset(s) == "110*"
        assert al.parse_ruleset(al.format_ruleset(s), GEO_W4) == s

    def test_multirange_round_trip(self):
        s = al.parse_ruleset("[[0,4],[1,5]]", GEO_M33)
        assert s == mr((0, 4), (1, 5))
        assert al.format_ruleset(s) == "[[0,4],[1,5]]"
        assert al.parse_ruleset(al.format_ruleset(s), GEO_M33) == s

    def test_bad_symbol_reports_position(self):
        with pytest.raises(ParseError, match="position 1"):
            al.parse_ruleset("12*", al.Geometry.wildcard(3))

    def test_length_mismatch(self):
        with pytest.raises(ParseError):
            al.parse_ruleset("110*", al.Geometry.wildcard(5))

    @pytest.mark.parametrize(
        "text",
        ["[[0,4]]", "[[0,4],[1,5],[0,0]]", "[[4,0],[1,5]]", "[[0,9],[1,5]]", "not json", "[[0,4],[1]]"],
    )
    def test_bad_multirange(self, text):
        with pytest.raises(ParseError):
            al.parse_ruleset(text, GEO_M33)

    def test_empty_wildcard_rejected(self):
        with pytest.raises(ParseError):
            W("")


class TestIntersect:
    def test_wildcard_meet(self):
        assert al.intersect(W("10**"), W("*0*1")) == W("10*1")

    def test_wildcard_conflict_is_empty(self):
        assert al.intersect(W("110*"), W("0***")) is None

    def test_multirange_meet(self):
        a = mr((0, 4), (1, 5))
        b = mr((2, 6), (0, 3))
        assert al.intersect(a, b) == mr((2, 4), (1, 3))

    def test_multirange_empty(self):
        assert al.intersect(mr((0, 1)), mr((3, 4))) is None

    def test_idempotent_and_commutative(self):
        a, b = W("1*0*"), W("**01")
        assert al.intersect(a, a) == a
        assert al.intersect(a, b) == al.intersect(b, a)

    def test_associative(self):
        a, b, c = W("1***"), W("*0**"), W("**1*")
        ab_c = al.intersect(al.intersect(a, b), c)
        a_bc = al.intersect(a, al.intersect(b, c))
        assert ab_c == a_bc

    def test_mixed_kind_rejected(self):
        with pytest.raises(ValueError):
            al.intersect(W("10"), mr((0, 1)))

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            al.intersect(W("10"), W("100"))
        with pytest.raises(ValueError):
            al.intersect(mr((0, 1)), mr((0, 1), (0, 1)))


class TestCardinality:
    @pytest.mark.parametrize(
        "s,expect",
        [
            (W("10*1"), 2),
            (W("****"), 16),
            (mr((2, 4), (1, 3)), 9),
            (mr((3, 3)), 1),
        ],
    )
    def test_examples(self, s, expect):
        assert al.cardinality(s) == expect

    def test_huge_lengths_do_not_overflow(self):
        s = W("*" * 300)
        assert al.cardinality(s) == 1 << 300

    def test_matches_brute_force(self):
        for letters in ["10*1*0", "******", "000000", "*1*1*1"]:
            s = W(letters)
            assert al.cardinality(s) == len(brute_headers(s))
        s = mr((1, 5), (2, 7), widths=(3, 3))
        assert al.cardinality(s) == len(brute_headers(s))


class TestSubset:
    def test_examples(self):
        assert al.is_subset(W("110*"), W("1***"))
        assert not al.is_subset(W("1***"), W("110*"))
        assert al.is_subset(mr((2, 4)), mr((0, 4)))

    def test_equals_cardinality_identity(self):
        pairs = [
            (W("110*"), W("1***")),
            (W("1***"), W("110*")),
            (W("10*1"), W("*0**")),
            (mr((2, 4), (1, 3)), mr((0, 4), (1, 5))),
            (mr((0, 4), (1, 5)), mr((2, 4), (1, 3))),
        ]
        for s, t in pairs:
            meet = al.intersect(s, t)
            identity = meet is not None and al.cardinality(meet) == al.cardinality(s)
            assert al.is_subset(s, t) == identity

    def test_meet_cardinality_bound(self):
        a, b = W("1*0*"), W("1**1")
        meet = al.intersect(a, b)
        assert al.cardinality(meet) <= min(al.cardinality(a), al.cardinality(b))


class TestCanonicalKey:
    def test_symbol_order(self):
        assert al.canonical_key(W("0***")) < al.canonical_key(W("10**"))
        assert al.canonical_key(W("110*")) == al.canonical_key(W("110*"))
        assert al.canonical_key(W("1***")) < al.canonical_key(W("*000"))

    def test_multirange_lexicographic(self):
        assert al.canonical_key(mr((0, 4), (1, 5))) < al.canonical_key(mr((0, 4), (2, 2)))

    def test_key_equality_is_set_equality(self):
        seen = {}
        for letters in ["0*", "*0", "00", "01", "10", "11", "**", "1*", "*1"]:
            s = W(letters)
            key = al.canonical_key(s)
            hs = frozenset(brute_headers(s))
            for other_key, other_hs in seen.items():
                assert (key == other_key) == (hs == other_hs)
            seen[key] = hs


class TestHeaders:
    def test_full_set(self):
        assert al.cardinality(al.full_set(GEO_W4)) == 16
        assert al.cardinality(al.full_set(GEO_M33)) == 64

    def test_iter_headers_sorted_and_complete(self):
        for s in [W("1*0*"), W("****"), mr((1, 3), (2, 6)), mr((5, 5), (0, 7))]:
            got = list(al.iter_headers(s))
            assert got == sorted(got)
            assert set(got) == brute_headers(s)

    def test_contains_header(self):
        for s in [W("10*1"), mr((1, 3), (2, 6))]:
            members = brute_headers(s)
            space = 1 << (s.length if isinstance(s, al.Wildcard) else sum(s.widths))
            for h in range(space):
                assert al.contains_header(s, h) == (h in members)

    def test_format_header(self):
        assert al.format_header(GEO_W4, 0) == "0000"
        assert al.format_header(GEO_W4, 13) == "1101"
        assert al.format_header(GEO_M33, 9) == "[1,1]"


class TestGeometry:
    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            al.Geometry.wildcard(0)
        with pytest.raises(ValueError):
            al.Geometry.multirange(())
        with pytest.raises(ValueError):
            al.Geometry.multirange((3, 0))

    def test_check_shape(self):
        al.setrep.check_shape(GEO_W4, W("10**"))
        with pytest.raises(ValueError):
            al.setrep.check_shape(GEO_W4, W("10*"))
        with pytest.raises(ValueError):
            al.setrep.check_shape(GEO_M33, mr((0, 1)))
