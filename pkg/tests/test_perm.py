import itertools

import pytest
from hypothesis import given, strategies as st

from zigzag_groups.perm import (
    Perm,
    PermError,
    compose,
    inverse,
    inverse_index,
    is_symmetric_set,
    parse_cycles,
)


def perms(max_degree=8):
    return st.integers(1, max_degree).flatmap(
        lambda n: st.permutations(range(n)).map(Perm)
    )


def same_degree_triples():
    return st.integers(1, 8).flatmap(
        lambda n: st.tuples(*[st.permutations(range(n)).map(Perm)] * 3)
    )


class TestParse:
    def test_example_involution(self):
        p = parse_cycles("(1 4)(2 3)", 4)
        assert [p(i) for i in (1, 2, 3, 4)] == [4, 3, 2, 1]

    @pytest.mark.parametrize("text", ["", "()", "  ", "( )"])
    def test_identity(self, text):
        assert parse_cycles(text, 5) == Perm.identity(5)

    def test_overlapping_cycles_rejected(self):
        with pytest.raises(PermError, match="repeated"):
            parse_cycles("(1 2)(2 3)", 3)

    def test_out_of_range(self):
        with pytest.raises(PermError, match="out of range"):
            parse_cycles("(1 5)", 4)

    def test_commas_and_spacing(self):
        assert parse_cycles(" ( 1, 2 ,3 ) ", 3) == parse_cycles("(1 2 3)", 3)

    @pytest.mark.parametrize("text", ["(1 2", "1 2)", "(1 x)", "(1 2) junk"])
    def test_garbage(self, text):
        with pytest.raises(PermError):
            parse_cycles(text, 4)

    def test_round_trip_all_small(self):
        for n in range(1, 6):
            for imgs in itertools.permutations(range(n)):
                p = Perm(imgs)
                assert parse_cycles(p.cycles_str(), n) == p

    @given(perms(8))
    def test_round_trip_up_to_8(self, p):
        assert parse_cycles(str(p), p.degree) == p


class TestCompose:
    def test_example_one_root(self):
        # tau gamma pi with pi = tau = (1 2), gamma = (2 3)
        pi = parse_cycles("(1 2)", 4)
        gamma = parse_cycles("(2 3)", 4)
        assert compose(pi, compose(gamma, pi)) == parse_cycles("(1 3)", 4)

    def test_identity_right(self):
        p = parse_cycles("(1 3 2)(4 5)", 5)
        assert compose(p, Perm.identity(5)) == p

    def test_three_cycle_squared(self):
        c = parse_cycles("(1 2 3)", 3)
        assert compose(c, c) == parse_cycles("(1 3 2)", 3)

    def test_right_to_left(self):
        a = parse_cycles("(1 2)", 3)
        b = parse_cycles("(2 3)", 3)
        assert compose(a, b)(2) == a(b(2)) == 3

    def test_degree_mismatch(self):
        with pytest.raises(PermError):
            compose(Perm.identity(2), Perm.identity(3))

    @given(same_degree_triples())
    def test_associative(self, abc):
        a, b, c = abc
        assert compose(a, compose(b, c)) == compose(compose(a, b), c)


class TestInverse:
    def test_cycle(self):
        assert inverse(parse_cycles("(1 2 3)", 3)) == parse_cycles("(1 3 2)", 3)

    def test_involution(self):
        p = parse_cycles("(1 4)(2 3)", 4)
        assert inverse(p) == p

    def test_identity(self):
        assert inverse(Perm.identity(4)) == Perm.identity(4)

    @given(perms())
    def test_properties(self, p):
        assert inverse(inverse(p)) == p
        assert compose(p, inverse(p)).is_identity()


class TestSymmetricSet:
    def test_example_one(self):
        assert is_symmetric_set([parse_cycles("(1 2)", 4), parse_cycles("(1 4)(2 3)", 4)])

    def test_missing_inverse(self):
        assert not is_symmetric_set([parse_cycles("(1 2 3)", 3)])

    def test_example_two(self):
        assert is_symmetric_set([parse_cycles("(1 2 3)", 3), parse_cycles("(1 3 2)", 3)])

    def test_duplicates(self):
        p = parse_cycles("(1 2)", 2)
        assert not is_symmetric_set([p, p])

    def test_inverse_index(self):
        ps = [parse_cycles(t, 3) for t in ("(1 2 3)", "(1 2)", "(1 3 2)")]
        assert inverse_index(ps) == [2, 1, 0]


def test_perm_is_hashable_and_immutable():
    p = parse_cycles("(1 2)", 3)
    assert {p: 1}[parse_cycles("(1 2)", 3)] == 1
    with pytest.raises(AttributeError):
        p._images = (0, 1, 2)


def test_non_bijection_rejected():
    with pytest.raises(PermError):
        Perm([0, 0, 1])
