import itertools
import random

import pytest
from hypothesis import given, strategies as st

from dkcalc.orders import (
    INCL,
    LP,
    SIMPLICIAL,
    SYMMETRIC,
    MultiIndex,
    OrderError,
    TotalOrder,
    all_total_orders,
    binary_order,
    enumerate_indices,
    incl_leq,
    is_order_reflecting,
    linear_extensions,
    lp_leq,
    random_total_order,
)


def mi(*idx, n=3, variant=SIMPLICIAL):
    return MultiIndex(tuple(idx), n, variant)


def brute_force_extensions(n, variant, partial):
    elems = enumerate_indices(n, variant)
    leq = lp_leq if partial == LP else incl_leq
    found = []
    for perm in itertools.permutations(elems):
        if all(not leq(perm[k], perm[l]) for k in range(len(perm)) for l in range(k)):
            found.append(perm)
    return found


class TestMultiIndex:
    def test_rejects_out_of_range_and_unsorted(self):
        with pytest.raises(OrderError):
            mi(3)
        with pytest.raises(OrderError):
            mi(1, 0)
        with pytest.raises(OrderError):
            mi(0, variant=SYMMETRIC)

    def test_bits_round_trip(self):
        for variant in (SIMPLICIAL, SYMMETRIC):
            for k in range(16):
                assert MultiIndex.from_bits(k, 4, variant).bits == k

    def test_complement_and_json(self):
        a = mi(0, 2)
        assert a.complement() == mi(1)
        assert MultiIndex.from_json(a.to_json()) == a
        assert MultiIndex.full(3, SYMMETRIC).indices == (1, 2, 3)


class TestEnumeration:
    def test_level_zero_has_only_the_empty_index(self):
        assert enumerate_indices(0) == [MultiIndex((), 0)]

    def test_level_three_sizes(self):
        simp = enumerate_indices(3, SIMPLICIAL)
        sym = enumerate_indices(3, SYMMETRIC)
        assert len(set(simp)) == 8 and all(set(a) <= {0, 1, 2} for a in simp)
        assert len(set(sym)) == 8 and all(set(a) <= {1, 2, 3} for a in sym)


class TestPartialOrders:
    def test_examples(self):
        for b in enumerate_indices(3):
            assert lp_leq(mi(), b)
        assert not lp_leq(mi(0, 1), mi(2))
        assert lp_leq(mi(1), mi(0, 2))
        assert incl_leq(mi(1, n=4), mi(1, 3, n=4))
        assert not incl_leq(mi(1, n=4), mi(2, 3, n=4))

    @pytest.mark.parametrize("n", range(5))
    @pytest.mark.parametrize("leq", [lp_leq, incl_leq])
    def test_partial_order_axioms(self, n, leq):
        elems = enumerate_indices(n)
        for a in elems:
            assert leq(a, a)
        for a, b in itertools.product(elems, repeat=2):
            if leq(a, b) and leq(b, a):
                assert a == b
        for a, b, c in itertools.product(elems, repeat=3):
            if leq(a, b) and leq(b, c):
                assert leq(a, c)

    @pytest.mark.parametrize("n", range(6))
    def test_inclusion_implies_length_product(self, n):
        elems = enumerate_indices(n)
        for a, b in itertools.product(elems, repeat=2):
            if incl_leq(a, b):
                assert lp_leq(a, b)

    @pytest.mark.parametrize("n", range(6))
    def test_empty_is_minimum_and_full_is_maximum(self, n):
        elems = enumerate_indices(n)
        minima = [a for a in elems if all(lp_leq(a, b) for b in elems)]
        maxima = [a for a in elems if all(lp_leq(b, a) for b in elems)]
        assert minima == [MultiIndex((), n)]
        assert maxima == [MultiIndex.full(n)]

    def test_mixed_levels_are_rejected(self):
        with pytest.raises(OrderError):
            lp_leq(mi(0, n=2), mi(0, n=3))


class TestTotalOrders:
    def test_binary_order_positions(self):
        assert binary_order(4)[5] == MultiIndex((0, 2), 4)
        expected = [(), (0,), (1,), (0, 1), (2,), (0, 2), (1, 2), (0, 1, 2)]
        assert [a.indices for a in binary_order(3)] == expected
        assert binary_order(3, SYMMETRIC)[5].indices == (1, 3)

    @pytest.mark.parametrize("n", range(6))
    def test_binary_order_extends_both_partial_orders(self, n):
        assert is_order_reflecting(binary_order(n), LP)
        assert is_order_reflecting(binary_order(n, SYMMETRIC), INCL)

    def test_empty_not_first_is_never_reflecting(self):
        order = TotalOrder.from_bit_sequence([1, 0, 2, 3], 2)
        assert not is_order_reflecting(order, LP)
        assert not is_order_reflecting(order, INCL)

    def test_swapping_comparable_positions_breaks_reflection(self):
        rng = random.Random(7)
        base = list(binary_order(3).positions)
        for _ in range(20):
            k, l = sorted(rng.sample(range(8), 2))
            if not lp_leq(base[k], base[l]):
                continue
            swapped = base[:]
            swapped[k], swapped[l] = swapped[l], swapped[k]
            assert not is_order_reflecting(TotalOrder(3, SIMPLICIAL, tuple(swapped)))

    def test_rejects_non_bijections(self):
        with pytest.raises(OrderError):
            TotalOrder.from_bit_sequence([0, 1, 1, 3], 2)

    def test_json_round_trip(self):
        order = random_total_order(3, SYMMETRIC, random.Random(1))
        assert TotalOrder.from_json(order.to_json()) == order


class TestLinearExtensions:
    def test_level_one_has_one_extension(self):
        assert len(list(linear_extensions(1))) == 1

    def test_frozen_counts(self):
        # frozen from the brute-force filter below
        assert len(list(linear_extensions(2, SIMPLICIAL, LP))) == 1
        assert len(list(linear_extensions(3, SIMPLICIAL, LP))) == 2
        assert len(list(linear_extensions(2, SYMMETRIC, INCL))) == 2
        assert len(list(linear_extensions(3, SYMMETRIC, INCL))) == 48

    @pytest.mark.parametrize("n", range(4))
    @pytest.mark.parametrize("partial", [LP, INCL])
    def test_exhaustive_mode_matches_brute_force(self, n, partial):
        got = [o.positions for o in linear_extensions(n, SIMPLICIAL, partial)]
        assert len(set(got)) == len(got)
        assert set(got) == set(brute_force_extensions(n, SIMPLICIAL, partial))

    def test_inclusion_has_at_least_as_many_extensions(self):
        assert len(list(linear_extensions(3, SIMPLICIAL, INCL))) >= len(list(linear_extensions(3, SIMPLICIAL, LP)))

    def test_exhaustive_limit_on_large_levels(self):
        with pytest.raises(OrderError):
            next(linear_extensions(4))
        with pytest.raises(OrderError):
            next(all_total_orders(4))

    def test_sampled_extensions_are_reflecting_and_seeded(self):
        a = [o.positions for o in linear_extensions(4, SIMPLICIAL, LP, limit=20, seed=3)]
        b = [o.positions for o in linear_extensions(4, SIMPLICIAL, LP, limit=20, seed=3)]
        assert a == b and len(a) == 20
        assert all(is_order_reflecting(TotalOrder(4, SIMPLICIAL, p)) for p in a)

    def test_all_total_orders_count(self):
        assert sum(1 for _ in all_total_orders(2)) == 24


@given(st.integers(0, 5), st.data())
def test_random_bit_sequences_define_orders(n, data):
    perm = data.draw(st.permutations(range(1 << n)))
    order = TotalOrder.from_bit_sequence(perm, n)
    assert [a.bits for a in order] == list(perm)
    assert order.rank(order[len(order) - 1]) == len(order) - 1
