import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evencoset.centralizer import (
    Ambient,
    build_y,
    centralizer_array,
    definitional_centralizer,
    enumerate_centralizer,
    iter_centralizer_batches,
    x_centralizer_desc,
)
from evencoset.cosets import (
    CycleTypeCensus,
    WitnessKind,
    all_even_cycles,
    census_csv,
    centralizer_coset_census,
    coset_census,
    coset_label,
    find_odd_order_element,
    merge_census,
    orders_from_census,
    sampled_coset_census,
)
from evencoset.perm import (
    CycleType,
    DegreeMismatchError,
    Permutation,
    compose,
    cycle_type,
    from_cycles,
    identity,
    order,
)

N1_TYPES = {"2^4", "2^1 6^1", "4^2"}


def brute_census(y, elements):
    census = CycleTypeCensus(y.degree)
    for z in elements:
        census.add(cycle_type(compose(y, z)))
    return census


def test_census_n1_matches_scalar_oracle():
    desc = x_centralizer_desc(1)
    y = build_y(1)
    fast = coset_census(y, iter_centralizer_batches(desc))
    slow = brute_census(y, enumerate_centralizer(desc))
    assert fast == slow
    assert fast.exps() == N1_TYPES
    assert fast.total == 96
    assert all_even_cycles(fast)
    assert orders_from_census(fast) == [2, 4, 6]


def test_census_accepts_permutation_stream():
    desc = x_centralizer_desc(1)
    y = build_y(1)
    assert coset_census(y, enumerate_centralizer(desc)) == coset_census(y, iter_centralizer_batches(desc))


def test_trivial_census():
    census = coset_census(identity(6), [identity(6)])
    assert census.exps() == {"1^6"} and census.total == 1
    assert not all_even_cycles(census)
    assert orders_from_census(census) == [1]


def test_census_degree_checks():
    with pytest.raises(DegreeMismatchError):
        coset_census(identity(6), [identity(5)])
    with pytest.raises(DegreeMismatchError):
        merge_census(CycleTypeCensus(4), CycleTypeCensus(5))
    with pytest.raises(DegreeMismatchError):
        CycleTypeCensus(4).add(CycleType([2, 1]))


def test_merge_identity_and_partition_determinism():
    desc = x_centralizer_desc(1, Ambient.SYMMETRIC)
    y = build_y(1)
    whole = coset_census(y, iter_centralizer_batches(desc))
    assert merge_census(whole, CycleTypeCensus(8)) == whole
    rng = np.random.default_rng(0)
    for _ in range(20):
        cuts = sorted({0, 192, *rng.integers(0, 193, size=4).tolist()})
        merged = CycleTypeCensus(8)
        for a, b in zip(cuts, cuts[1:]):
            merged = merge_census(merged, coset_census(y, iter_centralizer_batches(desc, a, b)))
        assert merged == whole


census_strategy = st.dictionaries(
    st.sampled_from([(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]), st.integers(0, 50)
).map(lambda d: CycleTypeCensus(4, {CycleType(k): v for k, v in d.items()}))


@settings(max_examples=100, deadline=None)
@given(census_strategy, census_strategy, census_strategy)
def test_merge_is_commutative_monoid(a, b, c):
    assert merge_census(a, b) == merge_census(b, a)
    assert merge_census(merge_census(a, b), c) == merge_census(a, merge_census(b, c))
    assert merge_census(a, b).total == a.total + b.total


def test_sharded_census_equals_single_shard():
    desc = x_centralizer_desc(1)
    y = build_y(1)
    one = centralizer_coset_census(y, desc)
    many = centralizer_coset_census(y, desc, threads=3, shard_size=10)
    assert one == many


def test_sampled_census_thread_independent():
    desc = x_centralizer_desc(2)
    y = build_y(2)
    a = sampled_coset_census(y, desc, 150_000, seed=2, threads=1)
    b = sampled_coset_census(y, desc, 150_000, seed=2, threads=4)
    assert a == b and a.total == 150_000
    assert all_even_cycles(a)


def test_witness_search_y_coset_has_none():
    w = find_odd_order_element(build_y(1), x_centralizer_desc(1), budget=10_000)
    assert w.kind is WitnessKind.NONE_FOUND
    assert w.exhausted and w.conclusive
    assert w.searched == 96


def test_witness_search_trivial_coset():
    w = find_odd_order_element(identity(8), x_centralizer_desc(1))
    assert w.kind is WitnessKind.ODD_ORDER_FOUND
    assert w.element == identity(8) and w.element_order == 1


def test_witness_search_A4():
    t = from_cycles(4, [(1, 2), (3, 4)])
    Z = sorted(definitional_centralizer(t))
    w = find_odd_order_element(from_cycles(4, [(1, 2, 3)]), Z)
    assert w.kind is WitnessKind.ODD_ORDER_FOUND
    assert w.element_order == 3
    assert cycle_type(w.element).exp() == "1^1 3^1"


def test_sampling_mode_is_never_a_proof():
    w = find_odd_order_element(build_y(2), x_centralizer_desc(2), budget=500, mode="sample", seed=1)
    assert w.kind is WitnessKind.NONE_FOUND
    assert not w.exhausted and not w.conclusive
    rep = from_cycles(16, [(1, 9, 3)])
    hit = find_odd_order_element(rep, x_centralizer_desc(2), budget=5000, mode="sample", seed=1)
    assert hit.kind is WitnessKind.ODD_ORDER_FOUND and hit.element_order % 2 == 1


def test_partial_enumeration_is_inconclusive():
    w = find_odd_order_element(build_y(2), x_centralizer_desc(2), budget=1000)
    assert w.kind is WitnessKind.NONE_FOUND and not w.exhausted


def test_exhaustive_search_agrees_with_direct_scan():
    desc = x_centralizer_desc(1)
    elems = list(enumerate_centralizer(desc))
    rng = np.random.default_rng(7)
    from evencoset.kernels import alternating_table

    table = alternating_table(8)
    for row in table[rng.integers(0, len(table), size=150)].tolist():
        rep = Permutation.from_array(row)
        direct = next((compose(rep, z) for z in elems if order(compose(rep, z)) % 2 == 1), None)
        w = find_odd_order_element(rep, desc)
        if direct is None:
            assert w.kind is WitnessKind.NONE_FOUND and w.exhausted
        else:
            assert w.kind is WitnessKind.ODD_ORDER_FOUND and w.element == direct


def test_coset_label_is_lexicographic_min():
    desc = x_centralizer_desc(1)
    Z = list(enumerate_centralizer(desc))
    for rep in [build_y(1), from_cycles(8, [(1, 5, 2)]), identity(8)]:
        expected = min(compose(rep, z).images for z in Z)
        assert coset_label(rep, desc).images == expected
        assert coset_label(rep, Z).images == expected
        assert coset_label(rep, centralizer_array(desc)).images == expected


def test_census_csv():
    census = coset_census(build_y(1), iter_centralizer_batches(x_centralizer_desc(1)))
    lines = census_csv(census).splitlines()
    assert lines[0] == "exp,count"
    assert sorted(lines[1:]) == sorted(["2^4,8", "2^1 6^1,64", "4^2,24"])
