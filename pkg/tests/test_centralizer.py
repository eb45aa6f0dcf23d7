import numpy as np
import pytest

from evencoset import kernels
from evencoset.centralizer import (
    Ambient,
    CentralizerOrderOverflow,
    EnumerationBudgetError,
    ShapeError,
    WreathParam,
    all_params,
    block_partition,
    build_x,
    build_y,
    centralizer_array,
    centralizer_order,
    definitional_centralizer,
    enumerate_centralizer,
    generate_subgroup,
    generators,
    involution_desc,
    is_in_centralizer,
    iter_centralizer_batches,
    x_centralizer_desc,
    param_parity,
    param_product,
    random_param,
    sample_batch,
    sample_centralizer,
    sample_stream,
    wreath_to_perm,
)
from evencoset.perm import (
    Parity,
    Permutation,
    commutes,
    compose,
    fixes_setwise,
    from_cycles,
    identity,
    is_involution,
    parity,
)


def test_build_x_y():
    assert build_x(1) == from_cycles(8, [(1, 2), (3, 4)])
    assert build_x(2) == from_cycles(16, [(1, 2), (3, 4), (5, 6), (7, 8)])
    assert build_y(1) == from_cycles(8, [(1, 5), (2, 6), (3, 7), (4, 8)])
    assert build_y(2) == from_cycles(16, [(i, i + 8) for i in range(1, 9)])
    for n in range(1, 9):
        x, y = build_x(n), build_y(n)
        assert is_involution(x) and parity(x) is Parity.EVEN
        assert is_involution(y) and parity(y) is Parity.EVEN
        part = block_partition(n)
        assert all(x(b) == b for b in part.B)
        assert all(y(a) in part.B for a in part.A)


def test_block_partition():
    part = block_partition(2)
    assert part.A == set(range(1, 9)) and part.B == set(range(9, 17))
    assert part.blocks == ((1, 2), (3, 4), (5, 6), (7, 8))
    assert set(part.fixed) == part.B


def test_centralizer_order_values():
    assert centralizer_order(x_centralizer_desc(1)) == 96
    assert centralizer_order(x_centralizer_desc(2)) == 7741440
    assert centralizer_order(x_centralizer_desc(3)) == 11036196864000
    assert centralizer_order(x_centralizer_desc(1, Ambient.SYMMETRIC)) == 192
    with pytest.raises(CentralizerOrderOverflow):
        centralizer_order(x_centralizer_desc(4))


def test_wreath_to_perm_examples():
    desc = x_centralizer_desc(1)
    assert wreath_to_perm(desc, WreathParam((1, 1), (1, 2), (1, 2, 3, 4))) == build_x(1)
    assert wreath_to_perm(desc, WreathParam((0, 0), (2, 1), (1, 2, 3, 4))) == from_cycles(8, [(1, 3), (2, 4)])
    assert wreath_to_perm(desc, WreathParam((0, 0), (1, 2), (1, 2, 3, 4))) == identity(8)
    with pytest.raises(ShapeError):
        wreath_to_perm(desc, WreathParam((0,), (1, 2), (1, 2, 3, 4)))


def test_param_parity():
    desc = x_centralizer_desc(1)
    assert param_parity(WreathParam((0, 0), (1, 2), (1, 2, 3, 4))) is Parity.EVEN
    assert param_parity(WreathParam((1, 0), (1, 2), (1, 2, 3, 4))) is Parity.ODD
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        n = int(rng.integers(1, 4))
        d = x_centralizer_desc(n, Ambient.SYMMETRIC)
        param = random_param(d, rng)
        assert param_parity(param) == parity(wreath_to_perm(d, param))
    assert desc.alternating


def test_homomorphism():
    rng = np.random.default_rng(1)
    for _ in range(10_000):
        n = int(rng.integers(1, 4))
        d = x_centralizer_desc(n, Ambient.SYMMETRIC)
        p1, p2 = random_param(d, rng), random_param(d, rng)
        assert compose(wreath_to_perm(d, p1), wreath_to_perm(d, p2)) == wreath_to_perm(d, param_product(p1, p2))


def test_injective_and_canonical_order_n1():
    for ambient, size in [(Ambient.ALTERNATING, 96), (Ambient.SYMMETRIC, 192)]:
        desc = x_centralizer_desc(1, ambient)
        from_params = [wreath_to_perm(desc, q) for q in all_params(desc)]
        assert len(set(from_params)) == size
        assert list(enumerate_centralizer(desc)) == from_params


def test_enumeration_n1():
    x = build_x(1)
    elems = list(enumerate_centralizer(x_centralizer_desc(1)))
    assert len(elems) == len(set(elems)) == 96
    assert all(commutes(z, x) and parity(z) is Parity.EVEN for z in elems)
    assert len(set(enumerate_centralizer(x_centralizer_desc(1, Ambient.SYMMETRIC)))) == 192


def test_enumeration_n2_distinct_and_structural():
    desc = x_centralizer_desc(2)
    x = build_x(2).to_array().astype(np.intp)
    count = 0
    keys = []
    for batch in iter_centralizer_batches(desc):
        b = batch.astype(np.intp)
        assert (b[:, x] == x[b]).all()  # z∘x == x∘z
        assert (kernels.parities(b) == 0).all()
        assert (b[:, :8] < 8).all()  # z(A) = A
        keys.append(kernels.pack_rows(batch))
        count += len(batch)
    assert count == 7741440
    assert len(np.unique(np.concatenate(keys))) == 7741440


def test_partitioned_streams():
    desc = x_centralizer_desc(1, Ambient.SYMMETRIC)
    whole = np.concatenate(list(iter_centralizer_batches(desc)))
    cuts = [0, 7, 50, 51, 130, 192]
    parts = [np.concatenate(list(iter_centralizer_batches(desc, a, b, batch_size=5))) for a, b in zip(cuts, cuts[1:])]
    assert np.array_equal(np.concatenate(parts), whole)


def test_budget_refusal():
    with pytest.raises(EnumerationBudgetError):
        next(iter_centralizer_batches(x_centralizer_desc(3)))
    with pytest.raises(EnumerationBudgetError):
        next(iter_centralizer_batches(x_centralizer_desc(2), budget=1000))


def test_sampling_membership_n3():
    desc = x_centralizer_desc(3)
    x = build_x(3).to_array().astype(np.intp)
    total = 0
    for batch in sample_stream(desc, seed=11, count=100_000):
        b = batch.astype(np.intp)
        assert (b[:, x] == x[b]).all()
        assert (kernels.parities(b) == 0).all()
        assert (b[:, :12] < 12).all()
        total += len(b)
    assert total == 100_000


def test_sampling_uniform_n1():
    desc = x_centralizer_desc(1)
    draws = np.concatenate(list(sample_stream(desc, seed=5, count=100_000)))
    keys, counts = np.unique(kernels.pack_rows(draws), return_counts=True)
    assert len(keys) == 96
    expected = 100_000 / 96
    sigma = (100_000 * (1 / 96) * (1 - 1 / 96)) ** 0.5
    assert np.abs(counts - expected).max() < 5 * sigma


def test_sampling_deterministic():
    desc = x_centralizer_desc(2)
    a = np.concatenate(list(sample_stream(desc, seed=3, count=1000)))
    b = np.concatenate(list(sample_stream(desc, seed=3, count=1000)))
    assert np.array_equal(a, b)
    assert sample_centralizer(desc, 9) == sample_centralizer(desc, 9)
    assert not np.array_equal(a, np.concatenate(list(sample_stream(desc, seed=4, count=1000))))


def test_sampling_symmetric_hits_odd():
    desc = x_centralizer_desc(1, Ambient.SYMMETRIC)
    batch = sample_batch(desc, np.random.default_rng(0), 2000)
    assert set(kernels.parities(batch).tolist()) == {0, 1}


def test_is_in_centralizer():
    desc = x_centralizer_desc(1)
    assert is_in_centralizer(desc, build_x(1))
    y = build_y(1)
    # y(x(1)) = 6 but x(y(1)) = 5
    assert y(build_x(1)(1)) != build_x(1)(y(1))
    assert not is_in_centralizer(desc, y)
    assert not is_in_centralizer(desc, from_cycles(8, [(1, 2)]))
    assert is_in_centralizer(desc.with_ambient("symmetric"), from_cycles(8, [(1, 2)]))


def test_definitional_oracle():
    x = build_x(1)
    brute = definitional_centralizer(x, 8)
    assert brute == set(enumerate_centralizer(x_centralizer_desc(1)))
    assert {p for p in brute} == {Permutation.from_array(r) for r in centralizer_array(x_centralizer_desc(1))}
    assert len(definitional_centralizer(x, ambient=Ambient.SYMMETRIC)) == 192
    assert len(definitional_centralizer(identity(4))) == 12
    with pytest.raises(EnumerationBudgetError):
        definitional_centralizer(identity(11))


def test_is_in_centralizer_agrees_with_filter_on_A8():
    desc = x_centralizer_desc(1)
    brute = definitional_centralizer(build_x(1))
    table = kernels.alternating_table(8)
    for row in table[::7].tolist():
        p = Permutation.from_array(row)
        assert is_in_centralizer(desc, p) == (p in brute)


def test_generators_generate_centralizer_n1():
    desc = x_centralizer_desc(1)
    gens = generators(desc)
    assert all(parity(g) is Parity.EVEN for g in gens)
    assert generate_subgroup(gens, 8) == set(enumerate_centralizer(desc))
    listed_gens = [from_cycles(8, c) for c in ([(1, 3), (2, 4)], [(1, 2), (3, 4)], [(1, 2), (5, 8)],
                                               [(1, 2), (6, 8)], [(1, 2), (7, 8)])]
    assert generate_subgroup(listed_gens, 8) == set(enumerate_centralizer(desc))
    assert len(generate_subgroup(generators(desc.with_ambient("symmetric")), 8)) == 192


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_generators_fix_A(n):
    A = block_partition(n).A
    assert all(fixes_setwise(g, A) for g in generators(x_centralizer_desc(n)))


def test_involution_desc_general():
    t = from_cycles(8, [(1, 2), (3, 4), (5, 6), (7, 8)])
    desc = involution_desc(t)
    assert desc.k == 4 and desc.m == 0
    assert centralizer_order(desc) == 192
    Z = centralizer_array(desc)
    assert {Permutation.from_array(r) for r in Z} == definitional_centralizer(t)
    with pytest.raises(ShapeError):
        involution_desc(from_cycles(4, [(1, 2, 3)]))
