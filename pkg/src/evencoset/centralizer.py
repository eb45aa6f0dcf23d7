"""Centralizers of products of disjoint transpositions.

An involution ``t`` with blocks ``(a_1 b_1) ... (a_k b_k)`` and fixed points
``f_1 < ... < f_m`` has a centralizer in ``S_N`` isomorphic to
``(C_2 wr S_k) x S_m``.  Every element is described by a :class:`WreathParam`:

* ``flips``      one bit per block, swap the two points on arrival,
* ``block_perm`` where each block is sent,
* ``fixed_perm`` a permutation of the fixed points.

Point ``j`` of block ``i`` goes to point ``j XOR flips[i]`` of block
``block_perm(i)``.  Block moves are even (two transpositions each), so the
parity of the element is ``sum(flips) + parity(fixed_perm)`` mod 2.

The involution ``x = (1 2)(3 4)...(4n-1 4n)`` in degree ``8n`` is
built by :func:`build_x`; :func:`x_centralizer_desc` returns its centralizer.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from math import factorial
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .perm import (
    UINT64_MAX,
    DegreeMismatchError,
    OrderOverflowError,
    Parity,
    Permutation,
    commutes,
    compose,
    cycle_decompose,
    from_cycles,
    identity,
    is_identity,
    is_involution,
    parity,
)

DEFAULT_ENUMERATION_BUDGET = 20_000_000
DEFINITIONAL_DEGREE_LIMIT = 10
SAMPLE_CHUNK = 1 << 16


class Ambient(str, enum.Enum):
    ALTERNATING = "alternating"
    SYMMETRIC = "symmetric"

    def __str__(self):
        return self.value


class EnumerationBudgetError(RuntimeError):
    pass


class CentralizerOrderOverflow(OrderOverflowError):
    pass


class ShapeError(ValueError):
    pass


def build_x(n: int) -> Permutation:
    """``(1 2)(3 4)...(4n-1 4n)`` in degree ``8n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return from_cycles(8 * n, [(2 * i - 1, 2 * i) for i in range(1, 2 * n + 1)])


def build_y(n: int) -> Permutation:
    """``(1 4n+1)(2 4n+2)...(4n 8n)``, swapping the halves A and B."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return from_cycles(8 * n, [(i, 4 * n + i) for i in range(1, 4 * n + 1)])


@dataclass(frozen=True)
class BlockPartition:
    n: int
    degree: int
    A: frozenset
    B: frozenset
    blocks: tuple
    fixed: tuple


def block_partition(n: int) -> BlockPartition:
    if n < 1:
        raise ValueError("n must be at least 1")
    half = 4 * n
    return BlockPartition(
        n=n,
        degree=8 * n,
        A=frozenset(range(1, half + 1)),
        B=frozenset(range(half + 1, 8 * n + 1)),
        blocks=tuple((2 * i - 1, 2 * i) for i in range(1, 2 * n + 1)),
        fixed=tuple(range(half + 1, 8 * n + 1)),
    )


@dataclass(frozen=True)
class CentralizerDesc:
    """Centralizer of the involution whose 2-cycles are ``blocks``."""

    degree: int
    blocks: tuple
    fixed: tuple
    ambient: Ambient = Ambient.ALTERNATING
    partition: BlockPartition | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ambient", Ambient(self.ambient))
        pts = [p for b in self.blocks for p in b] + list(self.fixed)
        if sorted(pts) != list(range(1, self.degree + 1)):
            raise ShapeError("blocks and fixed points must partition 1..degree")

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def m(self) -> int:
        return len(self.fixed)

    @property
    def involution(self) -> Permutation:
        return from_cycles(self.degree, self.blocks)

    @property
    def alternating(self) -> bool:
        return self.ambient is Ambient.ALTERNATING

    def with_ambient(self, ambient) -> "CentralizerDesc":
        return CentralizerDesc(self.degree, self.blocks, self.fixed, Ambient(ambient), self.partition)


def x_centralizer_desc(n: int, ambient=Ambient.ALTERNATING) -> CentralizerDesc:
    part = block_partition(n)
    return CentralizerDesc(part.degree, part.blocks, part.fixed, Ambient(ambient), part)


def involution_desc(t: Permutation, ambient=Ambient.ALTERNATING) -> CentralizerDesc:
    """Describe the centralizer of an arbitrary involution ``t`` (or the identity)."""
    if not (is_involution(t) or is_identity(t)):
        raise ShapeError("t must be an involution")
    cycles = cycle_decompose(t)
    blocks = tuple(c for c in cycles if len(c) == 2)
    fixed = tuple(c[0] for c in cycles if len(c) == 1)
    return CentralizerDesc(t.degree, blocks, fixed, Ambient(ambient))


def centralizer_order(desc: CentralizerDesc) -> int:
    """``2^k k! m!``, halved in the alternating ambient.

    Raises :class:`CentralizerOrderOverflow` above 64 bits; use sampling then.
    """
    full = 2**desc.k * factorial(desc.k) * factorial(desc.m)
    if desc.alternating and (desc.k >= 1 or desc.m >= 2):
        full //= 2
    if full > UINT64_MAX:
        raise CentralizerOrderOverflow(
            f"centralizer order exceeds 64 bits for degree {desc.degree}; use sampling mode"
        )
    return full


@dataclass(frozen=True)
class WreathParam:
    """Flags per block plus 1-indexed image tuples for the block and fixed-point maps."""

    flips: tuple
    block_perm: tuple
    fixed_perm: tuple

    def __mul__(self, other: "WreathParam") -> "WreathParam":
        return param_product(self, other)


def _tuple_parity(images: Sequence[int]) -> int:
    if not images:
        return 0
    return int(parity(Permutation(images)))


def param_parity(param: WreathParam) -> Parity:
    return Parity((sum(param.flips) + _tuple_parity(param.fixed_perm)) % 2)


def _check_shape(desc: CentralizerDesc, param: WreathParam) -> None:
    if len(param.flips) != desc.k or len(param.block_perm) != desc.k or len(param.fixed_perm) != desc.m:
        raise ShapeError(
            f"parameter shape ({len(param.flips)}, {len(param.block_perm)}, {len(param.fixed_perm)})"
            f" does not match k={desc.k}, m={desc.m}"
        )
    for images in (param.block_perm, param.fixed_perm):
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ShapeError("block_perm and fixed_perm must be permutations")
    if any(f not in (0, 1) for f in param.flips):
        raise ShapeError("flips must be 0/1")


def wreath_to_perm(desc: CentralizerDesc, param: WreathParam) -> Permutation:
    _check_shape(desc, param)
    img = [0] * desc.degree
    for i, block in enumerate(desc.blocks):
        target = desc.blocks[param.block_perm[i] - 1]
        eps = param.flips[i]
        img[block[0] - 1] = target[eps]
        img[block[1] - 1] = target[1 - eps]
    for j, point in enumerate(desc.fixed):
        img[point - 1] = desc.fixed[param.fixed_perm[j] - 1]
    return Permutation(img)


def param_product(p1: WreathParam, p2: WreathParam) -> WreathParam:
    """Parameter of ``wreath_to_perm(p1) ∘ wreath_to_perm(p2)``."""
    s1, s2 = p1.block_perm, p2.block_perm
    return WreathParam(
        flips=tuple(p2.flips[i] ^ p1.flips[s2[i] - 1] for i in range(len(s2))),
        block_perm=tuple(s1[s2[i] - 1] for i in range(len(s2))),
        fixed_perm=tuple(p1.fixed_perm[j - 1] for j in p2.fixed_perm),
    )


def random_param(desc: CentralizerDesc, rng: np.random.Generator, even_only: bool | None = None) -> WreathParam:
    if even_only is None:
        even_only = desc.alternating
    flips = [int(v) for v in rng.integers(0, 2, size=desc.k)]
    sigma = tuple(int(v) + 1 for v in rng.permutation(desc.k))
    rho = [int(v) + 1 for v in rng.permutation(desc.m)]
    param = WreathParam(tuple(flips), sigma, tuple(rho))
    if even_only and param_parity(param) is Parity.ODD:
        param = _toggle_parity(param)
    return param


def _toggle_parity(param: WreathParam) -> WreathParam:
    if param.flips:
        flips = (param.flips[0] ^ 1,) + param.flips[1:]
        return WreathParam(flips, param.block_perm, param.fixed_perm)
    rho = list(param.fixed_perm)
    rho[0], rho[1] = rho[1], rho[0]
    return WreathParam(param.flips, param.block_perm, tuple(rho))


class _Plan:
    """Canonical enumeration layout.

    Order is lexicographic in (flips read as a binary counter with the first
    block most significant, block_perm one-line, fixed_perm one-line), with
    odd parameters skipped in the alternating ambient.
    """

    def __init__(self, desc: CentralizerDesc):
        self.desc = desc
        k, m = desc.k, desc.m
        self.blocks0 = np.array(desc.blocks, dtype=np.intp).reshape(k, 2) - 1
        self.fixed0 = np.array(desc.fixed, dtype=np.intp) - 1
        codes = np.arange(2**k)
        self.eps = ((codes[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.intp)
        self.sig, _ = kernels.lex_permutations(k)
        rho, rho_par = kernels.lex_permutations(m)
        if desc.alternating:
            self.rho_by_parity = (rho[rho_par == 0], rho[rho_par == 1])
        else:
            self.rho_by_parity = (rho, rho)
        self.rho_sets = [
            self.rho_by_parity[int(row.sum()) % 2] if desc.alternating else rho for row in self.eps
        ]
        counts = np.array([len(self.sig) * len(r) for r in self.rho_sets], dtype=np.int64)
        self.offsets = np.concatenate([[0], np.cumsum(counts)])
        self.total = int(self.offsets[-1])
        self.dtype = kernels.index_dtype(desc.degree)

    def block_images(self, e: int) -> np.ndarray:
        eps = self.eps[e]
        j = np.arange(2)[None, :] ^ eps[:, None]  # (k, 2)
        imgs = self.blocks0[self.sig.astype(np.intp)[:, :, None], j[None, :, :]]
        return imgs.reshape(len(self.sig), 2 * self.desc.k)

    def batches(self, start: int, stop: int, batch_size: int) -> Iterator[np.ndarray]:
        desc = self.desc
        cols_a = self.blocks0.ravel()
        for e in range(len(self.eps)):
            lo, hi = int(self.offsets[e]), int(self.offsets[e + 1])
            a, b = max(lo, start), min(hi, stop)
            if a >= b:
                continue
            rho_set = self.rho_sets[e]
            nr = len(rho_set)
            a_img = self.block_images(e)
            f_img = self.fixed0[rho_set.astype(np.intp)] if desc.m else None
            for s0 in range(a, b, batch_size):
                idx = np.arange(s0, min(s0 + batch_size, b), dtype=np.int64) - lo
                out = np.empty((len(idx), desc.degree), dtype=self.dtype)
                if desc.k:
                    out[:, cols_a] = a_img[idx // nr]
                if desc.m:
                    out[:, self.fixed0] = f_img[idx % nr]
                yield out


def _plan_for(desc: CentralizerDesc, budget: int) -> _Plan:
    try:
        size = centralizer_order(desc)
    except CentralizerOrderOverflow:
        size = None
    if size is None or size > budget:
        raise EnumerationBudgetError(
            f"centralizer of order {size if size is not None else '> 2^64'} exceeds the enumeration "
            f"budget {budget}; use sampling instead"
        )
    return _Plan(desc)


def iter_centralizer_batches(
    desc: CentralizerDesc,
    start: int = 0,
    stop: int | None = None,
    batch_size: int = 1 << 18,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> Iterator[np.ndarray]:
    """Yield the centralizer as 0-indexed image arrays in canonical order.

    ``start``/``stop`` select a slice of the canonical order, so disjoint
    ranges give disjoint sub-streams.
    """
    plan = _plan_for(desc, budget)
    stop = plan.total if stop is None else min(stop, plan.total)
    yield from plan.batches(max(start, 0), stop, batch_size)


def enumerate_centralizer(
    desc: CentralizerDesc,
    start: int = 0,
    stop: int | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> Iterator[Permutation]:
    for batch in iter_centralizer_batches(desc, start, stop, budget=budget):
        for row in batch.tolist():
            yield Permutation._raw(tuple(row))


def centralizer_array(desc: CentralizerDesc, budget: int = DEFAULT_ENUMERATION_BUDGET) -> np.ndarray:
    parts = list(iter_centralizer_batches(desc, budget=budget, batch_size=1 << 22))
    return np.concatenate(parts) if parts else np.empty((0, desc.degree), dtype=np.int8)


def sample_batch(desc: CentralizerDesc, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` uniform centralizer elements as a 0-indexed array."""
    k, m = desc.k, desc.m
    eps = rng.integers(0, 2, size=(size, k), dtype=np.intp)
    sig = rng.permuted(np.tile(np.arange(k, dtype=np.intp), (size, 1)), axis=1)
    rho = rng.permuted(np.tile(np.arange(m, dtype=np.intp), (size, 1)), axis=1)
    if desc.alternating:
        odd = (eps.sum(axis=1) + kernels.parities(rho)) % 2 == 1
        if k:
            # toggling one flip is a parity-reversing bijection, so the even class stays uniform
            eps[odd, 0] ^= 1
        elif m >= 2:
            rho[odd, 0], rho[odd, 1] = rho[odd, 1].copy(), rho[odd, 0].copy()
    out = np.empty((size, desc.degree), dtype=kernels.index_dtype(desc.degree))
    if k:
        blocks0 = np.array(desc.blocks, dtype=np.intp) - 1
        j = np.arange(2)[None, None, :] ^ eps[:, :, None]
        out[:, blocks0.ravel()] = blocks0[sig[:, :, None], j].reshape(size, 2 * k)
    if m:
        fixed0 = np.array(desc.fixed, dtype=np.intp) - 1
        out[:, fixed0] = fixed0[rho]
    return out


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    """Generator for sample chunk ``chunk``; independent of how chunks are scheduled."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


def sample_stream(
    desc: CentralizerDesc, seed: int, count: int, chunk_size: int = SAMPLE_CHUNK
) -> Iterator[np.ndarray]:
    for c, lo in enumerate(range(0, count, chunk_size)):
        yield sample_batch(desc, chunk_rng(seed, c), min(chunk_size, count - lo))


def sample_centralizer(desc: CentralizerDesc, rng) -> Permutation:
    """One uniform element; ``rng`` is a numpy Generator or an integer seed."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return Permutation.from_array(sample_batch(desc, rng, 1)[0], validate=False)


def is_in_centralizer(desc: CentralizerDesc, p: Permutation) -> bool:
    if p.degree != desc.degree:
        raise DegreeMismatchError(f"degree {p.degree} does not match {desc.degree}")
    if not commutes(p, desc.involution):
        return False
    return not desc.alternating or parity(p) is Parity.EVEN


def group_table(degree: int, ambient=Ambient.ALTERNATING) -> np.ndarray:
    """Every element of ``A_degree`` or ``S_degree`` as a 0-indexed array."""
    if degree > DEFINITIONAL_DEGREE_LIMIT:
        raise EnumerationBudgetError(f"degree {degree} exceeds whole-group limit {DEFINITIONAL_DEGREE_LIMIT}")
    table, par = kernels.lex_permutations(degree)
    return table[par == 0] if Ambient(ambient) is Ambient.ALTERNATING else table


def definitional_centralizer_array(x: Permutation, ambient=Ambient.ALTERNATING) -> np.ndarray:
    group = group_table(x.degree, ambient)
    xa = x.to_array().astype(np.intp)
    mask = (kernels.compose(group, xa) == xa[group]).all(axis=1)
    return group[mask]


def definitional_centralizer(x: Permutation, degree: int | None = None, ambient=Ambient.ALTERNATING) -> frozenset:
    """Brute-force centralizer: filter the whole ambient group by ``g∘x == x∘g``."""
    if degree is not None and degree != x.degree:
        raise DegreeMismatchError(f"degree {degree} does not match {x.degree}")
    rows = definitional_centralizer_array(x, ambient)
    return frozenset(Permutation._raw(tuple(r)) for r in rows.tolist())


def generators(desc: CentralizerDesc) -> list:
    """Structural generators: block flips, adjacent block swaps, adjacent swaps of fixed points.

    In the alternating ambient odd generators are replaced by Schreier
    generators for the even subgroup (products with the first odd generator).
    """
    d = desc.degree
    gens = []
    for a, b in desc.blocks:
        gens.append(from_cycles(d, [(a, b)]))
    for (a1, b1), (a2, b2) in zip(desc.blocks, desc.blocks[1:]):
        gens.append(from_cycles(d, [(a1, a2), (b1, b2)]))
    for f1, f2 in zip(desc.fixed, desc.fixed[1:]):
        gens.append(from_cycles(d, [(f1, f2)]))
    if not desc.alternating:
        return _dedupe(gens)
    even = [g for g in gens if parity(g) is Parity.EVEN]
    odd = [g for g in gens if parity(g) is Parity.ODD]
    out = list(even)
    if odd:
        o1 = odd[0]
        out += [compose(compose(o1, e), o1) for e in even]
        out += [compose(o, o1) for o in odd[1:]] + [compose(o1, o) for o in odd[1:]]
    return _dedupe(out)


def _dedupe(perms: list) -> list:
    seen = set()
    out = []
    for p in perms:
        if p not in seen and not is_identity(p):
            seen.add(p)
            out.append(p)
    return out


def generate_subgroup(gens: Sequence[Permutation], degree: int, limit: int = 1_000_000) -> frozenset:
    """Closure of ``gens`` by breadth-first multiplication."""
    e = identity(degree)
    seen = {e}
    queue = deque([e])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(g, s)
            if h not in seen:
                seen.add(h)
                if len(seen) > limit:
                    raise EnumerationBudgetError(f"subgroup larger than {limit}")
                queue.append(h)
    return frozenset(seen)


def all_params(desc: CentralizerDesc) -> Iterator[WreathParam]:
    """Parameters in canonical order (small cases; mirrors the batch enumeration)."""
    for flips in itertools.product((0, 1), repeat=desc.k):
        for sigma in itertools.permutations(range(1, desc.k + 1)):
            for rho in itertools.permutations(range(1, desc.m + 1)):
                param = WreathParam(tuple(flips), sigma, rho)
                if desc.alternating and param_parity(param) is Parity.ODD:
                    continue
                yield param
