"""Cycle-type censuses and odd-order witness search over cosets ``rep·Z``."""

from __future__ import annotations

import csv
import enum
import io
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .centralizer import (
    DEFAULT_ENUMERATION_BUDGET,
    CentralizerDesc,
    CentralizerOrderOverflow,
    centralizer_order,
    chunk_rng,
    iter_centralizer_batches,
    sample_batch,
    SAMPLE_CHUNK,
)
from .perm import CycleType, DegreeMismatchError, Permutation, order, to_image_string


class CycleTypeCensus:
    """Mergeable count of cycle types, all of one degree."""

    def __init__(self, degree: int, entries: dict | None = None):
        self.degree = degree
        self.entries: Counter = Counter()
        for ct, count in (entries or {}).items():
            self.add(ct, count)

    def add(self, ct: CycleType, count: int = 1) -> None:
        if ct.degree != self.degree:
            raise DegreeMismatchError(f"cycle type of degree {ct.degree} in a degree {self.degree} census")
        if count:
            self.entries[ct] += int(count)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def types(self) -> set:
        return set(self.entries)

    def exps(self) -> set:
        return {ct.exp() for ct in self.entries}

    def records(self) -> list:
        return [
            {"parts": list(ct.parts), "exp": ct.exp(), "count": self.entries[ct]}
            for ct in sorted(self.entries, reverse=True)
        ]

    def __eq__(self, other):
        if not isinstance(other, CycleTypeCensus):
            return NotImplemented
        return self.degree == other.degree and dict(self.entries) == dict(other.entries)

    def __repr__(self):
        body = ", ".join(f"{ct.exp()}: {c}" for ct, c in sorted(self.entries.items(), reverse=True))
        return f"CycleTypeCensus(degree={self.degree}, {{{body}}})"


def merge_census(c1: CycleTypeCensus, c2: CycleTypeCensus) -> CycleTypeCensus:
    if c1.degree != c2.degree:
        raise DegreeMismatchError(f"cannot merge censuses of degree {c1.degree} and {c2.degree}")
    out = CycleTypeCensus(c1.degree)
    out.entries = c1.entries + c2.entries
    return out


def all_even_cycles(census: CycleTypeCensus) -> bool:
    return all(ct.all_even() for ct in census.entries)


def orders_from_census(census: CycleTypeCensus) -> list:
    return sorted({ct.order() for ct in census.entries})


def _census_of_products(products: np.ndarray, acc: Counter) -> None:
    d = products.shape[1]
    lengths = kernels.cycle_lengths(products)
    if d <= kernels.PACK_LIMIT:
        keys, counts = np.unique(kernels.cycle_type_keys(lengths), return_counts=True)
        for key, count in zip(keys.tolist(), counts.tolist()):
            acc[kernels.key_to_parts(key, d)] += count
    else:
        rows, counts = np.unique(np.sort(lengths, axis=1), axis=0, return_counts=True)
        for row, count in zip(rows.tolist(), counts.tolist()):
            acc[_parts_from_point_lengths(row)] += count


def _parts_from_point_lengths(row: Sequence[int]) -> tuple:
    c = Counter(row)
    return tuple(sorted((length for length, n in c.items() for _ in range(n // length)), reverse=True))


def _finish(degree: int, acc: Counter) -> CycleTypeCensus:
    census = CycleTypeCensus(degree)
    for parts, count in acc.items():
        census.add(CycleType(parts), count)
    return census


def coset_census(y: Permutation, subgroup_stream: Iterable) -> CycleTypeCensus:
    """Census of ``cycle_type(y∘z)`` over a stream of permutations or 0-indexed arrays."""
    ya = y.to_array().astype(np.intp)
    acc: Counter = Counter()
    pending = []
    for item in subgroup_stream:
        if isinstance(item, Permutation):
            if item.degree != y.degree:
                raise DegreeMismatchError(f"degree {item.degree} does not match {y.degree}")
            pending.append(item.zero_based)
            if len(pending) >= 1 << 16:
                _census_of_products(ya[np.array(pending)], acc)
                pending = []
            continue
        batch = np.asarray(item)
        if batch.shape[1] != y.degree:
            raise DegreeMismatchError(f"degree {batch.shape[1]} does not match {y.degree}")
        if len(batch):
            _census_of_products(ya[batch], acc)
    if pending:
        _census_of_products(ya[np.array(pending)], acc)
    return _finish(y.degree, acc)


def _shards(total: int, shard_size: int) -> list:
    return [(lo, min(lo + shard_size, total)) for lo in range(0, total, shard_size)]


def _run_ordered(fn, jobs: list, threads: int) -> list:
    # results come back in job order whatever the thread count
    if threads <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def centralizer_coset_census(
    y: Permutation,
    desc: CentralizerDesc,
    threads: int = 1,
    shard_size: int = 1 << 20,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> CycleTypeCensus:
    """Exhaustive census of ``y·Z``, sharded by ranges of the canonical enumeration."""
    total = centralizer_order(desc)
    iter_centralizer_batches(desc, 0, 0, budget=budget)  # budget check before spawning work

    def shard(bounds):
        lo, hi = bounds
        return coset_census(y, iter_centralizer_batches(desc, lo, hi, budget=budget))

    result = CycleTypeCensus(desc.degree)
    for part in _run_ordered(shard, _shards(total, shard_size), threads):
        result = merge_census(result, part)
    return result


def sampled_coset_census(
    y: Permutation, desc: CentralizerDesc, samples: int, seed: int, threads: int = 1
) -> CycleTypeCensus:
    """Census of ``y∘z`` for ``samples`` uniform draws ``z``; chunk seeds do not depend on ``threads``."""
    chunks = [(c, min(SAMPLE_CHUNK, samples - lo)) for c, lo in enumerate(range(0, samples, SAMPLE_CHUNK))]

    def shard(job):
        c, size = job
        return coset_census(y, [sample_batch(desc, chunk_rng(seed, c), size)])

    result = CycleTypeCensus(desc.degree)
    for part in _run_ordered(shard, chunks, threads):
        result = merge_census(result, part)
    return result


class WitnessKind(str, enum.Enum):
    ODD_ORDER_FOUND = "odd_order_found"
    ALL_EVEN_VIOLATION = "all_even_violation"
    NONE_FOUND = "none_found"


@dataclass
class Witness:
    """Certificate for one coset.

    ``kind=none_found`` with ``exhausted=True`` proves the coset has no
    odd-order element; with ``exhausted=False`` the search was inconclusive.
    """

    coset_label: Permutation | None
    element: Permutation | None
    element_order: int | None
    kind: WitnessKind
    exhausted: bool = False
    searched: int = 0
    representative: Permutation | None = None
    extra: dict = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.kind is not WitnessKind.NONE_FOUND or self.exhausted

    def to_json(self) -> dict:
        out = {
            "coset_label": to_image_string(self.coset_label) if self.coset_label is not None else None,
            "element": to_image_string(self.element) if self.element is not None else None,
            "order": self.element_order,
            "kind": self.kind.value,
            "exhausted": self.exhausted,
        }
        if self.representative is not None:
            out["representative"] = to_image_string(self.representative)
        out.update(self.extra)
        return out


def _as_array(subgroup, degree: int) -> np.ndarray:
    if isinstance(subgroup, np.ndarray):
        return subgroup
    rows = [p.zero_based for p in subgroup]
    if any(len(r) != degree for r in rows):
        raise DegreeMismatchError("subgroup degree does not match the coset representative")
    return np.array(rows, dtype=kernels.index_dtype(degree)).reshape(len(rows), degree)


def coset_label(rep: Permutation, subgroup, budget: int = DEFAULT_ENUMERATION_BUDGET) -> Permutation:
    """Lexicographically least image list in ``rep·Z``."""
    ra = rep.to_array().astype(np.intp)
    if isinstance(subgroup, CentralizerDesc):
        batches = iter_centralizer_batches(subgroup, budget=budget)
    else:
        batches = [_as_array(subgroup, rep.degree)]
    best = None
    for batch in batches:
        products = ra[batch]
        if rep.degree <= kernels.PACK_LIMIT:
            cand = kernels.unpack_rows(kernels.pack_rows(products).min(keepdims=True), rep.degree)[0]
        else:
            cand = min(map(tuple, products.tolist()))
        cand = tuple(int(v) for v in cand)
        if best is None or cand < best:
            best = cand
    return Permutation._raw(best)


def _first_odd(products: np.ndarray) -> int:
    lengths = kernels.cycle_lengths(products)
    hits = np.flatnonzero((lengths % 2 == 1).all(axis=1))
    return int(hits[0]) if len(hits) else -1


def find_odd_order_element(
    coset_rep: Permutation,
    subgroup,
    budget: int = 10_000,
    mode: str = "enumerate",
    seed: int = 0,
) -> Witness:
    """First ``coset_rep∘z`` of odd order, scanning ``z`` in canonical or sampled order.

    ``subgroup`` is a :class:`CentralizerDesc`, a permutation list, or a
    0-indexed array.  Sampling needs a descriptor.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    ra = coset_rep.to_array().astype(np.intp)
    searched = 0
    exhausted = False
    if mode == "enumerate":
        if isinstance(subgroup, CentralizerDesc):
            try:
                exhausted_size = centralizer_order(subgroup)
            except CentralizerOrderOverflow as exc:
                raise ValueError("subgroup too large to enumerate; use mode='sample'") from exc
            # only the first `budget` elements are materialized
            batches = iter_centralizer_batches(subgroup, 0, budget, batch_size=1 << 14, budget=exhausted_size)
        else:
            arr = _as_array(subgroup, coset_rep.degree)
            batches = [arr[:budget]]
            exhausted_size = len(arr)
        for batch in batches:
            hit = _first_odd(ra[batch])
            if hit >= 0:
                z = Permutation.from_array(batch[hit], validate=False)
                element = Permutation.from_array(ra[batch[hit]], validate=False)
                return Witness(None, element, order(element), WitnessKind.ODD_ORDER_FOUND,
                               searched=searched + hit + 1, representative=coset_rep, extra={"z": to_image_string(z)})
            searched += len(batch)
        exhausted = searched >= exhausted_size
    elif mode == "sample":
        if not isinstance(subgroup, CentralizerDesc):
            raise ValueError("sampling needs a CentralizerDesc")
        for c, lo in enumerate(range(0, budget, SAMPLE_CHUNK)):
            batch = sample_batch(subgroup, chunk_rng(seed, c), min(SAMPLE_CHUNK, budget - lo))
            hit = _first_odd(ra[batch])
            if hit >= 0:
                element = Permutation.from_array(ra[batch[hit]], validate=False)
                return Witness(None, element, order(element), WitnessKind.ODD_ORDER_FOUND,
                               searched=searched + hit + 1, representative=coset_rep)
            searched += len(batch)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Witness(None, None, None, WitnessKind.NONE_FOUND, exhausted=exhausted,
                   searched=searched, representative=coset_rep)


def census_csv(census: CycleTypeCensus) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["exp", "count"])
    for rec in census.records():
        writer.writerow([rec["exp"], rec["count"]])
    return buf.getvalue()
