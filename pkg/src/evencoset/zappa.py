"""Cosets of Sylow p-subgroups of ``A_n`` for ``p <= n <= 3p-1``.

The Sylow subgroup is ``<(1 2 ... p)>`` when ``n <= 2p-1`` and
``<(1 ... p), (p+1 ... 2p)>`` when ``2p <= n <= 3p-1``.  The constructive
finders return ``tau`` in ``P`` with ``order(x∘tau) != p`` for a coset ``xP``
that contains a p-power-order element ``x``; the brute-force report checks
the whole coset.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, factorial

import numpy as np
from sympy import isprime

from . import kernels
from .centralizer import Ambient, group_table
from .conjectures import BudgetError, Mode, Status, Verdict, _elapsed_ms
from .cosets import _run_ordered, _shards
from .perm import (
    Permutation,
    compose,
    cycle_decompose,
    from_cycles,
    identity,
    order,
    power,
    to_image_string,
)

EXHAUSTIVE_DEGREE_LIMIT = 10
BRUTE_ORDER_LIMIT = 10_000


class ZappaShapeError(ValueError):
    pass


@dataclass(frozen=True)
class SylowDesc:
    p: int
    n: int
    generators: tuple
    order: int

    @property
    def supports(self) -> list:
        return [frozenset(range(i * self.p + 1, (i + 1) * self.p + 1)) for i in range(len(self.generators))]

    @cached_property
    def _elements(self) -> tuple:
        out = [identity(self.n)]
        for c in self.generators:
            out = [compose(g, power(c, e)) for g in out for e in range(self.p)]
        return tuple(out)

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self._elements)

    def elements(self) -> list:
        """All of ``P`` as products ``c1^i ∘ c2^j`` in lexicographic exponent order."""
        return list(self._elements)

    def contains(self, g: Permutation) -> bool:
        return g in self.members


def build_sylow(p: int, n: int) -> SylowDesc:
    if p < 3 or not isprime(p):
        raise ZappaShapeError(f"p must be an odd prime, got {p}")
    if not p <= n <= 3 * p - 1:
        raise ZappaShapeError(f"need p <= n <= 3p-1, got p={p}, n={n}")
    count = 1 if n <= 2 * p - 1 else 2
    gens = tuple(from_cycles(n, [range(i * p + 1, (i + 1) * p + 1)]) for i in range(count))
    return SylowDesc(p, n, gens, p**count)


def _nontrivial_cycles(x: Permutation) -> list:
    return [c for c in cycle_decompose(x) if len(c) > 1]


def _single_cycle(c: Permutation) -> tuple:
    cycles = _nontrivial_cycles(c)
    if len(cycles) != 1:
        raise ZappaShapeError("expected a single cycle")
    return cycles[0]


def tau_power_map(c: Permutation, a: int, b: int) -> int:
    """The unique ``k`` in ``0..len-1`` with ``c^k(a) == b``; ``<c>`` acts regularly on its support."""
    cycle = _single_cycle(c)
    if a not in cycle or b not in cycle:
        raise ZappaShapeError(f"points {a}, {b} must lie in the support of {c}")
    return (cycle.index(b) - cycle.index(a)) % len(cycle)


def _cycle_sequence(cycle: tuple, start: int) -> list:
    i = cycle.index(start)
    return list(cycle[i:] + cycle[:i])


def _tau_from_generator(x_cycle: tuple, gen: Permutation, gen_support: frozenset) -> Permutation:
    """Core single-generator construction, dispatching on ``|supp(gen) ∩ supp(x)|``."""
    A = gen_support
    p = len(A)
    B = set(x_cycle)
    common = A & B
    if common == A and B == A:
        # x = (1 a_1 ...): send a_1 to the cycle's anchor so x∘tau fixes a_1
        anchor = min(A)
        a1 = _cycle_sequence(x_cycle, anchor)[1]
        return power(gen, tau_power_map(gen, a1, anchor))
    if len(common) == 1:
        (a,) = common
        a1 = min(A - {a})
        return power(gen, tau_power_map(gen, a1, a))
    if 2 <= len(common) <= p - 1:
        # rotate so position 0 is the least outside point whose predecessor is inside A
        seq = list(x_cycle)
        heads = [q for i, q in enumerate(seq) if q not in A and seq[i - 1] in A]
        seq = _cycle_sequence(x_cycle, min(heads))
        a = seq[-1]
        a1 = next(q for q in seq if q in A)
        return power(gen, tau_power_map(gen, a1, a))
    raise ZappaShapeError("x does not meet the generator's support")


def _check_p_cycle(x: Permutation, desc: SylowDesc) -> tuple:
    if x.degree != desc.n:
        raise ZappaShapeError(f"x has degree {x.degree}, expected {desc.n}")
    cycles = _nontrivial_cycles(x)
    if len(cycles) != 1 or len(cycles[0]) != desc.p:
        raise ZappaShapeError("x must be a p-cycle")
    if desc.contains(x):
        raise ZappaShapeError("x lies in P; its coset is trivial")
    return cycles[0]


def constructive_tau_cyclic(x: Permutation, desc: SylowDesc) -> Permutation:
    """``tau`` in ``P = <(1..p)>`` with ``x∘tau`` not a p-cycle (``n <= 2p-1``).

    Cases follow ``|A ∩ supp(x)|`` with ``A = {1..p}``: all of ``A`` gives a
    fixed point, one point gives a ``(2p-1)``-cycle, otherwise a cycle
    shorter than ``p`` appears.
    """
    if len(desc.generators) != 1:
        raise ZappaShapeError("cyclic construction needs n <= 2p-1")
    cycle = _check_p_cycle(x, desc)
    return _tau_from_generator(cycle, desc.generators[0], desc.supports[0])


def _pick_generator(x_support: set, desc: SylowDesc) -> int:
    # fewest (but nonzero) shared points, ties to the smaller least point
    options = [(len(x_support & s), min(s), i) for i, s in enumerate(desc.supports) if x_support & s]
    return min(options)[2]


def constructive_tau_two_generator(x: Permutation, desc: SylowDesc) -> Permutation:
    """``tau`` in ``P`` (order ``p^2``) with ``order(x∘tau) != p`` for a p-cycle ``x`` outside ``P``.

    Picks one generator of ``P`` and reuses the single-generator cases; the
    other generator's points play the role of outside points.
    """
    if len(desc.generators) != 2:
        raise ZappaShapeError("two-generator construction needs 2p <= n <= 3p-1")
    cycle = _check_p_cycle(x, desc)
    i = _pick_generator(set(cycle), desc)
    return _tau_from_generator(cycle, desc.generators[i], desc.supports[i])


def constructive_tau_degree_2p(x: Permutation, desc: SylowDesc) -> Permutation:
    """``tau`` in ``P`` with ``order(x∘tau) != p`` for p-power-order ``x`` outside ``P`` in ``A_{2p}``."""
    p = desc.p
    if desc.n != 2 * p:
        raise ZappaShapeError("degree-2p construction needs n = 2p")
    cycles = _nontrivial_cycles(x)
    if len(cycles) == 1:
        return constructive_tau_two_generator(x, desc)
    if len(cycles) != 2 or any(len(c) != p for c in cycles):
        raise ZappaShapeError("x must be a p-cycle or a product of two disjoint p-cycles")
    if desc.contains(x):
        raise ZappaShapeError("x lies in P; its coset is trivial")
    supports = desc.supports
    on_support = [next((i for i, sup in enumerate(supports) if set(c) == sup), None) for c in cycles]
    if None not in on_support:
        # one cycle per generator support; a factor outside <c_i> gets a fixed point
        for cyc, i in zip(cycles, on_support):
            if not desc.contains(from_cycles(desc.n, [cyc])):
                return _tau_from_generator(cyc, desc.generators[i], supports[i])
    # each cycle meets both halves; odd length forces two adjacent symbols on one side
    y = cycles[0]
    for u, v in zip(y, y[1:] + y[:1]):
        side = next((i for i, s in enumerate(supports) if u in s and v in s), None)
        if side is not None:
            a1, a2 = u, v
            break
    else:  # pragma: no cover - impossible for odd p
        raise AssertionError("no adjacent pair on one side")
    gen = desc.generators[side]
    tau = power(gen, tau_power_map(gen, a2, a1))
    xt = compose(x, tau)
    xt_cycles = _nontrivial_cycles(xt)
    if len(xt_cycles) == 1 and len(xt_cycles[0]) == p:
        # x∘tau is a p-cycle outside P: finish with the p-cycle construction on the same coset
        return compose(tau, constructive_tau_two_generator(xt, desc))
    return tau


def _p_power_mask(orders: np.ndarray, p: int) -> np.ndarray:
    rest = orders.copy()
    divisible = rest % np.uint64(p) == 0
    while divisible.any():
        rest[divisible] //= np.uint64(p)
        divisible = rest % np.uint64(p) == 0
    return rest == 1


def _is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


@dataclass
class ZappaCosetReport:
    coset_rep: Permutation
    order_multiset: dict
    all_p_power: bool
    has_order_p: bool
    tau_used: Permutation | None = None
    extra: dict = field(default_factory=dict)


def brute_force_coset_report(coset_rep: Permutation, desc: SylowDesc, tau: Permutation | None = None) -> ZappaCosetReport:
    """Orders of every element ``coset_rep∘tau``, ``tau`` in ``P``."""
    if desc.order > BRUTE_ORDER_LIMIT:
        raise ZappaShapeError(f"|P| = {desc.order} exceeds {BRUTE_ORDER_LIMIT}")
    orders = Counter(order(compose(coset_rep, t)) for t in desc.elements())
    return ZappaCosetReport(
        coset_rep=coset_rep,
        order_multiset=dict(sorted(orders.items())),
        all_p_power=all(_is_p_power(o, desc.p) for o in orders),
        has_order_p=desc.p in orders,
        tau_used=tau,
    )


def constructive_tau(x: Permutation, desc: SylowDesc) -> Permutation:
    """Dispatch to the finder matching ``(p, n)`` and the shape of ``x``."""
    p, n = desc.p, desc.n
    if n <= 2 * p - 1:
        return constructive_tau_cyclic(x, desc)
    if n == 2 * p:
        return constructive_tau_degree_2p(x, desc)
    return constructive_tau_two_generator(x, desc)


def constructive_applies(x_cycles: list, desc: SylowDesc) -> bool:
    lengths = sorted(len(c) for c in x_cycles)
    if lengths == [desc.p]:
        return True
    return desc.n == 2 * desc.p and lengths == [desc.p, desc.p]


TARGETS = {
    "cyclic": lambda p, n: p <= n <= 2 * p - 1,
    "n2p": lambda p, n: n == 2 * p,
    "extended": lambda p, n: 2 * p <= n <= 3 * p - 1,
}


def _coset_keys(G: np.ndarray, P: np.ndarray) -> np.ndarray:
    n = G.shape[1]
    return kernels.pack_rows(G[:, P].reshape(-1, n)).reshape(len(G), len(P)).min(axis=1)


def exhaustive_scan(p: int, n: int, target: str, threads: int = 1, chunk: int = 1 << 15) -> Verdict:
    """Visit every nontrivial coset of ``P`` in ``A_n`` and look for an all-p-power coset.

    Every coset that contains a p-power element of a shape the constructive
    finders handle is also solved constructively and compared with the
    brute-force report.
    """
    if target not in TARGETS:
        raise ValueError(f"target must be one of {sorted(TARGETS)}")
    if not TARGETS[target](p, n):
        raise ZappaShapeError(f"n={n} is outside the {target} range for p={p}")
    if n > EXHAUSTIVE_DEGREE_LIMIT:
        raise BudgetError(f"exhaustive scans need n <= {EXHAUSTIVE_DEGREE_LIMIT}")
    t0 = time.perf_counter()
    desc = build_sylow(p, n)
    P = np.array([g.zero_based for g in desc.elements()], dtype=np.intp)
    G = group_table(n, Ambient.ALTERNATING)

    def shard(bounds):
        lo, hi = bounds
        block = G[lo:hi].astype(np.intp)
        keys = _coset_keys(block, P)
        return keys, _p_power_mask(kernels.orders(block), p)

    parts = _run_ordered(shard, _shards(len(G), chunk), threads)
    keys = np.concatenate([k for k, _ in parts])
    ppow = np.concatenate([q for _, q in parts])
    uniq, inverse = np.unique(keys, return_inverse=True)
    non_ppow_count = np.bincount(inverse, weights=~ppow, minlength=len(uniq))
    trivial_key = kernels.pack_rows(np.arange(n)[None, :])[0]
    nontrivial = uniq != trivial_key
    violations = [
        to_image_string(Permutation.from_array(kernels.unpack_rows(np.array([k], np.uint64), n)[0], validate=False))
        for k in uniq[nontrivial & (non_ppow_count == 0)]
    ]

    # one p-power representative per nontrivial coset that has any
    candidates = np.flatnonzero(ppow & (keys != trivial_key))
    _, first = np.unique(inverse[candidates], return_index=True)
    agreements = disagreements = skipped = 0
    for row in candidates[first]:
        x = Permutation.from_array(G[row], validate=False)
        if not constructive_applies(_nontrivial_cycles(x), desc):
            skipped += 1
            continue
        tau = constructive_tau(x, desc)
        ok_tau = desc.contains(tau) and order(compose(x, tau)) != p
        report = brute_force_coset_report(x, desc, tau)
        if ok_tau and not report.all_p_power:
            agreements += 1
        else:
            disagreements += 1
    status = Status.VIOLATED if violations or disagreements else Status.VERIFIED
    stats = {
        "p": p,
        "n": n,
        "target": target,
        "sylow_order": desc.order,
        "cosets_checked": int(nontrivial.sum()),
        "violations": violations,
        "constructive_vs_brute_agreements": agreements,
        "constructive_disagreements": disagreements,
        "cosets_without_constructive_case": skipped,
        "elapsed_ms": _elapsed_ms(t0),
    }
    return Verdict(f"zappa-p{p}-n{n}-{target}", status, Mode.EXHAUSTIVE, [], stats)


def count_p_cycles_outside(desc: SylowDesc) -> int:
    total = comb(desc.n, desc.p) * factorial(desc.p - 1)
    inside = (desc.p - 1) * len(desc.generators)  # p-cycles of P are powers of one generator
    return total - inside


def random_admissible(desc: SylowDesc, rng: np.random.Generator) -> Permutation | None:
    """Random p-power-order element outside ``P`` handled by :func:`constructive_tau`.

    Returns ``None`` when no such element exists (``A_3 = P`` for p = 3).
    """
    p, n = desc.p, desc.n
    double = n == 2 * p and rng.random() < 0.5
    if not double and count_p_cycles_outside(desc) == 0:
        return None
    members = desc.members
    while True:
        pts = [int(v) + 1 for v in rng.permutation(n)]
        cycles = [pts[:p], pts[p:2 * p]] if double else [pts[:p]]
        x = from_cycles(n, cycles)
        if x not in members:
            return x


def lemma_tau_regularity(p: int) -> dict:
    """Count, for ``c = (1 .. p)``, how many exponents send each ``a`` to each ``b``."""
    c = from_cycles(p, [range(1, p + 1)])
    bad = []
    for a in range(1, p + 1):
        for b in range(1, p + 1):
            hits = [k for k in range(p) if power(c, k)(a) == b]
            if len(hits) != 1 or hits[0] != tau_power_map(c, a, b):
                bad.append((a, b, hits))
    return {"p": p, "pairs": p * p, "irregular_pairs": bad, "regular": not bad}


def constructive_agreement(p: int, n: int, samples: int = 1000, seed: int = 0) -> Verdict:
    """Run the constructive finder on random admissible ``x`` and compare with brute force."""
    t0 = time.perf_counter()
    desc = build_sylow(p, n)
    rng = np.random.default_rng(seed)
    agreements = 0
    failures = []
    checked = 0
    for _ in range(samples):
        x = random_admissible(desc, rng)
        if x is None:
            break
        checked += 1
        tau = constructive_tau(x, desc)
        conclusion = order(compose(x, tau)) != p
        report = brute_force_coset_report(x, desc, tau)
        if desc.contains(tau) and conclusion and not report.all_p_power:
            agreements += 1
        else:
            failures.append({"x": to_image_string(x), "tau": to_image_string(tau), "orders": report.order_multiset})
    status = Status.VIOLATED if failures else Status.VERIFIED
    stats = {"p": p, "n": n, "samples": checked, "constructive_vs_brute_agreements": agreements,
             "disagreements": failures[:20], "seed": seed, "elapsed_ms": _elapsed_ms(t0)}
    return Verdict(f"zappa-constructive-p{p}-n{n}", status, Mode.SAMPLED, [], stats)
