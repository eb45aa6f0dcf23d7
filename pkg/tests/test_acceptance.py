"""One test group per acceptance criterion; the conftest hook prints a PASS/FAIL line for each.

Tolerances are fixed here: set equalities and counts are exact, runtimes are
upper bounds on this machine, and sampled checks use fixed seeds.
"""

import json
import time

import numpy as np
import pytest

from evencoset.centralizer import (
    Ambient,
    build_y,
    definitional_centralizer,
    enumerate_centralizer,
    group_table,
    x_centralizer_desc,
)
from evencoset.cli import main
from evencoset.conjectures import (
    DEFAULT_SEED,
    Status,
    check_lemma_A_fixing,
    conj13_check,
    conj14_scan_small,
    coset_label_of,
    verify_main_theorem,
)
from evencoset.cosets import WitnessKind
from evencoset.perm import CycleType, compose, cycle_type, from_cycles, order, to_image_string
from evencoset.zappa import build_sylow, constructive_agreement, exhaustive_scan

X16 = {"2^8", "2^4 4^2", "2^2 6^2", "2^5 6^1", "2^2 4^1 8^1", "2^3 10^1", "6^1 10^1",
       "4^1 12^1", "2^1 14^1", "2^1 4^2 6^1", "8^2", "4^4"}

A16_BUDGET_COSETS = 20_000


def cli_json(capsys, *argv):
    code = main(list(argv))
    out, _ = capsys.readouterr()
    return code, json.loads(out)


def strip_elapsed(obj):
    if isinstance(obj, dict):
        return {k: strip_elapsed(v) for k, v in obj.items() if k != "elapsed_ms"}
    if isinstance(obj, list):
        return [strip_elapsed(v) for v in obj]
    return obj


@pytest.mark.criterion(1, "golden census n=1")
def test_c01_census_n1(capsys):
    t0 = time.perf_counter()
    code, rep = cli_json(capsys, "census", "--n", "1")
    assert time.perf_counter() - t0 < 1.0
    assert code == 0
    assert rep["centralizer_order"] == 96 and rep["total"] == 96
    assert {r["exp"] for r in rep["census"]} == {"2^4", "2^1 6^1", "4^2"}
    assert rep["orders"] == [2, 4, 6]
    assert rep["all_even"] is True


@pytest.mark.criterion(2, "golden census n=2")
def test_c02_census_n2(capsys):
    t0 = time.perf_counter()
    code, rep = cli_json(capsys, "census", "--n", "2", "--threads", "1")
    assert time.perf_counter() - t0 < 120
    assert code == 0
    assert rep["centralizer_order"] == 7_741_440 and rep["total"] == 7_741_440
    assert {r["exp"] for r in rep["census"]} == X16
    assert len(X16) == 12 and all(sum(CycleType.from_exp(e).parts) == 16 for e in X16)
    assert rep["orders"] == [2, 4, 6, 8, 10, 12, 14, 30]
    assert rep["all_even"] is True


@pytest.mark.criterion(3, "structural centralizer equals definitional filter over A_8")
def test_c03_oracle_equivalence():
    t0 = time.perf_counter()
    assert len(group_table(8)) == 20_160
    brute = definitional_centralizer(from_cycles(8, [(1, 2), (3, 4)]))
    structural = set(enumerate_centralizer(x_centralizer_desc(1)))
    assert structural == brute and len(brute) == 96
    assert time.perf_counter() - t0 < 30


@pytest.mark.criterion(4, "main theorem by generators plus 10^5 samples, n=3..6")
def test_c04_main_theorem_sampling():
    t0 = time.perf_counter()
    for n in (3, 4, 5, 6):
        v = verify_main_theorem(n, "sample", samples=100_000, seed=DEFAULT_SEED)
        assert v.stats["generators_fix_A"]
        assert v.stats["all_even"] and not v.witnesses
        assert v.status is Status.VERIFIED
    assert time.perf_counter() - t0 < 60


@pytest.mark.criterion(5, "A-fixing z gives all-even y∘z, both ambients")
@pytest.mark.parametrize("ambient", ["alternating", "symmetric"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_c05_lemma_property(n, ambient):
    v = check_lemma_A_fixing(n, 10_000, ambient, seed=DEFAULT_SEED + n)
    assert v.stats["violations"] == 0 and v.status is Status.VERIFIED


@pytest.mark.criterion(6, "A_4: two nontrivial cosets of four 3-cycles")
def test_c06_conj13_A4():
    v = conj13_check("A4")
    assert v.status is Status.VERIFIED
    assert v.stats["cosets_checked"] == 2
    assert v.stats["coset_cycle_types"] == [{"1^1 3^1": 4}, {"1^1 3^1": 4}]


@pytest.mark.criterion(7, "A_8: all 104 nontrivial cosets contain a 7-cycle")
def test_c07_conj13_A8():
    t0 = time.perf_counter()
    v = conj13_check("A8")
    assert time.perf_counter() - t0 < 60
    assert v.status is Status.VERIFIED
    assert v.stats["cosets_checked"] == 104
    assert v.stats["longest_odd_cycle"] == 7 and v.stats["longest_odd_cycle_always"]
    assert all(w.kind is WitnessKind.ODD_ORDER_FOUND for w in v.witnesses)


def _check_A16(v):
    assert v.stats["cosets_unresolved"] == 0
    assert v.stats["longest_odd_cycle_always"]
    for w in v.witnesses:
        assert w.kind is WitnessKind.ODD_ORDER_FOUND and order(w.element) % 2 == 1


@pytest.mark.criterion(8, "A_16: odd-order element and 15-cycle in every nontrivial coset")
def test_c08_conj13_A16_budgeted(capsys):
    code, rep = cli_json(capsys, "conj13", "--group", "A16", "--max-cosets", str(A16_BUDGET_COSETS))
    assert code in (0, 3)
    assert rep["cosets_checked"] == A16_BUDGET_COSETS
    assert rep["cosets_unresolved"] == 0 and rep["longest_odd_cycle_always"]
    v = conj13_check("A16", max_cosets=A16_BUDGET_COSETS)
    _check_A16(v)
    for w in v.witnesses[::97]:
        assert cycle_type(w.element).exp() == "1^1 15^1"


@pytest.mark.criterion(8, "A_16: odd-order element and 15-cycle in every nontrivial coset")
def test_c08_conj13_A16_full():
    v = conj13_check("A16")
    assert v.stats["cosets_checked"] == 2_027_024
    _check_A16(v)
    assert v.status is Status.VERIFIED


@pytest.mark.criterion(9, "degree-8 involution scan finds the y coset; degrees 5-7 clean")
def test_c09_conj14(capsys):
    code, rep = cli_json(capsys, "conj14-scan", "--degree", "8")
    assert code == 1
    x = from_cycles(8, [(1, 2), (3, 4)])
    Z = definitional_centralizer(x)
    Z_rows = np.array([z.zero_based for z in sorted(Z)], dtype=np.int8)
    label = to_image_string(coset_label_of(build_y(1), Z_rows))
    hits = [w for w in rep["witnesses"] if w["coset_label"] == label]
    assert len(hits) == 1
    assert hits[0]["t_cycles"] == "(1 2)(3 4)" and hits[0]["kind"] == "none_found" and hits[0]["exhausted"]
    assert all(order(compose(build_y(1), z)) % 2 == 0 for z in Z)
    for degree in (5, 6, 7):
        assert cli_json(capsys, "conj14-scan", "--degree", str(degree))[0] == 0


@pytest.mark.criterion(10, "Sylow p-subgroup cosets are never all p-power (p=3 n=4..8, p=5 n=10)")
def test_c10_zappa_exhaustive():
    t0 = time.perf_counter()
    cases = [(3, 4, "cyclic"), (3, 5, "cyclic"), (3, 6, "n2p"), (3, 7, "extended"), (3, 8, "extended"),
             (5, 10, "n2p")]
    for p, n, target in cases:
        v = exhaustive_scan(p, n, target)
        assert v.status is Status.VERIFIED, (p, n)
        assert v.stats["violations"] == [] and v.stats["constructive_disagreements"] == 0
    assert time.perf_counter() - t0 < 120


ADMISSIBLE = [(p, n) for p in (3, 5, 7) for n in range(p, 3 * p) if (p, n) != (3, 3)]


@pytest.mark.criterion(11, "constructive tau agrees with brute force, 10^3 samples per (p, n)")
@pytest.mark.parametrize("p,n", ADMISSIBLE)
def test_c11_constructive_agreement(p, n):
    v = constructive_agreement(p, n, samples=1000, seed=DEFAULT_SEED + 100 * p + n)
    assert v.stats["samples"] == 1000
    assert v.stats["constructive_vs_brute_agreements"] == 1000
    assert v.status is Status.VERIFIED


def test_c11_p3_n3_has_no_admissible_x():
    # A_3 is its own Sylow 3-subgroup, so there is no nontrivial coset to test
    assert build_sylow(3, 3).order == 3 == len(group_table(3))


DETERMINISM_RUNS = [
    lambda threads: verify_main_theorem(3, "sample", 100_000, DEFAULT_SEED, threads=threads),
    lambda threads: verify_main_theorem(1, threads=threads),
    lambda threads: conj13_check("A8", threads=threads),
    lambda threads: conj13_check("A16", max_cosets=2000, threads=threads, shard_size=300),
    lambda threads: exhaustive_scan(3, 7, "extended", threads=threads),
    lambda threads: check_lemma_A_fixing(2, 10_000, Ambient.SYMMETRIC),
    lambda threads: conj14_scan_small(8),
    lambda threads: constructive_agreement(5, 12, 200, seed=DEFAULT_SEED),
]


@pytest.mark.criterion(12, "same seed, any thread count: identical verdicts, censuses, witnesses")
@pytest.mark.parametrize("run", range(len(DETERMINISM_RUNS)))
def test_c12_determinism(run):
    make = DETERMINISM_RUNS[run]
    reports = [strip_elapsed(make(threads).to_json(max_witnesses=10**7)) for threads in (1, 4, 1)]
    assert reports[0] == reports[1] == reports[2]


@pytest.mark.criterion(12, "same seed, any thread count: identical verdicts, censuses, witnesses")
def test_c12_census_cli_threads(capsys):
    a = cli_json(capsys, "census", "--n", "2", "--mode", "sample", "--samples", "100000", "--threads", "1")
    b = cli_json(capsys, "census", "--n", "2", "--mode", "sample", "--samples", "100000", "--threads", "4")
    assert a[0] == b[0] and strip_elapsed(a[1]) == strip_elapsed(b[1])
