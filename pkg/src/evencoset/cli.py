"""Command-line front end.

Exit codes: 0 claim verified/consistent, 1 violation witnessed, 2 usage or
configuration error, 3 inconclusive (budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .centralizer import (
    Ambient,
    CentralizerOrderOverflow,
    EnumerationBudgetError,
    build_x,
    build_y,
    centralizer_order,
    x_centralizer_desc,
)
from .conjectures import (
    DEFAULT_SEED,
    BudgetError,
    Status,
    check_lemma_A_fixing,
    conj13_check,
    conj14_scan_small,
    verify_main_theorem,
)
from .cosets import all_even_cycles, census_csv, centralizer_coset_census, orders_from_census, sampled_coset_census
from .perm import PermutationError, parse_permutation, to_image_string
from .zappa import ZappaShapeError, constructive_agreement, exhaustive_scan, lemma_tau_regularity, tau_power_map

THREADS_ENV = "EVENCOSET_THREADS"
A16_DEFAULT_MAX_COSETS = 10_000

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _common(parser: argparse.ArgumentParser, seed: bool = True, threads: bool = True) -> None:
    if seed:
        parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"root seed (default {DEFAULT_SEED})")
    if threads:
        parser.add_argument("--threads", type=int, default=_default_threads(),
                            help=f"worker threads (default ${THREADS_ENV} or 1)")
    parser.add_argument("--output", "-o", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evencoset", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="cycle-type census of a coset rep·Z(x) in degree 8n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--ambient", choices=[a.value for a in Ambient], default="alternating")
    p.add_argument("--rep", help="coset representative (image list or cycles); default y")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _common(p)

    p = sub.add_parser("verify-theorem", help="all elements of y·Z(x) have only even cycles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--ambient", choices=[a.value for a in Ambient], default="alternating")
    p.add_argument("--lemma-trials", type=int, default=0,
                   help="also run this many random A-preserving z through the lemma check")
    _common(p)

    p = sub.add_parser("conj13", help="odd-order elements in cosets of Z(t) for A4, A8, A16")
    p.add_argument("--group", choices=["A4", "A8", "A16"], required=True)
    p.add_argument("--budget", type=int, help="sampled centralizer elements per coset (A16; default 10000)")
    p.add_argument("--full", action="store_true", help="A16: traverse every coset (long run)")
    p.add_argument("--max-cosets", type=int, help="A16: stop after this many nontrivial cosets")
    _common(p)

    p = sub.add_parser("conj14-scan", help="exhaustive involution-centralizer coset scan of A_d, d <= 8")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--ambient", choices=[a.value for a in Ambient], default="alternating")
    _common(p, seed=False, threads=False)

    p = sub.add_parser("zappa", help="cosets of a Sylow p-subgroup of A_n")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--target", choices=["cyclic", "n2p", "extended"])
    p.add_argument("--mode", choices=["exhaustive", "constructive"], default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    _common(p)

    p = sub.add_parser("lemma-tau", help="regularity of <(1..p)> on its support")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    _common(p, seed=False, threads=False)

    p = sub.add_parser("selftest", help="quick end-to-end checks")
    _common(p, threads=False)
    return parser


def _emit(args, report: dict | str) -> None:
    text = report if isinstance(report, str) else json.dumps(report, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _status_code(status: Status) -> int:
    return {Status.VERIFIED: EXIT_OK, Status.VIOLATED: EXIT_VIOLATION, Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}[status]


def cmd_census(args) -> int:
    t0 = time.perf_counter()
    ambient = Ambient(args.ambient)
    desc = x_centralizer_desc(args.n, ambient)
    x = build_x(args.n)
    rep = parse_permutation(args.rep, 8 * args.n) if args.rep else build_y(args.n)
    try:
        order = centralizer_order(desc)
    except CentralizerOrderOverflow:
        order = None
    if args.mode == "exhaustive":
        census = centralizer_coset_census(rep, desc, threads=args.threads)
        samples = None
    else:
        census = sampled_coset_census(rep, desc, args.samples, args.seed, threads=args.threads)
        samples = args.samples
    all_even = all_even_cycles(census)
    if args.format == "csv":
        _emit(args, census_csv(census))
    else:
        _emit(args, {
            "group": f"{'A' if ambient is Ambient.ALTERNATING else 'S'}_{8 * args.n}",
            "degree": 8 * args.n,
            "n": args.n,
            "x": to_image_string(x),
            "y": to_image_string(rep),
            "centralizer_order": order,
            "census": census.records(),
            "total": census.total,
            "orders": orders_from_census(census),
            "all_even": all_even,
            "mode": args.mode,
            "samples": samples,
            "seed": args.seed,
            "elapsed_ms": int((time.perf_counter() - t0) * 1000),
        })
    return EXIT_OK if all_even else EXIT_VIOLATION


def cmd_verify_theorem(args) -> int:
    verdict = verify_main_theorem(args.n, args.mode, args.samples, args.seed, args.ambient, args.threads)
    report = verdict.to_json()
    status = verdict.status
    if args.lemma_trials:
        lemma = check_lemma_A_fixing(args.n, args.lemma_trials, args.ambient, args.seed)
        report["lemma_check"] = lemma.to_json()
        if lemma.status is Status.VIOLATED:
            status = Status.VIOLATED
    _emit(args, report)
    return _status_code(status)


def cmd_conj13(args) -> int:
    kwargs = {"seed": args.seed, "threads": args.threads}
    if args.group == "A16":
        if not (args.full or args.max_cosets is not None or args.budget is not None):
            raise UsageError("A16 is a long run; opt in with --full, --max-cosets N or --budget B")
        if args.full and args.max_cosets is not None:
            raise UsageError("--full and --max-cosets are exclusive")
        kwargs["max_cosets"] = None if args.full else (args.max_cosets or A16_DEFAULT_MAX_COSETS)
    elif args.full or args.max_cosets is not None:
        raise UsageError("--full/--max-cosets apply to A16 only; A4 and A8 are always exhaustive")
    if args.budget is not None:
        if args.budget < 1:
            raise UsageError("--budget must be positive")
        kwargs["budget_per_coset"] = args.budget
    verdict = conj13_check(args.group, **kwargs)
    _emit(args, verdict.to_json())
    return _status_code(verdict.status)


def cmd_conj14(args) -> int:
    verdict = conj14_scan_small(args.degree, args.ambient)
    _emit(args, verdict.to_json())
    return _status_code(verdict.status)


def _default_target(p: int, n: int) -> str:
    if n <= 2 * p - 1:
        return "cyclic"
    return "n2p" if n == 2 * p else "extended"


def cmd_zappa(args) -> int:
    target = args.target or _default_target(args.p, args.degree)
    if args.mode == "exhaustive":
        verdict = exhaustive_scan(args.p, args.degree, target, threads=args.threads)
    else:
        verdict = constructive_agreement(args.p, args.degree, args.samples, args.seed)
        verdict.stats["target"] = target
    _emit(args, verdict.to_json())
    return _status_code(verdict.status)


def cmd_lemma_tau(args) -> int:
    report = lemma_tau_regularity(args.p)
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b go together")
    if args.a is not None:
        cycle = parse_permutation("(" + " ".join(map(str, range(1, args.p + 1))) + ")", args.p)
        report["a"], report["b"] = args.a, args.b
        report["exponent"] = tau_power_map(cycle, args.a, args.b)
    _emit(args, report)
    return EXIT_OK if report["regular"] else EXIT_VIOLATION


def cmd_selftest(args) -> int:
    checks = []

    def record(name, ok):
        checks.append({"check": name, "pass": bool(ok)})

    census = centralizer_coset_census(build_y(1), x_centralizer_desc(1))
    record("census n=1", census.exps() == {"2^4", "2^1 6^1", "4^2"} and census.total == 96)
    record("verify-theorem n=3 sampled",
           verify_main_theorem(3, "sample", 10_000, args.seed).status is Status.VERIFIED)
    record("lemma A-fixing n=2", check_lemma_A_fixing(2, 2_000, seed=args.seed).status is Status.VERIFIED)
    record("conj13 A4", conj13_check("A4").status is Status.VERIFIED)
    record("conj13 A8", conj13_check("A8").stats["longest_odd_cycle_always"])
    record("conj14 A7", conj14_scan_small(7).status is Status.VERIFIED)
    record("conj14 A8 counterexample", conj14_scan_small(8).status is Status.VIOLATED)
    record("zappa p=3 n=6", exhaustive_scan(3, 6, "n2p").status is Status.VERIFIED)
    record("lemma-tau p=7", lemma_tau_regularity(7)["regular"])
    ok = all(c["pass"] for c in checks)
    _emit(args, {"selftest": checks, "pass": ok, "seed": args.seed})
    return EXIT_OK if ok else EXIT_VIOLATION


COMMANDS = {
    "census": cmd_census,
    "verify-theorem": cmd_verify_theorem,
    "conj13": cmd_conj13,
    "conj14-scan": cmd_conj14,
    "zappa": cmd_zappa,
    "lemma-tau": cmd_lemma_tau,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be positive")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, PermutationError, BudgetError, EnumerationBudgetError, ZappaShapeError,
            OverflowError, ValueError) as exc:
        print(f"evencoset: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
