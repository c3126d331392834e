"""Command-line front end: ``lienil <command> ...``.

Exit status: 0 on success, 1 when the computed verdict is a failure the command
treats as an error (decomposing a non-solvable graph, a failing Novikov check,
a sweep mismatch, a failing embedding table), 2 on usage, input or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath

from .algebra import AlgebraFormatError, FlavorError, dump_algebra, load_algebra, verify_novikov
from .graph import (
    GraphError,
    NotSolvableError,
    classify,
    decompose,
    parse_graph,
)
from .linalg import QQ, GF, Field
from .lpa import EMBEDDINGS, embedding_fixture, verify_matrix_units
from .novikov import CHECKS, make_truncated_derivation_novikov, run_checks
from .sweep import SweepTooLargeError, oracle_sweep

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_VERDICT, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else FilePath(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _load_graph(path: str):
    try:
        return parse_graph(_read(path))
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from None


def _field(p: int | None) -> Field:
    if p is None or p == 0:
        return QQ
    try:
        return GF(p)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(args, payload: dict, human: list[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n" if args.json else "\n".join(human) + "\n"
    if args.out:
        FilePath(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _block_line(b: dict) -> str:
    ring = "K" if b["kind"] == "MatK" else "K[x,x^-1]"
    copies = f"{b['copies']} x " if "copies" in b else ""
    return f"  {copies}M_{b['size']}({ring})  at {b['at']}"


# -- commands --------------------------------------------------------------------------


def cmd_classify(args) -> int:
    g = _load_graph(args.graph)
    report = classify(g, args.char)
    d = report.to_dict()
    human = [
        f"characteristic: {d['characteristic']}",
        f"solvable: {str(d['solvable']).lower()}",
        f"nilpotent: {str(d['nilpotent']).lower()}",
    ]
    if d["witness"]:
        human.append(f"witness: {json.dumps(d['witness'], sort_keys=True)}")
    _emit(args, d, human)
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _load_graph(args.graph)
    try:
        report = decompose(g, args.char)
    except NotSolvableError as exc:
        payload = {"error": "not solvable", **exc.report.to_dict()}
        if args.json:
            _emit(args, payload, [])
        print(f"error: not Lie solvable; witness {json.dumps(exc.report.witness, sort_keys=True)}", file=sys.stderr)
        return EXIT_VERDICT
    d = report.to_dict()
    human = ["blocks:"] + [_block_line(b) for b in d["blocks"]]
    if d["quotient_emitters"]:
        human.append(f"quotient: K^({', '.join(d['quotient_emitters'])})")
    human.append(f"exact: {str(d['exact']).lower()}")
    _emit(args, d, human)
    return EXIT_OK


def cmd_novikov(args) -> int:
    try:
        alg = load_algebra(_read(args.algebra))
    except AlgebraFormatError as exc:
        raise InputError(f"{args.algebra}: {exc}") from None
    verdict = verify_novikov(alg)
    if not verdict.holds:
        print(f"error: not a Novikov algebra; {verdict.identity} fails at basis triple {verdict.to_dict()['triple']}",
              file=sys.stderr)
        return EXIT_INPUT
    try:
        alg = alg.with_flavor("verified_novikov")
        names = args.checks.split(",") if args.checks else None
        reports = run_checks(alg, names, trials=args.trials, seed=args.seed)
    except (ValueError, FlavorError) as exc:
        raise InputError(str(exc)) from None
    ok = all(r.holds for r in reports)
    payload = {"all_hold": ok, "seed": args.seed, "trials": args.trials, "checks": [r.to_dict() for r in reports]}
    human = [f"{'holds ' if r.holds else 'FAILS '} {r.claim_id}" for r in reports]
    human.append("all checks hold" if ok else "some checks fail")
    _emit(args, payload, human)
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_oracle_sweep(args) -> int:
    primes = tuple(args.p) if args.p else (2, 3, 5)
    for p in primes:
        _field(p)
    try:
        report = oracle_sweep(args.max_vertices, args.max_edges, primes)
    except SweepTooLargeError as exc:
        raise InputError(str(exc)) from None
    d = report.to_dict()
    human = [
        f"graphs enumerated: {d['graphs']}",
        f"row-finite no-exit graphs: {d['no_exit_graphs']}",
        f"solvable (char 2 / char not 2): {d['solvable_char2']} / {d['solvable_char_not2']}",
        f"nilpotent: {d['nilpotent']}",
        f"oracle comparisons: {d['oracle_comparisons']}",
        f"mismatches: {len(d['mismatches'])}",
        f"invariant failures: {len(d['invariant_failures'])}",
    ]
    human += [f"  mismatch: {json.dumps(m, sort_keys=True)}" for m in d["mismatches"]]
    human += [f"  invariant: {json.dumps(m, sort_keys=True)}" for m in d["invariant_failures"]]
    _emit(args, d, human)
    return EXIT_OK if report.ok else EXIT_VERDICT


def cmd_embeddings(args) -> int:
    names = sorted(EMBEDDINGS) if args.which == "all" else [args.which]
    fields = [_field(p) for p in args.p] if args.p else [GF(2), GF(3), QQ]
    results, human = [], []
    for name in names:
        for F in fields:
            _, units = embedding_fixture(name, F)
            v = verify_matrix_units(units, 3)
            results.append({"embedding": name, "field": F.tag, **v.to_dict()})
            line = f"{name} over {F.tag}: {'pass' if v.holds else 'FAIL'} ({v.products_checked} products)"
            if v.failure:
                line += f" {json.dumps(v.failure, sort_keys=True)}"
            human.append(line)
    ok = all(r["holds"] for r in results)
    _emit(args, {"all_hold": ok, "results": results}, human)
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_gen_novikov(args) -> int:
    try:
        alg = make_truncated_derivation_novikov(args.n, args.low, _field(args.p))
    except (ValueError, FlavorError) as exc:
        raise InputError(str(exc)) from None
    text = dump_algebra(alg) + "\n"
    if args.out:
        FilePath(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def _char(text: str) -> str:
    key = text.strip().lower()
    if key not in ("2", "not2"):
        raise argparse.ArgumentTypeError("expected 2 or not2")
    return key


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lienil", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--out", help="write output to this file instead of stdout")

    sp = sub.add_parser("classify", help="Lie solvability/nilpotency of L_K(E) from the graph")
    sp.add_argument("graph", help="graph file ('-' for stdin)")
    sp.add_argument("--char", type=_char, required=True, help="characteristic of K: 2 or not2")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("decompose", help="matrix-block decomposition of a Lie solvable L_K(E)")
    sp.add_argument("graph")
    sp.add_argument("--char", type=_char, required=True, help="characteristic of K: 2 or not2")
    common(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("novikov", help="run the commutator-ideal checks on a Novikov algebra file")
    sp.add_argument("algebra", help="structure-constant JSON file ('-' for stdin)")
    sp.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECKS)}")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_novikov)

    sp = sub.add_parser("oracle-sweep", help="compare the classifier with gl-block derived series on all small graphs")
    sp.add_argument("--max-vertices", type=int, default=5)
    sp.add_argument("--max-edges", type=int, default=6)
    sp.add_argument("--p", type=int, action="append", help="prime for the oracle (repeatable; default 2, 3, 5)")
    common(sp)
    sp.set_defaults(func=cmd_oracle_sweep)

    sp = sub.add_parser("embeddings", help="verify the built-in 3x3 matrix-unit tables")
    sp.add_argument("which", choices=sorted(EMBEDDINGS) + ["all"], nargs="?", default="all")
    sp.add_argument("--p", type=int, action="append", help="field characteristic, 0 for Q (repeatable; default 2, 3, Q)")
    common(sp)
    sp.set_defaults(func=cmd_embeddings)

    sp = sub.add_parser("gen-novikov", help="write the truncated-derivation algebra on x^low..x^(n-1)")
    sp.add_argument("n", type=int)
    sp.add_argument("--low", type=int, default=2, help="lowest degree kept (default 2)")
    sp.add_argument("--p", type=int, default=0, help="field characteristic, 0 for Q")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen_novikov)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
