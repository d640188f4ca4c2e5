"""Command-line entry point: ``aglab check|classify|enum|verify-theorems|replay``.

Exit codes: 0 success, 1 property or replay failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, _backend
from .classify import ClassKind, classify
from .enumeration import EnumerationError, EnumSpec, canonical_form, count_parallel, enumerate_magmas
from .harness import chain_soundness, mutated_fixture, run_suite
from .magma import MagmaError, is_left_invertive, parse_magma, probe, serialize_magma
from .terms import TermError, format_term, parse_chains, replay_chain

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_magma(path: str):
    try:
        return parse_magma(_read(path))
    except MagmaError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _mark(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_check(args) -> int:
    m = _load_magma(args.path)
    rep = probe(m)
    if args.format == "json":
        print(_dump(rep.to_dict(m)))
        return EXIT_OK
    d = rep.to_dict(m)
    print(f"order: {m.order}")
    for key in ("is_left_invertive", "is_medial", "is_paramedial", "satisfies_law4", "is_ag_star",
                "satisfies_permutation_identity", "is_commutative", "is_associative", "s_equals_s2"):
        print(f"  {key:32s} {_mark(d[key])}")
    print(f"  {'left identities':32s} {' '.join(d['left_identities']) or '-'}")
    print(f"  {'right identities':32s} {' '.join(d['right_identities']) or '-'}")
    print(f"  {'S^2':32s} {{{', '.join(d['square'])}}}")
    return EXIT_OK


def cmd_classify(args) -> int:
    m = _load_magma(args.path)
    report = classify(m)
    is_ag = is_left_invertive(m)
    if args.format == "json":
        print(_dump({"is_ag": is_ag, "classes": report.to_dict(m)}))
        return EXIT_OK
    if not is_ag:
        print("note: is_ag=false (not left invertive); classes computed anyway")
    for kind, entry in report.to_dict(m).items():
        status = "holds" if entry["global"] else f"fails (first at {entry['first_failing']})"
        print(f"{kind:20s} {status}")
        for elem, w in entry["witnesses"].items():
            print(f"    {elem}: {'-' if w is None else ','.join(w)}")
    return EXIT_OK


def _enum_spec(args) -> EnumSpec:
    classes = tuple(ClassKind.parse(k) for k in args.require_class or ())
    return EnumSpec(
        args.order,
        ag=args.ag,
        ag_star=args.ag_star,
        left_identity=args.left_identity,
        classes=classes,
        up_to_iso=args.up_to_iso,
        count_only=args.count_only,
        fill_order=args.fill_order,
    )


def cmd_enum(args) -> int:
    try:
        spec = _enum_spec(args)
    except (EnumerationError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    workers = args.workers
    if spec.count_only:
        if args.naive:
            n = sum(1 for _ in enumerate_magmas(spec, naive=True))
        else:
            n = count_parallel(spec, workers) if not spec.classes else sum(1 for _ in enumerate_magmas(spec, workers))
        if args.format == "json":
            print(_dump({"order": spec.order, "constraints": spec.describe(), "count": n}))
        else:
            print(n)
        return EXIT_OK
    try:
        stream = enumerate_magmas(spec, workers, naive=args.naive)
        if args.canonical_keys:
            keys = sorted({canonical_form(m).key() for m in stream})
            for key in keys:
                print(key)
            return EXIT_OK
        for m in stream:
            if args.format == "json":
                print(serialize_magma(m, "json"))
            else:
                print(serialize_magma(m, "text"))
                print()
    except EnumerationError as exc:
        raise UsageError(str(exc)) from None
    return EXIT_OK


def cmd_verify_theorems(args) -> int:
    if args.max_order < 1:
        raise UsageError("--max-order must be at least 1")
    if max(args.max_order, args.ag_star_max_order or 0) >= 5:
        print("warning: order 5 universes take minutes to hours", file=sys.stderr)
    fixture = mutated_fixture() if args.mutate_fixture else None
    results = run_suite(args.max_order, args.ag_star_max_order, workers=args.workers,
                        exploratory=args.exploratory, fixture=fixture)
    failed = [r for r in results if not r.exploratory and not r.passed]
    if args.format == "json":
        print(_dump({
            "max_order": args.max_order,
            "passed": not failed,
            "properties": {r.property_id: r.to_dict() for r in results},
        }))
    else:
        for r in results:
            tag = "explore" if r.exploratory else ("PASS" if r.passed else "FAIL")
            line = f"[{tag:7s}] {r.property_id:40s} checked={r.checked:<6d} violations={len(r.violations):<4d} {r.elapsed:6.2f}s  {r.universe}"
            print(line)
            for note in r.notes:
                print(f"          {note}")
            if not r.exploratory:
                for v in r.violations[:5]:
                    print(f"          {v.detail}: {''.join(map(str, v.magma.flat))}")
        print("all pass/fail properties hold" if not failed else f"{len(failed)} propert{'y' if len(failed) == 1 else 'ies'} failed")
    return EXIT_FAIL if failed else EXIT_OK


def bundled_chains_text() -> str:
    return resources.files("aglab").joinpath("data/proofs.chains").read_text(encoding="utf-8")


def cmd_replay(args) -> int:
    text = bundled_chains_text() if args.path is None else _read(args.path)
    try:
        chains = parse_chains(text)
    except TermError as exc:
        raise UsageError(str(exc)) from None
    if not chains:
        print("warning: no chains found", file=sys.stderr)
    reports = [replay_chain(c) for c in chains]
    sound = {c.name: chain_soundness(c, args.soundness_order) for c in chains} if args.soundness_order else {}
    failed = [r for r in reports if not r.passed] + [r for r in sound.values() if not r.passed]
    if args.format == "json":
        out = {"passed": not failed, "chains": [r.to_dict() for r in reports]}
        if sound:
            out["soundness"] = {k: v.to_dict() for k, v in sound.items()}
        print(_dump(out))
    else:
        for c, r in zip(chains, reports):
            print(f"{'PASS' if r.passed else 'FAIL'} {c.name} ({len(r.steps)} steps)")
            for s in r.steps:
                if s.ok:
                    print(f"    {s.index:2d}. {format_term(s.after):36s} {s.justification}")
                else:
                    print(f"    {s.index:2d}. {format_term(s.after):36s} GAP: {s.message}")
            if c.name in sound:
                sr = sound[c.name]
                print(f"    finite models: {'ok' if sr.passed else 'FAILED'} ({sr.checked} models)")
        for r in reports:
            for g in r.gaps:
                print(f"error: chain {r.chain}, step {g.index}: {g.message}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="aglab", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({_backend.NAME} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="probe identities of a Cayley table")
    s.add_argument("path")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("classify", parents=[common], help="regularity classes with witnesses")
    s.add_argument("path")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("enum", parents=[common], help="enumerate magmas under constraints")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--ag", action="store_true", help="left invertive")
    s.add_argument("--ag-star", action="store_true", help="AG* (implies --ag)")
    s.add_argument("--left-identity", action="store_true")
    s.add_argument("--class", dest="require_class", action="append", metavar="KIND",
                   help="require a global regularity class (repeatable)")
    s.add_argument("--up-to-iso", action="store_true")
    s.add_argument("--count-only", action="store_true")
    s.add_argument("--canonical-keys", action="store_true",
                   help="print the sorted canonical flattenings, one per line")
    s.add_argument("--fill-order", choices=("row", "column"), default="row")
    s.add_argument("--naive", action="store_true", help="use the exhaustive oracle (order <= 3)")
    s.set_defaults(func=cmd_enum)

    s = sub.add_parser("verify-theorems", parents=[common], help="run the theorem suite")
    s.add_argument("--max-order", type=int, default=4)
    s.add_argument("--ag-star-max-order", type=int, default=None)
    s.add_argument("--exploratory", action="store_true",
                   help="also run the no-left-identity variants and counterexample searches")
    s.add_argument("--mutate-fixture", action="store_true",
                   help="check a deliberately corrupted copy of the example table")
    s.set_defaults(func=cmd_verify_theorems)

    s = sub.add_parser("replay", parents=[common], help="replay derivation chains")
    s.add_argument("path", nargs="?", default=None, help="chain file (default: bundled proofs)")
    s.add_argument("--soundness-order", type=int, default=0,
                   help="also evaluate chains in AG-groupoids with left identity up to this order")
    s.set_defaults(func=cmd_replay)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    args.format = getattr(args, "format", "text")
    args.workers = getattr(args, "workers", 1)
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
