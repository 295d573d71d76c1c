"""Command-line front end.

Exit codes: ``prove`` returns 0 for Positive/Nonnegative, 1 for a negative
witness and 2 when undecided; ``find-zero`` returns 0 for ZeroFound, 1 for
NoZero and 2 when undecided; ``replay`` returns 0 when the certificate
checks out and 1 otherwise. Unreadable input exits with 64.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds
from .expansion import expand, expand_word, sign_classify
from .polyring import ParseError, StructureError, evaluate, parse_form, parse_rational, parse_system, serialize_form
from .sds import Certificate, SdsConfig, Verdict, parse_goal, replay_certificate, sds_search, worker_cap
from .simplexgeo import SimplexMatrix, is_on_simplex, parse_word
from .zerodetect import (DEFAULT_BUDGET, SystemInput, ZeroVerdict, construct_F, detect_zero,
                         theorem2_threshold)

EX_USAGE = 64
PROVE_EXIT = {Verdict.POSITIVE: 0, Verdict.NONNEGATIVE: 0, Verdict.NEGATIVE: 1, Verdict.UNDECIDED: 2}
ZERO_EXIT = {ZeroVerdict.FOUND: 0, ZeroVerdict.NONE: 1, ZeroVerdict.UNDECIDED: 2}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    sys.stdout.write(text)


def _workers(value: str) -> int:
    return worker_cap() if value == "max" else max(1, int(value))


def _fmt(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def cmd_expand(args) -> int:
    f = parse_form(_read(args.form))
    if args.matrix:
        g = expand(f, SimplexMatrix.from_text(_read(args.matrix)))
    else:
        g = expand_word(f, parse_word(args.word or "", f.n))
    _emit(serialize_form(g), args.output)
    return 0


def cmd_classify(args) -> int:
    f = parse_form(_read(args.form))
    _emit(f"{sign_classify(f)}\n", args.output)
    return 0


def cmd_bound(args) -> int:
    f = parse_form(_read(args.form))
    lines = [
        f"n={f.n}",
        f"d={f.d}",
        f"L_f={_fmt(bounds.normalized_height(f))}",
        f"H={_fmt(bounds.raw_height(f))}",
        f"derivative_bound={_fmt(bounds.derivative_bound(f))}",
    ]
    if args.point:
        point = [parse_rational(t) for t in args.point.replace(",", " ").split()]
        lines += bounds.theorem1_bound(f, point).to_lines()
    if args.min_lower:
        b = parse_rational(args.min_lower)
        threshold = b / bounds.theorem1_denominator(f.n, f.d, bounds.normalized_height(f))
        lines.append(f"depth_threshold={_fmt(threshold)}")
        lines.append(f"required_depth={bounds.required_depth(f.n, threshold)}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_prove(args) -> int:
    f = parse_form(_read(args.form))
    config = SdsConfig(max_depth=args.max_depth, goal=parse_goal(args.goal), traversal=args.traversal,
                       max_nodes=args.max_nodes, workers=_workers(args.workers))
    root = SimplexMatrix.from_text(_read(args.root)) if args.root else None
    cert = sds_search(f, config, root)
    _emit(cert.to_text(), args.output)
    return PROVE_EXIT[cert.verdict]


def cmd_find_zero(args) -> int:
    system = SystemInput(parse_system(_read(args.system)))
    report = detect_zero(system, args.budget, workers=_workers(args.workers), traversal=args.traversal,
                         max_nodes=args.max_nodes)
    _emit(report.to_text(), args.output)
    return ZERO_EXIT[report.verdict]


def cmd_threshold(args) -> int:
    system = SystemInput(parse_system(_read(args.system)))
    tb = theorem2_threshold(system)
    lines = [f"F={serialize_form(construct_F(system)).strip().replace(chr(10), ' | ')}"]
    lines += tb.threshold.to_lines()
    lines.append(f"theoretical_depth={tb.depth}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_replay(args) -> int:
    text = _read(args.certificate)
    if text.startswith("# simplexcert zero report"):
        # a NoZero report carries a certificate for F; ZeroFound carries a point
        system = SystemInput(parse_system(_read(args.form)))
        head, _, cert_text = text.partition("--- certificate for F\n")
        fields = dict(line.split("=", 1) for line in head.splitlines() if "=" in line)
        verdict = ZeroVerdict(fields["verdict"])
        if verdict is ZeroVerdict.FOUND:
            p = [parse_rational(t) for t in fields["witness.point"].split()]
            ok = is_on_simplex(p) and all(evaluate(f, p) == 0 for f in system.forms)
        elif verdict is ZeroVerdict.NONE:
            ok = bool(cert_text) and replay_certificate(construct_F(system), Certificate.from_text(cert_text))
        else:
            ok = True
    else:
        ok = replay_certificate(parse_form(_read(args.form)), Certificate.from_text(text))
    sys.stdout.write("valid\n" if ok else "INVALID\n")
    return 0 if ok else 1


def cmd_self_test(args) -> int:
    from .golden import run_self_test

    return 0 if run_self_test(Path(args.golden_dir) if args.golden_dir else None) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simplexcert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def search_opts(sp):
        sp.add_argument("--traversal", default="breadth-first", choices=["breadth-first", "depth-first"])
        sp.add_argument("--max-nodes", type=int, default=250_000, help="frontier cap before giving up")
        sp.add_argument("--workers", default="1", help="worker processes, or 'max'")
        sp.add_argument("-o", "--output")

    sp = sub.add_parser("expand", help="expand a form on a matrix or a barycentric word")
    sp.add_argument("form")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--matrix", help="matrix file, n lines of n rationals")
    g.add_argument("--word", help="comma-separated permutations, e.g. 123,213")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("classify", help="sign class of the coefficient vector")
    sp.add_argument("form")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("bound", help="heights, diameter threshold and subdivision depth")
    sp.add_argument("form")
    sp.add_argument("--point", help="point of the simplex for the diameter threshold")
    sp.add_argument("--min-lower", help="known positive lower bound on |min f| over the simplex")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("prove", help="search for a sign certificate")
    sp.add_argument("form")
    sp.add_argument("--goal", default="ProveStrictPositive",
                    help="ProveStrictPositive|ProveNonnegative|Decide (or strict/nonneg/decide)")
    sp.add_argument("--max-depth", type=int, default=6)
    sp.add_argument("--root", help="matrix file of the starting cell (default: whole simplex)")
    search_opts(sp)
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("find-zero", help="decide real zeros of a '---'-separated system")
    sp.add_argument("system")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    search_opts(sp)
    sp.set_defaults(func=cmd_find_zero)

    sp = sub.add_parser("threshold", help="diameter threshold and theoretical depth for a system")
    sp.add_argument("system")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("replay", help="check a certificate or zero report")
    sp.add_argument("form", help="form file (or system file for zero reports)")
    sp.add_argument("certificate")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("self-test", help="run the built-in golden checks")
    sp.add_argument("--golden-dir")
    sp.set_defaults(func=cmd_self_test)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, StructureError, OSError, ValueError, KeyError) as exc:
        print(f"simplexcert: error: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
