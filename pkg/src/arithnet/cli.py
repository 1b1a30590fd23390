"""Command-line entry point: ``arithnet <subcommand> ...``.

Exit status: 0 success, 1 a verified property failed (counterexample or
depth-contract violation), 2 usage, parse or precondition error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, passes, problems
from .compile import compile_formula
from .errors import ArithNetError
from .formula import Schedule, parse_formula, schedule
from .network import depth, format_network, parse_network, parse_rational
from .semantics import DEFAULT_PIECE_BUDGET, denote, evaluate

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_network(path: str):
    return parse_network(Path(path).read_text(encoding="utf-8"))


def _write(text: str, path: str | None, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _parse_point(text: str) -> list[Fraction]:
    return [parse_rational(t.strip()) for t in text.split(",")] if text.strip() else []


def _parse_sched(text: str) -> Schedule:
    try:
        m, base = text.split(",")
        return schedule(int(m), parse_rational(base.strip()))
    except ValueError:
        raise UsageError(f"--sched expects 'm,base', got {text!r}") from None


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def cmd_compile(args, out) -> int:
    f = parse_formula(Path(args.formula).read_text(encoding="utf-8"), args.nvars)
    _write(format_network(compile_formula(f, args.nvars)), args.output, out)
    return OK


def cmd_eval(args, out) -> int:
    net = _load_network(args.net)
    result = evaluate(net, _parse_point(args.point), want_trace=args.trace)
    if result.trace is not None:
        for gid in net.order:
            out.write(f"{gid} {net.index[gid].kind} {_fmt_value(result.trace[gid])}\n")
    out.write(f"accept={_fmt_value(result.accept)}\n")
    return OK


def cmd_denote(args, out) -> int:
    out.write(denote(_load_network(args.net), args.budget).report())
    return OK


def cmd_pass(args, out) -> int:
    net = _load_network(args.net)
    info = None
    if args.kind == "neg-elim":
        result = passes.eliminate_negations(net)
        contract = analysis.check_depth_contract(net, result, "neg-elim")
    elif args.kind == "pair-sel":
        result, info = passes.pair_selections(net)
        contract = analysis.check_depth_contract(net, result, "pair-sel")
    elif args.kind == "compactify":
        if args.delta is None or args.eps is None:
            raise UsageError("compactify needs --delta and --eps")
        result = passes.compactify(net, args.delta, args.eps, add_ball=not args.no_ball)
        contract = analysis.check_depth_contract(net, result, "compactify")
    elif args.kind == "t-union":
        sched = _parse_sched(args.sched) if args.sched else schedule(net.input_arity)
        copies = passes.t_union_copies(net, sched, add_ball=not args.no_ball)
        result = passes.t_union(net, sched, add_ball=not args.no_ball)
        contract = analysis.check_depth_contract(net, result, "t-union", copies=copies)
    else:
        if args.r is None or args.copies is None:
            raise UsageError("fiber needs --r and --copies")
        result = passes.fibered_product(net, args.r, args.copies)
        contract = analysis.check_depth_contract(net, result, "fiber", copies=args.copies)
    _write(format_network(result), args.output, out)
    if args.emit_info:
        if info is None:
            info = passes.find_pairs(result) if args.kind != "fiber" else passes.PairedSelectionInfo(())
        _write(info.to_text(), args.emit_info, out)
    sys.stderr.write(contract.to_text() + "\n")
    return OK if contract.ok else FAILED


def cmd_check_equiv(args, out) -> int:
    report = analysis.equivalent_on_samples(
        _load_network(args.a), _load_network(args.b), args.samples, args.seed, args.box)
    out.write(report.to_text() + "\n")
    return OK if report.equivalent else FAILED


def cmd_depth(args, out) -> int:
    rep = depth(_load_network(args.net))
    out.write(f"depth={rep.network_depth} size={rep.size}\n")
    return OK


def cmd_bound(args, out) -> int:
    fn = analysis.lower_bound_general if args.which == "general" else analysis.lower_bound_projection
    out.write(f"{fn(args.betti, args.n, args.c1, args.c2):.12g}\n")
    return OK


def cmd_gen(args, out) -> int:
    _write(format_network(problems.parity_network(args.n)), args.output, out)
    return OK


def cmd_demo(args, out) -> int:
    demo = problems.parity_bound_demo(args.n, args.c1, args.c2)
    limit = problems.parity_depth_limit(args.n)
    out.write(f"n={args.n} lower={demo.lower:.6f} upper_depth={demo.upper_depth} "
              f"depth_limit={limit:g} b=n^3 (constant 1 assumed)\n")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arithnet", description="Arithmetic networks: evaluation, denotation, passes, bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("compile", help="compile a negation-free formula into a network")
    s.add_argument("-f", "--formula", required=True)
    s.add_argument("-o", "--output")
    s.add_argument("--nvars", type=int)
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("eval", help="evaluate a network at a rational point")
    s.add_argument("net")
    s.add_argument("--point", required=True, help="comma-separated rationals")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("denote", help="print per-gate denotations")
    s.add_argument("net")
    s.add_argument("--budget", type=int, default=DEFAULT_PIECE_BUDGET)
    s.set_defaults(func=cmd_denote)

    s = sub.add_parser("pass", help="run a rewriting pass")
    s.add_argument("kind", choices=analysis.PASS_KINDS)
    s.add_argument("net")
    s.add_argument("-o", "--output")
    s.add_argument("--delta", type=_rational)
    s.add_argument("--eps", type=_rational)
    s.add_argument("--sched")
    s.add_argument("--no-ball", action="store_true")
    s.add_argument("--r", type=int)
    s.add_argument("--copies", type=int)
    s.add_argument("--emit-info", metavar="PATH")
    s.set_defaults(func=cmd_pass)

    s = sub.add_parser("check-equiv", help="differential equivalence test")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--box", type=_rational, default=Fraction(4))
    s.set_defaults(func=cmd_check_equiv)

    s = sub.add_parser("depth", help="print depth and size")
    s.add_argument("net")
    s.set_defaults(func=cmd_depth)

    s = sub.add_parser("bound", help="evaluate a lower-bound formula")
    s.add_argument("which", choices=("general", "projection"))
    s.add_argument("--betti", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c1", type=_rational, default=Fraction(1))
    s.add_argument("--c2", type=_rational, default=Fraction(1))
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("gen", help="generate a problem network")
    s.add_argument("problem", choices=("parity",))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("demo", help="run a demonstration")
    s.add_argument("name", choices=("parity-bound",))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c1", type=_rational, default=Fraction(1))
    s.add_argument("--c2", type=_rational, default=Fraction(1))
    s.set_defaults(func=cmd_demo)
    return p


def run(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"arithnet: error: {exc}\n")
    except (ArithNetError, ValueError) as exc:
        sys.stderr.write(f"arithnet: {type(exc).__name__}: {exc}\n")
    except OSError as exc:
        sys.stderr.write(f"arithnet: {exc}\n")
    return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
