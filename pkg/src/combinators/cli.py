"""Command-line entry point: ``combinators <subcommand> ...``.

Exit status: 0 success, 1 bad input, 2 when a definite answer was asked for
and the result is Unknown/Inconclusive.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import lam, multiway, rewrite, search
from . import term as tm
from .syntax import NOTATIONS, PAREN, ParseError, detect_notation, parse, to_text

EXIT_OK, EXIT_BAD_INPUT, EXIT_UNDECIDED = 0, 1, 2

CONFIG_KEYS = {
    "max_steps": int, "max_size": int, "spec_steps": int, "spec_size": int,
    "max_depth": int, "max_nodes": int, "max_term_size": int, "seed": int,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def load_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown config entry {line!r}")
            try:
                out[key] = CONFIG_KEYS[key](value.strip())
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key}") from None
    return out


def _read_input(args) -> str:
    if getattr(args, "file", None):
        with open(args.file, encoding="utf-8") as fh:
            return fh.read().strip()
    if args.expr is not None and args.expr != "-":
        return args.expr
    return sys.stdin.read().strip()


def _term(text: str, args) -> tm.Term:
    notation = args.input_notation or detect_notation(text)
    return parse(text, notation, historical_c=args.historical_c)


def _rules(name: str) -> rewrite.RuleSet:
    if name in rewrite.PRESETS:
        return rewrite.PRESETS[name]
    if os.path.exists(name):
        with open(name, encoding="utf-8") as fh:
            return rewrite.parse_rules(fh.read(), name=os.path.basename(name))
    raise UsageError(f"unknown rule set {name!r} (sk, ski, j or a rules file)")


def _basis(text: str) -> list[str]:
    names = [p for p in text.replace(",", " ").split()] if ("," in text or " " in text) else list(text)
    if not names:
        raise UsageError("empty basis")
    return [parse(n).atom.name for n in names]


def _sizes(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(p) for p in text.split(",")]


def _budgets(args) -> multiway.Budgets:
    return multiway.Budgets(args.max_depth, args.max_nodes, args.max_term_size)


# -- subcommands -------------------------------------------------------------


def cmd_parse(args, out):
    t = _term(_read_input(args), args)
    print(to_text(t, args.notation), file=out)
    return EXIT_OK


def cmd_reduce(args, out):
    t = _term(_read_input(args), args)
    rs = _rules(args.rules)
    strategy = rewrite.Strategy.parse(args.strategy)
    res = rewrite.reduce(t, rs, strategy, args.max_steps, max(args.max_size, t.size),
                         detect_cycles=args.detect_cycles, trace=args.trace)
    if args.trace:
        for line in rewrite.trace_lines(res, start=t):
            print(line, file=out)
    print(f"status={res.status} steps={res.steps} size={res.final.size} max_size={res.max_size}",
          file=out)
    print(to_text(res.final, args.notation), file=out)
    if args.require_normal and not res.normalized:
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_compile(args, out):
    t = lam.parse_lambda(_read_input(args))
    c = lam.compile_lambda(t, optimize=args.optimize, pure_sk=args.pure_sk)
    print(to_text(c, args.notation), file=out)
    return EXIT_OK


def cmd_search(args, out):
    if args.spec_file:
        with open(args.spec_file, encoding="utf-8") as fh:
            spec = search.BehaviorSpec.load(fh.read(), name=os.path.basename(args.spec_file))
    else:
        try:
            spec = search.builtin_spec(args.spec)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    res = search.find_minimal(spec, _basis(args.basis), args.max_size, _rules(args.rules),
                              args.spec_steps, args.spec_size)
    for line in res.lines():
        print(line, file=out)
    # minimality is only certified when nothing below the answer is Unknown
    return EXIT_UNDECIDED if res.unknown_count or not res.found else EXIT_OK


def cmd_enumerate(args, out):
    basis = _basis(args.basis)
    if args.count:
        print(search.count_terms(args.size, len(basis)), file=out)
        return EXIT_OK
    for t in search.enumerate_terms(args.size, basis):
        print(to_text(t, args.notation), file=out)
    return EXIT_OK


def cmd_multiway(args, out):
    t = _term(_read_input(args), args)
    rs = _rules(args.rules)
    budgets = _budgets(args)
    g = multiway.build_graph(t, rs, budgets)
    stats = multiway.graph_stats(g)
    print(" ".join(f"{k}={v if not isinstance(v, list) else ','.join(v) or '-'}"
                   for k, v in stats.items()), file=out)
    for nf in g.normal_forms():
        if rs.is_normal(nf):
            print("normal_form " + to_text(nf, args.notation), file=out)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(g.to_dot())
    if args.check_confluence:
        verdict = multiway.check_confluence(t, rs, budgets)
        if isinstance(verdict, multiway.Confluent):
            print("Confluent " + to_text(verdict.normal_form, args.notation), file=out)
        elif isinstance(verdict, multiway.NonConfluentWitness):
            print("NonConfluent " + to_text(verdict.first, args.notation) + " | "
                  + to_text(verdict.second, args.notation), file=out)
        else:
            print("Inconclusive " + verdict.reason, file=out)
            return EXIT_UNDECIDED
    return EXIT_OK


def cmd_census(args, out):
    rows = search.census(_sizes(args.sizes), _basis(args.basis), _rules(args.rules),
                         max_steps=args.max_steps, max_size=args.max_size,
                         sample=args.sample, seed=args.seed)
    out.write(search.census_csv(rows))
    return EXIT_OK


def cmd_church(args, out):
    def compiled(n):
        return lam.compile_lambda(lam.church_encode(n), optimize=args.optimize)

    if args.encode is not None:
        print(lam.to_text(lam.church_encode(args.encode)), file=out)
        print(to_text(compiled(args.encode), args.notation), file=out)
        return EXIT_OK
    if args.decode is not None:
        text = args.decode
        n = lam.church_decode(parse(text, detect_notation(text)), _rules(args.rules),
                              args.max_steps, args.max_size)
        print("Unknown" if n is None else n, file=out)
        return EXIT_UNDECIDED if n is None else EXIT_OK
    op, (m, n) = ("plus", args.plus) if args.plus else ("times", args.times)
    fn = lam.compile_lambda(lam.PLUS if op == "plus" else lam.TIMES, optimize=args.optimize)
    t = fn(compiled(m), compiled(n))
    got = lam.church_decode(t, rs=_rules(args.rules), max_steps=args.max_steps, max_size=args.max_size)
    print(f"{op} {m} {n} = {'Unknown' if got is None else got}", file=out)
    return EXIT_UNDECIDED if got is None else EXIT_OK


# -- wiring ------------------------------------------------------------------


def build_parser(cfg: dict | None = None) -> argparse.ArgumentParser:
    cfg = cfg or {}
    p = _Parser(prog="combinators", description="S/K combinator toolkit")
    p.add_argument("--config", help="key=value file with default budgets")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def term_input(sp):
        sp.add_argument("expr", nargs="?", help="expression text, '-' or omitted for stdin")
        sp.add_argument("-f", "--file", help="read the expression from a file")
        sp.add_argument("--from", dest="input_notation", choices=NOTATIONS,
                        help="input notation (default: detect)")
        sp.add_argument("--historical-c", action="store_true",
                        help="read C as the cancellation combinator K")

    def output(sp):
        sp.add_argument("--notation", choices=NOTATIONS, default=PAREN)

    def rules(sp, default="sk"):
        sp.add_argument("--rules", default=default, help="sk, ski, j or a rules file")

    sp = sub.add_parser("parse", help="echo the canonical form")
    term_input(sp), output(sp)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("reduce", help="normalize under a strategy")
    term_input(sp), output(sp), rules(sp)
    sp.add_argument("--strategy", default="leftmost-outermost",
                    help="lo, ri, random[:seed] or index:k")
    sp.add_argument("--max-steps", type=int, default=cfg.get("max_steps", rewrite.DEFAULT_MAX_STEPS))
    sp.add_argument("--max-size", type=int, default=cfg.get("max_size", rewrite.DEFAULT_MAX_SIZE))
    sp.add_argument("--detect-cycles", action="store_true")
    sp.add_argument("--trace", action="store_true", help="emit JSON-lines trace records")
    sp.add_argument("--require-normal", action="store_true",
                    help="exit 2 unless a normal form is reached")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("compile", help="lambda term to combinators")
    sp.add_argument("expr", nargs="?")
    sp.add_argument("-f", "--file")
    output(sp)
    sp.add_argument("--optimize", action="store_true", help="enable the eta rule")
    sp.add_argument("--pure-sk", action="store_true", help="expand I to SKK")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("search", help="smallest terms meeting a behavioral spec")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--spec", default="identity", help=", ".join(search.SPECS))
    g.add_argument("--spec-file", help="two lines: arity, target over v1..vn")
    sp.add_argument("--basis", default="SK")
    sp.add_argument("--max-size", type=int, default=9)
    sp.add_argument("--spec-steps", type=int, default=cfg.get("spec_steps", search.DEFAULT_SPEC_STEPS))
    sp.add_argument("--spec-size", type=int, default=cfg.get("spec_size", search.DEFAULT_SPEC_SIZE))
    rules(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("enumerate", help="list all terms of one size")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--basis", default="SK")
    sp.add_argument("--count", action="store_true", help="print only the count")
    output(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("multiway", help="all-paths reduction graph")
    term_input(sp), output(sp), rules(sp)
    sp.add_argument("--dot", help="write the graph as DOT to this path")
    sp.add_argument("--check-confluence", action="store_true")
    sp.add_argument("--max-depth", type=int, default=cfg.get("max_depth", multiway.DEFAULT_DEPTH))
    sp.add_argument("--max-nodes", type=int, default=cfg.get("max_nodes", multiway.DEFAULT_NODES))
    sp.add_argument("--max-term-size", type=int,
                    default=cfg.get("max_term_size", multiway.DEFAULT_TERM_SIZE))
    sp.set_defaults(func=cmd_multiway)

    sp = sub.add_parser("census", help="halting statistics as CSV")
    sp.add_argument("--sizes", default="1..6", help="a..b or a,b,c")
    sp.add_argument("--basis", default="SK")
    sp.add_argument("--sample", type=int, help="terms drawn per size (default: all)")
    sp.add_argument("--seed", type=int, default=cfg.get("seed", 0))
    sp.add_argument("--max-steps", type=int, default=cfg.get("max_steps", 1000))
    sp.add_argument("--max-size", type=int, default=cfg.get("max_size", rewrite.DEFAULT_MAX_SIZE))
    rules(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("church", help="Church numeral demos")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--encode", type=int, metavar="N")
    g.add_argument("--decode", metavar="TERM")
    g.add_argument("--plus", type=int, nargs=2, metavar=("M", "N"))
    g.add_argument("--times", type=int, nargs=2, metavar=("M", "N"))
    sp.add_argument("--optimize", action="store_true")
    sp.add_argument("--max-steps", type=int, default=cfg.get("max_steps", rewrite.DEFAULT_MAX_STEPS))
    sp.add_argument("--max-size", type=int, default=cfg.get("max_size", rewrite.DEFAULT_MAX_SIZE))
    output(sp)
    rules(sp, default="ski")
    sp.set_defaults(func=cmd_church)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        pre = _Parser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        cfg = load_config(known.config) if known.config else {}
        args = build_parser(cfg).parse_args(argv)
        return args.func(args, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, ParseError, lam.LambdaSyntaxError, lam.CompileError,
            rewrite.RewriteError, tm.TermError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else exc
        print(f"error: {msg}", file=err)
        return EXIT_BAD_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
