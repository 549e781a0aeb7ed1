"""Print the term-size profile of a reduction, e.g. the Y combinator applied to g."""
import argparse

from combinators.rewrite import PRESETS, Strategy, reduce
from combinators.syntax import parse


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("term", nargs="?", default="SSK(S(K(SS(S(SSK))))K) g")
    ap.add_argument("--rules", default="sk", choices=sorted(PRESETS))
    ap.add_argument("--strategy", default="lo")
    ap.add_argument("--max-steps", type=int, default=1000)
    ap.add_argument("--max-size", type=int, default=10_000)
    args = ap.parse_args()

    t = parse(args.term)
    out = reduce(t, PRESETS[args.rules], Strategy.parse(args.strategy), args.max_steps,
                 max(args.max_size, t.size), trace=True)
    peak = t.size
    for s in out.trace:
        peak = max(peak, s.size)
        print(f"{s.step}\t{s.size}\t{peak}")
    print(f"# {out.status} after {out.steps} steps, peak size {out.max_size}")


if __name__ == "__main__":
    main()
