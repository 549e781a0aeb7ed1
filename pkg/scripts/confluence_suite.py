"""Check confluence and strategy agreement over every {S,K} term up to a size."""
import argparse
import time
from collections import Counter
from dataclasses import dataclass

from combinators.multiway import Budgets, Confluent, NonConfluentWitness, check_confluence
from combinators.rewrite import LEFTMOST_OUTERMOST, RIGHTMOST_INNERMOST, SK, reduce
from combinators.search import enumerate_terms
from combinators.syntax import to_paren


@dataclass
class SuiteConfig:
    max_size: int = 6
    fuel: int = 500
    depth: int = 12


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=SuiteConfig.max_size)
    ap.add_argument("--fuel", type=int, default=SuiteConfig.fuel)
    ap.add_argument("--depth", type=int, default=SuiteConfig.depth)
    cfg = SuiteConfig(**vars(ap.parse_args()))

    t0 = time.perf_counter()
    verdicts, disagreements = Counter(), []
    for n in range(1, cfg.max_size + 1):
        for t in enumerate_terms(n):
            v = check_confluence(t, SK, Budgets(max_depth=cfg.depth))
            verdicts[type(v).__name__] += 1
            if isinstance(v, NonConfluentWitness):
                print("non-confluent:", to_paren(t))
            lo = reduce(t, SK, LEFTMOST_OUTERMOST, cfg.fuel, max(cfg.fuel, t.size))
            ri = reduce(t, SK, RIGHTMOST_INNERMOST, cfg.fuel, max(cfg.fuel, t.size))
            if lo.normalized and ri.normalized and lo.final is not ri.final:
                disagreements.append(t)
            if isinstance(v, Confluent) and lo.normalized and v.normal_form is not lo.final:
                disagreements.append(t)
    for name, k in sorted(verdicts.items()):
        print(f"{name:20s} {k}")
    print(f"disagreements {len(disagreements)}")
    print(f"elapsed {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
