"""Reduce every (or a sample of) {S,K} terms per size and tabulate outcomes as CSV."""
import argparse
import sys
from dataclasses import dataclass

from combinators.search import census, census_csv


@dataclass
class CensusConfig:
    min_size: int = 1
    max_size: int = 7
    sample: int = 0       # 0 means exhaustive
    seed: int = 0
    max_steps: int = 1000
    size_limit: int = 10_000


def main():
    cfg = CensusConfig()
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(cfg).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    ap.add_argument("--out", help="CSV path (default stdout)")
    ns = ap.parse_args()
    out_path = ns.out
    del ns.out
    cfg = CensusConfig(**vars(ns))

    growers = {}
    rows = census(range(cfg.min_size, cfg.max_size + 1), ("S", "K"),
                  max_steps=cfg.max_steps, max_size=cfg.size_limit,
                  sample=cfg.sample or None, seed=cfg.seed, growers=growers)
    text = census_csv(rows)
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for n, found in sorted(growers.items()):
        print(f"size {n}: {len(found)} terms hit the size limit", file=sys.stderr)


if __name__ == "__main__":
    main()
