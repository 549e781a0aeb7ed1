"""Exhaustive search for the smallest {S,K} terms behaving like a given spec.

    python3 scripts/minimal_transposition.py --max-size 10
"""
import argparse
import time
from dataclasses import dataclass

from combinators.search import builtin_spec, find_minimal


@dataclass
class SearchConfig:
    spec: str = "transpose"
    basis: str = "SK"
    max_size: int = 10
    max_steps: int = 200
    max_term_size: int = 2000


def main():
    cfg = SearchConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(cfg).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    cfg = SearchConfig(**vars(ap.parse_args()))

    t0 = time.perf_counter()
    res = find_minimal(builtin_spec(cfg.spec), tuple(cfg.basis), cfg.max_size,
                       max_steps=cfg.max_steps, max_term_size=cfg.max_term_size)
    for line in res.lines():
        if not line.startswith("unknown "):
            print(line)
    print(f"unknown_total {res.unknown_count}")
    print(f"elapsed {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
