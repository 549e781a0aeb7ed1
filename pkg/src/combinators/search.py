"""Exhaustive enumeration, behavioral specs, minimal-combinator search and
termination censuses."""
from __future__ import annotations

import csv
import enum
import io
import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from . import term as tm
from .rewrite import SK, RuleSet, Status, reduce
from .syntax import parse, to_paren
from .term import Term

DEFAULT_SPEC_STEPS = 200
DEFAULT_SPEC_SIZE = 2000


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def count_terms(n: int, basis_size: int) -> int:
    return catalan(n - 1) * basis_size ** n


# -- enumeration -------------------------------------------------------------

# a shape is None (a leaf) or a pair (left_shape, right_shape)


@lru_cache(maxsize=None)
def shapes(n: int) -> tuple:
    if n == 1:
        return (None,)
    return tuple(
        (left, right)
        for k in range(1, n)
        for left in shapes(k)
        for right in shapes(n - k)
    )


def _label(shape, leaves: Iterator[Term]) -> Term:
    if shape is None:
        return next(leaves)
    f = _label(shape[0], leaves)
    return tm.app(f, _label(shape[1], leaves))


def _basis_terms(basis) -> list[Term]:
    out = []
    for b in basis:
        if isinstance(b, Term):
            out.append(b)
        elif isinstance(b, tm.Atom):
            out.append(tm.leaf(b))
        else:
            out.append(tm.sym(b) if not tm.STORE.has_atom(b) else tm.leaf(b))
    return out


def enumerate_terms(n: int, basis: Sequence = ("S", "K"), shard: tuple[int, int] | None = None
                    ) -> Iterator[Term]:
    """Every term with ``n`` leaves over ``basis``, each exactly once.

    Order: shapes from the recursive left-size split, then labelings in
    basis order (first leaf slowest).  ``shard=(i, k)`` yields only the
    shapes whose index is i mod k.
    """
    if n < 1:
        raise ValueError("size must be >= 1")
    leaves = _basis_terms(basis)
    if n == 1:
        yield from leaves
        return
    memo: dict[int, list[Term]] = {}

    def labelings(shape) -> list[Term]:
        if shape is None:
            return leaves
        got = memo.get(id(shape))
        if got is None:
            got = [tm.app(f, a) for f in labelings(shape[0]) for a in labelings(shape[1])]
            memo[id(shape)] = got
        return got

    for si, (left, right) in enumerate(shapes(n)):
        if shard is not None and si % shard[1] != shard[0]:
            continue
        rights = labelings(right)
        for f in labelings(left):
            for a in rights:
                yield tm.app(f, a)


# -- behavioral specs ---------------------------------------------------------


class Verdict(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BehaviorSpec:
    """``t v1 .. v_arity`` must normalize to ``target``."""

    arity: int
    target: Term
    name: str = "custom"

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("spec arity must be >= 1")

    @property
    def variables(self) -> list[Term]:
        return list(tm.variables(self.arity))

    @classmethod
    def from_text(cls, arity: int, target: str, name: str = "custom") -> "BehaviorSpec":
        tm.variables(arity)
        return cls(arity, parse(target), name)

    @classmethod
    def load(cls, text: str, name: str = "file") -> "BehaviorSpec":
        """Two non-comment lines: the arity, then the target over v1..vn."""
        lines = [ln.strip() for ln in text.splitlines()
                 if ln.strip() and not ln.strip().startswith("#")]
        if len(lines) != 2:
            raise ValueError("spec file needs exactly two lines: arity, target")
        try:
            arity = int(lines[0])
        except ValueError:
            raise ValueError(f"spec arity {lines[0]!r} is not an integer") from None
        return cls.from_text(arity, lines[1], name)

    def __str__(self):
        vs = " ".join(v.atom.name for v in self.variables)
        return f"{self.name}: X {vs} = {to_paren(self.target)}"


SPECS = {
    "identity": (1, "v1"),
    "constant": (2, "v1"),
    "compose": (3, "v1(v2 v3)"),
    "transpose": (3, "v1 v3 v2"),
}


def builtin_spec(name: str) -> BehaviorSpec:
    try:
        arity, target = SPECS[name]
    except KeyError:
        raise KeyError(f"unknown spec {name!r}; known: {', '.join(SPECS)}") from None
    return BehaviorSpec.from_text(arity, target, name)


class _Undecided(Exception):
    pass


class _Mismatch(Exception):
    pass


def satisfies(t: Term, spec: BehaviorSpec, rs: RuleSet = SK,
              max_steps: int = DEFAULT_SPEC_STEPS, max_size: int = DEFAULT_SPEC_SIZE) -> Verdict:
    """Leftmost-outermost check of ``t v1..vn`` against the behavior target.

    Yes exactly when the normal form is the target.  Reduction is followed
    in normal order, so once a subterm has an inert head its spine is
    final; a head or argument-count mismatch there is a definite No even
    if the rest would never normalize.  Running out of fuel first is
    Unknown.
    """
    u = t(*spec.variables)
    if u.size > max_size:
        return Verdict.UNKNOWN
    budget = [max_steps]
    try:
        _match(u, spec.target, rs, budget, 0, max_size)
    except _Mismatch:
        return Verdict.NO
    except _Undecided:
        return Verdict.UNKNOWN
    return Verdict.YES


def _match(u: Term, target: Term, rs: RuleSet, budget: list, outer: int, max_size: int):
    # explicit stack of (subterm, target, size outside the subterm)
    todo = [(u, target, outer)]
    while todo:
        u, target, outer = todo.pop()
        while True:
            head, args = tm.spine(u)
            rule = rs.outermost_match(head, args)
            if rule is None:
                break
            if budget[0] <= 0:
                raise _Undecided
            budget[0] -= 1
            u = tm.fold(rule.fire(args), args[rule.arity:])
            if u.size + outer > max_size:
                raise _Undecided
        thead, targs = tm.spine(target)
        if head is not thead or len(args) != len(targs):
            raise _Mismatch
        # arguments are reduced left to right; pushed reversed for the stack
        # the context of argument i holds final forms before it, originals after
        sizes_after = 0
        pending = []
        for a, ta in zip(reversed(args), reversed(targs)):
            pending.append((a, ta, sizes_after))
            sizes_after += a.size
        before = outer + head.size
        frames = []
        for a, ta, after in reversed(pending):
            frames.append((a, ta, before + after))
            before += ta.size
        todo.extend(reversed(frames))


# -- minimal search ----------------------------------------------------------


@dataclass
class SearchResult:
    spec: BehaviorSpec
    min_size: int | None
    witnesses: list[Term]
    scanned: dict[int, int] = field(default_factory=dict)
    unknown: dict[int, list[Term]] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.min_size is not None

    @property
    def unknown_count(self) -> int:
        return sum(len(v) for v in self.unknown.values())

    def lines(self) -> Iterator[str]:
        yield f"spec {self.spec}"
        yield "min_size " + (str(self.min_size) if self.found else "NotFound")
        for n in sorted(self.scanned):
            yield f"scanned size={n} candidates={self.scanned[n]} unknown={len(self.unknown.get(n, ()))}"
        yield f"witnesses {len(self.witnesses)}"
        for w in self.witnesses:
            yield f"witness {to_paren(w)}"
        for n in sorted(self.unknown):
            for u in self.unknown[n]:
                yield f"unknown {to_paren(u)}"


def find_minimal(spec: BehaviorSpec, basis: Sequence = ("S", "K"), max_size: int = 9,
                 rs: RuleSet = SK, max_steps: int = DEFAULT_SPEC_STEPS,
                 max_term_size: int = DEFAULT_SPEC_SIZE) -> SearchResult:
    """Scan sizes upward; stop at the first size with a Yes witness."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    result = SearchResult(spec, None, [])
    for n in range(1, max_size + 1):
        witnesses, unknown, count = [], [], 0
        for t in enumerate_terms(n, basis):
            count += 1
            v = satisfies(t, spec, rs, max_steps, max_term_size)
            if v is Verdict.YES:
                witnesses.append(t)
            elif v is Verdict.UNKNOWN:
                unknown.append(t)
        result.scanned[n] = count
        if unknown:
            result.unknown[n] = unknown
        if witnesses:
            result.min_size = n
            result.witnesses = witnesses
            break
    return result


# -- census ------------------------------------------------------------------


@dataclass
class CensusRow:
    size: int
    total: int = 0
    halted: int = 0
    cycles: int = 0
    step_limit: int = 0
    size_limit: int = 0
    total_steps: int = 0
    max_steps: int = 0
    max_size: int = 0
    exhaustive: bool = True

    @property
    def mean_steps(self) -> float:
        return self.total_steps / self.halted if self.halted else 0.0

    def add(self, status: Status, steps: int, biggest: int):
        self.total += 1
        if status is Status.NORMAL_FORM:
            self.halted += 1
            self.total_steps += steps
            self.max_steps = max(self.max_steps, steps)
        elif status is Status.CYCLE:
            self.cycles += 1
        elif status is Status.STEP_LIMIT:
            self.step_limit += 1
        else:
            self.size_limit += 1
        self.max_size = max(self.max_size, biggest)

    def consistent(self) -> bool:
        return self.halted + self.cycles + self.step_limit + self.size_limit == self.total


CENSUS_FIELDS = ("size", "total", "halted", "cycles", "step_limit", "size_limit",
                 "mean_steps", "max_steps", "max_size")


def census(sizes: Sequence[int], basis: Sequence = ("S", "K"), rs: RuleSet = SK,
           max_steps: int = 1000, max_size: int = 10_000, sample: int | None = None,
           seed: int = 0, growers: list | None = None) -> list[CensusRow]:
    """Leftmost-outermost halting statistics per size.

    With ``sample=k`` each size draws k distinct enumeration indices from a
    ``random.Random(seed)`` stream; otherwise every term is run.  Terms that
    hit the size limit are appended to ``growers`` when given.
    """
    rng = random.Random(seed)
    leaves = _basis_terms(basis)
    rows = []
    for n in sizes:
        total = count_terms(n, len(leaves))
        row = CensusRow(n, exhaustive=sample is None or sample >= total)
        if row.exhaustive:
            terms = enumerate_terms(n, leaves)
        else:
            terms = (term_at(n, i, leaves) for i in sorted(rng.sample(range(total), sample)))
        for t in terms:
            out = reduce(t, rs, max_steps=max_steps, max_size=max(max_size, t.size),
                         detect_cycles=True)
            row.add(out.status, out.steps, out.max_size)
            if growers is not None and out.status is Status.SIZE_LIMIT:
                growers.append(t)
        rows.append(row)
    return rows


def term_at(n: int, index: int, basis: Sequence = ("S", "K")) -> Term:
    """The ``index``-th term of :func:`enumerate_terms` without enumerating."""
    leaves = _basis_terms(basis)
    per_shape = len(leaves) ** n
    shape = shapes(n)[index // per_shape]
    rem = index % per_shape
    labels = []
    for _ in range(n):
        rem, d = divmod(rem, len(leaves))
        labels.append(leaves[d])
    labels.reverse()
    return _label(shape, iter(labels))


def census_csv(rows: Sequence[CensusRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CENSUS_FIELDS)
    for r in rows:
        w.writerow([r.size, r.total, r.halted, r.cycles, r.step_limit, r.size_limit,
                    f"{r.mean_steps:.4f}", r.max_steps, r.max_size])
    return buf.getvalue()
