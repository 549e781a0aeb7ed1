"""Rule sets, redex finding, single steps and fueled normalization."""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import term as tm
from .syntax import parse, to_paren
from .term import FUNCTION, ARGUMENT, Term

DEFAULT_MAX_STEPS = 10_000
DEFAULT_MAX_SIZE = 10_000
CYCLE_SEEN_LIMIT = 100_000
NORMAL_MEMO_LIMIT = 200_000


class RewriteError(ValueError):
    pass


# -- rules --------------------------------------------------------------------

# A template is a Term (copied verbatim), an int (placeholder index, 0-based)
# or a pair (fun_template, arg_template).


def _instantiate(tpl, args: Sequence[Term]) -> Term:
    if isinstance(tpl, int):
        return args[tpl]
    if isinstance(tpl, tuple):
        return tm.app(_instantiate(tpl[0], args), _instantiate(tpl[1], args))
    return tpl


@dataclass(frozen=True)
class Rule:
    """``head x1 .. x_arity -> result``.

    ``guard`` lists literal terms the first arguments must equal, so J's
    ``J J x y z`` is head J, arity 4, guard ``(J,)``.  Placeholders in
    ``result`` are 0-based indices into all ``arity`` arguments.
    """

    name: str
    head: tm.Atom
    arity: int
    result: object
    guard: tuple = ()
    priority: int = 0

    def __post_init__(self):
        if self.head.kind != tm.BASIS:
            raise RewriteError(f"rule head {self.head.name!r} is not a basis atom")
        if self.arity < 1 or len(self.guard) > self.arity:
            raise RewriteError(f"bad arity {self.arity} for rule {self.name!r}")
        _check_template(self.result, self.arity)

    def matches(self, args: Sequence[Term]) -> bool:
        if len(args) < self.arity:
            return False
        for g, a in zip(self.guard, args):
            if g is not a:
                return False
        return True

    def fire(self, args: Sequence[Term]) -> Term:
        return _instantiate(self.result, args)


def _check_template(tpl, arity):
    if isinstance(tpl, int):
        if not 0 <= tpl < arity:
            raise RewriteError(f"placeholder x{tpl + 1} out of range for arity {arity}")
    elif isinstance(tpl, tuple):
        _check_template(tpl[0], arity)
        _check_template(tpl[1], arity)
    elif isinstance(tpl, Term):
        for a in tm.atoms_of(tpl):
            if a.kind != tm.BASIS:
                raise RewriteError(f"template mentions inert atom {a.name!r}")
    else:
        raise RewriteError(f"bad template {tpl!r}")


class RuleSet:
    """An immutable, ordered collection of rules.

    Holds a memo of which terms are normal forms under these rules; terms
    are hash-consed and rule sets never change, so the memo stays valid.
    """

    def __init__(self, name: str, rules: Sequence[Rule]):
        self.name = name
        self.rules = tuple(sorted(rules, key=lambda r: r.priority))
        by_head: dict[tm.Atom, list[Rule]] = {}
        for r in self.rules:
            by_head.setdefault(r.head, []).append(r)
        self._by_head = {h: tuple(rs) for h, rs in by_head.items()}
        self._min_arity = {h: min(r.arity for r in rs) for h, rs in by_head.items()}
        self._normal: dict[Term, bool] = {}

    def __repr__(self):
        return f"RuleSet({self.name!r}, {len(self.rules)} rules)"

    @property
    def heads(self):
        return set(self._by_head)

    def spine_matches(self, head: Term, args: Sequence[Term]) -> list[Rule]:
        """Matching rules for a spine, one per distinct arity, outermost first."""
        rules = self._by_head.get(head.atom)
        if not rules or len(args) < self._min_arity[head.atom]:
            return []
        found: dict[int, Rule] = {}
        for r in rules:
            if r.arity not in found and r.matches(args):
                found[r.arity] = r
        return [found[a] for a in sorted(found, reverse=True)]

    def outermost_match(self, head: Term, args: Sequence[Term]) -> Rule | None:
        rules = self._by_head.get(head.atom)
        if not rules or len(args) < self._min_arity[head.atom]:
            return None
        best = None
        for r in rules:
            if r.matches(args) and (best is None or r.arity > best.arity):
                best = r
        return best

    def is_normal(self, t: Term) -> bool:
        memo = self._normal
        hit = memo.get(t)
        if hit is not None:
            return hit
        if len(memo) > NORMAL_MEMO_LIMIT:
            # the memo holds terms strongly; dropping it lets the store reclaim them
            memo.clear()
        # post-order over spines without recursion
        stack = [t]
        while stack:
            node = stack[-1]
            if node in memo:
                stack.pop()
                continue
            head, args = tm.spine(node)
            if self.outermost_match(head, args) is not None:
                memo[node] = False
                stack.pop()
                continue
            pending = [a for a in args if a not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[node] = all(memo[a] for a in args)
            stack.pop()
        return memo[t]


def _rule(name, head, arity, result_text, guard=()):
    """Build a rule from a result written over x1..xn in paren notation."""
    return _rule_from_text(name, f"{head} " + " ".join(guard) + " " + " ".join(
        f"x{i}" for i in range(len(guard) + 1, arity + 1)), result_text)


def _template_from_term(t: Term, params: dict[tm.Atom, int]):
    if t.atom is not None:
        return params.get(t.atom, t)
    f = _template_from_term(t.fun, params)
    a = _template_from_term(t.arg, params)
    if isinstance(f, Term) and isinstance(a, Term):
        return tm.app(f, a)
    return (f, a)


def _split_glued(t: tm.Term, params: dict) -> tm.Term:
    # "a(bc)" tokenizes bc as one name; split it when every letter is a parameter
    by_name = {a.name: tm.leaf(a) for a in params}

    def leaf(atom):
        if atom in params or len(atom.name) == 1 or not all(ch in by_name for ch in atom.name):
            return tm.leaf(atom)
        out = by_name[atom.name[0]]
        for ch in atom.name[1:]:
            out = tm.app(out, by_name[ch])
        return out

    def walk(u: tm.Term) -> tm.Term:
        return leaf(u.atom) if u.atom is not None else tm.app(walk(u.fun), walk(u.arg))

    return walk(t)


def _rule_from_text(name: str, lhs: str, rhs: str, priority: int = 0) -> Rule:
    """``lhs`` is ``Head p1 p2 ..`` where each p is a parameter name or a basis
    atom used as a literal guard (only allowed as a prefix)."""
    head_t, pats = tm.spine(parse(lhs))
    head = head_t.atom
    if head.kind != tm.BASIS:
        head = tm.register(head.name, tm.BASIS)
    params: dict[tm.Atom, int] = {}
    guard = []
    for i, p in enumerate(pats):
        if p.atom is None:
            raise RewriteError(f"rule {name!r}: nested pattern {to_paren(p)!r} unsupported")
        if p.atom.kind == tm.BASIS:
            if params:
                raise RewriteError(f"rule {name!r}: literal {p.atom.name} after a parameter")
            guard.append(p)
        else:
            if p.atom in params:
                raise RewriteError(f"rule {name!r}: repeated parameter {p.atom.name}")
            params[p.atom] = i
    tpl = _template_from_term(_split_glued(parse(rhs), params), params)
    return Rule(name, head, len(pats), tpl, tuple(guard), priority)


def parse_rules(text: str, name: str = "file") -> RuleSet:
    """Rules file: one ``lhs = rhs`` per line, paren notation, ``#`` comments.

    Earlier lines take priority.  A line may be prefixed ``label:`` to name
    the rule; otherwise the head atom's name is used.
    """
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        label = None
        if ":" in line:
            label, line = (p.strip() for p in line.split(":", 1))
        if "=" not in line:
            raise RewriteError(f"line {lineno}: expected 'lhs = rhs'")
        lhs, rhs = (p.strip() for p in line.split("=", 1))
        # register the head as basis before the lhs is parsed
        head_name = lhs.split()[0][0] if lhs[:1].isupper() else lhs.split()[0]
        tm.register(head_name, tm.BASIS)
        try:
            rule = _rule_from_text(label or head_name, lhs, rhs, priority=lineno)
        except (RewriteError, ValueError) as exc:
            raise RewriteError(f"line {lineno}: {exc}") from None
        rules.append(rule)
    if not rules:
        raise RewriteError("rules file defines no rules")
    return RuleSet(name, rules)


S_RULE = Rule("S", tm.S.atom, 3, ((0, 2), (1, 2)))
K_RULE = Rule("K", tm.K.atom, 2, 0)
I_RULE = Rule("I", tm.I.atom, 1, 0)
# "J J J x y -> x" must be tried before "J J x y z -> x z (y z)": with
# x = J the S-like rule also matches and would shadow it
J3_RULE = Rule("JJJ", tm.J.atom, 4, 2, guard=(tm.J, tm.J), priority=0)
J2_RULE = Rule("JJ", tm.J.atom, 4, ((1, 3), (2, 3)), guard=(tm.J,), priority=1)

SK = RuleSet("sk", [S_RULE, K_RULE])
SKI = RuleSet("ski", [S_RULE, K_RULE, I_RULE])


def j_rules(k_like_first: bool = True) -> RuleSet:
    if k_like_first:
        return RuleSet("j", [J3_RULE, J2_RULE])
    return RuleSet("j-s-first", [
        Rule("JJ", tm.J.atom, 4, ((1, 3), (2, 3)), guard=(tm.J,), priority=0),
        Rule("JJJ", tm.J.atom, 4, 2, guard=(tm.J, tm.J), priority=1),
    ])


JRULES = j_rules()
PRESETS = {"sk": SK, "ski": SKI, "j": JRULES}


# -- redexes --------------------------------------------------------------------


@dataclass(frozen=True)
class Redex:
    position: str
    rule: Rule


def find_redexes(t: Term, rs: RuleSet) -> list[Redex]:
    """All redexes of ``t`` in preorder (root first, function before argument)."""
    out = []
    stack = [("", t)]
    while stack:
        path, node = stack.pop()
        if rs.is_normal(node):
            continue
        head, args = tm.spine(node)
        n = len(args)
        for r in rs.spine_matches(head, args):
            out.append(Redex(path + FUNCTION * (n - r.arity), r))
        for i in range(n - 1, -1, -1):
            stack.append((path + FUNCTION * (n - 1 - i) + ARGUMENT, args[i]))
    return out


def leftmost_outermost(t: Term, rs: RuleSet) -> Redex | None:
    path = []
    node = t
    while True:
        head, args = tm.spine(node)
        n = len(args)
        r = rs.outermost_match(head, args)
        if r is not None:
            path.append(FUNCTION * (n - r.arity))
            return Redex("".join(path), r)
        for i, a in enumerate(args):
            if not rs.is_normal(a):
                path.append(FUNCTION * (n - 1 - i) + ARGUMENT)
                node = a
                break
        else:
            return None


def _is_prefix(p: str, q: str) -> bool:
    return len(p) < len(q) and q.startswith(p)


def innermost(redexes: Sequence[Redex]) -> list[Redex]:
    """Redexes whose subterm contains no other redex."""
    return [r for r in redexes if not any(_is_prefix(r.position, o.position) for o in redexes)]


def step(t: Term, r: Redex) -> Term:
    try:
        node = tm.subterm_at(t, r.position)
    except tm.TermError as exc:
        raise RewriteError(f"stale redex: {exc}") from None
    head, args = tm.spine(node)
    if len(args) != r.rule.arity or head.atom is not r.rule.head or not r.rule.matches(args):
        raise RewriteError(f"stale redex at {r.position!r}")
    return tm.replace_at(t, r.position, r.rule.fire(args))


def successors(t: Term, rs: RuleSet) -> list[tuple[Term, Redex]]:
    return [(step(t, r), r) for r in find_redexes(t, rs)]


# -- strategies -------------------------------------------------------------


@dataclass(frozen=True)
class Strategy:
    kind: str = "leftmost-outermost"
    seed: int | None = None
    index: int | None = None

    KINDS = ("leftmost-outermost", "rightmost-innermost", "random", "by-index")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            object.__setattr__(self, "seed", 0)
        if self.kind == "by-index" and (self.index is None or self.index < 0):
            raise ValueError("by-index strategy needs a non-negative index")

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        """``lo``/``leftmost-outermost``, ``ri``/``rightmost-innermost``,
        ``random[:seed]`` or ``index:k``."""
        kind, _, arg = text.partition(":")
        kind = {"lo": "leftmost-outermost", "ri": "rightmost-innermost",
                "index": "by-index"}.get(kind, kind)
        if kind == "random":
            return cls(kind, seed=int(arg) if arg else 0)
        if kind == "by-index":
            return cls(kind, index=int(arg))
        return cls(kind)

    def __str__(self):
        if self.kind == "random":
            return f"random:{self.seed}"
        if self.kind == "by-index":
            return f"index:{self.index}"
        return self.kind


LEFTMOST_OUTERMOST = Strategy("leftmost-outermost")
RIGHTMOST_INNERMOST = Strategy("rightmost-innermost")


class _Chooser:
    def __init__(self, strategy: Strategy, rs: RuleSet):
        self.strategy = strategy
        self.rs = rs
        self.rng = random.Random(strategy.seed) if strategy.kind == "random" else None

    def __call__(self, t: Term) -> Redex | None:
        kind = self.strategy.kind
        if kind == "leftmost-outermost":
            return leftmost_outermost(t, self.rs)
        redexes = find_redexes(t, self.rs)
        if not redexes:
            return None
        if kind == "rightmost-innermost":
            return innermost(redexes)[-1]
        if kind == "random":
            return redexes[self.rng.randrange(len(redexes))]
        # by-index clamps to the last redex when fewer are available
        return redexes[min(self.strategy.index, len(redexes) - 1)]


# -- reduction -------------------------------------------------------------


class Status(str, enum.Enum):
    NORMAL_FORM = "NormalForm"
    STEP_LIMIT = "StepLimit"
    SIZE_LIMIT = "SizeLimit"
    CYCLE = "Cycle"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TraceStep:
    step: int
    position: str
    rule: str
    term: Term
    size: int


@dataclass
class ReductionOutcome:
    status: Status
    final: Term
    steps: int
    max_size: int
    trace: list[TraceStep] | None = None
    header: dict = field(default_factory=dict)

    @property
    def normalized(self) -> bool:
        return self.status is Status.NORMAL_FORM


def reduce(
    t: Term,
    rs: RuleSet = SK,
    strategy: Strategy = LEFTMOST_OUTERMOST,
    max_steps: int = DEFAULT_MAX_STEPS,
    max_size: int = DEFAULT_MAX_SIZE,
    detect_cycles: bool = False,
    trace: bool = False,
) -> ReductionOutcome:
    """Rewrite ``t`` until it is normal or a budget binds.

    The size budget is checked on the whole term after every step.  With
    ``detect_cycles`` the run stops at the first term seen before (the seen
    set is capped at ``CYCLE_SEEN_LIMIT`` entries).
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    if max_size < t.size:
        raise ValueError(f"max_size {max_size} below initial size {t.size}")
    header = {"rules": rs.name, "strategy": str(strategy), "seed": strategy.seed,
              "max_steps": max_steps, "max_size": max_size}
    choose = _Chooser(strategy, rs)
    records = [] if trace else None
    seen = {t} if detect_cycles else None
    biggest = t.size
    steps = 0
    while True:
        r = choose(t)
        if r is None:
            return ReductionOutcome(Status.NORMAL_FORM, t, steps, biggest, records, header)
        if steps >= max_steps:
            return ReductionOutcome(Status.STEP_LIMIT, t, steps, biggest, records, header)
        t = step(t, r)
        steps += 1
        if t.size > biggest:
            biggest = t.size
        if records is not None:
            records.append(TraceStep(steps, r.position, r.rule.name, t, t.size))
        if t.size > max_size:
            return ReductionOutcome(Status.SIZE_LIMIT, t, steps, biggest, records, header)
        if seen is not None:
            if t in seen:
                return ReductionOutcome(Status.CYCLE, t, steps, biggest, records, header)
            if len(seen) < CYCLE_SEEN_LIMIT:
                seen.add(t)


def trace_lines(outcome: ReductionOutcome, start: Term | None = None) -> Iterator[str]:
    """JSON-lines export: a header record, then one record per step."""
    yield json.dumps({"header": outcome.header}, sort_keys=True)
    if start is not None:
        yield json.dumps({"step": 0, "rule": None, "path": None,
                          "term": to_paren(start), "size": start.size}, sort_keys=True)
    for rec in outcome.trace or ():
        yield json.dumps({"step": rec.step, "rule": rec.rule, "path": rec.position,
                          "term": to_paren(rec.term), "size": rec.size}, sort_keys=True)
    yield json.dumps({"status": str(outcome.status), "steps": outcome.steps,
                      "term": to_paren(outcome.final), "size": outcome.final.size},
                     sort_keys=True)


# -- named combinators -----------------------------------------------------------

DERIVED = {
    "I": "SKK",
    "Z": "S(KS)K",
    "T": "S((S(KS)K)(S(KS)K)S)(KK)",
    "Y": "SSK(S(K(SS(S(SSK))))K)",
}


def derived_combinator(name: str) -> Term:
    """Schönfinkel's SK forms of I, Z, T (T with Z expanded) and Curry's Y."""
    try:
        return parse(DERIVED[name.upper()])
    except KeyError:
        raise KeyError(f"unknown combinator {name!r}; known: {', '.join(DERIVED)}") from None
