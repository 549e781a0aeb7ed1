"""Lambda terms: capture-avoiding normal-order beta reduction, bracket
abstraction into S/K/I, and Church numerals."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Union

from . import term as tm
from .rewrite import SKI, RuleSet, Status, reduce
from .syntax import parse as parse_term
from .term import Term


class CompileError(ValueError):
    pass


class LambdaSyntaxError(ValueError):
    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    body: "LambdaTerm"


@dataclass(frozen=True)
class App:
    fun: "LambdaTerm"
    arg: "LambdaTerm"


@dataclass(frozen=True)
class Const:
    """A combinator term embedded in a lambda term (usually a single atom)."""

    term: Term


LambdaTerm = Union[Var, Lam, App, Const]


def lams(names: str, body: LambdaTerm) -> LambdaTerm:
    for n in reversed(names.split()):
        body = Lam(n, body)
    return body


def apps(f: LambdaTerm, *args: LambdaTerm) -> LambdaTerm:
    for a in args:
        f = App(f, a)
    return f


def free_vars(t: LambdaTerm) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return frozenset()


def _all_names(t: LambdaTerm) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Lam):
        return {t.var} | _all_names(t.body)
    if isinstance(t, App):
        return _all_names(t.fun) | _all_names(t.arg)
    return set()


def lambda_size(t: LambdaTerm) -> int:
    if isinstance(t, Lam):
        return 1 + lambda_size(t.body)
    if isinstance(t, App):
        return 1 + lambda_size(t.fun) + lambda_size(t.arg)
    return 1


class _Fresh:
    """Numbered renaming: ``y`` becomes ``y1``, ``y2``, ... in call order."""

    def __init__(self):
        self.counter = itertools.count(1)

    def __call__(self, name: str, avoid) -> str:
        base = name.rstrip("0123456789") or name
        while True:
            cand = f"{base}{next(self.counter)}"
            if cand not in avoid:
                return cand


def substitute(t: LambdaTerm, name: str, value: LambdaTerm, fresh: _Fresh | None = None,
               _fv: frozenset | None = None) -> LambdaTerm:
    """``t[name := value]``, renaming binders that would capture."""
    fresh = fresh or _Fresh()
    fv = free_vars(value) if _fv is None else _fv
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, App):
        return App(substitute(t.fun, name, value, fresh, fv),
                   substitute(t.arg, name, value, fresh, fv))
    if isinstance(t, Lam):
        if t.var == name:
            return t
        if name not in free_vars(t.body):
            return t
        if t.var in fv:
            new = fresh(t.var, fv | _all_names(t.body) | {name})
            body = substitute(t.body, t.var, Var(new), fresh)
            return Lam(new, substitute(body, name, value, fresh, fv))
        return Lam(t.var, substitute(t.body, name, value, fresh, fv))
    return t


def _normal_step(t: LambdaTerm, fresh: _Fresh):
    """One leftmost-outermost beta step, or None for a normal form."""
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return substitute(t.fun.body, t.fun.var, t.arg, fresh)
        f = _normal_step(t.fun, fresh)
        if f is not None:
            return App(f, t.arg)
        a = _normal_step(t.arg, fresh)
        if a is not None:
            return App(t.fun, a)
        return None
    if isinstance(t, Lam):
        b = _normal_step(t.body, fresh)
        return None if b is None else Lam(t.var, b)
    return None


@dataclass(frozen=True)
class BetaResult:
    status: Status
    term: LambdaTerm
    steps: int

    @property
    def normalized(self) -> bool:
        return self.status is Status.NORMAL_FORM


def beta_normalize(t: LambdaTerm, max_steps: int = 10_000, max_size: int = 100_000) -> BetaResult:
    fresh = _Fresh()
    for steps in itertools.count():
        nxt = _normal_step(t, fresh)
        if nxt is None:
            return BetaResult(Status.NORMAL_FORM, t, steps)
        if steps >= max_steps:
            return BetaResult(Status.STEP_LIMIT, t, steps)
        t = nxt
        if lambda_size(t) > max_size:
            return BetaResult(Status.SIZE_LIMIT, t, steps + 1)


def to_de_bruijn(t: LambdaTerm, env=()):
    if isinstance(t, Var):
        try:
            return ("b", env.index(t.name))
        except ValueError:
            return ("f", t.name)
    if isinstance(t, Lam):
        return ("l", to_de_bruijn(t.body, (t.var,) + env))
    if isinstance(t, App):
        return ("a", to_de_bruijn(t.fun, env), to_de_bruijn(t.arg, env))
    return ("c", t.term)


def alpha_equivalent(a: LambdaTerm, b: LambdaTerm) -> bool:
    return to_de_bruijn(a) == to_de_bruijn(b)


def embed(t: LambdaTerm) -> Term | None:
    """Binder-free lambda term as a combinator term (free vars become inert
    atoms); None when a lambda remains."""
    if isinstance(t, Var):
        return tm.sym(t.name)
    if isinstance(t, Const):
        return t.term
    if isinstance(t, App):
        f, a = embed(t.fun), embed(t.arg)
        return None if f is None or a is None else tm.app(f, a)
    return None


# -- bracket abstraction --------------------------------------------------------
# Intermediate form: a closed Term, ("v", name) or ("@", fun, arg).


def _ir_free(m, x) -> bool:
    if isinstance(m, Term):
        return False
    if m[0] == "v":
        return m[1] == x
    return _ir_free(m[1], x) or _ir_free(m[2], x)


def _ir_app(f, a):
    if isinstance(f, Term) and isinstance(a, Term):
        return tm.app(f, a)
    return ("@", f, a)


def _abstract(x: str, m, optimize: bool):
    if not isinstance(m, Term) and m[0] == "v" and m[1] == x:
        return tm.I
    if not _ir_free(m, x):
        return _ir_app(tm.K, m)
    # m is an application mentioning x
    f, a = m[1], m[2]
    if optimize and not isinstance(a, Term) and a == ("v", x) and not _ir_free(f, x):
        return f
    return _ir_app(_ir_app(tm.S, _abstract(x, f, optimize)), _abstract(x, a, optimize))


def _to_ir(t: LambdaTerm, optimize: bool):
    if isinstance(t, Var):
        return ("v", t.name)
    if isinstance(t, Const):
        return t.term
    if isinstance(t, App):
        return _ir_app(_to_ir(t.fun, optimize), _to_ir(t.arg, optimize))
    # innermost binder first
    return _abstract(t.var, _to_ir(t.body, optimize), optimize)


def expand_i(t: Term) -> Term:
    """Replace every I by SKK."""
    skk = tm.S(tm.K, tm.K)
    memo: dict[Term, Term] = {}

    def go(u):
        if u is tm.I:
            return skk
        if u.atom is not None:
            return u
        got = memo.get(u)
        if got is None:
            got = memo[u] = tm.app(go(u.fun), go(u.arg))
        return got

    return go(t)


def compile_lambda(t: LambdaTerm, optimize: bool = False, pure_sk: bool = False) -> Term:
    """Bracket abstraction: [x]x = I, [x]M = K M (x not in M),
    [x](M N) = S([x]M)([x]N); ``optimize`` adds [x](M x) = M (x not in M)."""
    open_vars = free_vars(t)
    if open_vars:
        raise CompileError(f"open term: free variables {', '.join(sorted(open_vars))}")
    out = _to_ir(t, optimize)
    assert isinstance(out, Term)
    return expand_i(out) if pure_sk else out


# -- Church numerals ------------------------------------------------------------


def church_encode(n: int) -> LambdaTerm:
    if n < 0:
        raise ValueError("Church numerals are non-negative")
    body: LambdaTerm = Var("x")
    for _ in range(n):
        body = App(Var("f"), body)
    return Lam("f", Lam("x", body))


def count_applications(t: Term | None, succ: Term, zero: Term) -> int | None:
    """n for ``succ (succ (.. zero))``, else None."""
    if t is None:
        return None
    n = 0
    while t is not zero:
        if t.atom is not None or t.fun is not succ:
            return None
        t = t.arg
        n += 1
    return n


def church_decode(t: Term, rs: RuleSet = SKI, max_steps: int = 10_000,
                  max_size: int = 10_000) -> int | None:
    """Apply to inert ``succ`` and ``zero`` and count; None means Unknown."""
    succ, zero = tm.sym("succ"), tm.sym("zero")
    u = t(succ, zero)
    out = reduce(u, rs, max_steps=max_steps, max_size=max(max_size, u.size))
    if not out.normalized:
        return None
    return count_applications(out.final, succ, zero)


def church_decode_lambda(t: LambdaTerm, max_steps: int = 10_000) -> int | None:
    """Oracle side: beta-normalize ``t succ zero`` and count."""
    succ, zero = tm.sym("succ"), tm.sym("zero")
    out = beta_normalize(App(App(t, Const(succ)), Const(zero)), max_steps)
    if not out.normalized:
        return None
    return count_applications(embed(out.term), succ, zero)


PLUS = lams("m n f x", apps(Var("m"), Var("f"), apps(Var("n"), Var("f"), Var("x"))))
TIMES = lams("m n f", App(Var("m"), App(Var("n"), Var("f"))))
SUCC = lams("n f x", App(Var("f"), apps(Var("n"), Var("f"), Var("x"))))

_HALF_THETA = lams("x y", App(Var("y"), apps(Var("x"), Var("x"), Var("y"))))
THETA = App(_HALF_THETA, _HALF_THETA)
Y_CURRY_TEXT = "SSK(S(K(SS(S(SSK))))K)"


def fixed_point_combinators() -> dict[str, Term]:
    """Curry's Y as printed, and Turing's Θ compiled with the eta rule.

    The eta form is used because the plain compilation needs BFS depth 16
    before Θ g and g (Θ g) share a reduct.
    """
    return {
        "y_curry": parse_term(Y_CURRY_TEXT),
        "theta_turing": compile_lambda(THETA, optimize=True),
    }


# -- surface syntax -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<lam>\\|λ)|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\))"
                    r"|(?P<num>#\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<bad>\S))")
CONSTANT_NAMES = frozenset({"S", "K", "I", "J"})


def _lex(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        kind = m.lastgroup
        if kind is None:
            break
        if kind == "bad":
            raise LambdaSyntaxError(f"illegal character {m.group(kind)!r}", m.start(kind))
        out.append((kind, m.group(kind), m.start(kind)))
    out.append(("end", "", len(text)))
    return out


def parse_lambda(text: str) -> LambdaTerm:
    r"""``\x y. body``, application by juxtaposition, ``#n`` numerals.

    Free occurrences of S, K, I and J denote those combinators.
    """
    toks = _lex(text)
    pos = 0

    def peek():
        return toks[pos]

    def take(kind):
        nonlocal pos
        tok = toks[pos]
        if tok[0] != kind:
            raise LambdaSyntaxError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        pos += 1
        return tok

    def expr(bound):
        if peek()[0] == "lam":
            take("lam")
            names = [take("id")[1]]
            while peek()[0] == "id":
                names.append(take("id")[1])
            take("dot")
            body = expr(bound | set(names))
            for n in reversed(names):
                body = Lam(n, body)
            return body
        items = []
        while peek()[0] in ("id", "num", "lp", "lam"):
            if peek()[0] == "lam":
                items.append(expr(bound))
                break
            items.append(atom(bound))
        if not items:
            tok = peek()
            raise LambdaSyntaxError(f"expected a term, found {tok[1] or 'end of input'!r}", tok[2])
        t = items[0]
        for a in items[1:]:
            t = App(t, a)
        return t

    def atom(bound):
        kind, value, off = peek()
        if kind == "lp":
            take("lp")
            t = expr(bound)
            take("rp")
            return t
        if kind == "num":
            take("num")
            return church_encode(int(value[1:]))
        take("id")
        if value in CONSTANT_NAMES and value not in bound:
            return Const(tm.leaf(value))
        return Var(value)

    t = expr(frozenset())
    if peek()[0] != "end":
        tok = peek()
        raise LambdaSyntaxError(f"unexpected {tok[1]!r}", tok[2])
    return t


def to_text(t: LambdaTerm) -> str:
    from .syntax import to_paren

    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return to_paren(t.term) if t.term.atom is not None else "(" + to_paren(t.term) + ")"
    if isinstance(t, Lam):
        names = [t.var]
        body = t.body
        while isinstance(body, Lam):
            names.append(body.var)
            body = body.body
        return "\\" + " ".join(names) + ". " + to_text(body)
    f = to_text(t.fun)
    if isinstance(t.fun, Lam):
        f = "(" + f + ")"
    a = to_text(t.arg)
    if isinstance(t.arg, (Lam, App)):
        a = "(" + a + ")"
    return f + " " + a
