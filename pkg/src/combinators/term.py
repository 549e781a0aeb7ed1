"""Hash-consed combinator terms.

Every term is built through a single canonical store, so two structurally
equal terms are the *same* Python object.  Identity comparison (``is``) and
the default object hash are therefore exact structural tests, which is what
makes memo tables keyed on terms cheap.
"""
from __future__ import annotations

import itertools
import re
import threading
import weakref
from typing import Iterable, Sequence

BASIS = "basis"
INERT = "inert"

FUNCTION = "F"
ARGUMENT = "A"

_NAME_RE = re.compile(r"[A-Z]|[a-z][a-z0-9_]*")


class TermError(ValueError):
    pass


class Atom:
    __slots__ = ("name", "kind")

    def __init__(self, name: str, kind: str):
        self.name = name
        self.kind = kind

    def __repr__(self):
        return f"Atom({self.name!r}, {self.kind!r})"


class Term:
    """A leaf (``atom`` set) or a binary application (``fun``/``arg`` set).

    Never instantiate directly; use :func:`leaf` and :func:`app`.
    """

    __slots__ = ("id", "atom", "fun", "arg", "size", "__weakref__")

    def __init__(self, id, atom, fun, arg, size):
        self.id = id
        self.atom = atom
        self.fun = fun
        self.arg = arg
        self.size = size

    @property
    def is_leaf(self) -> bool:
        return self.atom is not None

    def __call__(self, *args: "Term") -> "Term":
        t = self
        for a in args:
            t = app(t, a)
        return t

    def __repr__(self):
        from .syntax import to_paren

        return f"<Term {to_paren(self)}>"

    def __str__(self):
        from .syntax import to_paren

        return to_paren(self)

    def __reduce__(self):
        # pickling goes through the printed form so that unpickling re-interns
        from .syntax import to_paren

        return (_unpickle, (to_paren(self),))


def _unpickle(text):
    from .syntax import parse

    return parse(text)


class TermStore:
    """Canonicalizing store: atom name -> leaf, (fun, arg) -> application."""

    def __init__(self):
        self._atoms: dict[str, Atom] = {}
        self._leaves: dict[str, Term] = {}
        # applications are held weakly so search-sized runs stay bounded;
        # a live term keeps its children alive, so identity is preserved
        self._apps: dict[tuple[Term, Term], weakref.KeyedRef] = {}
        self._ids = itertools.count()
        self._lock = threading.Lock()

    def register(self, name: str, kind: str = INERT) -> Atom:
        """Return the atom called ``name``, creating it with ``kind`` if new.

        Re-registering an existing inert atom as basis promotes it; the
        reverse never happens, since a rule might already use it as a head.
        """
        atom = self._atoms.get(name)
        if atom is not None:
            if kind == BASIS and atom.kind != BASIS:
                atom.kind = BASIS
            return atom
        if not _NAME_RE.fullmatch(name):
            raise TermError(f"illegal atom name {name!r}")
        if kind not in (BASIS, INERT):
            raise TermError(f"unknown atom kind {kind!r}")
        with self._lock:
            atom = self._atoms.setdefault(name, Atom(name, kind))
        return atom

    def atom(self, name: str) -> Atom:
        try:
            return self._atoms[name]
        except KeyError:
            raise TermError(f"unknown atom {name!r}") from None

    def has_atom(self, name: str) -> bool:
        return name in self._atoms

    def leaf(self, atom: Atom | str) -> Term:
        name = atom if isinstance(atom, str) else atom.name
        t = self._leaves.get(name)
        if t is None:
            a = self.atom(name)
            with self._lock:
                t = self._leaves.get(name)
                if t is None:
                    t = Term(next(self._ids), a, None, None, 1)
                    self._leaves[name] = t
        return t

    def app(self, fun: Term, arg: Term) -> Term:
        key = (fun, arg)
        ref = self._apps.get(key)
        if ref is not None:
            t = ref()
            if t is not None:
                return t
        t = Term(next(self._ids), None, fun, arg, fun.size + arg.size)
        new = weakref.KeyedRef(t, self._drop, key)
        # setdefault is atomic, so racing interners agree on one object
        ref = self._apps.setdefault(key, new)
        if ref is new:
            return t
        with self._lock:
            live = self._apps[key]()
            if live is not None:
                return live
            self._apps[key] = new
            return t

    def _drop(self, ref):
        # the entry may already belong to a newer term with the same key
        if self._apps.get(ref.key) is ref:
            del self._apps[ref.key]

    def __len__(self):
        return len(self._leaves) + len(self._apps)


STORE = TermStore()
for _name in ("S", "K", "I", "J"):
    STORE.register(_name, BASIS)

register = STORE.register
leaf = STORE.leaf
app = STORE.app


def sym(name: str) -> Term:
    """Leaf for ``name``, auto-registering unknown names as inert atoms."""
    if not STORE.has_atom(name):
        STORE.register(name, INERT)
    return STORE.leaf(name)


def intern(raw) -> Term:
    """Canonicalize a raw tree.

    ``raw`` is a Term, an atom name (``str``), or a 2-tuple ``(fun, arg)`` of
    raw trees.  Atom names must already be registered.
    """
    if isinstance(raw, Term):
        return raw
    if isinstance(raw, str):
        return STORE.leaf(raw)
    if isinstance(raw, tuple) and len(raw) == 2:
        return STORE.app(intern(raw[0]), intern(raw[1]))
    raise TermError(f"cannot intern {raw!r}")


def size(t: Term) -> int:
    return t.size


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while t.atom is None:
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def fold(head: Term, args: Iterable[Term]) -> Term:
    for a in args:
        head = STORE.app(head, a)
    return head


def subterm_at(t: Term, path: str) -> Term:
    for i, step in enumerate(path):
        if t.atom is not None:
            raise TermError(f"path {path!r} invalid at offset {i}: leaf reached")
        if step == FUNCTION:
            t = t.fun
        elif step == ARGUMENT:
            t = t.arg
        else:
            raise TermError(f"bad path step {step!r}")
    return t


def replace_at(t: Term, path: str, new: Term) -> Term:
    trail = []
    node = t
    for i, step in enumerate(path):
        if node.atom is not None:
            raise TermError(f"path {path!r} invalid at offset {i}: leaf reached")
        trail.append(node)
        if step == FUNCTION:
            node = node.fun
        elif step == ARGUMENT:
            node = node.arg
        else:
            raise TermError(f"bad path step {step!r}")
    for parent, step in zip(reversed(trail), reversed(path)):
        if step == FUNCTION:
            new = STORE.app(new, parent.arg)
        else:
            new = STORE.app(parent.fun, new)
    return new


def preorder_key(path: str) -> tuple[int, ...]:
    """Sort key placing paths in root-first, function-before-argument order."""
    return tuple(0 if s == FUNCTION else 1 for s in path)


def subterms(t: Term) -> Iterable[tuple[str, Term]]:
    """All (path, subterm) pairs in preorder."""
    stack = [("", t)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if node.atom is None:
            stack.append((path + ARGUMENT, node.arg))
            stack.append((path + FUNCTION, node.fun))


def atoms_of(t: Term) -> set[Atom]:
    out = set()
    stack = [t]
    seen = set()
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        if node.atom is not None:
            out.add(node.atom)
        else:
            stack.append(node.fun)
            stack.append(node.arg)
    return out


def max_depth(t: Term) -> int:
    best = 0
    stack = [(t, 0)]
    while stack:
        node, d = stack.pop()
        if node.atom is not None:
            best = max(best, d)
        else:
            stack.append((node.fun, d + 1))
            stack.append((node.arg, d + 1))
    return best


S = leaf("S")
K = leaf("K")
I = leaf("I")
J = leaf("J")


def variables(n: int, prefix: str = "v") -> Sequence[Term]:
    return [sym(f"{prefix}{i}") for i in range(1, n + 1)]
