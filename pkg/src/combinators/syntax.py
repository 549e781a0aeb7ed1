"""Reading and writing terms in paren notation ``S(KS)K`` and bracket
notation ``s[k[s]][k]``.

Paren notation tokenizing: uppercase letters are one-letter atoms.  A
maximal lowercase run ``[a-z][a-z0-9_]*`` is a single multi-letter name when
whitespace touches it on either side, or when it is the sole content of a
parenthesis pair ``(succ)``; otherwise it splits into one-letter atoms, each
keeping trailing digits/underscores (``Kab`` is ``K a b``, ``v1v2`` is
``v1 v2``).  The printer emits exactly the whitespace this requires.
"""
from __future__ import annotations

import re

from . import term as tm
from .term import Term

PAREN = "paren"
BRACKET = "bracket"
NOTATIONS = (PAREN, BRACKET)

ALIASES = {"s": "S", "k": "K", "i": "I", "j": "J"}
_LOWER_ALIAS = {v: k for k, v in ALIASES.items()}

_RUN = re.compile(r"[a-z][a-z0-9_]*")
_CHUNK = re.compile(r"[a-z][0-9_]*")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, offset: int):
        self.offset = len(text[:offset].encode("utf-8"))
        self.message = message
        super().__init__(f"{message} at byte {self.offset}")


def _resolve(name: str, text: str, offset: int, historical_c: bool) -> Term:
    if historical_c and name == "C":
        name = "K"
    name = ALIASES.get(name, name)
    try:
        return tm.sym(name)
    except tm.TermError as exc:
        raise ParseError(str(exc), text, offset) from None


def _is_short(name: str) -> bool:
    return len(name) == 1 or (name[0].islower() and _CHUNK.fullmatch(name) is not None)


# -- paren notation ---------------------------------------------------------


def _paren_tokens(text: str):
    """Yield (kind, value, offset) with kind in {'(', ')', 'atom'}."""
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            yield c, c, i
            i += 1
        elif "A" <= c <= "Z":
            yield "atom", c, i
            i += 1
        elif "a" <= c <= "z":
            m = _RUN.match(text, i)
            run, end = m.group(), m.end()
            before = text[i - 1] if i > 0 else ""
            after = text[end] if end < n else ""
            if before.isspace() or after.isspace() or (before == "(" and after == ")"):
                yield "atom", run, i
            else:
                for cm in _CHUNK.finditer(run):
                    yield "atom", cm.group(), i + cm.start()
            i = end
        else:
            raise ParseError(f"illegal character {c!r}", text, i)


def _parse_paren(text: str, historical_c: bool) -> Term:
    # stack of partially folded expressions, one per open parenthesis
    stack: list[tuple[Term | None, int]] = [(None, 0)]
    for kind, value, off in _paren_tokens(text):
        if kind == "(":
            stack.append((None, off))
            continue
        if kind == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", text, off)
            inner, _ = stack.pop()
            if inner is None:
                raise ParseError("empty parentheses", text, off)
            item = inner
        else:
            item = _resolve(value, text, off, historical_c)
        cur, start = stack[-1]
        stack[-1] = (item if cur is None else tm.app(cur, item), start)
    if len(stack) > 1:
        raise ParseError("unbalanced '('", text, stack[-1][1])
    result = stack[0][0]
    if result is None:
        raise ParseError("empty input", text, len(text))
    return result


def _paren_items(t: Term) -> list[tuple[str, str]]:
    """(text, kind) per spine item; kind is 'short', 'long' or 'other'."""
    head, args = tm.spine(t)
    items = [_atom_item(head.atom.name)]
    for a in args:
        if a.atom is not None:
            items.append(_atom_item(a.atom.name))
        else:
            items.append(("(" + _paren_group(a) + ")", "other"))
    return items


def _atom_item(name: str) -> tuple[str, str]:
    if not name[0].islower():
        return name, "other"
    return name, "short" if _is_short(name) else "long"


def _join(items: list[tuple[str, str]]) -> str:
    spaced = any(kind == "long" for _, kind in items)
    out = [items[0][0]]
    for (_, prev), (text, kind) in zip(items, items[1:]):
        # once a space appears, every lowercase run touching it must be a
        # single atom, so all adjacent lowercase atoms get separated
        if "long" in (prev, kind) or (spaced and prev != "other" and kind != "other"):
            out.append(" ")
        out.append(text)
    return "".join(out)


def _paren_group(t: Term) -> str:
    items = _paren_items(t)
    text = _join(items)
    if _RUN.fullmatch(text):
        # a bare run like "ab" inside parens would read back as one name
        text = " ".join(name for name, _ in items)
    return text


def to_paren(t: Term) -> str:
    if t.atom is not None and _atom_item(t.atom.name)[1] == "long":
        return "(" + t.atom.name + ")"
    return _join(_paren_items(t))


# -- bracket notation -------------------------------------------------------


def _parse_bracket(text: str, historical_c: bool) -> Term:
    n = len(text)
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    # iterative: stack of (partial term, offset of its '[')
    stack: list[tuple[Term | None, int]] = []
    cur: Term | None = None
    skip_ws()
    if pos >= n:
        raise ParseError("empty input", text, pos)
    while True:
        skip_ws()
        if cur is None:
            m = _IDENT.match(text, pos)
            if m is None:
                if pos >= n:
                    raise ParseError("unexpected end of input", text, pos)
                raise ParseError(f"expected atom name, found {text[pos]!r}", text, pos)
            cur = _resolve(m.group(), text, pos, historical_c)
            pos = m.end()
            continue
        if pos >= n:
            if stack:
                raise ParseError("unbalanced '['", text, stack[-1][1])
            return cur
        c = text[pos]
        if c == "[":
            stack.append((cur, pos))
            cur = None
            pos += 1
        elif c == "]":
            if not stack:
                raise ParseError("unbalanced ']'", text, pos)
            fun, _ = stack.pop()
            cur = tm.app(fun, cur)
            pos += 1
        else:
            raise ParseError(f"illegal character {c!r}", text, pos)


def _bracket_name(atom) -> str:
    return _LOWER_ALIAS.get(atom.name, atom.name) if atom.kind == tm.BASIS else atom.name


def to_bracket(t: Term) -> str:
    head, args = tm.spine(t)
    return _bracket_name(head.atom) + "".join("[" + to_bracket(a) + "]" for a in args)


# -- public ----------------------------------------------------------------


def detect_notation(text: str) -> str:
    return BRACKET if "[" in text or "]" in text else PAREN


def parse(text: str, notation: str = PAREN, historical_c: bool = False) -> Term:
    """Parse ``text``; unknown names become inert atoms.

    ``historical_c`` reads ``C`` as the cancellation combinator K, as in
    Schönfinkel's original notation.
    """
    if notation == PAREN:
        return _parse_paren(text, historical_c)
    if notation == BRACKET:
        return _parse_bracket(text, historical_c)
    raise ValueError(f"unknown notation {notation!r}")


def to_text(t: Term, notation: str = PAREN) -> str:
    if notation == PAREN:
        return to_paren(t)
    if notation == BRACKET:
        return to_bracket(t)
    raise ValueError(f"unknown notation {notation!r}")
