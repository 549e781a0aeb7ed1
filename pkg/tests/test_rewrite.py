import json

import pytest
from hypothesis import given, settings, strategies as st

from combinators import term as tm
from combinators.rewrite import (
    JRULES, LEFTMOST_OUTERMOST, RIGHTMOST_INNERMOST, SK, SKI, Redex, RewriteError, Status,
    Strategy, derived_combinator, find_redexes, innermost, j_rules, parse_rules, reduce, step,
    trace_lines,
)
from combinators.syntax import parse, to_paren
from conftest import terms
from oracle import OutOfFuel, raw_normalize, raw_trees, to_raw

a, b, c, f, g, x, y = (tm.sym(n) for n in "abcfgxy")


def positions(t, rs):
    return [(r.position, r.rule.name) for r in find_redexes(t, rs)]


def test_find_redexes_examples():
    assert positions(tm.K(a, b), SK) == [("", "K")]
    assert positions(tm.S(a), SK) == []
    # preorder by hand: root K-redex, then I a at the first argument slot
    assert positions(parse("K(Ia)b"), SKI) == [("", "K"), ("FA", "I")]


def test_find_redexes_oversaturated_spine():
    # K a b c: the K redex is the node consuming exactly two arguments
    assert positions(tm.K(a, b, c), SK) == [("F", "K")]


def test_find_redexes_preorder_against_brute_force():
    for n in range(1, 7):
        for raw in raw_trees(n, ("S", "K", "I")):
            t = tm.intern(raw)
            got = [r.position for r in find_redexes(t, SKI)]
            brute = []
            for path, node in tm.subterms(t):
                head, args = tm.spine(node)
                arity = {"S": 3, "K": 2, "I": 1}.get(head.atom.name)
                if arity is not None and len(args) == arity:
                    brute.append(path)
            assert got == brute, to_paren(t)
            assert got == sorted(got, key=tm.preorder_key)


def test_step_examples():
    assert step(tm.S(f, g, x), Redex("", SK.rules[0])) is f(x, g(x))
    assert step(tm.K(x, y), Redex("", SK.rules[1])) is x
    jt = parse("JJJab")
    (r,) = find_redexes(jt, JRULES)
    assert r.rule.name == "JJJ"
    assert step(jt, r) is a


def test_step_rejects_stale_redex():
    r = find_redexes(tm.K(a, b), SK)[0]
    with pytest.raises(RewriteError):
        step(tm.S(a, b, c), r)
    with pytest.raises(RewriteError):
        step(a, Redex("AA", SK.rules[0]))


def test_skk_is_identity():
    out = reduce(parse("SKK")(a))
    assert out.status is Status.NORMAL_FORM and out.final is a and out.steps == 2


def test_transposer_trace():
    out = reduce(parse("S(S(KS)(S(KK)S))(KK)")(f, g, x), trace=True)
    assert out.status is Status.NORMAL_FORM
    assert out.final is f(x, g)
    assert to_paren(out.final) == "fxg"
    # the printed trace has 11 lines: the start term and 10 rewrites
    assert out.steps == 10
    assert [s.rule for s in out.trace] == ["S", "S", "K", "S", "S", "K", "K", "S", "K", "K"]
    assert to_paren(out.trace[0].term) == "S(KS)(S(KK)S)f(KKf)gx"
    assert to_paren(out.trace[2].term) == "S(S(KK)Sf)(KKf)gx"


def test_y_diverges():
    y_comb = derived_combinator("Y")
    out = reduce(y_comb(g), max_steps=1000)
    assert out.status in (Status.STEP_LIMIT, Status.SIZE_LIMIT)


@pytest.mark.parametrize("name, text, size", [
    ("I", "SKK", 3), ("Z", "S(KS)K", 4), ("T", "S((S(KS)K)(S(KS)K)S)(KK)", 12),
])
def test_derived_combinators(name, text, size):
    t = derived_combinator(name)
    assert t is parse(text) and t.size == size


def test_derived_t_is_z_expanded():
    z = derived_combinator("Z")
    assert derived_combinator("T") is tm.S(tm.app(tm.app(z, z), tm.S), tm.K(tm.K))


def test_unknown_derived():
    with pytest.raises(KeyError):
        derived_combinator("W")


def test_reduce_limits():
    out = reduce(tm.K(a, b), max_steps=0)
    assert out.status is Status.STEP_LIMIT and out.final is tm.K(a, b)
    assert reduce(a, max_steps=0).status is Status.NORMAL_FORM
    with pytest.raises(ValueError):
        reduce(parse("SKK"), max_size=2)
    with pytest.raises(ValueError):
        reduce(a, max_steps=-1)


def test_cycle_detection():
    omega = parse("SII(SII)")
    out = reduce(omega, SKI, RIGHTMOST_INNERMOST, detect_cycles=True, trace=True)
    assert out.status is Status.CYCLE and out.final is omega and out.steps == 3
    assert out.final in [omega] + [s.term for s in out.trace[:-1]]
    assert reduce(omega, SKI, RIGHTMOST_INNERMOST, max_steps=50).status is Status.STEP_LIMIT
    # normal order keeps piling up I's instead of repeating a term
    assert reduce(omega, SKI, max_steps=200, detect_cycles=True).status is Status.STEP_LIMIT


def test_size_limit_checked_after_each_step():
    out = reduce(derived_combinator("Y")(g), max_steps=10_000, max_size=200)
    assert out.status is Status.SIZE_LIMIT and out.final.size > 200


@settings(max_examples=200)
@given(terms(("S", "K", "I", "a", "b"), max_leaves=14), st.integers(0, 100))
def test_normal_form_soundness(t, seed):
    for strategy in (LEFTMOST_OUTERMOST, RIGHTMOST_INNERMOST, Strategy("random", seed=seed)):
        out = reduce(t, SKI, strategy, max_steps=300, max_size=3000)
        if out.status is Status.NORMAL_FORM:
            assert find_redexes(out.final, SKI) == []


@settings(max_examples=300)
@given(st.data())
def test_size_deltas(data):
    t = data.draw(terms(("S", "K", "I", "a"), max_leaves=14))
    redexes = find_redexes(t, SKI)
    if not redexes:
        return
    r = data.draw(st.sampled_from(redexes))
    _, args = tm.spine(tm.subterm_at(t, r.position))
    delta = step(t, r).size - t.size
    if r.rule.name == "K":
        assert delta == -(args[1].size + 1)
    elif r.rule.name == "S":
        assert delta == args[2].size - 1 >= 0
    else:
        assert delta == -1


@given(terms(("S", "K", "a", "b"), max_leaves=12), st.integers(0, 10**6))
def test_determinism(t, seed):
    s = Strategy("random", seed=seed)
    one = reduce(t, SK, s, max_steps=100, max_size=1000, trace=True)
    two = reduce(t, SK, s, max_steps=100, max_size=1000, trace=True)
    assert list(trace_lines(one)) == list(trace_lines(two))


def test_strategy_agreement_exhaustive():
    checked = 0
    for n in range(1, 8):
        for raw in raw_trees(n):
            t = tm.intern(raw)
            lo = reduce(t, SK, LEFTMOST_OUTERMOST, max_steps=500, max_size=500)
            ri = reduce(t, SK, RIGHTMOST_INNERMOST, max_steps=500, max_size=500)
            if lo.normalized and ri.normalized:
                assert lo.final is ri.final, to_paren(t)
                checked += 1
    assert checked > 20_000


def test_lo_agrees_with_naive_oracle():
    for n in range(1, 7):
        for raw in raw_trees(n):
            t = tm.intern(raw)(a, b)
            out = reduce(t, SK, max_steps=200, max_size=2000)
            try:
                expected = raw_normalize(to_raw(t), 200, 10**9)
            except OutOfFuel:
                assert not out.normalized or out.steps == 200
                continue
            assert out.normalized and to_raw(out.final) == expected


def test_rightmost_innermost_choice():
    t = parse("K(Ia)(Ib)")
    rs = find_redexes(t, SKI)
    assert [r.position for r in innermost(rs)] == ["FA", "A"]
    out = reduce(t, SKI, RIGHTMOST_INNERMOST, trace=True)
    assert out.trace[0].position == "A"


def test_by_index_strategy():
    t = parse("K(Ia)(Ib)")
    out = reduce(t, SKI, Strategy("by-index", index=1), max_steps=1, trace=True)
    assert out.trace[0].position == "FA"
    out = reduce(t, SKI, Strategy("by-index", index=99), max_steps=1, trace=True)
    assert out.trace[0].position == "A"


def test_strategy_parse():
    assert Strategy.parse("lo") == LEFTMOST_OUTERMOST
    assert Strategy.parse("ri") == RIGHTMOST_INNERMOST
    assert Strategy.parse("random:7") == Strategy("random", seed=7)
    assert Strategy.parse("index:2") == Strategy("by-index", index=2)
    with pytest.raises(ValueError):
        Strategy.parse("sideways")


def test_j_rules():
    assert reduce(parse("JJabc"), JRULES).final is a(c, b(c))
    assert reduce(parse("JJJab"), JRULES).final is a


def test_j_rule_order_matters():
    # with the S-like rule first, J J J a b fires it instead of the K-like one
    swapped = j_rules(k_like_first=False)
    (r,) = find_redexes(parse("JJJab"), swapped)
    assert r.rule.name == "JJ"
    assert reduce(parse("JJJab"), swapped).final is not a


def test_parse_rules_file():
    rs = parse_rules("""
        # composition and a J-style guarded rule
        B f g x = f (g x)
        W x y = x y y
    """)
    assert reduce(parse("Babc"), rs).final is a(b(c))
    assert reduce(parse("Wab"), rs).final is a(b, b)
    jr = parse_rules("jjj: J J J x y = x\njj: J J x y z = x z (y z)")
    assert reduce(parse("JJJab"), jr).final is a
    assert reduce(parse("JJabc"), jr).final is a(c, b(c))


@pytest.mark.parametrize("text", ["", "B x = ", "B x x = x", "B x = (x"])
def test_parse_rules_errors(text):
    with pytest.raises((RewriteError, ValueError)):
        parse_rules(text)


def test_inert_head_rejected():
    from combinators.rewrite import Rule
    with pytest.raises(RewriteError):
        Rule("bad", tm.sym("q").atom, 1, 0)
    with pytest.raises(RewriteError):
        Rule("bad", tm.S.atom, 1, 3)
    with pytest.raises(RewriteError):
        Rule("bad", tm.S.atom, 1, tm.sym("q"))


def test_trace_lines_are_json():
    out = reduce(parse("SKKa"), trace=True, strategy=Strategy("random", seed=3))
    lines = [json.loads(s) for s in trace_lines(out, start=parse("SKKa"))]
    assert lines[0]["header"] == {"rules": "sk", "strategy": "random:3", "seed": 3,
                                  "max_steps": 10_000, "max_size": 10_000}
    assert [r["step"] for r in lines[1:-1]] == [0, 1, 2]
    assert lines[2]["path"] == "" and lines[2]["rule"] == "S"
    assert lines[-1] == {"status": "NormalForm", "steps": 2, "term": "a", "size": 1}


def test_normal_memo_is_bounded(monkeypatch):
    from combinators import rewrite
    monkeypatch.setattr(rewrite, "NORMAL_MEMO_LIMIT", 5)
    rs = rewrite.RuleSet("sk-copy", [rewrite.S_RULE, rewrite.K_RULE])
    for raw in raw_trees(5):
        t = tm.intern(raw)
        assert rs.is_normal(t) is (find_redexes(t, rs) == [])
        assert len(rs._normal) < 5 + 2 * t.size
