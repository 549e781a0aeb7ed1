"""Multiway reduction graphs: every one-step reduct of every reachable term."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .rewrite import SK, RuleSet, find_redexes, reduce, step
from .syntax import to_paren
from .term import Term

DEFAULT_DEPTH = 12
DEFAULT_NODES = 20_000
DEFAULT_TERM_SIZE = 2000


@dataclass(frozen=True)
class Budgets:
    max_depth: int = DEFAULT_DEPTH
    max_nodes: int = DEFAULT_NODES
    max_term_size: int = DEFAULT_TERM_SIZE

    def __post_init__(self):
        if min(self.max_depth, self.max_nodes, self.max_term_size) < 1:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class Edge:
    source: Term
    target: Term
    position: str
    rule: str


@dataclass
class MultiwayGraph:
    root: Term
    nodes: dict[Term, int] = field(default_factory=dict)  # term -> depth
    edges: list[Edge] = field(default_factory=list)
    expanded: set[Term] = field(default_factory=set)
    truncated: set[str] = field(default_factory=set)

    @property
    def frontier(self) -> list[Term]:
        return [n for n in self.nodes if n not in self.expanded]

    @property
    def is_truncated(self) -> bool:
        return bool(self.truncated)

    def out_edges(self, t: Term) -> list[Edge]:
        return [e for e in self.edges if e.source is t]

    def normal_forms(self) -> list[Term]:
        sources = {e.source for e in self.edges}
        return [n for n in self.nodes if n in self.expanded and n not in sources]

    def to_dot(self, name: str = "multiway") -> str:
        index = {t: i for i, t in enumerate(self.nodes)}
        nfs = set(self.normal_forms())
        lines = [f"digraph {name} {{"]
        for t, i in index.items():
            attrs = [f'label="{_escape(to_paren(t))}"']
            if t in nfs:
                attrs.append("shape=doublecircle")
            elif t not in self.expanded:
                attrs.append("style=dashed")
            lines.append(f"  n{i} [{', '.join(attrs)}];")
        for e in self.edges:
            label = f"{e.rule}@{e.position or 'root'}"
            lines.append(f'  n{index[e.source]} -> n{index[e.target]} [label="{_escape(label)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def successors(t: Term, rs: RuleSet = SK) -> list[Term]:
    """Distinct one-step reducts, in redex preorder."""
    out = []
    seen = set()
    for r in find_redexes(t, rs):
        u = step(t, r)
        if u not in seen:
            seen.add(u)
            out.append(u)
    return out


def _expand(g: MultiwayGraph, t: Term, rs: RuleSet, budgets: Budgets) -> list[Term]:
    """Expand one node; returns newly added nodes."""
    new = []
    depth = g.nodes[t]
    for r in find_redexes(t, rs):
        u = step(t, r)
        if u.size > budgets.max_term_size:
            g.truncated.add("size")
            continue
        if u not in g.nodes:
            if len(g.nodes) >= budgets.max_nodes:
                g.truncated.add("nodes")
                continue
            g.nodes[u] = depth + 1
            new.append(u)
        g.edges.append(Edge(t, u, r.position, r.rule.name))
    g.expanded.add(t)
    return new


def build_graph(t: Term, rs: RuleSet = SK, budgets: Budgets = Budgets()) -> MultiwayGraph:
    """Breadth-first expansion from ``t`` until the graph closes or a budget binds.

    A node whose successor set was cut by a budget is still marked expanded
    but the graph is flagged truncated, so it never counts as a normal form
    for confluence purposes.
    """
    g = MultiwayGraph(t, {t: 0})
    layer = [t]
    depth = 0
    while layer:
        if depth >= budgets.max_depth:
            g.truncated.add("depth")
            break
        nxt = []
        for u in layer:
            nxt.extend(_expand(g, u, rs, budgets))
        layer = nxt
        depth += 1
    return g


@dataclass(frozen=True)
class Confluent:
    normal_form: Term


@dataclass(frozen=True)
class NonConfluentWitness:
    first: Term
    second: Term


@dataclass(frozen=True)
class Inconclusive:
    reason: str


def check_confluence(t: Term, rs: RuleSet = SK, budgets: Budgets = Budgets()):
    g = build_graph(t, rs, budgets)
    nfs = _true_normal_forms(g, rs)
    if len(nfs) > 1:
        return NonConfluentWitness(nfs[0], nfs[1])
    if g.is_truncated:
        return Inconclusive("truncated by " + ", ".join(sorted(g.truncated)))
    if not nfs:
        return Inconclusive("closed graph without a normal form")
    return Confluent(nfs[0])


def _true_normal_forms(g: MultiwayGraph, rs: RuleSet) -> list[Term]:
    # budget-cut nodes have no recorded edges yet may still reduce
    return [n for n in g.normal_forms() if rs.is_normal(n)]


def common_reduct(t1: Term, t2: Term, rs: RuleSet = SK, budgets: Budgets = Budgets()
                  ) -> Term | None:
    """First term reachable from both, alternating one BFS layer per side.

    None means the budgets bound before a shared term appeared.
    """
    if t1 is t2:
        return t1
    sides = [MultiwayGraph(t1, {t1: 0}), MultiwayGraph(t2, {t2: 0})]
    layers = [[t1], [t2]]
    for depth in range(budgets.max_depth):
        for i in (0, 1):
            g, other = sides[i], sides[1 - i]
            nxt = []
            for u in layers[i]:
                nxt.extend(_expand(g, u, rs, budgets))
            layers[i] = nxt
            for u in nxt:
                if u in other.nodes:
                    return u
        if not layers[0] and not layers[1]:
            break
    return None


def reachable_normal_form(t: Term, rs: RuleSet = SK, max_steps: int = 500, max_size: int = 500):
    """Leftmost-outermost normal form for comparison with graph results."""
    out = reduce(t, rs, max_steps=max_steps, max_size=max(max_size, t.size))
    return out.final if out.normalized else None


def graph_stats(g: MultiwayGraph) -> dict:
    return {"nodes": len(g.nodes), "edges": len(g.edges),
            "normal_forms": len(g.normal_forms()), "frontier": len(g.frontier),
            "truncated": sorted(g.truncated)}


def as_texts(terms: Iterable[Term]) -> list[str]:
    return [to_paren(t) for t in terms]
