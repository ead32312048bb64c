"""Derived graphs: treat every path matched by an expression as one edge.

Evaluating an expression from a root ``r`` reaches a bag of vertices; each
reached ``v`` becomes a derived edge ``r -> v`` whose multiplicity is the
number of walks from ``r`` to ``v``. All derived edges share one meaning, so
the result is an unlabeled graph that ordinary algorithms apply to.
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Sequence
from dataclasses import dataclass, field

from .core import PropertyGraph
from .errors import EmptyLabel, ExpressionEndsOnEdge, LabelCollision, UnknownVertex
from .pathlang import EDGE, PathExpr, evaluate, parse

ALL = "ALL"


@dataclass
class DerivedGraph:
    vertices: list[str]
    edges: dict[tuple[str, str], int] = field(default_factory=dict)
    expr: PathExpr | None = None
    label: str = "derived"

    def successors(self, v: str) -> list[str]:
        return [head for (tail, head) in self.edges if tail == v]

    @property
    def edge_count(self) -> int:
        """Number of derived edges, counting multiplicity."""
        return sum(self.edges.values())


def derive(
    g: PropertyGraph,
    expr: PathExpr | str,
    roots: Sequence[str] | str = ALL,
    label: str = "derived",
) -> DerivedGraph:
    """Evaluate ``expr`` once per root and collect the reached vertices as edges.

    The vertex set is the roots plus every vertex reached. Each root gets
    fresh variable bindings.
    """
    if isinstance(expr, str):
        expr = parse(expr)
    if expr.ends_on == EDGE:
        raise ExpressionEndsOnEdge("a derived edge must end at a vertex")
    root_ids = list(g.vertices()) if roots == ALL else list(roots)

    vertices = dict.fromkeys(root_ids)
    edges: dict[tuple[str, str], int] = {}
    for r in root_ids:
        bag, _ = evaluate(g, [r], expr)
        for v, n in Counter(bag).items():
            vertices[v] = None
            edges[(r, v)] = n
    return DerivedGraph(list(vertices), edges, expr, label)


def materialize(g: PropertyGraph, d: DerivedGraph, label: str) -> int:
    """Write derived edges into ``g`` as real edges tagged ``derived=true``."""
    if not label:
        raise EmptyLabel("derived label must be non-empty")
    if label in g.labels():
        raise LabelCollision(f"label {label!r} is already used in the graph")
    created = 0
    for (tail, head), n in d.edges.items():
        for _ in range(n):
            g.add_edge(tail, head, label, {"derived": True})
            created += 1
    return created


def from_label(g: PropertyGraph, label: str) -> DerivedGraph:
    """Re-derive a graph from edges previously materialized under ``label``."""
    return derive(g, f"./outE[@label={_quote(label)}]/inV", ALL, label)


def _quote(text: str) -> str:
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _adjacency(d: DerivedGraph) -> tuple[dict[str, list[str]], dict[str, list[str]]]:
    succ: dict[str, list[str]] = {v: [] for v in d.vertices}
    pred: dict[str, list[str]] = {v: [] for v in d.vertices}
    for tail, head in d.edges:
        succ[tail].append(head)
        pred[head].append(tail)
    return succ, pred


def shortest_path(d: DerivedGraph, a: str, b: str) -> list[str] | None:
    """Fewest-hop path from ``a`` to ``b``, or ``None`` when unreachable.

    Multiplicities are ignored. Among equally short paths the one with the
    lexicographically smallest id sequence wins (ids compare as strings).
    """
    succ, pred = _adjacency(d)
    for v in (a, b):
        if v not in succ:
            raise UnknownVertex(v)

    # hop distance to b, by BFS over reversed edges
    dist = {b: 0}
    queue = deque([b])
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    if a not in dist:
        return None

    path = [a]
    while path[-1] != b:
        here = dist[path[-1]]
        path.append(min(w for w in succ[path[-1]] if dist.get(w) == here - 1))
    return path


def hop_counts(d: DerivedGraph, source: str) -> dict[str, int]:
    succ, _ = _adjacency(d)
    if source not in succ:
        raise UnknownVertex(source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def degree_ranking(d: DerivedGraph) -> list[tuple[str, int]]:
    """Vertices by derived out-degree (with multiplicity), highest first, ties by id."""
    degree = dict.fromkeys(d.vertices, 0)
    for (tail, _), n in d.edges.items():
        degree[tail] += n
    return sorted(degree.items(), key=lambda item: (-item[1], item[0]))
