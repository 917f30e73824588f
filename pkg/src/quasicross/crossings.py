"""Crossing pairs, triples of pairwise crossing edges, and edge deletion.

The crossing graph has the drawing's edges as nodes and properly crossing
pairs as links; a triple of pairwise crossing edges is exactly a triangle
of that graph.  Triangle enumeration is degree-ordered adjacency
intersection; the all-edge-triples brute force is kept as the independent
test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .drawing import Drawing, ValidationReport, validate
from .geometry import MeetingKind, Point, polyline_meetings


class InvalidDrawingError(ValueError):
    """Raised when an operation that requires a simple drawing gets an
    invalid one; carries the full validation report."""

    def __init__(self, report: ValidationReport, d: Drawing):
        self.report = report
        details = "; ".join(v.describe(d) for v in report.violations[:5])
        super().__init__(f"drawing is not simple: {details}")


def require_valid(d: Drawing) -> None:
    report = validate(d)
    if not report.is_valid:
        raise InvalidDrawingError(report, d)


@dataclass(frozen=True)
class CrossingGraph:
    """Edges-of-the-drawing as nodes; properly crossing pairs as links."""

    node_count: int
    links: frozenset[tuple[int, int]]  # (i, j) with i < j
    locations: dict[tuple[int, int], Point]

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.node_count)]
        for i, j in self.links:
            adj[i].add(j)
            adj[j].add(i)
        return adj


@dataclass(frozen=True)
class TripleReport:
    triple_count: int
    triples: tuple[tuple[int, int, int], ...]
    crossing_pair_count: int


def crossing_pairs(d: Drawing, *, checked: bool = True) -> CrossingGraph:
    """All unordered edge pairs whose polylines properly cross, with exact
    crossing locations.  Rejects invalid drawings (the crossing graph of a
    non-simple drawing would not mean anything)."""
    if checked:
        require_valid(d)
    links = set()
    locations: dict[tuple[int, int], Point] = {}
    for i in range(d.e):
        for j in range(i + 1, d.e):
            shared = d.shared_endpoint(i, j)
            for m in polyline_meetings(d.polyline(i), d.polyline(j),
                                       (shared,) if shared is not None else ()):
                if m.kind is MeetingKind.PROPER_CROSSING:
                    assert m.point is not None
                    links.add((i, j))
                    locations[(i, j)] = m.point
    return CrossingGraph(d.e, frozenset(links), locations)


def count_triples(g: CrossingGraph) -> TripleReport:
    """Enumerate all triangles of the crossing graph.

    Nodes are ranked by (degree, index); each link is directed toward the
    higher rank and triangles are read off forward-adjacency
    intersections, so every triangle is produced exactly once.  Output is
    sorted lexicographically.
    """
    adj = g.adjacency()
    rank = sorted(range(g.node_count), key=lambda v: (len(adj[v]), v))
    order = {v: r for r, v in enumerate(rank)}
    forward: list[set[int]] = [set() for _ in range(g.node_count)]
    for v in range(g.node_count):
        for w in adj[v]:
            if order[w] > order[v]:
                forward[v].add(w)

    triples = []
    for i, j in g.links:
        lo, hi = (i, j) if order[i] < order[j] else (j, i)
        for k in forward[lo] & forward[hi]:
            triples.append(tuple(sorted((i, j, k))))
    triples.sort()
    return TripleReport(len(triples), tuple(triples), len(g.links))


def count_triples_bruteforce(d: Drawing) -> int:
    """Reference count: iterate all edge triples and check the three
    pairwise crossings directly with the kernel.  Slow; used as the
    independent oracle for :func:`count_triples`."""
    require_valid(d)

    def crosses(i: int, j: int) -> bool:
        shared = d.shared_endpoint(i, j)
        return any(
            m.kind is MeetingKind.PROPER_CROSSING
            for m in polyline_meetings(d.polyline(i), d.polyline(j),
                                       (shared,) if shared is not None else ()))

    count = 0
    for i in range(d.e):
        for j in range(i + 1, d.e):
            if not crosses(i, j):
                continue
            for k in range(j + 1, d.e):
                if crosses(i, k) and crosses(j, k):
                    count += 1
    return count


def greedy_quasiplanarize(d: Drawing) -> tuple[list[int], Drawing]:
    """Delete edges until no triple of pairwise crossing edges remains.

    Repeatedly removes the edge participating in the most remaining
    triples (ties broken by smallest edge index).  Since every deleted
    edge kills at least one triple, at most triple_count edges go.
    Returns the deleted edge indices (into the original drawing) and the
    quasi-planar residual drawing.
    """
    g = crossing_pairs(d)
    alive_links = set(g.links)
    deleted: list[int] = []

    while True:
        sub = CrossingGraph(g.node_count, frozenset(alive_links), {})
        report = count_triples(sub)
        if report.triple_count == 0:
            break
        participation = [0] * g.node_count
        for a, b, c in report.triples:
            participation[a] += 1
            participation[b] += 1
            participation[c] += 1
        victim = max(range(g.node_count), key=lambda i: (participation[i], -i))
        deleted.append(victim)
        alive_links = {(a, b) for a, b in alive_links if victim not in (a, b)}

    deleted.sort()
    residual = Drawing(d.vertices, [e for i, e in enumerate(d.edges) if i not in set(deleted)])
    return deleted, residual
