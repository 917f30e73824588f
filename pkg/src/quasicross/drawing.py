"""Drawings of graphs in the plane and the simplicity validator.

A drawing places every vertex at an exact rational point and routes every
edge as a polyline (straight unless it has bends).  A drawing is *simple*
when every pair of edges meets at most once, either at a proper crossing
or at a common endpoint; the validator reports every way a drawing fails
that, instead of raising.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import (
    MeetingKind,
    Point,
    Polyline,
    Segment,
    check_polyline,
    on_segment,
    polyline_meetings,
    rat,
    segment_meeting,
)


@dataclass(frozen=True)
class Vertex:
    id: str
    pos: Point


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    bends: tuple[Point, ...] = ()
    tag: str | None = None

    def key(self) -> frozenset[str]:
        return frozenset((self.u, self.v))


class Drawing:
    """Immutable drawing: vertices with distinct exact positions, edges
    routed as polylines.  Structural invariants (unique ids, distinct
    positions, no duplicate edges, sane polylines) are enforced here;
    geometric simplicity is checked by :func:`validate`."""

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge]):
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)

        self._pos: dict[str, Point] = {}
        for vert in self.vertices:
            if vert.id in self._pos:
                raise ValueError(f"duplicate vertex id {vert.id!r}")
            self._pos[vert.id] = vert.pos
        seen_positions: dict[Point, str] = {}
        for vert in self.vertices:
            if vert.pos in seen_positions:
                raise ValueError(
                    f"vertices {seen_positions[vert.pos]!r} and {vert.id!r} share position {vert.pos!r}")
            seen_positions[vert.pos] = vert.id

        seen_edges: set[frozenset[str]] = set()
        self._polylines: list[tuple[Point, ...]] = []
        for edge in self.edges:
            if edge.u == edge.v:
                raise ValueError(f"loop edge at {edge.u!r}")
            for end in (edge.u, edge.v):
                if end not in self._pos:
                    raise ValueError(f"edge ({edge.u!r}, {edge.v!r}) references unknown vertex {end!r}")
            if edge.key() in seen_edges:
                raise ValueError(f"duplicate edge ({edge.u!r}, {edge.v!r})")
            seen_edges.add(edge.key())
            pts = (self._pos[edge.u], *edge.bends, self._pos[edge.v])
            check_polyline(pts)
            self._polylines.append(pts)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def e(self) -> int:
        return len(self.edges)

    def position(self, vertex_id: str) -> Point:
        return self._pos[vertex_id]

    def polyline(self, edge_index: int) -> tuple[Point, ...]:
        """Realized route of the edge: [pos(u), bends..., pos(v)]."""
        return self._polylines[edge_index]

    def shared_endpoint(self, i: int, j: int) -> Point | None:
        """Position of the graph vertex the two edges share, if any."""
        common = self.edges[i].key() & self.edges[j].key()
        if not common:
            return None
        (vid,) = common
        return self._pos[vid]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Drawing):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __repr__(self) -> str:
        return f"Drawing(n={self.n}, e={self.e})"


class ViolationKind(enum.Enum):
    MULTIPLE_MEETINGS = "multiple_meetings"
    DEGENERATE_CONTACT = "degenerate_contact"
    EDGE_THROUGH_VERTEX = "edge_through_vertex"
    SELF_INTERSECTION = "self_intersection"
    CONCURRENT_CROSSINGS = "concurrent_crossings"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    edges: tuple[int, ...]
    vertex: str | None = None
    point: Point | None = None

    def describe(self, d: Drawing) -> str:
        names = ", ".join(f"{d.edges[i].u}-{d.edges[i].v}" for i in self.edges)
        where = f" at {self.point}" if self.point is not None else ""
        vertex = f" vertex {self.vertex}" if self.vertex is not None else ""
        return f"{self.kind.value}: edges [{names}]{vertex}{where}"


@dataclass(frozen=True)
class ValidationReport:
    is_valid: bool
    violations: tuple[Violation, ...]

    def __post_init__(self) -> None:
        assert self.is_valid == (not self.violations)


def _edge_self_violations(index: int, pts: Polyline) -> list[Violation]:
    segs = [Segment(p, q) for p, q in zip(pts, pts[1:])]
    out = []
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            m = segment_meeting(segs[i], segs[j])
            if m.kind is MeetingKind.NO_MEETING:
                continue
            if j == i + 1 and m.kind is MeetingKind.ENDPOINT_CONTACT and m.point == pts[i + 1]:
                continue  # consecutive segments are supposed to meet at their bend
            out.append(Violation(ViolationKind.SELF_INTERSECTION, (index,), point=m.point))
    return out


def validate(d: Drawing) -> ValidationReport:
    """Check the drawing against the definition of a simple drawing.

    Valid iff: every edge pair meets at most once; edges sharing a graph
    endpoint meet only at that endpoint; no tangential or collinear
    contact anywhere; no edge passes through a foreign vertex; no edge
    self-intersects; and all proper crossing points are pairwise distinct
    (no three edges through one point).
    """
    violations: list[Violation] = []

    for i in range(d.e):
        violations.extend(_edge_self_violations(i, d.polyline(i)))

    for i, edge in enumerate(d.edges):
        pts = d.polyline(i)
        ends = (pts[0], pts[-1])
        for vert in d.vertices:
            if vert.id in (edge.u, edge.v) or vert.pos in ends:
                continue
            if any(on_segment(vert.pos, Segment(p, q)) for p, q in zip(pts, pts[1:])):
                violations.append(Violation(
                    ViolationKind.EDGE_THROUGH_VERTEX, (i,), vertex=vert.id, point=vert.pos))

    crossing_points: dict[Point, list[tuple[int, int]]] = {}
    for i in range(d.e):
        for j in range(i + 1, d.e):
            shared = d.shared_endpoint(i, j)
            meetings = polyline_meetings(
                d.polyline(i), d.polyline(j),
                (shared,) if shared is not None else ())
            for m in meetings:
                if m.kind in (MeetingKind.TOUCH_DEGENERATE, MeetingKind.OVERLAP_DEGENERATE):
                    violations.append(Violation(
                        ViolationKind.DEGENERATE_CONTACT, (i, j), point=m.point))
                elif m.kind is MeetingKind.PROPER_CROSSING:
                    assert m.point is not None
                    crossing_points.setdefault(m.point, []).append((i, j))
            real_meetings = [m for m in meetings if m.kind is not MeetingKind.OVERLAP_DEGENERATE]
            if len(real_meetings) > 1:
                violations.append(Violation(
                    ViolationKind.MULTIPLE_MEETINGS, (i, j),
                    point=real_meetings[0].point))

    for pt, pairs in sorted(crossing_points.items()):
        if len(pairs) > 1:
            involved = tuple(sorted({e for pair in pairs for e in pair}))
            violations.append(Violation(
                ViolationKind.CONCURRENT_CROSSINGS, involved, point=pt))

    return ValidationReport(not violations, tuple(violations))


def convex_complete(n: int, max_retries: int = 8) -> Drawing:
    """Straight-line K_n on convex-position points along the parabola y = x².

    Uses abscissas 1..n; if that puts three crossings through one point the
    abscissas are nudged deterministically (i -> i + k/2^i on retry k) and
    the drawing is re-validated.
    """
    if not 3 <= n <= 64:
        raise ValueError("convex_complete supports 3 <= n <= 64")
    failure = "no attempt produced distinct abscissas"
    for attempt in range(max_retries + 1):
        xs = [Fraction(i) + Fraction(attempt, 2 ** i) for i in range(1, n + 1)]
        if len(set(xs)) < n:  # large nudges can collide for small i
            continue
        vertices = [Vertex(str(i + 1), Point(x, x * x)) for i, x in enumerate(xs)]
        edges = [Edge(str(i), str(j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        d = Drawing(vertices, edges)
        report = validate(d)
        if report.is_valid:
            return d
        failure = "; ".join(v.describe(d) for v in report.violations[:3])
    raise RuntimeError(f"convex_complete({n}) still invalid after {max_retries} retries: {failure}")


AffineMatrix = Sequence[Sequence[Fraction]]


def affine_transform(d: Drawing, m: AffineMatrix) -> Drawing:
    """Apply the 2x3 rational matrix [[a, b, c], [d, e, f]] to every
    position and bend: (x, y) -> (ax + by + c, dx + ey + f)."""
    (a, b, c), (dd, ee, ff) = ((rat(x) for x in row) for row in m)
    if a * ee - b * dd == 0:
        raise ValueError("affine map must have nonzero determinant")

    def apply(p: Point) -> Point:
        return Point(a * p.x + b * p.y + c, dd * p.x + ee * p.y + ff)

    return Drawing(
        [Vertex(v.id, apply(v.pos)) for v in d.vertices],
        [Edge(e.u, e.v, tuple(apply(p) for p in e.bends), e.tag) for e in d.edges],
    )


def subdrawing(d: Drawing, keep: Iterable[str]) -> Drawing:
    """Restrict to the given vertices and the edges with both endpoints kept,
    preserving routes. This is the vertex-induced subdrawing used by the
    random-subsampling argument."""
    keep_set = set(keep)
    unknown = keep_set - {v.id for v in d.vertices}
    if unknown:
        raise ValueError(f"unknown vertex ids in keep: {sorted(unknown)}")
    return Drawing(
        [v for v in d.vertices if v.id in keep_set],
        [e for e in d.edges if e.u in keep_set and e.v in keep_set],
    )
