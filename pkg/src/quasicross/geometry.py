"""Exact geometric predicates for segments and polylines.

All coordinates are arbitrary-precision rationals (`fractions.Fraction`);
every incidence decision is exact.  There is no epsilon anywhere in this
module, so "the two edges meet at most once" is decidable, not estimated.

Degenerate contacts (touches, collinear overlaps) are representable return
values here; deciding whether they are *permitted* is the drawing
validator's job.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike) -> Fraction:
    """Coerce to an exact rational. Floats are rejected: a binary float
    silently snapped to a nearby rational would defeat exactness."""
    if isinstance(value, float):
        raise TypeError(f"refusing to coerce float {value!r}; pass a Fraction, int or string")
    return Fraction(value)


@dataclass(frozen=True, order=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", rat(self.x))
        object.__setattr__(self, "y", rat(self.y))

    def __repr__(self) -> str:
        return f"Point({self.x}, {self.y})"


def point(x: RationalLike, y: RationalLike) -> Point:
    return Point(rat(x), rat(y))


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError(f"zero-length segment at {self.a!r}")


class Orientation(enum.IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


class MeetingKind(enum.Enum):
    NO_MEETING = "no_meeting"
    PROPER_CROSSING = "proper_crossing"
    ENDPOINT_CONTACT = "endpoint_contact"
    TOUCH_DEGENERATE = "touch_degenerate"
    OVERLAP_DEGENERATE = "overlap_degenerate"


@dataclass(frozen=True)
class Meeting:
    """One classified contact between two segments or polylines.

    ``point`` is the exact location for all kinds except
    OVERLAP_DEGENERATE (a collinear overlap of positive length has no
    single location) and NO_MEETING.
    """

    kind: MeetingKind
    point: Point | None = None

    def __post_init__(self) -> None:
        pointless = (MeetingKind.NO_MEETING, MeetingKind.OVERLAP_DEGENERATE)
        if (self.point is None) != (self.kind in pointless):
            raise ValueError(f"meeting kind {self.kind} and point {self.point!r} inconsistent")


NO_MEETING = Meeting(MeetingKind.NO_MEETING)
OVERLAP = Meeting(MeetingKind.OVERLAP_DEGENERATE)


def cross_sign(ox: Fraction, oy: Fraction, ax: Fraction, ay: Fraction,
               bx: Fraction, by: Fraction) -> int:
    """Sign of (a - o) x (b - o), computed exactly.

    Works on numerators and denominators directly: all denominators are
    positive, so the sign is decided by cross-multiplied integers without
    any gcd normalization.
    """
    # (ax - ox) * (by - oy): numerators n1 * n2, denominators d1 * d2
    n1 = ax.numerator * ox.denominator - ox.numerator * ax.denominator
    n2 = by.numerator * oy.denominator - oy.numerator * by.denominator
    n3 = ay.numerator * oy.denominator - oy.numerator * ay.denominator
    n4 = bx.numerator * ox.denominator - ox.numerator * bx.denominator
    lhs = n1 * n2 * (ay.denominator * bx.denominator)
    rhs = n3 * n4 * (ax.denominator * by.denominator)
    if lhs > rhs:
        return 1
    if lhs < rhs:
        return -1
    return 0


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    """Turn direction of the ordered triple (p, q, r)."""
    return Orientation(cross_sign(p.x, p.y, q.x, q.y, r.x, r.y))


def _within_box(p: Point, a: Point, b: Point) -> bool:
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def on_segment(p: Point, s: Segment) -> bool:
    """Exact test: p lies on s, endpoints included."""
    return orientation(s.a, s.b, p) is Orientation.COLLINEAR and _within_box(p, s.a, s.b)


def strictly_inside(p: Point, s: Segment) -> bool:
    """Exact test: p lies on s, endpoints excluded."""
    return on_segment(p, s) and p != s.a and p != s.b


def line_intersection(s1: Segment, s2: Segment) -> Point:
    """Exact intersection of the two supporting lines (must not be parallel)."""
    r_x, r_y = s1.b.x - s1.a.x, s1.b.y - s1.a.y
    q_x, q_y = s2.b.x - s2.a.x, s2.b.y - s2.a.y
    denom = r_x * q_y - r_y * q_x
    if denom == 0:
        raise ValueError("parallel supporting lines have no single intersection")
    t = ((s2.a.x - s1.a.x) * q_y - (s2.a.y - s1.a.y) * q_x) / denom
    return Point(s1.a.x + t * r_x, s1.a.y + t * r_y)


def segment_meeting(s1: Segment, s2: Segment) -> Meeting:
    """Exact classification of how two segments meet.

    PROPER_CROSSING iff the endpoints of each segment strictly straddle the
    other's supporting line; ENDPOINT_CONTACT iff the contact point is an
    endpoint of both segments; an endpoint of one resting on the interior
    of the other is a TOUCH_DEGENERATE; collinear overlap of positive
    length is OVERLAP_DEGENERATE.
    """
    o1 = orientation(s1.a, s1.b, s2.a)
    o2 = orientation(s1.a, s1.b, s2.b)
    o3 = orientation(s2.a, s2.b, s1.a)
    o4 = orientation(s2.a, s2.b, s1.b)

    if o1 == 0 and o2 == 0:
        return _collinear_meeting(s1, s2)

    if o1 * o2 < 0 and o3 * o4 < 0:
        return Meeting(MeetingKind.PROPER_CROSSING, line_intersection(s1, s2))

    contact = None
    if o1 == 0 and _within_box(s2.a, s1.a, s1.b):
        contact = s2.a
    elif o2 == 0 and _within_box(s2.b, s1.a, s1.b):
        contact = s2.b
    elif o3 == 0 and _within_box(s1.a, s2.a, s2.b):
        contact = s1.a
    elif o4 == 0 and _within_box(s1.b, s2.a, s2.b):
        contact = s1.b
    if contact is None:
        return NO_MEETING
    if contact in (s1.a, s1.b) and contact in (s2.a, s2.b):
        return Meeting(MeetingKind.ENDPOINT_CONTACT, contact)
    return Meeting(MeetingKind.TOUCH_DEGENERATE, contact)


def _collinear_meeting(s1: Segment, s2: Segment) -> Meeting:
    # Project onto the dominant axis of the common supporting line.
    use_x = abs(s1.b.x - s1.a.x) >= abs(s1.b.y - s1.a.y)

    def key(p: Point) -> Fraction:
        return p.x if use_x else p.y

    lo1, hi1 = sorted((s1.a, s1.b), key=key)
    lo2, hi2 = sorted((s2.a, s2.b), key=key)
    lo, hi = max(key(lo1), key(lo2)), min(key(hi1), key(hi2))
    if lo > hi:
        return NO_MEETING
    if lo < hi:
        return OVERLAP
    contact = hi1 if key(hi1) == lo else hi2
    return Meeting(MeetingKind.ENDPOINT_CONTACT, contact)


Polyline = Sequence[Point]


def check_polyline(pts: Polyline) -> None:
    if len(pts) < 2:
        raise ValueError("polyline needs at least two points")
    for p, q in zip(pts, pts[1:]):
        if p == q:
            raise ValueError(f"repeated consecutive polyline point {p!r}")


def _segments(pts: Polyline) -> list[Segment]:
    return [Segment(p, q) for p, q in zip(pts, pts[1:])]


def _branches(pts: Polyline, at: Point) -> tuple[Point, Point] | None:
    """Local branch direction vectors of the polyline at an interior point.

    Returns the two directions in which the curve leaves ``at`` (as vector
    endpoints relative to origin), or None when ``at`` is a terminal point.
    Bend points use the adjacent polyline points; points interior to a
    segment use both segment endpoints.
    """
    if at == pts[0] or at == pts[-1]:
        return None
    for k in range(1, len(pts) - 1):
        if pts[k] == at:
            return (Point(pts[k - 1].x - at.x, pts[k - 1].y - at.y),
                    Point(pts[k + 1].x - at.x, pts[k + 1].y - at.y))
    for seg in _segments(pts):
        if strictly_inside(at, seg):
            return (Point(seg.a.x - at.x, seg.a.y - at.y),
                    Point(seg.b.x - at.x, seg.b.y - at.y))
    raise ValueError(f"{at!r} does not lie on the polyline")


def _vec_cross(u: Point, v: Point) -> int:
    return cross_sign(Fraction(0), Fraction(0), u.x, u.y, v.x, v.y)


def _ccw_strictly_between(u: Point, v: Point, w: Point) -> bool:
    """Is ray v strictly inside the counterclockwise sweep from ray u to ray w?"""
    cuw = _vec_cross(u, w)
    cuv = _vec_cross(u, v)
    cvw = _vec_cross(v, w)
    if cuw > 0:
        return cuv > 0 and cvw > 0
    if cuw < 0:
        return cuv > 0 or cvw > 0
    if u.x * w.x + u.y * w.y < 0:  # opposite rays: arc is the left half-plane
        return cuv > 0
    return False  # coincident rays bound no strict interior


def _transversal(a_branches: tuple[Point, Point], b_branches: tuple[Point, Point]) -> bool:
    """Do the b branches leave on opposite sides of the path through the a branches?"""
    u1, u2 = a_branches
    v1, v2 = b_branches
    return _ccw_strictly_between(u1, v1, u2) != _ccw_strictly_between(u1, v2, u2)


def polyline_meetings(a: Polyline, b: Polyline,
                      shared_graph_endpoints: Iterable[Point] = ()) -> list[Meeting]:
    """All meetings between two polylines, one entry per distinct location.

    A contact at a shared bend boundary of one polyline is deduplicated to
    a single meeting.  A transversal pass of one polyline through the
    other at a bend point is one PROPER_CROSSING; a tangential one is a
    TOUCH_DEGENERATE.  Contacts at ``shared_graph_endpoints`` and at
    terminal points are ENDPOINT_CONTACTs.  Collinear overlap anywhere
    yields a single OVERLAP_DEGENERATE entry.
    """
    check_polyline(a)
    check_polyline(b)
    shared = frozenset(shared_graph_endpoints)

    points: set[Point] = set()
    overlap = False
    for sa in _segments(a):
        for sb in _segments(b):
            m = segment_meeting(sa, sb)
            if m.kind is MeetingKind.NO_MEETING:
                continue
            if m.kind is MeetingKind.OVERLAP_DEGENERATE:
                overlap = True
            else:
                assert m.point is not None
                points.add(m.point)

    meetings: list[Meeting] = []
    for p in sorted(points):
        if p in shared or p in (a[0], a[-1]) or p in (b[0], b[-1]):
            meetings.append(Meeting(MeetingKind.ENDPOINT_CONTACT, p))
            continue
        branches_a = _branches(a, p)
        branches_b = _branches(b, p)
        assert branches_a is not None and branches_b is not None
        if _transversal(branches_a, branches_b):
            meetings.append(Meeting(MeetingKind.PROPER_CROSSING, p))
        else:
            meetings.append(Meeting(MeetingKind.TOUCH_DEGENERATE, p))
    if overlap:
        meetings.append(OVERLAP)
    return meetings
