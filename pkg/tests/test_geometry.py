from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasicross.geometry import (
    Meeting,
    MeetingKind,
    Orientation,
    Point,
    Segment,
    cross_sign,
    on_segment,
    orientation,
    point,
    polyline_meetings,
    rat,
    segment_meeting,
    strictly_inside,
)

P = point

rationals = st.fractions(
    min_value=Fraction(-30), max_value=Fraction(30), max_denominator=8)
points = st.builds(Point, rationals, rationals)


def segments():
    return st.tuples(points, points).filter(lambda ab: ab[0] != ab[1]) \
        .map(lambda ab: Segment(*ab))


# ---------------------------------------------------------------- orientation

def test_orientation_examples():
    assert orientation(P(0, 0), P(1, 0), P(0, 1)) is Orientation.LEFT
    assert orientation(P(0, 0), P(1, 1), P(2, 2)) is Orientation.COLLINEAR
    assert orientation(P(0, 0), P(0, 1), P(1, 1)) is Orientation.RIGHT


@given(points, points, points)
def test_orientation_antisymmetric(p, q, r):
    assert orientation(p, q, r) == -orientation(q, p, r)
    assert orientation(p, q, r) == -orientation(p, r, q)


@given(points, points, points)
def test_cross_sign_matches_fraction_arithmetic(p, q, r):
    value = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    expected = 1 if value > 0 else -1 if value < 0 else 0
    assert cross_sign(p.x, p.y, q.x, q.y, r.x, r.y) == expected


def test_rat_rejects_floats():
    with pytest.raises(TypeError):
        rat(0.5)
    with pytest.raises(TypeError):
        point(0.5, 1)


# ------------------------------------------------------------ segment meeting

def test_segment_meeting_examples():
    m = segment_meeting(Segment(P(0, 0), P(2, 2)), Segment(P(0, 2), P(2, 0)))
    assert m == Meeting(MeetingKind.PROPER_CROSSING, P(1, 1))

    m = segment_meeting(Segment(P(0, 0), P(1, 0)), Segment(P(0, 0), P(0, 1)))
    assert m == Meeting(MeetingKind.ENDPOINT_CONTACT, P(0, 0))

    m = segment_meeting(Segment(P(0, 0), P(2, 0)), Segment(P(1, 0), P(3, 0)))
    assert m.kind is MeetingKind.OVERLAP_DEGENERATE

    m = segment_meeting(Segment(P(0, 0), P(2, 0)), Segment(P(1, 0), P(1, 2)))
    assert m == Meeting(MeetingKind.TOUCH_DEGENERATE, P(1, 0))


def test_segment_meeting_disjoint_and_collinear_touch():
    assert segment_meeting(
        Segment(P(0, 0), P(1, 0)), Segment(P(2, 1), P(3, 1))
    ).kind is MeetingKind.NO_MEETING
    m = segment_meeting(Segment(P(0, 0), P(1, 0)), Segment(P(1, 0), P(2, 0)))
    assert m == Meeting(MeetingKind.ENDPOINT_CONTACT, P(1, 0))
    assert segment_meeting(
        Segment(P(0, 0), P(1, 0)), Segment(P(2, 0), P(3, 0))
    ).kind is MeetingKind.NO_MEETING


def test_zero_length_segment_rejected():
    with pytest.raises(ValueError):
        Segment(P(1, 1), P(1, 1))


@settings(max_examples=200)
@given(segments(), segments())
def test_segment_meeting_symmetric(s1, s2):
    m12 = segment_meeting(s1, s2)
    m21 = segment_meeting(s2, s1)
    assert m12.kind is m21.kind
    assert m12.point == m21.point


@settings(max_examples=200)
@given(segments(), segments())
def test_proper_crossing_point_strictly_inside(s1, s2):
    m = segment_meeting(s1, s2)
    if m.kind is MeetingKind.PROPER_CROSSING:
        assert strictly_inside(m.point, s1)
        assert strictly_inside(m.point, s2)


affine_maps = st.tuples(
    rationals, rationals, rationals, rationals, rationals, rationals
).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0)


@settings(max_examples=150)
@given(segments(), segments(), affine_maps)
def test_meeting_kind_affine_invariant(s1, s2, m):
    a, b, c, d, e, f = m
    if a * d - b * c <= 0:  # restrict to orientation-preserving maps
        a, b = b, a
        d, c = c, d
        if a * d - b * c == 0:
            return

    def apply(p: Point) -> Point:
        return Point(a * p.x + b * p.y + e, c * p.x + d * p.y + f)

    before = segment_meeting(s1, s2)
    after = segment_meeting(Segment(apply(s1.a), apply(s1.b)),
                            Segment(apply(s2.a), apply(s2.b)))
    assert before.kind is after.kind
    if before.point is not None:
        assert after.point == apply(before.point)


# ---------------------------------------------------------- polyline meetings

def test_polyline_single_crossing():
    ms = polyline_meetings([P(0, 0), P(2, 2)], [P(0, 2), P(2, 0)])
    assert ms == [Meeting(MeetingKind.PROPER_CROSSING, P(1, 1))]


def test_polyline_tent_crosses_twice():
    # brute force over the 2x1 segment pairs: the tent pierces the low
    # horizontal once on the way up and once on the way down
    half = Fraction(1, 2)
    ms = polyline_meetings([P(0, 0), P(1, 1), P(2, 0)], [P(0, half), P(2, half)])
    assert [m.kind for m in ms] == [MeetingKind.PROPER_CROSSING] * 2
    assert [m.point for m in ms] == [Point(half, half), Point(Fraction(3, 2), half)]


def test_polyline_tent_apex_touch_is_degenerate():
    # same tent but the horizontal passes exactly through the apex
    ms = polyline_meetings([P(0, 0), P(1, 1), P(2, 0)], [P(0, 1), P(2, 1)])
    assert ms == [Meeting(MeetingKind.TOUCH_DEGENERATE, P(1, 1))]


def test_polyline_transversal_bend_counts_once():
    ms = polyline_meetings([P(0, 0), P(2, 0)], [P(1, -1), P(1, 0), P(1, 1)])
    assert ms == [Meeting(MeetingKind.PROPER_CROSSING, P(1, 0))]


def test_polyline_bend_to_bend_touch():
    # both polylines bend at the contact point, curves stay on their sides
    a = [P(0, 0), P(1, 0), P(1, 1)]
    b = [P(2, 0), P(1, 0), P(1, -1)]
    ms = polyline_meetings(a, b)
    assert ms == [Meeting(MeetingKind.TOUCH_DEGENERATE, P(1, 0))]


def test_polyline_bend_to_bend_crossing():
    # four branches alternate around the shared bend: a genuine crossing
    a = [P(-1, -1), P(0, 0), P(1, -1)]          # wedge opening downward
    b = [P(-1, -4), P(0, 0), P(1, 4)]           # enters inside the wedge, leaves outside
    ms = polyline_meetings(a, b)
    assert ms == [Meeting(MeetingKind.PROPER_CROSSING, P(0, 0))]


def test_polyline_shared_endpoint_classification():
    shared = P(0, 0)
    ms = polyline_meetings([shared, P(2, 0)], [shared, P(0, 2)], [shared])
    assert ms == [Meeting(MeetingKind.ENDPOINT_CONTACT, shared)]


def test_polyline_overlap_reported_once():
    ms = polyline_meetings([P(0, 0), P(4, 0)], [P(1, 0), P(2, 0), P(3, 0)])
    assert sum(1 for m in ms if m.kind is MeetingKind.OVERLAP_DEGENERATE) == 1


def test_on_segment_inclusive():
    s = Segment(P(0, 0), P(2, 2))
    assert on_segment(P(1, 1), s)
    assert on_segment(P(0, 0), s)
    assert not strictly_inside(P(0, 0), s)
    assert not on_segment(P(3, 3), s)
