import math
import random
from fractions import Fraction

import pytest

from quasicross.crossings import (
    CrossingGraph,
    InvalidDrawingError,
    count_triples,
    count_triples_bruteforce,
    crossing_pairs,
    greedy_quasiplanarize,
)
from quasicross.drawing import Drawing, Edge, Vertex, convex_complete, subdrawing, validate
from quasicross.geometry import point as P


def edge_index(d: Drawing, u: str, v: str) -> int:
    for k, e in enumerate(d.edges):
        if {e.u, e.v} == {u, v}:
            return k
    raise KeyError((u, v))


# ----------------------------------------------------------- crossing pairs

@pytest.mark.parametrize("n,links", [(3, 0), (4, 1), (6, 15)])
def test_crossing_pair_counts(n, links):
    assert len(crossing_pairs(convex_complete(n)).links) == links


def test_crossing_pairs_rejects_invalid():
    d = Drawing(
        [Vertex("a", P(0, 0)), Vertex("b", P(2, 0)),
         Vertex("c", P(1, 0)), Vertex("d", P(3, 0))],
        [Edge("a", "b"), Edge("c", "d")])
    with pytest.raises(InvalidDrawingError) as exc:
        crossing_pairs(d)
    assert not exc.value.report.is_valid


def test_crossing_pairs_never_link_adjacent_edges():
    d = convex_complete(7)
    g = crossing_pairs(d, checked=False)
    for i, j in g.links:
        assert d.shared_endpoint(i, j) is None


def test_crossing_locations_distinct():
    g = crossing_pairs(convex_complete(7), checked=False)
    locations = list(g.locations.values())
    assert len(set(locations)) == len(locations)


# ------------------------------------------------------------ count triples

def test_k6_unique_triple_is_the_long_diagonals():
    d = convex_complete(6)
    report = count_triples(crossing_pairs(d, checked=False))
    assert report.triple_count == 1
    expected = tuple(sorted(
        edge_index(d, *pair) for pair in [("1", "4"), ("2", "5"), ("3", "6")]))
    assert report.triples == (expected,)
    assert report.crossing_pair_count == 15


def test_k5_has_no_triple():
    report = count_triples(crossing_pairs(convex_complete(5), checked=False))
    assert report.triple_count == 0


@pytest.mark.slow
def test_k11_triples_match_binomial():
    report = count_triples(crossing_pairs(convex_complete(11), checked=False))
    assert report.triple_count == math.comb(11, 6)
    assert report.crossing_pair_count == math.comb(11, 4)


def test_count_triples_deterministic_order():
    g = crossing_pairs(convex_complete(8), checked=False)
    report = count_triples(g)
    assert list(report.triples) == sorted(report.triples)
    assert report.triple_count == len(report.triples)


def test_count_triples_on_synthetic_graph():
    # triangle plus a pendant link
    g = CrossingGraph(5, frozenset({(0, 1), (0, 2), (1, 2), (2, 3)}), {})
    report = count_triples(g)
    assert report.triples == ((0, 1, 2),)


# ---------------------------------------------------------------- oracle

@pytest.mark.parametrize("n", range(4, 8))
def test_oracle_equivalence_on_convex(n):
    d = convex_complete(n)
    fast = count_triples(crossing_pairs(d, checked=False)).triple_count
    assert fast == count_triples_bruteforce(d)
    assert fast == math.comb(n, 6)


def test_oracle_equivalence_on_perturbed_drawings():
    rng = random.Random(11)
    checked = 0
    while checked < 6:
        base = convex_complete(rng.choice([5, 6, 7]))
        vertices = [
            Vertex(v.id, P(v.pos.x + Fraction(rng.randint(-64, 64), 128),
                           v.pos.y + Fraction(rng.randint(-64, 64), 128)))
            for v in base.vertices]
        d = Drawing(vertices, base.edges)
        if not validate(d).is_valid:
            continue
        checked += 1
        fast = count_triples(crossing_pairs(d, checked=False)).triple_count
        assert fast == count_triples_bruteforce(d)


def test_bruteforce_trivial_below_three_edges():
    d = Drawing(
        [Vertex("a", P(0, 0)), Vertex("b", P(1, 0)), Vertex("c", P(0, 1))],
        [Edge("a", "b"), Edge("a", "c")])
    assert count_triples_bruteforce(d) == 0


# ---------------------------------------------------- six-vertex property

@pytest.mark.parametrize("n", [6, 7, 8])
def test_every_triple_spans_six_vertices(n):
    d = convex_complete(n)
    report = count_triples(crossing_pairs(d, checked=False))
    for a, b, c in report.triples:
        support = set()
        for k in (a, b, c):
            support.update({d.edges[k].u, d.edges[k].v})
        assert len(support) == 6


def test_triples_monotone_under_subdrawing():
    d = convex_complete(8)
    full = count_triples(crossing_pairs(d, checked=False))
    keep = ["1", "2", "3", "5", "6", "7", "8"]
    sub = subdrawing(d, keep)
    sub_report = count_triples(crossing_pairs(sub, checked=False))

    def names(drawing, triple):
        return frozenset(
            frozenset((drawing.edges[k].u, drawing.edges[k].v)) for k in triple)

    full_names = {names(d, t) for t in full.triples}
    sub_names = {names(sub, t) for t in sub_report.triples}
    assert sub_names <= full_names


# ------------------------------------------------------------------ greedy

def test_greedy_on_k6_deletes_lowest_indexed_diagonal():
    d = convex_complete(6)
    deleted, residual = greedy_quasiplanarize(d)
    assert deleted == [edge_index(d, "1", "4")]
    assert count_triples(crossing_pairs(residual, checked=False)).triple_count == 0
    assert residual.e == d.e - 1


def test_greedy_noop_without_triples():
    d = convex_complete(5)
    deleted, residual = greedy_quasiplanarize(d)
    assert deleted == []
    assert residual == d


@pytest.mark.parametrize("n", [6, 7, 8])
def test_greedy_bounded_by_triple_count(n):
    d = convex_complete(n)
    initial = count_triples(crossing_pairs(d, checked=False)).triple_count
    deleted, residual = greedy_quasiplanarize(d)
    assert len(deleted) <= initial
    assert count_triples(crossing_pairs(residual, checked=False)).triple_count == 0
    assert validate(residual).is_valid
