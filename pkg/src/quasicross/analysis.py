"""Full-drawing analysis and its JSON-friendly serialization.

The analysis result is the one report every consumer sees (CLI, service,
editor): validation verdict, crossing pairs, triples, exact crossing
locations, and the lower-bound report for (n, e).  Every numeric value is
serialized as an exact rational string or an integer; squared standard
errors are exact and the derived standard errors are marked approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import BoundInput, BoundReport, SubsampleStats, best_lower_bound
from .crossings import CrossingGraph, TripleReport, count_triples, crossing_pairs
from .drawing import Drawing, ValidationReport, validate
from .fileformat import format_rational
from .geometry import Point


@dataclass(frozen=True)
class AnalysisResult:
    drawing: Drawing
    validation: ValidationReport
    crossing_graph: CrossingGraph | None   # None when the drawing is invalid
    triples: TripleReport | None
    bounds: BoundReport

    @property
    def is_valid(self) -> bool:
        return self.validation.is_valid


def analyze(d: Drawing) -> AnalysisResult:
    """Validate and, if simple, count crossings and triples; the bound
    report for (n, e) is attached either way."""
    report = validate(d)
    bounds = best_lower_bound(BoundInput(d.n, d.e)) if d.n >= 4 else \
        BoundReport(BoundInput(d.n, d.e), Fraction(0), None, None, 0)
    if not report.is_valid:
        return AnalysisResult(d, report, None, None, bounds)
    graph = crossing_pairs(d, checked=False)
    triples = count_triples(graph)
    return AnalysisResult(d, report, graph, triples, bounds)


def point_json(p: Point) -> list[str]:
    return [format_rational(p.x), format_rational(p.y)]


def validation_json(d: Drawing, report: ValidationReport) -> dict:
    return {
        "is_valid": report.is_valid,
        "violations": [
            {
                "kind": v.kind.value,
                "edges": [[d.edges[i].u, d.edges[i].v] for i in v.edges],
                **({"vertex": v.vertex} if v.vertex is not None else {}),
                **({"point": point_json(v.point)} if v.point is not None else {}),
            }
            for v in report.violations],
    }


def bounds_json(report: BoundReport) -> dict:
    def alpha_value(pair):
        alpha, value = pair
        return {"alpha": format_rational(alpha), "value": format_rational(value)}

    doc = {
        "n": report.input.n,
        "e": report.input.e,
        "eq1": format_rational(report.eq1_value),
        "best_integer_lower_bound": report.best_integer_lower_bound,
    }
    if report.eq2_fixed_alpha is not None:
        doc["eq2_fixed_alpha"] = alpha_value(report.eq2_fixed_alpha)
    if report.eq2_optimized is not None:
        doc["eq2_optimized"] = alpha_value(report.eq2_optimized)
    return doc


def analysis_json(result: AnalysisResult) -> dict:
    d = result.drawing
    doc = {
        "n": d.n,
        "e": d.e,
        "validation": validation_json(d, result.validation),
        "bounds": bounds_json(result.bounds),
        "crossing_pair_count": None,
        "triple_count": None,
        "triples": None,
        "crossings": None,
    }
    if result.crossing_graph is not None and result.triples is not None:
        graph, triples = result.crossing_graph, result.triples

        def edge_name(i: int) -> list[str]:
            return [d.edges[i].u, d.edges[i].v]

        doc["crossing_pair_count"] = triples.crossing_pair_count
        doc["triple_count"] = triples.triple_count
        doc["triples"] = [[edge_name(a), edge_name(b), edge_name(c)]
                          for a, b, c in triples.triples]
        doc["crossings"] = [
            {"edges": [edge_name(i), edge_name(j)], "point": point_json(pt)}
            for (i, j), pt in sorted(graph.locations.items())]
    return doc


def subsample_json(stats: SubsampleStats) -> dict:
    se = stats.standard_errors()
    return {
        "p": format_rational(stats.p),
        "trials": stats.trials,
        "mean": {
            "vertices": format_rational(stats.mean_vertices),
            "edges": format_rational(stats.mean_edges),
            "triples": format_rational(stats.mean_triples),
        },
        "expected": {
            "vertices": format_rational(stats.expected_vertices),
            "edges": format_rational(stats.expected_edges),
            "triples": format_rational(stats.expected_triples),
        },
        "se_squared": {
            "vertices": format_rational(stats.se_sq_vertices),
            "edges": format_rational(stats.se_sq_edges),
            "triples": format_rational(stats.se_sq_triples),
        },
        # decimal approximations of the exact se_squared roots, for humans
        "se_approx": {
            "vertices": f"{se[0]:.9g}",
            "edges": f"{se[1]:.9g}",
            "triples": f"{se[2]:.9g}",
        },
        "within_3_se": stats.within_standard_errors(3),
    }
