"""Lower bounds on the minimum number of pairwise-crossing edge triples.

Two formulas over (n, e), both evaluated in exact rational arithmetic with
ceilings applied only at the very end:

  linear bound      e - 6.5 n + 20                      (n >= 4)
  amplified bound   ((a - 6.5)/a^5) e^5/n^4 + 20 e^6/(a^6 n^6)
                    admissible for 6.5 < a <= e/n

The amplified bound comes from sampling each vertex independently with
probability p = a*n/e and applying the linear bound to the expected
subgraph; a triple survives the sampling exactly when its six distinct
vertices survive, hence the p^6.  The linear bound is only stated for
n >= 4, so applying it to arbitrarily small random subgraphs is a leap
the derivation does not justify; the formula is implemented exactly as
printed and the Monte Carlo harness validates the fixed-drawing
expectation identities instead of re-deriving it.

Note the fixed a = 65/8 maximizes only the first term's coefficient;
:func:`optimize_alpha` maximizes the full expression, which for many
(n, e) is largest near the left end of the admissible interval where the
second term dominates.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .crossings import count_triples, crossing_pairs
from .drawing import Drawing
from .geometry import RationalLike, rat

EDGE_BOUND_SLOPE = Fraction(13, 2)   # max edges of a quasi-planar simple drawing: 6.5n - 20
EDGE_BOUND_OFFSET = 20


@dataclass(frozen=True)
class BoundInput:
    n: int
    e: int

    def __post_init__(self) -> None:
        if self.e < 0 or self.e > self.n * (self.n - 1) // 2:
            raise ValueError(f"e={self.e} out of range for n={self.n}")

    @staticmethod
    def complete(n: int) -> "BoundInput":
        return BoundInput(n, n * (n - 1) // 2)


@dataclass(frozen=True)
class BoundReport:
    input: BoundInput
    eq1_value: Fraction
    eq2_fixed_alpha: tuple[Fraction, Fraction] | None   # (alpha, value) at alpha = 65/8
    eq2_optimized: tuple[Fraction, Fraction] | None     # (alpha*, value)
    best_integer_lower_bound: int


def eq1_bound(inp: BoundInput) -> Fraction:
    """Linear lower bound e - 6.5 n + 20; may be negative, caller clamps."""
    if inp.n < 4:
        raise ValueError("the linear bound is only stated for n >= 4")
    return Fraction(inp.e) - EDGE_BOUND_SLOPE * inp.n + EDGE_BOUND_OFFSET


class AlphaRangeError(ValueError):
    def __init__(self, constraint: str):
        self.constraint = constraint
        super().__init__(constraint)


def eq2_bound(inp: BoundInput, alpha: RationalLike) -> Fraction:
    """Amplified bound at a given alpha, exact.

    Requires 6.5 < alpha (first term nonnegative as the derivation
    assumes) and alpha <= e/n (the sampling probability p = alpha*n/e
    must be at most 1).
    """
    a = rat(alpha)
    if a <= EDGE_BOUND_SLOPE:
        raise AlphaRangeError(f"alpha must exceed 13/2, got {a}")
    if a * inp.n > inp.e:
        raise AlphaRangeError(
            f"alpha={a} needs e >= alpha*n but e/n = {Fraction(inp.e, inp.n)}")
    n, e = inp.n, inp.e
    first = (a - EDGE_BOUND_SLOPE) / a ** 5 * Fraction(e ** 5, n ** 4)
    second = Fraction(EDGE_BOUND_OFFSET * e ** 6) / (a ** 6 * n ** 6)
    return first + second


def optimal_alpha_first_term() -> Fraction:
    """The alpha maximizing (alpha - 6.5)/alpha^5, exactly 65/8: the
    stationary point of the first term's coefficient is (5/4) * 6.5."""
    return Fraction(5, 4) * EDGE_BOUND_SLOPE


def optimize_alpha(inp: BoundInput, rel_tol: float = 1e-9) -> tuple[Fraction, Fraction]:
    """Maximize the full amplified bound over alpha in (6.5, e/n].

    The derivative's sign is governed by a concave quadratic whose peak
    lies left of 6.5, so the bound is unimodal on the admissible interval;
    a ternary search in float locates the maximizer, the returned value is
    the exact rational evaluation at a snapped rational alpha.  The fixed
    alpha = 65/8 (when admissible) and the right endpoint e/n are always
    evaluated too, so the result dominates both.
    """
    ratio = Fraction(inp.e, inp.n)
    if ratio <= EDGE_BOUND_SLOPE:
        raise AlphaRangeError(
            f"amplified bound inapplicable: e/n = {ratio} is not above 13/2")

    lo, hi = float(EDGE_BOUND_SLOPE), float(ratio)

    def f(a: float) -> float:
        first = (a - 6.5) / a ** 5 * inp.e ** 5 / inp.n ** 4
        second = 20.0 * inp.e ** 6 / (a ** 6 * inp.n ** 6)
        return first + second

    while hi - lo > rel_tol * max(1.0, abs(hi)):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if f(m1) < f(m2):
            lo = m1
        else:
            hi = m2

    candidates = [Fraction(hi).limit_denominator(10 ** 15), ratio]
    fixed = optimal_alpha_first_term()
    if fixed <= ratio:
        candidates.append(fixed)
    best: tuple[Fraction, Fraction] | None = None
    for a in candidates:
        if a <= EDGE_BOUND_SLOPE or a > ratio:
            continue
        value = eq2_bound(inp, a)
        if best is None or value > best[1]:
            best = (a, value)
    assert best is not None
    return best


def best_lower_bound(inp: BoundInput) -> BoundReport:
    """Best integer lower bound: max(0, ceil of each applicable formula),
    with all intermediate values kept exact."""
    eq1 = eq1_bound(inp)
    ratio = Fraction(inp.e, inp.n) if inp.n else Fraction(0)
    eq2_fixed = None
    eq2_opt = None
    if ratio > EDGE_BOUND_SLOPE:
        fixed = optimal_alpha_first_term()
        if fixed <= ratio:
            eq2_fixed = (fixed, eq2_bound(inp, fixed))
        eq2_opt = optimize_alpha(inp)
    ceilings = [math.ceil(eq1)]
    ceilings += [math.ceil(pair[1]) for pair in (eq2_fixed, eq2_opt) if pair is not None]
    return BoundReport(inp, eq1, eq2_fixed, eq2_opt, max(0, *ceilings))


@dataclass(frozen=True)
class SubsampleStats:
    """Monte Carlo estimates vs exact expectations for random vertex-induced
    subdrawings.  Means and squared standard errors are exact rationals
    (sums of integers over integer trial counts); no rounding happens
    before comparisons."""

    p: Fraction
    trials: int
    mean_vertices: Fraction
    mean_edges: Fraction
    mean_triples: Fraction
    expected_vertices: Fraction
    expected_edges: Fraction
    expected_triples: Fraction
    se_sq_vertices: Fraction
    se_sq_edges: Fraction
    se_sq_triples: Fraction

    def standard_errors(self) -> tuple[float, float, float]:
        return (math.sqrt(self.se_sq_vertices),
                math.sqrt(self.se_sq_edges),
                math.sqrt(self.se_sq_triples))

    def within_standard_errors(self, k: int = 3) -> bool:
        """Exact check that every mean is within k standard errors of its
        expectation: (mean - E)^2 <= k^2 * se^2, no floats involved."""
        return all(
            (mean - exp) ** 2 <= k * k * se_sq
            for mean, exp, se_sq in (
                (self.mean_vertices, self.expected_vertices, self.se_sq_vertices),
                (self.mean_edges, self.expected_edges, self.se_sq_edges),
                (self.mean_triples, self.expected_triples, self.se_sq_triples),
            ))


def derive_seed(seed: int, index: int) -> int:
    """Deterministic 64-bit child seed (splitmix-style odd-constant mix).
    Documented so published statistics are reproducible bit for bit."""
    x = (seed + index * 0x9E3779B97F4A7C15) % 2 ** 64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) % 2 ** 64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) % 2 ** 64
    return x ^ (x >> 31)


def _mean_and_se_sq(values_sum: int, squares_sum: int, trials: int) -> tuple[Fraction, Fraction]:
    mean = Fraction(values_sum, trials)
    if trials < 2:
        return mean, Fraction(0)
    # sample variance of the mean: (sum(x^2) - n*mean^2) / (n-1) / n
    var = (Fraction(squares_sum) - trials * mean ** 2) / (trials - 1)
    if var < 0:  # guard: exact arithmetic can't go negative, but be explicit
        var = Fraction(0)
    return mean, var / trials


def monte_carlo_subsample(d: Drawing, p: RationalLike, trials: int, seed: int) -> SubsampleStats:
    """Sample vertex-induced subdrawings and compare against the exact
    expectations p*n, p^2*e and p^6*T.

    RNG stream (documented for reproducibility): a single
    ``random.Random(seed)`` Mersenne Twister; for each trial, one
    ``random()`` draw per vertex in drawing order, keeping the vertex iff
    the draw is < p.

    A vertex-induced subdrawing keeps an edge iff both endpoints survive
    and keeps a triple iff its six support vertices survive, so per-trial
    counts are computed from precomputed survival masks; this matches
    forming the subdrawing and recounting (tested against that directly).
    """
    p = rat(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} outside [0, 1]")
    if trials < 1:
        raise ValueError("trials must be >= 1")

    graph = crossing_pairs(d)
    report = count_triples(graph)
    index = {v.id: i for i, v in enumerate(d.vertices)}
    edge_masks = [(1 << index[e.u]) | (1 << index[e.v]) for e in d.edges]
    triple_masks = [edge_masks[a] | edge_masks[b] | edge_masks[c] for a, b, c in report.triples]

    rng = random.Random(seed)
    n = d.n
    sums = [0, 0, 0]
    squares = [0, 0, 0]
    for _ in range(trials):
        kept = 0
        kept_count = 0
        for i in range(n):
            if rng.random() < p:
                kept |= 1 << i
                kept_count += 1
        e_count = sum(1 for m in edge_masks if m & kept == m)
        t_count = sum(1 for m in triple_masks if m & kept == m)
        for slot, value in enumerate((kept_count, e_count, t_count)):
            sums[slot] += value
            squares[slot] += value * value

    (mean_v, se_v), (mean_e, se_e), (mean_t, se_t) = (
        _mean_and_se_sq(sums[i], squares[i], trials) for i in range(3))
    return SubsampleStats(
        p=p, trials=trials,
        mean_vertices=mean_v, mean_edges=mean_e, mean_triples=mean_t,
        expected_vertices=p * n,
        expected_edges=p ** 2 * d.e,
        expected_triples=p ** 6 * report.triple_count,
        se_sq_vertices=se_v, se_sq_edges=se_e, se_sq_triples=se_t,
    )
