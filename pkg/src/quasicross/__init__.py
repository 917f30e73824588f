"""Toolkit for simple drawings of graphs and their pairwise-crossing
edge triples: exact validation, triple counting, lower-bound formulas,
Monte Carlo subsampling, and annealing search for drawings with few
triples."""

from .bounds import (
    BoundInput,
    BoundReport,
    SubsampleStats,
    best_lower_bound,
    eq1_bound,
    eq2_bound,
    monte_carlo_subsample,
    optimal_alpha_first_term,
    optimize_alpha,
)
from .crossings import (
    CrossingGraph,
    InvalidDrawingError,
    TripleReport,
    count_triples,
    count_triples_bruteforce,
    crossing_pairs,
    greedy_quasiplanarize,
)
from .drawing import (
    Drawing,
    Edge,
    ValidationReport,
    Vertex,
    Violation,
    ViolationKind,
    affine_transform,
    convex_complete,
    subdrawing,
    validate,
)
from .geometry import (
    Meeting,
    MeetingKind,
    Orientation,
    Point,
    Rational,
    Segment,
    orientation,
    point,
    polyline_meetings,
    rat,
    segment_meeting,
)
from .search import (
    MoveKind,
    Objective,
    SearchConfig,
    SearchTrace,
    anneal,
    objective,
    propose_move,
)

__version__ = "0.1.0"
