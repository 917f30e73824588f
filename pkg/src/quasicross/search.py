"""Simulated annealing over drawings: minimize (triples, crossings).

The objective is lexicographic: fewer triples of pairwise crossing edges
always beats fewer crossings, so the Metropolis chain runs on the
scalarization triples * W + crossings with W = 1 + the maximum possible
number of crossing pairs.  Moves perturb one vertex or edit one bend;
proposals that break drawing simplicity are rejected outright rather than
repaired.  Candidate evaluation is incremental
(:class:`~quasicross.incremental.IncrementalAnalysis`); the returned best
drawing is always re-counted from scratch with the exact kernel before it
leaves this module.

All randomness comes from ``random.Random`` seeded with documented
splitmix-derived child seeds (one per restart), so identical
(drawing, config) inputs give identical traces and results.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .bounds import derive_seed
from .crossings import count_triples, crossing_pairs, require_valid
from .drawing import Drawing, validate
from .geometry import rat
from .incremental import IncrementalAnalysis, MoveEval


class MoveKind(enum.IntEnum):
    PERTURB_VERTEX = 0
    ADD_BEND = 1
    MOVE_BEND = 2
    REMOVE_BEND = 3


class StepStatus(enum.IntEnum):
    ACCEPTED = 0
    REJECTED_WORSE = 1
    REJECTED_INVALID = 2


@dataclass(frozen=True, order=True)
class Objective:
    """Lexicographic: triples first, crossing pairs as tiebreak."""

    triples: int
    crossing_pairs: int

    def scalar(self, triple_weight: int) -> int:
        return self.triples * triple_weight + self.crossing_pairs


DEFAULT_MOVE_WEIGHTS: Mapping[MoveKind, int] = {
    MoveKind.PERTURB_VERTEX: 1,
    MoveKind.ADD_BEND: 4,
    MoveKind.MOVE_BEND: 4,
    MoveKind.REMOVE_BEND: 1,
}


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    max_iterations: int
    initial_temperature: Fraction = Fraction(3)
    cooling_factor: Fraction = Fraction(9999, 10000)
    move_weights: Mapping[MoveKind, int] = field(default_factory=lambda: dict(DEFAULT_MOVE_WEIGHTS))
    max_bends_per_edge: int = 3
    perturbation_radius: Fraction = Fraction(1)
    restart_count: int = 1
    lattice_denominator: int = 1 << 16

    def __post_init__(self) -> None:
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if not rat(self.initial_temperature) > 0:
            raise ValueError("initial_temperature must be positive")
        if not 0 < rat(self.cooling_factor) < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if self.max_bends_per_edge < 0:
            raise ValueError("max_bends_per_edge must be >= 0")
        if not rat(self.perturbation_radius) > 0:
            raise ValueError("perturbation_radius must be positive")
        if self.restart_count < 1:
            raise ValueError("restart_count must be >= 1")
        if self.lattice_denominator < 1:
            raise ValueError("lattice_denominator must be >= 1")
        weights = {MoveKind(k): int(w) for k, w in self.move_weights.items()}
        if any(w < 0 for w in weights.values()) or not any(weights.values()):
            raise ValueError("move weights must be nonnegative with at least one positive")
        object.__setattr__(self, "move_weights", weights)


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    move: MoveKind
    status: StepStatus
    objective_before: Objective
    objective_after: Objective
    temperature: float

    @property
    def accepted(self) -> bool:
        return self.status is StepStatus.ACCEPTED


class RestartTrace:
    """Columnar per-iteration log of one annealing chain."""

    def __init__(self, restart: int, seed: int, capacity: int):
        self.restart = restart
        self.seed = seed
        self.move = np.zeros(capacity, dtype=np.int8)
        self.status = np.zeros(capacity, dtype=np.int8)
        self.before_t = np.zeros(capacity, dtype=np.int64)
        self.before_c = np.zeros(capacity, dtype=np.int64)
        self.after_t = np.zeros(capacity, dtype=np.int64)
        self.after_c = np.zeros(capacity, dtype=np.int64)
        self.temperature = np.zeros(capacity, dtype=np.float64)
        self.length = 0

    def log(self, move: MoveKind, status: StepStatus,
            before: tuple[int, int], after: tuple[int, int], temp: float) -> None:
        k = self.length
        self.move[k] = move
        self.status[k] = status
        self.before_t[k], self.before_c[k] = before
        self.after_t[k], self.after_c[k] = after
        self.temperature[k] = temp
        self.length = k + 1

    def __len__(self) -> int:
        return self.length

    def record(self, k: int) -> IterationRecord:
        if not 0 <= k < self.length:
            raise IndexError(k)
        return IterationRecord(
            k, MoveKind(int(self.move[k])), StepStatus(int(self.status[k])),
            Objective(int(self.before_t[k]), int(self.before_c[k])),
            Objective(int(self.after_t[k]), int(self.after_c[k])),
            float(self.temperature[k]))

    def records(self) -> Iterator[IterationRecord]:
        return (self.record(k) for k in range(self.length))


@dataclass(frozen=True)
class BestEntry:
    restart: int
    iteration: int
    objective: Objective


@dataclass(frozen=True)
class SearchTrace:
    restarts: tuple[RestartTrace, ...]
    best_timeline: tuple[BestEntry, ...]
    best_restart: int

    @property
    def iterations(self) -> int:
        return sum(len(t) for t in self.restarts)

    @property
    def best_objective(self) -> Objective:
        return self.best_timeline[-1].objective


def objective(d: Drawing) -> Objective:
    """Exact (triples, crossing pairs) of a valid drawing."""
    report = count_triples(crossing_pairs(d))
    return Objective(report.triple_count, report.crossing_pair_count)


@dataclass(frozen=True)
class _MoveSpec:
    kind: MoveKind
    vertex: int = -1
    edge: int = -1
    index: int = -1               # bend index (move/remove) or segment index (add)
    offset: tuple[int, int] = (0, 0)   # in lattice units


def _sample_move(rng: random.Random, cfg: SearchConfig, ia: IncrementalAnalysis) -> _MoveSpec:
    kinds = sorted(cfg.move_weights)
    total = sum(cfg.move_weights[k] for k in kinds)
    pick = rng.random() * total
    acc = 0
    kind = kinds[-1]
    for k in kinds:
        acc += cfg.move_weights[k]
        if pick < acc:
            kind = k
            break

    L = cfg.lattice_denominator
    base_range = max(1, int(cfg.perturbation_radius * L))

    def offset(multiplier: int) -> tuple[int, int]:
        r = base_range * multiplier
        return (rng.randint(-r, r), rng.randint(-r, r))

    def tail_multiplier() -> int:
        u = rng.random()
        if u < 0.55:
            return 1
        if u < 0.80:
            return 4
        if u < 0.93:
            return 16
        return 64

    if kind is MoveKind.PERTURB_VERTEX:
        return _MoveSpec(kind, vertex=rng.randrange(ia.n), offset=offset(1))
    edge = rng.randrange(ia.m)
    if kind is MoveKind.ADD_BEND:
        segment = rng.randrange(len(ia.bends[edge]) + 1)
        return _MoveSpec(kind, edge=edge, index=segment, offset=offset(tail_multiplier()))
    if kind is MoveKind.MOVE_BEND:
        count = len(ia.bends[edge])
        index = rng.randrange(count) if count else 0
        return _MoveSpec(kind, edge=edge, index=index, offset=offset(tail_multiplier()))
    count = len(ia.bends[edge])
    index = rng.randrange(count) if count else 0
    return _MoveSpec(MoveKind.REMOVE_BEND, edge=edge, index=index)


def _try_spec(ia: IncrementalAnalysis, spec: _MoveSpec, cfg: SearchConfig) -> MoveEval | None:
    L = cfg.lattice_denominator
    unit = ia.scale // L  # ensure_scale(L) ran, so this is exact
    dx, dy = spec.offset[0] * unit, spec.offset[1] * unit

    if spec.kind is MoveKind.PERTURB_VERTEX:
        x, y = ia.vpos[spec.vertex]
        return ia.try_vertex_move(spec.vertex, (x + dx, y + dy))

    bends = ia.bends[spec.edge]
    if spec.kind is MoveKind.ADD_BEND:
        if len(bends) >= cfg.max_bends_per_edge:
            return None
        route = ia.route(spec.edge)
        (px, py), (qx, qy) = route[spec.index], route[spec.index + 1]
        # segment midpoint snapped down to the lattice
        bx = ((px + qx) * L // (2 * ia.scale)) * unit + dx
        by = ((py + qy) * L // (2 * ia.scale)) * unit + dy
        new_bends = [*bends[:spec.index], (bx, by), *bends[spec.index:]]
        return ia.try_reroute(spec.edge, new_bends)
    if spec.kind is MoveKind.MOVE_BEND:
        if not bends:
            return None
        x, y = bends[spec.index]
        new_bends = list(bends)
        new_bends[spec.index] = (x + dx, y + dy)
        return ia.try_reroute(spec.edge, new_bends)
    if not bends:
        return None
    return ia.try_reroute(spec.edge, [b for k, b in enumerate(bends) if k != spec.index])


def propose_move(d: Drawing, cfg: SearchConfig, rng: random.Random) -> Drawing | None:
    """One random move applied to the drawing, or None when the proposal is
    rejected (structurally impossible or violating simplicity)."""
    ia = IncrementalAnalysis(d)
    ia.ensure_scale(cfg.lattice_denominator)
    ev = _try_spec(ia, _sample_move(rng, cfg, ia), cfg)
    if ev is None:
        return None
    ia.apply(ev)
    result = ia.to_drawing()
    assert validate(result).is_valid
    return result


def anneal(d0: Drawing, cfg: SearchConfig, *,
           checkpoint_path: str | None = None,
           checkpoint_every: int = 0,
           resume=None) -> tuple[Drawing, SearchTrace]:
    """Minimize the (triples, crossings) objective from the given start.

    Deterministic in (d0, cfg).  The best drawing over all restarts is
    re-validated and fully re-counted before being returned; the reported
    best objective is that recount, and a drift between bookkeeping and
    recount raises instead of returning a wrong witness.
    """
    require_valid(d0)
    triple_weight = 1 + d0.e * (d0.e - 1) // 2

    traces: list[RestartTrace] = []
    timeline: list[BestEntry] = []
    best: tuple[Objective, int, object] | None = None  # objective, restart, snapshot

    start_restart = resume.restart if resume is not None else 0
    for r in range(start_restart, cfg.restart_count):
        restart_seed = derive_seed(cfg.seed, r)
        rng = random.Random(restart_seed)
        ia = IncrementalAnalysis(d0, checked=False)
        ia.ensure_scale(cfg.lattice_denominator)
        start_iter = 0
        if resume is not None and r == resume.restart:
            ia = resume.restore_state(cfg)
            rng.setstate(resume.rng_state)
            start_iter = resume.iteration

        trace = RestartTrace(r, restart_seed, max(0, cfg.max_iterations - start_iter))
        traces.append(trace)
        current = Objective(*ia.objective())
        if best is None or current < best[0]:
            best = (current, r, ia.snapshot())
            timeline.append(BestEntry(r, start_iter, current))

        temperature = float(cfg.initial_temperature) * float(cfg.cooling_factor) ** start_iter
        cooling = float(cfg.cooling_factor)
        for k in range(start_iter, cfg.max_iterations):
            spec = _sample_move(rng, cfg, ia)
            ev = _try_spec(ia, spec, cfg)
            if ev is None:
                trace.log(spec.kind, StepStatus.REJECTED_INVALID,
                          (current.triples, current.crossing_pairs),
                          (current.triples, current.crossing_pairs), temperature)
            else:
                candidate = Objective(ev.triple_count, ev.crossing_count)
                delta = candidate.scalar(triple_weight) - current.scalar(triple_weight)
                if delta <= 0 or (temperature > 0.0
                                  and rng.random() < math.exp(-delta / temperature)):
                    ia.apply(ev)
                    trace.log(spec.kind, StepStatus.ACCEPTED,
                              (current.triples, current.crossing_pairs),
                              (candidate.triples, candidate.crossing_pairs), temperature)
                    current = candidate
                    if current < best[0]:
                        best = (current, r, ia.snapshot())
                        timeline.append(BestEntry(r, k, current))
                else:
                    trace.log(spec.kind, StepStatus.REJECTED_WORSE,
                              (current.triples, current.crossing_pairs),
                              (candidate.triples, candidate.crossing_pairs), temperature)
            temperature *= cooling
            if checkpoint_path and checkpoint_every and (k + 1) % checkpoint_every == 0:
                _write_checkpoint(checkpoint_path, cfg, r, k + 1, rng, ia,
                                  current, best, d0)
        resume = None  # only the first processed restart resumes

    assert best is not None
    best_obj, best_restart, best_snap = best
    ia_ref = IncrementalAnalysis(d0, checked=False)
    best_drawing = ia_ref.drawing_from_snapshot(best_snap)
    recount = objective(best_drawing)  # validates and recounts from scratch
    if recount != best_obj:
        raise AssertionError(
            f"incremental bookkeeping drifted: tracked {best_obj}, recount {recount}")
    return best_drawing, SearchTrace(tuple(traces), tuple(timeline), best_restart)


@dataclass(frozen=True)
class ResumeState:
    """Deserialized annealing checkpoint: continue restart ``restart`` at
    ``iteration`` with the saved chain state."""

    restart: int
    iteration: int
    rng_state: tuple
    current: Drawing

    def restore_state(self, cfg: SearchConfig) -> IncrementalAnalysis:
        restored = IncrementalAnalysis(self.current)
        restored.ensure_scale(cfg.lattice_denominator)
        return restored


def _write_checkpoint(path: str, cfg: SearchConfig, restart: int, iteration: int,
                      rng: random.Random, ia: IncrementalAnalysis,
                      current: Objective, best, d0: Drawing) -> None:
    from . import fileformat  # deferred: fileformat is a higher layer

    best_obj, best_restart, best_snap = best
    best_drawing = ia.drawing_from_snapshot(best_snap)
    fileformat.write_drawing_file(f"{path}.best.json", best_drawing)
    fileformat.write_checkpoint_state(
        f"{path}.state.json",
        restart=restart, iteration=iteration, rng_state=rng.getstate(),
        current_drawing=ia.to_drawing(),
        current_objective=(current.triples, current.crossing_pairs),
        best_objective=(best_obj.triples, best_obj.crossing_pairs),
        best_restart=best_restart)


def load_resume_state(path: str) -> ResumeState:
    from . import fileformat

    return fileformat.read_checkpoint_state(path)
