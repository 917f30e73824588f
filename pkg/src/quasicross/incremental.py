"""Incremental crossing and triple bookkeeping for local moves.

The annealer evaluates millions of candidate drawings that differ from the
current one by a single vertex move or a single reroute, so re-running the
full pairwise analysis each time is hopeless.  This module keeps the
crossing graph, the triple count, and per-edge crossing parameters up to
date by re-testing only the edge pairs that involve a modified edge.

Exactness is preserved by a filtered predicate: coordinates are integers
(numerator * one global scale; proposals snap to a power-of-two lattice,
so the scale stabilizes immediately), the segment-pair sweep runs in
float64, and any orientation value smaller than a rigorous rounding-error
bound is recomputed in exact integer arithmetic.  Large orientation values
have a certain sign, so a cell the filter calls a crossing or a
non-meeting is exactly that; only near-degenerate cells pay for exact
arithmetic.

Move evaluation is strict: a candidate that would make two edges touch
tangentially, overlap, or cross exactly through a bend point is rejected
as invalid rather than classified (the exact kernel in
:mod:`quasicross.geometry` remains the authority on such drawings; the
annealer simply never proposes its way into them).  Initialization is not
strict: a pre-existing legal crossing through a bend point is classified
with the exact kernel.

The counts maintained here are bookkeeping, not results: callers confirm
final answers with a full recount (:func:`quasicross.crossings
.crossing_pairs` + ``count_triples``), which is what
:meth:`IncrementalAnalysis.assert_consistent` does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .crossings import count_triples, crossing_pairs, require_valid
from .drawing import Drawing, Edge, Vertex
from .geometry import MeetingKind, Point, polyline_meetings

IntPoint = tuple[int, int]
IntSeg = tuple[int, int, int, int]
# a recorded crossing along one edge: (segment index, parameter in (0, 1))
Param = tuple[int, float]

# relative filter for d = p1 - p2 over exactly-converted ints: the float
# error is below _EPS * (|p1| + |p2|), so any |d| above that certifies the
# sign (Shewchuk-style orient2d bound with slack for the conversion of
# coordinates beyond 2^53)
_EPS = 2.0 ** -48
# two float parameters closer than this are resolved exactly
_PARAM_TOL = 1e-9


def _cross(ox: int, oy: int, ax: int, ay: int, bx: int, by: int) -> int:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _cell_exact(A: IntSeg, B: IntSeg) -> tuple[int, int, int, int]:
    ax, ay, bx, by = A
    cx, cy, dx, dy = B
    return (_cross(ax, ay, bx, by, cx, cy),
            _cross(ax, ay, bx, by, dx, dy),
            _cross(cx, cy, dx, dy, ax, ay),
            _cross(cx, cy, dx, dy, bx, by))


def _in_box(px: int, py: int, ax: int, ay: int, bx: int, by: int) -> bool:
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def _on_segment_int(px: int, py: int, ax: int, ay: int, bx: int, by: int) -> bool:
    return _cross(ax, ay, bx, by, px, py) == 0 and _in_box(px, py, ax, ay, bx, by)


class PairConflict(Exception):
    """A re-tested pair is not simple (or not provably clean) under the
    candidate move."""


def _sweep_py(R, C, col_edge, row_edge, excluded, stored,
              shared_x, shared_y, moved, mox, moy, mnx, mny, coords_exact,
              out_x, out_f):
    """The segment-pair sweep, one cell at a time (jitted when numba is
    available).

    Cells whose segments share the graph vertex expected for their edge
    pair are cleared in place when the segments are certainly not
    collinear; every other uncertain cell lands in ``out_f`` for exact
    integer treatment.
    """
    nx = nf = 0
    eps = _EPS
    for r in range(R.shape[0]):
        ax, ay, bx, by = R[r, 0], R[r, 1], R[r, 2], R[r, 3]
        rdx, rdy = bx - ax, by - ay
        re = row_edge[r]
        for c in range(C.shape[0]):
            if c < stored:
                je = col_edge[c]
                if excluded[je]:
                    continue
            else:
                je = row_edge[c - stored]
                if re >= je:
                    continue
            cx, cy, dx, dy = C[c, 0], C[c, 1], C[c, 2], C[c, 3]
            if coords_exact:
                match = (ax == cx and ay == cy) or (ax == dx and ay == dy) \
                    or (bx == cx and by == cy) or (bx == dx and by == dy)
                if match:
                    # an exactly shared segment endpoint: fine iff it is the
                    # edges' common graph vertex and the segments are not
                    # collinear (collinear might overlap: inspect exactly)
                    if ax == cx and ay == cy:
                        px, py = ax, ay
                    elif ax == dx and ay == dy:
                        px, py = ax, ay
                    elif bx == cx and by == cy:
                        px, py = bx, by
                    else:
                        px, py = bx, by
                    wx = shared_x[re, je]
                    wy = shared_y[re, je]
                    if moved and wx == mox and wy == moy:
                        wx, wy = mnx, mny
                    if px == wx and py == wy:
                        p = rdx * (dy - cy)
                        q = rdy * (dx - cx)
                        if abs(p - q) > eps * (abs(p) + abs(q)):
                            continue  # meet exactly once, at their vertex
                    out_f[nf, 0] = r
                    out_f[nf, 1] = c
                    nf += 1
                    continue
            p = rdx * (cy - ay)
            q = rdy * (cx - ax)
            d1 = p - q
            if abs(d1) <= eps * (abs(p) + abs(q)):
                out_f[nf, 0] = r
                out_f[nf, 1] = c
                nf += 1
                continue
            p = rdx * (dy - ay)
            q = rdy * (dx - ax)
            d2 = p - q
            if abs(d2) <= eps * (abs(p) + abs(q)):
                out_f[nf, 0] = r
                out_f[nf, 1] = c
                nf += 1
                continue
            if (d1 > 0) == (d2 > 0):
                continue  # both col endpoints strictly one side: no meeting
            cdx, cdy = dx - cx, dy - cy
            p = cdx * (ay - cy)
            q = cdy * (ax - cx)
            d3 = p - q
            if abs(d3) <= eps * (abs(p) + abs(q)):
                out_f[nf, 0] = r
                out_f[nf, 1] = c
                nf += 1
                continue
            p = cdx * (by - cy)
            q = cdy * (bx - cx)
            d4 = p - q
            if abs(d4) <= eps * (abs(p) + abs(q)):
                out_f[nf, 0] = r
                out_f[nf, 1] = c
                nf += 1
                continue
            if (d3 > 0) == (d4 > 0):
                continue
            out_x[nx, 0] = r
            out_x[nx, 1] = c
            out_x[nx, 2] = d3 / (d3 - d4)
            out_x[nx, 3] = d1 / (d1 - d2)
            nx += 1
    return nx, nf


_sweep_state: list = []  # lazily JIT-compiled sweep, or None if numba is absent


def _get_sweep():
    if not _sweep_state:
        try:
            import numba
        except ImportError:
            _sweep_state.append(None)
        else:
            _sweep_state.append(numba.njit(cache=True)(_sweep_py))
    return _sweep_state[0]


def _zero_cell_benign(A: IntSeg, B: IntSeg, d1: int, d2: int, d3: int, d4: int,
                      allowed: IntPoint | None) -> bool:
    """Whether two segments with a vanished orientation meet nowhere except
    possibly at the single ``allowed`` point (their expected shared
    endpoint)."""
    ax, ay, bx, by = A
    cx, cy, dx, dy = B
    if d1 == 0 and d2 == 0:
        # collinear: benign iff boxes are disjoint or touch exactly at allowed
        lox = max(min(ax, bx), min(cx, dx))
        hix = min(max(ax, bx), max(cx, dx))
        loy = max(min(ay, by), min(cy, dy))
        hiy = min(max(ay, by), max(cy, dy))
        if lox > hix or loy > hiy:
            return True
        if lox == hix and loy == hiy:
            return (lox, loy) == allowed
        return False
    if d1 == 0 and (cx, cy) != allowed and _in_box(cx, cy, ax, ay, bx, by):
        return False
    if d2 == 0 and (dx, dy) != allowed and _in_box(dx, dy, ax, ay, bx, by):
        return False
    if d3 == 0 and (ax, ay) != allowed and _in_box(ax, ay, cx, cy, dx, dy):
        return False
    if d4 == 0 and (bx, by) != allowed and _in_box(bx, by, cx, cy, dx, dy):
        return False
    return True


@dataclass
class MoveEval:
    """Everything needed to commit one evaluated move."""

    moved_vertex: tuple[int, IntPoint] | None
    new_routes: dict[int, list[IntPoint]]
    # crossing transitions for re-tested pairs (i < j): params if the pair
    # now crosses, None if it no longer does; untouched pairs are absent
    pair_crossings: dict[tuple[int, int], tuple[Param, Param] | None]
    triple_count: int
    crossing_count: int


class IncrementalAnalysis:
    """Crossing-graph state for one drawing, updatable move by move."""

    def __init__(self, d: Drawing, checked: bool = True):
        if checked:
            require_valid(d)
        self.ids = [v.id for v in d.vertices]
        self._vindex = {v.id: i for i, v in enumerate(d.vertices)}
        self.edge_ends = [(self._vindex[e.u], self._vindex[e.v]) for e in d.edges]
        self.tags = [e.tag for e in d.edges]
        self.n = d.n
        self.m = d.e

        # static graph adjacency: index of the shared vertex, or -1
        self.shared_vertex: dict[tuple[int, int], int] = {}
        for i, j in combinations(range(self.m), 2):
            common = set(self.edge_ends[i]) & set(self.edge_ends[j])
            self.shared_vertex[(i, j)] = common.pop() if common else -1
        self._incident: list[list[int]] = [[] for _ in range(self.n)]
        for k, (u, v) in enumerate(self.edge_ends):
            self._incident[u].append(k)
            self._incident[v].append(k)

        self.scale = 1
        for v in d.vertices:
            self.scale = math.lcm(self.scale, v.pos.x.denominator, v.pos.y.denominator)
        for e in d.edges:
            for b in e.bends:
                self.scale = math.lcm(self.scale, b.x.denominator, b.y.denominator)

        def scaled(p: Point) -> IntPoint:
            return (int(p.x * self.scale), int(p.y * self.scale))

        self.vpos: list[IntPoint] = [scaled(v.pos) for v in d.vertices]
        self.bends: list[list[IntPoint]] = [[scaled(b) for b in e.bends] for e in d.edges]

        self.adj: list[int] = [0] * self.m           # crossing-graph bitmasks
        self.cross_params: list[dict[int, Param]] = [dict() for _ in range(self.m)]
        self.crossing_count = 0
        self.triple_count = 0

        self._routes: list[list[IntPoint]] = []
        self._seg_coords: list[IntSeg] = []
        self._seg_edge_list: list[int] = []
        self._seg_within: list[int] = []
        self._edge_first_row: list[int] = []
        self._np_f: np.ndarray = np.zeros((0, 4))
        self._np_edge: np.ndarray = np.zeros(0, dtype=np.int32)
        self._max_coord = 1
        self._buf_x = np.empty((0, 4), dtype=np.float64)
        self._buf_f = np.empty((0, 2), dtype=np.int64)
        self._shared_x = np.full((self.m, self.m), np.nan)
        self._shared_y = np.full((self.m, self.m), np.nan)
        self._refresh_arrays()
        self._rebuild_shared_positions()
        self._init_pairs()

    def _rebuild_shared_positions(self) -> None:
        for (i, j), v in self.shared_vertex.items():
            if v >= 0:
                x, y = self.vpos[v]
                self._shared_x[i, j] = self._shared_x[j, i] = float(x)
                self._shared_y[i, j] = self._shared_y[j, i] = float(y)

    # -- basic geometry access ------------------------------------------------

    def route(self, i: int) -> list[IntPoint]:
        return self._routes[i]

    def _point(self, ip: IntPoint) -> Point:
        return Point(Fraction(ip[0], self.scale), Fraction(ip[1], self.scale))

    def objective(self) -> tuple[int, int]:
        return (self.triple_count, self.crossing_count)

    def to_drawing(self) -> Drawing:
        return self.drawing_from_snapshot(self.snapshot())

    def snapshot(self):
        return (self.scale, tuple(self.vpos), tuple(tuple(b) for b in self.bends))

    def drawing_from_snapshot(self, snap) -> Drawing:
        scale, vpos, bends = snap
        vertices = [
            Vertex(self.ids[i], Point(Fraction(x, scale), Fraction(y, scale)))
            for i, (x, y) in enumerate(vpos)]
        edges = [
            Edge(self.ids[u], self.ids[v],
                 tuple(Point(Fraction(x, scale), Fraction(y, scale)) for x, y in bends[k]),
                 self.tags[k])
            for k, (u, v) in enumerate(self.edge_ends)]
        return Drawing(vertices, edges)

    def ensure_scale(self, denominator: int) -> None:
        """Grow the global scale so coordinates with the given denominator
        become integers; rescales all stored coordinates (crossing
        parameters are ratios of cross products, hence scale-invariant)."""
        target = math.lcm(self.scale, denominator)
        if target == self.scale:
            return
        f = target // self.scale
        self.vpos = [(x * f, y * f) for x, y in self.vpos]
        self.bends = [[(x * f, y * f) for x, y in bs] for bs in self.bends]
        self.scale = target
        self._refresh_arrays()
        self._rebuild_shared_positions()

    # -- flat segment arrays ---------------------------------------------------

    def _refresh_arrays(self) -> None:
        coords: list[IntSeg] = []
        seg_edge: list[int] = []
        seg_within: list[int] = []
        first_row: list[int] = []
        routes: list[list[IntPoint]] = []
        bound = 1
        for i in range(self.m):
            u, v = self.edge_ends[i]
            pts = [self.vpos[u], *self.bends[i], self.vpos[v]]
            routes.append(pts)
            first_row.append(len(coords))
            for s, ((ax, ay), (bx, by)) in enumerate(zip(pts, pts[1:])):
                coords.append((ax, ay, bx, by))
                seg_edge.append(i)
                seg_within.append(s)
                bound = max(bound, abs(ax), abs(ay), abs(bx), abs(by))
        self._routes = routes
        self._seg_coords = coords
        self._seg_edge_list = seg_edge
        self._seg_within = seg_within
        self._edge_first_row = first_row
        self._np_f = np.array(coords, dtype=np.float64).reshape(len(coords), 4)
        self._np_edge = np.array(seg_edge, dtype=np.int32)
        self._max_coord = bound

    # -- segment-pair sweep ------------------------------------------------------

    def _cell_events(self, rows: list[tuple[int, int, IntSeg]],
                     modified: set[int],
                     moved: dict[int, IntPoint]) -> tuple[list, list]:
        """Test row segments against every stored segment of a non-modified
        edge and against each other (across different modified edges,
        deduplicated).

        Returns (crossings, zeros):
          crossings: (row_index, col_edge, col_seg, t_row, t_col) with the
                     parameters as certified floats
          zeros:     (row_index, col_edge, col_coords, d1, d2, d3, d4) with
                     exact integer orientations, at least one of them zero
        """
        if not rows:
            return [], []
        nrows = len(rows)
        R_int = [r[2] for r in rows]
        R = np.array(R_int, dtype=np.float64).reshape(nrows, 4)
        stored = len(self._seg_coords)
        row_edges = np.array([r[0] for r in rows], dtype=np.int32)
        C = np.concatenate([self._np_f, R], axis=0) if stored else R
        excluded = np.zeros(self.m, dtype=np.bool_)
        excluded[list(modified)] = True

        xcells: list = []
        zcells: list = []

        def emit_sure(r: int, c: int, t_row: float, t_col: float) -> None:
            if c < stored:
                j, sj = self._seg_edge_list[c], self._seg_within[c]
            else:
                j, sj = rows[c - stored][0], rows[c - stored][1]
            xcells.append((r, j, sj, t_row, t_col))

        def emit_flagged(r: int, c: int) -> None:
            if c < stored:
                j, sj, B = self._seg_edge_list[c], self._seg_within[c], self._seg_coords[c]
            else:
                j, sj, B = rows[c - stored][0], rows[c - stored][1], R_int[c - stored]
            e1, e2, e3, e4 = _cell_exact(rows[r][2], B)
            if e1 == 0 or e2 == 0 or e3 == 0 or e4 == 0:
                zcells.append((r, j, B, e1, e2, e3, e4))
            elif (e1 > 0) != (e2 > 0) and (e3 > 0) != (e4 > 0):
                xcells.append((r, j, sj, e3 / (e3 - e4), e1 / (e1 - e2)))

        _sweep = _get_sweep()
        if _sweep is not None:
            cap = nrows * (stored + nrows) + 1
            if self._buf_x.shape[0] < cap:
                self._buf_x = np.empty((cap, 4), dtype=np.float64)
                self._buf_f = np.empty((cap, 2), dtype=np.int64)
            if moved:
                (vi, (mnx, mny)), = moved.items()
                (mox, moy) = self.vpos[vi]
                moved_args = (True, float(mox), float(moy), float(mnx), float(mny))
            else:
                moved_args = (False, 0.0, 0.0, 0.0, 0.0)
            coords_exact = self._max_coord < (1 << 52)
            nx, nf = _sweep(R, C, self._np_edge, row_edges, excluded, stored,
                            self._shared_x, self._shared_y, *moved_args,
                            coords_exact, self._buf_x, self._buf_f)
            for r, c, t_row, t_col in self._buf_x[:nx].tolist():
                emit_sure(int(r), int(c), t_row, t_col)
            for r, c in self._buf_f[:nf].tolist():
                emit_flagged(r, c)
            return xcells, zcells

        # vectorized fallback when numba is unavailable
        ax, ay, bx, by = (R[:, k, None] for k in range(4))
        cx, cy, dx, dy = (C[None, :, k] for k in range(4))
        rdx, rdy = bx - ax, by - ay
        cdx, cdy = dx - cx, dy - cy
        p = rdx * (cy - ay)
        q = rdy * (cx - ax)
        d1 = p - q
        big = np.abs(d1) > _EPS * (np.abs(p) + np.abs(q))
        p = rdx * (dy - ay)
        q = rdy * (dx - ax)
        d2 = p - q
        big &= np.abs(d2) > _EPS * (np.abs(p) + np.abs(q))
        p = cdx * (ay - cy)
        q = cdy * (ax - cx)
        d3 = p - q
        big &= np.abs(d3) > _EPS * (np.abs(p) + np.abs(q))
        p = cdx * (by - cy)
        q = cdy * (bx - cx)
        d4 = p - q
        big &= np.abs(d4) > _EPS * (np.abs(p) + np.abs(q))
        straddle = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0))
        col_ok = np.empty((nrows, stored + nrows), dtype=bool)
        col_ok[:, :stored] = ~excluded[self._np_edge][None, :]
        col_ok[:, stored:] = row_edges[:, None] < row_edges[None, :]
        interesting = ((straddle & big) | ~big) & col_ok
        ridx, cidx = np.nonzero(interesting)
        if not len(ridx):
            return [], []
        sure = big[ridx, cidx].tolist()
        d1v, d2v = d1[ridx, cidx], d2[ridx, cidx]
        d3v, d4v = d3[ridx, cidx], d4[ridx, cidx]
        tr_all = (d3v / np.where(d3v == d4v, 1.0, d3v - d4v)).tolist()
        tc_all = (d1v / np.where(d1v == d2v, 1.0, d1v - d2v)).tolist()
        for k, (r, c) in enumerate(zip(ridx.tolist(), cidx.tolist())):
            if sure[k]:
                emit_sure(r, c, tr_all[k], tc_all[k])
            else:
                emit_flagged(r, c)
        return xcells, zcells

    # -- pair classification --------------------------------------------------------

    def _classify_pair_exact(self, i: int, j: int,
                             route_i: list[IntPoint], route_j: list[IntPoint],
                             shared_pos: IntPoint | None) -> tuple[Param, Param] | None:
        """Exact rational classification for one pair (initialization only):
        crossing params, None for a clean non-crossing pair, or PairConflict."""
        pts_i = [self._point(p) for p in route_i]
        pts_j = [self._point(p) for p in route_j]
        shared_pts = (self._point(shared_pos),) if shared_pos is not None else ()
        meetings = polyline_meetings(pts_i, pts_j, shared_pts)
        if shared_pos is not None:
            if len(meetings) == 1 and meetings[0].kind is MeetingKind.ENDPOINT_CONTACT \
                    and meetings[0].point == shared_pts[0]:
                return None
            raise PairConflict(f"adjacent edges {i},{j} meet beyond their endpoint")
        if not meetings:
            return None
        if len(meetings) == 1 and meetings[0].kind is MeetingKind.PROPER_CROSSING:
            pt = meetings[0].point
            assert pt is not None
            return (_param_of_point(pts_i, pt), _param_of_point(pts_j, pt))
        raise PairConflict(f"edges {i},{j} are not simple")

    def _evaluate_pairs(self, new_routes: dict[int, list[IntPoint]],
                        moved: dict[int, IntPoint], strict: bool
                        ) -> dict[tuple[int, int], tuple[Param, Param] | None]:
        """Re-test every pair involving a modified edge.

        Returns the crossing transitions: params for pairs that cross, None
        for pairs that crossed before but no longer do.  Raises PairConflict
        if any re-tested pair is not simple; under ``strict`` any unexpected
        contact conflicts instead of being classified exactly."""

        def vpos_at(v: int) -> IntPoint:
            return moved.get(v, self.vpos[v])

        modified = set(new_routes)
        rows: list[tuple[int, int, IntSeg]] = []
        for i in sorted(modified):
            route = new_routes[i]
            for s, (p, q) in enumerate(zip(route, route[1:])):
                rows.append((i, s, (p[0], p[1], q[0], q[1])))

        xcells, zcells = self._cell_events(rows, modified, moved)

        crossings: dict[tuple[int, int], list[tuple[Param, Param]]] = {}
        for r, j, sj, t_row, t_col in xcells:
            i, si, _ = rows[r]
            key = (i, j) if i < j else (j, i)
            entry = ((si, t_row), (sj, t_col)) if i < j else ((sj, t_col), (si, t_row))
            crossings.setdefault(key, []).append(entry)

        suspicious: set[tuple[int, int]] = set()
        for r, j, B, d1, d2, d3, d4 in zcells:
            i, _, A = rows[r]
            key = (i, j) if i < j else (j, i)
            if key in suspicious:
                continue
            shared = self.shared_vertex[key]
            w = vpos_at(shared) if shared >= 0 else None
            if not _zero_cell_benign(rows[r][2], B, d1, d2, d3, d4, w):
                suspicious.add(key)

        results: dict[tuple[int, int], tuple[Param, Param] | None] = {}
        if suspicious:
            if strict:
                raise PairConflict(f"unexpected contact in pairs {sorted(suspicious)}")

            def route_at(k: int) -> list[IntPoint]:
                if k in new_routes:
                    return new_routes[k]
                u, v = self.edge_ends[k]
                return [vpos_at(u), *self.bends[k], vpos_at(v)]

            for key in sorted(suspicious):
                i, j = key
                shared = self.shared_vertex[key]
                results[key] = self._classify_pair_exact(
                    i, j, route_at(i), route_at(j),
                    vpos_at(shared) if shared >= 0 else None)

        for key, found in crossings.items():
            if key in results:  # the exact kernel already settled this pair
                continue
            if len(found) > 1:
                raise PairConflict(f"edges {key[0]},{key[1]} cross more than once")
            if self.shared_vertex[key] >= 0:
                raise PairConflict(f"adjacent edges {key[0]},{key[1]} cross")
            results[key] = found[0]

        # pairs that crossed before but produced no event now are cleared
        for i in modified:
            for j in self.cross_params[i]:
                key = (i, j) if i < j else (j, i)
                results.setdefault(key, None)
        return results

    # -- structural checks on candidate routes ------------------------------------

    @staticmethod
    def _route_shape_ok(route: list[IntPoint]) -> bool:
        return all(p != q for p, q in zip(route, route[1:]))

    def _self_ok(self, route: list[IntPoint]) -> bool:
        segs = list(zip(route, route[1:]))
        for a in range(len(segs)):
            (ax, ay), (bx, by) = segs[a]
            fax, fay, fbx, fby = float(ax), float(ay), float(bx), float(by)
            rdx, rdy = fbx - fax, fby - fay
            A = (ax, ay, bx, by)
            for b in range(a + 1, len(segs)):
                (cx, cy), (dx, dy) = segs[b]
                # float filter: both far endpoints certified on one side of
                # this segment's line means the two segments cannot meet
                p = rdx * (cy - fay)
                q = rdy * (cx - fax)
                f1 = p - q
                if abs(f1) > _EPS * (abs(p) + abs(q)):
                    p = rdx * (dy - fay)
                    q = rdy * (dx - fax)
                    f2 = p - q
                    if abs(f2) > _EPS * (abs(p) + abs(q)) and (f1 > 0) == (f2 > 0):
                        continue
                B = (cx, cy, dx, dy)
                d1, d2, d3, d4 = _cell_exact(A, B)
                if d1 == 0 or d2 == 0 or d3 == 0 or d4 == 0:
                    allowed = route[a + 1] if b == a + 1 else None
                    if not _zero_cell_benign(A, B, d1, d2, d3, d4, allowed):
                        return False
                elif (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0):
                    return False
        return True

    def _vertices_off_routes(self, new_routes: dict[int, list[IntPoint]],
                             moved: dict[int, IntPoint]) -> bool:
        """No vertex may lie on a modified route other than its endpoints;
        float filter over all (vertex, modified segment) cells, exact checks
        only where the filter cannot certify a nonzero orientation."""
        coords = []
        meta = []  # (edge, segment coords)
        for edge, route in new_routes.items():
            for pt, qt in zip(route, route[1:]):
                coords.append((pt[0], pt[1], qt[0], qt[1]))
                meta.append(edge)
        R = np.array(coords, dtype=np.float64).reshape(len(coords), 4)
        verts = [moved.get(w, self.vpos[w]) for w in range(self.n)]
        V = np.array(verts, dtype=np.float64).reshape(self.n, 2)
        ax, ay, bx, by = (R[:, k, None] for k in range(4))
        wx, wy = V[None, :, 0], V[None, :, 1]
        p = (bx - ax) * (wy - ay)
        q = (by - ay) * (wx - ax)
        near = np.abs(p - q) <= _EPS * (np.abs(p) + np.abs(q))
        for c, w in zip(*(idx.tolist() for idx in np.nonzero(near))):
            edge = meta[c]
            if w in self.edge_ends[edge]:
                continue
            if _on_segment_int(*verts[w], *coords[c]):
                return False
        return True

    def _point_off_other_edges(self, w: IntPoint, skip_edges: set[int]) -> bool:
        wx, wy = w
        seg = self._np_f
        if not len(seg):
            return True
        p = (seg[:, 2] - seg[:, 0]) * (wy - seg[:, 1])
        q = (seg[:, 3] - seg[:, 1]) * (wx - seg[:, 0])
        near = np.abs(p - q) <= _EPS * (np.abs(p) + np.abs(q))
        for c in np.nonzero(near)[0].tolist():
            if self._seg_edge_list[c] in skip_edges:
                continue
            if _on_segment_int(wx, wy, *self._seg_coords[c]):
                return False
        return True

    # -- move evaluation -----------------------------------------------------------

    def try_vertex_move(self, vi: int, new_pos: IntPoint) -> MoveEval | None:
        if any(self.vpos[w] == new_pos for w in range(self.n) if w != vi):
            return None
        moved = {vi: new_pos}
        new_routes: dict[int, list[IntPoint]] = {}
        for k, (u, v) in enumerate(self.edge_ends):
            if vi not in (u, v):
                continue
            new_routes[k] = [new_pos if u == vi else self.vpos[u], *self.bends[k],
                             new_pos if v == vi else self.vpos[v]]
        if not self._point_off_other_edges(new_pos, set(new_routes)):
            return None
        return self._finish_eval(moved, new_routes)

    def try_reroute(self, edge: int, new_bends: list[IntPoint]) -> MoveEval | None:
        u, v = self.edge_ends[edge]
        route = [self.vpos[u], *new_bends, self.vpos[v]]
        return self._finish_eval({}, {edge: route})

    def _exact_t(self, ra: list[IntPoint], seg: int,
                 ro: list[IntPoint]) -> tuple[int, Fraction] | None:
        """Exact crossing parameter of edge route ``ra`` (segment ``seg``)
        against route ``ro``, or None if no strict interior crossing."""
        A = (*ra[seg], *ra[seg + 1])
        for so in range(len(ro) - 1):
            B = (*ro[so], *ro[so + 1])
            d1, d2, d3, d4 = _cell_exact(A, B)
            if d1 == 0 or d2 == 0 or d3 == 0 or d4 == 0:
                continue
            if (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0):
                return (seg, Fraction(d3, d3 - d4))
        return None

    def _finish_eval(self, moved: dict[int, IntPoint],
                     new_routes: dict[int, list[IntPoint]]) -> MoveEval | None:
        for edge, route in new_routes.items():
            if not self._route_shape_ok(route) or not self._self_ok(route):
                return None
        if not self._vertices_off_routes(new_routes, moved):
            return None
        try:
            pair_results = self._evaluate_pairs(new_routes, moved, strict=True)
        except PairConflict:
            return None

        modified = set(new_routes)

        def route_now(k: int) -> list[IntPoint]:
            return new_routes.get(k) or self._routes[k]

        affected = modified | {e for key in pair_results for e in key}
        new_params: dict[int, dict[int, Param]] = {}
        for a in affected:
            params = {o: p for o, p in self.cross_params[a].items()
                      if a not in modified and o not in modified}
            for (i, j), res in pair_results.items():
                if res is None:
                    continue
                if i == a:
                    params[j] = res[0]
                elif j == a:
                    params[i] = res[1]
            if len(params) > 1:
                ordered = sorted((seg, t, o) for o, (seg, t) in params.items())
                for (s1, t1, o1), (s2, t2, o2) in zip(ordered, ordered[1:]):
                    if s1 == s2 and t2 - t1 <= _PARAM_TOL:
                        ta = self._exact_t(route_now(a), s1, route_now(o1))
                        tb = self._exact_t(route_now(a), s2, route_now(o2))
                        if ta is not None and ta == tb:
                            return None  # two crossings through one point
            new_params[a] = params

        overrides = {a: self._mask(p) for a, p in new_params.items()}

        def adj_new(x: int) -> int:
            return overrides.get(x, self.adj[x])

        def adj_old(x: int) -> int:
            return self.adj[x]

        mod_mask = self._mask(modified)
        old_local = self._triangles_touching(modified, adj_old)
        new_local = self._triangles_touching(modified, adj_new)
        old_links = sum((adj_old(i) & ~mod_mask).bit_count() for i in modified) \
            + self._links_within(modified, adj_old)
        new_links = sum((adj_new(i) & ~mod_mask).bit_count() for i in modified) \
            + self._links_within(modified, adj_new)

        return MoveEval(
            moved_vertex=next(iter(moved.items())) if moved else None,
            new_routes=new_routes,
            pair_crossings=pair_results,
            triple_count=self.triple_count + new_local - old_local,
            crossing_count=self.crossing_count + new_links - old_links,
        )

    @staticmethod
    def _mask(nodes) -> int:
        m = 0
        for x in nodes:
            m |= 1 << x
        return m

    def _links_within(self, nodes: set[int], adj_of) -> int:
        return sum(
            1 for i, j in combinations(sorted(nodes), 2) if adj_of(i) >> j & 1)

    def _triangles_touching(self, nodes: set[int], adj_of) -> int:
        """Triangles of the crossing graph with at least one corner in
        ``nodes``, each counted once (inclusion-exclusion over how many
        corners are in the set)."""
        if not nodes:
            return 0
        by_corner = 0
        for x in nodes:
            ax = adj_of(x)
            y = ax
            while y:
                bit = y & -y
                u = bit.bit_length() - 1
                by_corner += (ax & adj_of(u)).bit_count()
                y ^= bit
        by_corner //= 2  # each triangle at corner x seen via both other corners

        mask = self._mask(nodes)
        internal = 0
        internal3 = 0
        for i, j in combinations(sorted(nodes), 2):
            if not (adj_of(i) >> j & 1):
                continue
            common = adj_of(i) & adj_of(j)
            internal += common.bit_count()
            internal3 += (common & mask).bit_count()
        return by_corner - internal + internal3 // 3

    # -- committing ------------------------------------------------------------------

    def apply(self, ev: MoveEval) -> None:
        if ev.moved_vertex is not None:
            vi, pos = ev.moved_vertex
            self.vpos[vi] = pos
            fx, fy = float(pos[0]), float(pos[1])
            incident = self._incident[vi]
            for i in incident:
                for j in incident:
                    if i != j:
                        self._shared_x[i, j] = fx
                        self._shared_y[i, j] = fy
        for edge, route in ev.new_routes.items():
            self.bends[edge] = list(route[1:-1])
            self._routes[edge] = route
            new_segs = [(p[0], p[1], q[0], q[1]) for p, q in zip(route, route[1:])]
            for ax, ay, bx, by in new_segs:
                self._max_coord = max(self._max_coord, abs(ax), abs(ay), abs(bx), abs(by))
            first = self._edge_first_row[edge]
            old_count = self._row_count(edge)
            if len(new_segs) == old_count:
                for s, seg in enumerate(new_segs):
                    self._seg_coords[first + s] = seg
                    self._np_f[first + s] = seg
            else:
                stop = first + old_count
                self._seg_coords[first:stop] = new_segs
                self._seg_edge_list[first:stop] = [edge] * len(new_segs)
                self._seg_within[first:stop] = range(len(new_segs))
                self._np_f = np.concatenate(
                    [self._np_f[:first],
                     np.array(new_segs, dtype=np.float64).reshape(len(new_segs), 4),
                     self._np_f[stop:]])
                self._np_edge = np.array(self._seg_edge_list, dtype=np.int32)
                delta = len(new_segs) - old_count
                for k in range(edge + 1, self.m):
                    self._edge_first_row[k] += delta
        for (i, j), res in ev.pair_crossings.items():
            if res is None:
                self.adj[i] &= ~(1 << j)
                self.adj[j] &= ~(1 << i)
                self.cross_params[i].pop(j, None)
                self.cross_params[j].pop(i, None)
            else:
                self.adj[i] |= 1 << j
                self.adj[j] |= 1 << i
                self.cross_params[i][j] = res[0]
                self.cross_params[j][i] = res[1]
        self.triple_count = ev.triple_count
        self.crossing_count = ev.crossing_count

    def _row_count(self, edge: int) -> int:
        first = self._edge_first_row[edge]
        nxt = self._edge_first_row[edge + 1] if edge + 1 < self.m else len(self._seg_coords)
        return nxt - first

    # -- initialization and reference checking --------------------------------------

    def _init_pairs(self) -> None:
        results = self._evaluate_pairs(
            {i: self.route(i) for i in range(self.m)}, {}, strict=False)
        for (i, j), res in results.items():
            if res is not None:
                self.adj[i] |= 1 << j
                self.adj[j] |= 1 << i
                self.cross_params[i][j] = res[0]
                self.cross_params[j][i] = res[1]
        self.crossing_count = sum(a.bit_count() for a in self.adj) // 2
        self.triple_count = sum(
            (self.adj[i] & self.adj[j]).bit_count()
            for i in range(self.m) for j in range(i + 1, self.m)
            if self.adj[i] >> j & 1) // 3

    def assert_consistent(self) -> None:
        """Full recount with the exact kernel; raises on any drift."""
        d = self.to_drawing()
        report = count_triples(crossing_pairs(d))
        if report.crossing_pair_count != self.crossing_count \
                or report.triple_count != self.triple_count:
            raise AssertionError(
                f"incremental state drifted: tracked ({self.triple_count}, "
                f"{self.crossing_count}) vs recount ({report.triple_count}, "
                f"{report.crossing_pair_count})")


def _param_of_point(pts: list[Point], p: Point) -> Param:
    """Arc position of a point on a polyline as (segment, t), normalized to
    the first containing segment."""
    for s, (a, b) in enumerate(zip(pts, pts[1:])):
        if not (min(a.x, b.x) <= p.x <= max(a.x, b.x)
                and min(a.y, b.y) <= p.y <= max(a.y, b.y)):
            continue
        if (b.x - a.x) * (p.y - a.y) != (b.y - a.y) * (p.x - a.x):
            continue
        t = (p.x - a.x) / (b.x - a.x) if a.x != b.x else (p.y - a.y) / (b.y - a.y)
        if 0 <= t <= 1:
            return (s, float(t))
    raise ValueError(f"{p!r} not on polyline")
