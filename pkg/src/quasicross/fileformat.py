"""The drawing file format and checkpoint/config documents.

One JSON document format serves fixtures, CLI input, service payloads and
search checkpoints.  Every coordinate is an exact rational string
(optional sign, integer, optional "/" positive integer); no binary
floating point appears anywhere in a document.  Serialization is
canonical: parse followed by serialize is the identity on canonical
files.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .drawing import Drawing, Edge, Vertex
from .geometry import Point

FORMAT_VERSION = 1

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class DrawingFormatError(ValueError):
    """A document problem, with a machine-readable kind and the JSON path."""

    def __init__(self, kind: str, message: str, where: str = ""):
        self.kind = kind
        self.where = where
        suffix = f" (at {where})" if where else ""
        super().__init__(f"{message}{suffix}")


def parse_rational(text: Any, where: str = "") -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise DrawingFormatError(
            "malformed-rational", f"not a rational string: {text!r}", where)
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise DrawingFormatError("zero-denominator", f"zero denominator in {text!r}", where)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _expect(doc: Any, key: str, kind, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise DrawingFormatError("bad-schema", f"missing field {key!r}", where)
    value = doc[key]
    if not isinstance(value, kind):
        name = kind.__name__ if isinstance(kind, type) else \
            "/".join(t.__name__ for t in kind)
        raise DrawingFormatError(
            "bad-schema", f"field {key!r} should be {name}", where)
    return value


def parse_drawing_document(doc: Any) -> Drawing:
    version = _expect(doc, "format_version", int, "$")
    if version != FORMAT_VERSION:
        raise DrawingFormatError("bad-schema", f"unsupported format_version {version}", "$")

    vertices = []
    ids = set()
    for k, v in enumerate(_expect(doc, "vertices", list, "$")):
        where = f"vertices[{k}]"
        vid = _expect(v, "id", str, where)
        if vid in ids:
            raise DrawingFormatError("duplicate-id", f"duplicate vertex id {vid!r}", where)
        ids.add(vid)
        x = parse_rational(_expect(v, "x", (str, int), where), f"{where}.x")
        y = parse_rational(_expect(v, "y", (str, int), where), f"{where}.y")
        vertices.append(Vertex(vid, Point(x, y)))

    edges = []
    for k, e in enumerate(_expect(doc, "edges", list, "$")):
        where = f"edges[{k}]"
        u = _expect(e, "u", str, where)
        v = _expect(e, "v", str, where)
        for end in (u, v):
            if end not in ids:
                raise DrawingFormatError(
                    "unknown-endpoint", f"edge references unknown vertex {end!r}", where)
        bends = []
        for b, pair in enumerate(e.get("bends", [])):
            bwhere = f"{where}.bends[{b}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise DrawingFormatError("bad-schema", "bend must be a [x, y] pair", bwhere)
            bends.append(Point(parse_rational(pair[0], f"{bwhere}[0]"),
                               parse_rational(pair[1], f"{bwhere}[1]")))
        tag = e.get("tag")
        if tag is not None and not isinstance(tag, str):
            raise DrawingFormatError("bad-schema", "tag must be a string", where)
        edges.append(Edge(u, v, tuple(bends), tag))

    try:
        return Drawing(vertices, edges)
    except ValueError as err:
        raise DrawingFormatError("bad-structure", str(err)) from err


def parse_drawing(text: str) -> Drawing:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise DrawingFormatError("invalid-json", f"not valid JSON: {err}") from err
    return parse_drawing_document(doc)


def drawing_document(d: Drawing) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "vertices": [
            {"id": v.id, "x": format_rational(v.pos.x), "y": format_rational(v.pos.y)}
            for v in d.vertices],
        "edges": [
            {
                "u": e.u,
                "v": e.v,
                "bends": [[format_rational(b.x), format_rational(b.y)] for b in e.bends],
                **({"tag": e.tag} if e.tag is not None else {}),
            }
            for e in d.edges],
    }


def serialize_drawing(d: Drawing) -> str:
    return json.dumps(drawing_document(d), indent=2) + "\n"


def read_drawing_file(path: str) -> Drawing:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_drawing(fh.read())


def write_drawing_file(path: str, d: Drawing) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_drawing(d))


# -- annealing checkpoint sidecar ---------------------------------------------

def write_checkpoint_state(path: str, *, restart: int, iteration: int,
                           rng_state: tuple, current_drawing: Drawing,
                           current_objective: tuple[int, int],
                           best_objective: tuple[int, int],
                           best_restart: int) -> None:
    version, mt_state, gauss = rng_state
    doc = {
        "kind": "annealing-state",
        "format_version": FORMAT_VERSION,
        "restart": restart,
        "iteration": iteration,
        "rng_state": {"version": version, "state": list(mt_state), "gauss": gauss},
        "current_objective": list(current_objective),
        "best_objective": list(best_objective),
        "best_restart": best_restart,
        "current": drawing_document(current_drawing),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_checkpoint_state(path: str):
    from .search import ResumeState

    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("kind") != "annealing-state":
        raise DrawingFormatError("bad-schema", f"{path} is not an annealing checkpoint")
    rng = doc["rng_state"]
    return ResumeState(
        restart=int(doc["restart"]),
        iteration=int(doc["iteration"]),
        rng_state=(rng["version"], tuple(rng["state"]), rng["gauss"]),
        current=parse_drawing_document(doc["current"]))


# -- search configuration ------------------------------------------------------

def parse_search_config(doc: dict):
    from .search import MoveKind, SearchConfig

    kwargs: dict[str, Any] = {
        "seed": int(_expect(doc, "seed", int, "$")),
        "max_iterations": int(_expect(doc, "max_iterations", int, "$")),
    }
    for rational_field in ("initial_temperature", "cooling_factor", "perturbation_radius"):
        if rational_field in doc:
            kwargs[rational_field] = parse_rational(doc[rational_field], rational_field)
    for int_field in ("max_bends_per_edge", "restart_count", "lattice_denominator"):
        if int_field in doc:
            kwargs[int_field] = int(doc[int_field])
    if "move_weights" in doc:
        names = {k.name.lower(): k for k in MoveKind}
        weights = {}
        for name, w in doc["move_weights"].items():
            if name.lower() not in names:
                raise DrawingFormatError("bad-schema", f"unknown move kind {name!r}",
                                         "move_weights")
            weights[names[name.lower()]] = int(w)
        kwargs["move_weights"] = weights
    return SearchConfig(**kwargs)


def read_search_config(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_search_config(json.load(fh))
