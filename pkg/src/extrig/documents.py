"""Framework documents: a JSON-compatible schema with exact round-tripping.

Numbers are serialized by Python's shortest round-trip repr, so
``parse(serialize(fw))`` reproduces every coordinate bit for bit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .frameworks import Configuration, ExtrusionSpec, Framework
from .graphs import PHGraph, parse_vertex
from .rigidity import PinningSpec

_EDGE_KEYS = {"pp": "edges_pp", "ph": "edges_ph",
              "hh-angle": "edges_hh_angle", "hh-parallel": "edges_hh_par"}


class DocumentError(ValueError):
    """Malformed framework document."""


@dataclass(frozen=True)
class FrameworkDocument:
    framework: Framework
    pinning: PinningSpec = None


def document_from_framework(fw: Framework, pin: PinningSpec = None) -> dict:
    vertices = []
    for v in fw.graph.points:
        vertices.append({"id": v.label, "kind": "point",
                         "coords": [float(x) for x in fw.point(v)]})
    for w in fw.graph.hyperplanes:
        a, r = fw.hyperplane(w)
        vertices.append({"id": w.label, "kind": "hyperplane",
                         "normal": [float(x) for x in a], "offset": float(r)})
    edges = []
    for kind, attr in _EDGE_KEYS.items():
        for u, v in getattr(fw.graph, attr):
            edges.append({"u": u.label, "v": v.label, "kind": kind})
    doc = {"dimension": fw.dim, "vertices": vertices, "edges": edges}
    if fw.extrusion is not None:
        doc["extrusion"] = {
            "directions": [[float(x) for x in tau] for tau in fw.extrusion.directions],
            "fixed_sets": [sorted(fs) for fs in fw.extrusion.fixed_sets],
            "active": list(fw.extrusion.active),
        }
    if pin is not None and not pin.is_empty():
        doc["pinning"] = {
            "coords": sorted([[v.label, c] for v, c in pin.coords]),
            "full_hyperplanes": sorted(w.label for w in pin.full_hyperplanes),
            "parallel_only": sorted(w.label for w in pin.parallel_only),
        }
    return doc


def serialize(fw: Framework, pin: PinningSpec = None) -> str:
    return json.dumps(document_from_framework(fw, pin), indent=2) + "\n"


def _require(cond, msg):
    if not cond:
        raise DocumentError(msg)


def framework_from_document(doc: dict) -> FrameworkDocument:
    _require(isinstance(doc, dict), "document must be a JSON object")
    for key in ("dimension", "vertices", "edges"):
        _require(key in doc, f"missing required key {key!r}")
    dim = doc["dimension"]
    _require(isinstance(dim, int) and dim >= 1, "dimension must be a positive integer")

    points, hyperplanes = [], []
    coords, rows = [], []
    seen = {}
    for i, entry in enumerate(doc["vertices"]):
        _require(isinstance(entry, dict) and "id" in entry and "kind" in entry,
                 f"vertex #{i} needs 'id' and 'kind'")
        v = parse_vertex(entry["id"])
        _require(v not in seen, f"duplicate vertex id {entry['id']!r}")
        seen[v] = entry["kind"]
        if entry["kind"] == "point":
            _require(len(entry.get("coords", ())) == dim,
                     f"vertex {entry['id']!r} needs {dim} coordinates")
            points.append(v)
            coords.append([float(x) for x in entry["coords"]])
        elif entry["kind"] == "hyperplane":
            _require(len(entry.get("normal", ())) == dim,
                     f"vertex {entry['id']!r} needs a normal of length {dim}")
            _require("offset" in entry, f"vertex {entry['id']!r} needs an offset")
            hyperplanes.append(v)
            rows.append([float(x) for x in entry["normal"]] + [float(entry["offset"])])
        else:
            raise DocumentError(f"vertex {entry['id']!r} has unknown kind {entry['kind']!r}")

    edge_lists = {attr: [] for attr in _EDGE_KEYS.values()}
    for i, entry in enumerate(doc["edges"]):
        _require(isinstance(entry, dict) and {"u", "v", "kind"} <= set(entry),
                 f"edge #{i} needs 'u', 'v', and 'kind'")
        kind = entry["kind"]
        _require(kind in _EDGE_KEYS, f"edge #{i} has unknown kind {kind!r}")
        u, v = parse_vertex(entry["u"]), parse_vertex(entry["v"])
        for x in (u, v):
            _require(x in seen, f"edge #{i} references unknown vertex {x.label!r}")
        if kind == "ph" and seen[u] == "hyperplane":
            u, v = v, u
        edge_lists[_EDGE_KEYS[kind]].append((u, v))

    word_lengths = {len(v.word) for v in seen}
    _require(len(word_lengths) <= 1, "vertex words must all have one length")
    order = word_lengths.pop() if word_lengths else 0
    # star patterns encode which hyperplane copies were contracted
    fixed_sets = tuple(frozenset(v.base for v in hyperplanes if v.word[h] == "*")
                       for h in range(order))
    extrusion = None
    if doc.get("extrusion") is not None:
        ext = doc["extrusion"]
        _require("directions" in ext, "extrusion needs 'directions'")
        dirs = np.asarray(ext["directions"], dtype=float)
        _require(dirs.ndim == 2 and dirs.shape[1] == dim,
                 "extrusion directions must be rows of length 'dimension'")
        _require(len(dirs) == order,
                 f"{len(dirs)} extrusion directions for vertex words of length {order}")
        declared = tuple(frozenset(fs) for fs in ext.get("fixed_sets", fixed_sets))
        _require(len(declared) == order, "need one fixed set per direction")
        _require(declared == fixed_sets,
                 "declared fixed sets disagree with the vertex star patterns")
        active = tuple(ext.get("active", range(order)))
        extrusion = ExtrusionSpec(directions=dirs, fixed_sets=declared, active=active)

    try:
        graph = PHGraph(points=tuple(points), hyperplanes=tuple(hyperplanes),
                        extrusion_order=order, fixed_sets=fixed_sets,
                        **{attr: tuple(v) for attr, v in edge_lists.items()})
        order_map = {v: i for i, v in enumerate(points)}
        pts = np.asarray([coords[order_map[v]] for v in graph.points], dtype=float) \
            if points else np.zeros((0, dim))
        hyp_map = {v: i for i, v in enumerate(hyperplanes)}
        hyp = np.asarray([rows[hyp_map[v]] for v in graph.hyperplanes], dtype=float) \
            if hyperplanes else np.zeros((0, dim + 1))
        fw = Framework(graph, Configuration(dim, pts, hyp), extrusion)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc

    pin = None
    if doc.get("pinning") is not None:
        p = doc["pinning"]
        known = set(graph.vertices)
        pc = set()
        for label, c in p.get("coords", ()):
            v = parse_vertex(label)
            _require(v in known, f"pinning references unknown vertex {label!r}")
            pc.add((v, int(c)))
        full = frozenset(parse_vertex(s) for s in p.get("full_hyperplanes", ()))
        par = frozenset(parse_vertex(s) for s in p.get("parallel_only", ()))
        for v in full | par:
            _require(v in known, f"pinning references unknown vertex {v.label!r}")
        try:
            pin = PinningSpec(coords=frozenset(pc), full_hyperplanes=full, parallel_only=par)
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
    return FrameworkDocument(framework=fw, pinning=pin)


def load(path) -> FrameworkDocument:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return framework_from_document(doc)


def dump(path, fw: Framework, pin: PinningSpec = None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(fw, pin))
