"""Rigidity matrices for bar-joint and point-hyperplane frameworks.

Column order: d coordinates per point vertex (sorted), then d+1 per
hyperplane vertex (normal coordinates followed by the offset).  Row order:
pp edges, ph edges, hh-angle edges, hh-par edges (d-1 rows each), then one
normalization row per surviving hyperplane.  Pinning deletes columns and
rows; it never zero-masks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .frameworks import ExtrusionSpec, Framework
from .graphs import PHGraph, STAR, Vertex
from .linalg import RANK_TOL, left_nullspace, nullspace, numeric_rank, orthonormal_columns


@dataclass(frozen=True)
class PinningSpec:
    """Coordinates and hyperplanes removed from the rigidity matrix.

    * ``coords``: (vertex, coordinate index) pairs whose columns are deleted;
    * ``full_hyperplanes``: all d+1 columns and the normalization row go;
      parallel rows of the ambient class become redundant and go too;
    * ``parallel_only``: the d normal columns and the normalization row go,
      the offset column stays (the hyperplane may still translate).
    """

    coords: frozenset = frozenset()
    full_hyperplanes: frozenset = frozenset()
    parallel_only: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "coords", frozenset(self.coords))
        object.__setattr__(self, "full_hyperplanes", frozenset(self.full_hyperplanes))
        object.__setattr__(self, "parallel_only", frozenset(self.parallel_only))
        if self.full_hyperplanes & self.parallel_only:
            raise ValueError("a hyperplane cannot be both fully pinned and parallel-only")

    def is_empty(self) -> bool:
        return not (self.coords or self.full_hyperplanes or self.parallel_only)


EMPTY_PIN = PinningSpec()


class CoordinateIndex:
    """Bookkeeping between the full stacked coordinate vector and the pinned one."""

    def __init__(self, fw: Framework, pin: PinningSpec = EMPTY_PIN):
        d = fw.dim
        graph = fw.graph
        labels = []
        for v in graph.points:
            labels.extend((v, c) for c in range(d))
        for w in graph.hyperplanes:
            labels.extend((w, c) for c in range(d + 1))
        pinned = set()
        known = set(graph.vertices)
        for v, c in pin.coords:
            if v not in known:
                raise ValueError(f"pinned coordinate references unknown vertex {v}")
            width = d if graph.is_point(v) else d + 1
            if not 0 <= c < width:
                raise ValueError(f"pinned coordinate index {c} out of range for {v}")
            pinned.add((v, c))
        hyps = set(graph.hyperplanes)
        for w in pin.full_hyperplanes:
            if w not in hyps:
                raise ValueError(f"fully pinned vertex {w} is not a hyperplane")
            pinned.update((w, c) for c in range(d + 1))
        for w in pin.parallel_only:
            if w not in hyps:
                raise ValueError(f"parallel-only vertex {w} is not a hyperplane")
            pinned.update((w, c) for c in range(d))
        self.fw = fw
        self.pin = pin
        self.dim = d
        self.full_labels = labels
        self.keep = np.array([lab not in pinned for lab in labels], dtype=bool)
        self.labels = [lab for lab, k in zip(labels, self.keep) if k]
        self.full_pos = {lab: i for i, lab in enumerate(labels)}
        self.pos = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def full_size(self) -> int:
        return len(self.full_labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def full_vector(self, config=None) -> np.ndarray:
        cfg = self.fw.config if config is None else config
        parts = [cfg.points.ravel()]
        if len(cfg.hyperplanes):
            parts.append(cfg.hyperplanes.ravel())
        return np.concatenate(parts) if parts else np.zeros(0)

    def reduce(self, full_vec) -> np.ndarray:
        return np.asarray(full_vec, dtype=float)[self.keep]

    def scatter(self, red_vec) -> np.ndarray:
        out = np.zeros(self.full_size)
        out[self.keep] = red_vec
        return out

    def expand(self, red_vec) -> np.ndarray:
        """Full vector whose pinned entries keep their framework values."""
        out = self.full_vector().copy()
        out[self.keep] = red_vec
        return out

    def vertex_slice(self, v: Vertex) -> slice:
        start = self.full_pos[(v, 0)]
        width = self.dim if self.fw.graph.is_point(v) else self.dim + 1
        return slice(start, start + width)


def constraint_rows(graph: PHGraph, dim: int, pin: PinningSpec = EMPTY_PIN,
                    include_parallel: bool = True) -> list:
    """Ordered row labels of the (pinned) constraint system.

    Labels: ("pp", edge), ("ph", edge), ("angle", edge), ("par", edge, i)
    for i < d-1, and ("norm", vertex).
    """
    rows = [("pp", e) for e in graph.edges_pp]
    rows += [("ph", e) for e in graph.edges_ph]
    rows += [("angle", e) for e in graph.edges_hh_angle]
    if include_parallel:
        cls = graph.class_index
        anchored = {cls[w] for w in pin.full_hyperplanes}
        for e in graph.edges_hh_par:
            if cls[e[0]] in anchored:
                continue
            rows += [("par", e, i) for i in range(dim - 1)]
    removed = pin.full_hyperplanes | pin.parallel_only
    rows += [("norm", w) for w in graph.hyperplanes if w not in removed]
    return rows


def parallel_axes(a) -> np.ndarray:
    """Deterministic orthonormal pair spanning the plane orthogonal to ``a`` (d = 3).

    u1 is the normalized rejection of the canonical basis vector least
    aligned with a; u2 = a x u1.
    """
    an = np.asarray(a, dtype=float)
    an = an / np.linalg.norm(an)
    c = int(np.argmin(np.abs(an)))
    u1 = np.eye(3)[c] - an[c] * an
    u1 = u1 / np.linalg.norm(u1)
    return np.stack([u1, np.cross(an, u1)])


@dataclass
class RigidityMatrix:
    """Pinned constraint Jacobian with row and column bookkeeping."""

    matrix: np.ndarray
    row_labels: list
    index: CoordinateIndex
    pinning: PinningSpec

    @property
    def shape(self):
        return self.matrix.shape

    def rank(self, tol: float = RANK_TOL) -> int:
        return numeric_rank(self.matrix, tol)


def _edge_row(fw: Framework, index: CoordinateIndex, label) -> np.ndarray:
    d = fw.dim
    row = np.zeros(index.full_size)
    kind = label[0]
    if kind == "pp":
        u, v = label[1]
        diff = fw.point(u) - fw.point(v)
        row[index.vertex_slice(u)] = diff
        row[index.vertex_slice(v)] = -diff
    elif kind == "ph":
        p, w = label[1]
        a, _ = fw.hyperplane(w)
        row[index.vertex_slice(p)] = a
        sl = index.vertex_slice(w)
        row[sl] = np.concatenate([fw.point(p), [-1.0]])
    elif kind == "angle":
        u, v = label[1]
        au, _ = fw.hyperplane(u)
        av, _ = fw.hyperplane(v)
        row[index.vertex_slice(u)] = np.concatenate([av, [0.0]])
        row[index.vertex_slice(v)] = np.concatenate([au, [0.0]])
    elif kind == "par":
        (u, v), i = label[1], label[2]
        au, _ = fw.hyperplane(u)
        av, _ = fw.hyperplane(v)
        if d == 2:
            perp = lambda a: np.array([-a[1], a[0]])
            row[index.vertex_slice(u)] = np.concatenate([perp(av), [0.0]])
            row[index.vertex_slice(v)] = np.concatenate([-perp(au), [0.0]])
        else:
            axes = parallel_axes(au)
            row[index.vertex_slice(u)] = np.concatenate([np.cross(av, axes[i]), [0.0]])
            row[index.vertex_slice(v)] = np.concatenate([-np.cross(au, axes[i]), [0.0]])
    elif kind == "norm":
        w = label[1]
        a, _ = fw.hyperplane(w)
        row[index.vertex_slice(w)] = np.concatenate([a, [0.0]])
    else:
        raise ValueError(f"unknown row kind {kind!r}")
    return row


def rigidity_matrix(fw: Framework, pin: PinningSpec = EMPTY_PIN) -> RigidityMatrix:
    """Assemble the (pinned) rigidity matrix of a framework."""
    if fw.dim >= 4 and fw.graph.edges_hh_par:
        raise ValueError("parallel constraint rows are only defined for d = 2 and d = 3")
    index = CoordinateIndex(fw, pin)
    rows = constraint_rows(fw.graph, fw.dim, pin)
    if rows:
        full = np.stack([_edge_row(fw, index, lab) for lab in rows])
        mat = full[:, index.keep]
    else:
        mat = np.zeros((0, index.size))
    return RigidityMatrix(matrix=mat, row_labels=rows, index=index, pinning=pin)


def trivial_motion_generators(fw: Framework) -> np.ndarray:
    """Full-coordinate generators of the trivial motions, d(d+1)/2 columns.

    Translations: p-dot = t, hyperplane velocity (0, <t, a>).  Rotations
    about the origin: p-dot = S p, hyperplane velocity (a S^T, 0).
    """
    d = fw.dim
    index = CoordinateIndex(fw)
    cols = []
    for c in range(d):
        vec = np.zeros(index.full_size)
        for v in fw.graph.points:
            vec[index.vertex_slice(v)][c] = 1.0
        for w in fw.graph.hyperplanes:
            a, _ = fw.hyperplane(w)
            sl = index.vertex_slice(w)
            vec[sl.stop - 1] = a[c]
        cols.append(vec)
    for i, j in itertools.combinations(range(d), 2):
        skew = np.zeros((d, d))
        skew[j, i], skew[i, j] = 1.0, -1.0
        vec = np.zeros(index.full_size)
        for v in fw.graph.points:
            vec[index.vertex_slice(v)] = skew @ fw.point(v)
        for w in fw.graph.hyperplanes:
            a, _ = fw.hyperplane(w)
            sl = index.vertex_slice(w)
            vec[sl] = np.concatenate([a @ skew.T, [0.0]])
        cols.append(vec)
    return np.column_stack(cols) if cols else np.zeros((index.full_size, 0))


def trivial_motion_basis(fw: Framework, pin: PinningSpec = EMPTY_PIN,
                         tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis, in pinned coordinates, of trivial motions compatible
    with the pinning (zero velocity on every deleted coordinate)."""
    gens = trivial_motion_generators(fw)
    index = CoordinateIndex(fw, pin)
    pinned_rows = gens[~index.keep, :]
    if pinned_rows.shape[0]:
        coeff = nullspace(pinned_rows, tol)
        gens = gens @ coeff
    return orthonormal_columns(gens[index.keep, :], tol)


@dataclass
class InfinitesimalAnalysis:
    rank: int
    nullity: int
    nullspace_basis: np.ndarray
    trivial_dim: int
    flex_dim: int
    stress_dim: int
    stress_basis: np.ndarray


def infinitesimal_analysis(fw: Framework, pin: PinningSpec = EMPTY_PIN,
                           tol: float = RANK_TOL) -> InfinitesimalAnalysis:
    """Rank, motion space, and self-stress space of the (pinned) framework."""
    rig = rigidity_matrix(fw, pin)
    rank = rig.rank(tol)
    null = nullspace(rig.matrix, tol)
    stresses = left_nullspace(rig.matrix, tol)
    trivial = trivial_motion_basis(fw, pin, tol).shape[1]
    return InfinitesimalAnalysis(
        rank=rank,
        nullity=null.shape[1],
        nullspace_basis=null,
        trivial_dim=trivial,
        flex_dim=null.shape[1] - trivial,
        stress_dim=stresses.shape[1],
        stress_basis=stresses,
    )


def maxwell_rhs(fw: Framework) -> int:
    """d|V| - |E| - d(d+1)/2 with parallel edges counted by their d-1 rows."""
    d = fw.dim
    g = fw.graph
    edge_rows = (len(g.edges_pp) + len(g.edges_ph) + len(g.edges_hh_angle)
                 + (d - 1) * len(g.edges_hh_par))
    return d * len(g.vertices) - edge_rows - d * (d + 1) // 2


def minimal_pinning(fw: Framework, tol: float = RANK_TOL) -> PinningSpec:
    """Greedy minimal coordinate pinning eliminating all trivial motions.

    Pins the d coordinates of the first point vertex, then walks the
    remaining point coordinates in lexicographic order, keeping those that
    strictly reduce the surviving trivial motion space.  Verifies minimality
    by a single-removal test.
    """
    if not fw.graph.points:
        raise ValueError("minimal pinning requires at least one point vertex")
    from .frameworks import affine_span_check

    if not affine_span_check(fw, tol):
        raise ValueError("configuration does not affinely span the ambient space")
    d = fw.dim
    coords = set((fw.graph.points[0], c) for c in range(d))
    current = trivial_motion_basis(fw, PinningSpec(coords=coords), tol).shape[1]
    for v in fw.graph.points:
        if current == 0:
            break
        for c in range(d):
            if (v, c) in coords:
                continue
            trial = coords | {(v, c)}
            dim_after = trivial_motion_basis(fw, PinningSpec(coords=trial), tol).shape[1]
            if dim_after < current:
                coords = trial
                current = dim_after
                if current == 0:
                    break
    if current != 0:
        raise ValueError("could not eliminate all trivial motions by pinning point coordinates")
    expected = d * (d + 1) // 2
    if len(coords) != expected:
        raise ValueError(f"pinning used {len(coords)} coordinates, expected {expected}")
    for dropped in sorted(coords, key=lambda vc: (vc[0].sort_key(), vc[1])):
        rest = coords - {dropped}
        if trivial_motion_basis(fw, PinningSpec(coords=rest), tol).shape[1] == 0:
            raise ValueError(f"pinning is not minimal: {dropped} is redundant")
    return PinningSpec(coords=frozenset(coords))


def hyperplane_pinning(fw: Framework, tol: float = RANK_TOL):
    """Pin one hyperplane that contains an extrusion direction.

    The chosen hyperplane (lexicographically first among candidates) is
    fully pinned; the rest of its parallel class keeps only the offset
    column.  Returns the pinning together with an extrusion spec whose
    active set is reduced to the directions along which the block
    decomposition applies afterwards.
    """
    if fw.extrusion is None:
        raise ValueError("framework has no extrusion specification")
    spec = fw.extrusion
    fixed_bases = set().union(*spec.fixed_sets) if spec.fixed_sets else set()
    candidates = [w for w in fw.graph.hyperplanes if w.base in fixed_bases]
    if not candidates:
        raise ValueError("no hyperplane contains an extrusion direction")
    target = candidates[0]
    cls = next(c for c in fw.graph.parallel_classes if target in c)
    pin = PinningSpec(full_hyperplanes={target},
                      parallel_only=frozenset(cls) - {target})

    ph_incident = {w for _, w in fw.graph.edges_ph}
    removed = set(cls)
    active = []
    for h in range(spec.order):
        if target.word[h] != STAR:
            continue
        handled = all(
            w in removed
            for w in fw.graph.hyperplanes
            if w.base in spec.fixed_sets[h] and w in ph_incident
        )
        if handled:
            active.append(h)
    reduced = ExtrusionSpec(directions=spec.directions, fixed_sets=spec.fixed_sets,
                            active=tuple(active))
    return pin, reduced
