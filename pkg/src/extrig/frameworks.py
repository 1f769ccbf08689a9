"""Geometric realizations: configurations, extrusion-symmetric construction,
symmetry verification, and the affine / infinitesimal-rotation transforms.

A hyperplane is stored un-normalized as a row ``(a, r)`` of length d+1 with
nonzero normal ``a``; it is the zero set of ``<a, x> - r``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .graphs import PHGraph, STAR, Vertex, extrusion_product, group_elements
from .linalg import numeric_rank


def _readonly(arr) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Configuration:
    """Point coordinates and hyperplane rows, aligned with the graph's vertex order."""

    dim: int
    points: np.ndarray       # (n, dim)
    hyperplanes: np.ndarray  # (k, dim + 1), rows (a, r)

    def __post_init__(self):
        object.__setattr__(self, "points", _readonly(np.asarray(self.points, dtype=float).reshape(-1, self.dim)))
        hp = np.asarray(self.hyperplanes, dtype=float).reshape(-1, self.dim + 1)
        object.__setattr__(self, "hyperplanes", _readonly(hp))
        if len(hp) and np.any(np.linalg.norm(hp[:, :-1], axis=1) == 0.0):
            raise ValueError("hyperplane with zero normal")


@dataclass(frozen=True)
class ExtrusionSpec:
    """Extrusion directions, contracted hyperplane sets, and the active subgroup.

    ``active`` lists the direction indices generating the symmetry subgroup
    used for representation-theoretic analysis; pinning may shrink it.
    """

    directions: np.ndarray   # (t, dim)
    fixed_sets: tuple = ()
    active: tuple = None

    def __post_init__(self):
        dirs = _readonly(np.atleast_2d(np.asarray(self.directions, dtype=float)))
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "fixed_sets", tuple(frozenset(fs) for fs in self.fixed_sets))
        if len(self.fixed_sets) != len(dirs):
            raise ValueError("need one fixed set per extrusion direction")
        if np.any(np.linalg.norm(dirs, axis=1) == 0.0):
            raise ValueError("zero extrusion direction")
        act = tuple(range(len(dirs))) if self.active is None else tuple(self.active)
        if any(h < 0 or h >= len(dirs) for h in act):
            raise ValueError("active direction index out of range")
        object.__setattr__(self, "active", act)

    @property
    def order(self) -> int:
        return len(self.directions)


@dataclass(frozen=True)
class Framework:
    """A decorated point-hyperplane graph together with a configuration."""

    graph: PHGraph
    config: Configuration
    extrusion: ExtrusionSpec = None

    def __post_init__(self):
        if len(self.config.points) != len(self.graph.points):
            raise ValueError("point count mismatch between graph and configuration")
        if len(self.config.hyperplanes) != len(self.graph.hyperplanes):
            raise ValueError("hyperplane count mismatch between graph and configuration")
        if self.extrusion is not None and self.extrusion.order != self.graph.extrusion_order:
            raise ValueError("extrusion order mismatch between graph and spec")

    @property
    def dim(self) -> int:
        return self.config.dim

    @property
    def point_index(self) -> dict:
        return {v: i for i, v in enumerate(self.graph.points)}

    @property
    def hyperplane_index(self) -> dict:
        return {v: i for i, v in enumerate(self.graph.hyperplanes)}

    def point(self, v: Vertex) -> np.ndarray:
        return self.config.points[self.point_index[v]]

    def hyperplane(self, v: Vertex):
        row = self.config.hyperplanes[self.hyperplane_index[v]]
        return row[:-1], row[-1]

    def is_bar_joint(self) -> bool:
        return len(self.graph.hyperplanes) == 0


def extrusion_displacement(spec: ExtrusionSpec, word: str, gamma) -> np.ndarray:
    """Displacement of a vertex with the given word induced by ``gamma``.

    Sum of +tau_h over positions where the word has 0 and gamma has 1, minus
    tau_h where the word has 1 and gamma has 1; starred positions contribute
    nothing.
    """
    out = np.zeros(spec.directions.shape[1])
    for h, (c, g) in enumerate(zip(word, gamma)):
        if g == 1 and c == "0":
            out += spec.directions[h]
        elif g == 1 and c == "1":
            out -= spec.directions[h]
    return out


def _contained(tau, a, tol) -> bool:
    return abs(float(np.dot(tau, a))) <= tol * np.linalg.norm(tau) * np.linalg.norm(a)


def extrude_framework(base: Framework, directions, fixed_sets=None, tol: float = 1e-9) -> Framework:
    """Extrude a framework along each direction in turn.

    ``fixed_sets[h]`` must name exactly the base hyperplanes containing
    direction ``h`` (normal orthogonal to tau_h within relative ``tol``);
    their copies are contracted.  Point copies are translated, hyperplane
    normals are carried over unchanged and offsets shift by ``<a, tau_h>``.
    """
    if base.graph.extrusion_order != 0:
        raise ValueError("can only extrude a framework without existing extrusion structure")
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    t = len(directions)
    if fixed_sets is None:
        fixed_sets = [frozenset()] * t
    fixed_sets = [frozenset(fs) for fs in fixed_sets]
    if len(fixed_sets) != t:
        raise ValueError("need one fixed set per extrusion direction")
    if np.any(np.linalg.norm(directions, axis=1) == 0.0):
        raise ValueError("zero extrusion direction")

    for h in range(t):
        for w in base.graph.hyperplanes:
            a, _ = base.hyperplane(w)
            inside = _contained(directions[h], a, tol)
            if inside and w.base not in fixed_sets[h]:
                raise ValueError(
                    f"direction {h} lies in hyperplane {w} but {w.base!r} is not in fixed set {h}")
            if not inside and w.base in fixed_sets[h]:
                raise ValueError(
                    f"{w.base!r} is in fixed set {h} but direction {h} does not lie in hyperplane {w}")

    graph = extrusion_product(base.graph, fixed_sets)
    spec = ExtrusionSpec(directions=directions, fixed_sets=tuple(fixed_sets))

    base_pt = {v.base: base.point(v) for v in base.graph.points}
    base_hp = {v.base: base.hyperplane(v) for v in base.graph.hyperplanes}

    def shift(word):
        return sum((directions[h] for h, c in enumerate(word) if c == "1"),
                   np.zeros(base.dim))

    points = np.array([base_pt[v.base] + shift(v.word) for v in graph.points]).reshape(-1, base.dim)
    hyper = []
    for v in graph.hyperplanes:
        a, r = base_hp[v.base]
        r = r + sum(float(np.dot(a, directions[h])) for h, c in enumerate(v.word) if c == "1")
        hyper.append(np.concatenate([a, [r]]))
    hyper = np.array(hyper).reshape(-1, base.dim + 1)

    if len(points) > 1:
        dists = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
        np.fill_diagonal(dists, np.inf)
        if np.any(dists < 1e-12):
            warnings.warn("extrusion produced coincident points", stacklevel=2)

    return Framework(graph=graph, config=Configuration(base.dim, points, hyper), extrusion=spec)


@dataclass(frozen=True)
class SymmetryReport:
    ok: bool
    max_residual: float
    violations: tuple
    notes: tuple = ()


def verify_extrusion_symmetry(fw: Framework, tol: float = 1e-9,
                              active_only: bool = False) -> SymmetryReport:
    """Check the four extrusion-symmetry laws on every vertex and group element.

    (i) point translation, (ii) equal normals along orbits, (iii) direction
    containment exactly on contracted hyperplanes, (iv) offset shift law.
    Violations are reported, never raised.  ``active_only`` restricts the
    checks to the active symmetry subgroup (e.g. after a fully-symmetric
    push, which need not preserve the inactive directions).
    """
    if fw.extrusion is None:
        raise ValueError("framework has no extrusion specification")
    spec = fw.extrusion
    graph = fw.graph
    violations = []
    max_res = 0.0
    scale = 1.0 + max(
        float(np.abs(fw.config.points).max()) if len(fw.config.points) else 0.0,
        float(np.abs(fw.config.hyperplanes).max()) if len(fw.config.hyperplanes) else 0.0,
        float(np.abs(spec.directions).max()),
    )

    def record(law, context, res):
        nonlocal max_res
        res = float(res)
        max_res = max(max_res, res)
        if res > tol * scale:
            violations.append((law, context, res))

    if active_only:
        from .graphs import subgroup_elements

        elements = subgroup_elements(spec.order, spec.active)
        directions = spec.active
    else:
        elements = group_elements(spec.order)
        directions = range(spec.order)

    for gamma in elements:
        for v in graph.points:
            expect = fw.point(v) + extrusion_displacement(spec, v.word, gamma)
            record("point-translation", f"{v} gamma={gamma}",
                   np.linalg.norm(fw.point(graph.act(gamma, v)) - expect))
        for w in graph.hyperplanes:
            a, r = fw.hyperplane(w)
            ia, ir = fw.hyperplane(graph.act(gamma, w))
            record("equal-normals", f"{w} gamma={gamma}", np.linalg.norm(ia - a))
            expect_r = r + float(np.dot(a, extrusion_displacement(spec, w.word, gamma)))
            record("offset-shift", f"{w} gamma={gamma}", abs(ir - expect_r))

    for h in directions:
        tau = spec.directions[h]
        for w in graph.hyperplanes:
            a, _ = fw.hyperplane(w)
            inside = _contained(tau, a, tol)
            starred = w.word[h] == STAR
            if inside and not starred:
                violations.append(("containment", f"{w} direction={h}", float(abs(np.dot(tau, a)))))
            if not inside and starred:
                violations.append(("containment", f"{w} direction={h}",
                                   float(abs(np.dot(tau, a)) / (np.linalg.norm(tau) * np.linalg.norm(a)))))

    notes = []
    if spec.order > 1 and numeric_rank(spec.directions) < min(spec.order, fw.dim):
        notes.append("extrusion directions are linearly dependent")
    return SymmetryReport(ok=not violations, max_residual=max_res,
                          violations=tuple(violations), notes=tuple(notes))


def apply_affine(fw: Framework, mat, vec) -> Framework:
    """Affine image: points follow x -> Ax + v, hyperplane rows follow
    ``(a, r) -> (a A^-1, r + <a A^-1, v>)``; extrusion directions become A tau.
    """
    mat = np.asarray(mat, dtype=float)
    vec = np.asarray(vec, dtype=float)
    if abs(np.linalg.det(mat)) == 0.0:
        raise ValueError("affine transform requires an invertible matrix")
    inv = np.linalg.inv(mat)
    points = fw.config.points @ mat.T + vec
    hyper = fw.config.hyperplanes.copy()
    if len(hyper):
        normals = hyper[:, :-1] @ inv  # row vectors a A^-1
        hyper = np.column_stack([normals, hyper[:, -1] + normals @ vec])
    extr = fw.extrusion
    if extr is not None:
        extr = replace(extr, directions=extr.directions @ mat.T)
    return Framework(graph=fw.graph, config=Configuration(fw.dim, points, hyper), extrusion=extr)


def apply_infinitesimal_rotation(fw: Framework, lam: float, skew) -> Framework:
    """Apply the rank-preserving map: points and normals by (I + lam S),
    offsets scaled by (1 + lam).

    The image is generally not extrusion-symmetric at order lam^2; the
    extrusion spec is carried over with directions (I + lam S) tau.
    """
    skew = np.asarray(skew, dtype=float)
    if not np.allclose(skew, -skew.T, atol=1e-12 * (1.0 + np.abs(skew).max())):
        raise ValueError("matrix is not skew-symmetric")
    mat = np.eye(fw.dim) + lam * skew
    points = fw.config.points @ mat.T
    hyper = fw.config.hyperplanes.copy()
    if len(hyper):
        hyper = np.column_stack([hyper[:, :-1] @ mat.T, (1.0 + lam) * hyper[:, -1]])
    extr = fw.extrusion
    if extr is not None:
        extr = replace(extr, directions=extr.directions @ mat.T)
    return Framework(graph=fw.graph, config=Configuration(fw.dim, points, hyper), extrusion=extr)


def affine_span_check(fw: Framework, tol: float = 1e-9) -> bool:
    """True iff the points plus sample points on each hyperplane affinely span R^d."""
    d = fw.dim
    samples = [fw.point(v) for v in fw.graph.points]
    for w in fw.graph.hyperplanes:
        a, r = fw.hyperplane(w)
        base = a * (r / float(np.dot(a, a)))
        samples.append(base)
        an = a / np.linalg.norm(a)
        # orthonormal basis of the hyperplane through `base`
        basis = np.linalg.svd(np.eye(d) - np.outer(an, an))[0][:, : d - 1]
        for i in range(d - 1):
            samples.append(base + basis[:, i])
    pts = np.asarray(samples)
    if len(pts) < 2:
        return d == 0
    centered = pts - pts.mean(axis=0)
    return numeric_rank(centered, tol) == d


def normalize_hyperplanes(fw: Framework) -> Framework:
    """Rescale every hyperplane row to unit normal; ranks are unaffected."""
    hyper = fw.config.hyperplanes.copy()
    if len(hyper):
        hyper = hyper / np.linalg.norm(hyper[:, :-1], axis=1, keepdims=True)
    return Framework(graph=fw.graph, config=Configuration(fw.dim, fw.config.points, hyper),
                     extrusion=fw.extrusion)
