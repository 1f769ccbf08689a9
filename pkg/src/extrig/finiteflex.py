"""Finite-flex certification and the numerical linear push.

The measurement map records squared point-point distances, point-hyperplane
offsets, hyperplane angle cosines, and the normal normalizations; parallel
constraints live in the domain (configurations keeping class normals
parallel), not in the map.  Restricting the Jacobian to an affine subspace
whose points achieve locally maximal rank turns an infinitesimal flex into
a certified finite one; the linear push grows such a subspace from a single
flex of a minimally pinned framework.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frameworks import Configuration, Framework, affine_span_check
from .graphs import complete_decorated
from .linalg import (RANK_TOL, intersect_columns, nullspace, numeric_rank,
                     orthonormal_columns, projection_residual)
from .rigidity import (CoordinateIndex, EMPTY_PIN, PinningSpec, constraint_rows,
                       trivial_motion_basis)
from .symmetry import BlockDecomposition, block_decompose

FINITE_FLEX_CERTIFIED = "FiniteFlexCertified"
NO_SYMMETRIC_FLEX = "NoSymmetricFlex"
NOT_REGULAR = "NotRegular"

LINEARLY_DETECTABLE = "LinearlyDetectable"
NOT_LINEARLY_DETECTABLE = "NotLinearlyDetectable"
PRECONDITION_FAILED = "PreconditionFailed"

CONTAINMENT_TOL = 1e-8


@dataclass(frozen=True)
class MeasurementMap:
    """Constraint measurements of a (pinned) framework as a map on the
    surviving coordinates; pinned coordinates are frozen at their framework
    values.  ``wg_basis`` spans the domain directions along which parallel
    classes keep their normal ratios (everything, for bar-joint)."""

    fw: Framework
    pin: PinningSpec
    index: CoordinateIndex
    rows: list
    base_full: np.ndarray
    wg_basis: np.ndarray = None

    @property
    def n_coords(self) -> int:
        return self.index.size

    def base_reduced(self) -> np.ndarray:
        return self.base_full[self.index.keep]

    def _unpack(self, reduced):
        full = self.base_full.copy()
        full[self.index.keep] = reduced
        d = self.fw.dim
        n = len(self.fw.graph.points)
        pts = full[: n * d].reshape(n, d)
        hyp = full[n * d:].reshape(-1, d + 1)
        pt_idx = self.fw.point_index
        hp_idx = self.fw.hyperplane_index
        return full, lambda v: pts[pt_idx[v]], lambda w: (hyp[hp_idx[w]][:-1], hyp[hp_idx[w]][-1])

    def values(self, reduced) -> np.ndarray:
        _, point, hyper = self._unpack(np.asarray(reduced, dtype=float))
        out = np.empty(len(self.rows))
        for i, lab in enumerate(self.rows):
            kind = lab[0]
            if kind == "pp":
                u, v = lab[1]
                out[i] = float(np.sum((point(u) - point(v)) ** 2))
            elif kind == "ph":
                p, w = lab[1]
                a, r = hyper(w)
                out[i] = float(np.dot(point(p), a) - r)
            elif kind == "angle":
                u, v = lab[1]
                out[i] = float(np.dot(hyper(u)[0], hyper(v)[0]))
            else:  # norm
                a, _ = hyper(lab[1])
                out[i] = float(np.dot(a, a))
        return out

    def jacobian(self, reduced) -> np.ndarray:
        """Jacobian at a reduced coordinate vector, pinned columns removed.

        pp and normalization rows are twice the corresponding rigidity rows;
        ph and angle rows coincide with them.
        """
        full, point, hyper = self._unpack(np.asarray(reduced, dtype=float))
        d = self.fw.dim
        jac = np.zeros((len(self.rows), self.index.full_size))
        sl = self.index.vertex_slice
        for i, lab in enumerate(self.rows):
            kind = lab[0]
            if kind == "pp":
                u, v = lab[1]
                diff = 2.0 * (point(u) - point(v))
                jac[i, sl(u)] = diff
                jac[i, sl(v)] = -diff
            elif kind == "ph":
                p, w = lab[1]
                a, _ = hyper(w)
                jac[i, sl(p)] = a
                jac[i, sl(w)] = np.concatenate([point(p), [-1.0]])
            elif kind == "angle":
                u, v = lab[1]
                jac[i, sl(u)] = np.concatenate([hyper(v)[0], [0.0]])
                jac[i, sl(v)] = np.concatenate([hyper(u)[0], [0.0]])
            else:  # norm
                w = lab[1]
                a, _ = hyper(w)
                jac[i, sl(w)] = np.concatenate([2.0 * a, [0.0]])
        return jac[:, self.index.keep]

    def parallel_residual(self, reduced) -> float:
        """How far the configuration strays from keeping class normals parallel."""
        _, _, hyper = self._unpack(np.asarray(reduced, dtype=float))
        worst = 0.0
        for cls in self.fw.graph.parallel_classes:
            if len(cls) < 2:
                continue
            normals = np.stack([hyper(w)[0] for w in cls])
            norms = np.linalg.norm(normals, axis=1)
            units = normals / norms[:, None]
            units *= np.sign(units @ units[0])[:, None]
            worst = max(worst, float(np.abs(units - units[0]).max()))
        return worst


def parallel_respecting_basis(fw: Framework, index: CoordinateIndex,
                              tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis, in pinned coordinates, of the directions along which
    every parallel class keeps its exact normal ratios.

    This is the linearization of the measurement map's domain: the rigidity
    matrix carries explicit parallel rows, the measurement map instead lives
    on configurations whose class normals stay parallel.  For bar-joint
    frameworks this is the whole space.
    """
    d = fw.dim
    conditions = []
    for cls in fw.graph.parallel_classes:
        if len(cls) < 2:
            continue
        rep = cls[0]
        a_rep, _ = fw.hyperplane(rep)
        for other in cls[1:]:
            a_other, _ = fw.hyperplane(other)
            beta = float(np.dot(a_other, a_rep) / np.dot(a_rep, a_rep))
            for c in range(d):
                row = np.zeros(index.size)
                lab_o, lab_r = (other, c), (rep, c)
                if lab_o in index.pos:
                    row[index.pos[lab_o]] = 1.0
                if lab_r in index.pos:
                    row[index.pos[lab_r]] = -beta
                if np.any(row):
                    conditions.append(row)
    if not conditions:
        return np.eye(index.size)
    return nullspace(np.stack(conditions), tol)


def measurement_map(fw: Framework, pin: PinningSpec = EMPTY_PIN,
                    complete: bool = False) -> MeasurementMap:
    graph = complete_decorated(fw.graph) if complete else fw.graph
    index = CoordinateIndex(fw, pin)
    rows = constraint_rows(graph, fw.dim, pin, include_parallel=False)
    return MeasurementMap(fw=fw, pin=pin, index=index, rows=rows,
                          base_full=index.full_vector(),
                          wg_basis=parallel_respecting_basis(fw, index))


def measurement_jacobian(mm: MeasurementMap, reduced=None) -> np.ndarray:
    return mm.jacobian(mm.base_reduced() if reduced is None else reduced)


@dataclass(frozen=True)
class AffineSubspace:
    """base + span(orthonormal basis columns), in pinned coordinates."""

    base: np.ndarray
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains(self, vec, tol: float = CONTAINMENT_TOL) -> bool:
        delta = np.asarray(vec, dtype=float) - self.base
        return projection_residual(delta, self.basis) <= tol * (1.0 + np.linalg.norm(delta))

    def point(self, coeff) -> np.ndarray:
        return self.base + self.basis @ np.asarray(coeff, dtype=float)

    def sample(self, rng, scale: float) -> np.ndarray:
        return self.point(rng.uniform(-1.0, 1.0, self.dim) * scale)


def restricted_jacobian(mm: MeasurementMap, sub: AffineSubspace, reduced=None,
                        tol: float = CONTAINMENT_TOL) -> np.ndarray:
    vec = mm.base_reduced() if reduced is None else np.asarray(reduced, dtype=float)
    if not sub.contains(vec, tol):
        raise ValueError("configuration lies outside the affine subspace")
    return mm.jacobian(vec) @ sub.basis


def symmetric_subspace(fw: Framework, pin: PinningSpec = EMPTY_PIN, irrep_index: int = 0,
                       tol: float = RANK_TOL,
                       decomposition: BlockDecomposition = None) -> AffineSubspace:
    """Affine subspace through the configuration along one isotypic component.

    The component is intersected with the parallel-respecting directions so
    that every point of the subspace is a valid decorated configuration; for
    the fully-symmetric component of an extrusion framework this changes
    nothing.
    """
    dec = decomposition if decomposition is not None else block_decompose(fw, pin, tol)
    index = dec.rigidity.index
    basis = dec.external_bases[irrep_index]
    if not fw.is_bar_joint():
        wg = parallel_respecting_basis(fw, index, tol)
        if wg.shape[1] < index.size:
            basis = intersect_columns(basis, wg, tol)
    return AffineSubspace(base=index.reduce(index.full_vector()), basis=basis)


def uniform_velocity_subspace(fw: Framework, classes, pin: PinningSpec = EMPTY_PIN,
                              tol: float = RANK_TOL) -> AffineSubspace:
    """Fixed space of a copy-permutation action given by vertex classes.

    Each class of point vertices moves with one shared velocity; the basis
    is the fully-symmetric subspace of the corresponding permutation
    representation tensor identity.  Bar-joint frameworks only.
    """
    if not fw.is_bar_joint():
        raise ValueError("uniform velocity subspaces are defined for bar-joint frameworks")
    index = CoordinateIndex(fw, pin)
    d = fw.dim
    listed = [v for cls in classes for v in cls]
    if len(listed) != len(set(listed)) or set(listed) != set(fw.graph.points):
        raise ValueError("classes must partition the point vertices")
    cols = []
    for cls in classes:
        for c in range(d):
            vec = np.zeros(index.full_size)
            for v in cls:
                vec[index.full_pos[(v, c)]] = 1.0
            cols.append(vec)
    basis = orthonormal_columns(np.column_stack(cols)[index.keep, :], tol)
    return AffineSubspace(base=index.reduce(index.full_vector()), basis=basis)


def framework_at(fw: Framework, index: CoordinateIndex, reduced) -> Framework:
    """Framework with the same graph, pinning values, and extrusion spec, at
    new values of the unpinned coordinates."""
    full = index.expand(np.asarray(reduced, dtype=float))
    d = fw.dim
    n = len(fw.graph.points)
    pts = full[: n * d].reshape(n, d)
    hyp = full[n * d:].reshape(-1, d + 1)
    return Framework(fw.graph, Configuration(d, pts, hyp), fw.extrusion)


def block_rank_at(fw: Framework, pin: PinningSpec, irrep_index: int, reduced,
                  tol: float = RANK_TOL) -> int:
    """Rank of one diagonal block of the rigidity matrix re-evaluated at a
    pushed configuration.

    A push along the fully-symmetric component keeps the extrusion symmetry,
    so the block structure survives and regularity of that component can be
    probed on the block alone; this agrees with the restricted measurement
    Jacobian rank at the same point.
    """
    moved = framework_at(fw, CoordinateIndex(fw, pin), reduced)
    return numeric_rank(block_decompose(moved, pin, tol).blocks[irrep_index], tol)


def regular_point_test(mm: MeasurementMap, sub: AffineSubspace, samples: int = 20,
                       radius: float = None, seed: int = 0, tol: float = RANK_TOL,
                       at=None) -> bool:
    """True iff the configuration achieves the maximal restricted-Jacobian
    rank among seeded random points of the subspace within ``radius``.

    ``at`` tests a configuration other than the framework's own; it must
    lie in the subspace.
    """
    if sub.dim == 0:
        return True
    here = mm.base_reduced() if at is None else np.asarray(at, dtype=float)
    if at is not None and not sub.contains(here):
        raise ValueError("configuration lies outside the affine subspace")
    if radius is None:
        radius = 0.1 * (1.0 + float(np.linalg.norm(here)))
    rank_here = numeric_rank(mm.jacobian(here) @ sub.basis, tol)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        q = here + sub.basis @ (rng.uniform(-1.0, 1.0, sub.dim) * radius)
        if numeric_rank(mm.jacobian(q) @ sub.basis, tol) > rank_here:
            return False
    return True


@dataclass
class FlexTestResult:
    determination: str
    regular: bool
    rank_graph: int
    rank_complete: int
    subspace_dim: int


def finite_flex_test(fw: Framework, pin: PinningSpec = EMPTY_PIN, irrep_index: int = 0,
                     samples: int = 20, seed: int = 0, radius: float = None,
                     tol: float = RANK_TOL, subspace: AffineSubspace = None) -> FlexTestResult:
    """Certify a finite flex along a symmetric subspace.

    At a regular point of the subspace, a strict rank deficit of the graph
    measurement against the complete decorated graph proves a finite flex.
    Pass ``subspace`` to override the isotypic component (e.g. the uniform
    velocity subspace of a copy-permutation action).
    """
    if not affine_span_check(fw, tol):
        raise ValueError("points and hyperplanes do not affinely span the ambient space")
    sub = subspace
    if sub is None:
        sub = symmetric_subspace(fw, pin, irrep_index, tol)
    mm_g = measurement_map(fw, pin)
    mm_k = measurement_map(fw, pin, complete=True)
    rank_g = numeric_rank(mm_g.jacobian(mm_g.base_reduced()) @ sub.basis, tol)
    rank_k = numeric_rank(mm_k.jacobian(mm_k.base_reduced()) @ sub.basis, tol)
    regular = regular_point_test(mm_g, sub, samples=samples, radius=radius, seed=seed, tol=tol)
    if not regular:
        det = NOT_REGULAR
    elif rank_g < rank_k:
        det = FINITE_FLEX_CERTIFIED
    else:
        det = NO_SYMMETRIC_FLEX
    return FlexTestResult(determination=det, regular=regular, rank_graph=rank_g,
                          rank_complete=rank_k, subspace_dim=sub.dim)


@dataclass
class LinearPushResult:
    determination: str
    subspace: AffineSubspace
    iterations: int
    trace: list          # (sample rank, subspace dim) per iteration
    seed: int
    reason: str = ""


def linear_push(fw: Framework, pin: PinningSpec, seed: int = 0, max_iter: int = None,
                tol: float = RANK_TOL,
                containment_tol: float = CONTAINMENT_TOL) -> LinearPushResult:
    """Grow an affine subspace from the single flex of a minimally pinned
    framework until the flex is certified linearly detectable or refuted.

    Each iteration samples a seeded random point of the current subspace;
    a rank above the base rank refutes detectability, a sample nullspace
    already inside the subspace certifies it, anything else extends the
    subspace by the sample's unit flex.  All ranks and nullspaces are taken
    on the parallel-respecting domain, which for point-hyperplane
    frameworks replaces the rigidity matrix's explicit parallel rows.
    """
    d = fw.dim
    expected = d * (d + 1) // 2
    mm = measurement_map(fw, pin)
    wg = mm.wg_basis
    base = mm.base_reduced()

    def subspace(basis_w):
        return AffineSubspace(base, wg @ basis_w)

    def failed(reason, iterations=0, trace=None, sub=None):
        return LinearPushResult(determination=PRECONDITION_FAILED,
                                subspace=sub if sub is not None
                                else subspace(np.zeros((wg.shape[1], 0))),
                                iterations=iterations, trace=trace or [], seed=seed,
                                reason=reason)

    n_pinned = mm.index.full_size - mm.index.size
    if n_pinned != expected:
        return failed(f"pinning removes {n_pinned} coordinates, expected {expected}")
    if trivial_motion_basis(fw, pin, tol).shape[1] != 0:
        return failed("pinned framework retains trivial motions")
    jac = mm.jacobian(base) @ wg
    rank_base = numeric_rank(jac, tol)
    kern = nullspace(jac, tol)
    if kern.shape[1] != 1:
        return failed(f"pinned framework has nullity {kern.shape[1]}, need exactly 1")

    cap = wg.shape[1] if max_iter is None else min(max_iter, wg.shape[1])
    basis = kern  # columns in the parallel-respecting coordinates
    rng = np.random.default_rng(seed)
    scale = 1.0 + float(np.linalg.norm(base))
    trace = []
    for it in range(1, cap + 1):
        z = basis @ (rng.uniform(-1.0, 1.0, basis.shape[1]) * scale)
        jq = mm.jacobian(base + wg @ z) @ wg
        rank_q = numeric_rank(jq, tol)
        trace.append((rank_q, basis.shape[1]))
        if rank_q > rank_base:
            return LinearPushResult(NOT_LINEARLY_DETECTABLE, subspace(basis), it, trace, seed)
        if rank_q < rank_base:
            return failed(f"sample at iteration {it} has nullity "
                          f"{wg.shape[1] - rank_q} > 1, outside the single-flex hypothesis",
                          it, trace, subspace(basis))
        gen = nullspace(jq, tol)[:, 0]
        if projection_residual(gen, basis) <= containment_tol:
            return LinearPushResult(LINEARLY_DETECTABLE, subspace(basis), it, trace, seed)
        extra = gen - basis @ (basis.T @ gen)
        basis = np.column_stack([basis, extra / np.linalg.norm(extra)])
    return failed(f"no determination within {cap} iterations", cap, trace, subspace(basis))
