"""Representation theory of the extrusion group Z2^t.

The external representation acts on the coordinate space: a permutation
tensor identity on point coordinates, and on hyperplane coordinates the
permutation with each block augmented by a ``-tau`` row coupling the
normal to the offset.  The internal representation acts on the constraint
rows: permutations with a sign flip on copy-joining edges whose extrusion
coordinate is flipped by the group element.

The rigidity matrix intertwines the two, which yields the block
decomposition and the per-irreducible mobility counts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .frameworks import Framework, extrusion_displacement
from .graphs import subgroup_elements
from .linalg import RANK_TOL, nullspace, numeric_rank
from .rigidity import (CoordinateIndex, EMPTY_PIN, PinningSpec, RigidityMatrix,
                       constraint_rows, rigidity_matrix)

INT_TOL = 1e-9


class SymmetryPreconditionError(ValueError):
    """The block decomposition does not apply; pinning is required first."""


def active_elements(fw: Framework) -> list:
    if fw.extrusion is None:
        return [()] if fw.graph.extrusion_order == 0 else subgroup_elements(fw.graph.extrusion_order, ())
    return subgroup_elements(fw.extrusion.order, fw.extrusion.active)


def element_label(gamma, active=None) -> str:
    if active is not None:
        gamma = tuple(gamma[h] for h in active)
    return "".join(str(b) for b in gamma) if gamma else "()"


def irrep_label(gamma, active=None) -> str:
    return "rho_" + element_label(gamma, active) if (active and len(active)) or gamma else "rho_0"


def character_matrix(elements) -> np.ndarray:
    """Irreducible character table: entry (i, j) = (-1)^<el_i, el_j>."""
    n = len(elements)
    out = np.empty((n, n))
    for i, gi in enumerate(elements):
        for j, gj in enumerate(elements):
            out[i, j] = (-1.0) ** sum(a * b for a, b in zip(gi, gj))
    return out


def irreducible_characters(t: int) -> np.ndarray:
    """2^t x 2^t character table of Z2^t, elements in lexicographic order."""
    if t < 0:
        raise ValueError("group order parameter must be non-negative")
    return character_matrix(subgroup_elements(t, range(t)))


def character_of(matrices) -> np.ndarray:
    """Trace of each representation matrix, in element order."""
    return np.array([float(np.trace(m)) for m in matrices])


def decompose_character(char, elements, tol: float = INT_TOL) -> np.ndarray:
    """Multiplicities of the irreducibles in a character vector.

    Coefficients are (1/|G|) sum_gamma chi(gamma) rho_i(gamma); they must be
    integers up to ``tol`` or the representation is malformed.
    """
    char = np.asarray(char, dtype=float)
    table = character_matrix(elements)
    coeff = table @ char / len(elements)
    rounded = np.rint(coeff)
    if np.max(np.abs(coeff - rounded), initial=0.0) > tol:
        raise ValueError(f"character does not decompose integrally: {coeff}")
    return rounded.astype(int)


def _check_ph_hypothesis(fw: Framework, pin: PinningSpec, active):
    """Every extrusion-fixed hyperplane met by a ph edge must have its
    normal columns deleted, otherwise the rigidity matrix does not
    intertwine the representations."""
    if fw.extrusion is None:
        return
    removed = pin.full_hyperplanes | pin.parallel_only
    ph_incident = {w for _, w in fw.graph.edges_ph}
    offenders = []
    for h in active:
        for w in fw.graph.hyperplanes:
            if w.base in fw.extrusion.fixed_sets[h] and w in ph_incident and w not in removed:
                offenders.append((w, h))
    if offenders:
        names = ", ".join(f"{w} (direction {h})" for w, h in offenders)
        raise SymmetryPreconditionError(
            "point-hyperplane edges meet extrusion-fixed hyperplanes with live normal "
            f"columns: {names}; apply hyperplane_pinning first")


@dataclass
class RepBundle:
    """External and internal representation matrices on the pinned spaces."""

    elements: list
    external: list   # (size, size) per element
    internal: list   # (rows, rows) per element
    index: CoordinateIndex
    row_labels: list


def _external_full(fw: Framework, index: CoordinateIndex, gamma) -> np.ndarray:
    d = fw.dim
    n = index.full_size
    out = np.zeros((n, n))
    graph = fw.graph
    for v in graph.points:
        src = index.vertex_slice(graph.act(gamma, v))
        dst = index.vertex_slice(v)
        out[dst, src] = np.eye(d)
    for w in graph.hyperplanes:
        src = index.vertex_slice(graph.act(gamma, w))
        dst = index.vertex_slice(w)
        block = np.eye(d + 1)
        block[d, :d] = -extrusion_displacement(fw.extrusion, w.word, gamma) if fw.extrusion is not None else 0.0
        out[dst, src] = block
    return out


def _internal_full(fw: Framework, row_labels, gamma) -> np.ndarray:
    graph = fw.graph
    pos = {}
    for i, lab in enumerate(row_labels):
        pos[lab] = i
    out = np.zeros((len(row_labels), len(row_labels)))
    for i, lab in enumerate(row_labels):
        kind = lab[0]
        if kind == "norm":
            image = ("norm", graph.act(gamma, lab[1]))
            out[pos[image], i] = 1.0
        elif kind == "par":
            edge, sub = lab[1], lab[2]
            image = ("par", graph.act_edge(gamma, edge), sub)
            out[pos[image], i] = graph.edge_sign(gamma, edge)
        elif kind == "ph":
            p, w = lab[1]
            image = ("ph", (graph.act(gamma, p), graph.act(gamma, w)))
            out[pos[image], i] = 1.0
        else:  # pp, angle
            edge = lab[1]
            image = (kind, graph.act_edge(gamma, edge))
            sign = graph.edge_sign(gamma, edge) if kind == "pp" else 1.0
            out[pos[image], i] = sign
    return out


def build_reps(fw: Framework, pin: PinningSpec = EMPTY_PIN, tol: float = INT_TOL,
               check_symmetry: bool = True) -> RepBundle:
    """Representation matrices restricted to the pinned coordinate/row spaces.

    Raises :class:`SymmetryPreconditionError` when the point-hyperplane
    hypothesis fails, and ValueError when the pinning is not compatible
    with the group action (deleted coordinates must form an invariant set)
    or when the configuration is not extrusion-symmetric.
    """
    elements = active_elements(fw)
    active = fw.extrusion.active if fw.extrusion is not None else ()
    if check_symmetry and fw.extrusion is not None:
        from .frameworks import verify_extrusion_symmetry

        check = verify_extrusion_symmetry(fw, tol=1e-6, active_only=True)
        if not check.ok:
            first = check.violations[0]
            raise ValueError(f"framework is not extrusion-symmetric: {first[0]} at {first[1]}")
    _check_ph_hypothesis(fw, pin, active)
    index = CoordinateIndex(fw, pin)
    rows = constraint_rows(fw.graph, fw.dim, pin)
    row_set = set(rows)
    external, internal = [], []
    for gamma in elements:
        ext = _external_full(fw, index, gamma)
        coupling = ext[~index.keep][:, index.keep]
        if coupling.size and np.abs(coupling).max() > tol:
            raise ValueError("pinned coordinates are not invariant under the extrusion action")
        external.append(ext[index.keep][:, index.keep])

        graph = fw.graph
        for lab in rows:
            if lab[0] == "norm":
                image = ("norm", graph.act(gamma, lab[1]))
            elif lab[0] == "par":
                image = ("par", graph.act_edge(gamma, lab[1]), lab[2])
            elif lab[0] == "ph":
                image = ("ph", (graph.act(gamma, lab[1][0]), graph.act(gamma, lab[1][1])))
            else:
                image = (lab[0], graph.act_edge(gamma, lab[1]))
            if image not in row_set:
                raise ValueError(f"row {lab} maps outside the surviving rows under {gamma}")
        internal.append(_internal_full(fw, rows, gamma))
    return RepBundle(elements=elements, external=external, internal=internal,
                     index=index, row_labels=rows)


def intertwining_residual(fw: Framework, pin: PinningSpec = EMPTY_PIN) -> float:
    """max over gamma of |R Ext(gamma) - Int(gamma) R| / |R| (max-abs norms).

    Evaluates on symmetry-broken configurations too; the residual is the
    detector.
    """
    reps = build_reps(fw, pin, check_symmetry=False)
    rig = rigidity_matrix(fw, pin)
    scale = np.abs(rig.matrix).max(initial=0.0)
    if scale == 0.0:
        return 0.0
    worst = 0.0
    for ext, itn in zip(reps.external, reps.internal):
        worst = max(worst, float(np.abs(rig.matrix @ ext - itn @ rig.matrix).max(initial=0.0)))
    return worst / scale


# -- character table rows ----------------------------------------------------


def _surviving_coords(index: CoordinateIndex, v) -> int:
    sl = index.vertex_slice(v)
    return int(index.keep[sl].sum())


def character_rows(fw: Framework, pin: PinningSpec = EMPTY_PIN):
    """Named character rows of the freedom and constraint representations.

    Bar-joint frameworks get the four classic rows; point-hyperplane
    frameworks get one row per summand.  All values are computed
    combinatorially from fixed vertices and fixed edges with flip signs.
    """
    elements = active_elements(fw)
    graph = fw.graph
    d = fw.dim
    index = CoordinateIndex(fw, pin)
    rows = constraint_rows(graph, d, pin)

    def vertex_char(vertices, per_coord=True):
        out = []
        for gamma in elements:
            tot = 0
            for v in vertices:
                if graph.act(gamma, v) == v:
                    tot += _surviving_coords(index, v) if per_coord else (1 if _surviving_coords(index, v) else 0)
            out.append(tot)
        return np.array(out, dtype=float)

    def edge_char(kind, signed, weight=1):
        out = []
        labels = [lab for lab in rows if lab[0] == kind and (kind != "par" or lab[2] == 0)]
        for gamma in elements:
            tot = 0
            for lab in labels:
                edge = lab[1]
                if kind == "ph":
                    fixed = (graph.act(gamma, edge[0]), graph.act(gamma, edge[1])) == edge
                else:
                    fixed = graph.act_edge(gamma, edge) == edge
                if fixed:
                    tot += (graph.edge_sign(gamma, edge) if signed else 1) * weight
            out.append(tot)
        return np.array(out, dtype=float)

    def norm_char():
        labels = [lab for lab in rows if lab[0] == "norm"]
        return np.array([sum(1 for lab in labels if graph.act(gamma, lab[1]) == lab[1])
                         for gamma in elements], dtype=float)

    named = []
    if fw.is_bar_joint():
        named.append(("chi(P_V)", vertex_char(graph.points, per_coord=False)))
        named.append((f"chi(P_V x I{d})", vertex_char(graph.points)))
        named.append(("chi(P'_E)", edge_char("pp", signed=True)))
        ext_total = named[1][1]
        int_total = named[2][1]
        trans_name = f"chi(P_V x I{d})^(T)"
    else:
        chi_vp = vertex_char(graph.points, per_coord=False)
        chi_vpd = vertex_char(graph.points)
        chi_vh = vertex_char(graph.hyperplanes)
        chi_pp = edge_char("pp", signed=True)
        chi_ph = edge_char("ph", signed=False)
        par_name = "chi(P'_E_HHpar)" if d == 2 else f"chi(P'_E_HHpar x I{d - 1})"
        chi_par = edge_char("par", signed=True, weight=d - 1)
        chi_angle = edge_char("angle", signed=False)
        chi_norm = norm_char()
        named.append(("chi(P_VP)", chi_vp))
        named.append((f"chi(P_VP x I{d})", chi_vpd))
        named.append(("chi(P'_VH)", chi_vh))
        named.append(("chi(P'_E_PP)", chi_pp))
        named.append(("chi(P_E_PH)", chi_ph))
        if graph.edges_hh_angle:
            named.append(("chi(P_E_HHangle)", chi_angle))
        named.append((par_name, chi_par))
        named.append(("chi(P_VH)", chi_norm))
        ext_total = chi_vpd + chi_vh
        int_total = chi_pp + chi_ph + chi_angle + chi_par + chi_norm
        trans_name = "chi(P'_V)^(T)"

    trans = translation_character(fw, pin)
    named.append((trans_name, trans))
    return named, ext_total, int_total, trans


def translation_character(fw: Framework, pin: PinningSpec = EMPTY_PIN) -> np.ndarray:
    """Constant character of the surviving translation subrepresentation.

    A translation survives iff it vanishes on every pinned point coordinate
    and is tangent to every fully pinned hyperplane.
    """
    elements = active_elements(fw)
    d = fw.dim
    conditions = []
    point_set = set(fw.graph.points)
    for v, c in pin.coords:
        if v in point_set:
            row = np.zeros(d)
            row[c] = 1.0
            conditions.append(row)
        elif c == d:
            a, _ = fw.hyperplane(v)
            conditions.append(a.copy())
    for w in pin.full_hyperplanes:
        a, _ = fw.hyperplane(w)
        conditions.append(a.copy())
    dim = d - (numeric_rank(np.stack(conditions)) if conditions else 0)
    return np.full(len(elements), float(dim))


# -- block decomposition ------------------------------------------------------


def symmetry_adapted_basis(matrices, elements, irrep_index: int, expected: int,
                           tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the isotypic component for one irreducible.

    Projects the standard basis through (1/|G|) sum rho_i(gamma) M(gamma)
    and keeps the leading ``expected`` columns of a column-pivoted QR.
    """
    table = character_matrix(elements)
    proj = sum(table[irrep_index, j] * matrices[j] for j in range(len(elements))) / len(elements)
    if expected == 0:
        return np.zeros((proj.shape[0], 0))
    q, r, _ = scipy.linalg.qr(proj, pivoting=True, mode="economic")
    diag = np.abs(np.diag(r))
    scale = diag[0] if diag.size else 0.0
    rank = int(np.sum(diag > max(tol * max(proj.shape) * scale, 0.0))) if scale > 0 else 0
    if rank != expected:
        raise ValueError(
            f"projection rank {rank} does not match character multiplicity {expected}")
    return q[:, :expected]


@dataclass
class BlockDecomposition:
    """Symmetry-adapted change of basis B^T R A and its diagonal blocks."""

    elements: list
    freedoms: np.ndarray        # lambda_i
    constraints: np.ndarray     # mu_i
    external_bases: list        # A_i, orthonormal columns in pinned coordinates
    internal_bases: list        # B_i
    blocks: list                # mu_i x lambda_i
    offdiag_residual: float
    rigidity: RigidityMatrix

    @property
    def block_shapes(self):
        return [b.shape for b in self.blocks]


def block_decompose(fw: Framework, pin: PinningSpec = EMPTY_PIN,
                    tol: float = RANK_TOL) -> BlockDecomposition:
    reps = build_reps(fw, pin)
    rig = rigidity_matrix(fw, pin)
    lam = decompose_character(character_of(reps.external), reps.elements)
    mu = decompose_character(character_of(reps.internal), reps.elements)
    ext_bases, int_bases = [], []
    for i in range(len(reps.elements)):
        ext_bases.append(symmetry_adapted_basis(reps.external, reps.elements, i, int(lam[i]), tol))
        int_bases.append(symmetry_adapted_basis(reps.internal, reps.elements, i, int(mu[i]), tol))
    a_mat = np.hstack(ext_bases) if ext_bases else np.zeros((rig.shape[1], 0))
    b_mat = np.hstack(int_bases) if int_bases else np.zeros((rig.shape[0], 0))
    full = b_mat.T @ rig.matrix @ a_mat
    blocks = []
    resid = 0.0
    r0 = 0
    for i in range(len(reps.elements)):
        c0 = int(np.sum(lam[:i]))
        block = full[r0:r0 + int(mu[i]), c0:c0 + int(lam[i])]
        blocks.append(block)
        masked = full[r0:r0 + int(mu[i])].copy()
        masked[:, c0:c0 + int(lam[i])] = 0.0
        if masked.size:
            resid = max(resid, float(np.abs(masked).max(initial=0.0)))
        r0 += int(mu[i])
    scale = np.abs(rig.matrix).max(initial=0.0)
    return BlockDecomposition(elements=reps.elements, freedoms=lam, constraints=mu,
                              external_bases=ext_bases, internal_bases=int_bases,
                              blocks=blocks, offdiag_residual=resid / scale if scale else resid,
                              rigidity=rig)


def symmetric_flexes(fw: Framework, pin: PinningSpec = EMPTY_PIN, irrep_index: int = 0,
                     tol: float = RANK_TOL, decomposition: BlockDecomposition = None) -> np.ndarray:
    """Full-coordinate kernel vectors of one diagonal block.

    Columns satisfy R v = 0 and Ext(gamma) v = rho_i(gamma) v; pinned
    coordinates are zero.
    """
    dec = decomposition if decomposition is not None else block_decompose(fw, pin, tol)
    kern = nullspace(dec.blocks[irrep_index], tol)
    vecs = dec.external_bases[irrep_index] @ kern
    index = dec.rigidity.index
    return np.column_stack([index.scatter(vecs[:, j]) for j in range(vecs.shape[1])]) \
        if vecs.shape[1] else np.zeros((index.full_size, 0))


# -- mobility counts -----------------------------------------------------------


@dataclass
class MobilityReport:
    """Per-irreducible freedoms, translations, constraints, and net counts."""

    elements: list
    irrep_names: list
    char_rows: list              # (name, integer vector) pairs
    freedoms: np.ndarray         # lambda_i
    translations: np.ndarray     # nu_i
    constraints: np.ndarray      # mu_i
    nets: np.ndarray
    block_shapes: list
    offdiag_residual: float
    detected_flex_dims: dict     # irrep index -> kernel dimension of block
    detected_flexes: dict        # irrep index -> full-coordinate basis
    stress_dims: dict            # irrep index -> left kernel dimension
    caveats: list

    def summary(self) -> list:
        out = []
        for i, name in enumerate(self.irrep_names):
            net = int(self.nets[i])
            if net > 0:
                out.append(f"+{net} {name} flex" + ("es" if net > 1 else ""))
            elif net < 0:
                out.append(f"{-net} {name} stress" + ("es" if net < -1 else ""))
        return out or ["no symmetry-detected flexes or stresses"]


def fowler_guest_count(fw: Framework, pin: PinningSpec = EMPTY_PIN,
                       tol: float = RANK_TOL) -> MobilityReport:
    """Symmetry-adapted mobility count.

    net_i = lambda_i - nu_i - mu_i.  A positive net guarantees that many
    independent infinitesimal motions of that symmetry beyond the surviving
    translations; a negative net guarantees self-stresses.  In the plane a
    detected motion is necessarily non-trivial; for d >= 3 a rotation may
    masquerade as one, which is flagged as a caveat.
    """
    named, ext_total, int_total, trans = character_rows(fw, pin)
    dec = block_decompose(fw, pin, tol)
    elements = dec.elements
    lam = decompose_character(ext_total, elements)
    mu = decompose_character(int_total, elements)
    nu = decompose_character(trans, elements)
    if not np.array_equal(lam, dec.freedoms) or not np.array_equal(mu, dec.constraints):
        raise AssertionError("combinatorial characters disagree with matrix traces")
    nets = lam - nu - mu
    active = fw.extrusion.active if fw.extrusion is not None else ()
    names = [("rho_" + element_label(g, active)) if len(elements) > 1 else "rho_0"
             for g in elements]
    flex_dims, flexes, stress_dims = {}, {}, {}
    for i in range(len(elements)):
        kern = nullspace(dec.blocks[i], tol)
        flex_dims[i] = kern.shape[1]
        flexes[i] = symmetric_flexes(fw, pin, i, tol, decomposition=dec)
        stress_dims[i] = dec.blocks[i].shape[0] - numeric_rank(dec.blocks[i], tol)
    caveats = []
    if fw.dim >= 3:
        caveats.append("d >= 3: infinitesimal rotations are not subtracted; "
                       "detected motions may contain rotations")
    if not fw.is_bar_joint():
        caveats.append("point-hyperplane external representation is not unitary; "
                       "a symmetric flex may move parallel hyperplanes by unequal offsets")
    named_int = [(name, tuple(int(round(x)) for x in vec)) for name, vec in named]
    return MobilityReport(elements=elements, irrep_names=names, char_rows=named_int,
                          freedoms=lam, translations=nu, constraints=mu, nets=nets,
                          block_shapes=dec.block_shapes, offdiag_residual=dec.offdiag_residual,
                          detected_flex_dims=flex_dims, detected_flexes=flexes,
                          stress_dims=stress_dims, caveats=caveats)
