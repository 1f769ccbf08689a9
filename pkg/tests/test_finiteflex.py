import numpy as np
import pytest

from extrig.finiteflex import (FINITE_FLEX_CERTIFIED, LINEARLY_DETECTABLE, NO_SYMMETRIC_FLEX,
                               NOT_LINEARLY_DETECTABLE, NOT_REGULAR, PRECONDITION_FAILED,
                               AffineSubspace, block_rank_at, finite_flex_test, linear_push,
                               measurement_map, regular_point_test, restricted_jacobian,
                               symmetric_subspace, uniform_velocity_subspace)
from extrig.fixtures import (constrained_cube, constrained_cube_pinned, k33_orthogonal,
                             k33_pinnings, point_line_extruded_fixed, point_line_twofold,
                             point_line_twofold_pinned, prism, prism_twofold, triangle,
                             triangle_cycle, triangle_cycle_classes)
from extrig.graphs import Vertex
from extrig.linalg import numeric_rank
from extrig.rigidity import EMPTY_PIN, minimal_pinning, rigidity_matrix, trivial_motion_basis

JACOBIAN_FIXTURES = [prism, prism_twofold, point_line_twofold, constrained_cube,
                     triangle_cycle, k33_orthogonal]


def test_pp_jacobian_row_entries():
    fw = prism()
    mm = measurement_map(fw)
    jac = mm.jacobian(mm.base_reduced())
    i = mm.rows.index(("pp", (Vertex("p1", "0"), Vertex("p2", "0"))))
    row = jac[i]
    pos = mm.index.pos
    assert row[pos[(Vertex("p1", "0"), 0)]] == -6.0
    assert row[pos[(Vertex("p2", "0"), 0)]] == 6.0
    assert np.count_nonzero(row) == 2


@pytest.mark.parametrize("builder", JACOBIAN_FIXTURES)
def test_jacobian_matches_finite_differences(builder):
    fw = builder()
    mm = measurement_map(fw)
    rng = np.random.default_rng(7)
    base = mm.base_reduced()
    step = 1e-6
    for _ in range(3):
        x = base + rng.uniform(-0.3, 0.3, base.shape)
        jac = mm.jacobian(x)
        scale = np.abs(jac).max() + 1.0
        for j in range(len(x)):
            bump = np.zeros_like(x)
            bump[j] = step
            fd = (mm.values(x + bump) - mm.values(x - bump)) / (2 * step)
            assert np.abs(fd - jac[:, j]).max() <= 1e-6 * scale


@pytest.mark.parametrize("builder", JACOBIAN_FIXTURES)
def test_jacobian_rank_equals_rigidity_rank(builder):
    fw = builder()
    mm = measurement_map(fw)
    assert numeric_rank(mm.jacobian(mm.base_reduced())) == rigidity_matrix(fw).rank()


@pytest.mark.parametrize("builder", JACOBIAN_FIXTURES + [point_line_extruded_fixed])
def test_restricted_jacobian_kernel_matches_rigidity_kernel(builder):
    # on the parallel-respecting domain the measurement kernel is exactly the
    # motion space of the rigidity matrix, parallel rows included
    fw = builder()
    mm = measurement_map(fw)
    jac = mm.jacobian(mm.base_reduced()) @ mm.wg_basis
    rig = rigidity_matrix(fw)
    assert jac.shape[1] - numeric_rank(jac) == rig.shape[1] - rig.rank()


def test_measurement_rows_against_rigidity_rows():
    fw, pin = point_line_twofold_pinned()
    mm = measurement_map(fw, pin)
    rig = rigidity_matrix(fw, pin)
    jac = mm.jacobian(mm.base_reduced())
    rig_rows = {lab: i for i, lab in enumerate(rig.row_labels)}
    for i, lab in enumerate(mm.rows):
        factor = 2.0 if lab[0] in ("pp", "norm") else 1.0
        assert np.allclose(jac[i], factor * rig.matrix[rig_rows[lab]])


def test_parallel_residual_tracks_class_drift():
    fw = constrained_cube()
    mm = measurement_map(fw)
    base = mm.base_reduced()
    assert mm.parallel_residual(base) <= 1e-12
    drift = base.copy()
    drift[mm.index.pos[(Vertex("w2", "0**"), 1)]] += 0.2
    assert mm.parallel_residual(drift) > 1e-3


def test_affine_subspace_membership():
    base = np.zeros(4)
    basis = np.eye(4)[:, :2]
    sub = AffineSubspace(base, basis)
    assert sub.contains(np.array([0.3, -1.0, 0.0, 0.0]))
    assert not sub.contains(np.array([0.0, 0.0, 0.5, 0.0]))
    mm = measurement_map(prism())
    with pytest.raises(ValueError, match="outside"):
        restricted_jacobian(mm, AffineSubspace(mm.base_reduced() + 10.0,
                                               np.zeros((mm.n_coords, 0))))


def test_zero_dimensional_subspace_is_regular():
    mm = measurement_map(prism())
    sub = AffineSubspace(mm.base_reduced(), np.zeros((mm.n_coords, 0)))
    assert regular_point_test(mm, sub)


def test_prism_symmetric_subspace_regular():
    fw = prism()
    mm = measurement_map(fw)
    sub = symmetric_subspace(fw)
    assert sub.dim == 6
    assert regular_point_test(mm, sub, samples=10, seed=1)


def test_cube_base_point_not_regular():
    fw, pin = constrained_cube_pinned()
    mm = measurement_map(fw, pin)
    sub = symmetric_subspace(fw, pin, 0)
    assert not regular_point_test(mm, sub, samples=10, seed=3)


def test_finite_flex_determinations():
    assert finite_flex_test(prism()).determination == FINITE_FLEX_CERTIFIED
    assert finite_flex_test(triangle()).determination == NO_SYMMETRIC_FLEX
    fw, pin = constrained_cube_pinned()
    assert finite_flex_test(fw, pin, 0, seed=3).determination == NOT_REGULAR


def test_complete_rank_counts_subspace_trivial_motions():
    fw = prism()
    res = finite_flex_test(fw)
    sub = symmetric_subspace(fw)
    triv = trivial_motion_basis(fw)
    # dim(T intersect X) = rank T + rank X - rank [T X]; here both translations
    preserved = (numeric_rank(triv) + numeric_rank(sub.basis)
                 - numeric_rank(np.hstack([triv, sub.basis])))
    assert preserved == 2
    assert res.rank_complete == sub.dim - preserved
    assert res.rank_graph <= res.rank_complete


def test_uniform_velocity_subspace_cycle():
    fw = triangle_cycle()
    sub = uniform_velocity_subspace(fw, triangle_cycle_classes())
    assert sub.dim == 6
    res = finite_flex_test(fw, subspace=sub)
    assert res.determination == FINITE_FLEX_CERTIFIED
    assert (res.rank_graph, res.rank_complete) == (3, 4)


def test_uniform_velocity_subspace_validation():
    fw = triangle_cycle()
    with pytest.raises(ValueError, match="partition"):
        uniform_velocity_subspace(fw, [[Vertex("v1c1")]])
    with pytest.raises(ValueError, match="bar-joint"):
        uniform_velocity_subspace(point_line_twofold(), [list(point_line_twofold().graph.points)])


def test_block_path_agrees_with_measurement_path():
    # probing regularity of the fully-symmetric component on the diagonal
    # block gives the same ranks as the restricted measurement Jacobian
    cases = [(prism(), EMPTY_PIN), (prism_twofold(), EMPTY_PIN),
             point_line_twofold_pinned(), constrained_cube_pinned()]
    rng = np.random.default_rng(17)
    for fw, pin in cases:
        mm = measurement_map(fw, pin)
        sub = symmetric_subspace(fw, pin, 0)
        for _ in range(4):
            q = sub.sample(rng, 0.2 * (1.0 + np.linalg.norm(sub.base)))
            rank_meas = numeric_rank(mm.jacobian(q) @ sub.basis)
            assert rank_meas == block_rank_at(fw, pin, 0, q)


def test_linear_push_prism():
    fw = prism()
    pin = minimal_pinning(fw)
    res = linear_push(fw, pin, seed=11)
    assert res.determination == LINEARLY_DETECTABLE
    assert res.iterations <= 6 * 2  # nd bound
    assert all(dim <= 6 * 2 for _, dim in res.trace)


def test_linear_push_k33_depends_on_pinning():
    fw = k33_orthogonal()
    non_adjacent, adjacent = k33_pinnings()
    assert linear_push(fw, non_adjacent, seed=5).determination == LINEARLY_DETECTABLE
    assert linear_push(fw, adjacent, seed=5).determination == NOT_LINEARLY_DETECTABLE


def test_linear_push_deterministic():
    fw = k33_orthogonal()
    non_adjacent, _ = k33_pinnings()
    a = linear_push(fw, non_adjacent, seed=9)
    b = linear_push(fw, non_adjacent, seed=9)
    assert a.determination == b.determination
    assert a.iterations == b.iterations
    assert a.trace == b.trace
    assert np.array_equal(a.subspace.basis, b.subspace.basis)


def test_linear_push_rejects_rigid_framework():
    fw = triangle()
    res = linear_push(fw, minimal_pinning(fw), seed=1)
    assert res.determination == PRECONDITION_FAILED
    assert "nullity 0" in res.reason


def test_linear_push_point_hyperplane():
    # an extrusion-symmetric point-line framework is linearly detectable
    # under any minimal pinning; ranks run on the parallel-respecting domain
    fw = point_line_extruded_fixed()
    pin = minimal_pinning(fw)
    res = linear_push(fw, pin, seed=3)
    assert res.determination == LINEARLY_DETECTABLE


def test_linear_push_rejects_bad_pinning():
    fw = prism()
    res = linear_push(fw, EMPTY_PIN, seed=1)
    assert res.determination == PRECONDITION_FAILED
    assert "expected 3" in res.reason


def test_certified_subspace_is_stable():
    fw = prism()
    pin = minimal_pinning(fw)
    res = linear_push(fw, pin, seed=11)
    assert res.determination == LINEARLY_DETECTABLE
    mm = measurement_map(fw, pin)
    base_rank = numeric_rank(mm.jacobian(mm.base_reduced()))
    rng = np.random.default_rng(123)
    for _ in range(20):
        q = res.subspace.sample(rng, 1.0 + float(np.linalg.norm(res.subspace.base)))
        assert numeric_rank(mm.jacobian(q)) == base_rank
