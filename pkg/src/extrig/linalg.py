"""Dense rank / nullspace helpers with an explicit tolerance contract.

All rank decisions in this package go through :func:`numeric_rank`: a
singular value counts towards the rank iff it exceeds
``tol * max(shape) * sigma_max``.  The default ``tol`` can be overridden
per call and is surfaced on the CLI.
"""
from __future__ import annotations

import numpy as np

RANK_TOL = 1e-9


def _svd(mat):
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0:
        return None
    return np.linalg.svd(mat)


def numeric_rank(mat, tol: float = RANK_TOL) -> int:
    """Numerical rank of a dense matrix."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0:
        return 0
    sigma = np.linalg.svd(mat, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > tol * max(mat.shape) * sigma[0]))


def nullspace(mat, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the (right) nullspace, columns of shape (n, nullity)."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    n = mat.shape[1]
    if mat.size == 0:
        return np.eye(n)
    _, sigma, vt = np.linalg.svd(mat)
    rank = 0
    if sigma.size and sigma[0] > 0.0:
        rank = int(np.sum(sigma > tol * max(mat.shape) * sigma[0]))
    return vt[rank:].T


def left_nullspace(mat, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the left nullspace (row dependencies)."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    return nullspace(mat.T, tol)


def orthonormal_columns(mat, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis for the column space of ``mat`` (rank-trimmed SVD)."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0 or mat.shape[1] == 0:
        return np.zeros((mat.shape[0], 0))
    u, sigma, _ = np.linalg.svd(mat, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros((mat.shape[0], 0))
    rank = int(np.sum(sigma > tol * max(mat.shape) * sigma[0]))
    return u[:, :rank]


def projection_residual(vec, basis) -> float:
    """Norm of the component of ``vec`` outside span(basis columns)."""
    vec = np.asarray(vec, dtype=float)
    if basis.shape[1] == 0:
        return float(np.linalg.norm(vec))
    return float(np.linalg.norm(vec - basis @ (basis.T @ vec)))


def intersect_columns(u_mat, v_mat, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of span(u_mat) intersected with span(v_mat)."""
    u_mat = np.atleast_2d(np.asarray(u_mat, dtype=float))
    v_mat = np.atleast_2d(np.asarray(v_mat, dtype=float))
    if u_mat.shape[1] == 0 or v_mat.shape[1] == 0:
        return np.zeros((u_mat.shape[0], 0))
    stacked = np.hstack([u_mat, -v_mat])
    kern = nullspace(stacked, tol)
    if kern.shape[1] == 0:
        return np.zeros((u_mat.shape[0], 0))
    return orthonormal_columns(u_mat @ kern[: u_mat.shape[1]], tol)
