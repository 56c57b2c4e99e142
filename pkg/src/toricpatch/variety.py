"""The monomial parameterization of X_A, the weight action on the
A-simplex, the tautological projection, and binomial membership tests."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blending import as_weights
from .errors import NonPositiveInput
from .geometry import PointConfig, Polytope, convex_hull

NULL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AffineRelation:
    """sum mu_a a == sum nu_a a with mu, nu >= 0 each summing to one."""

    mu: np.ndarray
    nu: np.ndarray


def _normalize_rows(logz):
    logz = np.asarray(logz, dtype=float)
    shift = np.max(logz, axis=-1, keepdims=True)
    z = np.exp(logz - shift)
    return z / z.sum(axis=-1, keepdims=True)


def phi_A(config: PointConfig, x):
    """[x^a : a in A] on the simplex, for x in the open positive orthant."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise NonPositiveInput("monomial map needs strictly positive input")
    return _normalize_rows(np.log(x) @ config.array.T)


def weight_action(w, z):
    """w.z := [w_a z_a], renormalized."""
    z = np.asarray(z, dtype=float)
    w = as_weights(w, z.shape[-1])
    with np.errstate(divide="ignore"):
        return _normalize_rows(np.log(z) + w.log)


def tautological_projection(config: PointConfig, z):
    return np.asarray(z, dtype=float) @ config.array


def _rref(m, tol):
    m = m.copy()
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = r + int(np.argmax(np.abs(m[r:, c])))
        if abs(m[piv, c]) <= tol:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] /= m[r, c]
        for i in range(rows):
            if i != r:
                m[i] -= m[i, c] * m[r]
        r += 1
    return m[:r]


def null_space_basis(matrix, tol=NULL_TOL):
    """Deterministic basis of {v : matrix @ v = 0}: SVD, then reduced row
    echelon form, then unit rows with positive leading entry."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    _, s, vt = np.linalg.svd(matrix)
    rank = int(np.sum(s > tol))
    basis = vt[rank:]
    if len(basis) == 0:
        return basis
    basis = _rref(basis, tol)
    basis[np.abs(basis) <= tol] = 0.0
    out = []
    for v in basis:
        v = v / np.linalg.norm(v)
        lead = v[np.flatnonzero(v)[0]]
        out.append(v if lead > 0 else -v)
    return np.array(out)


def affine_relations(points) -> list:
    """Affine relations spanning those among ``points`` (any affine span)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    homog = np.hstack([np.ones((len(pts), 1)), pts])
    rels = []
    for v in null_space_basis(homog.T):
        pos = np.where(v > 0, v, 0.0)
        neg = np.where(v < 0, -v, 0.0)
        rels.append(AffineRelation(pos / pos.sum(), neg / neg.sum()))
    return rels


def relation_basis(config: PointConfig) -> list:
    if len(config) <= config.dim + 1:
        return []
    return affine_relations(config.array)


def _monomial(z, e):
    with np.errstate(divide="ignore", invalid="ignore"):
        logz = np.log(z)
        return np.exp(np.where(e > 0, e * logz, 0.0).sum(axis=-1))


def binomial_residual(rel: AffineRelation, z):
    """z^mu - z^nu, with 0**0 = 1."""
    z = np.asarray(z, dtype=float)
    return _monomial(z, rel.mu) - _monomial(z, rel.nu)


def membership_test(config: PointConfig, z, tol=1e-9, weights=None,
                    poly: Polytope | None = None) -> bool:
    """Does ``z`` lie on X_A (or on w.X_A when ``weights`` is given)?

    Interior points are checked against a spanning set of binomials.  A
    boundary point must be supported on exactly the points of some face of
    conv(A), and is then checked against the binomials of that face.
    """
    z = np.asarray(z, dtype=float)
    if weights is not None:
        z = weight_action(as_weights(weights).inverse(), z)
    support = np.flatnonzero(z > 0)
    if len(support) == len(config):
        rels = relation_basis(config)
        return all(abs(binomial_residual(r, z)) < tol for r in rels)
    if poly is None:
        poly = convex_hull(config)
    faces = poly.face_point_sets(len(config))
    if frozenset(support.tolist()) not in faces:
        return False
    zs = z[support] / z[support].sum()
    rels = affine_relations(config.array[support]) if len(support) > 1 else []
    return all(abs(binomial_residual(r, zs)) < tol for r in rels)
