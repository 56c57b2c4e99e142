"""Injectivity certificates for toric patches.

A patch with exponents A and control points B in the same R^d is injective
for every choice of positive weights exactly when A and B are compatible:
all orientation products over corresponding affinely independent
(d+1)-subsets agree in sign, and at least one is nonzero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import DomainError, SizeMismatch
from .geometry import EPS, PointConfig, _scalar, det, is_exact, orientation


class Status(str, Enum):
    COMPATIBLE = "Compatible"
    INCOMPATIBLE = "Incompatible"
    ALL_DEGENERATE = "AllDegenerate"


@dataclass(frozen=True)
class CompatibilityVerdict:
    status: Status
    global_sign: int | None = None
    witness: tuple | None = None

    @property
    def compatible(self) -> bool:
        return self.status is Status.COMPATIBLE


def _points(p):
    if isinstance(p, PointConfig):
        return list(p.points)
    arr = [tuple(np.atleast_1d(np.asarray(q)).tolist()) for q in p]
    return [tuple(_scalar(v) for v in q) for q in arr]


def compatibility(A, B, eps=EPS) -> CompatibilityVerdict:
    """Compare orientations of every affinely independent (d+1)-subset of A
    with the corresponding subset of B.

    The witness of an incompatibility is the lexicographically first pair
    (I, J) of subsets whose sign products disagree.
    """
    a, b = _points(A), _points(B)
    if len(a) != len(b):
        raise SizeMismatch(f"{len(a)} exponents but {len(b)} control points")
    d = len(a[0])
    if any(len(q) != d for q in b):
        raise SizeMismatch("control points must live in the exponent space")
    first = None
    for subset in combinations(range(len(a)), d + 1):
        oa = orientation([a[i] for i in subset], eps)
        if oa == 0:
            continue
        s = oa * orientation([b[i] for i in subset], eps)
        if s == 0:
            continue
        if first is None:
            first = (subset, s)
        elif s != first[1]:
            return CompatibilityVerdict(Status.INCOMPATIBLE, None, (first[0], subset))
    if first is None:
        return CompatibilityVerdict(Status.ALL_DEGENERATE)
    return CompatibilityVerdict(Status.COMPATIBLE, first[1])


def certify_all_weights_injective(A, B, eps=EPS) -> CompatibilityVerdict:
    """Compatible means F_w is injective for every positive weight vector;
    Incompatible means some weight makes it fold (no weight is constructed)."""
    return compatibility(A, B, eps)


def central_projection(points, center):
    """Project R^n -> R^(n-1) from ``center`` onto the hyperplane where the
    last coordinate vanishes, then drop that coordinate.

    All points must lie strictly on one side of the hyperplane through the
    center parallel to the target, otherwise the projected patch is not a
    toric patch with positive weights.
    """
    pts = _points(points)
    c = tuple(_scalar(v) for v in center)
    exact = is_exact(c) and all(is_exact(p) for p in pts)
    conv = Fraction if exact else float
    cn = conv(c[-1])
    if cn == 0:
        raise DomainError("projection center lies on the target hyperplane")
    gaps = [cn - conv(p[-1]) for p in pts]
    if any(g == 0 for g in gaps) or len({g > 0 for g in gaps}) > 1:
        raise DomainError("control points straddle the plane through the center")
    out = []
    for p, g in zip(pts, gaps):
        s = cn / g
        out.append(tuple(_scalar(conv(ci) + s * (conv(pi) - conv(ci))) for ci, pi in zip(c[:-1], p[:-1])))
    return out


def affine_projection(points, matrix, offset=None):
    pts = _points(points)
    m = [[_scalar(v) for v in row] for row in np.atleast_2d(np.asarray(matrix, dtype=object)).tolist()]
    off = [0] * len(m) if offset is None else [_scalar(v) for v in offset]
    if any(len(row) != len(pts[0]) for row in m):
        raise SizeMismatch("projection matrix does not match control point dimension")
    return [tuple(sum(r * x for r, x in zip(row, p)) + o for row, o in zip(m, off)) for p in pts]


def projected_injectivity(A, B, matrix=None, offset=None, centers=(), eps=EPS):
    """Certificate for patches in R^n: project B to R^d (first through each
    of ``centers`` in turn, then by the affine map ``matrix``/``offset``) and
    test compatibility.  Compatible certifies injectivity; anything else is
    inconclusive."""
    pts = _points(B)
    for c in centers:
        pts = central_projection(pts, c)
    if matrix is not None:
        pts = affine_projection(pts, matrix, offset)
    return compatibility(A, pts, eps)


def lifted_pair(A, B):
    """Y = {(1, a)}, Z = {(1, b_a)}: the exponential-sum data whose Jacobian
    sign pattern matches the orientation products of (A, B)."""
    return [(1,) + p for p in _points(A)], [(1,) + p for p in _points(B)]


def exponential_sum_map(Y, Z, k, x):
    """G_k(x) = sum_i k_i x^{y_i} z_i."""
    Y, Z = np.asarray(Y, float), np.asarray(Z, float)
    mono = np.asarray(k, float) * np.exp(Y @ np.log(np.asarray(x, float)))
    return mono @ Z


def minor_products(Y, Z):
    """{I: Y_I * Z_I} over all n-subsets of the m rows (exact on exact data)."""
    Y, Z = _points(Y), _points(Z)
    n = len(Y[0])
    return {I: det([Y[i] for i in I]) * det([Z[i] for i in I])
            for I in combinations(range(len(Y)), n)}


def jacobian_cb(Y, Z, k, x):
    """det Jac(G_k)(x) through the Cauchy-Binet expansion
    x^{-1} sum_I prod_{i in I} k_i x^{y_i} Y_I Z_I."""
    Yf, Zf = np.asarray(Y, float), np.asarray(Z, float)
    k, x = np.asarray(k, float), np.asarray(x, float)
    m, n = Yf.shape
    if m < n:
        return 0.0
    subsets = np.array(list(combinations(range(m), n)))
    yi, zi = Yf[subsets], Zf[subsets]
    prods = np.linalg.det(yi) * np.linalg.det(zi)
    logmono = np.log(k) + Yf @ np.log(x)
    weights = np.exp(logmono[subsets].sum(axis=1) - np.log(x).sum())
    return float(np.sum(weights * prods))


def probe_signs(Y, Z) -> set:
    """Signs of det Jac(G_{k(K,t)}) at x = (1, ..., 1) for every K with
    Y_K Z_K != 0, where k(K,t) is t on K and 1 elsewhere.

    With x = 1 the expansion is sum_I t^{|I & K|} Y_I Z_I; taking
    t = 1 + 2 sum_I |Y_I Z_I| / |Y_K Z_K| makes the K term dominate, so the
    sign equals sign(Y_K Z_K).  Evaluated exactly on exact input.
    """
    prods = minor_products(Y, Z)
    exact = all(isinstance(v, (int, Fraction)) for v in prods.values())
    total = sum(abs(v) for v in prods.values())
    signs = set()
    for K, pk in prods.items():
        if (pk == 0) if exact else abs(pk) <= EPS:
            continue
        t = 1 + 2 * total / abs(pk)
        if exact:
            t = Fraction(t)
        ks = set(K)
        val = sum(t ** len(ks.intersection(I)) * v for I, v in prods.items())
        if exact or abs(val) > EPS:
            s = (val > 0) - (val < 0)
            if s:
                signs.add(s)
    return signs


def sign_constancy_check(Y, Z, trials=1000, rng=None, probes=True) -> bool:
    """Randomized (plus deterministic-probe) check that det Jac(G_k) keeps
    one sign over k, x > 0.  Requires at least one nonzero sample: an
    identically vanishing Jacobian does not count as constant sign."""
    rng = np.random.default_rng(rng)
    Yf = np.asarray(Y, float)
    m, n = Yf.shape
    signs = set(probe_signs(Y, Z)) if probes else set()
    for _ in range(trials):
        k = np.exp(rng.normal(0.0, 2.0, m))
        x = np.exp(rng.normal(0.0, 1.0, n))
        v = jacobian_cb(Y, Z, k, x)
        if abs(v) > EPS * max(1.0, math.fsum(k)):
            signs.add(1 if v > 0 else -1)
        if len(signs) > 1:
            return False
    return len(signs) == 1


def verdict_from_signs(signs: set) -> Status:
    if not signs:
        return Status.ALL_DEGENERATE
    return Status.COMPATIBLE if len(signs) == 1 else Status.INCOMPATIBLE
