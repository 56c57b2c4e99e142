"""Toric degenerations t**lambda * w and distances between a patch and a
(control) simplicial complex.

All distances are sampled estimates.  The patch is sampled twice: by the
blend map on a lattice grid of the domain, and through the moment map
(IPF iterates, which always lie on the patch) so that the steep
transitions of strongly degenerated patches are not stepped over.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .blending import WeightVector, as_controls, as_weights, blend
from .errors import ConverseViolation, DomainError, NonPositiveInput
from .geometry import PointConfig, Polytope, convex_hull
from .ipf import preferred_blending_many
from .triangulation import (
    SimplicialComplexEmbedding,
    Triangulation,
    as_lifting,
    pulling_triangulation,
    realization_in_simplex,
    robust_regular_triangulation,
    validate_triangulation,
)

log = logging.getLogger(__name__)

BARY_TOL = 1e-12
MOMENT_ITER = 2000
MOMENT_GRID_2D = 41


@dataclass(frozen=True, eq=False)
class DegenerationSchedule:
    base_weights: WeightVector
    lam: object
    t_values: tuple

    def __post_init__(self):
        t = tuple(float(v) for v in self.t_values)
        if any(v < 1 for v in t) or any(b <= a for a, b in zip(t, t[1:])):
            raise DomainError("t values must be >= 1 and strictly increasing")
        object.__setattr__(self, "t_values", t)
        object.__setattr__(self, "lam", as_lifting(self.lam, len(self.base_weights)))

    def __iter__(self):
        for t in self.t_values:
            yield t, degenerate_weights(self.base_weights, self.lam, t)


@dataclass(frozen=True)
class DistanceReport:
    t: float
    sup_patch_to_complex: float
    sup_complex_to_patch: float
    samples: int

    @property
    def two_sided(self) -> float:
        return max(self.sup_patch_to_complex, self.sup_complex_to_patch)


class ConverseResult(NamedTuple):
    distance: float
    passes: bool
    recovered: Triangulation


def _check_t(t):
    if not t > 0:
        raise NonPositiveInput("t must be positive")


def curve_weights(m: int, t: float, schedule: str = "full") -> WeightVector:
    """w_i = t**(i(m-i)); the ``half`` schedule uses exponent i(m-i)/2."""
    _check_t(t)
    e = np.array([i * (m - i) for i in range(m + 1)], dtype=float)
    if schedule == "half":
        e = e / 2
    elif schedule != "full":
        raise ValueError(f"unknown schedule {schedule!r}")
    return WeightVector(e * math.log(t))


def degenerate_weights(w, lam, t) -> WeightVector:
    _check_t(t)
    lam = as_lifting(lam)
    w = as_weights(w, len(lam))
    return WeightVector(w.log + lam.array * math.log(t))


def curve_bound_t0(B, m: int, eps: float) -> float:
    """kappa * m / eps with kappa the largest control point norm."""
    if not eps > 0:
        raise NonPositiveInput("eps must be positive")
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    return float(np.linalg.norm(B, axis=1).max()) * m / eps


# --- sampling --------------------------------------------------------------

def barycentric_lattice(k: int, n: int) -> np.ndarray:
    """All points of the k-simplex with coordinates in (1/n)Z, shape (.., k+1)."""
    rows = []
    for cuts in combinations(range(n + k), k):
        prev, row = -1, []
        for c in cuts:
            row.append(c - prev - 1)
            prev = c
        row.append(n + k - 1 - prev)
        rows.append(row)
    return np.array(rows, dtype=float) / n


def sample_simplex(vertices, n: int) -> np.ndarray:
    vertices = np.asarray(vertices, dtype=float)
    return barycentric_lattice(len(vertices) - 1, n) @ vertices


def sample_domain(config: PointConfig, grid: int) -> np.ndarray:
    """Lattice samples of conv(A) including its boundary: ``grid`` evenly
    spaced points for d = 1, a barycentric grid with grid-1 subdivisions
    on each simplex of a triangulation of conv(A) otherwise."""
    if grid < 2:
        raise DomainError("grid must be at least 2")
    a = config.array
    if config.dim == 1:
        return np.linspace(a.min(), a.max(), grid)[:, None]
    tri = pulling_triangulation(config)
    pts = np.vstack([sample_simplex(a[list(s)], grid - 1) for s in tri])
    return np.unique(np.round(pts, 12), axis=0)


def sample_complex(complex_: SimplicialComplexEmbedding, n: int) -> np.ndarray:
    return np.vstack([sample_simplex(s, n) for s in complex_.simplices])


# --- distances -------------------------------------------------------------

def point_to_simplex_distance(points, simplex) -> np.ndarray:
    """Exact Euclidean distance from each row of ``points`` to the convex
    hull of the rows of ``simplex`` (possibly degenerate): project onto the
    affine hull of every affinely independent face and keep projections
    that land inside that face."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    S = np.atleast_2d(np.asarray(simplex, dtype=float))
    best = np.full(len(P), np.inf)
    for r in range(len(S)):
        for face in combinations(range(len(S)), r + 1):
            v0 = S[face[0]]
            E = (S[list(face[1:])] - v0).T
            if r:
                if np.linalg.matrix_rank(E) < r:
                    continue
                c = (P - v0) @ np.linalg.pinv(E).T
                inside = (c >= -BARY_TOL).all(axis=1) & (c.sum(axis=1) <= 1 + BARY_TOL)
                proj = v0 + c @ E.T
            else:
                inside = np.ones(len(P), dtype=bool)
                proj = np.broadcast_to(v0, P.shape)
            dist = np.linalg.norm(P - proj, axis=1)
            best = np.where(inside, np.minimum(best, dist), best)
    return best


def distance_to_complex(points, complex_: SimplicialComplexEmbedding) -> np.ndarray:
    P = np.atleast_2d(np.asarray(points, dtype=float))
    best = np.full(len(P), np.inf)
    for s in complex_.simplices:
        best = np.minimum(best, point_to_simplex_distance(P, s))
    return best


def patch_samples(config: PointConfig, poly: Polytope, w, B, grid: int,
                  moment_iter: int = MOMENT_ITER) -> np.ndarray:
    """Points of F_w(Delta): blend images of a domain grid, plus moment-map
    preimages of a (for d > 1 coarser) grid after ``moment_iter`` IPF
    sweeps."""
    B = as_controls(B, len(config))
    xs = sample_domain(config, grid)
    clouds = [blend(config, poly, w, xs) @ B]
    if moment_iter:
        ys = xs if config.dim == 1 else sample_domain(config, min(grid, MOMENT_GRID_2D))
        z, _ = preferred_blending_many(config, poly, w, ys, max_iter=moment_iter, strict=False)
        clouds.append(z @ B)
    return np.vstack(clouds)


def patch_complex_distance(config: PointConfig, poly: Polytope, w, B,
                           complex_: SimplicialComplexEmbedding, grid: int,
                           reverse_grid: int | None = None, t: float = float("nan"),
                           moment_iter: int = MOMENT_ITER) -> DistanceReport:
    """Two-sided sampled distance between the patch and a complex."""
    cloud = patch_samples(config, poly, w, B, grid, moment_iter)
    forward = float(distance_to_complex(cloud, complex_).max())
    reverse_grid = reverse_grid or grid - 1
    back = sample_complex(complex_, reverse_grid)
    reverse = float(cKDTree(cloud).query(back)[0].max())
    return DistanceReport(t, forward, reverse, len(cloud))


def schedule_distances(schedule: DegenerationSchedule, config: PointConfig, poly: Polytope,
                       B, complex_: SimplicialComplexEmbedding, grid: int, **kw) -> list:
    """DistanceReport for every t of the schedule; non-monotone forward
    distances are logged (only the limit is guaranteed)."""
    reports = [patch_complex_distance(config, poly, w, B, complex_, grid, t=t, **kw)
               for t, w in schedule]
    for a, b in zip(reports, reports[1:]):
        if b.sup_patch_to_complex > a.sup_patch_to_complex:
            log.warning("distance grew from %.3g (t=%g) to %.3g (t=%g)",
                        a.sup_patch_to_complex, a.t, b.sup_patch_to_complex, b.t)
    return reports


def converse_check(config: PointConfig, lam, T: Triangulation, t: float, grid: int,
                   poly: Polytope | None = None) -> ConverseResult:
    """Compare X_{A,w} with |T| inside the A-simplex for w = t**lambda.

    Passing means the two-sided distance is below 1/(2(d+1)); in that case
    the triangulation induced by lambda must be T.
    """
    validate_triangulation(config, T)
    if not t > 1:
        raise DomainError("converse check needs t > 1")
    lam = as_lifting(lam, len(config))
    poly = poly or convex_hull(config)
    n = len(config)
    w = degenerate_weights(WeightVector.ones(n), lam, t)
    report = patch_complex_distance(config, poly, w, np.eye(n),
                                    realization_in_simplex(T, n), grid, t=t)
    distance = report.two_sided
    passes = distance < 1.0 / (2 * (config.dim + 1))
    recovered = robust_regular_triangulation(config, lam)
    if passes and recovered != T:
        raise ConverseViolation(
            f"distance {distance:.3g} passes but lambda induces {recovered.to_list()}")
    return ConverseResult(distance, passes, recovered)
