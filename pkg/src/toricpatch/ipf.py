"""Iterative proportional fitting: inverting the tautological projection.

The configuration is first moved into the standard simplex (translate so
every coordinate is at least one, scale by ``t``) and lifted to
``a+ = (1 - sum(a), a)``.  Each sweep multiplies ``p_a`` by
``prod_j (y_j / pi_j(p)) ** a+_j`` and renormalizes.  Every iterate stays
on the toric model w.X_A, so even an unconverged iterate is a genuine point
of the patch; only its moment image is off.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .blending import as_weights
from .errors import MaxIterationsExceeded, NotInterior, OutsideDomain
from .geometry import PointConfig, Polytope, convex_hull

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000
INTERIOR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HomogenizedConfig:
    config: PointConfig
    poly: Polytope
    plus_points: np.ndarray
    translation: np.ndarray
    scale: float

    def forward(self, y):
        """Homogenized coordinates (1 - sum(psi0(y)), psi0(y))."""
        y0 = self.scale * (np.asarray(y, dtype=float) + self.translation)
        return np.concatenate([1.0 - y0.sum(axis=-1, keepdims=True), y0], axis=-1)

    def backward(self, yplus):
        return np.asarray(yplus, dtype=float)[..., 1:] / self.scale - self.translation


@dataclass
class IpfResult:
    p: np.ndarray
    iterations: int
    final_error: float
    converged: bool
    history: tuple = ()


def homogenize(config: PointConfig, poly: Polytope | None = None) -> HomogenizedConfig:
    a = config.array
    b = 1.0 - a.min(axis=0)
    t = 1.0 / (2.0 * (a + b).sum(axis=1).max())
    scaled = t * (a + b)
    plus = np.hstack([1.0 - scaled.sum(axis=1, keepdims=True), scaled])
    return HomogenizedConfig(config, poly or convex_hull(config), plus, b, t)


def _gis(plus, logw, targets, tol, max_iter, track=0):
    """Vectorized generalized iterative scaling over rows of ``targets``.

    Returns (p, iterations, errors, converged, history); ``history`` keeps
    the error of row 0 over the last ``track`` sweeps.
    """
    targets = np.atleast_2d(targets)
    n = len(targets)
    logt = np.log(targets)
    logp = np.tile(logw, (n, 1))
    iters = np.zeros(n, dtype=int)
    errors = np.full(n, np.inf)
    active = np.ones(n, dtype=bool)
    history = []
    p = None
    for k in range(max_iter + 1):
        lp = logp[active]
        lp = lp - lp.max(axis=1, keepdims=True)
        pa = np.exp(lp)
        total = pa.sum(axis=1, keepdims=True)
        pa /= total
        lp -= np.log(total)
        pi = pa @ plus
        err = np.abs(pi - targets[active]).max(axis=1)
        idx = np.flatnonzero(active)
        errors[idx] = err
        iters[idx] = k
        if track and active[0]:
            history.append(float(err[0]))
            history = history[-track:]
        done = err < tol
        if p is None:
            p = np.empty((n, plus.shape[0]))
        p[idx] = pa
        if k == max_iter:
            break
        still = idx[~done]
        active[idx[done]] = False
        if not len(still):
            break
        keep = ~done
        logp[still] = lp[keep] + (logt[still] - np.log(pi[keep])) @ plus.T
    return p, iters, errors, errors < tol, tuple(history)


def ipf_solve(hconfig: HomogenizedConfig, w, y, tol=DEFAULT_TOL,
              max_iter=DEFAULT_MAX_ITER) -> IpfResult:
    """The unique p on w.X_A whose moment image is ``y`` (interior only).

    An unconverged run returns the last iterate with ``converged=False``.
    """
    y = np.asarray(y, dtype=float)
    if np.any(hconfig.poly.evaluate(y) <= INTERIOR_TOL):
        raise NotInterior("IPF target must lie in the interior of the polytope")
    w = as_weights(w, len(hconfig.config))
    target = hconfig.forward(y)
    p, iters, errs, ok, hist = _gis(hconfig.plus_points, w.log, target, tol, max_iter, track=10)
    if len(hist) > 1 and np.any(np.diff(hist) > 0):
        log.info("IPF error not monotone over the last sweeps: %s", hist)
    return IpfResult(p[0], int(iters[0]), float(errs[0]), bool(ok[0]), hist)


def preferred_blending_many(config: PointConfig, poly: Polytope, w, ys,
                            tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                            hconfig: HomogenizedConfig | None = None, strict=True):
    """Linear-precision blending vectors at many points of the polytope.

    Points on the boundary are solved on the configuration of the smallest
    face containing them.  Returns (z, converged).
    """
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    w = as_weights(w, len(config))
    hc = hconfig or homogenize(config, poly)
    h = poly.evaluate(ys)
    if np.any(h < -INTERIOR_TOL):
        raise OutsideDomain("query point outside the polytope")
    on = h <= INTERIOR_TOL
    z = np.zeros((len(ys), len(config)))
    ok = np.ones(len(ys), dtype=bool)
    groups = {}
    for i, row in enumerate(on):
        groups.setdefault(tuple(np.flatnonzero(row)), []).append(i)
    everything = frozenset(range(len(config)))
    for facets, rows in groups.items():
        support = everything
        for f in facets:
            support = support & poly.incidences[f]
        cols = np.array(sorted(support))
        rows = np.array(rows)
        if len(cols) == 1:
            z[rows, cols[0]] = 1.0
            continue
        targets = hc.forward(ys[rows])
        p, _, _, conv, _ = _gis(hc.plus_points[cols], w.log[cols], targets, tol, max_iter)
        z[np.ix_(rows, cols)] = p
        ok[rows] = conv
    if strict and not ok.all():
        raise MaxIterationsExceeded(
            f"IPF did not reach tolerance {tol} for {int((~ok).sum())} point(s)", (z, ok))
    return z, ok


def preferred_blending(config: PointConfig, poly: Polytope, w, y,
                       tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Blending vector at ``y`` with linear precision: sum_a z_a a == y."""
    z, _ = preferred_blending_many(config, poly, w, np.asarray(y, dtype=float)[None, :],
                                   tol, max_iter)
    return z[0]
