"""Toric Bezier blending functions and the rational patch map.

Evaluation happens in log space so that huge weights (toric degenerations
push them to t**lambda for t around 1e6) never overflow: the numerator and
denominator of the patch formula share the factor removed by the max shift.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import NonPositiveInput, OutsideDomain, SizeMismatch
from .geometry import PointConfig, Polytope

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Positive weights, stored by their logarithms."""

    log: np.ndarray

    @classmethod
    def from_values(cls, values):
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or np.any(~(v > 0)):
            raise NonPositiveInput("weights must be strictly positive")
        return cls(np.log(v))

    @classmethod
    def ones(cls, n):
        return cls(np.zeros(n))

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log)

    def __len__(self):
        return len(self.log)

    def __mul__(self, other):
        return WeightVector(self.log + as_weights(other).log)

    def inverse(self):
        return WeightVector(-self.log)


def as_weights(w, n=None) -> WeightVector:
    if w is None:
        if n is None:
            raise ValueError("weight count unknown")
        return WeightVector.ones(n)
    if not isinstance(w, WeightVector):
        w = WeightVector.from_values(w)
    if n is not None and len(w) != n:
        raise SizeMismatch(f"expected {n} weights, got {len(w)}")
    return w


def as_controls(b, n_points) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.ndim == 1:
        b = b[:, None]
    if b.shape[0] != n_points:
        raise SizeMismatch(f"expected {n_points} control points, got {b.shape[0]}")
    return b


def _facet_values(poly: Polytope, x, tol):
    x = np.asarray(x, dtype=float)
    h = poly.evaluate(x)
    if np.any(h < -tol):
        raise OutsideDomain("evaluation point lies outside the domain polytope")
    return np.maximum(h, 0.0)


def log_toric_basis(config: PointConfig, poly: Polytope, x, tol=BOUNDARY_TOL):
    """log of the unnormalized blending functions; -inf where one vanishes."""
    h = _facet_values(poly, x, tol)
    e = poly.exponents(config)
    # 0**0 == 1: a zero exponent contributes nothing even when h vanishes
    with np.errstate(divide="ignore", invalid="ignore"):
        logh = np.log(h)
        terms = np.where(e > 0, e * logh[..., None, :], 0.0)
    return terms.sum(axis=-1)


def toric_basis(config: PointConfig, poly: Polytope, x, tol=BOUNDARY_TOL):
    """beta_a(x) = prod_i h_i(x) ** h_i(a) for every a, unnormalized."""
    return np.exp(log_toric_basis(config, poly, x, tol))


def _normalize_log(logz):
    shift = np.max(logz, axis=-1, keepdims=True)
    z = np.exp(logz - shift)
    return z / z.sum(axis=-1, keepdims=True)


def blend(config: PointConfig, poly: Polytope, w, x, tol=BOUNDARY_TOL):
    """Normalized weighted blending vector, a point of the A-simplex."""
    w = as_weights(w, len(config))
    return _normalize_log(w.log + log_toric_basis(config, poly, x, tol))


def patch_eval(config: PointConfig, poly: Polytope, w, controls, x, tol=BOUNDARY_TOL):
    """The rational patch F(x) = sum_a blend_a(x) b_a."""
    b = as_controls(controls, len(config))
    return blend(config, poly, w, x, tol) @ b


def bernstein_weights(m: int, shape: str = "curve") -> WeightVector:
    """Binomial (curve) or trinomial (triangle) coefficients, ordered like
    :func:`toricpatch.configs.curve_config` / ``triangle_config``."""
    if m < 1:
        raise ValueError("degree must be positive")
    if shape == "curve":
        vals = [comb(m, i) for i in range(m + 1)]
    elif shape == "triangle":
        vals = [factorial(m) // (factorial(i) * factorial(j) * factorial(m - i - j))
                for i in range(m + 1) for j in range(m + 1 - i)]
    else:
        raise ValueError(f"unknown shape {shape!r}")
    return WeightVector.from_values(vals)
