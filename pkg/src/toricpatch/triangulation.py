"""Regular triangulations from lifting functions, regularity certificates
and control polytopes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import (
    DegenerateLift,
    InvalidTriangulation,
    NonGenericLifting,
    SizeMismatch,
)
from .geometry import (
    EPS,
    PointConfig,
    _scalar,
    affine_rank,
    barycentric,
    hull_facets,
    is_exact,
    orientation,
    rank,
    sign,
    simplex_volume,
)
from .lp import linprog

SLACK_TOL = 1e-9
VOLUME_RTOL = 1e-9


@dataclass(frozen=True)
class LiftingFunction:
    """A height for every point of the configuration, by index."""

    values: tuple

    def __post_init__(self):
        vals = tuple(_scalar(v) for v in self.values)
        if not all(math.isfinite(float(v)) for v in vals):
            raise DegenerateLift("lifting values must be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def exact(self) -> bool:
        return is_exact(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])


def as_lifting(lam, n=None) -> LiftingFunction:
    if not isinstance(lam, LiftingFunction):
        lam = LiftingFunction(tuple(np.asarray(lam).tolist()) if isinstance(lam, np.ndarray) else tuple(lam))
    if n is not None and len(lam) != n:
        raise SizeMismatch(f"expected {n} lifting values, got {len(lam)}")
    return lam


@dataclass(frozen=True)
class Triangulation:
    """A set of simplices, each a sorted tuple of point indices."""

    simplices: tuple

    def __post_init__(self):
        simp = tuple(sorted({tuple(sorted(int(i) for i in s)) for s in self.simplices}))
        object.__setattr__(self, "simplices", simp)

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    @property
    def used_points(self) -> frozenset:
        return frozenset(i for s in self.simplices for i in s)

    @property
    def dim(self) -> int:
        return len(self.simplices[0]) - 1

    def to_list(self) -> list:
        return [list(s) for s in self.simplices]


@dataclass(frozen=True, eq=False)
class SimplicialComplexEmbedding:
    """Vertex coordinates of every simplex of ``combinatorics``."""

    simplices: tuple
    combinatorics: Triangulation

    @property
    def array(self) -> np.ndarray:
        return np.stack(self.simplices)

    @property
    def ambient_dim(self) -> int:
        return self.simplices[0].shape[1]


def _lifted(config: PointConfig, lam: LiftingFunction):
    return [p + (v,) for p, v in zip(config.points, lam.values)]


def regular_triangulation(config: PointConfig, lam) -> Triangulation:
    """Project the upper facets of conv{(a, lambda(a))} back to R^d."""
    lam = as_lifting(lam, len(config))
    exact = config.exact and lam.exact
    d = config.dim
    lifted = _lifted(config, lam)
    r = affine_rank(lifted, exact=exact, eps=config.eps)
    if r < d:
        raise DegenerateLift("lifted points do not span")
    if r == d:
        # affine lift: the single upper face is conv(A) itself
        if len(config) == d + 1:
            return Triangulation((tuple(range(d + 1)),))
        raise NonGenericLifting("affine lifting: the only upper face is all of conv(A)")
    simplices = []
    for normal, _, on in hull_facets(lifted, exact=exact, eps=config.eps):
        # inward normal pointing down == outward normal pointing up
        if sign(normal[-1], config.eps) >= 0:
            continue
        if len(on) > d + 1:
            raise NonGenericLifting(f"upper facet on points {sorted(on)} is not a simplex")
        simplices.append(tuple(sorted(on)))
    return Triangulation(tuple(simplices))


def perturb_lifting(lam, config: PointConfig) -> LiftingFunction:
    """lambda_a + eps * index(a)**2 with eps = 1e-7 * spread (1e-7 if flat)."""
    lam = as_lifting(lam, len(config))
    vals = lam.values
    if lam.exact:
        spread = max(vals) - min(vals)
        eps = Fraction(1, 10**7) * (spread if spread else 1)
    else:
        spread = max(map(float, vals)) - min(map(float, vals))
        eps = 1e-7 * (spread if spread > 0 else 1.0)
    return LiftingFunction(tuple(v + eps * i * i for i, v in enumerate(vals)))


def robust_regular_triangulation(config: PointConfig, lam) -> Triangulation:
    """regular_triangulation, retrying once with a perturbed lift."""
    try:
        return regular_triangulation(config, lam)
    except NonGenericLifting:
        return regular_triangulation(config, perturb_lifting(lam, config))


# --- pulling triangulation (hull volumes and domain sampling) -------------

def _spanning_columns(points, k, exact, eps):
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    cols = []
    for c in range(len(p0)):
        trial = cols + [c]
        if rank([[row[j] for j in trial] for row in diffs], exact=exact, eps=eps) == len(trial):
            cols = trial
        if len(cols) == k:
            break
    return cols


def _pull(points, idx, exact, eps):
    pts = [points[i] for i in idx]
    k = affine_rank(pts, exact=exact, eps=eps)
    if k == 0:
        return [(idx[0],)]
    if len(idx) == k + 1:
        return [tuple(idx)]
    cols = _spanning_columns(pts, k, exact, eps)
    proj = [tuple(p[c] for c in cols) for p in pts]
    if k == 1:
        vals = [float(p[0]) for p in proj]
        return [tuple(sorted((idx[int(np.argmin(vals))], idx[int(np.argmax(vals))])))]
    apex = idx[0]
    out = []
    for _, _, on in hull_facets(proj, exact=exact, eps=eps):
        face = tuple(sorted(idx[j] for j in on))
        if apex in face:
            continue
        out.extend(tuple(sorted((apex,) + s)) for s in _pull(points, face, exact, eps))
    return out


def pulling_triangulation(config: PointConfig) -> Triangulation:
    """Triangulation of conv(A) obtained by recursively coning from the
    lowest-index point of every face."""
    return Triangulation(tuple(_pull(config.points, tuple(range(len(config))),
                                     config.exact, config.eps)))


def triangulation_volume(config: PointConfig, T: Triangulation):
    return sum(simplex_volume(config.subset(s)) for s in T)


def hull_volume(config: PointConfig):
    return triangulation_volume(config, pulling_triangulation(config))


# --- validity ------------------------------------------------------------

def _boxes_disjoint(config, s1, s2):
    a, b = config.array[list(s1)], config.array[list(s2)]
    return bool(np.any(a.max(0) < b.min(0) - EPS) or np.any(b.max(0) < a.min(0) - EPS))


def _improper_pair(config: PointConfig, s1, s2) -> bool:
    """Do conv(s1) and conv(s2) meet outside conv(s1 & s2)?

    Equivalently: is there a nonzero affine dependence whose positive part
    lives on s1 and negative part on s2 (common vertices either sign)?
    """
    common = sorted(set(s1) & set(s2))
    d = config.dim
    if _boxes_disjoint(config, s1, s2):
        return False
    if len(common) == d:
        (a,), (b,) = set(s1) - set(common), set(s2) - set(common)
        base = config.subset(common)
        oa = orientation(base + [config.points[a]], config.eps)
        ob = orientation(base + [config.points[b]], config.eps)
        return oa * ob >= 0
    only1 = [i for i in s1 if i not in common]
    only2 = [i for i in s2 if i not in common]
    # columns: lambda on only1 (>= 0), mu on only2 (>= 0), common split +/-
    cols = [(i, 1) for i in only1] + [(i, -1) for i in only2]
    cols += [(i, 1) for i in common] + [(i, -1) for i in common]
    pts = config.points
    A_eq = [[sgn * pts[i][k] for i, sgn in cols] for k in range(d)]
    A_eq.append([sgn for _, sgn in cols])
    A_eq.append([1 if j >= len(only1) and j < len(only1) + len(only2) else 0
                 for j in range(len(cols))])
    b_eq = [0] * (d + 1) + [1]
    res = linprog([0] * len(cols), A_eq=A_eq, b_eq=b_eq, exact=config.exact)
    return res.status == "optimal"


def validate_triangulation(config: PointConfig, T: Triangulation) -> None:
    """Raise InvalidTriangulation unless T triangulates conv(A)."""
    d, n = config.dim, len(config)
    if not len(T):
        raise InvalidTriangulation("empty triangulation")
    for s in T:
        if len(s) != d + 1:
            raise InvalidTriangulation(f"simplex {s} does not have {d + 1} vertices")
        if min(s) < 0 or max(s) >= n:
            raise InvalidTriangulation(f"simplex {s} indexes outside the configuration")
        if orientation(config.subset(s), config.eps) == 0:
            raise InvalidTriangulation(f"simplex {s} is degenerate")
    total, hull = triangulation_volume(config, T), hull_volume(config)
    if config.exact:
        ok = total == hull
    else:
        ok = abs(total - hull) <= VOLUME_RTOL * max(1.0, abs(hull))
    if not ok:
        raise InvalidTriangulation(f"simplex volumes sum to {total}, hull volume is {hull}")
    for s1, s2 in combinations(T.simplices, 2):
        if _improper_pair(config, s1, s2):
            raise InvalidTriangulation(f"simplices {s1} and {s2} intersect improperly")


# --- regularity ------------------------------------------------------------

def is_regular(config: PointConfig, T: Triangulation, exact=None):
    """Find heights making T the upper-hull subdivision, or prove none exist.

    Maximizes s subject to s <= 1 and, for every simplex S and point a not
    in S, lambda(a) + s <= (affine interpolation of lambda on S)(a).  The
    constraints are homogeneous, so T is regular iff the optimum is
    positive.  Heights on the first simplex are pinned to zero (adding an
    affine function changes nothing).  Exact rational arithmetic is used on
    exact configurations, so a non-positive optimum is a hard certificate.

    Returns ``(True, LiftingFunction)`` or ``(False, None)``.
    """
    T = T if isinstance(T, Triangulation) else Triangulation(tuple(T))
    validate_triangulation(config, T)
    if exact is None:
        exact = config.exact
    n = len(config)
    pinned = set(T.simplices[0])
    free = [i for i in range(n) if i not in pinned]
    col = {i: 2 * j for j, i in enumerate(free)}
    nvar = 2 * len(free) + 2
    s_col = nvar - 2
    zero = Fraction(0) if exact else 0.0
    rows = []
    for S in T:
        verts = config.subset(S)
        for a in range(n):
            if a in S:
                continue
            beta = barycentric(verts, config.points[a])
            row = [zero] * nvar
            coef = {a: 1}
            for j, b in zip(S, beta):
                coef[j] = coef.get(j, 0) - b
            for i, v in coef.items():
                if i in col:
                    row[col[i]] += v
                    row[col[i] + 1] -= v
            row[s_col], row[s_col + 1] = 1, -1
            rows.append(row)
    cap = [zero] * nvar
    cap[s_col], cap[s_col + 1] = 1, -1
    rows.append(cap)
    b_ub = [0] * (len(rows) - 1) + [1]
    c = [0] * nvar
    c[s_col], c[s_col + 1] = 1, -1
    res = linprog(c, A_ub=rows, b_ub=b_ub, exact=exact)
    if res.status != "optimal":
        raise RuntimeError(f"regularity LP ended with status {res.status}")
    threshold = 0 if exact else SLACK_TOL
    if res.value <= threshold:
        return False, None
    heights = [zero] * n
    for i in free:
        heights[i] = res.x[col[i]] - res.x[col[i] + 1]
    return True, LiftingFunction(tuple(heights))


# --- control polytopes -----------------------------------------------------

def control_polytope(T: Triangulation, B) -> SimplicialComplexEmbedding:
    """Image of every simplex of T under a -> b_a."""
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    if max(T.used_points) >= len(B):
        raise SizeMismatch("triangulation indexes beyond the control points")
    return SimplicialComplexEmbedding(tuple(B[list(s)] for s in T), T)


def realization_in_simplex(T: Triangulation, n_points: int) -> SimplicialComplexEmbedding:
    """|T| inside the A-simplex: control_polytope with indicator vectors."""
    return control_polytope(T, np.eye(n_points))
