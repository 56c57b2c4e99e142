"""Point configurations, convex hulls and orientation predicates.

Integer (and :class:`fractions.Fraction`) inputs are handled with exact
arithmetic; anything else goes through floating point with an absolute
zero tolerance (``eps``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations
from numbers import Integral, Rational

import numpy as np

from .errors import (
    ArityMismatch,
    DegenerateSpan,
    DimensionUnsupported,
    DuplicatePoints,
)

EPS = 1e-10
DUPLICATE_EPS = 1e-12


def _scalar(v):
    """Normalize a coordinate: integral values become ``int``."""
    if isinstance(v, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(v, Integral):
        return int(v)
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else v
    if isinstance(v, Rational):
        return Fraction(v.numerator, v.denominator)
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return int(v)
    return v


def is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _flat(rows):
    for r in rows:
        yield from r


def exact_det(rows):
    """Determinant by fraction-based Gaussian elimination."""
    m = [[Fraction(v) for v in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def det(rows, exact=None):
    rows = [list(r) for r in rows]
    if exact is None:
        exact = is_exact(_flat(rows))
    if not rows:
        return Fraction(1) if exact else 1.0
    if exact:
        return exact_det(rows)
    return float(np.linalg.det(np.asarray(rows, dtype=float)))


def sign(value, eps=EPS) -> int:
    if isinstance(value, (int, Fraction)):
        return (value > 0) - (value < 0)
    if abs(value) <= eps:
        return 0
    return 1 if value > 0 else -1


def exact_rank(rows) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                for c in range(col, ncols):
                    m[r][c] -= f * m[rank][c]
        rank += 1
    return rank


def rank(rows, exact=None, eps=EPS) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    if exact is None:
        exact = is_exact(_flat(rows))
    if exact:
        return exact_rank(rows)
    return int(np.linalg.matrix_rank(np.asarray(rows, dtype=float), tol=eps))


def solve(a, b, exact=None):
    """Solve the square system ``a @ x = b``; exact when the data allow it."""
    if exact is None:
        exact = is_exact(_flat(a)) and is_exact(b)
    if not exact:
        return list(np.linalg.solve(np.asarray(a, float), np.asarray(b, float)))
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [vr - f * vc for vr, vc in zip(m[r], m[col])]
    return [row[n] for row in m]


def affine_rank(points, exact=None, eps=EPS) -> int:
    points = [tuple(p) for p in points]
    if len(points) < 2:
        return 0
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    return rank(diffs, exact=exact, eps=eps)


@dataclass(frozen=True)
class PointConfig:
    """An ordered, duplicate-free exponent set that affinely spans R^dim."""

    points: tuple
    dim: int
    eps: float = field(default=EPS, compare=False)

    def __post_init__(self):
        pts = tuple(tuple(_scalar(v) for v in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if any(len(p) != self.dim for p in pts):
            raise ArityMismatch(f"every point must have {self.dim} coordinates")
        if self.exact:
            if len(set(pts)) != len(pts):
                raise DuplicatePoints("configuration contains duplicate points")
        else:
            arr = self.array
            for i in range(len(pts)):
                gaps = np.abs(arr[i + 1:] - arr[i]).max(axis=1) if i + 1 < len(pts) else []
                if len(gaps) and np.min(gaps) <= DUPLICATE_EPS:
                    raise DuplicatePoints("configuration contains duplicate points")
        if affine_rank(pts, exact=self.exact, eps=self.eps) != self.dim:
            raise DegenerateSpan(f"points do not affinely span R^{self.dim}")

    @classmethod
    def from_points(cls, points, eps=EPS):
        points = [tuple(np.atleast_1d(p).tolist()) if isinstance(p, np.ndarray) else
                  (tuple(p) if hasattr(p, "__len__") else (p,)) for p in points]
        return cls(tuple(points), len(points[0]), eps)

    @classmethod
    def from_dict(cls, data: dict, eps=EPS):
        return cls(tuple(tuple(p) for p in data["points"]), int(data["dim"]), eps)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": [[_jsonable(v) for v in p] for p in self.points]}

    def __len__(self):
        return len(self.points)

    @cached_property
    def exact(self) -> bool:
        return is_exact(_flat(self.points))

    @cached_property
    def integral(self) -> bool:
        return all(isinstance(v, int) for v in _flat(self.points))

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([[float(v) for v in p] for p in self.points], dtype=float)

    def subset(self, indices):
        return [self.points[i] for i in indices]


def _jsonable(v):
    return v if isinstance(v, (int, float)) else float(v)


@dataclass(frozen=True)
class Polytope:
    """Facet description ``h_i(x) = normals[i] . x + offsets[i] >= 0``.

    ``incidences[i]`` holds the indices of the source points on facet i and
    ``vertices`` the indices of the points that are vertices of the hull.
    """

    normals: tuple
    offsets: tuple
    vertices: tuple
    incidences: tuple

    @property
    def dim(self) -> int:
        return len(self.normals[0])

    def __len__(self):
        return len(self.normals)

    @cached_property
    def normal_array(self) -> np.ndarray:
        return np.array([[float(v) for v in n] for n in self.normals], dtype=float)

    @cached_property
    def offset_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.offsets], dtype=float)

    def evaluate(self, x) -> np.ndarray:
        """Facet functionals at ``x`` of shape (..., d); returns (..., facets)."""
        x = np.asarray(x, dtype=float)
        return x @ self.normal_array.T + self.offset_array

    def exponents(self, config: PointConfig, snap=1e-12) -> np.ndarray:
        """Matrix of ``h_i(a)``; rows indexed by points, columns by facets."""
        if config.exact and is_exact(_flat(self.normals)) and is_exact(self.offsets):
            e = np.array([[float(sum(v * a for v, a in zip(n, p)) + c)
                           for n, c in zip(self.normals, self.offsets)]
                          for p in config.points])
        else:
            e = self.evaluate(config.array)
        e[np.abs(e) < snap] = 0.0
        return e

    def face_point_sets(self, n_points: int) -> list:
        """Point sets of all nonempty faces, closing facet incidences under
        intersection; the whole configuration is included."""
        faces = {frozenset(range(n_points))}
        frontier = set(frozenset(s) for s in self.incidences)
        while frontier:
            faces |= frontier
            nxt = set()
            for f in frontier:
                for g in self.incidences:
                    h = f & g
                    if h and h not in faces:
                        nxt.add(h)
            frontier = nxt
        return sorted(faces, key=lambda s: (len(s), sorted(s)))


def _facet_normal(base, exact):
    """Normal of the hyperplane through the points ``base`` (len == ambient
    dimension) via signed cofactors of the difference matrix."""
    p0 = base[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in base[1:]]
    n = len(p0)
    normal = []
    for k in range(n):
        minor = [row[:k] + row[k + 1:] for row in diffs]
        normal.append((-1) ** k * det(minor, exact=exact))
    return normal


def hull_facets(points, exact=None, eps=EPS):
    """Facets of conv(points) in any ambient dimension by brute force over
    hyperplanes through affinely independent point subsets.

    Returns a list of ``(normal, offset, on_set)`` with inward normals, so
    that ``normal . p + offset >= 0`` on every point.  Float normals are
    unit length.  Desk scale only: cost is C(n, dim) * n.
    """
    points = [tuple(p) for p in points]
    dim = len(points[0])
    if exact is None:
        exact = is_exact(_flat(points))
    if not exact:
        arr = np.asarray(points, dtype=float)
    found = {}
    covered = []
    for base_idx in combinations(range(len(points)), dim):
        key = frozenset(base_idx)
        if any(key <= s for s in covered):
            continue
        normal = _facet_normal([points[i] for i in base_idx], exact)
        if exact:
            if all(v == 0 for v in normal):
                continue
            offset = -sum(v * x for v, x in zip(normal, points[base_idx[0]]))
            vals = [sum(v * x for v, x in zip(normal, p)) + offset for p in points]
            pos = any(v > 0 for v in vals)
            neg = any(v < 0 for v in vals)
            if pos and neg:
                continue
            if neg:
                normal = [-v for v in normal]
                offset = -offset
            on = frozenset(i for i, v in enumerate(vals) if v == 0)
        else:
            nv = np.asarray(normal, dtype=float)
            norm = np.linalg.norm(nv)
            if norm <= eps:
                continue
            nv = nv / norm
            offset = -float(nv @ arr[base_idx[0]])
            vals = arr @ nv + offset
            pos = np.any(vals > eps)
            neg = np.any(vals < -eps)
            if pos and neg:
                continue
            if neg:
                nv = -nv
                offset = -offset
            on = frozenset(np.flatnonzero(np.abs(vals) <= eps).tolist())
            normal = nv.tolist()
        if len(on) == len(points):
            continue
        if on not in found:
            found[on] = (normal, offset, on)
            covered.append(on)
    return list(found.values())


def _primitive(normal, offset):
    fr = [Fraction(v) for v in normal] + [Fraction(offset)]
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr), 1)
    ints = [int(f * lcm) for f in fr]
    g = reduce(math.gcd, (abs(v) for v in ints[:-1]), 0) or 1
    ints = [v // g if v % g == 0 else Fraction(v, g) for v in ints]
    return tuple(_scalar(v) for v in ints[:-1]), _scalar(ints[-1])


def normalize_facets(poly: Polytope, config: PointConfig) -> Polytope:
    """Rescale every facet pair (v_i, c_i): primitive integer normals for
    integral configurations, unit Euclidean normals otherwise.  Facets are
    ordered by decreasing normal (lexicographic)."""
    facets = []
    for n, c, inc in zip(poly.normals, poly.offsets, poly.incidences):
        if config.integral:
            n2, c2 = _primitive(n, c)
        else:
            nv = np.asarray([float(v) for v in n])
            s = np.linalg.norm(nv)
            n2 = tuple(float(v) for v in nv / s)
            c2 = float(c) / s
        facets.append((n2, c2, inc))
    facets.sort(key=lambda f: (tuple(-float(v) for v in f[0]), float(f[1])))
    return Polytope(
        normals=tuple(f[0] for f in facets),
        offsets=tuple(f[1] for f in facets),
        vertices=poly.vertices,
        incidences=tuple(f[2] for f in facets),
    )


def convex_hull(config: PointConfig) -> Polytope:
    """Facet description of conv(config) with normalized inward normals."""
    if config.dim > 3:
        raise DimensionUnsupported("convex hulls are supported for d <= 3 only")
    if affine_rank(config.points, exact=config.exact, eps=config.eps) != config.dim:
        raise DegenerateSpan("points do not affinely span the ambient space")
    raw = hull_facets(config.points, exact=config.exact, eps=config.eps)
    incid = [f[2] for f in raw]
    vertices = []
    for i in range(len(config)):
        containing = [s for s in incid if i in s]
        if containing and frozenset.intersection(*containing) == {i}:
            vertices.append(i)
    vertices.sort(key=lambda i: tuple(float(v) for v in config.points[i]))
    poly = Polytope(
        normals=tuple(tuple(f[0]) for f in raw),
        offsets=tuple(f[1] for f in raw),
        vertices=tuple(vertices),
        incidences=tuple(incid),
    )
    return normalize_facets(poly, config)


def orientation(points, eps=EPS) -> int:
    """Sign of det[p_1 - p_0, ..., p_d - p_0] for d+1 points in R^d."""
    points = [tuple(_scalar(v) for v in p) for p in points]
    if not points:
        raise ArityMismatch("orientation needs d+1 points")
    d = len(points[0])
    if len(points) != d + 1 or any(len(p) != d for p in points):
        raise ArityMismatch(f"orientation needs exactly {d + 1} points in R^{d}")
    p0 = points[0]
    rows = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    return sign(det(rows), eps)


def simplex_volume(points):
    """Unsigned d-volume of the simplex spanned by d+1 points in R^d."""
    points = [tuple(p) for p in points]
    d = len(points[0])
    p0 = points[0]
    rows = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    v = det(rows)
    return abs(v) / math.factorial(d)


def barycentric(simplex, p):
    """Barycentric coordinates of ``p`` w.r.t. d+1 affinely independent
    points of R^d (exact on exact data)."""
    simplex = [tuple(s) for s in simplex]
    d = len(p)
    a = [[1] * (d + 1)] + [[s[k] for s in simplex] for k in range(d)]
    b = [1] + list(p)
    return solve(a, b)
