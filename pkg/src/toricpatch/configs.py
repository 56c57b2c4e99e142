"""Standard exponent sets used by the examples, tests and the CLI."""
from .geometry import PointConfig


def curve_config(m: int) -> PointConfig:
    """{0, 1, ..., m} on the line."""
    return PointConfig(tuple((i,) for i in range(m + 1)), 1)


def triangle_config(m: int) -> PointConfig:
    """Lattice points of the m-th dilate of the unit triangle, (i, j) in
    lexicographic order."""
    return PointConfig(tuple((i, j) for i in range(m + 1) for j in range(m + 1 - i)), 2)


def square_config() -> PointConfig:
    return PointConfig(((0, 0), (1, 0), (0, 1), (1, 1)), 2)


def cube_config() -> PointConfig:
    return PointConfig(tuple((i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1)), 3)


def pinwheel_config() -> PointConfig:
    """Outer triangle 4*unit triangle with an inner triangle; the classic
    non-regular triangulation lives on these six points."""
    return PointConfig(((0, 0), (4, 0), (0, 4), (1, 1), (2, 1), (1, 2)), 2)


# Outer vertices 0,1,2 and inner vertices 3,4,5; inner edge 3-4 is parallel
# to outer edge 0-1, 4-5 to 1-2 and 5-3 to 2-0.  Every trapezoid between the
# two triangles is cut by the diagonal rotating the same way.
PINWHEEL_SIMPLICES = (
    (3, 4, 5),
    (0, 1, 4), (0, 3, 4),
    (1, 2, 5), (1, 4, 5),
    (0, 2, 3), (2, 3, 5),
)
