"""Input parsing and artifact writers (CSV, JSON, SVG, OBJ).

Every input is a JSON document.  Writers are deterministic: no
timestamps, fixed number formatting, ``\\n`` line endings.
"""
from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from .configs import cube_config, curve_config, pinwheel_config, square_config, triangle_config
from .errors import ParseError
from .geometry import PointConfig

FIXTURES = {
    "curve": curve_config,
    "triangle": triangle_config,
    "square": lambda: square_config(),
    "cube": lambda: cube_config(),
    "pinwheel": lambda: pinwheel_config(),
}


# --- reading -------------------------------------------------------------

def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"{path}: no such file") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _field(doc, key, path):
    """``doc[key]`` for an object, ``doc`` itself for a bare array."""
    if isinstance(doc, list):
        return doc
    if isinstance(doc, dict) and key in doc:
        return doc[key]
    raise ParseError(f"{path}: expected an array or an object with {key!r}")


def _numbers(values, path, what):
    def check(v):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"{path}: {what} must be numbers, got {v!r}")
        if not math.isfinite(v):
            raise ParseError(f"{path}: {what} must be finite")
        return v
    if not isinstance(values, list):
        raise ParseError(f"{path}: {what} must be an array")
    return [check(v) for v in values]


def _rows(values, path, what):
    if not isinstance(values, list) or not values:
        raise ParseError(f"{path}: {what} must be a nonempty array")
    rows = [_numbers(r if isinstance(r, list) else [r], path, what) for r in values]
    if len({len(r) for r in rows}) != 1:
        raise ParseError(f"{path}: {what} have inconsistent lengths")
    return rows


def read_config(path) -> PointConfig:
    """``{"dim": d, "points": [...]}`` or ``{"fixture": name, "degree": m}``."""
    doc = load_json(path)
    if isinstance(doc, dict) and "fixture" in doc:
        name = doc["fixture"]
        if name not in FIXTURES:
            raise ParseError(f"{path}: unknown fixture {name!r}")
        if name in ("curve", "triangle"):
            degree = doc.get("degree")
            if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
                raise ParseError(f"{path}: fixture {name!r} needs a positive integer 'degree'")
            return FIXTURES[name](degree)
        return FIXTURES[name]()
    rows = _rows(_field(doc, "points", path), path, "points")
    dim = doc.get("dim", len(rows[0])) if isinstance(doc, dict) else len(rows[0])
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise ParseError(f"{path}: 'dim' must be an integer")
    return PointConfig(tuple(tuple(r) for r in rows), dim)


def read_controls(path) -> np.ndarray:
    return np.array(_rows(_field(load_json(path), "points", path), path, "control points"), dtype=float)


def read_vector(path, key) -> list:
    return _numbers(_field(load_json(path), key, path), path, key)


def read_weights(path):
    """Positive weights, either ``{"weights": [...]}`` or ``{"log_weights": [...]}``."""
    from .blending import WeightVector, as_weights

    doc = load_json(path)
    if isinstance(doc, dict) and "log_weights" in doc:
        return WeightVector(np.array(_numbers(doc["log_weights"], path, "log_weights"), dtype=float))
    return as_weights(_numbers(_field(doc, "weights", path), path, "weights"))


def read_lifting(path):
    from .triangulation import LiftingFunction

    return LiftingFunction(tuple(read_vector(path, "lambda")))


def read_triangulation(path):
    from .triangulation import Triangulation

    simplices = _field(load_json(path), "simplices", path)
    if not isinstance(simplices, list) or not simplices:
        raise ParseError(f"{path}: simplices must be a nonempty array")
    out = []
    for s in simplices:
        if not isinstance(s, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in s):
            raise ParseError(f"{path}: every simplex must be an array of integer indices")
        out.append(tuple(s))
    return Triangulation(tuple(out))


def read_projection(path) -> dict:
    """``{"matrix": [[...]], "offset": [...], "centers": [[...], ...]}``; all optional."""
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: projection must be an object")
    out = {"matrix": None, "offset": None, "centers": []}
    if "matrix" in doc:
        out["matrix"] = _rows(doc["matrix"], path, "matrix rows")
    if "offset" in doc:
        out["offset"] = _numbers(doc["offset"], path, "offset")
    if "centers" in doc:
        out["centers"] = _rows(doc["centers"], path, "centers")
    return out


def read_points(path) -> np.ndarray:
    return np.array(_rows(_field(load_json(path), "points", path), path, "query points"), dtype=float)


def parse_t_values(text: str) -> list:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"--t: cannot parse {text!r}") from exc
    if not vals or not all(math.isfinite(v) for v in vals):
        raise ParseError("--t needs a comma separated list of finite numbers")
    return vals


# --- writing -------------------------------------------------------------

def fmt(v) -> str:
    """17 significant digits, locale independent."""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _ensure_parent(path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)


def write_csv(path, header, rows) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_json(path, obj) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _svg_num(v) -> str:
    return format(float(v), ".6g")


def _svg_points(pts) -> str:
    # SVG's y axis points down
    return " ".join(f"{_svg_num(x)},{_svg_num(-y)}" for x, y in pts)


def write_svg(path, curve, control, tube: float | None = None) -> None:
    """Planar curve (solid polyline), control polygon (dashed) and, when
    ``tube`` is given, the tube of that radius around the control polygon."""
    curve = np.asarray(curve, dtype=float)
    control = np.asarray(control, dtype=float)
    pts = np.vstack([curve, control])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    if tube:
        lo, hi = lo - tube, hi + tube
    span = np.maximum(hi - lo, 1e-9)
    lo, hi = lo - 0.05 * span, hi + 0.05 * span
    w, h = hi - lo
    stroke = _svg_num(0.004 * max(w, h))
    view = f"{_svg_num(lo[0])} {_svg_num(-hi[1])} {_svg_num(w)} {_svg_num(h)}"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}" width="800" '
        f'height="{_svg_num(800 * h / w)}">',
    ]
    if tube:
        lines.append(f'<polyline points="{_svg_points(control)}" fill="none" stroke="#9ecae1" '
                     f'stroke-opacity="0.5" stroke-width="{_svg_num(2 * tube)}" '
                     'stroke-linejoin="round" stroke-linecap="round"/>')
    lines.append(f'<polyline points="{_svg_points(control)}" fill="none" stroke="#555" '
                 f'stroke-width="{stroke}" stroke-dasharray="{_svg_num(4 * float(stroke))}"/>')
    lines.append(f'<polyline points="{_svg_points(curve)}" fill="none" stroke="#c0392b" '
                 f'stroke-width="{stroke}"/>')
    lines.append("</svg>")
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_obj(path, vertices, faces) -> None:
    """Triangle mesh; ``faces`` hold 0-based indices, written 1-based."""
    vertices = np.asarray(vertices, dtype=float)
    if vertices.ndim != 2 or vertices.shape[1] != 3:
        raise ValueError("OBJ export needs 3-d vertices")
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v in vertices:
            fh.write("v " + " ".join(fmt(c) for c in v) + "\n")
        for f in faces:
            if len(f) != 3:
                raise ValueError("OBJ export writes triangles only")
            fh.write("f " + " ".join(str(int(i) + 1) for i in f) + "\n")


def triangle_lattice_mesh(n: int):
    """Barycentric lattice of the triangle with n subdivisions and its
    triangles: (weights of shape (N, 3), faces)."""
    index, weights = {}, []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            index[i, j] = len(weights)
            weights.append((n - i - j, i, j))
    faces = []
    for i in range(n):
        for j in range(n - i):
            faces.append((index[i, j], index[i + 1, j], index[i, j + 1]))
            if i + j + 1 < n:
                faces.append((index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]))
    return np.array(weights, dtype=float) / n, faces


def out_path(out_dir, name) -> str:
    return os.path.join(out_dir, name)
