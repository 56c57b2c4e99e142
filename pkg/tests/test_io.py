import json

import numpy as np
import pytest

from toricpatch import io
from toricpatch.errors import ParseError


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_read_config_forms(tmp_path):
    cfg = io.read_config(_write(tmp_path, "a.json", '{"dim": 2, "points": [[0,0],[1,0],[0,1]]}'))
    assert cfg.dim == 2 and len(cfg) == 3
    assert len(io.read_config(_write(tmp_path, "b.json", '{"fixture": "triangle", "degree": 3}'))) == 10
    assert len(io.read_config(_write(tmp_path, "c.json", '{"fixture": "pinwheel"}'))) == 6
    cfg = io.read_config(_write(tmp_path, "d.json", '{"points": [[0.5],[1.25]]}'))
    assert cfg.dim == 1


@pytest.mark.parametrize("text", [
    '{"dim": 1, "points": [[0], [1], "x"]}',
    '{"dim": 1, "points": [[0], [1]',
    '{"dim": 2, "points": [[0, 0], [1]]}',
    '{"dim": 1, "points": []}',
    '{"fixture": "curve"}',
    '{"fixture": "dodecahedron"}',
    '{"dim": "two", "points": [[0]]}',
    '{"dim": 1, "points": [[true], [1]]}',
])
def test_bad_configs(tmp_path, text):
    with pytest.raises(ParseError):
        io.read_config(_write(tmp_path, "bad.json", text))


def test_missing_file():
    with pytest.raises(ParseError):
        io.read_config("/nonexistent/config.json")


def test_weights_lifting_triangulation(tmp_path):
    w = io.read_weights(_write(tmp_path, "w.json", '{"weights": [1, 2, 4]}'))
    assert np.allclose(w.values, [1, 2, 4])
    w = io.read_weights(_write(tmp_path, "lw.json", '{"log_weights": [0, 1000]}'))
    assert w.log[1] == 1000
    lam = io.read_lifting(_write(tmp_path, "l.json", '{"lambda": [0, 1, 0]}'))
    assert lam.values == (0, 1, 0) and lam.exact
    T = io.read_triangulation(_write(tmp_path, "t.json", '{"simplices": [[3, 0, 1], [2, 0, 3]]}'))
    assert T.to_list() == [[0, 1, 3], [0, 2, 3]]
    with pytest.raises(ParseError):
        io.read_triangulation(_write(tmp_path, "t2.json", '{"simplices": [[0, 1.5]]}'))


def test_projection_and_t(tmp_path):
    proj = io.read_projection(_write(tmp_path, "p.json", '{"centers": [[0, 0, 5]]}'))
    assert proj["matrix"] is None and proj["centers"] == [[0, 0, 5]]
    assert io.parse_t_values("1, 10,1e3") == [1, 10, 1000]
    for bad in ("", "a,b", "1,inf"):
        with pytest.raises(ParseError):
            io.parse_t_values(bad)


def test_number_format():
    assert io.fmt(0.1) == "0.10000000000000001"
    assert io.fmt(3) == "3" and io.fmt(True) == "1"
    assert float(io.fmt(np.pi)) == np.pi


def test_csv_and_json(tmp_path):
    path = tmp_path / "sub" / "x.csv"
    io.write_csv(path, ["a", "b"], [[1, 0.5], [2, 1e-20]])
    assert path.read_bytes() == b"a,b\n1,0.5\n2,9.9999999999999995e-21\n"
    io.write_json(tmp_path / "x.json", {"b": 1, "a": [1, 2]})
    assert json.loads((tmp_path / "x.json").read_text()) == {"a": [1, 2], "b": 1}
    assert (tmp_path / "x.json").read_text().index('"a"') < (tmp_path / "x.json").read_text().index('"b"')


def test_svg(tmp_path):
    curve = np.column_stack([np.linspace(0, 1, 401), np.linspace(0, 1, 401) ** 2])
    ctrl = np.array([[0, 0], [0.5, 0], [1, 1]])
    io.write_svg(tmp_path / "c.svg", curve, ctrl, tube=0.05)
    text = (tmp_path / "c.svg").read_text()
    assert text.startswith("<?xml") and text.rstrip().endswith("</svg>")
    assert text.count("<polyline") == 3 and "stroke-dasharray" in text
    # viewBox is the tube-padded bounding box with a 5% margin
    view = [float(v) for v in text.split('viewBox="')[1].split('"')[0].split()]
    assert view[2] == pytest.approx(1.1 * 1.1)


def test_obj(tmp_path):
    io.write_obj(tmp_path / "m.obj", [[0, 0, 0], [1, 0, 0], [0, 1, 0.5]], [(0, 1, 2)])
    lines = (tmp_path / "m.obj").read_text().splitlines()
    assert lines == ["v 0 0 0", "v 1 0 0", "v 0 1 0.5", "f 1 2 3"]
    with pytest.raises(ValueError):
        io.write_obj(tmp_path / "bad.obj", [[0, 0]], [])


def test_triangle_lattice_mesh():
    w, faces = io.triangle_lattice_mesh(4)
    assert len(w) == 15 and len(faces) == 16
    assert np.allclose(w.sum(axis=1), 1)
    areas = []
    for f in faces:
        a, b, c = w[list(f), 1:]
        u, v = b - a, c - a
        areas.append(u[0] * v[1] - u[1] * v[0])
    assert np.allclose(areas, areas[0]) and areas[0] > 0
