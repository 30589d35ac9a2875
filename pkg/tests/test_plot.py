import math

import numpy as np
import pytest

from qcspectral import plot
from qcspectral.eigsolver import minimize_eigen
from qcspectral.maps import parse_map
from qcspectral.mesh import mesh_disc


def test_rose_petal_polar_readback(tmp_path):
    path = tmp_path / "rose.svg"
    plot.emit_plot(path, m=parse_map("rose-petal"), n_boundary=2048)
    pts = plot.read_boundary(path)
    # drop the image of z = -1, the origin, where the polar angle is undefined
    pts = pts[np.hypot(pts[:, 0], pts[:, 1]) > 1e-9]
    rho = np.hypot(pts[:, 0], pts[:, 1])
    theta = np.arctan2(pts[:, 1], pts[:, 0])
    # every sampled point lies on rho = 2 sqrt(2) cos(2 theta)
    np.testing.assert_allclose(rho, 2 * math.sqrt(2) * np.cos(2 * theta), atol=1e-6)
    # and 16 angles spread over the petal are hit
    for t in np.linspace(-math.pi / 4 + 0.05, math.pi / 4 - 0.05, 16):
        i = np.argmin(np.abs(theta - t))
        assert abs(theta[i] - t) < 2e-3
        assert rho[i] == pytest.approx(2 * math.sqrt(2) * math.cos(2 * theta[i]), abs=1e-6)


def test_identity_is_unit_circle(tmp_path):
    path = tmp_path / "circle.svg"
    plot.emit_plot(path, m=parse_map("identity"))
    pts = plot.read_boundary(path)
    np.testing.assert_allclose(np.hypot(pts[:, 0], pts[:, 1]), 1.0, atol=1e-8)


def _cusps(pts):
    # the boundary speed vanishes at a cusp: count near-zero local minima of segment length
    seg = np.linalg.norm(np.diff(np.vstack([pts, pts[:1]]), axis=0), axis=1)
    is_min = (seg <= np.roll(seg, 1)) & (seg < np.roll(seg, -1))
    return int(np.sum(is_min & (seg < 0.05 * seg.max())))


def test_epicycloid_cusps(tmp_path):
    path = tmp_path / "epi.svg"
    # odd sample count keeps the cusp points off the sampling grid
    plot.emit_plot(path, m=parse_map("epicycloid:A=1,B=0,n=4"), n_boundary=721)
    assert _cusps(plot.read_boundary(path)) == 3


def test_contours_and_determinism(tmp_path):
    mesh = mesh_disc(6)
    field = minimize_eigen(mesh, 3.0).field
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    plot.emit_plot(a, m=parse_map("identity"), mesh=mesh, field=field)
    plot.emit_plot(b, m=parse_map("identity"), mesh=mesh, field=field)
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.count('class="band"') >= plot.LEVELS - 1
    assert text.startswith("<?xml")


def test_band_polygons_cover_triangle():
    V = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    T = np.array([[0, 1, 2]])
    f = np.array([0.0, 1.0, 0.5])
    bands = plot.band_polygons(V, T, f, np.linspace(0, 1, 5))

    def area(poly):
        x, y = np.array(poly).T
        return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    assert sum(area(p) for band in bands for p in band) == pytest.approx(0.5, rel=1e-12)


def test_needs_something_to_draw(tmp_path):
    with pytest.raises(ValueError):
        plot.emit_plot(tmp_path / "x.svg")
