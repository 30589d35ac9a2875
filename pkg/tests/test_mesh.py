import math

import numpy as np
import pytest

from qcspectral.maps import parse_map
from qcspectral.mesh import Mesh, MeshError, mesh_disc, push_forward, ring_radii


def test_single_ring():
    m = mesh_disc(1)
    assert m.n_vertices == 7 and len(m.triangles) == 6
    assert m.boundary.sum() == 6


@pytest.mark.parametrize("rings", [1, 2, 4, 16])
def test_disc_topology(rings):
    m = mesh_disc(rings)
    assert m.euler_characteristic() == 1
    assert len(m.triangles) == 6 * rings**2
    assert np.all(m.signed_areas() > 0)
    # conforming: every interior edge is shared by exactly two triangles
    e = np.sort(np.concatenate([m.triangles[:, [0, 1]], m.triangles[:, [1, 2]],
                                m.triangles[:, [2, 0]]]), axis=1)
    _, counts = np.unique(e, axis=0, return_counts=True)
    assert set(counts) <= {1, 2}
    assert (counts == 1).sum() == 6 * rings


def test_polygon_area():
    assert mesh_disc(64).area() == pytest.approx(math.pi, rel=1e-3)


def test_graded_radii():
    r = ring_radii(20, 0.8)
    assert r[-1] == 1.0 and np.all(np.diff(r) > 0)
    h = np.diff(r)
    assert h[-1] < h[0]
    m = mesh_disc(20, 0.8)
    assert np.all(m.signed_areas() > 0)


def test_push_forward_identity():
    m = mesh_disc(8)
    out = push_forward(m, parse_map("identity"))
    np.testing.assert_array_equal(out.vertices, m.vertices)


def test_push_forward_areas():
    assert push_forward(mesh_disc(64), parse_map("ellipse-shear:a=0.5")).area() == pytest.approx(
        math.pi, rel=2e-3)
    epi = push_forward(mesh_disc(96), parse_map("epicycloid:A=2,B=1,n=3"))
    assert epi.area() == pytest.approx(4 * math.pi, rel=5e-3)


def test_push_forward_rejects_inversions():
    # A = B degenerates the epicycloid; the descriptor forbids it, so fold by hand
    m = mesh_disc(4)
    flipped = Mesh(m.vertices * np.array([1.0, -1.0]), m.triangles, m.boundary)
    with pytest.raises(MeshError):
        push_forward(flipped, parse_map("identity"))


def test_text_round_trip():
    m = mesh_disc(5)
    back = Mesh.from_text(m.to_text())
    np.testing.assert_array_equal(back.vertices, m.vertices)
    np.testing.assert_array_equal(back.triangles, m.triangles)
    np.testing.assert_array_equal(back.boundary, m.boundary)


def test_transformed():
    m = mesh_disc(6).transformed(scale=2.0, angle=0.3, shift=(1.0, -2.0))
    assert m.area() == pytest.approx(4 * mesh_disc(6).area(), rel=1e-14)


def test_invalid_shapes():
    with pytest.raises(MeshError):
        Mesh(np.zeros((3, 3)), np.zeros((1, 3)), np.zeros(3))
    with pytest.raises(MeshError):
        mesh_disc(0)
