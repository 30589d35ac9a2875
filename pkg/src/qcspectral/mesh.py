"""Concentric-ring triangulations of the unit disc and their images."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import maps as _maps


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (N, 2)
    triangles: np.ndarray  # (T, 3), counter-clockwise
    boundary: np.ndarray  # (N,) bool

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=float)
        t = np.ascontiguousarray(self.triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise MeshError("vertices must have shape (N, 2)")
        if t.ndim != 2 or t.shape[1] != 3:
            raise MeshError("triangles must have shape (T, 3)")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        object.__setattr__(self, "boundary", np.asarray(self.boundary, dtype=bool))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def signed_areas(self) -> np.ndarray:
        a, b, c = (self.vertices[self.triangles[:, k]] for k in range(3))
        return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                      - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    def area(self) -> float:
        return float(np.sum(self.signed_areas()))

    def edges(self) -> np.ndarray:
        e = np.concatenate([self.triangles[:, [0, 1]], self.triangles[:, [1, 2]],
                            self.triangles[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    def euler_characteristic(self) -> int:
        """``V - E + F`` with ``F`` counting triangles only; 1 for a disc."""
        return self.n_vertices - len(self.edges()) + len(self.triangles)

    def transformed(self, scale: float = 1.0, angle: float = 0.0,
                    shift=(0.0, 0.0)) -> "Mesh":
        c, s = np.cos(angle), np.sin(angle)
        R = np.array([[c, -s], [s, c]])
        v = scale * self.vertices @ R.T + np.asarray(shift, dtype=float)
        return Mesh(v, self.triangles, self.boundary)

    def to_text(self) -> str:
        """Plain text: vertex count, ``x y`` rows, triangle count, index rows."""
        lines = [f"{self.n_vertices}"]
        lines += [f"{x:.17g} {y:.17g} {int(b)}" for (x, y), b in zip(self.vertices, self.boundary)]
        lines.append(f"{len(self.triangles)}")
        lines += [f"{i} {j} {k}" for i, j, k in self.triangles]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Mesh":
        rows = text.split("\n")
        nv = int(rows[0])
        vb = np.array([r.split() for r in rows[1:1 + nv]], dtype=float)
        nt = int(rows[1 + nv])
        tri = np.array([r.split() for r in rows[2 + nv:2 + nv + nt]], dtype=np.int64)
        return cls(vb[:, :2], tri.reshape(-1, 3), vb[:, 2].astype(bool))


def ring_radii(rings: int, grading: Optional[float] = None, graded: int = 8) -> np.ndarray:
    """Radii ``rho_1 < ... < rho_rings = 1``; graded rings shrink towards the boundary."""
    h = np.ones(rings)
    if grading is not None and grading < 1.0:
        m = min(graded, rings - 1)
        if m > 0:
            h[rings - m:] = grading ** np.arange(1, m + 1)
    radii = np.cumsum(h) / np.sum(h)
    radii[-1] = 1.0
    return radii


def mesh_disc(rings: int, grading: Optional[float] = None) -> Mesh:
    """Triangulate the unit disc with ``6k`` vertices on ring ``k``.

    >>> m = mesh_disc(1); (m.n_vertices, len(m.triangles))
    (7, 6)
    """
    if rings < 1:
        raise MeshError("rings must be >= 1")
    radii = ring_radii(rings, grading)
    verts = [np.zeros((1, 2))]
    starts = [0]
    offset = 1
    for k in range(1, rings + 1):
        n = 6 * k
        t = 2.0 * np.pi * np.arange(n) / n
        verts.append(radii[k - 1] * np.column_stack([np.cos(t), np.sin(t)]))
        starts.append(offset)
        offset += n
    V = np.concatenate(verts)

    tris = []
    s1 = starts[1]
    for j in range(6):
        tris.append((0, s1 + j, s1 + (j + 1) % 6))
    for k in range(2, rings + 1):
        m, n = 6 * (k - 1), 6 * k
        si, so = starts[k - 1], starts[k]
        i = j = 0
        # merge the two rings by angle
        while i < m or j < n:
            advance_outer = j < n and (i == m or (j + 1) * m <= (i + 1) * n)
            if advance_outer:
                tris.append((si + i % m, so + j, so + (j + 1) % n))
                j += 1
            else:
                tris.append((si + i, so + j % n, si + (i + 1) % m))
                i += 1
    boundary = np.zeros(len(V), dtype=bool)
    boundary[starts[rings]:] = True
    return Mesh(V, np.array(tris, dtype=np.int64), boundary)


def push_forward(mesh: Mesh, m) -> Mesh:
    """Replace every vertex ``z`` by ``phi(z)``; image triangles must stay positive."""
    z = mesh.vertices[:, 0] + 1j * mesh.vertices[:, 1]
    w = np.asarray(_maps.evaluate(m, z))
    out = Mesh(np.column_stack([w.real, w.imag]), mesh.triangles, mesh.boundary)
    areas = out.signed_areas()
    scale = max(np.max(np.abs(areas)), 1e-300)
    bad = np.flatnonzero(areas <= 1e-14 * scale)
    if len(bad):
        raise MeshError(f"{len(bad)} degenerate or inverted image triangles "
                        f"(first: {bad[0]}); refine the mesh")
    return out
