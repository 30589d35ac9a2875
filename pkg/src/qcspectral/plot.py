"""Standalone SVG output: domain boundary and filled eigenfunction contours."""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import maps as _maps

LEVELS = 11
# diverging palette, low to high
_PALETTE = np.array([
    [49, 54, 149], [69, 117, 180], [116, 173, 209], [171, 217, 233], [224, 243, 248],
    [255, 255, 191], [254, 224, 144], [253, 174, 97], [244, 109, 67], [215, 48, 39],
    [165, 0, 38],
], dtype=float)


def boundary_polyline(m, n: int = 720) -> np.ndarray:
    """Closed boundary curve of ``phi(D)`` sampled at ``n`` circle points (complex)."""
    return _maps.boundary(m, n)


def _fmt(x: float) -> str:
    s = f"{x:.9f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path(points) -> str:
    pts = list(points)
    head = f"M{_fmt(pts[0][0])},{_fmt(pts[0][1])}"
    return head + "".join(f"L{_fmt(x)},{_fmt(y)}" for x, y in pts[1:]) + "Z"


def _clip(poly, vals, level, keep_above):
    out_p, out_v = [], []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        a, b = vals[i], vals[(i + 1) % n]
        ina = a >= level if keep_above else a <= level
        inb = b >= level if keep_above else b <= level
        if ina:
            out_p.append(p)
            out_v.append(a)
        if ina != inb:
            t = (level - a) / (b - a)
            out_p.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
            out_v.append(level)
    return out_p, out_v


def band_polygons(vertices, triangles, field, levels):
    """Per band, the polygons where the P1 field lies between consecutive levels."""
    bands = [[] for _ in range(len(levels) - 1)]
    for tri in triangles:
        vals = field[tri]
        lo_v, hi_v = vals.min(), vals.max()
        pts = [tuple(vertices[k]) for k in tri]
        for b in range(len(levels) - 1):
            lo, hi = levels[b], levels[b + 1]
            if hi_v < lo or lo_v > hi:
                continue
            poly, pv = _clip(pts, list(vals), lo, True)
            if len(poly) >= 3:
                poly, pv = _clip(poly, pv, hi, False)
            if len(poly) >= 3:
                bands[b].append(poly)
    return bands


def emit_plot(path, m=None, mesh=None, field: Optional[np.ndarray] = None,
              n_boundary: int = 720, width: int = 600) -> None:
    """Write an SVG with the boundary of ``phi(D)`` and optional filled contours.

    Output is byte-deterministic for fixed inputs.
    """
    if m is None and mesh is None:
        raise ValueError("need a map or a mesh to plot")
    curve = None
    if m is not None:
        w = boundary_polyline(m, n_boundary)
        curve = np.column_stack([w.real, w.imag])
    pts = curve if curve is not None else mesh.vertices
    if mesh is not None:
        pts = np.vstack([pts, mesh.vertices])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi - lo))
    pad = 0.05 * span
    x0, y0 = lo[0] - pad, lo[1] - pad
    size_x, size_y = hi[0] - lo[0] + 2 * pad, hi[1] - lo[1] + 2 * pad
    height = int(round(width * size_y / size_x))
    # flip y so the picture has the usual orientation
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(x0)} {_fmt(-(y0 + size_y))} {_fmt(size_x)} {_fmt(size_y)}">',
        '<g transform="scale(1,-1)">',
    ]
    if mesh is not None and field is not None:
        field = np.asarray(field, dtype=float)
        levels = np.linspace(field.min(), field.max(), LEVELS + 1)
        for b, polys in enumerate(band_polygons(mesh.vertices, mesh.triangles, field, levels)):
            if not polys:
                continue
            r, g, bl = (int(c) for c in _PALETTE[b])
            d = "".join(_path(poly) for poly in polys)
            parts.append(f'<path class="band" data-level="{b}" fill="rgb({r},{g},{bl})" '
                         f'stroke="none" d="{d}"/>')
    if curve is not None:
        sw = _fmt(0.004 * span)
        parts.append(f'<path class="boundary" fill="none" stroke="black" '
                     f'stroke-width="{sw}" d="{_path(curve)}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def read_boundary(path) -> np.ndarray:
    """Parse the boundary path of an SVG written by :func:`emit_plot`."""
    import re

    text = open(path, encoding="utf-8").read()
    match = re.search(r'class="boundary"[^>]*d="([^"]+)"', text)
    if not match:
        raise ValueError("no boundary path in SVG")
    nums = re.findall(r"[ML](-?[\d.]+),(-?[\d.]+)", match.group(1))
    return np.array([[float(x), float(y)] for x, y in nums])
