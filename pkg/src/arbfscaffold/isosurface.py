"""Iso-surface and iso-contour extraction plus OBJ/PGM export.

marching_cubes walks every grid cell, classifies its 8 corners against the
iso value (solid when value >= iso), places vertices on crossed edges by
linear interpolation t = (iso - v0) / (v1 - v0), and emits triangles from
the classic 256-case tables.  Vertices are welded by quantized position
(1e-9 x grid bbox diagonal) so the output is an indexed mesh suitable for
Euler characteristic checks.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ._mc_tables import CORNER_OFFSETS, EDGE_CORNERS, EDGE_TABLE, TRI_TABLE
from .errors import ValidationError
from .grid import VoxelGrid

WELD_TOL = 1e-9
DEGENERATE_AREA = 1e-14


@dataclass(eq=False)
class TriangleSoup:
    """Welded triangle mesh: (nv, 3) float64 vertices, (nt, 3) int64 triangles."""

    vertices: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    triangles: np.ndarray = field(default_factory=lambda: np.zeros((0, 3), dtype=np.int64))


@dataclass(eq=False)
class ContourSet:
    """Planar contours: list of (k, 3) polylines with z = 0 plane coordinates."""

    polylines: list = field(default_factory=list)

    def total_length(self) -> float:
        return float(sum(np.linalg.norm(np.diff(p, axis=0), axis=1).sum()
                         for p in self.polylines))


def triangle_areas(soup: TriangleSoup) -> np.ndarray:
    a = soup.vertices[soup.triangles[:, 0]]
    b = soup.vertices[soup.triangles[:, 1]]
    c = soup.vertices[soup.triangles[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def surface_area(soup: TriangleSoup) -> float:
    return float(triangle_areas(soup).sum()) if len(soup.triangles) else 0.0


def euler_characteristic(soup: TriangleSoup) -> int:
    """V - E + F over the welded mesh (E = distinct undirected edges)."""
    if len(soup.triangles) == 0:
        return 0
    tris = soup.triangles
    edges = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    edges = np.sort(edges, axis=1)
    n_edges = len(np.unique(edges, axis=0))
    n_verts = len(np.unique(tris))
    return int(n_verts - n_edges + len(tris))


def _weld(corners: np.ndarray, tol: float) -> TriangleSoup:
    """Weld a (3t, 3) corner array into an indexed soup, dropping slivers."""
    if len(corners) == 0:
        return TriangleSoup()
    keys = np.round(corners / tol).astype(np.int64)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    vertices = corners[first]
    triangles = inverse.reshape(-1, 3).astype(np.int64)
    ok = (
        (triangles[:, 0] != triangles[:, 1])
        & (triangles[:, 1] != triangles[:, 2])
        & (triangles[:, 2] != triangles[:, 0])
    )
    soup = TriangleSoup(vertices=vertices, triangles=triangles[ok])
    areas = triangle_areas(soup)
    soup.triangles = soup.triangles[areas > DEGENERATE_AREA]
    return soup


def marching_cubes(grid: VoxelGrid, iso: float) -> TriangleSoup:
    nx, ny, nz = grid.dims
    if nx < 2 or ny < 2 or nz < 2:
        raise ValidationError("marching cubes needs at least 2 samples per axis")
    vol = grid.values_3d().astype(np.float64)

    # Corner values per cell, shape (nz-1, ny-1, nx-1) each.
    corner_vals = []
    for dx, dy, dz in CORNER_OFFSETS:
        corner_vals.append(
            vol[dz: dz + nz - 1, dy: dy + ny - 1, dx: dx + nx - 1]
        )

    case = np.zeros(corner_vals[0].shape, dtype=np.int32)
    for n, cv in enumerate(corner_vals):
        case |= (cv < iso).astype(np.int32) << n

    edge_table = np.asarray(EDGE_TABLE, dtype=np.int32)
    active = np.nonzero(edge_table[case] != 0)
    if len(active[0]) == 0:
        return TriangleSoup()
    kk, jj, ii = (a.astype(np.int64) for a in active)
    acase = case[active]

    vals = np.stack([cv[active] for cv in corner_vals], axis=1)  # (m, 8)
    base = grid.origin + np.stack([ii, jj, kk], axis=1) * grid.spacing  # (m, 3)
    corner_pos = (
        base[:, None, :]
        + np.asarray(CORNER_OFFSETS, dtype=np.float64)[None, :, :] * grid.spacing
    )  # (m, 8, 3)

    # Interpolated vertex on each crossed edge of each active cell.
    edge_verts = np.zeros((len(acase), 12, 3))
    bits = edge_table[acase]
    for e, (c0, c1) in enumerate(EDGE_CORNERS):
        sel = (bits & (1 << e)) != 0
        if not np.any(sel):
            continue
        v0 = vals[sel, c0]
        v1 = vals[sel, c1]
        t = (iso - v0) / (v1 - v0)  # crossed edges have v0 != v1
        p0 = corner_pos[sel, c0]
        p1 = corner_pos[sel, c1]
        edge_verts[sel, e] = p0 + t[:, None] * (p1 - p0)

    # Emit triangles case by case (cheap: at most 254 distinct cases).
    chunks = []
    for ci in np.unique(acase):
        tri_edges = TRI_TABLE[ci]
        if not tri_edges:
            continue
        rows = acase == ci
        chunks.append(edge_verts[rows][:, tri_edges, :].reshape(-1, 3))
    corners = np.concatenate(chunks) if chunks else np.zeros((0, 3))

    lo, hi = grid.bbox()
    return _weld(corners, WELD_TOL * float(np.linalg.norm(hi - lo)))


# 16-case marching squares: corner bit n set when corner n is >= iso,
# corners 0:(i,j) 1:(i+1,j) 2:(i+1,j+1) 3:(i,j+1); edge e joins
# 0:(c0,c1) 1:(c1,c2) 2:(c2,c3) 3:(c3,c0).  Cases 5 and 10 are ambiguous
# and resolved by the cell-center average.
_MS_SEGMENTS = {
    0: [], 15: [],
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)],
    6: [(0, 2)], 7: [(3, 2)], 8: [(2, 3)], 9: [(0, 2)],
    11: [(1, 2)], 12: [(1, 3)], 13: [(0, 1)], 14: [(0, 3)],
}
_MS_CASE5_JOINED = [(0, 1), (2, 3)]      # center solid: corners 0 and 2 connect
_MS_CASE5_SPLIT = [(3, 0), (1, 2)]
_MS_CASE10_JOINED = [(3, 0), (1, 2)]     # center solid: corners 1 and 3 connect
_MS_CASE10_SPLIT = [(0, 1), (2, 3)]
_MS_EDGE_CORNERS = ((0, 1), (1, 2), (2, 3), (3, 0))


def marching_squares(grid: VoxelGrid, iso: float) -> ContourSet:
    nx, ny, nz = grid.dims
    if nz != 1:
        raise ValidationError("marching squares expects a single-slice grid (nz = 1)")
    if nx < 2 or ny < 2:
        raise ValidationError("marching squares needs at least 2 samples per axis")
    vals = grid.values_3d()[0].astype(np.float64)  # (ny, nx) -> [j, i]
    ox, oy, z = grid.origin
    dx, dy = grid.spacing[0], grid.spacing[1]

    polylines = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            cv = (vals[j, i], vals[j, i + 1], vals[j + 1, i + 1], vals[j + 1, i])
            case = sum(1 << n for n in range(4) if cv[n] >= iso)
            if case == 0 or case == 15:
                continue
            if case == 5:
                center = 0.25 * sum(cv)
                segs = _MS_CASE5_JOINED if center >= iso else _MS_CASE5_SPLIT
            elif case == 10:
                center = 0.25 * sum(cv)
                segs = _MS_CASE10_JOINED if center >= iso else _MS_CASE10_SPLIT
            else:
                segs = _MS_SEGMENTS[case]
            cp = (
                (ox + i * dx, oy + j * dy),
                (ox + (i + 1) * dx, oy + j * dy),
                (ox + (i + 1) * dx, oy + (j + 1) * dy),
                (ox + i * dx, oy + (j + 1) * dy),
            )
            for e0, e1 in segs:
                pts = []
                for e in (e0, e1):
                    c0, c1 = _MS_EDGE_CORNERS[e]
                    t = (iso - cv[c0]) / (cv[c1] - cv[c0])
                    x = cp[c0][0] + t * (cp[c1][0] - cp[c0][0])
                    y = cp[c0][1] + t * (cp[c1][1] - cp[c0][1])
                    pts.append((x, y, z))
                polylines.append(np.asarray(pts))
    return ContourSet(polylines=polylines)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def export_obj(soup: TriangleSoup, path: str) -> None:
    """ASCII OBJ: 'v x y z' lines then 1-based 'f a b c' lines."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="ascii") as fh:
        for v in soup.vertices:
            fh.write(f"v {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
        for t in soup.triangles:
            fh.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")


def load_obj(path: str) -> TriangleSoup:
    verts = []
    tris = []
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            tokens = raw.split()
            if not tokens or tokens[0] not in ("v", "f"):
                continue
            if tokens[0] == "v":
                verts.append([float(t) for t in tokens[1:4]])
            else:
                tris.append([int(t.split("/")[0]) - 1 for t in tokens[1:4]])
    return TriangleSoup(
        vertices=np.asarray(verts, dtype=np.float64).reshape(-1, 3),
        triangles=np.asarray(tris, dtype=np.int64).reshape(-1, 3),
    )


def export_pgm(grid: VoxelGrid, path: str, lo: float, hi: float) -> None:
    """Binary PGM (P5, maxval 255) of a single-slice grid.

    Values are clamped to [lo, hi] and mapped affinely to 0..255 with
    round-half-up, so the midpoint lands on 128.  Rows run top-to-bottom
    (largest y first).
    """
    nx, ny, nz = grid.dims
    if nz != 1:
        raise ValidationError("PGM export expects a single-slice grid (nz = 1)")
    if not hi > lo:
        raise ValidationError(f"need hi > lo, got [{lo}, {hi}]")
    img = grid.values_3d()[0].astype(np.float64)  # (ny, nx)
    scaled = (np.clip(img, lo, hi) - lo) / (hi - lo) * 255.0
    pixels = np.floor(scaled + 0.5).astype(np.uint8)
    pixels = pixels[::-1]  # top row = max y
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
