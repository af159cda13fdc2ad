"""Volumetric mesh containers, file formats, and interpolation center construction.

A mesh is triangles in the plane ("tri2d"), tetrahedra ("tet"), or
hexahedra ("hex", VTK corner order: bottom quad counter-clockwise, then the
top quad).  From a mesh we derive the nodal values that drive the scaffold
field: every mesh vertex carries +1, and the interior centers (edge
midpoints, triangle/face centers, cell centroids) carry -1.  The
anisotropic center set replaces the face/tile and cell centers with line
segments running from each face center to the owning cell center.

Supported file formats:

* OFF         -- triangle surface / planar mesh ("OFF", "<nv> <nf> 0", ...)
* NodeEle     -- TetGen-style <stem>.node / <stem>.ele pair
* HexAscii    -- "HEX <nv> <nc>", vertex rows, 8 zero-based indices per cell
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError

# Relative tolerances, both scaled by the mesh bbox diagonal.
CENTER_DEDUP_TOL = 1e-9
DEGENERATE_MEASURE_TOL = 1e-12

MESH_KINDS = ("tri2d", "tet", "hex")
_CELL_ARITY = {"tri2d": 3, "tet": 4, "hex": 8}
_CELL_DIM = {"tri2d": 2, "tet": 3, "hex": 3}

_TRI_EDGES = ((0, 1), (1, 2), (2, 0))
_TET_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_TET_FACES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
# VTK hexahedron connectivity.
_HEX_EDGES = (
    (0, 1), (1, 2), (3, 2), (0, 3),
    (4, 5), (5, 6), (7, 6), (4, 7),
    (0, 4), (1, 5), (2, 6), (3, 7),
)
_HEX_FACES = (
    (0, 4, 7, 3), (1, 2, 6, 5),
    (0, 1, 5, 4), (3, 7, 6, 2),
    (0, 3, 2, 1), (4, 5, 6, 7),
)

_EDGES = {"tri2d": _TRI_EDGES, "tet": _TET_EDGES, "hex": _HEX_EDGES}
_FACES = {"tet": _TET_FACES, "hex": _HEX_FACES}


@dataclass(frozen=True, eq=False)
class NodalValue:
    """A point center with its prescribed field value (+1 or -1)."""

    position: np.ndarray
    value: float

    def __post_init__(self):
        if self.value not in (1.0, -1.0):
            raise ValidationError(f"nodal value must be +1 or -1, got {self.value}")


@dataclass(frozen=True, eq=False)
class CenterSegment:
    """A segment center from a face/edge center ``a`` to the cell/tile center ``b``."""

    a: np.ndarray
    b: np.ndarray
    value: float = -1.0

    def __post_init__(self):
        if self.value != -1.0:
            raise ValidationError(f"segment centers carry value -1, got {self.value}")


@dataclass(eq=False)
class VolumetricMesh:
    """Vertices (nv, 3) float64 plus integer cells (nc, arity)."""

    kind: str
    vertices: np.ndarray
    cells: np.ndarray

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def bbox_diagonal(self) -> float:
        lo, hi = self.bbox()
        return float(np.linalg.norm(hi - lo))


def _tri_areas(verts: np.ndarray, cells: np.ndarray) -> np.ndarray:
    a, b, c = verts[cells[:, 0]], verts[cells[:, 1]], verts[cells[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def _tet_volumes(verts: np.ndarray, cells: np.ndarray) -> np.ndarray:
    a = verts[cells[:, 0]]
    d1 = verts[cells[:, 1]] - a
    d2 = verts[cells[:, 2]] - a
    d3 = verts[cells[:, 3]] - a
    return np.abs(np.einsum("ij,ij->i", d1, np.cross(d2, d3))) / 6.0


def _hex_volumes(verts: np.ndarray, cells: np.ndarray) -> np.ndarray:
    # Divergence theorem over the 6 quads, each split into two triangles.
    total = np.zeros(len(cells))
    for quad in _HEX_FACES:
        for tri in ((quad[0], quad[1], quad[2]), (quad[0], quad[2], quad[3])):
            p1 = verts[cells[:, tri[0]]]
            p2 = verts[cells[:, tri[1]]]
            p3 = verts[cells[:, tri[2]]]
            total += np.einsum("ij,ij->i", np.cross(p1, p2), p3)
    return np.abs(total) / 6.0


def cell_measures(mesh: VolumetricMesh) -> np.ndarray:
    """Per-cell area (tri2d) or volume (tet/hex)."""
    if mesh.kind == "tri2d":
        return _tri_areas(mesh.vertices, mesh.cells)
    if mesh.kind == "tet":
        return _tet_volumes(mesh.vertices, mesh.cells)
    return _hex_volumes(mesh.vertices, mesh.cells)


def validate_mesh(mesh: VolumetricMesh) -> None:
    """Raise ValidationError on bad kind, arity, indices, or degenerate cells."""
    if mesh.kind not in MESH_KINDS:
        raise ValidationError(f"unknown mesh kind {mesh.kind!r}")
    verts = np.asarray(mesh.vertices, dtype=np.float64)
    cells = np.asarray(mesh.cells)
    if verts.ndim != 2 or verts.shape[1] != 3 or len(verts) == 0:
        raise ValidationError("vertices must be a non-empty (nv, 3) array")
    if not np.all(np.isfinite(verts)):
        raise ValidationError("vertex coordinates must be finite")
    arity = _CELL_ARITY[mesh.kind]
    if cells.ndim != 2 or cells.shape[1] != arity or len(cells) == 0:
        raise ValidationError(f"{mesh.kind} cells must be a non-empty (nc, {arity}) array")
    if cells.min() < 0 or cells.max() >= len(verts):
        raise ValidationError(
            f"cell index out of range: valid indices are 0..{len(verts) - 1}"
        )
    floor = DEGENERATE_MEASURE_TOL * mesh.bbox_diagonal() ** _CELL_DIM[mesh.kind]
    measures = cell_measures(mesh)
    bad = np.nonzero(measures <= floor)[0]
    if len(bad):
        raise ValidationError(
            f"cell {bad[0]} is degenerate (measure {measures[bad[0]]:.3e})"
        )


def make_mesh(kind: str, vertices, cells) -> VolumetricMesh:
    """Build and validate a mesh from array-likes."""
    mesh = VolumetricMesh(
        kind=kind,
        vertices=np.ascontiguousarray(vertices, dtype=np.float64),
        cells=np.ascontiguousarray(cells, dtype=np.int64),
    )
    validate_mesh(mesh)
    return mesh


# ---------------------------------------------------------------------------
# Interpolation centers
# ---------------------------------------------------------------------------

def _index_mean(verts: np.ndarray, idx) -> np.ndarray:
    # Summing in sorted index order makes shared centers bit-identical
    # across the cells that own them, so the quantized dedup is exact.
    return verts[np.sort(np.asarray(idx))].mean(axis=0)


def _dedup_positions(positions: list[np.ndarray], tol: float) -> list[np.ndarray]:
    seen = set()
    out = []
    for p in positions:
        key = tuple(np.round(p / tol).astype(np.int64))
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def compute_centers(
    mesh: VolumetricMesh,
) -> tuple[list[NodalValue], list[NodalValue], list[NodalValue], list[NodalValue]]:
    """Nodal values for a mesh: (vertex nodes, edge centers, tile centers, cell centers).

    Vertices carry +1; every derived center carries -1.  Edge and face
    centers shared between adjacent cells appear exactly once (dedup by
    coordinates quantized at 1e-9 x bbox diagonal).  For tri2d meshes the
    tile centers are the triangle centers and the cell list is empty; for
    tet/hex meshes the tile centers are the face centers and the cell
    centers are the cell centroids.
    """
    verts = mesh.vertices
    tol = CENTER_DEDUP_TOL * mesh.bbox_diagonal()

    vertex_nodes = [NodalValue(position=v.copy(), value=1.0) for v in verts]

    edge_pos = []
    for cell in mesh.cells:
        for e in _EDGES[mesh.kind]:
            edge_pos.append(_index_mean(verts, cell[list(e)]))
    edge_centers = [NodalValue(p, -1.0) for p in _dedup_positions(edge_pos, tol)]

    tile_pos = []
    cell_pos = []
    if mesh.kind == "tri2d":
        for cell in mesh.cells:
            tile_pos.append(_index_mean(verts, cell))
    else:
        for cell in mesh.cells:
            for f in _FACES[mesh.kind]:
                tile_pos.append(_index_mean(verts, cell[list(f)]))
            cell_pos.append(_index_mean(verts, cell))
    tile_centers = [NodalValue(p, -1.0) for p in _dedup_positions(tile_pos, tol)]
    cell_centers = [NodalValue(p, -1.0) for p in _dedup_positions(cell_pos, tol)]

    return vertex_nodes, edge_centers, tile_centers, cell_centers


def build_segments(mesh: VolumetricMesh) -> list[CenterSegment]:
    """Anisotropic segment centers, per cell (no dedup across cells).

    tri2d: edge center -> triangle center (3 per cell);
    tet:   face center -> cell centroid   (4 per cell);
    hex:   face center -> cell centroid   (6 per cell).
    """
    verts = mesh.vertices
    tol = CENTER_DEDUP_TOL * mesh.bbox_diagonal()
    segments = []
    for cell in mesh.cells:
        inner = _index_mean(verts, cell)
        outers = _EDGES["tri2d"] if mesh.kind == "tri2d" else _FACES[mesh.kind]
        for f in outers:
            outer = _index_mean(verts, cell[list(f)])
            if np.linalg.norm(outer - inner) <= tol:
                raise ValidationError("degenerate cell: face center meets cell center")
            segments.append(CenterSegment(a=outer, b=inner))
    return segments


def assemble_center_set(mesh: VolumetricMesh, mode: str):
    """Full interpolation center list for a mesh.

    ``mode`` is "isotropic" (every nodal value as a point center) or
    "anisotropic" (vertex nodes and edge centers as points, plus the
    face-to-cell segments; face/tile and cell centers appear only inside
    the segments).
    """
    if mode not in ("isotropic", "anisotropic"):
        raise ValidationError(f"unknown mode {mode!r}")
    vertex_nodes, edge_centers, tile_centers, cell_centers = compute_centers(mesh)
    centers: list = list(vertex_nodes) + list(edge_centers)
    if mode == "isotropic":
        centers += list(tile_centers) + list(cell_centers)
    else:
        centers += build_segments(mesh)
    return centers


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    return repr(float(x))


def _data_lines(path: str):
    """Yield (line_number, tokens) for non-empty lines, '#' comments stripped."""
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield lineno, text.split()


def _parse_floats(tokens, n, path, lineno):
    if len(tokens) != n:
        raise ParseError(f"expected {n} fields, got {len(tokens)}", path, lineno)
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise ParseError(f"malformed number in {tokens!r}", path, lineno) from None


def _parse_ints(tokens, n, path, lineno):
    if len(tokens) != n:
        raise ParseError(f"expected {n} fields, got {len(tokens)}", path, lineno)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"malformed integer in {tokens!r}", path, lineno) from None


def _load_off(path: str) -> VolumetricMesh:
    lines = _data_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty file", path) from None
    if tokens != ["OFF"]:
        raise ParseError("missing OFF header", path, lineno)
    lineno, tokens = next(lines, (None, None))
    if tokens is None:
        raise ParseError("missing count line", path)
    nv, nf, _ = _parse_ints(tokens, 3, path, lineno)
    verts = np.empty((nv, 3))
    for i in range(nv):
        lineno, tokens = next(lines, (None, None))
        if tokens is None:
            raise ParseError(f"expected {nv} vertices, file ended at {i}", path)
        verts[i] = _parse_floats(tokens, 3, path, lineno)
    cells = np.empty((nf, 3), dtype=np.int64)
    for i in range(nf):
        lineno, tokens = next(lines, (None, None))
        if tokens is None:
            raise ParseError(f"expected {nf} faces, file ended at {i}", path)
        vals = _parse_ints(tokens, 4, path, lineno)
        if vals[0] != 3:
            raise ParseError(f"only triangle faces supported, got arity {vals[0]}", path, lineno)
        cells[i] = vals[1:]
    return make_mesh("tri2d", verts, cells)


def _node_ele_paths(path: str) -> tuple[str, str]:
    stem, ext = os.path.splitext(path)
    if ext in (".node", ".ele"):
        return stem + ".node", stem + ".ele"
    return path + ".node", path + ".ele"


def _load_node_ele(path: str) -> VolumetricMesh:
    node_path, ele_path = _node_ele_paths(path)

    lines = _data_lines(node_path)
    lineno, tokens = next(lines, (None, None))
    if tokens is None:
        raise ParseError("empty file", node_path)
    header = _parse_ints(tokens, 4, node_path, lineno)
    nv, dim = header[0], header[1]
    if dim != 3:
        raise ParseError(f"expected dimension 3, got {dim}", node_path, lineno)
    verts = np.empty((nv, 3))
    base = None
    for i in range(nv):
        lineno, tokens = next(lines, (None, None))
        if tokens is None:
            raise ParseError(f"expected {nv} nodes, file ended at {i}", node_path)
        vals = _parse_floats(tokens, 4, node_path, lineno)
        idx = int(vals[0])
        if base is None:
            if idx not in (0, 1):
                raise ParseError(f"first node index must be 0 or 1, got {idx}", node_path, lineno)
            base = idx
        slot = idx - base
        if not 0 <= slot < nv:
            raise ParseError(f"node index {idx} out of range", node_path, lineno)
        verts[slot] = vals[1:]

    lines = _data_lines(ele_path)
    lineno, tokens = next(lines, (None, None))
    if tokens is None:
        raise ParseError("empty file", ele_path)
    header = _parse_ints(tokens, 3, ele_path, lineno)
    nc, arity = header[0], header[1]
    if arity != 4:
        raise ParseError(f"expected 4 nodes per tet, got {arity}", ele_path, lineno)
    cells = np.empty((nc, 4), dtype=np.int64)
    for i in range(nc):
        lineno, tokens = next(lines, (None, None))
        if tokens is None:
            raise ParseError(f"expected {nc} cells, file ended at {i}", ele_path)
        vals = _parse_ints(tokens, 5, ele_path, lineno)
        cells[i] = [v - base for v in vals[1:]]
    return make_mesh("tet", verts, cells)


def _load_hex_ascii(path: str) -> VolumetricMesh:
    lines = _data_lines(path)
    lineno, tokens = next(lines, (None, None))
    if tokens is None:
        raise ParseError("empty file", path)
    if len(tokens) != 3 or tokens[0] != "HEX":
        raise ParseError("missing 'HEX <nv> <nc>' header", path, lineno)
    nv, nc = _parse_ints(tokens[1:], 2, path, lineno)
    verts = np.empty((nv, 3))
    for i in range(nv):
        lineno, tokens = next(lines, (None, None))
        if tokens is None:
            raise ParseError(f"expected {nv} vertices, file ended at {i}", path)
        verts[i] = _parse_floats(tokens, 3, path, lineno)
    cells = np.empty((nc, 8), dtype=np.int64)
    for i in range(nc):
        lineno, tokens = next(lines, (None, None))
        if tokens is None:
            raise ParseError(f"expected {nc} cells, file ended at {i}", path)
        cells[i] = _parse_ints(tokens, 8, path, lineno)
    return make_mesh("hex", verts, cells)


_FORMAT_LOADERS = {
    "off": _load_off,
    "nodeele": _load_node_ele,
    "hexascii": _load_hex_ascii,
}

_EXT_FORMATS = {
    ".off": "off",
    ".node": "nodeele",
    ".ele": "nodeele",
    ".hexmesh": "hexascii",
}


def infer_format(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    if ext not in _EXT_FORMATS:
        raise ValidationError(f"cannot infer mesh format from extension {ext!r}")
    return _EXT_FORMATS[ext]


def load_mesh(path: str, fmt: str | None = None) -> VolumetricMesh:
    """Load a validated mesh; ``fmt`` is off / nodeele / hexascii (inferred by default)."""
    if fmt is None and not os.path.splitext(path)[1] and os.path.exists(path + ".node"):
        fmt = "nodeele"  # bare tetgen stem
    fmt = fmt or infer_format(path)
    if fmt not in _FORMAT_LOADERS:
        raise ValidationError(f"unknown mesh format {fmt!r}")
    return _FORMAT_LOADERS[fmt](path)


def save_mesh(mesh: VolumetricMesh, path: str) -> None:
    """Write a mesh in the format matching its kind (OFF / NodeEle / HexAscii)."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    if mesh.kind == "tri2d":
        with open(path, "w", encoding="ascii") as fh:
            fh.write("OFF\n")
            fh.write(f"{len(mesh.vertices)} {len(mesh.cells)} 0\n")
            for v in mesh.vertices:
                fh.write(f"{_fmt_float(v[0])} {_fmt_float(v[1])} {_fmt_float(v[2])}\n")
            for c in mesh.cells:
                fh.write(f"3 {c[0]} {c[1]} {c[2]}\n")
    elif mesh.kind == "tet":
        node_path, ele_path = _node_ele_paths(path)
        with open(node_path, "w", encoding="ascii") as fh:
            fh.write(f"{len(mesh.vertices)} 3 0 0\n")
            for i, v in enumerate(mesh.vertices, start=1):
                fh.write(f"{i} {_fmt_float(v[0])} {_fmt_float(v[1])} {_fmt_float(v[2])}\n")
        with open(ele_path, "w", encoding="ascii") as fh:
            fh.write(f"{len(mesh.cells)} 4 0\n")
            for i, c in enumerate(mesh.cells, start=1):
                fh.write(f"{i} {c[0] + 1} {c[1] + 1} {c[2] + 1} {c[3] + 1}\n")
    elif mesh.kind == "hex":
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"HEX {len(mesh.vertices)} {len(mesh.cells)}\n")
            for v in mesh.vertices:
                fh.write(f"{_fmt_float(v[0])} {_fmt_float(v[1])} {_fmt_float(v[2])}\n")
            for c in mesh.cells:
                fh.write(" ".join(str(int(i)) for i in c) + "\n")
    else:
        raise ValidationError(f"unknown mesh kind {mesh.kind!r}")
