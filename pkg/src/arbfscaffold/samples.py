"""Small reference meshes used by the tests and the experiment scripts."""

from __future__ import annotations

import os

import numpy as np
from scipy.spatial import ConvexHull

from .mesh import VolumetricMesh, make_mesh, save_mesh


def triangle_mesh() -> VolumetricMesh:
    """One planar triangle: (0,0), (1,0), (0,1)."""
    verts = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)]
    return make_mesh("tri2d", verts, [(0, 1, 2)])


def unit_tet_mesh() -> VolumetricMesh:
    """One tetrahedron on the unit axes."""
    verts = [
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
    ]
    return make_mesh("tet", verts, [(0, 1, 2, 3)])


def regular_tet_mesh(scale: float = 0.5) -> VolumetricMesh:
    """One regular tetrahedron (alternating cube corners), edge 2*sqrt(2)*scale.

    All four face-to-centroid segments are congruent here, which makes the
    pore channels symmetric; the axis-aligned corner tet has a shorter
    fourth channel that behaves differently (see the tests).
    """
    verts = np.array(
        [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)]
    ) * scale
    return make_mesh("tet", verts, [(0, 1, 2, 3)])


def hex_block_mesh(nx: int = 2, ny: int = 2, nz: int = 2,
                   size: float = 1.0) -> VolumetricMesh:
    """An nx x ny x nz brick of hexahedra filling a size^3-scaled box."""
    xs = np.linspace(0.0, size, nx + 1)
    ys = np.linspace(0.0, size, ny + 1)
    zs = np.linspace(0.0, size, nz + 1)
    verts = []
    vid = {}
    for k, z in enumerate(zs):
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                vid[(i, j, k)] = len(verts)
                verts.append((x, y, z))
    cells = []
    for k in range(nz):
        for j in range(ny):
            for i in range(nx):
                cells.append((
                    vid[(i, j, k)], vid[(i + 1, j, k)],
                    vid[(i + 1, j + 1, k)], vid[(i, j + 1, k)],
                    vid[(i, j, k + 1)], vid[(i + 1, j, k + 1)],
                    vid[(i + 1, j + 1, k + 1)], vid[(i, j + 1, k + 1)],
                ))
    return make_mesh("hex", verts, cells)


def unit_hex_mesh() -> VolumetricMesh:
    """One unit cube."""
    return hex_block_mesh(1, 1, 1)


def hex_rod_mesh(n: int = 4) -> VolumetricMesh:
    """n unit cubes in a row along x."""
    xs = np.arange(n + 1, dtype=np.float64)
    verts = []
    vid = {}
    for k in (0, 1):
        for j in (0, 1):
            for i in range(n + 1):
                vid[(i, j, k)] = len(verts)
                verts.append((xs[i], float(j), float(k)))
    cells = []
    for i in range(n):
        cells.append((
            vid[(i, 0, 0)], vid[(i + 1, 0, 0)], vid[(i + 1, 1, 0)], vid[(i, 1, 0)],
            vid[(i, 0, 1)], vid[(i + 1, 0, 1)], vid[(i + 1, 1, 1)], vid[(i, 1, 1)],
        ))
    return make_mesh("hex", verts, cells)


def icosahedron_tet_mesh(radius: float = 1.0) -> VolumetricMesh:
    """An icosahedron split into 20 tetrahedra sharing the centroid."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    raw = [
        (0.0, 1.0, phi), (0.0, 1.0, -phi), (0.0, -1.0, phi), (0.0, -1.0, -phi),
        (1.0, phi, 0.0), (1.0, -phi, 0.0), (-1.0, phi, 0.0), (-1.0, -phi, 0.0),
        (phi, 0.0, 1.0), (-phi, 0.0, 1.0), (phi, 0.0, -1.0), (-phi, 0.0, -1.0),
    ]
    shell = np.asarray(raw, dtype=np.float64)
    shell *= radius / np.linalg.norm(shell[0])
    hull = ConvexHull(shell)
    verts = np.vstack([shell, np.zeros((1, 3))])
    center = len(shell)
    cells = [(center, f[0], f[1], f[2]) for f in hull.simplices]
    return make_mesh("tet", verts, cells)


SAMPLE_BUILDERS = {
    "tri1.off": triangle_mesh,
    "tet1.node": unit_tet_mesh,
    "hex1.hexmesh": unit_hex_mesh,
    "hex8.hexmesh": hex_block_mesh,
    "rod4.hexmesh": hex_rod_mesh,
    "icosa20.node": icosahedron_tet_mesh,
}


def write_sample_meshes(outdir: str) -> dict[str, str]:
    """Write every sample mesh into ``outdir``; returns {name: path}."""
    os.makedirs(outdir, exist_ok=True)
    written = {}
    for name, builder in SAMPLE_BUILDERS.items():
        path = os.path.join(outdir, name)
        save_mesh(builder(), path)
        written[name] = path
    return written
