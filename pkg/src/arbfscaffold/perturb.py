"""Seeded random vertex perturbation, the mesh-noise baseline.

A uniformly chosen subset of ceil(vertex_fraction * nv) vertices is
displaced by magnitude x (shortest incident edge length) along a random
unit direction (confined to the plane for tri2d meshes).  Subset choice
and directions come from independently seeded SplitMix64 streams, so a
(mesh, spec) pair maps to exactly one output on every platform.
Connectivity is untouched; if a displaced cell collapses below the
degeneracy threshold the whole operation fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateResultError, ValidationError
from .mesh import _EDGES, VolumetricMesh, validate_mesh
from .rng import GaussianStream, SplitMix64

MAX_MAGNITUDE = 0.3


@dataclass(frozen=True)
class PerturbSpec:
    """Displacement magnitude (fraction of local edge length), seed, and subset size."""

    magnitude: float = 0.15
    seed: int = 0
    vertex_fraction: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.magnitude <= MAX_MAGNITUDE:
            raise ValidationError(
                f"magnitude must be in [0, {MAX_MAGNITUDE}], got {self.magnitude}"
            )
        if not 0.0 <= self.vertex_fraction <= 1.0:
            raise ValidationError(
                f"vertex_fraction must be in [0, 1], got {self.vertex_fraction}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must fit in 64 bits")


def shortest_incident_edge(mesh: VolumetricMesh) -> np.ndarray:
    """Per-vertex minimum length over all cell edges touching the vertex."""
    shortest = np.full(len(mesh.vertices), np.inf)
    for cell in mesh.cells:
        for e0, e1 in _EDGES[mesh.kind]:
            va, vb = cell[e0], cell[e1]
            length = float(np.linalg.norm(mesh.vertices[va] - mesh.vertices[vb]))
            if length < shortest[va]:
                shortest[va] = length
            if length < shortest[vb]:
                shortest[vb] = length
    return shortest


def perturb_mesh(mesh: VolumetricMesh, spec: PerturbSpec) -> VolumetricMesh:
    nv = len(mesh.vertices)
    count = math.ceil(spec.vertex_fraction * nv)

    # Two independent sub-streams: one picks the subset, one draws directions.
    seeder = SplitMix64(spec.seed)
    subset_rng = SplitMix64(seeder.next_u64())
    dir_rng = GaussianStream(seeder.next_u64())

    # Partial Fisher-Yates: the first `count` slots are a uniform subset.
    order = list(range(nv))
    for i in range(count):
        j = i + subset_rng.next_below(nv - i)
        order[i], order[j] = order[j], order[i]
    chosen = sorted(order[:count])

    edge_scale = shortest_incident_edge(mesh)
    dim = 2 if mesh.kind == "tri2d" else 3
    vertices = mesh.vertices.copy()
    for v in chosen:
        direction = dir_rng.unit_vector(dim)
        scale = edge_scale[v]
        if not np.isfinite(scale):
            continue  # isolated vertex, nothing to scale against
        vertices[v] = vertices[v] + spec.magnitude * scale * np.asarray(direction)

    out = VolumetricMesh(kind=mesh.kind, vertices=vertices, cells=mesh.cells.copy())
    try:
        validate_mesh(out)
    except ValidationError as exc:
        raise DegenerateResultError(
            f"perturbation collapsed a cell (seed {spec.seed}, "
            f"magnitude {spec.magnitude}): {exc}"
        ) from exc
    return out
