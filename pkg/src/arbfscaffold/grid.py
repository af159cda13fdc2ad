"""Voxel grids: construction, field sampling, and the .vhdr/.raw volume format.

Values are stored as a flat float32 array in x-fastest order
(idx = i + nx * (j + ny * k)); sample (i, j, k) sits at
origin + (i * dx, j * dy, k * dz), so both bbox faces are sampled.
The raw payload on disk is little-endian float32 and round-trips
bit-identically.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import HeaderMismatchError, InvalidBBoxError, ParseError, ValidationError

WORKERS_ENV = "ARBF_WORKERS"


@dataclass(eq=False)
class VoxelGrid:
    origin: np.ndarray
    spacing: np.ndarray
    dims: tuple[int, int, int]
    values: np.ndarray  # flat float32, x-fastest

    def index(self, i: int, j: int, k: int) -> int:
        nx, ny, _ = self.dims
        return i + nx * (j + ny * k)

    def position(self, i: int, j: int, k: int) -> np.ndarray:
        return self.origin + self.spacing * np.array([i, j, k], dtype=np.float64)

    def positions(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Sample positions for a flat index range, in index order."""
        nx, ny, nz = self.dims
        stop = nx * ny * nz if stop is None else stop
        idx = np.arange(start, stop, dtype=np.int64)
        i = idx % nx
        j = (idx // nx) % ny
        k = idx // (nx * ny)
        return self.origin + np.stack([i, j, k], axis=1) * self.spacing

    def values_3d(self) -> np.ndarray:
        """View with axes (k, j, i); values_3d()[k, j, i] is sample (i, j, k)."""
        nx, ny, nz = self.dims
        return self.values.reshape(nz, ny, nx)

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        n = np.array(self.dims, dtype=np.float64) - 1.0
        return self.origin.copy(), self.origin + self.spacing * n


def _empty_values(dims) -> np.ndarray:
    nx, ny, nz = dims
    return np.zeros(nx * ny * nz, dtype=np.float32)


def make_grid(bbox_min, bbox_max, resolution: int, pad_fraction: float = 0.0) -> VoxelGrid:
    """Grid over a padded bbox; the longest axis gets ``resolution`` samples.

    The box grows by pad_fraction x diagonal on every side.  Shorter axes
    get proportionally fewer samples, never fewer than 2.
    """
    lo = np.asarray(bbox_min, dtype=np.float64).reshape(3)
    hi = np.asarray(bbox_max, dtype=np.float64).reshape(3)
    if not np.all(hi > lo):
        raise InvalidBBoxError(f"bbox must have positive extent, got {lo} .. {hi}")
    if resolution < 2:
        raise ValidationError(f"resolution must be at least 2, got {resolution}")
    if pad_fraction < 0.0:
        raise ValidationError(f"pad_fraction must be >= 0, got {pad_fraction}")
    pad = pad_fraction * float(np.linalg.norm(hi - lo))
    lo = lo - pad
    hi = hi + pad
    extent = hi - lo
    longest = float(extent.max())
    dims = tuple(max(2, int(round(resolution * float(e) / longest))) for e in extent)
    # Rounding must not shave the longest axis itself.
    dims = tuple(
        resolution if e == longest else d for d, e in zip(dims, map(float, extent))
    )
    spacing = extent / (np.array(dims, dtype=np.float64) - 1.0)
    return VoxelGrid(origin=lo, spacing=spacing, dims=dims, values=_empty_values(dims))


def make_grid_2d(bbox_min, bbox_max, resolution: int, pad_fraction: float = 0.0) -> VoxelGrid:
    """Single-slice grid (nz = 1) over a planar bbox, for contour extraction.

    bbox_min/bbox_max are (x, y) pairs or (x, y, z) with equal z; the slice
    sits at that z (0 by default).
    """
    lo = np.asarray(bbox_min, dtype=np.float64).ravel()
    hi = np.asarray(bbox_max, dtype=np.float64).ravel()
    z = float(lo[2]) if lo.size == 3 else 0.0
    lo2, hi2 = lo[:2].copy(), hi[:2].copy()
    if not np.all(hi2 > lo2):
        raise InvalidBBoxError(f"bbox must have positive extent, got {lo2} .. {hi2}")
    if resolution < 2:
        raise ValidationError(f"resolution must be at least 2, got {resolution}")
    if pad_fraction < 0.0:
        raise ValidationError(f"pad_fraction must be >= 0, got {pad_fraction}")
    pad = pad_fraction * float(np.linalg.norm(hi2 - lo2))
    lo2 -= pad
    hi2 += pad
    extent = hi2 - lo2
    longest = float(extent.max())
    dims2 = tuple(max(2, int(round(resolution * float(e) / longest))) for e in extent)
    dims2 = tuple(
        resolution if e == longest else d for d, e in zip(dims2, map(float, extent))
    )
    dims = (dims2[0], dims2[1], 1)
    spacing2 = extent / (np.array(dims2, dtype=np.float64) - 1.0)
    origin = np.array([lo2[0], lo2[1], z])
    spacing = np.array([spacing2[0], spacing2[1], 1.0])
    return VoxelGrid(origin=origin, spacing=spacing, dims=dims, values=_empty_values(dims))


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else ARBF_WORKERS, else 1 (0 = auto)."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV, "").strip()
        if not env:
            return 1
        try:
            workers = int(env)
        except ValueError:
            raise ValidationError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    if workers < 0:
        raise ValidationError(f"worker count must be >= 0, got {workers}")
    if workers == 0:
        workers = os.cpu_count() or 1
    return workers


def sample_field(source, grid: VoxelGrid, workers: int | None = None) -> VoxelGrid:
    """Evaluate a field source at every grid sample, returning a filled copy.

    ``source`` is anything with evaluate_many((n, 3)) -> (n,), or a bare
    callable with the same signature.  Voxels are partitioned into
    contiguous chunks across workers; each voxel's value depends only on
    its own position, so the result is identical for any worker count.
    """
    eval_many = getattr(source, "evaluate_many", source)
    if not callable(eval_many):
        raise ValidationError("field source must be callable or expose evaluate_many")
    workers = resolve_workers(workers)
    total = int(np.prod(grid.dims))
    out = np.empty(total, dtype=np.float32)

    # Chunks sized for cache friendliness; small grids collapse to one chunk.
    chunk = max(4096, (total + 4 * workers - 1) // (4 * workers))
    spans = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]

    def run(span):
        s, e = span
        vals = eval_many(grid.positions(s, e))
        out[s:e] = np.asarray(vals, dtype=np.float64).astype(np.float32)

    if workers == 1 or len(spans) == 1:
        for span in spans:
            run(span)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, spans))
    if not np.all(np.isfinite(out)):
        raise ValidationError("field produced non-finite values")
    return VoxelGrid(origin=grid.origin.copy(), spacing=grid.spacing.copy(),
                     dims=grid.dims, values=out)


def solid_fraction(grid: VoxelGrid, iso: float) -> float:
    """Fraction of samples with value >= iso (solid-above convention)."""
    return float(np.count_nonzero(grid.values >= iso)) / grid.values.size


# ---------------------------------------------------------------------------
# Volume files: <stem>.vhdr (ASCII header) + <stem>.raw (LE float32 payload)
# ---------------------------------------------------------------------------

_DTYPE_TAG = "float32le"


def _volume_paths(stem: str) -> tuple[str, str]:
    if not stem:
        raise IOError("empty volume path")
    if stem.endswith(".vhdr") or stem.endswith(".raw"):
        stem = os.path.splitext(stem)[0]
    return stem + ".vhdr", stem + ".raw"


def write_volume(grid: VoxelGrid, stem: str) -> None:
    hdr_path, raw_path = _volume_paths(stem)
    parent = os.path.dirname(hdr_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    nx, ny, nz = grid.dims
    origin = [repr(float(x)) for x in grid.origin]
    spacing = [repr(float(x)) for x in grid.spacing]
    with open(hdr_path, "w", encoding="ascii") as fh:
        fh.write(f"DIMS {nx} {ny} {nz}\n")
        fh.write(f"ORIGIN {' '.join(origin)}\n")
        fh.write(f"SPACING {' '.join(spacing)}\n")
        fh.write(f"DTYPE {_DTYPE_TAG}\n")
    grid.values.astype("<f4").tofile(raw_path)


def read_volume(stem: str) -> VoxelGrid:
    hdr_path, raw_path = _volume_paths(stem)
    fields = {}
    with open(hdr_path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            tokens = raw.split()
            if not tokens:
                continue
            fields[tokens[0]] = (tokens[1:], lineno)
    for key in ("DIMS", "ORIGIN", "SPACING", "DTYPE"):
        if key not in fields:
            raise ParseError(f"missing {key} line", hdr_path)
    try:
        dims = tuple(int(t) for t in fields["DIMS"][0])
        origin = np.array([float(t) for t in fields["ORIGIN"][0]])
        spacing = np.array([float(t) for t in fields["SPACING"][0]])
    except ValueError as exc:
        raise ParseError(f"malformed header value: {exc}", hdr_path) from None
    if len(dims) != 3 or len(origin) != 3 or len(spacing) != 3:
        raise ParseError("DIMS/ORIGIN/SPACING must each have 3 fields", hdr_path)
    if fields["DTYPE"][0] != [_DTYPE_TAG]:
        raise ParseError(f"unsupported dtype {fields['DTYPE'][0]}", hdr_path,
                         fields["DTYPE"][1])
    values = np.fromfile(raw_path, dtype="<f4")
    expected = dims[0] * dims[1] * dims[2]
    if values.size != expected:
        raise HeaderMismatchError(
            f"{raw_path}: payload holds {values.size} samples, header says {expected}"
        )
    return VoxelGrid(origin=origin, spacing=spacing, dims=dims,
                     values=values.astype(np.float32))
