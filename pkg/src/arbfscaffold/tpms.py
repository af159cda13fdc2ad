"""Triply periodic minimal surface fields (P, D, G, IWP baselines).

With X = px * x (and likewise Y, Z), the level-set functions are

    p:   cos X + cos Y + cos Z
    d:   sin X sin Y sin Z + sin X cos Y cos Z
         + cos X sin Y cos Z + cos X cos Y sin Z
    g:   sin X cos Y + sin Y cos Z + sin Z cos X
    iwp: 2 (cos X cos Y + cos Y cos Z + cos Z cos X)
         - (cos 2X + cos 2Y + cos 2Z)

Each field is 2*pi / p_axis periodic along its axis; the natural sampling
domain at unit periods is [0, 2*pi]^3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .grid import VoxelGrid, sample_field

TPMS_KINDS = ("p", "d", "g", "iwp")
DEFAULT_DOMAIN = (0.0, 2.0 * np.pi)


@dataclass(frozen=True)
class TpmsField:
    """A TPMS kind plus per-axis angular frequency multipliers."""

    kind: str
    periods: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if self.kind not in TPMS_KINDS:
            raise ValidationError(f"unknown TPMS kind {self.kind!r}, expected one of {TPMS_KINDS}")
        if len(self.periods) != 3 or not all(p > 0 for p in self.periods):
            raise ValidationError(f"periods must be 3 positive values, got {self.periods}")

    def evaluate_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        x = pts[:, 0] * self.periods[0]
        y = pts[:, 1] * self.periods[1]
        z = pts[:, 2] * self.periods[2]
        if self.kind == "p":
            return np.cos(x) + np.cos(y) + np.cos(z)
        if self.kind == "d":
            return (
                np.sin(x) * np.sin(y) * np.sin(z)
                + np.sin(x) * np.cos(y) * np.cos(z)
                + np.cos(x) * np.sin(y) * np.cos(z)
                + np.cos(x) * np.cos(y) * np.sin(z)
            )
        if self.kind == "g":
            return (
                np.sin(x) * np.cos(y)
                + np.sin(y) * np.cos(z)
                + np.sin(z) * np.cos(x)
            )
        # iwp
        return 2.0 * (
            np.cos(x) * np.cos(y) + np.cos(y) * np.cos(z) + np.cos(z) * np.cos(x)
        ) - (np.cos(2 * x) + np.cos(2 * y) + np.cos(2 * z))

    def evaluate(self, p) -> float:
        return float(self.evaluate_many(np.asarray(p, dtype=np.float64).reshape(1, 3))[0])


def eval_tpms(field: TpmsField, p) -> float:
    return field.evaluate(p)


def sample_tpms(field: TpmsField, grid: VoxelGrid, workers: int | None = None) -> VoxelGrid:
    return sample_field(field, grid, workers=workers)
