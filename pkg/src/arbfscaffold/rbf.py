"""Radial basis function interpolation over point and segment centers.

The field is s(x) = sum_i w_i * phi(d_i(x)) where d_i is the Euclidean
distance to a point center or the point-to-segment distance to a segment
center.  Weights come from the dense collocation system A w = f with
A[i][j] = phi(d(center_i, center_j)); the distance between two segment
centers is the minimum over their endpoint pairs.  No polynomial term is
appended; an optional Tikhonov lambda can be added to the diagonal when a
basis/shape combination turns out near-singular.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .distance import (
    dist_point_point,
    dist_point_segment,
    dist_segment_segment,
    points_to_point,
    points_to_segment,
)
from .errors import DuplicateCenterError, ParseError, SingularMatrixError, ValidationError
from .mesh import CenterSegment, NodalValue, VolumetricMesh, assemble_center_set

BASIS_KINDS = ("gaussian", "mq", "imq", "tps")
MODES = ("isotropic", "anisotropic")

# Pairwise center distances below this are checked for duplicate geometry.
DUPLICATE_TOL = 1e-12
# A pivot below this fraction of max|A| counts as singular.
PIVOT_TOL = 1e-12
# Post-solve residual bound: ||A w - f||_inf <= RESIDUAL_TOL * (1 + ||f||_inf).
RESIDUAL_TOL = 1e-8

_MODEL_MAGIC = "ARBF1"


@dataclass(frozen=True)
class Basis:
    """Basis kind plus shape parameter.

    gaussian: exp(-(c r)^2)        mq:  sqrt(r^2 + c^2)
    imq:      1 / sqrt(r^2 + c^2)  tps: r^2 ln r  (0 at r = 0; c unused)
    """

    kind: str
    c: float = 0.1

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ValidationError(f"unknown basis {self.kind!r}, expected one of {BASIS_KINDS}")
        if self.kind != "tps" and not self.c > 0.0:
            raise ValidationError(f"shape parameter must be positive, got {self.c}")


def eval_basis(basis: Basis, r):
    """Apply the basis to a scalar or array of distances."""
    r = np.asarray(r, dtype=np.float64)
    if basis.kind == "gaussian":
        out = np.exp(-((basis.c * r) ** 2))
    elif basis.kind == "mq":
        out = np.sqrt(r * r + basis.c * basis.c)
    elif basis.kind == "imq":
        out = 1.0 / np.sqrt(r * r + basis.c * basis.c)
    else:  # tps, defined as 0 at r = 0
        flat = np.atleast_1d(r)
        out = np.zeros_like(flat)
        mask = flat > 0.0
        out[mask] = flat[mask] * flat[mask] * np.log(flat[mask])
        out = out.reshape(r.shape)
    return float(out) if out.ndim == 0 else out


def center_value(center) -> float:
    return center.value


def center_positions(centers) -> np.ndarray:
    """All positions touched by a center list (segment endpoints included)."""
    pts = []
    for c in centers:
        if isinstance(c, NodalValue):
            pts.append(c.position)
        else:
            pts.append(c.a)
            pts.append(c.b)
    return np.asarray(pts)


def pairwise_distance(ci, cj) -> float:
    """Distance between two centers, dispatching on point/segment variants."""
    pi = isinstance(ci, NodalValue)
    pj = isinstance(cj, NodalValue)
    if pi and pj:
        return dist_point_point(ci.position, cj.position)
    if pi:
        return dist_point_segment(ci.position, cj.a, cj.b)
    if pj:
        return dist_point_segment(cj.position, ci.a, ci.b)
    return dist_segment_segment(ci.a, ci.b, cj.a, cj.b)


def _same_geometry(ci, cj) -> bool:
    # Segments that merely touch (shared face center) are legitimate; only
    # identical geometry would duplicate a matrix row.
    if isinstance(ci, NodalValue) and isinstance(cj, NodalValue):
        return True  # distance already below DUPLICATE_TOL
    if isinstance(ci, CenterSegment) and isinstance(cj, CenterSegment):
        same = (dist_point_point(ci.a, cj.a) < DUPLICATE_TOL
                and dist_point_point(ci.b, cj.b) < DUPLICATE_TOL)
        flipped = (dist_point_point(ci.a, cj.b) < DUPLICATE_TOL
                   and dist_point_point(ci.b, cj.a) < DUPLICATE_TOL)
        return same or flipped
    return False


def assemble_matrix(centers, basis: Basis, lam: float = 0.0):
    """Dense collocation system (A, rhs) for a center list.

    Raises DuplicateCenterError when two centers coincide geometrically,
    which almost always means the input mesh was degenerate.
    """
    n = len(centers)
    if n == 0:
        raise ValidationError("center list is empty")
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = pairwise_distance(centers[i], centers[j])
            if d < DUPLICATE_TOL and _same_geometry(centers[i], centers[j]):
                raise DuplicateCenterError(
                    f"centers {i} and {j} coincide; check the mesh for degenerate cells"
                )
            dist[i, j] = d
            dist[j, i] = d
    a = eval_basis(basis, dist)
    if lam != 0.0:
        a = a + lam * np.eye(n)
    rhs = np.array([center_value(c) for c in centers], dtype=np.float64)
    return a, rhs


def _lu_solve_checked(a: np.ndarray, rhs: np.ndarray):
    try:
        with warnings.catch_warnings():
            # the pivot check below reports singularity on our own terms
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(a)
    except Exception as exc:  # scipy raises LinAlgError on hard failure
        raise SingularMatrixError(f"LU factorization failed: {exc}") from exc
    pivots = np.abs(np.diag(lu))
    scale = np.abs(a).max()
    if scale == 0.0 or pivots.min() < PIVOT_TOL * scale:
        raise SingularMatrixError(
            "interpolation matrix is numerically singular; "
            "a small Tikhonov lambda (e.g. 1e-10) usually fixes this"
        )
    w = lu_solve((lu, piv), rhs)
    # One step of iterative refinement tightens the residual cheaply.
    w = w + lu_solve((lu, piv), rhs - a @ w)
    return w, float(pivots.min()), float(pivots.max())


def solve_weights(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve A w = rhs by dense LU with partial pivoting."""
    w, _, _ = _lu_solve_checked(np.asarray(a, dtype=np.float64),
                                np.asarray(rhs, dtype=np.float64))
    return w


@dataclass(eq=False)
class InterpolationModel:
    """A fitted field: centers, basis, mode label, lambda, and solved weights."""

    centers: list
    basis: Basis
    mode: str
    lam: float
    weights: np.ndarray

    def __post_init__(self):
        if len(self.weights) != len(self.centers):
            raise ValidationError("one weight per center required")
        if not np.all(np.isfinite(self.weights)):
            raise ValidationError("weights must be finite")

    def evaluate_many(self, pts: np.ndarray) -> np.ndarray:
        """Field values at each row of ``pts`` (n, 3)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        acc = np.zeros(len(pts))
        for w, c in zip(self.weights, self.centers):
            if isinstance(c, NodalValue):
                d = points_to_point(pts, c.position)
            else:
                d = points_to_segment(pts, c.a, c.b)
            acc += w * eval_basis(self.basis, d)
        return acc

    def evaluate(self, x) -> float:
        return float(self.evaluate_many(np.asarray(x, dtype=np.float64).reshape(1, 3))[0])

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        pos = center_positions(self.centers)
        return pos.min(axis=0), pos.max(axis=0)


@dataclass(frozen=True)
class FitReport:
    """Solve diagnostics: pivot-ratio condition estimate and final residual."""

    n_centers: int
    condition_estimate: float
    residual_inf: float


def fit(centers, basis: Basis, mode: str, lam: float = 0.0) -> InterpolationModel:
    """Assemble and solve the collocation system for a center list."""
    model, _ = fit_with_report(centers, basis, mode, lam)
    return model


def fit_with_report(centers, basis: Basis, mode: str, lam: float = 0.0):
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}")
    a, rhs = assemble_matrix(centers, basis, lam)
    w, piv_min, piv_max = _lu_solve_checked(a, rhs)
    residual = float(np.abs(a @ w - rhs).max())
    if residual > RESIDUAL_TOL * (1.0 + float(np.abs(rhs).max())):
        raise SingularMatrixError(
            f"solve residual {residual:.3e} exceeds tolerance; "
            "the system is too ill-conditioned at this shape parameter"
        )
    model = InterpolationModel(centers=list(centers), basis=basis, mode=mode,
                               lam=lam, weights=w)
    return model, FitReport(len(centers), piv_max / piv_min, residual)


def fit_mesh(mesh: VolumetricMesh, basis: Basis, mode: str, lam: float = 0.0):
    """Center construction plus fit, returning (model, report)."""
    return fit_with_report(assemble_center_set(mesh, mode), basis, mode, lam)


# ---------------------------------------------------------------------------
# Model file (ARBF1)
# ---------------------------------------------------------------------------

def _f17(x: float) -> str:
    return f"{float(x):.17g}"


def save_model(model: InterpolationModel, path: str) -> None:
    """Write a model as ASCII: magic, basis, lambda, N, centers, weights."""
    import os

    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{_MODEL_MAGIC}\n")
        fh.write(f"basis {model.basis.kind} {_f17(model.basis.c)}\n")
        fh.write(f"lambda {_f17(model.lam)}\n")
        fh.write(f"{len(model.centers)}\n")
        for c in model.centers:
            if isinstance(c, NodalValue):
                p = c.position
                fh.write(f"P {_f17(p[0])} {_f17(p[1])} {_f17(p[2])} {_f17(c.value)}\n")
            else:
                a, b = c.a, c.b
                fh.write(
                    "S "
                    + " ".join(_f17(v) for v in (a[0], a[1], a[2], b[0], b[1], b[2]))
                    + f" {_f17(c.value)}\n"
                )
        for w in model.weights:
            fh.write(f"{_f17(w)}\n")


def load_model(path: str) -> InterpolationModel:
    """Read a model written by save_model; the mode is inferred from the centers."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0].strip() != _MODEL_MAGIC:
        raise ParseError(f"missing {_MODEL_MAGIC} magic", path, 1)
    try:
        basis_tokens = lines[1].split()
        lam_tokens = lines[2].split()
        n = int(lines[3].strip())
    except (IndexError, ValueError) as exc:
        raise ParseError(f"malformed header: {exc}", path) from None
    if len(basis_tokens) != 3 or basis_tokens[0] != "basis":
        raise ParseError("expected 'basis <kind> <c>'", path, 2)
    if len(lam_tokens) != 2 or lam_tokens[0] != "lambda":
        raise ParseError("expected 'lambda <value>'", path, 3)
    basis = Basis(kind=basis_tokens[1], c=float(basis_tokens[2]))
    lam = float(lam_tokens[1])
    if len(lines) < 4 + 2 * n:
        raise ParseError(f"expected {n} centers and {n} weights", path)
    centers = []
    for i in range(n):
        lineno = 5 + i
        tokens = lines[4 + i].split()
        try:
            if tokens[0] == "P" and len(tokens) == 5:
                vals = [float(t) for t in tokens[1:]]
                centers.append(NodalValue(np.array(vals[:3]), vals[3]))
            elif tokens[0] == "S" and len(tokens) == 8:
                vals = [float(t) for t in tokens[1:]]
                centers.append(CenterSegment(np.array(vals[:3]), np.array(vals[3:6]), vals[6]))
            else:
                raise ParseError(f"malformed center line {tokens!r}", path, lineno)
        except (ValueError, ValidationError) as exc:
            raise ParseError(f"malformed center: {exc}", path, lineno) from None
    try:
        weights = np.array([float(lines[4 + n + i]) for i in range(n)])
    except ValueError as exc:
        raise ParseError(f"malformed weight: {exc}", path) from None
    mode = "anisotropic" if any(isinstance(c, CenterSegment) for c in centers) else "isotropic"
    return InterpolationModel(centers=centers, basis=basis, mode=mode, lam=lam, weights=weights)
