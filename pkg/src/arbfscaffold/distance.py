"""Distance kernels between points and line segments.

All kernels accept array-likes of shape (3,) (or (n, 3) for the batched
variants) and return plain floats / 1-d arrays.  The segment-segment
distance is deliberately the minimum over the four endpoint pairs, not
the true geometric distance between the segments; closed-form distances
involving a whole segment are only ever needed with a point on one side.
"""

from __future__ import annotations

import numpy as np

# A point whose perpendicular residual to the carrying line falls below this
# is treated as lying on the segment exactly.
ON_SEGMENT_TOL = 1e-12


def _as_point(p) -> np.ndarray:
    return np.asarray(p, dtype=np.float64).reshape(3)


def dist_point_point(p, q) -> float:
    """Euclidean distance between two points.

    Computed as sqrt of the componentwise squared sum so the scalar and
    batched paths round identically (np.linalg.norm on a 1-d input goes
    through dot and can differ in the last ulp).
    """
    diff = _as_point(p) - _as_point(q)
    return float(np.sqrt((diff * diff).sum()))


def points_to_point(pts: np.ndarray, q) -> np.ndarray:
    """Distances from each row of ``pts`` (n, 3) to the point ``q``."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    diff = pts - _as_point(q)
    return np.sqrt((diff * diff).sum(axis=1))


def points_to_segment(pts: np.ndarray, a, b) -> np.ndarray:
    """Distances from each row of ``pts`` (n, 3) to the segment [a, b].

    Three cases per point: exactly on the segment (residual below
    ON_SEGMENT_TOL) gives 0, a perpendicular foot inside [a, b] gives the
    perpendicular distance, otherwise the nearer endpoint distance.
    A degenerate segment (a == b) reduces to the point distance.

    Endpoints are ordered canonically before any arithmetic so the result
    is bit-identical under endpoint swap.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    a = _as_point(a)
    b = _as_point(b)
    if tuple(b) < tuple(a):
        a, b = b, a
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return points_to_point(pts, a)
    t = ((pts - a) @ d) / dd
    inside = (t >= 0.0) & (t <= 1.0)
    perp = np.linalg.norm(pts - (a + t[:, None] * d), axis=1)
    ends = np.minimum(points_to_point(pts, a), points_to_point(pts, b))
    out = np.where(inside, perp, ends)
    out[inside & (perp < ON_SEGMENT_TOL)] = 0.0
    return out


def dist_point_segment(x, a, b) -> float:
    """Distance from the point ``x`` to the segment [a, b]."""
    return float(points_to_segment(np.asarray(x, dtype=np.float64).reshape(1, 3), a, b)[0])


def dist_segment_segment(a, b, c, d) -> float:
    """Minimum distance over the four endpoint pairs of [a, b] and [c, d].

    This is an upper bound on the true segment-segment distance; the two
    agree whenever the minimum is attained at an endpoint, which holds for
    every segment pair produced by the center construction (all segments
    meet, if at all, at shared face centers).
    """
    return min(
        dist_point_point(a, c),
        dist_point_point(a, d),
        dist_point_point(b, c),
        dist_point_point(b, d),
    )
