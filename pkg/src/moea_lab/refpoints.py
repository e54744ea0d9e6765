"""Simplex-lattice reference points and reference-line geometry.

The structured reference set with ``p`` divisions per objective is the
lattice of points with coordinates that are non-negative multiples of
``1/p`` summing to 1; it has C(p + M - 1, M - 1) points. Individuals are
compared to reference points via the perpendicular distance to the line
through the origin, or equivalently the angle between the vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ReferencePointSet",
    "generate_reference_points",
    "perpendicular_distance",
    "angle_between",
]


@dataclass(frozen=True)
class ReferencePointSet:
    """Immutable lattice of reference points on the unit simplex."""

    points: np.ndarray  # (count, M), lexicographically sorted
    p: int
    dim: int

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def unit_points(self) -> np.ndarray:
        """Points scaled to unit Euclidean length (for line geometry)."""
        norms = np.linalg.norm(self.points, axis=1, keepdims=True)
        return self.points / norms


def _compositions(total: int, parts: int) -> np.ndarray:
    """All orderings of non-negative integers with given sum, lexicographic."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    rows = []
    for first in range(total + 1):
        rest = _compositions(total - first, parts - 1)
        block = np.empty((rest.shape[0], parts), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = rest
        rows.append(block)
    return np.concatenate(rows, axis=0)


def generate_reference_points(dim: int, p: int) -> ReferencePointSet:
    """Lattice with ``p`` divisions in ``dim`` objectives.

    Enumerates integer compositions of p into dim parts and divides by p,
    so coordinates are exact (up to one float division each) and the count
    is exactly C(p + dim - 1, dim - 1).
    """
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    if p < 1:
        raise ValueError(f"divisions must be >= 1, got {p}")
    grid = _compositions(p, dim)
    return ReferencePointSet(points=grid / float(p), p=p, dim=dim)


def perpendicular_distance(v, r) -> float:
    """Euclidean distance from ``v`` to the line through the origin and ``r``."""
    v = np.asarray(v, dtype=float)
    r = np.asarray(r, dtype=float)
    rr = float(r @ r)
    if rr == 0.0:
        raise ValueError("reference point must be non-zero")
    proj = (float(v @ r) / rr) * r
    return float(np.linalg.norm(v - proj))


def angle_between(u, v) -> float:
    """Angle in [0, pi] between two non-zero vectors.

    The normalized inner product is clamped into [-1, 1] before arccos to
    stay safe at (near-)collinear vectors.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("angle is undefined for a zero vector")
    cos = float(u @ v) / (nu * nv)
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))
