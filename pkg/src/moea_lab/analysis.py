"""Coverage tracking, loss detection, and reference-lattice verification.

Coverage is keyed on exact integer objective tuples, never on normalized
floats. The lattice verifier enumerates the 3-OMM front, normalizes it by
the plain min-max map, associates every value with its nearest reference
line, and reports the exact angular quantities that make unique
association provable (smallest angle between distinct front values versus
twice the largest association angle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .problems import pareto_front_3omm
from .refpoints import generate_reference_points

__all__ = [
    "RunRecord",
    "AngleReport",
    "MinimalPResult",
    "coverage",
    "detect_loss",
    "verify_unique_association",
    "minimal_p_search",
]

Value = tuple[int, ...]

ANGLE_SLACK = 1e-12


@dataclass
class RunRecord:
    """Per-iteration statistics of one optimization run."""

    run_id: str
    iteration: int
    covered: int
    front_size: int
    new_values: tuple[Value, ...] = ()
    losses_cum: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class AngleReport:
    """Exact association geometry of the 3-OMM front for one (n, p)."""

    n: int
    p: int
    min_pairwise_angle: float
    max_assoc_angle: float
    separated: bool  # min pairwise > 2 * max association
    collisions: int  # distinct front values sharing a reference point


@dataclass(frozen=True)
class MinimalPResult:
    """Outcome of scanning divisions for the first collision-free lattice."""

    n: int
    p_min: int | None  # None when no collision-free p in range
    lower_bound: int  # ceil(n / sqrt(2)): fewer divisions cannot suffice
    p_searched_max: int


def coverage(values: np.ndarray, front: np.ndarray) -> set[Value]:
    """Front values represented in a population (exact integer match)."""
    front_set = {tuple(int(v) for v in row) for row in np.atleast_2d(front)}
    pop_set = {tuple(int(v) for v in row) for row in np.atleast_2d(values)}
    return pop_set & front_set


def detect_loss(previous: set[Value], current: set[Value]) -> list[Value]:
    """Previously covered front values with no representative anymore."""
    return sorted(previous - current)


def _normalized_front(n: int) -> np.ndarray:
    front = pareto_front_3omm(n).astype(float)
    z_max = np.array([n, n / 2, n / 2], dtype=float)
    return front / z_max


def verify_unique_association(n: int, p: int) -> AngleReport:
    """Check that every 3-OMM front value claims its own reference point.

    Enumerates all (n/2+1)^2 front values, normalizes with the min-max map
    (ideal at the origin, per-objective maxima (n, n/2, n/2)), associates
    each with the nearest reference line, and measures the exact extremal
    angles. ``separated`` means the smallest angle between two distinct
    normalized front values exceeds twice the largest value-to-reference
    angle, which forces zero collisions.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError(f"3-OMM requires even n >= 2, got {n}")
    if p < 1:
        raise ValueError(f"divisions must be >= 1, got {p}")

    nf = _normalized_front(n)
    refs = generate_reference_points(3, p)
    units = refs.unit_points

    norms = np.linalg.norm(nf, axis=1)
    cos_to_refs = (nf @ units.T) / norms[:, None]
    np.clip(cos_to_refs, -1.0, 1.0, out=cos_to_refs)
    assoc = np.argmax(cos_to_refs, axis=1)
    max_assoc_angle = float(
        np.arccos(cos_to_refs[np.arange(len(nf)), assoc]).max()
    )

    unit_front = nf / norms[:, None]
    cos_pairs = np.clip(unit_front @ unit_front.T, -1.0, 1.0)
    np.fill_diagonal(cos_pairs, -1.0)
    min_pairwise_angle = float(np.arccos(cos_pairs.max()))

    collisions = len(nf) - len(np.unique(assoc))
    return AngleReport(
        n=n,
        p=p,
        min_pairwise_angle=min_pairwise_angle,
        max_assoc_angle=max_assoc_angle,
        separated=min_pairwise_angle > 2.0 * max_assoc_angle,
        collisions=collisions,
    )


def minimal_p_search(n: int, p_max: int, p_min: int = 1) -> MinimalPResult:
    """Smallest division count with zero association collisions.

    Linear scan over [p_min, p_max] (collision-freeness is not known to be
    monotone in p, so no bisection). The reported lower bound ceil(n /
    sqrt(2)) is the counting threshold below which there are fewer
    reference points than front values.
    """
    if p_max < p_min or p_min < 1:
        raise ValueError(f"invalid division range [{p_min}, {p_max}]")
    lower = math.ceil(n / math.sqrt(2))
    for p in range(p_min, p_max + 1):
        if verify_unique_association(n, p).collisions == 0:
            return MinimalPResult(n=n, p_min=p, lower_bound=lower, p_searched_max=p_max)
    return MinimalPResult(n=n, p_min=None, lower_bound=lower, p_searched_max=p_max)
