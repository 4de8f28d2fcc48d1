"""Deterministic geometry of the 1D rule model.

Rules are interior boundaries on the unit interval, with hard walls at 0 and
1.  The gaps between consecutive boundaries are the latitudes.  A threat
ignores every boundary that closes a gap no wider than the minimum latitude.

Everything here is a pure function of immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import ValidationError

SUM_TOL = 1e-12


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BoundarySet:
    """Strictly increasing interior boundary coordinates in (0, 1)."""

    interior: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.interior)
        if arr.size:
            if not np.all(np.isfinite(arr)):
                raise ValidationError("boundary coordinates must be finite")
            if arr[0] <= 0.0 or arr[-1] >= 1.0:
                raise ValidationError("boundary coordinates must lie strictly inside (0, 1)")
            if np.any(np.diff(arr) <= 0.0):
                raise ValidationError("boundary coordinates must be strictly increasing and unique")
        object.__setattr__(self, "interior", arr)

    @classmethod
    def from_unsorted(cls, coords: Iterable[float]) -> "BoundarySet":
        return cls(np.sort(np.asarray(list(coords), dtype=float)))

    @property
    def n_rules(self) -> int:
        return int(self.interior.size)

    def __len__(self) -> int:
        return self.n_rules

    def __eq__(self, other):
        if not isinstance(other, BoundarySet):
            return NotImplemented
        return np.array_equal(self.interior, other.interior)

    def __repr__(self):
        return f"BoundarySet({self.interior.tolist()!r})"


@dataclass(frozen=True, eq=False)
class LatitudeProfile:
    """Positive gap widths between consecutive boundaries; they sum to 1."""

    gaps: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.gaps)
        if arr.size == 0:
            raise ValidationError("a latitude profile has at least one gap")
        if np.any(arr <= 0.0):
            raise ValidationError("every latitude must be positive")
        if abs(float(np.sum(arr)) - 1.0) > SUM_TOL:
            raise ValidationError(f"latitudes sum to {float(np.sum(arr))!r}, not 1")
        object.__setattr__(self, "gaps", arr)

    def __len__(self) -> int:
        return int(self.gaps.size)

    def __eq__(self, other):
        if not isinstance(other, LatitudeProfile):
            return NotImplemented
        return np.array_equal(self.gaps, other.gaps)

    def __repr__(self):
        return f"LatitudeProfile({self.gaps.tolist()!r})"


BoundaryLike = Union[BoundarySet, Iterable[float]]


def _as_boundaries(b: BoundaryLike) -> BoundarySet:
    return b if isinstance(b, BoundarySet) else BoundarySet(np.asarray(list(b), dtype=float))


def check_min_latitude(lmin: float) -> float:
    lmin = float(lmin)
    if not 0.0 < lmin < 1.0:
        raise ValidationError(f"minimum latitude must be in (0, 1), got {lmin!r}")
    return lmin


def latitudes_from_boundaries(b: BoundaryLike) -> LatitudeProfile:
    """Gaps ``[b1 - 0, b2 - b1, ..., 1 - bN]`` of a boundary set."""
    b = _as_boundaries(b)
    walls = np.concatenate(([0.0], b.interior, [1.0]))
    return LatitudeProfile(np.diff(walls))


def mean_latitude(p: LatitudeProfile) -> float:
    # sum of gaps telescopes to 1, so this is 1/len(p) up to rounding
    return float(np.mean(p.gaps))


def eliminate_crossable_boundaries(b: BoundaryLike, lmin: float) -> BoundarySet:
    """Drop every boundary that closes a gap of width ``<= lmin``.

    A gap survives when it is strictly wider than ``lmin``; the boundary kept
    is the gap's right endpoint.  The last gap ends on the wall at 1, so only
    interior boundaries can disappear.  This is a single pass: gaps formed by
    merging are not re-tested.  Under the right-endpoint rule a merged gap
    that ends on an interior survivor is always wider than ``lmin`` anyway,
    so repeating the pass never changes the result.
    """
    b = _as_boundaries(b)
    lmin = check_min_latitude(lmin)
    x = b.interior
    if x.size == 0:
        return b
    gaps_left = np.diff(np.concatenate(([0.0], x)))
    return BoundarySet(x[gaps_left > lmin])


def threat_latitudes(b: BoundaryLike, lmin: float) -> LatitudeProfile:
    """Latitudes seen by a threat once crossable boundaries are removed."""
    return latitudes_from_boundaries(eliminate_crossable_boundaries(b, lmin))
