"""Closed-form latitudes for the rule model and its 1D percolation mapping.

A gap narrower than the minimum latitude is an *occupied site*.  Gap widths
for N uniform boundaries are modelled as exponential with rate N + 1, so the
occupation probability is ``1 - exp(-(N + 1) L)``.  Everything downstream is
built from the survival ``exp(-(N + 1) L)`` directly, which avoids the
cancellation in ``1 - P`` once P is close to 1.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DivergenceError, DomainError

# infinite 1D chain
PC_1D = 1.0


def _check_count(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"rule count must be a non-negative integer, got {n!r}")
    return int(n)


def _check_lmin(lmin: float, *, allow_zero: bool = True) -> float:
    lmin = float(lmin)
    lo_ok = lmin >= 0.0 if allow_zero else lmin > 0.0
    if not (lo_ok and lmin < 1.0):
        raise DomainError(f"minimum latitude out of range: {lmin!r}")
    return lmin


def _checked_length(length: float) -> float:
    length = float(length)
    if not 0.0 <= length <= 1.0:
        raise DomainError(f"latitude must be in [0, 1], got {length!r}")
    return length


def survival_probability(n: int, length: float) -> float:
    """``exp(-(n + 1) * length)``: chance a gap is wider than ``length``."""
    return math.exp(-(_check_count(n) + 1) * _checked_length(length))


def occupation_probability(n: int, length: float) -> float:
    """``P(N, L) = 1 - exp(-(N + 1) L)``."""
    return -math.expm1(-(_check_count(n) + 1) * _checked_length(length))


def threat_boundary_count_expected(n: int, lmin: float) -> float:
    """Expected surviving boundaries ``(1 - P(N, lmin)) N``; kept real-valued."""
    n = _check_count(n)
    return n * survival_probability(n, _check_lmin(lmin))


def exact_threat_latitude(n: int, lmin: float) -> float:
    """``1 / (N exp(-(N + 1) lmin) + 1)``."""
    return 1.0 / (threat_boundary_count_expected(n, lmin) + 1.0)


class NMin(NamedTuple):
    value: float
    nearest: int


def n_min(lmin: float) -> NMin:
    """Rule count minimising the threat latitude, ``1 / lmin``."""
    lmin = _check_lmin(lmin, allow_zero=False)
    v = 1.0 / lmin
    return NMin(v, int(round(v)))


class MinThreatLatitude(NamedTuple):
    exact: float
    approx: float

    @property
    def relative_gap(self) -> float:
        return abs(self.exact - self.approx) / self.approx


def min_threat_latitude(lmin: float) -> MinThreatLatitude:
    """Threat latitude at ``N = 1/lmin`` together with its ``e * lmin`` limit."""
    lmin = _check_lmin(lmin, allow_zero=False)
    exact = 1.0 / ((1.0 / lmin) * math.exp(-(lmin + 1.0)) + 1.0)
    return MinThreatLatitude(exact, math.e * lmin)


def mean_cluster_size_1d(p: float, pc: float = PC_1D) -> float:
    """Size-weighted mean cluster size ``(pc + p) / (pc - p)``.

    Raises
    ------
    DivergenceError
        If ``p >= pc``.
    """
    p, pc = float(p), float(pc)
    if not 0.0 < pc <= 1.0:
        raise DomainError(f"threshold must be in (0, 1], got {pc!r}")
    if p < 0.0:
        raise DomainError(f"probability must be non-negative, got {p!r}")
    if p >= pc:
        raise DivergenceError(f"mean cluster size diverges at p={p!r} >= pc={pc!r}")
    return (pc + p) / (pc - p)


def percolation_threat_latitude(n: int, lmin: float) -> float:
    """Average site latitude ``1/(N+1)`` scaled by the mean cluster size.

    With ``q = exp(-(N+1) lmin)`` and ``P = 1 - q`` this is
    ``(2 - q) / (q (N + 1))``.
    """
    n = _check_count(n)
    q = survival_probability(n, _check_lmin(lmin))
    if q == 0.0:
        raise DivergenceError(
            f"occupation probability saturates at N={n}, lmin={lmin!r}: exponent underflow"
        )
    return (2.0 - q) / q / (n + 1)
