"""Place an environment with N rules and minimum latitude ``l_min`` in one of
four regimes, by the ratio ``r = N / N_min`` with ``N_min = 1 / l_min``.

Default cut points: under-regulated below 0.1, possibly optimal up to 0.8,
tipping point through 1.2, over-regulated beyond.  The "possibly optimal"
label is a name for a band, not a claim that it is optimal.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

from . import analytic
from .errors import DomainError


class Regime(str, Enum):
    UNDER_REGULATED = "under-regulated"
    POSSIBLY_OPTIMAL = "possibly-optimal"
    TIPPING_POINT = "tipping-point"
    OVER_REGULATED = "over-regulated"

    @property
    def index(self) -> int:
        return list(Regime).index(self)


DEFAULT_CUTOFFS = (0.1, 0.8, 1.2)


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    n: int
    l_min: float
    n_min_value: float
    l_normal: float
    l_threat_exact: float
    ratio: float
    distance_to_tipping: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["regime"] = self.regime.value
        return d

    def summary(self) -> str:
        return "\n".join(
            [
                f"regime:              {self.regime.value}",
                f"rules N:             {self.n}",
                f"minimum latitude:    {self.l_min:g}",
                f"N_min = 1/l_min:     {self.n_min_value:g}",
                f"N / N_min:           {self.distance_to_tipping:.4g}",
                f"normal latitude:     {self.l_normal:.6g}",
                f"threat latitude:     {self.l_threat_exact:.6g}",
                f"threat / normal:     {self.ratio:.4g}",
            ]
        )


def _check_cutoffs(cutoffs) -> tuple:
    lo, mid, hi = (float(c) for c in cutoffs)
    if not 0.0 <= lo <= mid <= hi or not all(map(math.isfinite, (lo, mid, hi))):
        raise DomainError(f"regime cutoffs must be finite and ascending, got {cutoffs!r}")
    return lo, mid, hi


def regime_for_ratio(r: float, cutoffs=DEFAULT_CUTOFFS) -> Regime:
    lo, mid, hi = _check_cutoffs(cutoffs)
    if r < lo:
        return Regime.UNDER_REGULATED
    if r < mid:
        return Regime.POSSIBLY_OPTIMAL
    if r <= hi:
        return Regime.TIPPING_POINT
    return Regime.OVER_REGULATED


def classify(n: int, l_min: float, cutoffs=DEFAULT_CUTOFFS) -> RegimeReport:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"rule count must be a non-negative integer, got {n!r}")
    l_min = float(l_min)
    if not 0.0 < l_min < 1.0:
        raise DomainError(f"minimum latitude must be in (0, 1), got {l_min!r}")
    n = int(n)
    n_min = analytic.n_min(l_min).value
    r = n / n_min
    l_normal = 1.0 / (n + 1)
    l_threat = analytic.exact_threat_latitude(n, l_min)
    return RegimeReport(
        regime=regime_for_ratio(r, cutoffs),
        n=n,
        l_min=l_min,
        n_min_value=n_min,
        l_normal=l_normal,
        l_threat_exact=l_threat,
        ratio=l_threat / l_normal,
        distance_to_tipping=r,
    )
