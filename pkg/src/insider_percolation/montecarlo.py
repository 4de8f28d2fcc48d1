"""Seeded, trial-averaged sweeps of the 1D rule model.

Each trial draws ``n_rules_max`` uniform boundaries once and, for every
``N``, uses the first ``N`` of them (the incremental scheme).  Trials get
independent PCG64 streams keyed by ``(master_seed, trial)``, and are reduced
in fixed-size chunks in trial order, so results do not depend on how many
threads ran them.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from numba import njit

from . import analytic
from .errors import DivergenceError, ValidationError
from .rng import check_seed, resolve_threads, trial_rng
from .spacing_core import check_min_latitude

CHUNK = 32


@dataclass(frozen=True)
class SimulationConfig:
    n_trials: int = 100
    n_rules_max: int = 1000
    l_min: float = 0.01
    master_seed: int = 1
    incremental: bool = True

    def __post_init__(self):
        if int(self.n_trials) != self.n_trials or self.n_trials < 1:
            raise ValidationError(f"n_trials must be a positive integer, got {self.n_trials!r}")
        if int(self.n_rules_max) != self.n_rules_max or self.n_rules_max < 1:
            raise ValidationError(f"n_rules_max must be a positive integer, got {self.n_rules_max!r}")
        check_min_latitude(self.l_min)
        check_seed(self.master_seed)

    def to_dict(self) -> dict:
        return asdict(self)


def draw_boundaries(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` distinct uniforms in (0, 1), in draw order; redraws on collision."""
    while True:
        x = rng.random(n)
        if np.all(x > 0.0) and np.unique(x).size == n:
            return x


@njit(cache=True, nogil=True)
def _profile_means(s, n, lmin):
    # s[:n] sorted interior boundaries; returns (mean normal gap, mean threat gap)
    prev = 0.0
    total = 0.0
    tprev = 0.0
    ttotal = 0.0
    kept = 0
    for i in range(n):
        g = s[i] - prev
        total += g
        if g > lmin:
            ttotal += s[i] - tprev
            tprev = s[i]
            kept += 1
        prev = s[i]
    total += 1.0 - prev
    ttotal += 1.0 - tprev
    return total / (n + 1), ttotal / (kept + 1)


@njit(cache=True, nogil=True)
def _incremental_trial(x, lmin, out_normal, out_threat):
    n_max = x.size
    s = np.empty(n_max)
    for n in range(1, n_max + 1):
        v = x[n - 1]
        k = n - 1
        while k > 0 and s[k - 1] > v:
            s[k] = s[k - 1]
            k -= 1
        s[k] = v
        a, b = _profile_means(s, n, lmin)
        out_normal[n - 1] = a
        out_threat[n - 1] = b


def _run_trial(cfg: SimulationConfig, trial: int):
    rng = trial_rng(cfg.master_seed, trial)
    normal = np.empty(cfg.n_rules_max)
    threat = np.empty(cfg.n_rules_max)
    if cfg.incremental:
        _incremental_trial(draw_boundaries(rng, cfg.n_rules_max), cfg.l_min, normal, threat)
    else:
        for n in range(1, cfg.n_rules_max + 1):
            s = np.sort(draw_boundaries(rng, n))
            normal[n - 1], threat[n - 1] = _profile_means(s, n, cfg.l_min)
    return normal, threat


def _run_chunk(cfg: SimulationConfig, start: int):
    stop = min(start + CHUNK, cfg.n_trials)
    normal = np.empty((stop - start, cfg.n_rules_max))
    threat = np.empty_like(normal)
    for row, t in enumerate(range(start, stop)):
        normal[row], threat[row] = _run_trial(cfg, t)
    return normal.sum(axis=0), threat.sum(axis=0)


def _neumaier(parts):
    total = np.zeros_like(parts[0])
    comp = np.zeros_like(parts[0])
    for x in parts:
        t = total + x
        big = np.abs(total) >= np.abs(x)
        comp += np.where(big, (total - t) + x, (x - t) + total)
        total = t
    return total + comp


@dataclass
class SweepResult:
    config: SimulationConfig
    n: np.ndarray
    l_normal_sim: np.ndarray
    l_threat_sim: np.ndarray

    @property
    def ratio(self) -> np.ndarray:
        return self.l_threat_sim / self.l_normal_sim

    @cached_property
    def l_threat_exact(self) -> np.ndarray:
        return np.array([analytic.exact_threat_latitude(int(k), self.config.l_min) for k in self.n])

    @cached_property
    def l_threat_percolation(self) -> np.ndarray:
        """Infinite-chain prediction; ``inf`` where the occupation saturates."""
        return np.array([_perc_or_inf(int(k), self.config.l_min) for k in self.n])

    def at(self, n: int) -> dict:
        i = int(n) - 1
        return {
            "N": int(self.n[i]),
            "l_normal_sim": float(self.l_normal_sim[i]),
            "l_threat_sim": float(self.l_threat_sim[i]),
            "l_threat_exact": float(self.l_threat_exact[i]),
            "l_threat_percolation": float(self.l_threat_percolation[i]),
            "ratio": float(self.ratio[i]),
        }


def _perc_or_inf(n: int, lmin: float) -> float:
    try:
        return analytic.percolation_threat_latitude(n, lmin)
    except DivergenceError:
        return float("inf")


def run_sweep(cfg: SimulationConfig, threads: int = 1) -> SweepResult:
    """Average mean normal and threat latitudes over trials for N = 1..n_rules_max.

    The average is over per-trial means, not over pooled gaps.
    """
    starts = list(range(0, cfg.n_trials, CHUNK))
    workers = min(resolve_threads(threads), len(starts))
    if workers == 1:
        parts = [_run_chunk(cfg, s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda s: _run_chunk(cfg, s), starts))
    normal = _neumaier([p[0] for p in parts]) / cfg.n_trials
    threat = _neumaier([p[1] for p in parts]) / cfg.n_trials
    return SweepResult(cfg, np.arange(1, cfg.n_rules_max + 1), normal, threat)


def smoothed_minimum(values: np.ndarray, width: int = 10, start: int = 1) -> float:
    """Location of the minimum of a boxcar-smoothed curve.

    ``values[i]`` is taken to sit at ``start + i``; the returned location is
    the centre of the minimising window.
    """
    values = np.asarray(values, dtype=float)
    if width < 1 or width > values.size:
        raise ValidationError(f"smoothing width {width} does not fit {values.size} points")
    smooth = np.convolve(values, np.ones(width) / width, mode="valid")
    return start + int(np.argmin(smooth)) + (width - 1) / 2


@dataclass(frozen=True, eq=False)
class SpacingHistogram:
    """Pooled gap widths from independent boundary sets of ``n_rules`` boundaries."""

    n_rules: int
    latitudes: np.ndarray  # sorted ascending

    def cdf(self, x) -> np.ndarray:
        """Empirical CDF evaluated at ``x``."""
        return np.searchsorted(self.latitudes, np.asarray(x, dtype=float), side="right") / self.latitudes.size

    def grid(self, points: int = 200) -> tuple[np.ndarray, np.ndarray]:
        """Evenly spaced evaluation grid over the sample range and the CDF on it."""
        x = np.linspace(0.0, float(self.latitudes[-1]), points)
        return x, self.cdf(x)

    def ks_distance(self, model_cdf: Callable[[np.ndarray], np.ndarray]) -> float:
        """Kolmogorov-Smirnov sup distance to ``model_cdf``."""
        x = self.latitudes
        m = x.size
        f = model_cdf(x)
        # ties: empirical CDF jumps only at the last of equal values
        hi = np.searchsorted(x, x, side="right") / m
        lo = np.searchsorted(x, x, side="left") / m
        return float(max(np.max(hi - f), np.max(f - lo)))

    def ks_exponential(self) -> float:
        """Distance to ``1 - exp(-(N + 1) L)``."""
        rate = self.n_rules + 1
        return self.ks_distance(lambda x: -np.expm1(-rate * x))


def spacing_distribution(n_rules: int, n_trials: int, seed: int) -> SpacingHistogram:
    if int(n_rules) != n_rules or n_rules < 0:
        raise ValidationError(f"n_rules must be a non-negative integer, got {n_rules!r}")
    if int(n_trials) != n_trials or n_trials < 1:
        raise ValidationError(f"n_trials must be a positive integer, got {n_trials!r}")
    n_rules, n_trials = int(n_rules), int(n_trials)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
    x = rng.random((n_trials, n_rules))
    x.sort(axis=1)
    # a row with a zero or a repeated coordinate is not a valid boundary set
    while n_rules:
        bad = (x[:, 0] <= 0.0) | np.any(np.diff(x, axis=1) <= 0.0, axis=1)
        if not bad.any():
            break
        fresh = rng.random((int(bad.sum()), n_rules))
        fresh.sort(axis=1)
        x[bad] = fresh
    walls = np.concatenate((np.zeros((n_trials, 1)), x, np.ones((n_trials, 1))), axis=1)
    lat = np.diff(walls, axis=1).ravel()
    lat.sort()
    lat.setflags(write=False)
    return SpacingHistogram(n_rules, lat)
