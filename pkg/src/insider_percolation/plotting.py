"""Figures written next to CLI outputs.

Only the Agg backend is used, so nothing here needs a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import analytic  # noqa: E402
from .regime import DEFAULT_CUTOFFS, Regime  # noqa: E402

# PNG metadata without a timestamp keeps reruns byte-stable
_META = {"Software": None}

_REGIME_COLORS = {
    Regime.UNDER_REGULATED: "#dbe9f6",
    Regime.POSSIBLY_OPTIMAL: "#d9f0d3",
    Regime.TIPPING_POINT: "#fde0b2",
    Regime.OVER_REGULATED: "#f4c7c3",
}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)
    return path


def plot_latitudes(result, path):
    """Normal, simulated threat, exact and percolation latitudes against N on log-log axes."""
    n = result.n
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.loglog(n, result.l_normal_sim, "b", label="normal")
    ax.loglog(n, result.l_threat_sim, "r", label="threat")
    ax.loglog(n, result.l_threat_exact, "r:", label="exact")
    perc = np.where(np.isfinite(result.l_threat_percolation), result.l_threat_percolation, np.nan)
    ax.loglog(n, perc, "k--", lw=1, label="percolation (infinite)")
    ax.axvline(1.0 / result.config.l_min, color="0.6", lw=0.8)
    ax.set_xlabel("number of rules")
    ax.set_ylabel("average latitude")
    ax.set_xlim(1, n[-1])
    ax.set_ylim(1.0 / max(n[-1], 2), 1)
    ax.legend(loc="upper center")
    return _save(fig, path)


def plot_ratio(result, path):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.semilogx(result.n, result.ratio, "r", label="simulated")
    ax.semilogx(result.n, result.l_threat_exact * (result.n + 1), "r:", label="exact")
    ax.axvline(1.0 / result.config.l_min, color="0.6", lw=0.8)
    ax.set_yscale("log")
    ax.set_xlabel("number of rules")
    ax.set_ylabel("threat latitude / normal latitude")
    ax.legend(loc="upper left")
    return _save(fig, path)


def plot_spacing_cdf(hist, path, points: int = 400):
    x, emp = hist.grid(points)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.plot(x, emp, "b", label=f"empirical, N={hist.n_rules}")
    ax.plot(x, -np.expm1(-(hist.n_rules + 1) * x), "r:", label=f"1 - exp(-{hist.n_rules + 1} L)")
    ax.set_xlabel("latitude L")
    ax.set_ylabel("probability site is occupied")
    ax.set_ylim(0, 1.02)
    ax.legend(loc="lower right")
    return _save(fig, path)


def plot_regimes(n: int, l_min: float, path, cutoffs=DEFAULT_CUTOFFS):
    """Exact latitude curves with the regime bands shaded and ``n`` marked."""
    n_min = 1.0 / l_min
    n_hi = max(int(3 * n_min), int(1.5 * n), 10)
    ns = np.arange(1, n_hi + 1)
    exact = np.array([analytic.exact_threat_latitude(int(k), l_min) for k in ns])
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    edges = [1, cutoffs[0] * n_min, cutoffs[1] * n_min, cutoffs[2] * n_min, n_hi]
    for regime, lo, hi in zip(Regime, edges[:-1], edges[1:]):
        if hi > lo:
            ax.axvspan(max(lo, 1), hi, color=_REGIME_COLORS[regime], label=regime.value)
    ax.loglog(ns, 1.0 / (ns + 1), "b", label="normal")
    ax.loglog(ns, exact, "r", label="threat (exact)")
    ax.axhline(l_min, color="0.4", lw=0.8, ls="--")
    if n >= 1:
        ax.plot([n], [analytic.exact_threat_latitude(n, l_min)], "ko")
    ax.set_xlabel("number of rules")
    ax.set_ylabel("average latitude")
    ax.legend(loc="lower left", fontsize=8)
    return _save(fig, path)


def plot_spanning(curves: dict, path):
    """Spanning probability against p for each geometry.

    ``curves`` maps a label to ``(critical_points, reference_pc)``.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for label, (pts, ref) in curves.items():
        total = pts.size
        pts = np.sort(pts[np.isfinite(pts)])
        if pts.size == 0:
            continue
        frac = np.arange(1, pts.size + 1) / total
        line, = ax.step(pts, frac, where="post", label=label)
        if ref is not None:
            ax.axvline(ref, color=line.get_color(), lw=0.8, ls=":")
    ax.axhline(0.5, color="0.6", lw=0.8)
    ax.set_xlabel("occupation probability p")
    ax.set_ylabel("spanning probability")
    ax.set_xlim(0, 1)
    ax.legend(loc="upper left", fontsize=8)
    return _save(fig, path)
