"""Site percolation on finite lattices.

Lattices are stored as undirected edge lists plus a CSR neighbour table.
Grids use open boundaries; spanning means one occupied cluster touches both
faces perpendicular to axis 0 (both ends, for a line).  Rings and Bethe
trees have no opposite faces and never span.

Thresholds are read off as the occupation probability where the spanning
probability crosses 1/2.  Trials are coupled: trial ``t`` draws one uniform
per site and a site is occupied at ``p`` iff its uniform is ``< p``, so the
estimated spanning probability is monotone in ``p`` and bisection is well
posed.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numba import njit

from .errors import ConvergenceError, UnsupportedGeometryError, ValidationError
from .rng import check_seed, resolve_threads, trial_rng, trial_seed


@dataclass(frozen=True)
class ThresholdRow:
    dimension: Optional[int]
    lattice: str
    kind: str
    z: Optional[int]
    pc: Optional[float]  # None for the Bethe row, where pc = 1/(z-1)


# Published site thresholds; "dimple cubic" in the source table is simple cubic.
REFERENCE_THRESHOLDS = (
    ThresholdRow(1, "linear", "linear-1d", 2, 1.0),
    ThresholdRow(2, "honeycomb", "honeycomb-2d", 3, 0.696),
    ThresholdRow(2, "square", "square-2d", 4, 0.593),
    ThresholdRow(2, "triangular", "triangular-2d", 6, 0.5),
    ThresholdRow(3, "diamond", "diamond-3d", 4, 0.430),
    ThresholdRow(3, "simple cubic", "simple-cubic-3d", 6, 0.312),
    ThresholdRow(3, "body centered cubic", "bcc-3d", 8, 0.246),
    ThresholdRow(3, "face centered cubic", "fcc-3d", 12, 0.198),
    ThresholdRow(4, "hypercubic", "hypercubic-4d", 8, 0.197),
    ThresholdRow(5, "hypercubic", "hypercubic-5d", 10, 0.141),
    ThresholdRow(6, "hypercubic", "hypercubic-6d", 12, 0.107),
    ThresholdRow(7, "hypercubic", "hypercubic-7d", 14, 0.089),
    ThresholdRow(None, "Bethe lattice (Cayley graph)", "bethe", None, None),
)

_UNSUPPORTED = {"diamond-3d", "bcc-3d", "fcc-3d"}
_FIXED = {
    "linear-1d": (1, 2),
    "ring-1d": (1, 2),
    "square-2d": (2, 4),
    "triangular-2d": (2, 6),
    "honeycomb-2d": (2, 3),
    "simple-cubic-3d": (3, 6),
    "diamond-3d": (3, 4),
    "bcc-3d": (3, 8),
    "fcc-3d": (3, 12),
}
_HYPERCUBIC = re.compile(r"hypercubic-(\d+)d$")

DEFAULT_SIZES = {
    "linear-1d": 10_000,
    "ring-1d": 10_000,
    "square-2d": 128,
    "triangular-2d": 128,
    "honeycomb-2d": 128,
    "simple-cubic-3d": 32,
    "hypercubic-4d": 12,
    "hypercubic-5d": 7,
    "hypercubic-6d": 5,
    "hypercubic-7d": 4,
    "bethe": 8,
}


@dataclass(frozen=True)
class LatticeGeometry:
    """Lattice kind plus linear size.

    ``size`` is the side length for grids, the site count for 1D lattices,
    and the number of generations for a Bethe tree.  ``z`` is only given for
    Bethe trees; for regular lattices it is derived.
    """

    kind: str
    size: int
    z: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _FIXED and self.kind != "bethe" and not _HYPERCUBIC.match(self.kind):
            raise UnsupportedGeometryError(f"unknown lattice kind {self.kind!r}")
        if int(self.size) != self.size or self.size < (0 if self.kind == "bethe" else 1):
            raise ValidationError(f"bad lattice size {self.size!r} for {self.kind}")
        if self.kind == "bethe":
            if self.z is None or int(self.z) != self.z or self.z < 2:
                raise ValidationError("a Bethe lattice needs an integer coordination z >= 2")
        elif self.z is not None and self.z != self.coordination:
            raise ValidationError(f"{self.kind} has coordination {self.coordination}, not {self.z}")
        if self.kind == "ring-1d" and self.size < 3:
            raise ValidationError("a ring needs at least 3 sites")

    @property
    def dimension(self) -> Optional[int]:
        if self.kind == "bethe":
            return None
        m = _HYPERCUBIC.match(self.kind)
        return int(m.group(1)) if m else _FIXED[self.kind][0]

    @property
    def coordination(self) -> int:
        if self.kind == "bethe":
            return int(self.z)
        m = _HYPERCUBIC.match(self.kind)
        return 2 * int(m.group(1)) if m else _FIXED[self.kind][1]

    @property
    def reference_pc(self) -> Optional[float]:
        if self.kind == "bethe":
            return 1.0 / (self.z - 1)
        if self.kind == "ring-1d":
            return 1.0
        for row in REFERENCE_THRESHOLDS:
            if row.kind == self.kind:
                return row.pc
        return None

    @classmethod
    def default(cls, kind: str, z: Optional[int] = None) -> "LatticeGeometry":
        return cls(kind, DEFAULT_SIZES.get(kind, 8), z)


@dataclass(frozen=True, eq=False)
class Lattice:
    geometry: LatticeGeometry
    n_sites: int
    edges: np.ndarray  # (E, 2) int64, each undirected edge once
    indptr: np.ndarray
    indices: np.ndarray
    face_a: np.ndarray  # bool per site
    face_b: np.ndarray
    shape: Optional[tuple] = None

    @property
    def has_faces(self) -> bool:
        return bool(self.face_a.any() and self.face_b.any())

    def neighbors(self, site: int) -> np.ndarray:
        return self.indices[self.indptr[site]:self.indptr[site + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


def _csr(n: int, edges: np.ndarray):
    src = np.concatenate((edges[:, 0], edges[:, 1]))
    dst = np.concatenate((edges[:, 1], edges[:, 0]))
    order = np.argsort(src, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst[order].astype(np.int64)


def _pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.stack((a.ravel(), b.ravel()), axis=1)


def _slice(axis: int, ndim: int, sl: slice):
    idx = [slice(None)] * ndim
    idx[axis] = sl
    return tuple(idx)


def _grid_edges(idx: np.ndarray) -> list:
    d = idx.ndim
    return [_pairs(idx[_slice(ax, d, slice(None, -1))], idx[_slice(ax, d, slice(1, None))]) for ax in range(d)]


def _bethe_edges(z: int, generations: int) -> np.ndarray:
    edges = []
    frontier = [0]
    n = 1
    for gen in range(generations):
        nxt = []
        for parent in frontier:
            for _ in range(z if gen == 0 else z - 1):
                edges.append((parent, n))
                nxt.append(n)
                n += 1
        frontier = nxt
    return np.array(edges, dtype=np.int64).reshape(-1, 2)


def build_lattice(g: LatticeGeometry) -> Lattice:
    """Edge list, neighbour table and spanning faces for ``g``.

    Interior sites have exactly ``g.coordination`` neighbours.
    """
    if g.kind in _UNSUPPORTED:
        raise UnsupportedGeometryError(f"{g.kind} lattices are not implemented")
    if g.kind == "bethe":
        edges = _bethe_edges(g.coordination, g.size)
        n = len(edges) + 1
        none = np.zeros(n, dtype=bool)
        indptr, indices = _csr(n, edges)
        return Lattice(g, n, edges, indptr, indices, none, none.copy())

    d = g.dimension
    shape = (g.size,) * d
    n = g.size**d
    idx = np.arange(n, dtype=np.int64).reshape(shape)
    parts = _grid_edges(idx)
    if g.kind == "triangular-2d":
        parts.append(_pairs(idx[:-1, 1:], idx[1:, :-1]))
    elif g.kind == "honeycomb-2d":
        # brick wall: every row is a chain, rungs down from sites with i + j even
        i, j = np.indices(shape)
        rung = ((i + j) % 2 == 0)[:-1, :]
        parts = [parts[1], _pairs(idx[:-1, :][rung], idx[1:, :][rung])]
    elif g.kind == "ring-1d":
        parts.append(np.array([[n - 1, 0]], dtype=np.int64))
    edges = np.concatenate(parts).astype(np.int64) if parts else np.empty((0, 2), np.int64)

    face_a = np.zeros(n, dtype=bool)
    face_b = np.zeros(n, dtype=bool)
    if g.kind != "ring-1d":
        face_a[idx[0].ravel() if d > 1 else idx[:1]] = True
        face_b[idx[-1].ravel() if d > 1 else idx[-1:]] = True
    indptr, indices = _csr(n, edges)
    return Lattice(g, n, edges, indptr, indices, face_a, face_b, shape)


@dataclass(frozen=True, eq=False)
class Occupancy:
    occupied: np.ndarray
    p: float
    seed: object = None

    @property
    def fraction(self) -> float:
        return float(self.occupied.mean()) if self.occupied.size else 0.0


def _uniforms(lattice: Lattice, seed) -> np.ndarray:
    if isinstance(seed, np.random.SeedSequence):
        rng = np.random.Generator(np.random.PCG64(seed))
    else:
        rng = trial_rng(check_seed(seed), 0)
    return rng.random(lattice.n_sites)


def occupy(lattice: Lattice, p: float, seed) -> Occupancy:
    """Occupy each site independently with probability ``p``.

    ``seed`` is an integer (stream of trial 0) or a ``SeedSequence``.
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"occupation probability must be in [0, 1], got {p!r}")
    return Occupancy(_uniforms(lattice, seed) < p, p, seed)


@njit(cache=True, nogil=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True, nogil=True)
def _label(n, edges, occupied):
    # root per occupied site, -1 elsewhere
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    for e in range(edges.shape[0]):
        a = edges[e, 0]
        b = edges[e, 1]
        if occupied[a] and occupied[b]:
            ra = _find(parent, a)
            rb = _find(parent, b)
            if ra != rb:
                if size[ra] < size[rb]:
                    ra, rb = rb, ra
                parent[rb] = ra
                size[ra] += size[rb]
    root = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        if occupied[i]:
            root[i] = _find(parent, i)
    return root


@njit(cache=True, nogil=True)
def _critical_point(u, indptr, indices, face_a, face_b):
    # add sites in increasing u; return the u of the site that first closes a spanning path
    n = u.size
    order = np.argsort(u)
    parent = np.full(n, -1, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    ta = np.zeros(n, dtype=np.bool_)
    tb = np.zeros(n, dtype=np.bool_)
    for k in range(n):
        s = order[k]
        parent[s] = s
        ta[s] = face_a[s]
        tb[s] = face_b[s]
        r = s
        for j in range(indptr[s], indptr[s + 1]):
            nb = indices[j]
            if parent[nb] < 0:
                continue
            rn = _find(parent, nb)
            if rn != r:
                if size[r] < size[rn]:
                    r, rn = rn, r
                parent[rn] = r
                size[r] += size[rn]
                ta[r] = ta[r] or ta[rn]
                tb[r] = tb[r] or tb[rn]
        if ta[r] and tb[r]:
            return u[s]
    return np.inf


@dataclass(frozen=True)
class ClusterStats:
    sizes: tuple  # descending
    spanning: bool
    mean_size: Optional[float]  # sum(s^2) / sum(s); None when nothing is occupied

    @property
    def occupied(self) -> int:
        return int(sum(self.sizes))


def label_clusters(lattice: Lattice, occ: Occupancy) -> ClusterStats:
    """Connected components of the occupied sites."""
    occupied = np.asarray(occ.occupied, dtype=bool)
    if occupied.shape != (lattice.n_sites,):
        raise ValidationError("occupancy does not match the lattice")
    root = _label(lattice.n_sites, lattice.edges, occupied)
    roots = root[occupied]
    if roots.size == 0:
        return ClusterStats((), False, None)
    _, counts = np.unique(roots, return_counts=True)
    sizes = np.sort(counts)[::-1]
    spanning = False
    if lattice.has_faces:
        a = root[occupied & lattice.face_a]
        b = root[occupied & lattice.face_b]
        spanning = bool(np.intersect1d(a, b).size)
    s = sizes.astype(float)
    return ClusterStats(tuple(int(c) for c in sizes), spanning, float(np.dot(s, s) / s.sum()))


def _map_trials(fn: Callable[[int], object], trials: int, threads: int) -> list:
    workers = min(resolve_threads(threads), trials)
    if workers <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def _check_trials(trials) -> int:
    if int(trials) != trials or trials < 1:
        raise ValidationError(f"trials must be a positive integer, got {trials!r}")
    return int(trials)


def empirical_mean_cluster_size(
    g: LatticeGeometry, p: float, trials: int = 1, seed: int = 1, threads: int = 1
) -> float:
    """Trial average of the size-weighted mean cluster size.

    That is the expected size of the cluster holding a randomly chosen
    occupied site.  Trials with no occupied site are skipped; if every trial
    is empty the ``p -> 0`` limit of 1 is returned.
    """
    lattice = build_lattice(g)
    trials = _check_trials(trials)
    seed = check_seed(seed)

    def one(t):
        return label_clusters(lattice, occupy(lattice, p, trial_seed(seed, t))).mean_size

    values = [v for v in _map_trials(one, trials, threads) if v is not None]
    return math.fsum(values) / len(values) if values else 1.0


def _require_faces(lattice: Lattice):
    if not lattice.has_faces:
        raise UnsupportedGeometryError(f"{lattice.geometry.kind} has no opposite faces to span")


def spanning_probability(
    g: LatticeGeometry, p: float, trials: int = 200, seed: int = 1, threads: int = 1
) -> float:
    """Fraction of trials whose occupied sites contain a spanning cluster."""
    if g.kind == "bethe":
        raise UnsupportedGeometryError("spanning is not defined on a Bethe tree; its threshold is 1/(z-1)")
    lattice = build_lattice(g)
    _require_faces(lattice)
    trials = _check_trials(trials)
    seed = check_seed(seed)

    def one(t):
        return label_clusters(lattice, occupy(lattice, p, trial_seed(seed, t))).spanning

    return sum(_map_trials(one, trials, threads)) / trials


def critical_points(g: LatticeGeometry, trials: int = 200, seed: int = 1, threads: int = 1) -> np.ndarray:
    """Per-trial occupation probability at which spanning first appears.

    Uses the same uniforms as :func:`spanning_probability`, so trial ``t``
    spans at ``p`` exactly when ``critical_points(...)[t] < p``.
    """
    lattice = build_lattice(g)
    _require_faces(lattice)
    trials = _check_trials(trials)
    seed = check_seed(seed)

    def one(t):
        u = _uniforms(lattice, trial_seed(seed, t))
        return _critical_point(u, lattice.indptr, lattice.indices, lattice.face_a, lattice.face_b)

    return np.array(_map_trials(one, trials, threads), dtype=float)


def bisect_crossing(f: Callable[[float], float], level: float, tol: float = 1e-9, max_depth: int = 64) -> float:
    """Smallest-bracket ``p`` in [0, 1] where non-decreasing ``f`` reaches ``level``."""
    lo, hi = 0.0, 1.0
    if not f(lo) < level <= f(hi):
        raise ConvergenceError(f"level {level} is not bracketed on [0, 1]")
    for _ in range(max_depth):
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if f(mid) >= level:
            hi = mid
        else:
            lo = mid
    if hi - lo <= tol:
        return 0.5 * (lo + hi)
    raise ConvergenceError(f"bisection bracket still {hi - lo:.3g} wide after {max_depth} steps")


@dataclass(frozen=True)
class ThresholdEstimate:
    geometry: str
    z: int
    reference_pc: Optional[float]
    estimated_pc: float
    half_width: float
    lattice_size: int
    n_sites: Optional[int]
    trials: int

    def to_dict(self) -> dict:
        return asdict(self)


def estimate_threshold(
    g: LatticeGeometry,
    trials: int = 200,
    seed: int = 1,
    threads: int = 1,
    tol: float = 1e-9,
    max_depth: int = 64,
    method: str = "newman-ziff",
) -> ThresholdEstimate:
    """Bisect for the ``p`` where the spanning probability crosses 1/2.

    ``half_width`` brackets the crossing at 0.5 +/- 1.96 * 0.5 / sqrt(trials),
    which is a distribution-free 95% interval for the median critical point.
    ``method="direct"`` re-labels every trial at every bisection step;
    ``"newman-ziff"`` computes each trial's critical point once, giving the
    same crossings much faster.  Bethe trees return ``1/(z-1)`` exactly.
    """
    if g.kind == "bethe":
        return ThresholdEstimate(g.kind, g.coordination, g.reference_pc, 1.0 / (g.coordination - 1), 0.0, g.size, None, 0)
    trials = _check_trials(trials)
    if method == "newman-ziff":
        pts = critical_points(g, trials, seed, threads)

        def f(p):
            return float(np.count_nonzero(pts < p)) / trials
    elif method == "direct":
        def f(p):
            return spanning_probability(g, p, trials, seed, threads)
    else:
        raise ValidationError(f"unknown method {method!r}")

    est = bisect_crossing(f, 0.5, tol, max_depth)
    delta = 1.96 * 0.5 / math.sqrt(trials)
    lo = bisect_crossing(f, max(0.5 - delta, 1.0 / trials), tol, max_depth)
    hi = bisect_crossing(f, min(0.5 + delta, 1.0), tol, max_depth)
    n_sites = g.size ** g.dimension
    return ThresholdEstimate(g.kind, g.coordination, g.reference_pc, est, 0.5 * (hi - lo), g.size, n_sites, trials)


def estimate_thresholds(geometries: Sequence[LatticeGeometry], **kwargs) -> list:
    return [estimate_threshold(g, **kwargs) for g in geometries]
