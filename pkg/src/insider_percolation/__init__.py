"""Rule count versus decision latitude for normal individuals and insider threats.

Submodules
----------
spacing_core  boundaries, latitudes and threat-side boundary elimination
montecarlo    seeded trial-averaged sweeps and gap-width distributions
analytic      closed-form threat latitude and its 1D percolation form
lattice       finite-lattice site percolation and threshold estimates
regime        four-regime classification of an (N, l_min) environment
"""

from .analytic import (
    exact_threat_latitude,
    mean_cluster_size_1d,
    min_threat_latitude,
    n_min,
    occupation_probability,
    percolation_threat_latitude,
    threat_boundary_count_expected,
)
from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    UnsupportedGeometryError,
    ValidationError,
)
from .lattice import (
    LatticeGeometry,
    build_lattice,
    empirical_mean_cluster_size,
    estimate_threshold,
    label_clusters,
    occupy,
    spanning_probability,
)
from .montecarlo import SimulationConfig, SweepResult, run_sweep, spacing_distribution
from .regime import Regime, RegimeReport, classify
from .spacing_core import (
    BoundarySet,
    LatitudeProfile,
    eliminate_crossable_boundaries,
    latitudes_from_boundaries,
    mean_latitude,
    threat_latitudes,
)

__version__ = "0.1.0"
