"""Spectral tails of weighted Landau-level compressions, monic orthogonal
polynomials, and logarithmic capacity, cross-checked against each other.

Three quantity families that share one n-th root limit:

* eigenvalues s_n of the compression of a compactly supported weight onto a
  Landau level (``landau``),
* minimal L^2 norms M_n of monic polynomials against the weight
  (``orthopoly``),
* minimax sup-norms of monic polynomials on the support, whose n-th roots
  give the logarithmic capacity (``chebyshev``).

``verify`` bundles the cross-check suites, ``cli`` the batch front end.
"""

from .chebyshev import (
    CapacityEstimate,
    ChebyshevResult,
    capacity_estimate,
    chebyshev_polynomial,
)
from .errors import DegenerateMomentError, NonConvergenceError
from .landau import (
    AsymptoticsReport,
    LandauBasisSpec,
    ToeplitzSpectrum,
    lemma1_sequences,
    level_q_matrix,
    lll_matrix,
    radial_oracle,
    rescaled_weight,
    spectrum,
    theorem_predictions,
    toeplitz_spectrum,
)
from .orthopoly import (
    MonicOrthoBasis,
    RhoEstimate,
    monic_orthogonalize,
    rho_estimates,
)
from .region import (
    Annulus,
    Disc,
    Polygon,
    UnionRegion,
    affine,
    bounding_radius,
    capacity_known,
    contains,
    convex_hull,
    dilate,
    region_from_config,
    region_key,
)
from .verify import CheckResult, SUITE_NAMES, run_suite
from .weight import (
    Constant,
    Generic,
    MomentTable,
    Potential3D,
    Radial,
    SectionGrid,
    Weight,
    ball_reduction_weight,
    mixed_moments,
    quadrature,
    reduce_3d,
    weight_from_config,
    weight_key,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticsReport",
    "Annulus",
    "CapacityEstimate",
    "ChebyshevResult",
    "CheckResult",
    "Constant",
    "DegenerateMomentError",
    "Disc",
    "Generic",
    "LandauBasisSpec",
    "MomentTable",
    "MonicOrthoBasis",
    "NonConvergenceError",
    "Polygon",
    "Potential3D",
    "Radial",
    "RhoEstimate",
    "SUITE_NAMES",
    "SectionGrid",
    "ToeplitzSpectrum",
    "UnionRegion",
    "Weight",
    "affine",
    "ball_reduction_weight",
    "bounding_radius",
    "capacity_estimate",
    "capacity_known",
    "chebyshev_polynomial",
    "contains",
    "convex_hull",
    "dilate",
    "lemma1_sequences",
    "level_q_matrix",
    "lll_matrix",
    "mixed_moments",
    "monic_orthogonalize",
    "quadrature",
    "radial_oracle",
    "reduce_3d",
    "region_from_config",
    "region_key",
    "rescaled_weight",
    "rho_estimates",
    "run_suite",
    "spectrum",
    "theorem_predictions",
    "toeplitz_spectrum",
    "weight_from_config",
    "weight_key",
    "__version__",
]
