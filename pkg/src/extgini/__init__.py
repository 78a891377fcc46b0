"""Extended Gini index: population values, unbiased sample estimator, and tools."""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    DegenerateSampleError,
    DomainError,
    ExtGiniError,
    InsufficientSampleError,
    NumericError,
    ParseError,
)
from .estimator import (
    EstimateResult,
    HeatmapGrid,
    Sample,
    extended_gini_estimate,
    extended_gini_estimate_naive,
    gini_estimate,
    heatmap_grid,
    mth_gini_estimate,
)
from .fitting import FitResult, GofResult, cvm_statistic, fit_gamma_mle, gof_bootstrap, ks_statistic
from .quadrature import QuadratureConfig
from .simulation import SimulationConfig, SimulationReport, gamma_sample, run_simulation
from .special import reg_inc_beta_I, reg_inc_gamma_P, reg_inc_gamma_Q
from .theory import (
    CdfModel,
    GammaParams,
    IndexSpec,
    expected_estimator_gamma_numeric,
    gini_gamma_closed,
    index_gamma,
    index_general,
    mth_gini_gamma,
)
