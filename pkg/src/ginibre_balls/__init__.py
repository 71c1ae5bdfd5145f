"""Repulsive random balls models on the plane.

Centers come from a scaled (optionally thinned) Ginibre determinantal
process, radii are i.i.d. with a heavy two-piece law, and the field of
interest is the measure mass collected by the balls.  The package provides
exact-in-distribution samplers, the zoom-out scaling laboratory with its
three limit regimes, independent limit-field oracles, Fredholm-determinant
Laplace transforms, and the spatial statistics needed to verify it all.
"""

from .fredholm import (
    DiscretizedKernel,
    GridResolutionError,
    LaplaceDecomposition,
    NystromGrid,
    SpectrumReport,
    discretize_kernel,
    laplace_fredholm,
    log_laplace_decomposition,
    spectrum_check,
    stability_check,
)
from .ginibre import (
    GinibreConfig,
    PointPattern,
    UndersizedMatrixError,
    expected_missing_points,
    kernel_eval,
    pair_correlation_theoretical,
    pcf_estimate,
    required_matrix_order,
    sample_ginibre,
    sample_poisson,
)
from .mass_field import (
    EdgeBiasError,
    FieldSample,
    FluctuationSample,
    edge_margin,
    expected_mass,
    expected_mass_truncated,
    field_value,
    field_variance_exact,
    fluctuation,
    truncation_bias_bound,
)
from .measures import (
    CertificateReport,
    GaussianBumpMeasure,
    LinearCombinationMeasure,
    Measure,
    UniformDiskMeasure,
    UniformRectMeasure,
    disk_rect_intersection_area,
    linear_combination,
    mbeta_certificate_check,
    radial_intensity_integral,
)
from .oracles import (
    GaussianOracle,
    PoissonIntegralOracle,
    StableOracle,
    gaussian_variance,
    poisson_equivalent_fluctuations,
    sample_P,
    sample_W,
    sample_Z,
    sigma_gamma,
    sigma_gamma_closed_form,
)
from .radii import MarkedPattern, RadiusLaw, mark_pattern, marked_kernel_diag
from .scaling import (
    BudgetExceededError,
    Regime,
    RegimeRun,
    SchedulePoint,
    check_budget,
    finite_dim_vector,
    parallel_map,
    run_regime,
    schedule,
)
from .seeds import replicate_rng
from .stats import (
    KFunctionEstimate,
    KSReport,
    holm_reject,
    k_theoretical,
    ks_two_sample,
    ripley_k_estimate,
    sample_skewness,
    tail_index_estimate,
)
from .windows import DiskWindow, RectWindow, Window, disk_overlap_area

__version__ = "0.1.0"
