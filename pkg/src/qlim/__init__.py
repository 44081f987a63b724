"""qlim: from convergence in distribution to uniform quantile convergence.

A numerical library plus experiment CLI for passing from the asymptotic
distribution of real tuples (spectra, walk statistics, equidistributed
sequences) to uniform approximation by quantile values at equidistant
nodes.
"""

from .convergence import (
    ErrorReport,
    PortmanteauReport,
    error_report,
    interval_error,
    monotone_uniform_check,
    node_error,
    portmanteau_check,
    quantile_sup_distance,
)
from .experiments import (
    ExperimentRow,
    WalkDistributionTable,
    arcsine_distribution,
    asymptotic_sequence_error,
    enumerate_walk_counts,
    riemann_compare,
    sine_law_error,
    toeplitz_product_experiment,
    weyl_bound_scan,
    weyl_sequence_error,
)
from .measure import (
    AnalyticDistribution,
    DiscreteMeasure,
    QuantileFunction,
    analytic_quantile,
    arcsine_law,
    cdf_eval,
    empirical_from_samples,
    from_value_counts,
    quantile_eval,
    step_quantile,
    support_bounds,
    uniform_law,
)
from .spectra import NoConvergenceError, Spectrum, hermitian_eigenvalues, singular_values
from .toeplitz import (
    MatrixExpr,
    SymbolFormatError,
    SymbolSpec,
    evaluate_expr,
    fourier_coefficients,
    parse_symbol_file,
    symbol_modulus_quantile,
    toeplitz_matrix,
)

__version__ = "0.1.0"
