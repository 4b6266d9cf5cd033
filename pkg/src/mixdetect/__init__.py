"""Detection of two-component location mixtures when the null location is unknown."""

from .baselines import (
    BaselineKind,
    BaselineTable,
    calibrate_baseline,
    hc_statistic,
    ks_statistic,
    run_baseline,
)
from .decision import ScaleCheck, TestDecision
from .dist import (
    GAUSSIAN,
    LAPLACE,
    BaseDistribution,
    MixtureParams,
    sample_mixture,
    sample_pure,
)
from .errors import CalibrationBudgetError, ContractError, DomainError, MixDetectError
from .power import (
    PowerExperiment,
    PowerGridResult,
    export_csv,
    format_csv,
    read_csv,
    run_power_experiment,
)
from .procedures import calibrate_procedure, load_table, run_procedure, save_table
from .spacing import (
    CalibrationTable,
    Variant,
    analytic_threshold,
    calibrate,
    dyadic_scales,
    run_test,
    spacing_statistics,
)
from .streams import stream
from .theory import (
    Regime,
    RegimePoint,
    check_side_conditions,
    detection_boundary,
    rho_k_n,
    rho_lower_bound,
    separation_set_member,
)
from .variance import (
    VarianceTable,
    calibrate_variance,
    run_variance_test,
    sample_variance,
    wilks_variance_bound,
)

__version__ = "0.1.0"
