"""Minimum-cost acceptance sampling plans for exponential lifetimes with
fuzzy quality parameters."""

from .disposition import (
    Decision,
    Disposition,
    FailureData,
    Interpretation,
    case_study_data,
    censored_mle,
    dispose_rgsp_max,
    dispose_rgsp_min,
    dispose_ssp,
    dispose_type1,
    load_failure_data,
)
from .errors import (
    ConsistencyError,
    ConvergenceError,
    DegeneratePlanError,
    DomainError,
    InfeasibleError,
)
from .fuzzyopt import (
    CrispNlp,
    MaxPhiProblem,
    PlanDesign,
    SolverSettings,
    solve_crisp,
    solve_max_phi,
    solve_plan,
    zimmermann_bounds,
)
from .lifemodel import (
    LongRun,
    Thresholds,
    TriProb,
    expected_y,
    expected_y_upper_bound,
    expected_ymax,
    expected_ymax_upper_bound,
    expected_ymin,
    expected_ymin_upper_bound,
    harmonic_number,
    long_run,
    rgsp_max_triprob,
    rgsp_min_triprob,
    ssp_triprob,
    typeI_triprob,
    weighted_survival,
)
from .membership import (
    FuzzyLevel,
    FuzzyLife,
    defuzzify_center_of_gravity,
    level_membership,
    life_membership,
    life_membership_mass,
)
from .oracle import (
    GoldenRow,
    McEstimate,
    OracleReport,
    load_golden_rows,
    mc_triprob,
    run_regression_grid,
    sample_mixture_rate,
    verify_tables,
)
from .plans import Family, PlanProblem, crisp_baseline
from .quadrature import QuadratureSettings, oscillatory_pair, simpson, std_normal_cdf

__version__ = "0.1.0"
