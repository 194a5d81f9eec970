"""The four plan families as (objective, g, h) assemblies.

Each family exposes the expected testing cost over the long run together
with the long-run producer risk g (rejection probability at the acceptable
life) and consumer risk h (acceptance probability at the rejectable life).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import DomainError
from .fuzzyopt import DEFAULT_SOLVER, PlanDesign, SolverSettings, solve_plan
from .lifemodel import (
    Thresholds,
    TriProb,
    expected_y,
    expected_y_upper_bound,
    long_run,
    rgsp_max_triprob,
    rgsp_min_triprob,
    ssp_triprob,
    typeI_triprob,
    weighted_survival,
    harmonic_number,
)
from .membership import FuzzyLevel, FuzzyLife

# Lower edge of the decision box; small enough to admit near-zero reject
# thresholds without hitting the survival function's limit guard.
_T_LO = 1e-6


class Family(str, Enum):
    SSP = "ssp"
    RGSP_MIN = "rgsp_min"
    RGSP_MAX = "rgsp_max"
    TYPE_I = "type1"


@dataclass(frozen=True)
class PlanProblem:
    family: Family
    lambda0: FuzzyLife
    lambda1: FuzzyLife
    alpha: FuzzyLevel
    beta: FuzzyLevel
    cost: float = 1.0
    tau: Optional[float] = None
    objective_variant: str = "etc_star"
    n_max: int = 200
    allow_t2_above_lambda0: bool = False
    sd_form: str = "n"

    def __post_init__(self) -> None:
        if not self.lambda0.lambda_j > self.lambda1.lambda_j:
            raise DomainError("acceptable life must exceed rejectable life")
        if self.lambda0.a != self.lambda1.a:
            raise DomainError("both fuzzy lives must share the fuzziness scale a")
        if not self.cost > 0:
            raise DomainError(f"cost rate must be positive, got {self.cost}")
        if self.family is Family.TYPE_I and self.tau is None:
            raise DomainError("Type-I plans require a censoring time tau")
        if self.objective_variant not in ("etc_star", "etc_upper_bound"):
            raise DomainError(f"unknown objective_variant {self.objective_variant!r}")
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max}")


def _survival(f: FuzzyLife, t: float, crisp: bool) -> float:
    if crisp:
        return math.exp(-t / f.lambda_j)
    return weighted_survival(f, t)


def _triprob(f: FuzzyLife, th: Thresholds, crisp: bool) -> TriProb:
    if not crisp:
        return ssp_triprob(f, th)
    s1 = _survival(f, th.t1, True)
    s2 = _survival(f, th.t2, True)
    return TriProb(p_a=s2, p_r=1.0 - s1, p_c=s1 - s2)


def _max_triprob(f: FuzzyLife, th: Thresholds, n: int, crisp: bool) -> TriProb:
    if not crisp:
        return rgsp_max_triprob(f, th, n)
    s1 = _survival(f, th.t1, True)
    s2 = _survival(f, th.t2, True)
    return TriProb(
        p_a=1.0 - (1.0 - s2) ** n,
        p_r=(1.0 - s1) ** n,
        p_c=(1.0 - s2) ** n - (1.0 - s1) ** n,
    )


def _base_expectation(p: PlanProblem, crisp: bool) -> float:
    """Cost-side expected single-observation duration under the null life."""
    if crisp:
        return p.lambda0.lambda_j
    if p.objective_variant == "etc_upper_bound":
        return expected_y_upper_bound(p.lambda0)
    return expected_y(p.lambda0)


def _thresholds(x) -> Thresholds:
    return Thresholds(t1=float(x[0]), t2=float(x[1]))


def ssp_objective_and_constraints(p: PlanProblem, crisp: bool = False):
    """(objective, g, h) over (t1, t2) for the sequential plan."""
    e0 = _base_expectation(p, crisp)

    def objective(x) -> float:
        tp = _triprob(p.lambda0, _thresholds(x), crisp)
        return p.cost * e0 * long_run(tp).N

    def g(x) -> float:
        return long_run(_triprob(p.lambda0, _thresholds(x), crisp)).P_R

    def h(x) -> float:
        return long_run(_triprob(p.lambda1, _thresholds(x), crisp)).P_A

    return objective, g, h


def rgsp_min_objective_and_constraints(p: PlanProblem, n: int, crisp: bool = False):
    """(objective, g, h) over (t1, t2) for the group-minimum plan of size n."""
    e0 = _base_expectation(p, crisp) / n

    def min_tp(f: FuzzyLife, x) -> TriProb:
        th = _thresholds(x)
        if crisp:
            return _triprob(f, Thresholds(t1=n * th.t1, t2=n * th.t2), True)
        return rgsp_min_triprob(f, th, n)

    def objective(x) -> float:
        return p.cost * e0 * long_run(min_tp(p.lambda0, x)).N

    def g(x) -> float:
        return long_run(min_tp(p.lambda0, x)).P_R

    def h(x) -> float:
        return long_run(min_tp(p.lambda1, x)).P_A

    return objective, g, h


def rgsp_max_objective_and_constraints(p: PlanProblem, n: int, crisp: bool = False):
    """(objective, g, h) over (t1, t2) for the group-maximum plan of size n."""
    e0 = harmonic_number(n) * _base_expectation(p, crisp)

    def objective(x) -> float:
        return p.cost * e0 * long_run(_max_triprob(p.lambda0, _thresholds(x), n, crisp)).N

    def g(x) -> float:
        return long_run(_max_triprob(p.lambda0, _thresholds(x), n, crisp)).P_R

    def h(x) -> float:
        return long_run(_max_triprob(p.lambda1, _thresholds(x), n, crisp)).P_A

    return objective, g, h


def typeI_objective_and_constraints(p: PlanProblem, n: int, crisp: bool = False):
    """(objective, g, h) over (t1, t2) for the censored-MLE plan of size n.

    The normal approximation already works with the nominal lives, so the
    crisp flag changes nothing here; the objective floor is cost * tau.
    """
    del crisp

    def tp(lambda_j: float, x) -> TriProb:
        return typeI_triprob(lambda_j, _thresholds(x), n, p.tau, sd_form=p.sd_form)

    def objective(x) -> float:
        return p.cost * p.tau * long_run(tp(p.lambda0.lambda_j, x)).N

    def g(x) -> float:
        return long_run(tp(p.lambda0.lambda_j, x)).P_R

    def h(x) -> float:
        return long_run(tp(p.lambda1.lambda_j, x)).P_A

    return objective, g, h


def plan_functions(p: PlanProblem, n: Optional[int], crisp: bool = False):
    """Dispatch to the family's builders and attach the decision box.

    Returns (objective, g, h, box, ordering) over x = (t1, t2).
    """
    lam0 = p.lambda0.lambda_j
    if p.allow_t2_above_lambda0:
        hi = 5.0 * lam0
    elif p.family is Family.TYPE_I:
        hi = 2.0 * lam0
    else:
        hi = lam0
    box = ((_T_LO, hi), (_T_LO, hi))
    ordering = ((0, 1),)
    if p.family is Family.SSP:
        fns = ssp_objective_and_constraints(p, crisp)
    elif p.family is Family.RGSP_MIN:
        fns = rgsp_min_objective_and_constraints(p, n, crisp)
    elif p.family is Family.RGSP_MAX:
        fns = rgsp_max_objective_and_constraints(p, n, crisp)
    elif p.family is Family.TYPE_I:
        fns = typeI_objective_and_constraints(p, n, crisp)
    else:
        raise DomainError(f"unknown family {p.family!r}")
    return (*fns, box, ordering)


def crisp_baseline(
    p: PlanProblem,
    settings: SolverSettings = DEFAULT_SOLVER,
    membership_form: str = "cost_ascending",
) -> PlanDesign:
    """Same pipeline in the infinite-sharpness limit: pure exponential model,
    zero-slack risk levels.  Used for fuzzy-to-crisp convergence reporting."""
    return solve_plan(p, settings, membership_form=membership_form, crisp=True)
