"""Closed-form probabilities and expectations for the four plan families.

Everything here is built from the weighted survival function S(t): the
exponential survival e^{-lambda t} averaged over the raised-cosine
membership of the failure rate and renormalized by the membership mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError, DegeneratePlanError, DomainError
from .membership import FuzzyLife
from .quadrature import (
    DEFAULT_SETTINGS,
    QuadratureSettings,
    oscillatory_pair,
    std_normal_cdf,
)

# Below this time the survival closed form is a removable 0/0; return the limit.
_T_FLOOR = 1e-12
# Probabilities may stray outside [0,1] by at most this before we refuse to clamp.
_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class Thresholds:
    """Decision thresholds (t1, t2): reject below t1, accept at or above t2.

    t1 = t2 is admitted (empty continuation band); Type-I designs use it.
    """

    t1: float
    t2: float

    def __post_init__(self) -> None:
        if not self.t1 > 0:
            raise DomainError(f"t1 must be positive, got {self.t1}")
        if not self.t2 >= self.t1:
            raise DomainError(f"need t2 >= t1, got t1={self.t1}, t2={self.t2}")


@dataclass(frozen=True)
class TriProb:
    p_a: float
    p_r: float
    p_c: float

    def __post_init__(self) -> None:
        total = self.p_a + self.p_r + self.p_c
        if abs(total - 1.0) > 1e-10:
            raise ConsistencyError(f"probabilities sum to {total}, not 1")


@dataclass(frozen=True)
class LongRun:
    P_A: float
    P_R: float
    N: float


def _clamp_prob(x: float, what: str) -> float:
    if x < -_CLAMP_TOL or x > 1.0 + _CLAMP_TOL:
        raise ConsistencyError(f"{what} = {x} is outside [0,1] beyond tolerance")
    return min(1.0, max(0.0, x))


def weighted_survival(f: FuzzyLife, t: float) -> float:
    """Survival probability P(Y >= t) under the membership-weighted model.

    Closed form pi^2 a^3 (e^{2t/a} - 1) e^{-t/lambda_j - t/a} / (2t^3 + 2 pi^2 a^2 t),
    equal to the mixture a * int e^{-lambda t} H_j(lambda) dlambda.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if t < _T_FLOOR:
        return 1.0
    a = f.a
    lam = f.lambda_j
    # (e^{2t/a} - 1) e^{-t/a} loses precision two ways: catastrophic
    # cancellation for small t/a, overflow for large.  Split accordingly.
    if 2.0 * t / a < 1.0:
        bracket = math.expm1(2.0 * t / a) * math.exp(-t / lam - t / a)
    else:
        bracket = math.exp(t / a - t / lam) - math.exp(-t / a - t / lam)
    value = (math.pi ** 2) * (a ** 3) * bracket / (2.0 * t ** 3 + 2.0 * (math.pi ** 2) * (a ** 2) * t)
    return _clamp_prob(value, "weighted survival")


def ssp_triprob(f: FuzzyLife, th: Thresholds) -> TriProb:
    """Accept/reject/continue probabilities for one inter-failure time."""
    s1 = weighted_survival(f, th.t1)
    s2 = weighted_survival(f, th.t2)
    p_a = s2
    p_r = _clamp_prob(1.0 - s1, "p_r")
    p_c = _clamp_prob(s1 - s2, "p_c")
    return TriProb(p_a=p_a, p_r=p_r, p_c=p_c)


def rgsp_min_triprob(f: FuzzyLife, th: Thresholds, n: int) -> TriProb:
    """Group-minimum probabilities: the minimum of n shared-rate exponentials
    is exponential with n times the rate, so this is the SSP form at n*t."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return ssp_triprob(f, Thresholds(t1=n * th.t1, t2=n * th.t2))


def rgsp_max_triprob(f: FuzzyLife, th: Thresholds, n: int) -> TriProb:
    """Group-maximum probabilities raising the weighted CDF to the n-th power
    (an independent fuzzy rate per item)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    s1 = weighted_survival(f, th.t1)
    s2 = weighted_survival(f, th.t2)
    p_r = _clamp_prob((1.0 - s1) ** n, "p_r")
    p_a = _clamp_prob(1.0 - (1.0 - s2) ** n, "p_a")
    p_c = _clamp_prob((1.0 - s2) ** n - (1.0 - s1) ** n, "p_c")
    return TriProb(p_a=p_a, p_r=p_r, p_c=p_c)


def typeI_triprob(
    lambda_j: float, th: Thresholds, n: int, tau: float, sd_form: str = "n"
) -> TriProb:
    """Normal-approximation probabilities for the censored-MLE statistic.

    The estimator is treated as normal with mean lambda_j and standard
    deviation lambda_j / m.  Two published scalings of m coexist:
    ``sd_form="n"`` uses m = n*sqrt(1 - e^{-tau/lambda_j}) and ``"sqrt_n"``
    uses m = sqrt(n*(1 - e^{-tau/lambda_j})).  The "n" scaling reproduces
    the reference operating characteristics; "sqrt_n" is the textbook
    asymptotic rate and is exposed for comparison.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if not lambda_j > 0:
        raise DomainError(f"lambda_j must be positive, got {lambda_j}")
    frac = -math.expm1(-tau / lambda_j)
    if sd_form == "n":
        m = n * math.sqrt(frac)
    elif sd_form == "sqrt_n":
        m = math.sqrt(n * frac)
    else:
        raise DomainError(f"unknown sd_form {sd_form!r}")
    z1 = (th.t1 - lambda_j) / lambda_j * m
    z2 = (th.t2 - lambda_j) / lambda_j * m
    p_r = _clamp_prob(std_normal_cdf(z1), "p_r")
    p_a = _clamp_prob(1.0 - std_normal_cdf(z2), "p_a")
    p_c = _clamp_prob(std_normal_cdf(z2) - std_normal_cdf(z1), "p_c")
    return TriProb(p_a=p_a, p_r=p_r, p_c=p_c)


def long_run(p: TriProb) -> LongRun:
    """Long-run acceptance/rejection probabilities and expected stage count."""
    if p.p_c >= 1.0:
        raise DegeneratePlanError("continuation probability is 1; plan never terminates")
    denom = 1.0 - p.p_c
    return LongRun(P_A=p.p_a / denom, P_R=p.p_r / denom, N=1.0 / denom)


def expected_y(f: FuzzyLife, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Mean inter-failure time under the weighted model.

    (a/2) ln((a+l)/(a-l)) + (a/2)[cos(c) Ic + sin(c) Is], c = a*pi/l, where
    (Ic, Is) integrate cos(u)/u and sin(u)/u over [c-pi, c+pi].  Tends to the
    nominal mean life as a grows (the oscillatory terms cancel the excess).
    """
    a = f.a
    lam = f.lambda_j
    c = a * math.pi / lam
    ic, is_ = oscillatory_pair(c, settings)
    # log1p keeps the log term accurate when a >> lambda_j.
    log_term = math.log1p(lam / a) - math.log1p(-lam / a)
    return (a / 2.0) * log_term + (a / 2.0) * (math.cos(c) * ic + math.sin(c) * is_)


def expected_y_upper_bound(f: FuzzyLife) -> float:
    """Analytic upper bound for expected_y: the log term times 1 + |cos c| + |sin c|."""
    a = f.a
    lam = f.lambda_j
    c = a * math.pi / lam
    log_term = math.log1p(lam / a) - math.log1p(-lam / a)
    return (a / 2.0) * log_term * (1.0 + abs(math.cos(c)) + abs(math.sin(c)))


def expected_ymin(
    f: FuzzyLife, n: int, settings: QuadratureSettings = DEFAULT_SETTINGS
) -> float:
    """Mean group minimum: the single-observation mean scaled by 1/n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return expected_y(f, settings) / n


def expected_ymin_upper_bound(f: FuzzyLife, n: int) -> float:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return expected_y_upper_bound(f) / n


def harmonic_number(n: int) -> float:
    return math.fsum(1.0 / i for i in range(1, n + 1))


def expected_ymax(
    f: FuzzyLife, n: int, settings: QuadratureSettings = DEFAULT_SETTINGS
) -> float:
    """Mean group maximum: harmonic-number scaling of the single-observation mean."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return harmonic_number(n) * expected_y(f, settings)


def expected_ymax_upper_bound(f: FuzzyLife, n: int) -> float:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return harmonic_number(n) * expected_y_upper_bound(f)
