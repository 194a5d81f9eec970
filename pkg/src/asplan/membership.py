"""Fuzzy numbers for mean life and for risk levels.

Two shapes only: a raised-cosine membership over the failure rate (mean
life "approximately lambda_j") and a left-shoulder piecewise-linear
membership over a risk level ("roughly alpha").
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class FuzzyLife:
    """Fuzzy mean life (lambda_j, a).

    The membership is a raised cosine over the failure *rate*, peaking at
    1/lambda_j with half-width 1/a, so the support is
    [1/lambda_j - 1/a, 1/lambda_j + 1/a].  Requiring a > lambda_j keeps the
    support inside (0, inf).
    """

    lambda_j: float
    a: float

    def __post_init__(self) -> None:
        if not self.lambda_j > 0:
            raise DomainError(f"nominal mean life must be positive, got {self.lambda_j}")
        if not self.a > self.lambda_j:
            raise DomainError(
                f"fuzziness scale a={self.a} must exceed lambda_j={self.lambda_j}"
            )

    @property
    def support(self) -> tuple[float, float]:
        center = 1.0 / self.lambda_j
        half_width = 1.0 / self.a
        return (center - half_width, center + half_width)


def life_membership(life: FuzzyLife, rate: float) -> float:
    """Raised-cosine membership of a failure rate, in [0, 1].

    Exactly 0 at and beyond the support endpoints (cos(+-pi) = -1 in the
    closed form); 1 at rate = 1/lambda_j.
    """
    if not rate > 0:
        raise DomainError(f"rate must be positive, got {rate}")
    lo, hi = life.support
    if rate <= lo or rate >= hi:
        return 0.0
    return 0.5 * (1.0 + math.cos(life.a * math.pi * (rate - 1.0 / life.lambda_j)))


def life_membership_mass(life: FuzzyLife) -> float:
    """Integral of the membership over its support: the raised-cosine area 1/a."""
    return 1.0 / life.a


@dataclass(frozen=True)
class FuzzyLevel:
    """Fuzzy risk level (level, slack) with a left-shoulder linear membership.

    Membership is 1 below ``level``, falls linearly to 0 at ``level + slack``.
    ``slack = 0`` degenerates to the crisp indicator x < level, which lets
    crisp baselines run through the same pipeline.
    """

    level: float
    slack: float

    def __post_init__(self) -> None:
        if not 0.0 < self.level < 1.0:
            raise DomainError(f"risk level must be in (0,1), got {self.level}")
        if not 0.0 <= self.slack <= 1.0:
            raise DomainError(f"slack must be in [0,1], got {self.slack}")
        if self.level + self.slack > 1.0:
            raise DomainError("level + slack must not exceed 1")

    @property
    def relaxed(self) -> float:
        return self.level + self.slack


def level_membership(level: FuzzyLevel, x: float) -> float:
    """Left-shoulder membership: 1 below the level, linear taper over the slack."""
    if x < level.level:
        return 1.0
    if level.slack == 0.0:
        return 0.0
    if x >= level.level + level.slack:
        return 0.0
    return min(1.0, (level.level + level.slack - x) / level.slack)


def defuzzify_center_of_gravity(center: float, a: float) -> float:
    """Centroid of a raised-cosine membership centered at ``center``.

    By symmetry the centroid equals the center exactly, which is the whole
    point: center-of-gravity de-fuzzification collapses a fuzzy mean life
    back to its crisp value.  The center is taken explicitly so the centroid
    can be computed in either rate space or time space.
    """
    if not a > 0:
        raise DomainError(f"fuzziness scale must be positive, got {a}")
    if not center - 1.0 / a > 0:
        raise DomainError(
            f"support [{center - 1.0 / a}, {center + 1.0 / a}] must lie inside (0, inf)"
        )
    return float(center)
