"""Applying a designed plan to observed lifetimes.

Boundary convention throughout: reject strictly below t1, accept at or
above t2, continue on the half-open band [t1, t2).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Optional, Sequence

from .errors import DomainError


class Decision(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    CONTINUE_EXHAUSTED = "continue_exhausted"


class Interpretation(str, Enum):
    INTER_FAILURE_TIMES = "inter_failure_times"
    ITEM_LIFETIMES = "item_lifetimes"


@dataclass(frozen=True)
class FailureData:
    values: tuple
    interpretation: Interpretation = Interpretation.ITEM_LIFETIMES
    censor_time: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.values:
            raise DomainError("failure data must contain at least one value")
        if any(not v > 0 for v in self.values):
            raise DomainError("all observed values must be positive")
        if self.censor_time is not None and not self.censor_time > 0:
            raise DomainError(f"censor time must be positive, got {self.censor_time}")


@dataclass(frozen=True)
class Disposition:
    decision: Decision
    decided_at: Optional[int]  # 1-based index (sequential) or group number
    evidence: tuple  # the statistic values examined, in order


def _classify(value: float, t1: float, t2: float) -> Optional[Decision]:
    if value < t1:
        return Decision.REJECT
    if value >= t2:
        return Decision.ACCEPT
    return None


def dispose_ssp(data: FailureData, t1: float, t2: float) -> Disposition:
    """Scan observations in recorded order; first value outside [t1, t2) decides."""
    examined = []
    for index, value in enumerate(data.values, start=1):
        examined.append(value)
        decision = _classify(value, t1, t2)
        if decision is not None:
            return Disposition(decision, index, tuple(examined))
    return Disposition(Decision.CONTINUE_EXHAUSTED, None, tuple(examined))


def _dispose_grouped(data: FailureData, t1: float, t2: float, n: int, statistic) -> Disposition:
    if n < 1:
        raise DomainError(f"group size must be >= 1, got {n}")
    if len(data.values) < n:
        raise DomainError(f"need at least {n} values for one group, have {len(data.values)}")
    examined = []
    group = 0
    for start in range(0, len(data.values) - n + 1, n):
        group += 1
        value = statistic(data.values[start : start + n])
        examined.append(value)
        decision = _classify(value, t1, t2)
        if decision is not None:
            return Disposition(decision, group, tuple(examined))
    return Disposition(Decision.CONTINUE_EXHAUSTED, None, tuple(examined))


def dispose_rgsp_min(data: FailureData, t1: float, t2: float, n: int) -> Disposition:
    """Decide per consecutive block of n on the block minimum."""
    return _dispose_grouped(data, t1, t2, n, min)


def dispose_rgsp_max(data: FailureData, t1: float, t2: float, n: int) -> Disposition:
    """Decide per consecutive block of n on the block maximum."""
    return _dispose_grouped(data, t1, t2, n, max)


def censored_mle(values: Sequence[float], n: int, tau: float) -> float:
    """Mean-life MLE from the first n items with the test truncated at tau:
    failed items contribute their lifetime, survivors contribute tau, divided
    by the failure count."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if n < 1 or n > len(values):
        raise DomainError(f"need 1 <= n <= {len(values)}, got n={n}")
    block = values[:n]
    q = sum(1 for v in block if v < tau)
    if q == 0:
        raise DomainError("no failures before the censoring time; estimate undefined")
    return math.fsum(min(v, tau) for v in block) / q


def dispose_type1(data: FailureData, t1: float, t2: float, n: int, tau: float) -> Disposition:
    """Decide per consecutive block of n on the censored mean-life estimate."""
    if n < 1:
        raise DomainError(f"group size must be >= 1, got {n}")
    if len(data.values) < n:
        raise DomainError(f"need at least {n} values for one group, have {len(data.values)}")
    examined = []
    group = 0
    for start in range(0, len(data.values) - n + 1, n):
        group += 1
        value = censored_mle(data.values[start : start + n], n, tau)
        examined.append(value)
        decision = _classify(value, t1, t2)
        if decision is not None:
            return Disposition(decision, group, tuple(examined))
    return Disposition(Decision.CONTINUE_EXHAUSTED, None, tuple(examined))


def load_failure_data(
    path,
    interpretation: Interpretation = Interpretation.ITEM_LIFETIMES,
    censor_time: Optional[float] = None,
) -> FailureData:
    """Read one value per line from CSV (optional header) or a JSON array."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    stripped = text.lstrip()
    if stripped.startswith("["):
        values = [float(v) for v in json.loads(stripped)]
    else:
        values = []
        for record in csv.reader(text.splitlines()):
            if not record or not record[0].strip():
                continue
            cell = record[0].strip()
            try:
                values.append(float(cell))
            except ValueError:
                if values:
                    raise DomainError(f"non-numeric value {cell!r} in data file")
                # a single leading non-numeric row is a header
    return FailureData(tuple(values), interpretation, censor_time)


def case_study_data() -> FailureData:
    """The embedded 36-lifetime appliance endurance dataset."""
    source = resources.files("asplan").joinpath("data/case_study.csv")
    with source.open("r", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        next(reader)  # header
        values = tuple(float(record[0]) for record in reader if record)
    return FailureData(values, Interpretation.ITEM_LIFETIMES)
