"""Independent verification: Monte-Carlo mixture sampling and the
golden-table harness.

The Monte-Carlo side re-derives every plan probability by direct simulation
of the lifetime model (a random failure rate from the raised-cosine
membership, then exponential lifetimes), with no shared code path through
the closed forms it checks.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError
from .lifemodel import (
    Thresholds,
    expected_y,
    expected_y_upper_bound,
    harmonic_number,
    rgsp_max_triprob,
    rgsp_min_triprob,
    ssp_triprob,
    typeI_triprob,
    weighted_survival,
)
from .membership import FuzzyLife
from .plans import Family

_TYPE_I_CHUNK = 100_000


@dataclass(frozen=True)
class McEstimate:
    p_a: float
    p_r: float
    p_c: float
    se_a: float
    se_r: float
    se_c: float
    draws: int


@dataclass(frozen=True)
class OracleReport:
    name: str
    closed_form: float
    oracle: float
    tolerance: float
    passed: bool
    detail: str


@dataclass(frozen=True)
class GoldenRow:
    table: int
    family: str
    variant: str
    lambda0: float
    lambda1: float
    alpha: float
    beta: float
    a: Optional[float]
    b1: float
    b2: float
    tau: Optional[float]
    t1: Optional[float]
    t2: Optional[float]
    n: Optional[int]
    etc: float


def sample_mixture_rate(f: FuzzyLife, rng: np.random.Generator) -> float:
    """One failure rate drawn from the normalized raised-cosine density by
    rejection against the uniform envelope (acceptance probability 1/2)."""
    lo, hi = f.support
    center = 1.0 / f.lambda_j
    while True:
        rate = lo + (hi - lo) * rng.random()
        if rng.random() < 0.5 * (1.0 + math.cos(f.a * math.pi * (rate - center))):
            return rate


def _sample_rates(f: FuzzyLife, size: int, rng: np.random.Generator) -> np.ndarray:
    lo, hi = f.support
    center = 1.0 / f.lambda_j
    out = np.empty(size)
    filled = 0
    while filled < size:
        want = size - filled
        # Acceptance rate is 1/2; oversample to finish in ~1 round.
        proposals = lo + (hi - lo) * rng.random(2 * want + 16)
        memberships = 0.5 * (1.0 + np.cos(f.a * np.pi * (proposals - center)))
        accepted = proposals[rng.random(proposals.size) < memberships]
        take = min(accepted.size, want)
        out[filled : filled + take] = accepted[:take]
        filled += take
    return out


def _estimate(n_a: int, n_r: int, draws: int) -> McEstimate:
    p_a = n_a / draws
    p_r = n_r / draws
    p_c = 1.0 - p_a - p_r

    def se(p: float) -> float:
        return math.sqrt(max(p * (1.0 - p), 0.0) / draws)

    return McEstimate(p_a, p_r, p_c, se(p_a), se(p_r), se(p_c), draws)


def mc_triprob(
    family: Family,
    life,
    th: Thresholds,
    n: int = 1,
    tau: Optional[float] = None,
    draws: int = 10**6,
    seed: int = 42,
) -> McEstimate:
    """Simulated accept/reject/continue frequencies for one stage of a plan.

    ``life`` is a FuzzyLife for the mixture families; the censored-MLE family
    uses only its nominal mean (pass a FuzzyLife or a plain number).  Groups
    of the minimum family share one rate; the maximum family draws an
    independent rate per item; the censored family simulates the exact MLE,
    counting zero-failure groups as acceptances.
    """
    if draws < 10**4:
        raise DomainError(f"draws must be >= 10^4, got {draws}")
    family = Family(family)
    rng = np.random.default_rng(seed)
    if family is Family.SSP or family is Family.RGSP_MIN:
        rates = _sample_rates(life, draws, rng)
        scale = 1.0 / rates if family is Family.SSP else 1.0 / (n * rates)
        y = rng.exponential(scale)
        return _estimate(int(np.sum(y >= th.t2)), int(np.sum(y < th.t1)), draws)
    if family is Family.RGSP_MAX:
        y_max = np.zeros(draws)
        for _ in range(n):
            rates = _sample_rates(life, draws, rng)
            y_max = np.maximum(y_max, rng.exponential(1.0 / rates))
        return _estimate(int(np.sum(y_max >= th.t2)), int(np.sum(y_max < th.t1)), draws)
    if family is Family.TYPE_I:
        if tau is None:
            raise DomainError("censored-MLE simulation requires tau")
        lambda_j = float(life.lambda_j) if isinstance(life, FuzzyLife) else float(life)
        n_a = n_r = 0
        done = 0
        while done < draws:
            chunk = min(_TYPE_I_CHUNK, draws - done)
            x = rng.exponential(lambda_j, size=(chunk, n))
            q = np.sum(x < tau, axis=1)
            total = np.sum(np.minimum(x, tau), axis=1)
            with np.errstate(divide="ignore"):
                lam_hat = np.where(q > 0, total / np.maximum(q, 1), np.inf)
            # q = 0 gives lam_hat = inf: every item outlived the test, accept.
            n_a += int(np.sum(lam_hat >= th.t2))
            n_r += int(np.sum(lam_hat < th.t1))
            done += chunk
        return _estimate(n_a, n_r, draws)
    raise DomainError(f"unknown family {family!r}")


# A fixed 20-case regression grid over the three mixture families, spanning
# the embedded table designs plus off-table corners.
REGRESSION_GRID: tuple = (
    ("ssp", 300.0, 1500.0, 5.8231, 251.1178, 1),
    ("ssp", 300.0, 15000.0, 6.4907, 251.617, 1),
    ("ssp", 300.0, 2100.0, 4.0, 400.0, 1),
    ("ssp", 70.0, 2100.0, 10.0, 60.0, 1),
    ("ssp", 50.0, 1500.0, 5.0, 40.0, 1),
    ("ssp", 500.0, 15000.0, 100.0, 400.0, 1),
    ("ssp", 200.0, 1500.0, 1.0, 190.0, 1),
    ("rgsp_min", 300.0, 1500.0, 1e-6, 79.3124, 50),
    ("rgsp_min", 300.0, 15000.0, 0.0005, 284.0415, 9),
    ("rgsp_min", 500.0, 1500.0, 0.0006, 177.8714, 23),
    ("rgsp_min", 500.0, 15000.0, 0.0018, 224.5448, 15),
    ("rgsp_min", 200.0, 1500.0, 0.001, 50.0, 10),
    ("rgsp_min", 300.0, 2100.0, 0.01, 100.0, 5),
    ("rgsp_max", 300.0, 1500.0, 130.947, 338.7602, 11),
    ("rgsp_max", 300.0, 15000.0, 130.6584, 338.9876, 12),
    ("rgsp_max", 500.0, 1500.0, 155.5672, 997.4723, 4),
    ("rgsp_max", 500.0, 15000.0, 224.4646, 938.2128, 4),
    ("rgsp_max", 50.0, 1500.0, 10.0, 45.0, 3),
    ("rgsp_max", 150.0, 15000.0, 100.0, 149.0, 6),
    ("rgsp_max", 300.0, 15000.0, 176.3513, 196.9506, 5),
)


def _closed_triprob(family: Family, f: FuzzyLife, th: Thresholds, n: int):
    if family is Family.SSP:
        return ssp_triprob(f, th)
    if family is Family.RGSP_MIN:
        return rgsp_min_triprob(f, th, n)
    return rgsp_max_triprob(f, th, n)


def run_regression_grid(draws: int = 10**6, seed: int = 42) -> list[OracleReport]:
    """Compare every closed-form plan probability to its simulation on the
    fixed grid; pass at 3 standard errors (plus a two-count slack)."""
    reports = []
    for family_name, lam, a, t1, t2, n in REGRESSION_GRID:
        family = Family(family_name)
        f = FuzzyLife(lambda_j=lam, a=a)
        th = Thresholds(t1=t1, t2=t2)
        closed = _closed_triprob(family, f, th, n)
        mc = mc_triprob(family, f, th, n=n, draws=draws, seed=seed)
        for component, cf, est in (
            ("p_a", closed.p_a, mc.p_a),
            ("p_r", closed.p_r, mc.p_r),
            ("p_c", closed.p_c, mc.p_c),
        ):
            pooled = 0.5 * (cf + est)
            se = math.sqrt(max(pooled * (1.0 - pooled), 0.0) / draws)
            tol = 3.0 * se + 3.0 / draws
            reports.append(
                OracleReport(
                    name=f"{family.value} lam={lam:g} a={a:g} n={n} {component}",
                    closed_form=cf,
                    oracle=est,
                    tolerance=tol,
                    passed=abs(cf - est) <= tol,
                    detail=f"draws={draws} seed={seed}",
                )
            )
    return reports


def _parse_optional(text: str) -> Optional[float]:
    text = text.strip()
    return float(text) if text else None


def load_golden_rows() -> list[GoldenRow]:
    """The embedded reference designs, one row per (design, objective variant)."""
    rows = []
    source = resources.files("asplan").joinpath("data/golden_tables.csv")
    with source.open("r", encoding="utf-8") as handle:
        for record in csv.DictReader(handle):
            n_text = record["n"].strip()
            rows.append(
                GoldenRow(
                    table=int(record["table"]),
                    family=record["family"],
                    variant=record["variant"],
                    lambda0=float(record["lambda0"]),
                    lambda1=float(record["lambda1"]),
                    alpha=float(record["alpha"]),
                    beta=float(record["beta"]),
                    a=_parse_optional(record["a"]),
                    b1=float(record["b1"]),
                    b2=float(record["b2"]),
                    tau=_parse_optional(record["tau"]),
                    t1=_parse_optional(record["t1"]),
                    t2=_parse_optional(record["t2"]),
                    n=int(n_text) if n_text else None,
                    etc=float(record["etc"]),
                )
            )
    return rows


def _row_survival(lam: float, a: Optional[float], t: float, crisp: bool) -> float:
    if crisp:
        return math.exp(-t / lam)
    return weighted_survival(FuzzyLife(lambda_j=lam, a=a), t)


def _row_rates(row: GoldenRow, lam: float) -> tuple[float, float, float]:
    """(p_a, p_r, 1 - p_c) at the row's design for mean life lam.

    Evaluated directly from the survival function so rows whose printed
    thresholds are inverted (t1 > t2) still get the algebraic extension the
    reference solver would have used.
    """
    crisp = row.variant == "crisp"
    n = row.n or 1
    if row.family == "type1":
        tp = typeI_triprob(lam, Thresholds(min(row.t1, row.t2), max(row.t1, row.t2)), n, row.tau)
        return tp.p_a, tp.p_r, tp.p_a + tp.p_r
    if row.family == "rgsp_min":
        s1 = _row_survival(lam, row.a, n * row.t1, crisp)
        s2 = _row_survival(lam, row.a, n * row.t2, crisp)
        p_a, p_r = s2, 1.0 - s1
    elif row.family == "rgsp_max":
        s1 = _row_survival(lam, row.a, row.t1, crisp)
        s2 = _row_survival(lam, row.a, row.t2, crisp)
        p_a = 1.0 - (1.0 - s2) ** n
        p_r = (1.0 - s1) ** n
    else:
        s1 = _row_survival(lam, row.a, row.t1, crisp)
        s2 = _row_survival(lam, row.a, row.t2, crisp)
        p_a, p_r = s2, 1.0 - s1
    return p_a, p_r, p_a + p_r


def _row_expected_cost(row: GoldenRow, terminate0: float) -> float:
    if row.family == "type1":
        return row.tau / terminate0
    if row.variant == "crisp":
        base = row.lambda0
    else:
        f0 = FuzzyLife(lambda_j=row.lambda0, a=row.a)
        base = expected_y_upper_bound(f0) if row.variant == "etc_upper_bound" else expected_y(f0)
    n = row.n or 1
    if row.family == "rgsp_min":
        base /= n
    elif row.family == "rgsp_max":
        base *= harmonic_number(n)
    return base / terminate0


def verify_tables(
    rows: Optional[Iterable[GoldenRow]] = None, feasibility_tol: float = 5e-3
) -> list[dict]:
    """Recompute the risks and cost at every embedded design.

    A row is feasible when the long-run producer risk stays within
    alpha + b1 and the consumer risk within beta + b2, both padded by the
    printed-precision tolerance.  Comparison-only rows carry no design and
    are reported without a feasibility verdict.
    """
    reports = []
    for row in rows if rows is not None else load_golden_rows():
        report = {
            "table": row.table,
            "family": row.family,
            "variant": row.variant,
            "lambda0": row.lambda0,
            "lambda1": row.lambda1,
            "alpha": row.alpha,
            "beta": row.beta,
            "a": row.a,
            "tau": row.tau,
            "t1": row.t1,
            "t2": row.t2,
            "n": row.n,
            "etc_printed": row.etc,
        }
        if row.variant == "comparison" or row.t1 is None:
            report.update(feasible=None, g=None, h=None, etc_recomputed=None, etc_rel_err=None)
            reports.append(report)
            continue
        p_a0, p_r0, terminate0 = _row_rates(row, row.lambda0)
        p_a1, _, terminate1 = _row_rates(row, row.lambda1)
        g = p_r0 / terminate0
        h = p_a1 / terminate1
        etc = _row_expected_cost(row, terminate0)
        g_bound = row.alpha + row.b1 + feasibility_tol
        h_bound = row.beta + row.b2 + feasibility_tol
        report.update(
            g=g,
            h=h,
            g_bound=g_bound,
            h_bound=h_bound,
            feasible=bool(g <= g_bound and h <= h_bound),
            etc_recomputed=etc,
            etc_rel_err=(etc - row.etc) / row.etc,
        )
        reports.append(report)
    return reports


def write_reports_csv(path, reports: Sequence[dict]) -> None:
    fieldnames = sorted({key for report in reports for key in report})
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(reports)


def write_reports_json(path, reports: Sequence) -> None:
    payload = [r if isinstance(r, dict) else asdict(r) for r in reports]
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
