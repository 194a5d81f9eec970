"""Command-line front end.

Subcommands: design, crisp-baseline, verify-tables, dispose, oracle.
Option precedence: command-line flags override config-file values override
defaults.  The config file is flat ``key = value`` text using the long
option names with dashes or underscores.  ASP_SEED in the environment
replaces the default seed (an explicit --seed still wins).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

from . import disposition, oracle
from .errors import DomainError, InfeasibleError
from .fuzzyopt import SolverSettings, solve_plan
from .lifemodel import Thresholds
from .membership import FuzzyLevel, FuzzyLife
from .plans import Family, PlanProblem, crisp_baseline


def _default_seed() -> int:
    raw = os.environ.get("ASP_SEED")
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"ASP_SEED must be an integer, got {raw!r}")


def _read_config(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill in defaults from the config file for options not given on the
    command line."""
    if not getattr(args, "config", None):
        return
    config = _read_config(args.config)
    given = {
        token.split("=", 1)[0].lstrip("-").replace("-", "_")
        for token in sys.argv[1:]
        if token.startswith("--")
    }
    float_keys = {
        "lambda0", "lambda1", "alpha", "beta", "a", "b1", "b2", "cost", "tau",
        "t1", "t2", "tolerance",
    }
    int_keys = {"n", "n_max", "restarts", "seed", "table", "rows", "draws"}
    bool_keys = {"allow_t2_above_lambda0"}
    valid = set(vars(args))
    for key, raw in config.items():
        if key not in valid:
            raise DomainError(f"unknown config key {key!r}")
        if key in given:
            continue
        if key in bool_keys:
            setattr(args, key, raw.lower() in ("1", "true", "yes", "on"))
        elif key in int_keys:
            setattr(args, key, int(raw))
        elif key in float_keys:
            setattr(args, key, float(raw))
        else:
            setattr(args, key, raw)


def _add_problem_flags(sub: argparse.ArgumentParser) -> None:
    # Required inputs are validated after the config file is merged in, so a
    # config can supply any of them; argparse must not reject their absence.
    sub.add_argument("--config", help="flat key = value config file")
    sub.add_argument("--family", choices=[f.value for f in Family])
    sub.add_argument("--lambda0", type=float, help="acceptable mean life")
    sub.add_argument("--lambda1", type=float, help="rejectable mean life")
    sub.add_argument("--alpha", type=float, help="producer risk level")
    sub.add_argument("--beta", type=float, help="consumer risk level")
    sub.add_argument("--a", type=float, help="fuzziness scale (a > lambda0)")
    sub.add_argument("--b1", type=float, default=0.05, help="producer risk slack")
    sub.add_argument("--b2", type=float, default=0.05, help="consumer risk slack")
    sub.add_argument("--cost", type=float, default=1.0, help="cost rate per unit time")
    sub.add_argument("--tau", type=float, help="censoring time (censored family only)")
    sub.add_argument(
        "--objective-variant",
        choices=["etc_star", "etc_upper_bound"],
        default="etc_star",
    )
    sub.add_argument("--n-max", type=int, default=200)
    sub.add_argument("--allow-t2-above-lambda0", action="store_true")
    sub.add_argument("--sd-form", choices=["n", "sqrt_n"], default="n")
    sub.add_argument(
        "--membership-form",
        choices=["cost_ascending", "standard"],
        default="cost_ascending",
    )
    sub.add_argument("--restarts", type=int, default=32)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out", help="write the design JSON here as well as stdout")


def _build_problem(args: argparse.Namespace) -> PlanProblem:
    for key in ("family", "lambda0", "lambda1", "alpha", "beta", "a"):
        if getattr(args, key) is None:
            raise DomainError(f"--{key} is required (flag or config file)")
    family = Family(args.family)
    if family is Family.TYPE_I and args.tau is None:
        raise DomainError("--tau is required for the censored family")
    return PlanProblem(
        family=family,
        lambda0=FuzzyLife(lambda_j=args.lambda0, a=args.a),
        lambda1=FuzzyLife(lambda_j=args.lambda1, a=args.a),
        alpha=FuzzyLevel(args.alpha, args.b1),
        beta=FuzzyLevel(args.beta, args.b2),
        cost=args.cost,
        tau=args.tau,
        objective_variant=args.objective_variant,
        n_max=args.n_max,
        allow_t2_above_lambda0=args.allow_t2_above_lambda0,
        sd_form=args.sd_form,
    )


def _emit(payload: dict, out_path) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _fmt(x):
    return float(f"{x:.6g}") if isinstance(x, float) else x


def _cmd_design(args: argparse.Namespace, crisp: bool) -> int:
    problem = _build_problem(args)
    seed = args.seed if args.seed is not None else _default_seed()
    settings = SolverSettings(restarts=args.restarts, seed=seed)
    try:
        if crisp:
            design = crisp_baseline(problem, settings, args.membership_form)
        else:
            design = solve_plan(problem, settings, args.membership_form)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    payload = {
        "family": problem.family.value,
        "crisp": crisp,
        "inputs": {
            "lambda0": args.lambda0,
            "lambda1": args.lambda1,
            "alpha": args.alpha,
            "beta": args.beta,
            "a": args.a,
            "b1": args.b1,
            "b2": args.b2,
            "cost": args.cost,
            "tau": args.tau,
            "objective_variant": args.objective_variant,
            "membership_form": args.membership_form,
        },
        "t1": _fmt(design.t1),
        "t2": _fmt(design.t2),
        "n": design.n,
        "phi": _fmt(design.phi),
        "objective": _fmt(design.objective_value),
        "margins": {"g": _fmt(design.g_margin), "h": _fmt(design.h_margin)},
        "z_lower": _fmt(design.z_lower),
        "z_upper": _fmt(design.z_upper),
        "seed": seed,
    }
    _emit(payload, args.out)
    return 0


def _cmd_verify_tables(args: argparse.Namespace) -> int:
    rows = oracle.load_golden_rows()
    if args.table is not None:
        rows = [r for r in rows if r.table == args.table]
    if args.rows is not None:
        rows = rows[: args.rows]
    reports = oracle.verify_tables(rows, feasibility_tol=args.tolerance)
    if args.csv:
        oracle.write_reports_csv(args.csv, reports)
    if args.json:
        oracle.write_reports_json(args.json, reports)
    checked = [r for r in reports if r["feasible"] is not None]
    passed = sum(1 for r in checked if r["feasible"])
    for report in reports:
        if report["feasible"] is None:
            continue
        verdict = "pass" if report["feasible"] else "FAIL"
        print(
            f"table {report['table']} {report['family']}/{report['variant']} "
            f"g={report['g']:.6g} h={report['h']:.6g} "
            f"etc_rel_err={report['etc_rel_err']:+.4%} {verdict}"
        )
    if not checked:
        print("no design rows selected")
        return 0
    rate = passed / len(checked)
    print(f"feasibility: {passed}/{len(checked)} ({rate:.1%})")
    return 0 if rate >= 0.9 else 2


def _cmd_dispose(args: argparse.Namespace) -> int:
    try:
        if args.data == "case-study":
            data = disposition.case_study_data()
        else:
            data = disposition.load_failure_data(args.data)
    except (OSError, ValueError, DomainError) as exc:
        print(f"cannot read data: {exc}", file=sys.stderr)
        return 1
    t1, t2, n, tau = args.t1, args.t2, args.n, args.tau
    if args.design_json:
        with open(args.design_json, "r", encoding="utf-8") as handle:
            design = json.load(handle)
        t1 = design["t1"] if t1 is None else t1
        t2 = design["t2"] if t2 is None else t2
        n = design.get("n") if n is None else n
        tau = design.get("inputs", {}).get("tau") if tau is None else tau
    if t1 is None or t2 is None:
        print("need --t1 and --t2 (or --design-json)", file=sys.stderr)
        return 1
    family = Family(args.family)
    if family is Family.SSP:
        result = disposition.dispose_ssp(data, t1, t2)
    elif family is Family.RGSP_MIN:
        result = disposition.dispose_rgsp_min(data, t1, t2, n)
    elif family is Family.RGSP_MAX:
        result = disposition.dispose_rgsp_max(data, t1, t2, n)
    else:
        if tau is None:
            print("--tau is required for the censored family", file=sys.stderr)
            return 1
        result = disposition.dispose_type1(data, t1, t2, n, tau)
    payload = {
        "decision": result.decision.value,
        "decided_at": result.decided_at,
        "evidence": [_fmt(v) for v in result.evidence],
        "family": family.value,
        "t1": t1,
        "t2": t2,
        "n": n,
        "tau": tau,
    }
    _emit(payload, args.out)
    if result.decision is disposition.Decision.ACCEPT:
        return 0
    if result.decision is disposition.Decision.REJECT:
        return 3
    return 4


def _cmd_oracle(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.family:
        family = Family(args.family)
        life = FuzzyLife(lambda_j=args.lambda0, a=args.a)
        closed = oracle._closed_triprob(
            family, life, Thresholds(args.t1, args.t2), args.n
        ) if family is not Family.TYPE_I else None
        mc = oracle.mc_triprob(
            family,
            life,
            Thresholds(args.t1, args.t2),
            n=args.n,
            tau=args.tau,
            draws=args.draws,
            seed=seed,
        )
        reports = []
        if closed is not None:
            for component, cf, est, se in (
                ("p_a", closed.p_a, mc.p_a, mc.se_a),
                ("p_r", closed.p_r, mc.p_r, mc.se_r),
                ("p_c", closed.p_c, mc.p_c, mc.se_c),
            ):
                tol = 3.0 * se + 3.0 / args.draws
                reports.append(
                    oracle.OracleReport(
                        name=f"{family.value} {component}",
                        closed_form=cf,
                        oracle=est,
                        tolerance=tol,
                        passed=abs(cf - est) <= tol,
                        detail=f"draws={args.draws} seed={seed}",
                    )
                )
        else:
            print(json.dumps(asdict(mc), indent=2, sort_keys=True))
            return 0
    else:
        reports = oracle.run_regression_grid(draws=args.draws, seed=seed)
    payload = [asdict(r) for r in reports]
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.json:
        oracle.write_reports_json(args.json, reports)
    return 0 if all(r.passed for r in reports) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asplan",
        description="Design and verify minimum-cost acceptance sampling plans "
        "for exponential lifetimes with fuzzy quality parameters.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    design = subs.add_parser("design", help="solve a plan design problem")
    _add_problem_flags(design)

    crisp = subs.add_parser("crisp-baseline", help="solve the crisp limit of a problem")
    _add_problem_flags(crisp)

    verify = subs.add_parser("verify-tables", help="recheck the embedded reference designs")
    verify.add_argument("--config", help="flat key = value config file")
    verify.add_argument("--table", type=int, help="restrict to one table id")
    verify.add_argument("--rows", type=int, help="restrict to the first N rows")
    verify.add_argument("--tolerance", type=float, default=5e-3)
    verify.add_argument("--csv", help="write the report as CSV")
    verify.add_argument("--json", help="write the report as JSON")

    dispose = subs.add_parser("dispose", help="apply a design to observed data")
    dispose.add_argument("--config", help="flat key = value config file")
    dispose.add_argument("--data", required=True, help="CSV/JSON data file, or 'case-study'")
    dispose.add_argument("--family", required=True, choices=[f.value for f in Family])
    dispose.add_argument("--t1", type=float)
    dispose.add_argument("--t2", type=float)
    dispose.add_argument("--n", type=int, default=1)
    dispose.add_argument("--tau", type=float)
    dispose.add_argument("--design-json", help="take thresholds from a design output file")
    dispose.add_argument("--out", help="write the decision JSON here as well as stdout")

    mc = subs.add_parser("oracle", help="run the Monte-Carlo cross-checks")
    mc.add_argument("--config", help="flat key = value config file")
    mc.add_argument("--draws", type=int, default=10**6)
    mc.add_argument("--seed", type=int, default=None)
    mc.add_argument("--family", choices=[f.value for f in Family])
    mc.add_argument("--lambda0", type=float, default=300.0)
    mc.add_argument("--a", type=float, default=1500.0)
    mc.add_argument("--t1", type=float, default=5.8231)
    mc.add_argument("--t2", type=float, default=251.1178)
    mc.add_argument("--n", type=int, default=1)
    mc.add_argument("--tau", type=float)
    mc.add_argument("--json", help="write the report as JSON")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        if args.command == "design":
            return _cmd_design(args, crisp=False)
        if args.command == "crisp-baseline":
            return _cmd_design(args, crisp=True)
        if args.command == "verify-tables":
            return _cmd_verify_tables(args)
        if args.command == "dispose":
            return _cmd_dispose(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        parser.error(f"unknown command {args.command!r}")
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
