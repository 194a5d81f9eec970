import random

import pytest

from asplan.errors import DomainError
from asplan.membership import FuzzyLevel, FuzzyLife
from asplan.plans import (
    Family,
    PlanProblem,
    plan_functions,
    rgsp_max_objective_and_constraints,
    rgsp_min_objective_and_constraints,
    ssp_objective_and_constraints,
    typeI_objective_and_constraints,
)


def make_problem(family=Family.SSP, **overrides) -> PlanProblem:
    kwargs = dict(
        family=family,
        lambda0=FuzzyLife(300.0, 1500.0),
        lambda1=FuzzyLife(50.0, 1500.0),
        alpha=FuzzyLevel(0.05, 0.05),
        beta=FuzzyLevel(0.05, 0.05),
    )
    kwargs.update(overrides)
    return PlanProblem(**kwargs)


def test_problem_validation():
    with pytest.raises(DomainError):
        make_problem(lambda1=FuzzyLife(400.0, 1500.0))
    with pytest.raises(DomainError):
        make_problem(lambda1=FuzzyLife(50.0, 2100.0))
    with pytest.raises(DomainError):
        make_problem(family=Family.TYPE_I)  # tau missing
    with pytest.raises(DomainError):
        make_problem(cost=0.0)
    with pytest.raises(DomainError):
        make_problem(objective_variant="nope")


def test_group_families_reduce_to_ssp_at_n1():
    p = make_problem()
    base = ssp_objective_and_constraints(p)
    rng = random.Random(21)
    for builder in (rgsp_min_objective_and_constraints, rgsp_max_objective_and_constraints):
        fns = builder(p, 1)
        for _ in range(20):
            t1 = rng.uniform(1.0, 100.0)
            x = (t1, rng.uniform(t1, 300.0))
            for got, want in zip(fns, base):
                assert got(x) == pytest.approx(want(x), rel=1e-12)


def test_bound_variant_dominates_pointwise():
    rng = random.Random(23)
    for family, n in ((Family.SSP, None), (Family.RGSP_MIN, 7), (Family.RGSP_MAX, 7)):
        star = make_problem(family=family)
        upper = make_problem(family=family, objective_variant="etc_upper_bound")
        obj_star = plan_functions(star, n)[0]
        obj_upper = plan_functions(upper, n)[0]
        for _ in range(100):
            t1 = rng.uniform(0.5, 100.0)
            x = (t1, rng.uniform(t1 + 1e-6, 300.0))
            assert obj_upper(x) >= obj_star(x)


def test_ssp_objective_tends_to_single_stage_cost():
    from asplan.lifemodel import expected_y

    p = make_problem()
    objective = ssp_objective_and_constraints(p)[0]
    # An empty continuation band means exactly one observation on average.
    assert objective((150.0, 150.0)) == pytest.approx(expected_y(p.lambda0), rel=1e-12)


def test_typeI_objective_floor_at_empty_band():
    p = make_problem(
        family=Family.TYPE_I,
        lambda1=FuzzyLife(200.0, 1500.0),
        tau=50.0,
        cost=2.0,
    )
    objective, g, h = typeI_objective_and_constraints(p, 33)
    assert objective((236.8898, 236.8898)) == pytest.approx(2.0 * 50.0, rel=1e-12)


def test_min_consumer_risk_decreases_in_t2():
    p = make_problem(family=Family.RGSP_MIN, lambda1=FuzzyLife(200.0, 1500.0))
    h = rgsp_min_objective_and_constraints(p, 10)[2]
    values = [h((0.001, t2)) for t2 in (50.0, 100.0, 150.0, 200.0, 250.0)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_constraints_match_direct_recomputation():
    from asplan.lifemodel import Thresholds, long_run, rgsp_max_triprob

    p = make_problem(family=Family.RGSP_MAX)
    _, g, h, _, _ = plan_functions(p, 5)
    x = (130.0, 290.0)
    th = Thresholds(*x)
    assert g(x) == pytest.approx(long_run(rgsp_max_triprob(p.lambda0, th, 5)).P_R, abs=1e-12)
    assert h(x) == pytest.approx(long_run(rgsp_max_triprob(p.lambda1, th, 5)).P_A, abs=1e-12)


def test_box_respects_nominal_life_by_default():
    p = make_problem()
    box = plan_functions(p, None)[3]
    assert box[1][1] == 300.0
    widened = make_problem(allow_t2_above_lambda0=True)
    assert plan_functions(widened, None)[3][1][1] > 300.0
