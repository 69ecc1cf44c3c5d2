import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pricegame.linprog import LinearProgram, LpStatus, make_lp, solve_lp

from lp_oracle import (
    farkas_certificate,
    oracle_solve,
    rows_of,
    satisfies,
    verify_farkas,
    verify_ray,
)


def test_single_constraint_optimum():
    out = solve_lp(make_lp([1], [([1], "<=", Fraction(3, 2))]))
    assert out.status is LpStatus.OPTIMAL
    assert out.optimal_value == Fraction(3, 2)


def test_free_ray_is_unbounded():
    out = solve_lp(make_lp([1], []))
    assert out.status is LpStatus.UNBOUNDED


def test_separable_box_optimum():
    out = solve_lp(make_lp([1, 1], [([1, 0], "<=", 1), ([0, 1], "<=", 2)]))
    assert out.status is LpStatus.OPTIMAL
    assert out.optimal_value == 3


def test_infeasible_system():
    out = solve_lp(make_lp([1], [([1], "<=", 0), ([1], ">=", 1)]))
    assert out.status is LpStatus.INFEASIBLE


def test_equality_and_bounds():
    out = solve_lp(
        make_lp([2, 1], [([1, 1], "=", 4)], lower={0: 0}, upper={0: 3, 1: 10})
    )
    assert out.status is LpStatus.OPTIMAL
    assert out.optimal_value == 2 * 3 + 1  # x0 at its cap, x1 takes the rest


def test_malformed_dimensions_rejected():
    with pytest.raises(ValueError):
        LinearProgram(2, (Fraction(1),), ())
    with pytest.raises(ValueError):
        make_lp([1, 1], [([1], "<=", 0)])
    with pytest.raises(ValueError):
        make_lp([1], [([1], "<<", 0)])
    with pytest.raises(ValueError):
        make_lp([1], [], lower={0: 2}, upper={0: 1})


def test_negative_rhs_needs_artificial():
    out = solve_lp(make_lp([-1], [([1], ">=", -2)], lower={0: -10}))
    assert out.status is LpStatus.OPTIMAL
    assert out.optimal_value == 2
    assert out.witness == (Fraction(-2),)


def random_lp(rng: random.Random) -> LinearProgram:
    n = rng.randint(1, 4)
    m = rng.randint(1, 6)
    objective = [rng.randint(-5, 5) for _ in range(n)]
    constraints = []
    for _ in range(m):
        coeffs = [rng.randint(-5, 5) for _ in range(n)]
        rel = rng.choice(["<=", ">=", "="])
        constraints.append((coeffs, rel, rng.randint(-5, 5)))
    lower, upper = {}, {}
    for j in range(n):
        if rng.random() < 0.25:
            a, b = rng.randint(-5, 5), rng.randint(-5, 5)
            lower[j], upper[j] = min(a, b), max(a, b)
    return make_lp(objective, constraints, lower=lower, upper=upper)


def assert_matches_oracle(lp: LinearProgram):
    out = solve_lp(lp)
    status, value, certificate = oracle_solve(lp)
    assert out.status.value == status
    rows = rows_of(lp)
    if status == "optimal":
        assert out.optimal_value == value
        assert satisfies(rows, out.witness)
    elif status == "unbounded":
        point, ray = certificate
        assert satisfies(rows, point)
        assert verify_ray(rows, ray, lp.objective)
    else:
        mult = farkas_certificate(rows, lp.num_vars)
        assert mult is not None and verify_farkas(rows, mult)


def test_random_lps_against_oracle_sample():
    rng = random.Random(2024)
    for _ in range(60):
        assert_matches_oracle(random_lp(rng))


@given(st.integers(min_value=0, max_value=10**9))
@settings(max_examples=40, deadline=None)
def test_solver_is_deterministic(seed):
    lp = random_lp(random.Random(seed))
    first = solve_lp(lp)
    second = solve_lp(lp)
    assert first.status == second.status
    assert first.optimal_value == second.optimal_value
    assert first.witness == second.witness
