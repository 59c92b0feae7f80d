import itertools

import numpy as np
import pytest

from maxfs_recovery.simplex import (
    INFEASIBLE,
    OPTIMAL,
    LpModel,
    solve,
)


def make_model(a, b, obj, lower=None, upper=None):
    return LpModel(np.atleast_2d(np.asarray(a, float)), b, obj, lower, upper)


def dual_objective(model, sol):
    """b.duals plus the bound contributions of nonbasic-at-bound variables."""
    lo, up = model.effective_bounds()
    value = float(model.b @ sol.duals)
    for j in range(model.num_vars):
        d = sol.reduced_costs[j]
        xj = sol.x[j]
        at_lower = np.isfinite(lo[j]) and abs(xj - lo[j]) <= 1e-7 * (1 + abs(lo[j]))
        at_upper = np.isfinite(up[j]) and abs(xj - up[j]) <= 1e-7 * (1 + abs(up[j]))
        if at_lower and d > 0:
            value += d * lo[j]
        elif at_upper and d < 0:
            value += d * up[j]
    return value


def enumerate_2var(model):
    """Brute-force optimum of a 2-variable model by vertex enumeration."""
    lo, up = model.effective_bounds()
    lines = [(model.A[i], model.b[i]) for i in range(model.num_cons)]
    for j in range(2):
        e = np.zeros(2)
        e[j] = 1.0
        if np.isfinite(lo[j]):
            lines.append((e, lo[j]))
        if np.isfinite(up[j]):
            lines.append((e, up[j]))
    best = None
    for (a1, b1), (a2, b2) in itertools.combinations(lines, 2):
        mat = np.vstack([a1, a2])
        if abs(np.linalg.det(mat)) < 1e-12:
            continue
        pt = np.linalg.solve(mat, [b1, b2])
        if np.any(pt < lo - 1e-9) or np.any(pt > up + 1e-9):
            continue
        if np.max(np.abs(model.A @ pt - model.b)) > 1e-9:
            continue
        z = float(model.obj @ pt)
        if best is None or z < best:
            best = z
    return best


def test_cheaper_variable_wins():
    m = make_model([[1, 1]], [1], [2, 1])
    sol = solve(m)
    assert sol.status == OPTIMAL
    assert np.allclose(sol.x, [0, 1], atol=1e-9)
    assert abs(sol.objective - 1) < 1e-9


def test_bound_conflict_infeasible():
    m = make_model([[1]], [-1], [1])
    assert solve(m).status == INFEASIBLE


def test_dual_of_fixing_constraint():
    m = make_model([[1]], [5], [1])
    sol = solve(m)
    assert sol.status == OPTIMAL
    assert abs(sol.objective - 5) < 1e-9
    assert abs(sol.duals[0] - 1) < 1e-9


def test_set_objective_roundtrip():
    m = make_model([[1, 1]], [1], [1, 1])
    m.set_objective_coeff(1, 0.0)
    assert m.obj[1] == 0.0
    m.set_objective_coeff(1, 1.0)
    assert np.array_equal(m.obj, [1.0, 1.0])
    with pytest.raises(IndexError):
        m.set_objective_coeff(5, 0.0)


def test_objective_edit_matches_fresh_model():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((3, 6))
    x0 = rng.uniform(0, 1, 6)
    b = a @ x0
    m = make_model(a, b, np.ones(6))
    solve(m)
    m.set_objective_coeff(2, 0.1)
    warm = solve(m)
    fresh_obj = np.ones(6)
    fresh_obj[2] = 0.1
    fresh = solve(make_model(a, b, fresh_obj))
    assert warm.status == fresh.status == OPTIMAL
    assert abs(warm.objective - fresh.objective) <= 1e-8 * (1 + abs(fresh.objective))


def test_fix_variable_basic():
    m = make_model([[1, 1]], [1], [0, 1])
    m.fix_variable(0, 0.0)
    sol = solve(m)
    assert np.allclose(sol.x, [0, 1], atol=1e-9)


def test_fix_variable_infeasible():
    m = make_model([[1]], [1], [1])
    m.fix_variable(0, 0.0)
    assert solve(m).status == INFEASIBLE


def test_fix_unfix_restores_original():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((2, 5))
    x0 = rng.uniform(0, 1, 5)
    m = make_model(a, a @ x0, rng.uniform(0.5, 2, 5))
    base = solve(m)
    m.fix_variable(1, 0.0)
    solve(m)
    m.unfix_variable(1)
    again = solve(m)
    assert again.status == base.status == OPTIMAL
    assert abs(again.objective - base.objective) <= 1e-8 * (1 + abs(base.objective))


def test_fix_value_outside_bounds_rejected():
    m = make_model([[1]], [1], [1], lower=[0], upper=[2])
    with pytest.raises(ValueError):
        m.fix_variable(0, 3.0)


def test_free_variable_negative_solution():
    # single free variable must reach a negative value
    m = make_model([[1.0]], [-3], [0.0], lower=[-np.inf], upper=[np.inf])
    sol = solve(m)
    assert sol.status == OPTIMAL
    assert abs(sol.x[0] + 3) < 1e-9


def test_upper_bounds_respected():
    m = make_model([[1, 1]], [3], [1, 2], lower=[0, 0], upper=[2, 5])
    sol = solve(m)
    assert sol.status == OPTIMAL
    assert np.allclose(sol.x, [2, 1], atol=1e-9)


def test_two_variable_vertex_enumeration_agreement():
    rng = np.random.default_rng(17)
    checked = 0
    for _ in range(300):
        a = rng.standard_normal((1, 2))
        x0 = rng.uniform(0, 2, 2)
        b = a @ x0
        upper = rng.uniform(2.5, 6, 2)
        m = make_model(a, b, rng.standard_normal(2), lower=[0, 0], upper=upper)
        sol = solve(m)
        best = enumerate_2var(m)
        assert sol.status == OPTIMAL
        assert best is not None
        assert abs(sol.objective - best) < 1e-10 * (1 + abs(best))
        checked += 1
    assert checked == 300


def test_duality_gap_and_complementary_slackness():
    rng = np.random.default_rng(23)
    for _ in range(400):
        m_rows = rng.integers(1, 5)
        n_cols = rng.integers(m_rows, 9)
        a = rng.standard_normal((m_rows, n_cols))
        upper = rng.uniform(0.5, 3.0, n_cols)
        x0 = rng.uniform(0, 1, n_cols) * upper
        b = a @ x0
        c = rng.standard_normal(n_cols)
        model = make_model(a, b, c, lower=np.zeros(n_cols), upper=upper)
        sol = solve(model)
        assert sol.status == OPTIMAL
        assert np.max(np.abs(model.A @ sol.x - model.b)) <= 1e-7
        gap = sol.objective - dual_objective(model, sol)
        assert abs(gap) <= 1e-8 * (1 + abs(sol.objective))
        for j in range(n_cols):
            if abs(sol.x[j]) <= 1e-9:
                assert sol.reduced_costs[j] >= -1e-8
            elif abs(sol.x[j] - upper[j]) <= 1e-9:
                assert sol.reduced_costs[j] <= 1e-8
            else:
                assert abs(sol.reduced_costs[j]) <= 1e-8


def test_deterministic_resolves():
    rng = np.random.default_rng(31)
    a = rng.standard_normal((4, 10))
    x0 = rng.uniform(0, 1, 10)
    b = a @ x0
    c = rng.standard_normal(10)
    s1 = solve(make_model(a, b, c))
    s2 = solve(make_model(a, b, c))
    assert s1.status == s2.status
    assert np.array_equal(s1.x, s2.x)
    assert np.array_equal(s1.duals, s2.duals)
    assert s1.objective == s2.objective


def test_warm_start_uses_fewer_iterations():
    rng = np.random.default_rng(41)
    a = rng.standard_normal((10, 40))
    x0 = rng.uniform(0, 1, 40)
    m = make_model(a, a @ x0, np.ones(40))
    cold = solve(m)
    m.set_objective_coeff(3, 0.0)
    warm = solve(m)
    assert warm.status == OPTIMAL
    assert warm.iterations < cold.iterations
