"""Sparse recovery by maximum-feasible-subsystem search.

Casts  phi x = y, x = 0  as a MAX FS instance: admit as few variables
as possible into the support until the remaining zero constraints are
satisfiable.  Two search engines are provided, one on the split
variable l1 LP with support reweighting (weighted_maxfs) and one on an
elastic LP with explicit per-variable zeroing rows (elastic_maxfs),
plus a staged combination that only falls back to the weighted search
when plain basis pursuit has failed (staged_maxfs).

Every search ends with the same postprocessing: prune superfluous
support members (reduce_support) and re-solve the support values on the
restricted system (solve_support_values).
"""

from dataclasses import dataclass

import numpy as np

from . import simplex
from .baselines import RecoveryError, basis_pursuit, l1_model
from .result import SolverStats, build_result
from .validation import check_system

ZERO_OBJ_TOL = 1e-6
NONZERO_TOL = 1e-6
TIE_REL_TOL = 1e-9
REDUCE_TOL_FACTOR = 1e-7


@dataclass
class MaxFsConfig:
    """Tuning knobs for the support search.

    list_length bounds the candidate list per iteration; support_weight
    is the objective weight admitted pairs keep in the weighted search;
    nonzero_tol defines "nonzero"; zero_obj_tol defines "objective has
    reached zero"; max_support caps the admitted support (defaults to m).
    """

    list_length: int = 7
    support_weight: float = 0.1
    nonzero_tol: float = NONZERO_TOL
    zero_obj_tol: float = ZERO_OBJ_TOL
    max_support: int | None = None

    def __post_init__(self):
        if self.list_length < 1:
            raise ValueError("list_length must be at least 1")
        if not 0 <= self.support_weight < 1:
            raise ValueError("support_weight must lie in [0, 1)")
        if self.nonzero_tol <= 0:
            raise ValueError("nonzero_tol must be positive")

    def support_cap(self, m):
        return m if self.max_support is None else self.max_support


def _top_by_magnitude(values, eligible, count):
    """Indices of the `count` largest |values| among eligible, ties by index."""
    idx = np.nonzero(eligible)[0]
    if idx.size == 0:
        return []
    order = np.argsort(-np.abs(values[idx]), kind="stable")
    return [int(i) for i in idx[order[:count]]]


def _better(z, winner_z):
    if not np.isfinite(winner_z):
        return True
    return z < winner_z - TIE_REL_TOL * (1.0 + abs(winner_z))


def _tied(z, winner_z):
    return abs(z - winner_z) <= TIE_REL_TOL * (1.0 + max(abs(z), abs(winner_z)))


def weighted_maxfs(phi, y, config=None):
    """Support search on the split-variable l1 LP.

    Each iteration re-solves the LP under the current objective weights
    and gathers the largest nonzero |u_j - v_j| still carrying unit
    weight as candidates.  A candidate is probed by zeroing its pair's
    objective coefficients; the probe score is the remaining violation
    mass (the l1 mass outside the admitted support and the probe), so a
    score of zero means the tested support explains the measurements.
    The winner keeps support_weight permanently.  The final support is
    read off the last solution and postprocessed.
    """
    phi, y = check_system(phi, y)
    cfg = config or MaxFsConfig()
    m, n = phi.shape
    stats = SolverStats()
    model = l1_model(phi, y)

    def solve_lp():
        stats.lp_solves += 1
        sol = simplex.solve(model)
        if sol.status != simplex.OPTIMAL:
            raise RecoveryError(f"support-search LP ended {sol.status}")
        return sol

    def signed_values(sol):
        return sol.x[:n] - sol.x[n:]

    def violation_mass(sol, probe):
        # l1 mass still carried by variables required to be zero
        values = signed_values(sol)
        outside = model.obj[:n] == 1.0
        outside[probe] = False
        return float(np.sum(np.abs(values[outside])))

    def candidate_list(sol):
        values = signed_values(sol)
        eligible = (np.abs(values) > cfg.nonzero_tol) & (model.obj[:n] == 1.0)
        return _top_by_magnitude(values, eligible, cfg.list_length)

    sol = solve_lp()
    if sol.objective <= cfg.zero_obj_tol:
        return _postprocess(phi, y, [], cfg, stats)
    support = []
    cap = cfg.support_cap(m)
    final_sol = sol
    while True:
        candidates = candidate_list(sol)
        if not candidates:
            break
        if len(support) >= cap:
            raise RecoveryError("no sparse support found within the support cap")
        winner, winner_z, done = None, np.inf, False
        for k in candidates:
            model.set_objective_coeff(k, 0.0)
            model.set_objective_coeff(n + k, 0.0)
            probe_sol = solve_lp()
            z = violation_mass(probe_sol, k)
            if z <= cfg.zero_obj_tol:
                support.append(k)
                final_sol = probe_sol
                stats.winning_z.append(z)
                done = True
                break
            if _better(z, winner_z) or (
                _tied(z, winner_z) and winner is not None and k < winner
            ):
                winner, winner_z = k, z
            model.set_objective_coeff(k, 1.0)
            model.set_objective_coeff(n + k, 1.0)
        if done:
            break
        stats.iterations += 1
        stats.winning_z.append(winner_z)
        support.append(winner)
        model.set_objective_coeff(winner, cfg.support_weight)
        model.set_objective_coeff(n + winner, cfg.support_weight)
        sol = solve_lp()
        final_sol = sol
    values = signed_values(final_sol)
    found = np.nonzero(np.abs(values) > cfg.nonzero_tol)[0].tolist()
    return _postprocess(phi, y, found, cfg, stats)


def elastic_maxfs(phi, y, config=None):
    """Support search on the elastic LP with explicit zeroing rows.

    The LP has free x variables, nonnegative elastic pairs absorbing
    each zeroing row x_j + e_j+ - e_j- = 0, and objective sum of the
    elastics.  Candidates mix the largest nonzero |x_j| with the
    zero-valued variables whose zeroing-row duals have the largest
    magnitude; admitting a variable removes its elastic pair from the
    objective for good.
    """
    phi, y = check_system(phi, y)
    cfg = config or MaxFsConfig()
    m, n = phi.shape
    stats = SolverStats()
    # columns: x (free), e+ (>=0), e- (>=0)
    a = np.zeros((m + n, 3 * n))
    a[:m, :n] = phi
    a[m:, :n] = np.eye(n)
    a[m:, n : 2 * n] = np.eye(n)
    a[m:, 2 * n :] = -np.eye(n)
    b = np.concatenate([y, np.zeros(n)])
    obj = np.concatenate([np.zeros(n), np.ones(2 * n)])
    lower = np.concatenate([np.full(n, -np.inf), np.zeros(2 * n)])
    upper = np.full(3 * n, np.inf)
    model = simplex.LpModel(a, b, obj, lower, upper)

    def solve_lp():
        stats.lp_solves += 1
        sol = simplex.solve(model)
        if sol.status != simplex.OPTIMAL:
            raise RecoveryError(f"elastic LP ended {sol.status}")
        return sol

    def candidate_list(sol, in_support, exclude=()):
        values = sol.x[:n]
        outside = np.ones(n, dtype=bool)
        outside[list(in_support)] = False
        for j in exclude:
            outside[j] = False
        nonzero = outside & (np.abs(values) > cfg.nonzero_tol)
        zero = outside & ~nonzero
        by_value = _top_by_magnitude(values, nonzero, cfg.list_length)
        sens = sol.duals[m:]
        by_dual = _top_by_magnitude(sens, zero, cfg.list_length)
        merged = by_value + [j for j in by_dual if j not in by_value]
        return merged

    def admit(k):
        model.set_objective_coeff(n + k, 0.0)
        model.set_objective_coeff(2 * n + k, 0.0)

    def retract(k):
        model.set_objective_coeff(n + k, 1.0)
        model.set_objective_coeff(2 * n + k, 1.0)

    sol = solve_lp()
    if sol.objective <= cfg.zero_obj_tol:
        return _postprocess(phi, y, [], cfg, stats)
    support = []
    candidates = candidate_list(sol, support)
    cap = cfg.support_cap(m)
    while True:
        if len(support) >= cap:
            raise RecoveryError("no sparse support found within the support cap")
        if not candidates:
            raise RecoveryError("candidate lists exhausted before feasibility")
        winner, winner_z, winner_sol, done = None, np.inf, None, False
        for k in candidates:
            admit(k)
            sol = solve_lp()
            if sol.objective <= cfg.zero_obj_tol:
                support.append(k)
                stats.winning_z.append(sol.objective)
                done = True
                break
            if _better(sol.objective, winner_z) or (
                _tied(sol.objective, winner_z) and winner is not None and k < winner
            ):
                winner, winner_z, winner_sol = k, sol.objective, sol
            retract(k)
        if done:
            break
        stats.iterations += 1
        stats.winning_z.append(winner_z)
        support.append(winner)
        admit(winner)
        candidates = candidate_list(winner_sol, support, exclude=[winner])
    return _postprocess(phi, y, sorted(support), cfg, stats)


def staged_maxfs(phi, y, config=None):
    """Basis pursuit first; weighted support search only when it failed.

    Basis pursuit either returns a genuinely sparse solution or one
    with close to m nonzeros, so failure is assumed when its sparsity
    exceeds m - 3.
    """
    phi, y = check_system(phi, y)
    cfg = config or MaxFsConfig()
    m = phi.shape[0]
    bp = basis_pursuit(phi, y, nonzero_tol=cfg.nonzero_tol)
    if bp.t_sparsity <= m - 3:
        stats = SolverStats(lp_solves=bp.stats.lp_solves)
        return _postprocess(phi, y, bp.support, cfg, stats)
    result = weighted_maxfs(phi, y, cfg)
    result.stats.lp_solves += bp.stats.lp_solves
    result.stats.used_fallback = True
    return result


def reduce_support(phi, y, support):
    """Drop support members whose removal keeps the system feasible.

    Members are probed from the highest index down with all variables
    outside the current support held at zero; a member is removed
    permanently when the remaining columns still reproduce y.
    """
    phi, y = check_system(phi, y)
    tol = REDUCE_TOL_FACTOR * (1.0 + np.max(np.abs(y), initial=0.0))
    kept = sorted(int(j) for j in support)
    if not _restricted_feasible(phi, y, kept, tol):
        raise RecoveryError("input support does not reproduce the measurements")
    for j in reversed(list(kept)):
        trial = [i for i in kept if i != j]
        if _restricted_feasible(phi, y, trial, tol):
            kept = trial
    return kept


def _restricted_feasible(phi, y, support, tol):
    if not support:
        return np.max(np.abs(y), initial=0.0) <= tol
    cols = phi[:, support]
    coef, *_ = np.linalg.lstsq(cols, y, rcond=None)
    return np.max(np.abs(cols @ coef - y)) <= tol


def solve_support_values(phi, y, support):
    """Final values on a fixed support via min sum(u+v), phi_S (u-v) = y."""
    phi, y = check_system(phi, y)
    n = phi.shape[1]
    support = sorted(int(j) for j in support)
    x = np.zeros(n)
    if not support:
        if np.max(np.abs(y), initial=0.0) > ZERO_OBJ_TOL:
            raise RecoveryError("empty support cannot reproduce nonzero measurements")
        return x
    sol = simplex.solve(l1_model(phi[:, support], y))
    if sol.status != simplex.OPTIMAL:
        raise RecoveryError(f"support-value LP ended {sol.status}")
    k = len(support)
    x[support] = sol.x[:k] - sol.x[k:]
    return x


def _postprocess(phi, y, support, cfg, stats):
    kept = reduce_support(phi, y, support)
    stats.lp_solves += len(support) + 1  # feasibility probes
    x = solve_support_values(phi, y, kept)
    stats.lp_solves += 1
    return build_result(phi, y, x, cfg.nonzero_tol, stats)
