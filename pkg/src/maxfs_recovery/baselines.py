"""Comparison recovery algorithms: BP, MP, OMP, PFP and IRWLS.

All functions take an m-by-n measurement matrix and a length-m
measurement vector and return a RecoveryResult.  Basis pursuit solves
the l1 LP through the simplex module; the greedy methods and the
reweighted least-squares iteration are direct implementations.
"""

from dataclasses import dataclass

import numpy as np

from . import simplex
from .linalg import least_squares, pseudo_inverse
from .result import RecoveryResult, SolverStats, build_result
from .validation import check_system

NONZERO_TOL = 1e-6


@dataclass
class GreedyStop:
    """Stopping rules for the greedy pursuits.

    max_sparsity caps support growth when the input sparsity is known;
    residual_tol stops once ||r||_2 falls below it; theta_min is the
    minimum-correlation exit used by polytope faces pursuit.
    """

    max_sparsity: int | None = None
    residual_tol: float = 1e-5
    theta_min: float = 1e-8

    def __post_init__(self):
        if self.residual_tol <= 0:
            raise ValueError("residual_tol must be positive")

    def support_cap(self, m):
        if self.max_sparsity is None:
            return m
        return min(m, self.max_sparsity)


@dataclass
class IrwlsConfig:
    """Reweighted least-squares schedule: w_i = (x_i^2 + eps)^(p/2 - 1)."""

    p: float = 0.0
    eps_initial: float = 1.0
    eps_shrink: float = 0.1
    eps_floor: float = 1e-8
    inner_tol: float = 0.1
    max_outer: int = 1000

    def __post_init__(self):
        if not 0 <= self.p < 2:
            raise ValueError("p must lie in [0, 2)")
        if not 0 < self.eps_shrink < 1:
            raise ValueError("eps_shrink must lie in (0, 1)")


class RecoveryError(RuntimeError):
    """Raised when a recovery algorithm cannot produce a valid result."""


def l1_model(phi, y):
    """Build the split-variable LP  min sum(u+v) s.t. phi (u - v) = y."""
    n = phi.shape[1]
    a = np.hstack([phi, -phi])
    return simplex.LpModel(a, y, np.ones(2 * n))


def basis_pursuit(phi, y, nonzero_tol=NONZERO_TOL):
    """Minimum-l1 recovery via the split-variable LP."""
    phi, y = check_system(phi, y)
    n = phi.shape[1]
    model = l1_model(phi, y)
    sol = simplex.solve(model)
    if sol.status != simplex.OPTIMAL:
        raise RecoveryError(f"basis pursuit LP ended {sol.status}")
    x = sol.x[:n] - sol.x[n:]
    return build_result(phi, y, x, nonzero_tol, SolverStats(lp_solves=1))


def matching_pursuit(phi, y, stop=None, nonzero_tol=NONZERO_TOL):
    """Greedy residual projection; the same column may be picked again.

    Support growth is capped only by max_sparsity when the caller knows
    the input sparsity; otherwise the support may exceed m, as plain
    matching pursuit routinely does on hard instances, and termination
    rests on the 100 m total-iteration cap.
    """
    phi, y = check_system(phi, y)
    stop = stop or GreedyStop()
    m, n = phi.shape
    norms2 = np.sum(phi * phi, axis=0)
    if np.any(norms2 == 0):
        raise ValueError("phi has a zero column")
    cap = n if stop.max_sparsity is None else min(n, stop.max_sparsity)
    x = np.zeros(n)
    r = y.copy()
    touched = set()
    iterations = 0
    while np.linalg.norm(r) > stop.residual_tol and iterations < 100 * m:
        corr = phi.T @ r
        winner = int(np.argmax(np.abs(corr)))
        if winner not in touched and len(touched) >= cap:
            break
        touched.add(winner)
        step = corr[winner] / norms2[winner]
        x[winner] += step
        r -= step * phi[:, winner]
        iterations += 1
    return build_result(phi, y, x, nonzero_tol, SolverStats(iterations=iterations))


def orthogonal_matching_pursuit(phi, y, stop=None, nonzero_tol=NONZERO_TOL):
    """Greedy selection with a least-squares re-fit on the support."""
    phi, y = check_system(phi, y)
    stop = stop or GreedyStop()
    m, n = phi.shape
    if np.any(np.sum(phi * phi, axis=0) == 0):
        raise ValueError("phi has a zero column")
    cap = stop.support_cap(m)
    support = []
    coeffs = np.zeros(0)
    r = y.copy()
    iterations = 0
    while np.linalg.norm(r) > stop.residual_tol and len(support) < cap:
        winner = int(np.argmax(np.abs(phi.T @ r)))
        if winner in support:
            break  # residual orthogonality is exhausted
        support.append(winner)
        coeffs = least_squares(phi[:, support], y)
        r = y - phi[:, support] @ coeffs
        iterations += 1
    x = np.zeros(n)
    x[support] = coeffs
    return build_result(phi, y, x, nonzero_tol, SolverStats(iterations=iterations))


def polytope_faces_pursuit(phi, y, stop=None, nonzero_tol=NONZERO_TOL):
    """Path following on the dual polytope of the l1 problem.

    Works on the sign-augmented dictionary [phi, -phi] so negative
    coefficients are reachable, then folds the pairs back.
    """
    phi, y = check_system(phi, y)
    stop = stop or GreedyStop()
    m, n = phi.shape
    if np.any(np.sum(phi * phi, axis=0) == 0):
        raise ValueError("phi has a zero column")
    aug = np.hstack([phi, -phi])
    cap = stop.support_cap(m)
    support = []
    coeffs = np.zeros(0)
    c = np.zeros(m)
    r = y.copy()
    stalled = False
    iterations = 0
    while len(support) < cap:
        corr = aug.T @ r
        if np.max(corr, initial=-np.inf) < stop.theta_min:
            break
        denom = 1.0 - aug.T @ c
        eligible = (corr > 0) & (denom > 1e-12)
        for idx in support:
            eligible[idx] = False
            eligible[(idx + n) % (2 * n)] = False  # the paired sign column
        if eligible.any():
            scores = np.where(eligible, corr / np.where(eligible, denom, 1.0), -np.inf)
            winner = int(np.argmax(scores))
        else:
            winner = -1
        if winner < 0:
            stalled = np.linalg.norm(r) > stop.residual_tol
            break
        support.append(winner)
        pinv = pseudo_inverse(aug[:, support])
        coeffs = pinv @ y
        while np.any(coeffs < 0):
            worst = int(np.argmin(coeffs))
            del support[worst]
            pinv = pseudo_inverse(aug[:, support])
            coeffs = pinv @ y
        c = pinv.T @ np.ones(len(support))
        r = y - aug[:, support] @ coeffs
        iterations += 1
    x = np.zeros(n)
    for idx, value in zip(support, coeffs):
        if idx < n:
            x[idx] += value
        else:
            x[idx - n] -= value
    stats = SolverStats(iterations=iterations, stalled=bool(stalled))
    return build_result(phi, y, x, nonzero_tol, stats)


def reweighted_least_squares(phi, y, config=None, nonzero_tol=NONZERO_TOL):
    """Iteratively reweighted least squares with a shrinking regularizer.

    Each outer step solves min sum w_i x_i^2 s.t. phi x = y in closed
    form; eps shrinks once the iterates settle at the current scale and
    the loop stops at eps_floor or max_outer.
    """
    phi, y = check_system(phi, y)
    cfg = config or IrwlsConfig()
    m, n = phi.shape
    x = np.zeros(n)
    eps = cfg.eps_initial
    outer = 0
    while outer < cfg.max_outer:
        q = (x * x + eps) ** (1.0 - cfg.p / 2.0)
        gram = (phi * q) @ phi.T
        try:
            z = np.linalg.solve(gram, y)
        except np.linalg.LinAlgError as err:
            raise RecoveryError("singular weighted normal matrix") from err
        x_next = q * (phi.T @ z)
        step = np.linalg.norm(x_next - x)
        x = x_next
        outer += 1
        if step < cfg.inner_tol * np.sqrt(eps):
            eps *= cfg.eps_shrink
            if eps < cfg.eps_floor:
                break
    return build_result(phi, y, x, nonzero_tol, SolverStats(iterations=outer))
