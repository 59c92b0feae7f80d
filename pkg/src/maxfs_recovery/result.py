"""Common result type returned by every recovery algorithm."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class SolverStats:
    lp_solves: int = 0
    iterations: int = 0
    used_fallback: bool = False
    stalled: bool = False
    winning_z: list = field(default_factory=list)  # support-search trace


@dataclass
class RecoveryResult:
    """Recovered coefficient vector plus its support bookkeeping.

    support lists the indices with |x_j| > nonzero_tol in ascending
    order; t_sparsity is its size; residual_norm is ||phi x - y||_2.
    """

    x: np.ndarray
    support: list
    t_sparsity: int
    residual_norm: float
    stats: SolverStats = field(default_factory=SolverStats)


def build_result(phi, y, x, nonzero_tol, stats=None):
    x = np.asarray(x, dtype=np.float64)
    support = np.nonzero(np.abs(x) > nonzero_tol)[0]
    residual = float(np.linalg.norm(phi @ x - y))
    return RecoveryResult(
        x=x,
        support=support.tolist(),
        t_sparsity=int(support.size),
        residual_norm=residual,
        stats=stats or SolverStats(),
    )
