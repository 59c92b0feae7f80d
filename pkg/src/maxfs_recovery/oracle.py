"""Exact minimum-support solver by exhaustive enumeration.

Ground truth for testing the heuristic recovery methods on tiny
instances.  Supports are scanned in increasing cardinality and
lexicographic order; feasibility of each candidate support is a
least-squares residual test on the restricted column set.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .validation import check_system

MAX_N = 20
MAX_CARD = 6
FEAS_TOL_FACTOR = 1e-9


@dataclass
class OracleResult:
    min_cardinality: int
    witness_support: tuple
    unique: bool


def _support_feasible(phi, y, support, tol):
    if len(support) == 0:
        return np.max(np.abs(y), initial=0.0) <= tol
    cols = phi[:, list(support)]
    coef, *_ = np.linalg.lstsq(cols, y, rcond=None)
    return np.max(np.abs(cols @ coef - y)) <= tol


def min_support_exact(phi, y, max_card=MAX_CARD):
    """Smallest support solving phi x = y, found by brute force.

    Guarded to n <= 20 columns and max_card <= 6; raises ValueError
    outside the guard and RuntimeError when no support within max_card
    is feasible.
    """
    phi, y = check_system(phi, y)
    n = phi.shape[1]
    if n > MAX_N:
        raise ValueError(f"oracle guard: n = {n} exceeds {MAX_N}")
    if max_card > MAX_CARD or max_card < 0:
        raise ValueError(f"oracle guard: max_card must lie in [0, {MAX_CARD}]")
    tol = FEAS_TOL_FACTOR * (1.0 + np.max(np.abs(y), initial=0.0))
    for card in range(0, max_card + 1):
        witness = None
        count = 0
        for support in itertools.combinations(range(n), card):
            if _support_feasible(phi, y, support, tol):
                count += 1
                if witness is None:
                    witness = support
        if witness is not None:
            return OracleResult(
                min_cardinality=card,
                witness_support=witness,
                unique=(count == 1),
            )
    raise RuntimeError(f"no feasible support within cardinality cap {max_card}")
