"""Dense linear algebra shared by the recovery solvers.

Least squares goes through a pivoted QR factorization rather than the
normal equations; the greedy solvers call it in an inner loop on
moderately conditioned submatrices.
"""

import numpy as np
import scipy.linalg

from .validation import check_matrix, check_vector

# A factorization pivot below this fraction of the largest pivot marks a
# dependent column.
RANK_TOL = 1e-10


class RankDeficiencyError(ValueError):
    """Raised when a least-squares matrix loses full column rank."""

    def __init__(self, n_deficient, n_cols):
        self.n_deficient = n_deficient
        self.n_cols = n_cols
        super().__init__(
            f"matrix is rank deficient: {n_deficient} of {n_cols} columns dependent"
        )


def mat_vec(a, v):
    """Return A @ v with dimension checking."""
    a = check_matrix(a, "A")
    v = check_vector(v, "v", length=a.shape[1])
    return a @ v


def least_squares(a, b):
    """Solve min ||A x - b||_2 for a full-column-rank A with rows >= cols.

    Raises RankDeficiencyError when the pivoted QR factorization finds
    dependent columns (pivot below RANK_TOL times the largest pivot).
    """
    a = check_matrix(a, "A")
    b = check_vector(b, "b", length=a.shape[0])
    m, n = a.shape
    if m < n:
        raise ValueError(f"least_squares needs rows >= cols, got {m} x {n}")
    q, r, perm = scipy.linalg.qr(a, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag[0] == 0.0:
        raise RankDeficiencyError(n, n)
    rank = int(np.sum(diag > RANK_TOL * diag[0]))
    if rank < n:
        raise RankDeficiencyError(n - rank, n)
    z = scipy.linalg.solve_triangular(r, q.T @ b, lower=False)
    x = np.empty(n)
    x[perm] = z
    return x


def pseudo_inverse(a):
    """Moore-Penrose pseudo-inverse (SVD based)."""
    a = check_matrix(a, "A")
    return np.linalg.pinv(a)
