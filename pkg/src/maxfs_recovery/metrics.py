"""Success determination and quality metrics for recovery experiments."""

from dataclasses import dataclass

import numpy as np

from .validation import check_vector


@dataclass
class TrialRecord:
    """One recovery trial in a sweep."""

    method: str
    input_s: int
    recovered_t: int
    success: bool
    rse: float | None = None
    runtime: float = 0.0
    lp_solves: int | None = None
    residual_inf: float | None = None  # max|phi x - y| of the returned x
    y_scale: float | None = None  # max|y|, for feasibility tolerances


def t_sparsity(x, tol=1e-6):
    """Number of entries with magnitude above tol."""
    x = check_vector(x, "x")
    if tol <= 0:
        raise ValueError("tol must be positive")
    return int(np.count_nonzero(np.abs(x) > tol))


def is_success(recovered_t, input_s):
    """Recovery counts as a success only when T equals S exactly."""
    return recovered_t == input_s


def geometric_mean(values):
    """(prod values)^(1/len), computed in log space."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("geometric mean of an empty list")
    if np.any(arr <= 0):
        raise ValueError("geometric mean requires positive values")
    return float(np.exp(np.mean(np.log(arr))))


def rse(recovered, reference):
    """Relative squared error sum((f_hat - f)^2) / sum(f^2)."""
    recovered = check_vector(recovered, "recovered")
    reference = check_vector(reference, "reference", length=recovered.shape[0])
    denom = float(np.sum(reference * reference))
    if denom == 0.0:
        raise ValueError("reference signal is identically zero")
    diff = recovered - reference
    return float(np.sum(diff * diff) / denom)
