"""Input validation helpers shared by all solver entry points.

Every solver in this package refuses NaN/Inf inputs up front so that
numerical failures surface as clear errors instead of propagating.
"""

import numpy as np


def check_vector(v, name="vector", length=None):
    """Coerce to a finite 1-D float64 array, raising ValueError otherwise."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def check_matrix(a, name="matrix"):
    """Coerce to a finite 2-D float64 array, raising ValueError otherwise."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def check_system(phi, y):
    """Validate a measurement pair (m-by-n matrix, length-m vector)."""
    phi = check_matrix(phi, "phi")
    y = check_vector(y, "y", length=phi.shape[0])
    return phi, y
