"""Frame-based compression path: segmentation, DCT, thresholding,
random measurement matrices, and reconstruction.

The sparsifying transform is the orthonormal type-II DCT, so time and
coefficient domains carry the same energy and thresholding error is
identical in both.
"""

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .validation import check_matrix, check_vector

MATRIX_KINDS = ("rgm", "rnm")


@dataclass
class Segment:
    index: int
    samples: np.ndarray
    pad_len: int = 0


@dataclass
class SparsifiedSegment:
    coeffs: np.ndarray
    s_sparsity: int
    threshold: float


@dataclass
class MeasurementSpec:
    """Deterministic recipe for a random m-by-n measurement matrix.

    kind 'rgm' draws i.i.d. standard Gaussian entries; 'rnm' rescales
    each Gaussian column to unit l2 norm.
    """

    kind: str
    m: int
    n: int
    seed: int

    def __post_init__(self):
        if self.kind not in MATRIX_KINDS:
            raise ValueError(f"matrix kind must be one of {MATRIX_KINDS}")
        if self.m > self.n:
            raise ValueError(f"m = {self.m} exceeds n = {self.n}")
        if self.m < 1:
            raise ValueError("m must be positive")


def segment(signal, n):
    """Split a signal into consecutive length-n frames, zero-padding the
    last one and recording how much padding was added."""
    signal = check_vector(signal, "signal")
    if signal.size == 0:
        raise ValueError("signal is empty")
    if n < 1:
        raise ValueError("frame length must be positive")
    segments = []
    for index, start in enumerate(range(0, signal.size, n)):
        chunk = signal[start : start + n]
        pad = n - chunk.size
        if pad:
            chunk = np.concatenate([chunk, np.zeros(pad)])
        segments.append(Segment(index=index, samples=chunk, pad_len=pad))
    return segments


def dct_forward(frame):
    """Orthonormal type-II DCT coefficients of a frame."""
    frame = check_vector(frame, "frame")
    return scipy.fft.dct(frame, type=2, norm="ortho")


def dct_inverse(coeffs):
    """Inverse of dct_forward (orthonormal type-III DCT)."""
    coeffs = check_vector(coeffs, "coeffs")
    return scipy.fft.idct(coeffs, type=2, norm="ortho")


def dct_basis(n):
    """The n-by-n orthonormal synthesis matrix: frame = basis @ coeffs."""
    return scipy.fft.idct(np.eye(n), type=2, norm="ortho", axis=0)


def sparsify(coeffs, factor=1.3):
    """Zero every coefficient at or below factor times the mean absolute
    coefficient; the survivors define the frame's sparsity."""
    coeffs = check_vector(coeffs, "coeffs")
    if coeffs.size == 0:
        raise ValueError("coeffs is empty")
    threshold = factor * float(np.mean(np.abs(coeffs)))
    kept = np.where(np.abs(coeffs) > threshold, coeffs, 0.0)
    return SparsifiedSegment(
        coeffs=kept,
        s_sparsity=int(np.count_nonzero(kept)),
        threshold=threshold,
    )


def measurement_matrix(spec):
    """Generate the matrix described by a MeasurementSpec."""
    rng = np.random.default_rng(spec.seed)
    phi = rng.standard_normal((spec.m, spec.n))
    if spec.kind == "rnm":
        phi /= np.linalg.norm(phi, axis=0)
    return phi


def compress(phi, coeffs):
    """Measurement vector y = phi @ coeffs."""
    phi = check_matrix(phi, "phi")
    coeffs = check_vector(coeffs, "coeffs", length=phi.shape[1])
    return phi @ coeffs


def reconstruct(recovered, pad_len=0):
    """Inverse-DCT recovered coefficient vectors and concatenate them.

    recovered is a list of (segment index, coefficient vector) pairs;
    indices must form 0..k-1 with no gaps.  pad_len trailing samples
    (the zero padding of the final frame) are dropped.
    """
    if not recovered:
        raise ValueError("nothing to reconstruct")
    by_index = {int(i): np.asarray(c, dtype=np.float64) for i, c in recovered}
    count = len(by_index)
    missing = [i for i in range(count) if i not in by_index]
    if missing:
        raise ValueError(f"missing segment indices {missing}")
    frames = [dct_inverse(by_index[i]) for i in range(count)]
    signal = np.concatenate(frames)
    if pad_len:
        signal = signal[:-pad_len]
    return signal


def energy_gate(segments, full_rms, rel_threshold=1e-3):
    """Drop frames whose RMS falls below rel_threshold times the signal RMS."""
    kept = [s for s in segments if _rms(s.samples) >= rel_threshold * full_rms]
    return kept


def _rms(x):
    return float(np.sqrt(np.mean(x * x)))


def mutual_coherence(phi, psi):
    """Largest |<phi_i, psi_j>| over column pairs with i != j.

    Matching index pairs are excluded, so identical matrices score the
    off-diagonal maximum (identity scores 0).
    """
    phi = check_matrix(phi, "phi")
    psi = check_matrix(psi, "psi")
    if phi.shape[0] != psi.shape[0]:
        raise ValueError("column vectors must share the same length")
    inner = np.abs(phi.T @ psi)
    k = min(inner.shape)
    inner[np.arange(k), np.arange(k)] = 0.0
    return float(inner.max())


def suggested_measurements(s, n, c=1.0, mu=1.0):
    """Measurement count ceil(c * mu^2 * s * ln n)."""
    if s < 1:
        raise ValueError("sparsity must be at least 1")
    if n < 2:
        raise ValueError("n must be at least 2")
    if c <= 0:
        raise ValueError("c must be positive")
    return int(np.ceil(c * mu * mu * s * np.log(n)))
