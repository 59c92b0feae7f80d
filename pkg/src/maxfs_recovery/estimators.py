"""scikit-learn style wrappers around the recovery algorithms.

Each estimator treats the measurement matrix as the design matrix X
(m samples, n features) and the measurement vector as the target y, so
fitting solves the sparse linear system X @ coef = y.  Fitted
attributes follow sklearn conventions: coef_, support_, n_nonzero_,
residual_norm_ and stats_.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from . import baselines, maxfs
from .baselines import GreedyStop, IrwlsConfig
from .maxfs import MaxFsConfig


class _RecoveryEstimator(BaseEstimator, RegressorMixin):
    def _recover(self, X, y):
        raise NotImplementedError

    def fit(self, X, y):
        result = self._recover(X, y)
        self.coef_ = result.x
        self.support_ = np.asarray(result.support, dtype=int)
        self.n_nonzero_ = result.t_sparsity
        self.residual_norm_ = result.residual_norm
        self.stats_ = result.stats
        self.n_features_in_ = X.shape[1] if hasattr(X, "shape") else len(X[0])
        return self

    def predict(self, X):
        if not hasattr(self, "coef_"):
            raise AttributeError("estimator is not fitted yet")
        return np.asarray(X, dtype=np.float64) @ self.coef_


class BasisPursuit(_RecoveryEstimator):
    """Minimum-l1 recovery via linear programming."""

    def __init__(self, nonzero_tol=1e-6):
        self.nonzero_tol = nonzero_tol

    def _recover(self, X, y):
        return baselines.basis_pursuit(X, y, nonzero_tol=self.nonzero_tol)


class MatchingPursuit(_RecoveryEstimator):
    def __init__(self, max_sparsity=None, residual_tol=1e-5, nonzero_tol=1e-6):
        self.max_sparsity = max_sparsity
        self.residual_tol = residual_tol
        self.nonzero_tol = nonzero_tol

    def _recover(self, X, y):
        stop = GreedyStop(max_sparsity=self.max_sparsity, residual_tol=self.residual_tol)
        return baselines.matching_pursuit(X, y, stop, nonzero_tol=self.nonzero_tol)


class OrthogonalMatchingPursuit(_RecoveryEstimator):
    def __init__(self, max_sparsity=None, residual_tol=1e-5, nonzero_tol=1e-6):
        self.max_sparsity = max_sparsity
        self.residual_tol = residual_tol
        self.nonzero_tol = nonzero_tol

    def _recover(self, X, y):
        stop = GreedyStop(max_sparsity=self.max_sparsity, residual_tol=self.residual_tol)
        return baselines.orthogonal_matching_pursuit(
            X, y, stop, nonzero_tol=self.nonzero_tol
        )


class PolytopeFacesPursuit(_RecoveryEstimator):
    def __init__(self, max_sparsity=None, residual_tol=1e-5, theta_min=1e-8,
                 nonzero_tol=1e-6):
        self.max_sparsity = max_sparsity
        self.residual_tol = residual_tol
        self.theta_min = theta_min
        self.nonzero_tol = nonzero_tol

    def _recover(self, X, y):
        stop = GreedyStop(
            max_sparsity=self.max_sparsity,
            residual_tol=self.residual_tol,
            theta_min=self.theta_min,
        )
        return baselines.polytope_faces_pursuit(X, y, stop, nonzero_tol=self.nonzero_tol)


class ReweightedLeastSquares(_RecoveryEstimator):
    def __init__(self, p=0.0, eps_initial=1.0, eps_shrink=0.1, eps_floor=1e-8,
                 inner_tol=0.1, max_outer=1000, nonzero_tol=1e-6):
        self.p = p
        self.eps_initial = eps_initial
        self.eps_shrink = eps_shrink
        self.eps_floor = eps_floor
        self.inner_tol = inner_tol
        self.max_outer = max_outer
        self.nonzero_tol = nonzero_tol

    def _recover(self, X, y):
        cfg = IrwlsConfig(
            p=self.p,
            eps_initial=self.eps_initial,
            eps_shrink=self.eps_shrink,
            eps_floor=self.eps_floor,
            inner_tol=self.inner_tol,
            max_outer=self.max_outer,
        )
        return baselines.reweighted_least_squares(X, y, cfg, nonzero_tol=self.nonzero_tol)


class _MaxFsEstimator(_RecoveryEstimator):
    def __init__(self, list_length=7, support_weight=0.1, nonzero_tol=1e-6,
                 zero_obj_tol=1e-6, max_support=None):
        self.list_length = list_length
        self.support_weight = support_weight
        self.nonzero_tol = nonzero_tol
        self.zero_obj_tol = zero_obj_tol
        self.max_support = max_support

    def _config(self):
        return MaxFsConfig(
            list_length=self.list_length,
            support_weight=self.support_weight,
            nonzero_tol=self.nonzero_tol,
            zero_obj_tol=self.zero_obj_tol,
            max_support=self.max_support,
        )


class WeightedMaxFs(_MaxFsEstimator):
    """Support search on the reweighted l1 LP."""

    def _recover(self, X, y):
        return maxfs.weighted_maxfs(X, y, self._config())


class ElasticMaxFs(_MaxFsEstimator):
    """Support search on the elastic LP with zeroing-row sensitivities."""

    def _recover(self, X, y):
        return maxfs.elastic_maxfs(X, y, self._config())


class StagedMaxFs(_MaxFsEstimator):
    """Basis pursuit first, weighted support search as the fallback."""

    def _recover(self, X, y):
        return maxfs.staged_maxfs(X, y, self._config())
