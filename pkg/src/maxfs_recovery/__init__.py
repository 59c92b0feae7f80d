"""Sparse recovery toolkit built around maximum-feasible-subsystem search.

Recovers S-sparse coefficient vectors from compressed measurements
y = phi @ a.  Three MAX FS search engines (weighted, elastic, staged)
sit beside classic baselines (basis pursuit, matching pursuit, OMP,
polytope faces pursuit, reweighted least squares), a frame/DCT speech
compression pipeline, and an experiment harness for critical-sparsity
sweeps.
"""

from .baselines import (
    GreedyStop,
    IrwlsConfig,
    RecoveryError,
    basis_pursuit,
    matching_pursuit,
    orthogonal_matching_pursuit,
    polytope_faces_pursuit,
    reweighted_least_squares,
)
from .estimators import (
    BasisPursuit,
    ElasticMaxFs,
    MatchingPursuit,
    OrthogonalMatchingPursuit,
    PolytopeFacesPursuit,
    ReweightedLeastSquares,
    StagedMaxFs,
    WeightedMaxFs,
)
from .maxfs import (
    MaxFsConfig,
    elastic_maxfs,
    reduce_support,
    solve_support_values,
    staged_maxfs,
    weighted_maxfs,
)
from .metrics import geometric_mean, is_success, rse, t_sparsity
from .oracle import OracleResult, min_support_exact
from .result import RecoveryResult, SolverStats
from .simplex import LpModel, LpSolution, SimplexStalled
from .simplex import solve as lp_solve

__all__ = [
    "BasisPursuit",
    "ElasticMaxFs",
    "GreedyStop",
    "IrwlsConfig",
    "LpModel",
    "LpSolution",
    "MatchingPursuit",
    "MaxFsConfig",
    "OracleResult",
    "OrthogonalMatchingPursuit",
    "PolytopeFacesPursuit",
    "RecoveryError",
    "RecoveryResult",
    "ReweightedLeastSquares",
    "SimplexStalled",
    "SolverStats",
    "StagedMaxFs",
    "WeightedMaxFs",
    "basis_pursuit",
    "elastic_maxfs",
    "geometric_mean",
    "is_success",
    "lp_solve",
    "matching_pursuit",
    "min_support_exact",
    "orthogonal_matching_pursuit",
    "polytope_faces_pursuit",
    "reduce_support",
    "reweighted_least_squares",
    "rse",
    "solve_support_values",
    "staged_maxfs",
    "t_sparsity",
    "weighted_maxfs",
]

__version__ = "0.1.0"
