"""Equality-constrained LP solver: revised simplex on bounded variables.

Solves  min c.x  s.t.  A x = b,  lower <= x <= upper  and reports duals
and reduced costs.  The support-search recovery methods solve thousands
of closely related LPs, so a model keeps its last basis and re-solves
after objective edits or variable fixing reuse it when still primal
feasible.

Conventions:
  * duals lambda satisfy  reduced_cost = obj - A^T lambda
  * Phase I minimizes artificial infeasibility; "infeasible" is declared
    when its optimum exceeds feas_tol * (1 + max|b|)
  * Dantzig pricing, switching to Bland's rule after a run of
    5 * (num_vars + num_cons) degenerate pivots
"""

import numpy as np

from .validation import check_matrix, check_vector

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

FEAS_TOL = 1e-8
OPT_TOL = 1e-9
PIV_TOL = 1e-9
DEGEN_TOL = 1e-11
REFACTOR_EVERY = 100

_AT_LOWER = 0
_AT_UPPER = 1
_BASIC = 2
_FREE_NB = 3  # nonbasic free variable, parked at value 0


class SimplexStalled(RuntimeError):
    """Raised when the pivot count exceeds the hard iteration cap."""


class LpModel:
    """min obj.x  s.t.  A x = b,  lower <= x <= upper.

    Bounds default to [0, +inf).  fix_variable narrows a variable to a
    single value without losing the original bounds; unfix_variable
    restores them.
    """

    def __init__(self, a, b, obj, lower=None, upper=None):
        self.A = check_matrix(a, "A")
        m, n = self.A.shape
        self.b = check_vector(b, "b", length=m)
        self.obj = check_vector(obj, "obj", length=n).copy()
        self.lower = (
            np.zeros(n) if lower is None else np.asarray(lower, dtype=np.float64).copy()
        )
        self.upper = (
            np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=np.float64).copy()
        )
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("bound arrays must match the variable count")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")
        self.fixed = {}
        self._warm = None

    @property
    def num_vars(self):
        return self.A.shape[1]

    @property
    def num_cons(self):
        return self.A.shape[0]

    def _check_var(self, var):
        if not 0 <= var < self.num_vars:
            raise IndexError(f"variable index {var} out of range")

    def set_objective_coeff(self, var, value):
        self._check_var(var)
        self.obj[var] = float(value)
        return self

    def fix_variable(self, var, value):
        self._check_var(var)
        value = float(value)
        if not (self.lower[var] - FEAS_TOL <= value <= self.upper[var] + FEAS_TOL):
            raise ValueError(
                f"fixing value {value} outside bounds "
                f"[{self.lower[var]}, {self.upper[var]}] of variable {var}"
            )
        self.fixed[var] = value
        return self

    def unfix_variable(self, var):
        self._check_var(var)
        self.fixed.pop(var, None)
        return self

    def effective_bounds(self):
        lo = self.lower.copy()
        up = self.upper.copy()
        for var, value in self.fixed.items():
            lo[var] = up[var] = value
        return lo, up


class LpSolution:
    """Immutable solve outcome: status, primal point, objective, duals."""

    __slots__ = ("status", "x", "objective", "duals", "reduced_costs", "iterations")

    def __init__(self, status, x, objective, duals, reduced_costs, iterations):
        self.status = status
        self.x = x
        self.objective = objective
        self.duals = duals
        self.reduced_costs = reduced_costs
        self.iterations = iterations

    def __repr__(self):
        return f"LpSolution(status={self.status!r}, objective={self.objective:.6g})"


class _BasisState:
    __slots__ = ("basis", "status", "art_sign", "binv", "xb", "since_refactor")

    def __init__(self, basis, status, art_sign, binv, xb, since_refactor=0):
        self.basis = basis
        self.status = status
        self.art_sign = art_sign
        self.binv = binv
        self.xb = xb
        self.since_refactor = since_refactor


class _Simplex:
    """One solve on the artificial-extended system [A | signed I]."""

    def __init__(self, model, feas_tol):
        self.A = model.A
        self.b = model.b
        self.m, self.nv = self.A.shape
        self.ntot = self.nv + self.m
        self.feas_tol = feas_tol
        lo, up = model.effective_bounds()
        self.lo = np.concatenate([lo, np.zeros(self.m)])
        self.up = np.concatenate([up, np.full(self.m, np.inf)])
        self.iterations = 0
        self.max_iterations = 50 * (self.nv + self.m)
        self.degen_threshold = 5 * (self.nv + self.m)
        self._upd = np.empty((self.m, self.m))
        self._d = np.empty(self.ntot)
        self._viol = np.empty(self.ntot)
        self._absd = np.empty(self.ntot)
        self._ratios = np.empty(self.m)
        self._rtmp = np.empty(self.m)

    # -- basis bookkeeping ------------------------------------------------

    def _column(self, j):
        if j < self.nv:
            return self.A[:, j]
        col = np.zeros(self.m)
        col[j - self.nv] = self.art_sign[j - self.nv]
        return col

    def _nonbasic_values(self):
        vals = np.zeros(self.ntot)
        at_lo = self.status == _AT_LOWER
        at_up = self.status == _AT_UPPER
        vals[at_lo] = self.lo[at_lo]
        vals[at_up] = self.up[at_up]
        return vals

    def _rhs_minus_nonbasic(self):
        # nonbasic artificials sit at 0 and contribute nothing
        vals = self._nonbasic_values()
        r = self.b.copy()
        nz = np.nonzero(vals[: self.nv])[0]
        if nz.size:
            r -= self.A[:, nz] @ vals[nz]
        return r

    def _refactor(self):
        bmat = np.zeros((self.m, self.m))
        struct = self.basis < self.nv
        bmat[:, struct] = self.A[:, self.basis[struct]]
        art_rows = self.basis[~struct] - self.nv
        bmat[art_rows, np.nonzero(~struct)[0]] = self.art_sign[art_rows]
        self.binv = np.linalg.inv(bmat)
        self.xb = self.binv @ self._rhs_minus_nonbasic()
        self.since_refactor = 0

    def _cold_start(self):
        self.up[self.nv :] = np.inf  # artificials participate in phase I
        self.status = np.empty(self.ntot, dtype=np.int8)
        for j in range(self.nv):
            if np.isfinite(self.lo[j]):
                self.status[j] = _AT_LOWER
            elif np.isfinite(self.up[j]):
                self.status[j] = _AT_UPPER
            else:
                self.status[j] = _FREE_NB
        self.status[self.nv :] = _BASIC
        vals = self._nonbasic_values()
        r = self.b - self.A @ vals[: self.nv]
        self.art_sign = np.where(r < 0, -1.0, 1.0)
        self.basis = np.arange(self.nv, self.ntot)
        self.binv = np.diag(self.art_sign).copy()
        self.xb = np.abs(r)
        self.since_refactor = 0
        self._sync_pricing_state()

    def _try_warm_start(self, state):
        # artificials stay pinned at 0 on every re-solve; a stored basis
        # holding one away from 0 must fail the feasibility check below
        self.up[self.nv :] = 0.0
        basis = state.basis
        status = state.status.copy()
        # remap statuses that no longer match the current bounds
        nonbasic = status != _BASIC
        lo_fin = np.isfinite(self.lo)
        up_fin = np.isfinite(self.up)
        preferred = np.where(lo_fin, _AT_LOWER, np.where(up_fin, _AT_UPPER, _FREE_NB))
        bad = nonbasic & (
            ((status == _AT_LOWER) & ~lo_fin)
            | ((status == _AT_UPPER) & ~up_fin)
            | ((status == _FREE_NB) & (lo_fin | up_fin))
        )
        status[bad] = preferred[bad]
        self.basis = basis  # ownership transfers from the stored state
        self.status = status
        self.art_sign = state.art_sign
        if np.array_equal(status, state.status) and state.binv is not None:
            self.binv = state.binv
            self.since_refactor = state.since_refactor
            self.xb = self.binv @ self._rhs_minus_nonbasic()
        else:
            self._refactor()
        self._sync_pricing_state()
        grace = self.feas_tol * (1.0 + np.max(np.abs(self.b), initial=0.0))
        return bool(
            np.all(self.xb >= self.lob - grace) and np.all(self.xb <= self.upb + grace)
        )

    # -- pivoting ---------------------------------------------------------

    def _sync_pricing_state(self):
        """Rebuild the incrementally maintained pricing helpers."""
        self.lob = self.lo[self.basis]
        self.upb = self.up[self.basis]
        # violation sign: -1 prices at_lower entries, +1 at_upper, 0 inert
        self._sgn = np.where(
            self.status == _AT_LOWER,
            -1.0,
            np.where(self.status == _AT_UPPER, 1.0, 0.0),
        )
        self._sgn[self.lo == self.up] = 0.0
        self._free_nb = self.status == _FREE_NB

    def _price(self, cost):
        lam = self.binv.T @ cost[self.basis]
        d = self._d
        head = d[: self.nv]
        np.matmul(lam, self.A, out=head)
        np.subtract(cost[: self.nv], head, out=head)
        tail = d[self.nv :]
        np.multiply(self.art_sign, lam, out=tail)
        np.subtract(cost[self.nv :], tail, out=tail)
        return lam, d

    def _entering(self, d, bland):
        viol = self._viol
        np.multiply(self._sgn, d, out=viol)
        if self._free_nb.any():
            np.abs(d, out=self._absd)
            np.copyto(viol, self._absd, where=self._free_nb)
        if bland:
            ok = viol > OPT_TOL
            if not ok.any():
                return -1
            return int(np.argmax(ok))
        j = int(np.argmax(viol))
        if viol[j] <= OPT_TOL:
            return -1
        return j

    def _step(self, cost, bland):
        """One pivot. Returns 'optimal', 'unbounded' or 'pivoted'."""
        lam, d = self._price(cost)
        j = self._entering(d, bland)
        if j < 0:
            return "optimal"
        if self.status[j] == _AT_UPPER or (self.status[j] == _FREE_NB and d[j] > 0):
            direction = -1.0
        else:
            direction = 1.0
        w = self.binv @ self._column(j)
        dw = direction * w
        ratios = self._ratios
        ratios.fill(np.inf)
        tmp = self._rtmp
        np.subtract(self.xb, self.lob, out=tmp)
        np.divide(tmp, dw, out=ratios, where=dw > PIV_TOL)
        np.subtract(self.xb, self.upb, out=tmp)
        np.divide(tmp, dw, out=ratios, where=dw < -PIV_TOL)
        np.maximum(ratios, 0.0, out=ratios)
        r = int(np.argmin(ratios))
        t_rows = ratios[r]
        t_bound = self.up[j] - self.lo[j]
        if t_bound < t_rows - 1e-12:
            # bound flip, basis unchanged
            t = t_bound
            self.xb -= t * dw
            flipped_up = direction > 0
            self.status[j] = _AT_UPPER if flipped_up else _AT_LOWER
            self._sgn[j] = 1.0 if flipped_up else -1.0
            self.iterations += 1
            return "flip" if t > DEGEN_TOL else "degenerate"
        if not np.isfinite(t_rows):
            return "unbounded"
        t = t_rows
        # among near-minimal rows prefer the largest pivot magnitude;
        # under Bland's rule take the lowest leaving variable index
        near = np.nonzero(ratios <= t + 1e-9 * (1.0 + t))[0]
        if bland:
            r = int(near[np.argmin(self.basis[near])])
        else:
            r = int(near[np.argmax(np.abs(dw[near]))])
        if j < self.nv:
            enter_start = (
                self.lo[j]
                if self.status[j] == _AT_LOWER
                else self.up[j]
                if self.status[j] == _AT_UPPER
                else 0.0
            )
        else:
            enter_start = 0.0
        leaving = self.basis[r]
        self.xb -= t * dw
        if not np.isfinite(self.lo[leaving]) and not np.isfinite(self.up[leaving]):
            self.status[leaving] = _FREE_NB
            self._free_nb[leaving] = True
            self._sgn[leaving] = 0.0
        elif dw[r] > 0:
            self.status[leaving] = _AT_LOWER
            self._sgn[leaving] = 0.0 if self.lo[leaving] == self.up[leaving] else -1.0
        else:
            self.status[leaving] = _AT_UPPER
            self._sgn[leaving] = 0.0 if self.lo[leaving] == self.up[leaving] else 1.0
        self.basis[r] = j
        self.status[j] = _BASIC
        self._sgn[j] = 0.0
        self._free_nb[j] = False
        self.lob[r] = self.lo[j]
        self.upb[r] = self.up[j]
        self.xb[r] = enter_start + direction * t
        piv = w[r]
        self.binv[r, :] /= piv
        w[r] = 0.0
        np.multiply(w[:, None], self.binv[r, :], out=self._upd)
        self.binv -= self._upd
        self.since_refactor += 1
        if self.since_refactor >= REFACTOR_EVERY:
            self._refactor()
        self.iterations += 1
        return "pivoted" if t > DEGEN_TOL else "degenerate"

    def _run(self, cost):
        degen_run = 0
        bland = False
        while True:
            if self.iterations > self.max_iterations:
                raise SimplexStalled(
                    f"stalled: exceeded {self.max_iterations} simplex iterations"
                )
            outcome = self._step(cost, bland)
            if outcome == "optimal":
                return OPTIMAL
            if outcome == "unbounded":
                return UNBOUNDED
            if outcome == "degenerate":
                degen_run += 1
                if degen_run > self.degen_threshold:
                    bland = True
            else:
                degen_run = 0
                bland = False

    def _objective_value(self, cost):
        vals = self._nonbasic_values()
        vals[self.basis] = self.xb
        return float(cost @ vals), vals


def solve(model, feas_tol=FEAS_TOL):
    """Solve an LpModel, reusing its previous basis when possible."""
    sx = _Simplex(model, feas_tol)
    m, nv = sx.m, sx.nv
    cost2 = np.concatenate([model.obj, np.zeros(m)])
    warm_ok = False
    if model._warm is not None:
        warm_ok = sx._try_warm_start(model._warm)
    if not warm_ok:
        sx._cold_start()
        cost1 = np.concatenate([np.zeros(nv), np.ones(m)])
        outcome = sx._run(cost1)
        if outcome != OPTIMAL:  # pragma: no cover - phase I is bounded below
            raise SimplexStalled("phase I did not terminate at an optimum")
        p1_obj, _ = sx._objective_value(cost1)
        if p1_obj > feas_tol * (1.0 + np.max(np.abs(model.b), initial=0.0)):
            lam, d = sx._price(cost1)
            _, vals = sx._objective_value(cost1)
            sol = LpSolution(
                INFEASIBLE, vals[:nv], float(model.obj @ vals[:nv]), lam,
                d[:nv].copy(), sx.iterations,
            )
            _store_warm(model, sx)
            return sol
        sx.up[nv:] = 0.0
        sx._sync_pricing_state()
    outcome = sx._run(cost2)
    if outcome == UNBOUNDED:
        _, vals = sx._objective_value(cost2)
        lam, d = sx._price(cost2)
        _store_warm(model, sx)
        return LpSolution(
            UNBOUNDED, vals[:nv], -np.inf, lam, d[:nv].copy(), sx.iterations
        )
    z, vals = sx._objective_value(cost2)
    if sx.since_refactor > 0:
        # repair product-form drift if the reported point misses A x = b
        drift = np.max(np.abs(model.A @ vals[:nv] - model.b), initial=0.0)
        if drift > 0.5 * feas_tol:
            sx._refactor()
            sx._run(cost2)
            z, vals = sx._objective_value(cost2)
    lam, d = sx._price(cost2)
    _store_warm(model, sx)
    return LpSolution(OPTIMAL, vals[:nv], z, lam, d[:nv].copy(), sx.iterations)


def _store_warm(model, sx):
    # arrays are handed over, not copied; the solver instance is dropped
    # after solve() returns, so the stored state is the sole owner
    model._warm = _BasisState(
        sx.basis,
        sx.status,
        sx.art_sign,
        sx.binv,
        sx.xb,
        sx.since_refactor,
    )


def snapshot_basis(model):
    """Copy of the model's warm-start state (None when never solved)."""
    state = model._warm
    if state is None:
        return None
    return _BasisState(
        state.basis.copy(),
        state.status.copy(),
        state.art_sign.copy(),
        state.binv.copy(),
        state.xb.copy(),
        state.since_refactor,
    )


def restore_basis(model, snapshot):
    """Reinstate a snapshot taken by snapshot_basis."""
    if snapshot is not None:
        model._warm = _BasisState(
            snapshot.basis.copy(),
            snapshot.status.copy(),
            snapshot.art_sign.copy(),
            snapshot.binv.copy(),
            snapshot.xb.copy(),
            snapshot.since_refactor,
        )
