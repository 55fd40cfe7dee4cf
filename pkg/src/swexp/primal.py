"""Primal-domain exponents as convex programs over joint distributions.

Each exponent is a minimization of divergences and conditional entropies over
a probability simplex.  All of them are convex, so they are solved directly
with an interior-point conic solver; ``value`` is then recomputed with numpy
at the cleaned minimizer.  These serve as an oracle for :mod:`swexp.dual`.

Joint distributions over ``X x X x Y`` are stored as ``(X*X, Y)`` matrices
with row index ``xh * X + xt`` (xh: competitor, xt: true symbol).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import cvxpy as cp
import numpy as np

from .dual import DEFAULT_RHO_CAP, combined_exponent
from .errors import SWError
from .model import DecodingMetric, JointSource, kl_divergence

__all__ = [
    "PrimalSolution",
    "DualityReport",
    "exponent_r_primal",
    "exponent_sp_primal",
    "exponent_ex_primal",
    "ck_rc_primal",
    "ck_ex_primal",
    "verify_duality",
    "DEFAULT_SOLVER_TOL",
]

DEFAULT_SOLVER_TOL = 1e-9
CONSTRAINT_TOL = 1e-8
ACTIVE_TOL = 1e-6


@dataclass(frozen=True)
class PrimalSolution:
    """Result of one primal minimization.

    ``resolution`` is the solver's requested accuracy; ``active`` maps each
    inequality constraint name to whether it is tight at the minimizer.
    """

    value: float
    minimizer: np.ndarray
    feasible: bool
    resolution: float
    status: str = ""
    active: dict = field(default_factory=dict)


def _infeasible(shape, tol, status="infeasible"):
    return PrimalSolution(math.inf, np.full(shape, np.nan), False, tol, status)


def _solve(problem: cp.Problem, tol: float) -> str:
    """Solve with Clarabel, falling back to SCS; returns the cvxpy status.

    Inaccurate solves are reported through the status, not as warnings.
    """
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="Solution may be inaccurate")
        try:
            problem.solve(solver=cp.CLARABEL, tol_gap_abs=tol, tol_gap_rel=tol, tol_feas=tol,
                          max_iter=500)
        except cp.error.SolverError:
            problem.solve(solver=cp.SCS, eps=tol, max_iters=200000)
    return problem.status


def _clean(v, forced_zero):
    v = np.where(forced_zero, 0.0, np.maximum(np.asarray(v, dtype=float), 0.0))
    return v / v.sum()


def _cond_entropy_np(joint):
    """H(A|B) for a joint matrix with rows a and columns b."""
    col = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    return float(-np.sum(joint[nz] * np.log((joint / np.where(col > 0, col, 1.0))[nz])))


def _check_rate(rate):
    rate = float(rate)
    if not math.isfinite(rate) or rate < 0:
        raise SWError(f"rate must be a finite nonnegative number, got {rate}")
    return rate


def _safe(p):
    return np.where(p > 0, p, 1.0)


# --------------------------------------------------------------------------
# matched exponents over P_{X~Y~}

def _two_dim_problem(source, rate, tol, hinge):
    P = source.pmf
    X, Y = P.shape
    zero = P <= 0
    V = cp.Variable((X, Y), nonneg=True)
    col = cp.sum(V, axis=0, keepdims=True)
    colb = np.ones((X, 1)) @ col
    cond_h = -cp.sum(cp.rel_entr(V, colb))
    div = cp.sum(cp.rel_entr(V, _safe(P)))
    cons = [cp.sum(V) == 1]
    if zero.any():
        cons.append(V[zero] == 0)
    if hinge:
        obj = div + cp.pos(rate - cond_h)
    else:
        obj = div
        cons.append(cond_h >= rate)
    prob = cp.Problem(cp.Minimize(obj), cons)
    return prob, V, zero


def exponent_r_primal(source: JointSource, rate: float, tol: float = DEFAULT_SOLVER_TOL) -> PrimalSolution:
    """``min_{P~} D(P~||P) + |R - H(X~|Y~)|^+``."""
    rate = _check_rate(rate)
    prob, V, zero = _two_dim_problem(source, rate, tol, hinge=True)
    status = _solve(prob, tol)
    if V.value is None:
        return _infeasible(source.pmf.shape, tol, status)
    Vc = _clean(V.value, zero)
    h = _cond_entropy_np(Vc)
    val = kl_divergence(Vc, source.pmf) + max(rate - h, 0.0)
    return PrimalSolution(val, Vc, True, tol, status, {"hinge": h >= rate - ACTIVE_TOL})


def _max_cond_entropy(source):
    """Largest H(X~|Y~) over P~ absolutely continuous w.r.t. P."""
    counts = (source.pmf > 0).sum(axis=0)
    return math.log(counts.max())


def exponent_sp_primal(source: JointSource, rate: float, tol: float = DEFAULT_SOLVER_TOL) -> PrimalSolution:
    """``min D(P~||P)`` subject to ``H(X~|Y~) >= R``; infeasible above the
    largest attainable conditional entropy."""
    rate = _check_rate(rate)
    if rate > _max_cond_entropy(source) + 1e-12:
        return _infeasible(source.pmf.shape, tol)
    prob, V, zero = _two_dim_problem(source, rate, tol, hinge=False)
    status = _solve(prob, tol)
    if V.value is None or status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return _infeasible(source.pmf.shape, tol, status)
    Vc = _clean(V.value, zero)
    h = _cond_entropy_np(Vc)
    return PrimalSolution(kl_divergence(Vc, source.pmf), Vc, True, tol, status,
                          {"entropy": abs(h - rate) <= ACTIVE_TOL})


def bhattacharyya_distance(source: JointSource) -> np.ndarray:
    """``d(xh, xt) = -log sum_y sqrt(W(y|xh) W(y|xt))``; ``inf`` for disjoint rows."""
    W = source.p_y_given_x
    bc = np.sqrt(W[:, None, :] * W[None, :, :]).sum(axis=2)
    with np.errstate(divide="ignore"):
        return -np.log(bc)


def exponent_ex_primal(source: JointSource, rate: float, tol: float = DEFAULT_SOLVER_TOL) -> PrimalSolution:
    """Expurgated exponent over couplings ``P_{X^X~}`` with equal marginals:
    ``D(P_X~||P_X) + E d(X^,X~) + R - H(X^|X~)`` subject to ``H(X^|X~) >= R``.

    The two nested minimizations of the textbook form merge into one convex
    program over the coupling.  Minimizer rows are xh, columns xt.
    """
    rate = _check_rate(rate)
    X = source.x_size
    px = source.px
    d = bhattacharyya_distance(source)
    rows = source.support_x
    zero = ~np.isfinite(d) | ~rows[:, None] | ~rows[None, :]
    dfin = np.where(zero, 0.0, d)
    V = cp.Variable((X, X), nonneg=True)
    mt = cp.sum(V, axis=0)           # P_X~
    mh = cp.sum(V, axis=1)           # P_X^
    colb = np.ones((X, 1)) @ cp.reshape(mt, (1, X), order="C")
    cond_h = -cp.sum(cp.rel_entr(V, colb))
    obj = cp.sum(cp.rel_entr(mt, _safe(px))) + cp.sum(cp.multiply(dfin, V)) + rate - cond_h
    cons = [cp.sum(V) == 1, mt == mh, cond_h >= rate]
    if zero.any():
        cons.append(V[zero] == 0)
    prob = cp.Problem(cp.Minimize(obj), cons)
    status = _solve(prob, tol)
    if V.value is None or status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return _infeasible((X, X), tol, status)
    Vc = _clean(V.value, zero)
    h = _cond_entropy_np(Vc)
    val = kl_divergence(Vc.sum(axis=0), px) + float(np.sum(dfin * Vc)) + rate - h
    return PrimalSolution(val, Vc, True, tol, status, {"entropy": abs(h - rate) <= ACTIVE_TOL})


# --------------------------------------------------------------------------
# mismatched (Csiszar-Korner) exponents over P_{X^X~Y~}

class _Triple:
    """Linear maps and masks for a variable over X x X x Y."""

    def __init__(self, source: JointSource, metric: DecodingMetric):
        metric.check_compatible(source)
        P = source.pmf
        X, Y = P.shape
        self.X, self.Y = X, Y
        self.P = P
        idx_h = np.repeat(np.arange(X), X)    # xh of row r
        idx_t = np.tile(np.arange(X), X)      # xt of row r
        self.idx_h, self.idx_t = idx_h, idx_t
        self.A_t = (np.arange(X)[:, None] == idx_t[None, :]).astype(float)   # (X, X*X)
        self.A_h = (np.arange(X)[:, None] == idx_h[None, :]).astype(float)
        self.C_t = (idx_t[:, None] == idx_t[None, :]).astype(float)          # (X*X, X*X)
        L = metric.log_q
        Lh, Lt = L[idx_h], L[idx_t]
        self.zero = (P[idx_t] <= 0) | ~np.isfinite(Lh)
        self.score = np.where(self.zero, 0.0, Lh - np.where(np.isfinite(Lt), Lt, 0.0))

    def build(self, V):
        n = self.X * self.X
        pt = self.A_t @ V                                   # P_{X~Y~}
        ph = self.A_h @ V                                   # P_{X^Y~}
        div = cp.sum(cp.rel_entr(pt, _safe(self.P)))
        cons = [
            cp.sum(V) == 1,
            cp.sum(pt, axis=1) == cp.sum(ph, axis=1),
            cp.sum(cp.multiply(self.score, V)) >= 0,
        ]
        if self.zero.any():
            cons.append(V[self.zero] == 0)
        return pt, ph, div, cons

    # numpy re-evaluation helpers
    def divergence(self, Vc):
        return kl_divergence(self.A_t @ Vc, self.P)

    def h_hat_given_ytilde(self, Vc):
        return _cond_entropy_np(self.A_h @ Vc)

    def h_hat_given_xtilde(self, Vc):
        pair = Vc.sum(axis=1).reshape(self.X, self.X)     # [xh, xt]
        return _cond_entropy_np(pair)

    def h_hat_given_xtilde_ytilde(self, Vc):
        cube = Vc.reshape(self.X, self.X * self.Y)          # [xh, (xt, y)]
        return _cond_entropy_np(cube)

    def violations(self, Vc):
        marg = np.abs(Vc.sum(axis=1) @ self.A_h.T - Vc.sum(axis=1) @ self.A_t.T).max()
        slack = float(np.sum(self.score * Vc))
        return float(marg), slack


def ck_rc_primal(source: JointSource, metric: DecodingMetric, rate: float,
                 tol: float = DEFAULT_SOLVER_TOL) -> PrimalSolution:
    """``min_{T} D(P_{X~Y~}||P) + |R - H(X^|Y~)|^+``."""
    rate = _check_rate(rate)
    tr = _Triple(source, metric)
    V = cp.Variable((tr.X * tr.X, tr.Y), nonneg=True)
    pt, ph, div, cons = tr.build(V)
    colb = np.ones((tr.X, tr.X)) @ ph
    h_hy = -cp.sum(cp.rel_entr(ph, colb))
    prob = cp.Problem(cp.Minimize(div + cp.pos(rate - h_hy)), cons)
    status = _solve(prob, tol)
    if V.value is None:
        return _infeasible((tr.X * tr.X, tr.Y), tol, status)
    Vc = _clean(V.value, tr.zero)
    h = tr.h_hat_given_ytilde(Vc)
    val = tr.divergence(Vc) + max(rate - h, 0.0)
    _, slack = tr.violations(Vc)
    return PrimalSolution(val, Vc, True, tol, status,
                          {"metric": slack <= ACTIVE_TOL, "hinge": h >= rate - ACTIVE_TOL})


def ck_ex_primal(source: JointSource, metric: DecodingMetric, rate: float,
                 tol: float = DEFAULT_SOLVER_TOL) -> PrimalSolution:
    """``min_{T, H(X^|X~) >= R} D(P_{X~Y~}||P) + R - H(X^|X~,Y~)``."""
    rate = _check_rate(rate)
    tr = _Triple(source, metric)
    X, Y = tr.X, tr.Y
    V = cp.Variable((X * X, Y), nonneg=True)
    pt, ph, div, cons = tr.build(V)
    h_full = -cp.sum(cp.rel_entr(V, tr.C_t @ V))
    pair = cp.sum(V, axis=1)
    h_pair = -cp.sum(cp.rel_entr(pair, tr.C_t @ pair))
    cons.append(h_pair >= rate)
    prob = cp.Problem(cp.Minimize(div + rate - h_full), cons)
    status = _solve(prob, tol)
    if V.value is None or status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return _infeasible((X * X, Y), tol, status)
    Vc = _clean(V.value, tr.zero)
    val = tr.divergence(Vc) + rate - tr.h_hat_given_xtilde_ytilde(Vc)
    _, slack = tr.violations(Vc)
    hp = tr.h_hat_given_xtilde(Vc)
    return PrimalSolution(val, Vc, True, tol, status,
                          {"metric": slack <= ACTIVE_TOL, "entropy": abs(hp - rate) <= ACTIVE_TOL})


# --------------------------------------------------------------------------
# duality verification

@dataclass(frozen=True)
class DualityReport:
    rates: tuple
    primal: tuple
    dual: tuple
    gaps: tuple
    max_gap: float
    tolerance: float
    passed: bool
    retried: tuple = ()

    def as_dict(self) -> dict:
        return {
            "rates": list(self.rates),
            "primal": list(self.primal),
            "dual": list(self.dual),
            "gaps": list(self.gaps),
            "max_gap": self.max_gap,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "retried": list(self.retried),
        }


def _ck_value(source, metric, rate, tol):
    """``max(ck_rc, ck_ex)``; an infeasible expurgated program means ``+inf``."""
    rc = ck_rc_primal(source, metric, rate, tol)
    ex = ck_ex_primal(source, metric, rate, tol)
    return max(rc.value, ex.value if ex.feasible else math.inf)


def _gap(primal_value, dual_point):
    # an unbounded primal matches only a dual whose supremum ran into a cap
    if math.isinf(primal_value):
        return 0.0 if dual_point.saturated_rho else math.inf
    return abs(primal_value - dual_point.value)


def verify_duality(source: JointSource, metric: DecodingMetric, rates: Sequence[float],
                   tolerance: float = 5e-3, rho_cap: float = DEFAULT_RHO_CAP,
                   solver_tol: float = DEFAULT_SOLVER_TOL) -> DualityReport:
    """Compare ``max(ck_rc, ck_ex)`` with the type-by-type dual exponent.

    A rate whose gap exceeds ``tolerance`` is re-solved once at a 100x tighter
    solver accuracy before it counts as a failure.  An infeasible expurgated
    program makes the primal side ``+inf``; it agrees with the dual only if
    the dual supremum ran into the rho cap or the (s, a) box, and both sides
    are then reported as ``inf``.
    """
    rates = [float(r) for r in rates]
    if not rates:
        raise SWError("rate grid must be nonempty")
    primal, dual, gaps, retried = [], [], [], []
    for r in rates:
        dp = combined_exponent(source, metric, r, "tt", rho_cap)
        p = _ck_value(source, metric, r, solver_tol)
        gap = _gap(p, dp)
        if gap > tolerance:
            p = _ck_value(source, metric, r, solver_tol / 100)
            gap = _gap(p, dp)
            retried.append(r)
        primal.append(p)
        dual.append(math.inf if math.isinf(p) and dp.saturated_rho else dp.value)
        gaps.append(gap)
    max_gap = max(gaps)
    return DualityReport(tuple(rates), tuple(primal), tuple(dual), tuple(gaps), max_gap,
                         tolerance, bool(max_gap <= tolerance), tuple(retried))
