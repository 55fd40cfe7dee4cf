"""Dual-domain error exponents and their optimization.

Every exponent here is ``sup rho*R - f(rho, s, a)`` for a log-objective ``f``.
After the change of variables ``t = rho*s`` and ``b = rho*a`` the random-coding
objectives are jointly convex, and the expurgated ones are jointly convex in
``(rho, s, a)`` directly, so each exponent is a single smooth concave
maximization.  We solve it with bounded L-BFGS-B and analytic gradients from
:mod:`swexp.kernels`, then re-evaluate the exact objective at the maximizer.
One-dimensional problems (Gallager forms) use golden-section search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from . import kernels
from ._numerics import golden_max, logsumexp
from .errors import NotConverged, SWError
from .model import (
    CostFunction,
    DecodingMetric,
    DualParams,
    JointSource,
    entropy,
    kl_divergence,
    matched_metric,
    validate_source,
)

__all__ = [
    "ExponentPoint",
    "ExponentCurve",
    "gallager_e0",
    "exponent_r_gallager",
    "exponent_sp",
    "std_rc_objective",
    "std_ex_objective",
    "tt_rc_objective",
    "tt_ex_objective",
    "exponent_std_rc",
    "exponent_std_ex",
    "exponent_tt_rc",
    "exponent_tt_ex",
    "matched_ex_std",
    "matched_ex_tt",
    "exponent_no_si",
    "exponent_no_si_optimal",
    "combined_exponent",
    "tilted_distributions",
    "cc_ex_decomposition",
    "exponent_curve",
    "FAMILIES",
    "DEFAULT_RHO_CAP",
]

DEFAULT_RHO_CAP = 64.0
RHO_MIN = 1e-9          # perspective forms are undefined at rho = 0
T_MAX = 1e3             # bound on s (or rho*s)
COST_BOUND = 50.0       # bound on a(.) (or rho*a(.))
DELTA_CLIP = 1e4        # stand-in for log 0 inside the smooth optimizer
ZERO_TOL = 1e-12
_LBFGS = {"ftol": 1e-15, "gtol": 1e-11, "maxiter": 3000, "maxcor": 20}


# --------------------------------------------------------------------------
# result types

@dataclass(frozen=True)
class ExponentPoint:
    """One exponent value with the parameters that attain it."""

    rate: float
    value: float
    argmax: DualParams
    saturated_rho: bool = False
    family: str = ""
    branch: Optional[str] = None
    converged: bool = True


@dataclass(frozen=True)
class ExponentCurve:
    family: str
    points: tuple = field(default_factory=tuple)

    @property
    def rates(self) -> np.ndarray:
        return np.array([p.rate for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])


# --------------------------------------------------------------------------
# helpers

def _check_rate(rate):
    rate = float(rate)
    if not math.isfinite(rate) or rate < 0:
        raise SWError(f"rate must be a finite nonnegative number, got {rate}")
    return rate


def _check_params(rho, s):
    if not (rho >= 0 and math.isfinite(rho)):
        raise SWError(f"rho must be finite and nonnegative, got {rho}")
    if not (s >= 0 and math.isfinite(s)):
        raise SWError(f"s must be finite and nonnegative, got {s}")


def _cost_array(a, size):
    if a is None:
        return np.zeros(size)
    if isinstance(a, CostFunction):
        a = a.a
    a = np.asarray(a, dtype=float).ravel()
    if a.shape[0] != size:
        raise SWError(f"cost function has length {a.shape[0]}, expected {size}")
    return a


def _log_ratio(source: JointSource, metric: DecodingMetric) -> np.ndarray:
    """``delta[xb, x, y] = log q(xb,y) - log q(x,y)`` on supported (x, y).

    Entries with unsupported (x, y) are set to 0; entries with q(xb, y) = 0
    are ``-inf``.
    """
    metric.check_compatible(source)
    L = metric.log_q
    sup = source.pmf > 0
    base = np.where(sup, L, 0.0)
    with np.errstate(invalid="ignore"):
        delta = L[:, None, :] - base[None, :, :]
    delta[:, ~sup] = 0.0
    return delta


def _scaled(delta, s):
    """``s * delta`` with the convention ``0 * (-inf) = 0`` (so 0^0 = 1)."""
    if s == 0:
        return np.zeros_like(delta)
    return s * delta


def _clipped(delta):
    return np.ascontiguousarray(np.maximum(delta, -DELTA_CLIP))


# --------------------------------------------------------------------------
# exact objectives

def _rc_log_objective(source, metric, rho, s, a):
    _check_params(rho, s)
    delta = _log_ratio(source, metric)
    a = _cost_array(a, source.x_size)
    z = a[:, None, None] - a[None, :, None] + _scaled(delta, s)
    inner = logsumexp(z, axis=0)
    sup = source.pmf > 0
    return float(logsumexp(source.log_pmf[sup] + rho * inner[sup]))


def _ex_log_objective(source, metric, rho, s, a):
    _check_params(rho, s)
    if rho <= 0:
        raise SWError("expurgated objectives need rho > 0")
    delta = _log_ratio(source, metric)
    a = _cost_array(a, source.x_size)
    sup = source.pmf > 0
    rows = source.support_x
    T = source.log_pmf[None] + a[:, None, None] - a[None, :, None] + _scaled(delta, s)
    T = np.where(sup[None], T, -np.inf)
    g = logsumexp(T[:, rows, :], axis=2)
    h = rho * logsumexp(g / rho, axis=0)
    return float(logsumexp(h))


def std_rc_objective(source, metric, rho, s):
    """``log sum_{x,y} P(x,y) (sum_xb (q(xb,y)/q(x,y))^s)^rho``."""
    return _rc_log_objective(source, metric, rho, s, None)


def tt_rc_objective(source, metric, rho, s, a):
    """Random-coding objective with cost weights ``e^{a(xb) - a(x)}``."""
    return _rc_log_objective(source, metric, rho, s, a)


def std_ex_objective(source, metric, rho, s):
    """``log sum_x (sum_xb (sum_y P(x,y) (q(xb,y)/q(x,y))^s)^(1/rho))^rho``."""
    return _ex_log_objective(source, metric, rho, s, None)


def tt_ex_objective(source, metric, rho, s, a):
    """Expurgated objective with cost weights ``e^{a(xb) - a(x)}``."""
    return _ex_log_objective(source, metric, rho, s, a)


# --------------------------------------------------------------------------
# Gallager forms

def gallager_e0(source: JointSource, rho: float) -> float:
    """``log sum_y (sum_x P(x,y)^{1/(1+rho)})^{1+rho}``."""
    if rho < 0:
        raise SWError("rho must be nonnegative")
    r1 = 1.0 + rho
    sup = source.pmf > 0
    lp = np.where(sup, source.log_pmf, -np.inf)
    cols = sup.any(axis=0)
    inner = logsumexp(lp[:, cols] / r1, axis=0)
    return float(logsumexp(r1 * inner))


def _gallager_point(source, rate, lo, hi, family):
    rate = _check_rate(rate)
    rho, val = golden_max(lambda r: r * rate - gallager_e0(source, r), lo, hi)
    if val <= ZERO_TOL:
        return ExponentPoint(rate, 0.0, DualParams(0.0, 0.0), False, family)
    saturated = rho >= hi * (1 - 1e-9) and hi > 1
    return ExponentPoint(rate, float(val), DualParams(float(rho), 1.0 / (1.0 + rho)), saturated, family)


def exponent_r_gallager(source: JointSource, rate: float) -> ExponentPoint:
    """Random-coding exponent ``max_{0<=rho<=1} rho*R - E0(rho)``."""
    return _gallager_point(source, rate, 0.0, 1.0, "r_gallager")


def exponent_sp(source: JointSource, rate: float, rho_cap: float = DEFAULT_RHO_CAP) -> ExponentPoint:
    """Sphere-packing exponent; the supremum over rho is capped at ``rho_cap``."""
    if rho_cap <= 1:
        raise SWError("rho_cap must exceed 1")
    return _gallager_point(source, rate, 0.0, float(rho_cap), "sp")


# --------------------------------------------------------------------------
# smooth optimizer

class _Problem:
    """Concave maximization in one of the two parametrizations.

    ``kind`` is ``"rc"`` (variables rho, t=rho*s, b=rho*a) or ``"ex"``
    (variables rho, s, a).  ``with_cost`` toggles the cost vector and
    ``fixed_s`` freezes s (expurgated form only).
    """

    def __init__(self, source, metric, rate, kind, rho_lo, rho_hi, with_cost, fixed_s=None):
        self.source = source
        self.metric = metric
        self.rate = rate
        self.kind = kind
        self.rho_lo = rho_lo
        self.rho_hi = rho_hi
        self.with_cost = with_cost
        self.fixed_s = fixed_s
        self.X = source.x_size
        self.logp = np.ascontiguousarray(source.log_pmf)
        self.delta = _clipped(_log_ratio(source, metric))
        self.kernel = kernels.rc_value_grad if kind == "rc" else kernels.ex_value_grad

    # natural <-> optimizer coordinates
    def unpack(self, theta):
        rho = theta[0]
        if self.fixed_s is not None:
            second = self.fixed_s
            rest = theta[1:]
        else:
            second = theta[1]
            rest = theta[2:]
        cost = rest if self.with_cost else np.zeros(self.X)
        return rho, second, cost

    def natural(self, theta):
        """Return (rho, s, a) in the objective's own parametrization."""
        rho, second, cost = self.unpack(theta)
        if self.kind == "rc":
            return rho, second / rho, cost / rho
        return rho, second, cost

    def pack(self, rho, s, a):
        a = np.zeros(self.X) if a is None else np.asarray(a, dtype=float)
        rho = min(max(rho, self.rho_lo), self.rho_hi)
        if self.kind == "rc":
            second, cost = rho * s, rho * a
            second = min(second, T_MAX)
            cost = np.clip(cost, -COST_BOUND, COST_BOUND)
        else:
            second, cost = min(s, T_MAX), np.clip(a, -COST_BOUND, COST_BOUND)
        parts = [[rho]]
        if self.fixed_s is None:
            parts.append([second])
        if self.with_cost:
            parts.append(cost)
        return np.concatenate(parts)

    def bounds(self):
        out = [(self.rho_lo, self.rho_hi)]
        if self.fixed_s is None:
            out.append((0.0, T_MAX))
        if self.with_cost:
            out.extend([(-COST_BOUND, COST_BOUND)] * self.X)
        return out

    def at_box(self, theta):
        """True if s or the cost vector sits on its artificial bound."""
        rest = theta[1:] if self.fixed_s is not None else theta[2:]
        hit = self.fixed_s is None and theta[1] >= T_MAX * (1 - 1e-9)
        if self.with_cost and rest.size:
            hit = hit or float(np.max(np.abs(rest))) >= COST_BOUND * (1 - 1e-9)
        return bool(hit)

    def neg_value_grad(self, theta):
        rho, second, cost = self.unpack(theta)
        f, g = self.kernel(self.logp, self.delta, float(rho), float(second), cost)
        val = rho * self.rate - f
        grad = [self.rate - g[0]]
        if self.fixed_s is None:
            grad.append(-g[1])
        if self.with_cost:
            grad.extend(-g[2:])
        return -val, -np.asarray(grad)

    def exact_value(self, rho, s, a):
        if self.kind == "rc":
            f = _rc_log_objective(self.source, self.metric, rho, s, a)
        else:
            f = _ex_log_objective(self.source, self.metric, rho, s, a)
        return rho * self.rate - f

    def projected_grad_norm(self, theta):
        _, g = self.neg_value_grad(theta)
        lo = np.array([b[0] for b in self.bounds()])
        hi = np.array([b[1] for b in self.bounds()])
        step = np.clip(theta - g, lo, hi) - theta
        return float(np.max(np.abs(step)))


def _solve(problem: _Problem, starts):
    """Run L-BFGS-B from each start; return the best (value, theta, converged)."""
    best = None
    for x0 in starts:
        theta0 = problem.pack(*x0)
        res = minimize(
            problem.neg_value_grad,
            theta0,
            jac=True,
            method="L-BFGS-B",
            bounds=problem.bounds(),
            options=_LBFGS,
        )
        theta = np.asarray(res.x)
        rho, s, a = problem.natural(theta)
        val = problem.exact_value(rho, s, a)
        # the start itself is a feasible candidate too
        rho0, s0, a0 = problem.natural(theta0)
        val0 = problem.exact_value(rho0, s0, a0)
        if val0 > val:
            theta, val = theta0, val0
        if best is None or val > best[0]:
            best = (val, theta)
    val, theta = best
    converged = problem.projected_grad_norm(theta) < 1e-5
    return val, theta, converged


def _finish(problem, val, theta, converged, family, keep_cost):
    rho, s, a = problem.natural(theta)
    # hitting the rho cap or the box on (s, a) means the supremum may be larger
    saturated = (problem.rho_hi > 1 and rho >= problem.rho_hi * (1 - 1e-9)) or problem.at_box(theta)
    cost = CostFunction(a) if keep_cost else None
    if val <= ZERO_TOL:
        if problem.kind == "rc":
            # the objective vanishes at rho = 0, which is then the certified maximizer
            return ExponentPoint(problem.rate, 0.0, DualParams(0.0, 0.0, cost and CostFunction.zeros(len(a))),
                                 False, family, None, True)
        return ExponentPoint(problem.rate, 0.0, DualParams(float(rho), float(s), cost), saturated,
                             family, None, converged)
    return ExponentPoint(problem.rate, float(val), DualParams(float(rho), float(s), cost), bool(saturated),
                         family, None, converged)


def _warm_tuple(warm: Optional[ExponentPoint]):
    if warm is None or warm.argmax is None:
        return None
    a = None if warm.argmax.a is None else np.asarray(warm.argmax.a.a)
    return (warm.argmax.rho, warm.argmax.s, a)


_RC_STARTS = ((0.5, 0.5, None), (1.0, 0.5, None), (0.1, 0.9, None))
_EX_STARTS = ((1.0, 0.5, None), (2.0, 1.0, None), (8.0, 1.0, None))


def _rc_exponent(source, metric, rate, family, with_cost, rho_hi=1.0, warm=()):
    rate = _check_rate(rate)
    prob = _Problem(source, metric, rate, "rc", RHO_MIN, rho_hi, with_cost)
    starts = [w for w in warm if w is not None] + list(_RC_STARTS)
    if rho_hi > 1:
        starts.append((rho_hi / 2, 0.5, None))
    val, theta, conv = _solve(prob, starts)
    return _finish(prob, val, theta, conv, family, with_cost)


def _ex_exponent(source, metric, rate, family, with_cost, rho_cap, warm=(), fixed_s=None):
    rate = _check_rate(rate)
    if rho_cap < 1:
        raise SWError("rho_cap must be at least 1")
    prob = _Problem(source, metric, rate, "ex", 1.0, float(rho_cap), with_cost, fixed_s)
    starts = [w for w in warm if w is not None]
    starts += [(min(r, rho_cap), s, a) for r, s, a in _EX_STARTS]
    starts.append((rho_cap, 1.0, None))
    val, theta, conv = _solve(prob, starts)
    return _finish(prob, val, theta, conv, family, with_cost)


# --------------------------------------------------------------------------
# public exponents

def exponent_std_rc(source, metric, rate, warm: Optional[ExponentPoint] = None) -> ExponentPoint:
    """Standard-ensemble random-coding exponent: sup over 0<=rho<=1, s>=0."""
    return _rc_exponent(source, metric, rate, "std_rc", False, warm=(_warm_tuple(warm),))


def exponent_tt_rc(source, metric, rate, warm: Optional[ExponentPoint] = None) -> ExponentPoint:
    """Type-by-type random-coding exponent: adds the cost vector a(.)."""
    std = exponent_std_rc(source, metric, rate)
    starts = (_warm_tuple(warm), (std.argmax.rho or 0.5, std.argmax.s, None))
    return _rc_exponent(source, metric, rate, "tt_rc", True, warm=starts)


def exponent_std_ex(source, metric, rate, rho_cap=DEFAULT_RHO_CAP,
                    warm: Optional[ExponentPoint] = None) -> ExponentPoint:
    """Standard-ensemble expurgated exponent: sup over 1<=rho<=rho_cap, s>=0."""
    return _ex_exponent(source, metric, rate, "std_ex", False, rho_cap, warm=(_warm_tuple(warm),))


def exponent_tt_ex(source, metric, rate, rho_cap=DEFAULT_RHO_CAP,
                   warm: Optional[ExponentPoint] = None) -> ExponentPoint:
    """Type-by-type expurgated exponent."""
    std = exponent_std_ex(source, metric, rate, rho_cap)
    starts = (_warm_tuple(warm), (std.argmax.rho, std.argmax.s, None))
    return _ex_exponent(source, metric, rate, "tt_ex", True, rho_cap, warm=starts)


def matched_ex_std(source, rate, rho_cap=DEFAULT_RHO_CAP) -> ExponentPoint:
    """Standard expurgated exponent with the MAP metric."""
    pt = exponent_std_ex(source, matched_metric(source), rate, rho_cap)
    return _retag(pt, "ex_matched_std")


def matched_ex_tt(source, rate, rho_cap=DEFAULT_RHO_CAP,
                  warm: Optional[ExponentPoint] = None) -> ExponentPoint:
    """Type-by-type expurgated exponent of the MAP decoder (Bhattacharyya form).

    ``sup_{rho>=1, a} rho*R - log sum_x P_X(x) (sum_xb (sum_y e^{a(xb)-a(x)}
    sqrt(W(y|x) W(y|xb)))^{1/rho})^rho`` with ``W = P_{Y|X}``.
    """
    metric = DecodingMetric(source.p_y_given_x)
    rate = _check_rate(rate)
    if rho_cap < 1:
        raise SWError("rho_cap must be at least 1")
    prob = _Problem(source, metric, rate, "ex", 1.0, float(rho_cap), True, fixed_s=0.5)
    starts = [w for w in (_warm_tuple(warm),) if w is not None]
    starts += [(min(r, rho_cap), 0.5, None) for r, _, _ in _EX_STARTS] + [(rho_cap, 0.5, None)]
    val, theta, conv = _solve(prob, starts)
    return _finish(prob, val, theta, conv, "ex_matched_tt", True)


def _column_source(px):
    return validate_source(np.asarray(px, dtype=float).reshape(-1, 1))


def exponent_no_si(px, q, rate, rho_cap=DEFAULT_RHO_CAP) -> ExponentPoint:
    """Exponent of a metric ``q(x)`` decoder without side information.

    ``sup_{0<=rho<=rho_cap, s>=0} rho*R - log sum_x P_X(x) (sum_xb (q(xb)/q(x))^s)^rho``
    """
    source = _column_source(px)
    metric = DecodingMetric(np.asarray(q, dtype=float).reshape(-1, 1))
    pt = _rc_exponent(source, metric, rate, "no_si", False, rho_hi=float(rho_cap))
    return pt


def exponent_no_si_optimal(px, rate, rho_cap=DEFAULT_RHO_CAP) -> ExponentPoint:
    """Optimal fixed-length source-coding exponent
    ``sup_{rho>=0} rho*R - (1+rho) log sum_x P_X(x)^{1/(1+rho)}``."""
    return _retag(exponent_sp(_column_source(px), rate, rho_cap), "no_si_optimal")


def _retag(pt: ExponentPoint, family, branch=None) -> ExponentPoint:
    return ExponentPoint(pt.rate, pt.value, pt.argmax, pt.saturated_rho, family, branch, pt.converged)


def combined_exponent(source, metric, rate, ensemble="tt", rho_cap=DEFAULT_RHO_CAP,
                      warm_rc=None, warm_ex=None) -> ExponentPoint:
    """Larger of the random-coding and expurgated exponents; ties go to RC."""
    ens = _ensemble_name(ensemble)
    if ens == "standard":
        rc = exponent_std_rc(source, metric, rate, warm=warm_rc)
        ex = exponent_std_ex(source, metric, rate, rho_cap, warm=warm_ex)
        family = "std"
    else:
        rc = exponent_tt_rc(source, metric, rate, warm=warm_rc)
        ex = exponent_tt_ex(source, metric, rate, rho_cap, warm=warm_ex)
        family = "tt"
    win, branch = (rc, "rc") if rc.value >= ex.value else (ex, "ex")
    return _retag(win, family, branch)


def _ensemble_name(ensemble):
    if ensemble in ("standard", "std"):
        return "standard"
    if ensemble in ("type-by-type", "tt"):
        return "type-by-type"
    raise SWError(f"unknown ensemble {ensemble!r}")


# --------------------------------------------------------------------------
# tilted distributions and the constant-composition decomposition

def tilted_distributions(source, metric, rate, rho_cap=DEFAULT_RHO_CAP):
    """Tilted input distributions at the type-by-type optima.

    Returns ``(Q, Q_tilde)``: ``Q`` comes from the random-coding maximizer and
    ``Q_tilde`` from the expurgated one.  Both are pmfs over X.
    """
    rc = exponent_tt_rc(source, metric, rate)
    ex = exponent_tt_ex(source, metric, rate, rho_cap)
    if not (rc.converged and ex.converged):
        raise NotConverged(f"optimizer did not converge at rate {rate}")
    delta = _log_ratio(source, metric)
    sup = source.pmf > 0
    X = source.x_size

    a = _cost_array(rc.argmax.a, X)
    z = a[:, None, None] - a[None, :, None] + _scaled(delta, rc.argmax.s)
    inner = logsumexp(z, axis=0)
    terms = np.where(sup, source.log_pmf + rc.argmax.rho * inner, -np.inf)
    logq = logsumexp(terms, axis=1)
    Q = np.exp(logq - logsumexp(logq))

    a = _cost_array(ex.argmax.a, X)
    rho = ex.argmax.rho
    T = source.log_pmf[None] + a[:, None, None] - a[None, :, None] + _scaled(delta, ex.argmax.s)
    T = np.where(sup[None], T, -np.inf)
    g = logsumexp(T, axis=2)
    with np.errstate(invalid="ignore"):
        h = np.where(source.support_x, rho * logsumexp(g / rho, axis=0), -np.inf)
    Qt = np.exp(h - logsumexp(h))
    return Q / Q.sum(), Qt / Qt.sum()


def _cc_ex_exponent(Q, W, metric, rate_cc, rho_cap):
    """Constant-composition expurgated exponent of the channel W at input Q.

    ``sup_{rho>=1, s>=0, r} -rho sum_x Q(x) log sum_xb Q(xb)
    (sum_y W(y|x) e^{r(xb)-r(x)} (q(xb,y)/q(x,y))^s)^{1/rho} - rho*rate_cc``
    """
    X = Q.shape[0]
    rows = Q > 0
    L = np.where(metric.q > 0, metric.log_q, -DELTA_CLIP)
    with np.errstate(divide="ignore"):
        logW = np.log(W)
        logQ = np.log(Q)
    ysup = W > 0

    def value(theta):
        rho, s, r = theta[0], theta[1], theta[2:]
        # T[xb, x, y]
        T = logW[None] + r[:, None, None] - r[None, :, None] + s * (L[:, None, :] - L[None, :, :])
        T = np.where(ysup[None], T, -np.inf)
        g = logsumexp(T[:, rows, :], axis=2)
        inner = logsumexp(np.where(rows[:, None], logQ[:, None], -np.inf) + g / rho, axis=0)
        return -rho * float(np.dot(Q[rows], inner)) - rho * rate_cc

    bounds = [(1.0, rho_cap), (0.0, T_MAX)] + [(-COST_BOUND, COST_BOUND)] * X
    best = -np.inf
    for rho0, s0 in ((1.0, 0.5), (2.0, 0.5), (min(8.0, rho_cap), 1.0)):
        x0 = np.concatenate([[rho0, s0], np.zeros(X)])
        res = minimize(lambda th: -value(th), x0, method="L-BFGS-B", bounds=bounds,
                       options={"ftol": 1e-14, "gtol": 1e-9, "maxiter": 2000})
        best = max(best, -res.fun)
    return best


def cc_ex_decomposition(source, metric, rate, rho_cap=DEFAULT_RHO_CAP) -> float:
    """``D(Q~||P_X) + E^cc_ex(H(Q~) - R, Q~, P_{Y|X})`` at the expurgated optimum."""
    _, Qt = tilted_distributions(source, metric, rate, rho_cap)
    W = source.p_y_given_x
    return kl_divergence(Qt, source.px) + _cc_ex_exponent(Qt, W, metric, entropy(Qt) - rate, rho_cap)


# --------------------------------------------------------------------------
# curves

FAMILIES = (
    "std_rc", "std_ex", "std", "tt_rc", "tt_ex", "tt",
    "r_gallager", "sp", "ex_matched_std", "ex_matched_tt",
)


def exponent_curve(source, metric, rates: Sequence[float], family: str,
                   rho_cap: float = DEFAULT_RHO_CAP) -> ExponentCurve:
    """Evaluate one exponent family along a strictly increasing rate grid."""
    rates = [float(r) for r in rates]
    if any(b <= a for a, b in zip(rates, rates[1:])):
        raise SWError("rate grid must be strictly increasing")
    if family not in FAMILIES:
        raise SWError(f"unknown exponent family {family!r}")
    pts = []
    prev = None
    for r in rates:
        if family == "std_rc":
            p = exponent_std_rc(source, metric, r, warm=prev)
        elif family == "tt_rc":
            p = exponent_tt_rc(source, metric, r, warm=prev)
        elif family == "std_ex":
            p = exponent_std_ex(source, metric, r, rho_cap, warm=prev)
        elif family == "tt_ex":
            p = exponent_tt_ex(source, metric, r, rho_cap, warm=prev)
        elif family in ("std", "tt"):
            p = combined_exponent(source, metric, r, family, rho_cap)
        elif family == "r_gallager":
            p = exponent_r_gallager(source, r)
        elif family == "sp":
            p = exponent_sp(source, r, rho_cap)
        elif family == "ex_matched_std":
            p = matched_ex_std(source, r, rho_cap)
        else:
            p = matched_ex_tt(source, r, rho_cap, warm=prev)
        pts.append(p)
        prev = p if p.value > 0 else None
    return ExponentCurve(family, tuple(pts))
