"""Exact small-blocklength simulation of random binning ensembles.

Sequences of length n over an alphabet of size A are identified with the
integers ``0 .. A**n - 1`` (base-A digits, most significant first).  Codes
are explicit bin-index arrays; ``-1`` marks a sequence that is not part of
the code (used while building expurgated codes round by round).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from ._fallback import score_matrix, sequence_digits
from .dual import _ensemble_name, _rc_log_objective, _ex_log_objective
from .errors import (
    BlocklengthTooLarge,
    EnumerationTooLarge,
    IterationBudgetExceeded,
    SWError,
)
from .model import DecodingMetric, JointSource

__all__ = [
    "BinningCode",
    "SequenceErrorReport",
    "EnsembleAverage",
    "type_classes",
    "sample_code",
    "sequence_error_probabilities",
    "exact_error_probability",
    "ensemble_average_error",
    "expected_error_power",
    "nletter_rc_bound",
    "nletter_ex_bound",
    "expurgate",
    "empirical_exponent",
    "iteration_count",
    "MAX_SEQUENCES",
]

MAX_SEQUENCES = 2**20          # hard guard on |X|^n and |Y|^n
EXACT_AVERAGE_LIMIT = 2**12    # exact ensemble average when |X|^n is at most this
EXACT_EXPECT_LIMIT = 2**22     # exact E[p_e^(1/rho)] when |X|^n |Y|^n is at most this
DP_STATE_LIMIT = 2**12
DP_WORK_LIMIT = 2**18       # state updates per sequence before falling back to sampling
MC_CODES = 256
TIE_TOL = 1e-10
BOUND_RTOL = 1e-9
BOUND_ATOL = 1e-14


def _rng(seed):
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _guard(alphabet, n, what="source"):
    if n < 1:
        raise SWError("blocklength must be positive")
    size = alphabet**n
    if size > MAX_SEQUENCES:
        cls = BlocklengthTooLarge if what == "source" else EnumerationTooLarge
        raise cls(f"{what} alphabet {alphabet}^{n} = {size} exceeds the enumeration guard 2^20", n=n)
    return size


def type_classes(x_size: int, n: int):
    """Type index of every sequence and the list of compositions (count vectors)."""
    _guard(x_size, n)
    digits = sequence_digits(x_size, n)
    counts = np.stack([(digits == a).sum(axis=1) for a in range(x_size)], axis=1)
    comps, index = np.unique(counts, axis=0, return_inverse=True)
    return index.ravel().astype(np.int64), [tuple(int(c) for c in row) for row in comps]


def iteration_count(x_size: int, n: int) -> int:
    """``k = ceil(n log2 |X|)``, the expurgation round count of the analysis."""
    return max(1, math.ceil(n * math.log2(x_size) - 1e-12))


# --------------------------------------------------------------------------
# codes

@dataclass(frozen=True, eq=False)
class BinningCode:
    """Explicit binning map.

    ``bins[i]`` is the bin of sequence ``i``.  For type-by-type codes the bins
    of type ``t`` are ``t*M_i .. (t+1)*M_i - 1``; ``bin_counts`` holds the
    per-type sizes ``M_i`` (or ``(M,)`` for standard codes).
    """

    n: int
    x_size: int
    ensemble: str
    bins: np.ndarray
    bin_counts: tuple
    M: int
    seed: object = None
    type_index: Optional[np.ndarray] = None

    @property
    def num_bins(self) -> int:
        return int(sum(self.bin_counts))

    def histogram(self) -> np.ndarray:
        active = self.bins[self.bins >= 0]
        return np.bincount(active, minlength=self.num_bins)


def _draw_bins(rng, size, M):
    return rng.integers(0, M, size=size, dtype=np.int64)


def sample_code(n: int, M: int, ensemble: str = "standard", seed=0, x_size: int = 2) -> BinningCode:
    """Draw a code from the standard or type-by-type ensemble.

    For the type-by-type ensemble ``M`` is padded up to a multiple of the
    number of types; the padded value is stored in ``code.M``.
    """
    if M < 1:
        raise SWError("M must be at least 1")
    N = _guard(x_size, n)
    ens = _ensemble_name(ensemble)
    rng = _rng(seed)
    if ens == "standard":
        bins = _draw_bins(rng, N, M)
        return BinningCode(n, x_size, ens, bins, (int(M),), int(M), seed)
    tindex, comps = type_classes(x_size, n)
    T = len(comps)
    Mi = -(-M // T)
    bins = tindex * Mi + _draw_bins(rng, N, Mi)
    return BinningCode(n, x_size, ens, bins, (int(Mi),) * T, int(Mi * T), seed, tindex)


# --------------------------------------------------------------------------
# n-letter quantities

class _Letters:
    """n-letter log tables of a memoryless source and metric."""

    def __init__(self, source: JointSource, metric: DecodingMetric, n: int):
        metric.check_compatible(source)
        self.source, self.metric, self.n = source, metric, n
        self.X, self.Y = source.x_size, source.y_size
        self.N = _guard(self.X, n)
        self.Ny = _guard(self.Y, n, "side-information")
        self.logq = np.ascontiguousarray(metric.log_q)
        self.W = np.ascontiguousarray(source.p_y_given_x)
        with np.errstate(divide="ignore"):
            self.logpx = np.log(source.px)
            self.logW = np.log(self.W)
        self.xd = sequence_digits(self.X, n)
        self.yd = sequence_digits(self.Y, n)
        self.log_px_n = self.logpx[self.xd].sum(axis=1)
        self.px_n = np.exp(self.log_px_n)

    def scores(self, idx):
        """``sum_k log q(x_k, y_k)`` for sequences ``idx`` and all y^n."""
        d = self.xd[np.asarray(idx)]
        out = np.zeros((d.shape[0], self.Ny))
        for k in range(self.n):
            out += self.logq[d[:, k]][:, self.yd[:, k]]
        return out

    def channel(self, idx):
        """``P(y^n | x^n)`` rows for sequences ``idx``."""
        d = self.xd[np.asarray(idx)]
        out = np.zeros((d.shape[0], self.Ny))
        for k in range(self.n):
            out += self.logW[d[:, k]][:, self.yd[:, k]]
        return np.exp(out)


def _tie_threshold(s):
    return s - TIE_TOL * (1.0 + np.abs(s))


def sequence_error_probabilities(code: BinningCode, source: JointSource, metric: DecodingMetric) -> np.ndarray:
    """Exact error probability of every sequence in the code (0 for uncoded ones)."""
    lt = _Letters(source, metric, code.n)
    if code.bins.shape[0] != lt.N:
        raise SWError("code blocklength does not match the source alphabet")
    pe = kernels.sequence_error_probs(lt.logq, lt.W, code.n, code.bins, code.num_bins, TIE_TOL)
    return np.clip(pe, 0.0, 1.0)


def _as_index(x, x_size, n):
    if isinstance(x, (int, np.integer)):
        return int(x)
    digits = list(x)
    if len(digits) != n or any(not 0 <= d < x_size for d in digits):
        raise SWError(f"sequence {x!r} is not in the source alphabet")
    idx = 0
    for d in digits:
        idx = idx * x_size + int(d)
    return idx


def exact_error_probability(code: BinningCode, source: JointSource, metric: DecodingMetric, x) -> float:
    """Error probability of one sequence, by direct enumeration of y^n.

    ``x`` is a sequence index or a tuple of symbols.  Ties count as errors.
    """
    lt = _Letters(source, metric, code.n)
    i = _as_index(x, lt.X, code.n)
    b = code.bins[i]
    if b < 0:
        raise SWError(f"sequence {i} is not in the code")
    comp = np.flatnonzero(code.bins == b)
    comp = comp[comp != i]
    if comp.size == 0:
        return 0.0
    own = lt.scores([i])[0]
    others = lt.scores(comp)
    err = (others >= _tie_threshold(own)[None, :]).any(axis=0)
    return float(min(1.0, np.sum(lt.channel([i])[0] * err)))


# --------------------------------------------------------------------------
# ensemble averages

@dataclass(frozen=True)
class EnsembleAverage:
    mean: float
    stderr: float
    method: str
    trials: int
    seed: object = None

    def interval(self, z: float = 3.0):
        return (self.mean - z * self.stderr, self.mean + z * self.stderr)


def _groups(ens, x_size, n):
    if ens == "standard":
        N = x_size**n
        return [np.arange(N)]
    tindex, comps = type_classes(x_size, n)
    return [np.flatnonzero(tindex == t) for t in range(len(comps))]


def _bins_per_group(ens, M, ngroups):
    if ens == "standard":
        return [M]
    Mi = -(-M // ngroups)
    return [Mi] * ngroups


def ensemble_average_error(source, metric, n, M, ensemble="standard", trials=1000, seed=0,
                           exact: Optional[bool] = None) -> EnsembleAverage:
    """Average over the ensemble of ``sum_x P(x) p_e(x, C)``.

    The exact route uses independence of bin assignments: a sequence errs at
    ``y`` unless none of its ``N(x,y)`` beating-or-tying competitors shares its
    bin, which has probability ``(1 - 1/M)^N``.
    """
    if M < 1:
        raise SWError("M must be at least 1")
    lt = _Letters(source, metric, n)
    ens = _ensemble_name(ensemble)
    if exact is None:
        exact = lt.N <= EXACT_AVERAGE_LIMIT
    groups = _groups(ens, lt.X, n)
    sizes = _bins_per_group(ens, M, len(groups))
    if exact:
        total = 0.0
        for g, Mg in zip(groups, sizes):
            S = lt.scores(g)
            Pn = lt.channel(g) * lt.px_n[g][:, None]
            miss = 1.0 - 1.0 / Mg
            for j in range(lt.Ny):
                col = S[:, j]
                srt = np.sort(col)
                beat = col.shape[0] - np.searchsorted(srt, _tie_threshold(col), side="left") - 1
                total += float(np.sum(Pn[:, j] * (1.0 - miss ** beat)))
        return EnsembleAverage(total, 0.0, "exact", 0, seed)
    if trials < 1:
        raise SWError("trials must be at least 1")
    children = np.random.SeedSequence(seed).spawn(trials)
    vals = np.empty(trials)
    for t, child in enumerate(children):
        code = sample_code(n, M, ens, child, lt.X)
        pe = kernels.sequence_error_probs(lt.logq, lt.W, n, code.bins, code.num_bins, TIE_TOL)
        vals[t] = float(np.dot(lt.px_n, np.clip(pe, 0.0, 1.0)))
    stderr = float(vals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    return EnsembleAverage(float(vals.mean()), stderr, "monte-carlo", trials, seed)


def _mask_int(flags):
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def _mask_weight(mask, weights):
    nbytes = (weights.shape[0] + 7) // 8
    bits = np.unpackbits(np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8),
                         bitorder="little")[: weights.shape[0]]
    return float(np.dot(weights, bits))


def _expected_power_exact(own, others, w, Mr, inv_rho):
    """Exact E[p_e^{1/rho}] for one sequence; None if the state space is too big."""
    if others.shape[0] == 0:
        return 0.0
    beats = others >= _tie_threshold(own)[None, :]
    masks = Counter(_mask_int(row) for row in beats if row.any())
    miss = 1.0 - 1.0 / Mr
    states = {0: 1.0}
    work = 0
    for m, c in masks.items():
        pi = 1.0 - miss**c
        if pi == 0.0:
            continue
        nxt = {}
        for u, p in states.items():
            u2 = u | m
            if u2 == u:
                nxt[u] = nxt.get(u, 0.0) + p
                continue
            nxt[u] = nxt.get(u, 0.0) + p * (1.0 - pi)
            nxt[u2] = nxt.get(u2, 0.0) + p * pi
        states = nxt
        work += len(states)
        if len(states) > DP_STATE_LIMIT or work > DP_WORK_LIMIT:
            return None
    total = 0.0
    for u, p in states.items():
        if u:
            total += p * min(1.0, _mask_weight(u, w)) ** inv_rho
    return total


def expected_error_power(source, metric, n, group, Mr, rho, seed=0, exact: Optional[bool] = None):
    """``E[p_e(x)^{1/rho}]`` for every sequence of ``group`` when the group is
    binned uniformly into ``Mr`` bins.

    Returns ``(values, stderr, method, samples)``.
    """
    lt = _Letters(source, metric, n)
    group = np.asarray(group)
    inv_rho = 1.0 / rho
    if exact is None:
        exact = lt.N * lt.Ny <= EXACT_EXPECT_LIMIT
    if exact:
        S = lt.scores(group)
        Wg = lt.channel(group)
        vals = np.empty(group.shape[0])
        ok = True
        for j in range(group.shape[0]):
            others = np.delete(S, j, axis=0)
            v = _expected_power_exact(S[j], others, Wg[j], Mr, inv_rho)
            if v is None:
                ok = False
                break
            vals[j] = v
        if ok:
            return vals, np.zeros(group.shape[0]), "exact", 0
    rng = _rng(seed)
    samples = np.empty((MC_CODES, group.shape[0]))
    bins = np.full(lt.N, -1, dtype=np.int64)
    for t in range(MC_CODES):
        bins[group] = _draw_bins(rng, group.shape[0], Mr)
        pe = kernels.sequence_error_probs(lt.logq, lt.W, n, bins, Mr, TIE_TOL)
        samples[t] = np.clip(pe[group], 0.0, 1.0) ** inv_rho
    return samples.mean(axis=0), samples.std(axis=0, ddof=1) / math.sqrt(MC_CODES), "monte-carlo", MC_CODES


# --------------------------------------------------------------------------
# analytic n-letter bounds

def _bound_prefactor(x_size, n, M, ensemble):
    k = n * math.log2(x_size) if x_size > 1 else 1.0
    factor = k / M
    if _ensemble_name(ensemble) == "type-by-type":
        factor *= len(type_classes(x_size, n)[1])
    return factor


def _check_bound_args(source, metric, n, M, s):
    metric.check_compatible(source)
    if n < 1 or M < 1:
        raise SWError("n and M must be positive")
    if s < 0:
        raise SWError("s must be nonnegative")


def _direct_tables(source, metric, n, a):
    lt = _Letters(source, metric, n)
    if lt.N * lt.N * lt.Ny > 2**24:
        raise EnumerationTooLarge("direct n-letter sum is too large", n=n)
    Sq = score_matrix(lt.logq, n)
    with np.errstate(divide="ignore"):
        logP = np.log(source.pmf)
    SP = score_matrix(logP, n)
    an = np.zeros(lt.N) if a is None else np.asarray(a, dtype=float)[lt.xd].sum(axis=1)
    sup = np.isfinite(SP)
    base = np.where(sup, Sq, 0.0)
    with np.errstate(invalid="ignore"):
        delta = Sq[:, None, :] - base[None, :, :]          # [xb, x, y]
    return lt, SP, sup, an, delta


def _scaled_delta(delta, s):
    if s == 0:
        return np.zeros_like(delta)
    return s * delta


def nletter_rc_bound(source, metric, n, M, rho, s, ensemble="standard", a=None,
                     method="factorized") -> float:
    """Random-coding bound on the ensemble-average error at blocklength n.

    ``(k/M)^rho sum_{x,y} P(x,y) (sum_xb e^{a(xb)-a(x)} (q(xb,y)/q(x,y))^s)^rho``
    with ``k = n log2 |X|``, times ``|P_n(X)|^rho`` for type-by-type codes.
    """
    _check_bound_args(source, metric, n, M, s)
    if not 0 <= rho <= 1:
        raise SWError("random-coding bound needs 0 <= rho <= 1")
    pre = _bound_prefactor(source.x_size, n, M, ensemble) ** rho
    if method == "factorized":
        return float(pre * math.exp(n * _rc_log_objective(source, metric, rho, s, a)))
    if method != "direct":
        raise SWError(f"unknown method {method!r}")
    from ._numerics import logsumexp
    lt, SP, sup, an, delta = _direct_tables(source, metric, n, a)
    z = an[:, None, None] - an[None, :, None] + _scaled_delta(delta, s)
    inner = logsumexp(z, axis=0)
    terms = SP[sup] + rho * inner[sup]
    return float(pre * math.exp(logsumexp(terms)))


def nletter_ex_bound(source, metric, n, M, rho, s, ensemble="standard", a=None,
                     method="factorized") -> float:
    """Expurgated bound on the error of the expurgated code at blocklength n.

    ``(2k/M)^rho sum_x (sum_xb (sum_y P(x,y) e^{a(xb)-a(x)} (q/q)^s)^{1/rho})^rho``
    """
    _check_bound_args(source, metric, n, M, s)
    if rho < 1:
        raise SWError("expurgated bound needs rho >= 1")
    pre = (2.0 * _bound_prefactor(source.x_size, n, M, ensemble)) ** rho
    if method == "factorized":
        return float(pre * math.exp(n * _ex_log_objective(source, metric, rho, s, a)))
    if method != "direct":
        raise SWError(f"unknown method {method!r}")
    from ._numerics import logsumexp
    lt, SP, sup, an, delta = _direct_tables(source, metric, n, a)
    T = SP[None] + an[:, None, None] - an[None, :, None] + _scaled_delta(delta, s)
    T = np.where(sup[None], T, -np.inf)
    rows = sup.any(axis=1)
    g = logsumexp(T[:, rows, :], axis=2)
    h = rho * logsumexp(g / rho, axis=0)
    return float(pre * math.exp(logsumexp(h)))


# --------------------------------------------------------------------------
# expurgation

@dataclass(frozen=True)
class SequenceErrorReport:
    """Per-sequence outcome of an expurgated code construction.

    ``bound`` is ``(2 E[p_e^{1/rho}])^rho`` with the expectation over the
    ensemble of the sequence's group binned into ``M_round`` bins;
    ``ex_bound`` chains this with the union/Hoelder step (``rho >= 1`` only),
    using the ``1/M_round`` factor actually spent per round.  ``nominal_ex_bound``
    uses the nominal ``k/M`` factor instead; it is reported but not enforced,
    since ``M_round = floor(M/k)`` can be smaller than ``M/k``.
    """

    per_sequence: np.ndarray
    average: float
    bound: np.ndarray
    bound_satisfied: np.ndarray
    expectation: np.ndarray
    expectation_stderr: np.ndarray
    method: str
    samples: int
    rounds: int
    redraws: int
    bins_used: int
    round_bins: tuple
    ex_bound: Optional[np.ndarray] = None
    ex_bound_satisfied: Optional[np.ndarray] = None
    nominal_ex_bound: Optional[np.ndarray] = None
    params: dict = field(default_factory=dict)

    @property
    def all_satisfied(self) -> bool:
        ok = bool(np.all(self.bound_satisfied))
        if self.ex_bound_satisfied is not None:
            ok = ok and bool(np.all(self.ex_bound_satisfied))
        return ok

    def as_dict(self) -> dict:
        out = {
            "params": dict(self.params),
            "per_sequence": [float(v) for v in self.per_sequence],
            "averages": {"error": self.average},
            "bounds": {
                "sequence": [float(v) for v in self.bound],
                "expectation": [float(v) for v in self.expectation],
                "expectation_stderr": [float(v) for v in self.expectation_stderr],
                "method": self.method,
                "samples": self.samples,
            },
            "flags": {
                "sequence_bound_satisfied": [bool(v) for v in self.bound_satisfied],
                "all_satisfied": self.all_satisfied,
            },
            "construction": {
                "rounds": self.rounds,
                "redraws": self.redraws,
                "bins_used": self.bins_used,
                "round_bins": list(self.round_bins),
            },
        }
        if self.ex_bound is not None:
            out["bounds"]["expurgated"] = [float(v) for v in self.ex_bound]
            out["flags"]["expurgated_satisfied"] = [bool(v) for v in self.ex_bound_satisfied]
        if self.nominal_ex_bound is not None:
            out["bounds"]["expurgated_nominal"] = [float(v) for v in self.nominal_ex_bound]
            out["flags"]["expurgated_nominal_satisfied"] = [
                bool(v) for v in _within(self.per_sequence, self.nominal_ex_bound)]
        return out


def _within(value, bound):
    return value <= bound * (1.0 + BOUND_RTOL) + BOUND_ATOL


def _sequence_ex_sums(lt, group, rho, s):
    """``(sum_{xb in group} (sum_y P(y|x) (q(xb,y)/q(x,y))^s)^{1/rho})^rho`` per x."""
    S = lt.scores(group)
    Wg = lt.channel(group)
    out = np.empty(group.shape[0])
    for j in range(group.shape[0]):
        with np.errstate(invalid="ignore", over="ignore"):
            ratio = np.exp(s * (S - S[j][None, :])) if s > 0 else np.ones_like(S)
        ratio = np.where(Wg[j][None, :] > 0, ratio, 0.0)
        inner = ratio @ Wg[j]
        out[j] = np.sum(inner ** (1.0 / rho)) ** rho
    return out


def expurgate(source, metric, n, M, ensemble="standard", rho=1.0, seed=0, s=0.5,
              max_redraws=64, exact: Optional[bool] = None):
    """Build an expurgated code by repeated draw-and-keep rounds.

    Each round bins the not-yet-covered sequences of a group into ``M_round``
    fresh bins, keeps those with ``p_e^{1/rho} <= 2 E[p_e^{1/rho}]`` and
    redraws if fewer than half survive.  Returns ``(code, report)``.
    """
    if rho <= 0:
        raise SWError("rho must be positive")
    if M < 1:
        raise SWError("M must be at least 1")
    lt = _Letters(source, metric, n)
    ens = _ensemble_name(ensemble)
    groups = _groups(ens, lt.X, n)
    sizes = _bins_per_group(ens, M, len(groups))
    root = np.random.SeedSequence(seed)
    g_seeds = root.spawn(len(groups))

    expectation = np.zeros(lt.N)
    stderr = np.zeros(lt.N)
    ex_bound = np.zeros(lt.N) if rho >= 1 else None
    nominal_ex = np.zeros(lt.N) if rho >= 1 else None
    nominal = _bound_prefactor(lt.X, n, M, ens)
    final_bins = np.full(lt.N, -1, dtype=np.int64)
    offset = 0
    rounds_max, redraws, round_bins = 0, 0, []
    methods, samples = set(), 0
    inv_rho = 1.0 / rho

    for g, Mg, gseed in zip(groups, sizes, g_seeds):
        est_seed, draw_seed = gseed.spawn(2)
        k = iteration_count(lt.X, n) if ens == "standard" else max(1, math.ceil(math.log2(len(g)) - 1e-12))
        Mr = max(1, Mg // k)
        vals, errs, method, ns = expected_error_power(source, metric, n, g, Mr, rho, est_seed, exact)
        expectation[g], stderr[g] = vals, errs
        methods.add(method)
        samples = max(samples, ns)
        if ex_bound is not None:
            sums = _sequence_ex_sums(lt, g, rho, s)
            ex_bound[g] = (2.0 / Mr) ** rho * sums
            nominal_ex[g] = (2.0 * nominal) ** rho * sums
        threshold = (2.0 * vals) ** rho
        remaining = g.copy()
        rng = _rng(draw_seed)
        rounds = 0
        while remaining.size:
            rounds += 1
            if rounds > k + 1:
                raise IterationBudgetExceeded(f"more than {k + 1} rounds needed for a group of {len(g)}")
            need = -(-remaining.size // 2)
            for attempt in range(max_redraws + 1):
                bins = np.full(lt.N, -1, dtype=np.int64)
                bins[remaining] = _draw_bins(rng, remaining.size, Mr)
                pe = np.clip(kernels.sequence_error_probs(lt.logq, lt.W, n, bins, Mr, TIE_TOL), 0.0, 1.0)
                pos = np.searchsorted(g, remaining)
                keep = _within(pe[remaining], threshold[pos])
                if keep.sum() >= need:
                    break
                redraws += 1
            else:
                raise IterationBudgetExceeded(
                    f"no draw kept half of {remaining.size} sequences after {max_redraws} redraws")
            kept = remaining[keep]
            final_bins[kept] = offset + bins[kept]
            offset += Mr
            round_bins.append(Mr)
            remaining = remaining[~keep]
        rounds_max = max(rounds_max, rounds)

    code = BinningCode(n, lt.X, ens, final_bins, tuple(round_bins), int(offset), seed,
                       type_classes(lt.X, n)[0] if ens == "type-by-type" else None)
    pe = np.clip(kernels.sequence_error_probs(lt.logq, lt.W, n, final_bins, offset, TIE_TOL), 0.0, 1.0)
    bound = (2.0 * expectation) ** rho
    report = SequenceErrorReport(
        per_sequence=pe,
        average=float(np.dot(lt.px_n, pe)),
        bound=bound,
        bound_satisfied=_within(pe, bound),
        expectation=expectation,
        expectation_stderr=stderr,
        method="exact" if methods == {"exact"} else "monte-carlo",
        samples=samples,
        rounds=rounds_max,
        redraws=redraws,
        bins_used=int(offset),
        round_bins=tuple(round_bins),
        ex_bound=ex_bound,
        ex_bound_satisfied=None if ex_bound is None else _within(pe, ex_bound),
        nominal_ex_bound=nominal_ex,
        params={"n": n, "M": int(M), "ensemble": ens, "rho": float(rho), "s": float(s), "seed": seed},
    )
    return code, report


def empirical_exponent(source, metric, rate, ensemble="standard", n_list: Sequence[int] = (2, 4, 6),
                       seed=0, trials=1000):
    """``(n, -log p_e / n, p_e)`` for each blocklength with ``M = round(e^{nR})``.

    An exactly zero error probability is reported as an infinite exponent.
    """
    out = []
    for n in n_list:
        M = max(1, int(round(math.exp(n * rate))))
        avg = ensemble_average_error(source, metric, n, M, ensemble, trials, seed)
        pe = avg.mean
        val = math.inf if pe <= 0 else -math.log(pe) / n
        out.append((int(n), val, pe))
    return out
