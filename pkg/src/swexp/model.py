"""Problem-instance types and elementary information measures.

All quantities are in nats.  Probabilities are stored in the linear domain;
every log-domain sum skips zero-probability cells so that ``0 log 0 = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DeltaOutOfRange,
    DimensionMismatch,
    IncompatibleMetric,
    NegativeProbability,
    NonFinite,
    ZeroMass,
)

__all__ = [
    "JointSource",
    "DecodingMetric",
    "CostFunction",
    "DualParams",
    "validate_source",
    "source_from_channel",
    "entropy",
    "conditional_entropy",
    "matched_metric",
    "hamming_metric",
    "kl_divergence",
]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _safe_log(arr: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(arr)


@dataclass(frozen=True, eq=False)
class JointSource:
    """Finite joint pmf ``P_XY`` with rows indexed by x and columns by y.

    Build instances through :func:`validate_source`, which normalizes and
    checks the matrix.
    """

    pmf: np.ndarray
    labels_x: tuple = ()
    labels_y: tuple = ()

    @property
    def x_size(self) -> int:
        return self.pmf.shape[0]

    @property
    def y_size(self) -> int:
        return self.pmf.shape[1]

    @property
    def px(self) -> np.ndarray:
        return self.pmf.sum(axis=1)

    @property
    def py(self) -> np.ndarray:
        return self.pmf.sum(axis=0)

    @property
    def support_x(self) -> np.ndarray:
        """Boolean mask of S(X) = {x : P_X(x) > 0}."""
        return self.px > 0

    @property
    def log_pmf(self) -> np.ndarray:
        return _safe_log(self.pmf)

    @property
    def p_x_given_y(self) -> np.ndarray:
        """Columns normalized by P_Y; columns with P_Y(y) = 0 are left at zero."""
        py = self.py
        out = np.zeros_like(self.pmf)
        cols = py > 0
        out[:, cols] = self.pmf[:, cols] / py[cols]
        return out

    @property
    def p_y_given_x(self) -> np.ndarray:
        """Rows normalized by P_X; rows outside S(X) are left at zero."""
        px = self.px
        out = np.zeros_like(self.pmf)
        rows = px > 0
        out[rows] = self.pmf[rows] / px[rows, None]
        return out

    def __repr__(self) -> str:
        return f"JointSource({self.x_size}x{self.y_size})"


def validate_source(pmf_matrix, labels_x: Sequence = (), labels_y: Sequence = ()) -> JointSource:
    """Check and normalize a joint pmf matrix.

    Raises
    ------
    NonFinite
        If any entry is NaN or infinite, or the matrix is empty.
    NegativeProbability
        If any entry is negative.
    ZeroMass
        If the entries sum to zero.
    """
    arr = np.asarray(pmf_matrix, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.size == 0:
        raise NonFinite("pmf must be a nonempty 2-D matrix")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("pmf contains non-finite entries")
    if np.any(arr < 0):
        raise NegativeProbability("pmf contains negative entries")
    total = math.fsum(arr.ravel())
    if total <= 0:
        raise ZeroMass("pmf has zero total mass")
    arr = arr / total
    if labels_x and len(labels_x) != arr.shape[0]:
        raise DimensionMismatch("labels_x length does not match the number of rows")
    if labels_y and len(labels_y) != arr.shape[1]:
        raise DimensionMismatch("labels_y length does not match the number of columns")
    return JointSource(_frozen(arr), tuple(labels_x), tuple(labels_y))


def source_from_channel(px, channel) -> JointSource:
    """Joint source ``P_X(x) W(y|x)`` from an input pmf and channel rows."""
    px = np.asarray(px, dtype=float)
    channel = np.atleast_2d(np.asarray(channel, dtype=float))
    if channel.shape[0] != px.shape[0]:
        raise DimensionMismatch("channel rows must match the input alphabet")
    return validate_source(px[:, None] * channel)


def entropy(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    nz = p[p > 0]
    return float(-math.fsum(nz * np.log(nz)))


def conditional_entropy(source: JointSource) -> float:
    """H(X|Y) in nats, summing over the support only."""
    pxy = source.pmf
    cond = source.p_x_given_y
    nz = pxy > 0
    return float(-math.fsum(pxy[nz] * np.log(cond[nz])))


def kl_divergence(p, q) -> float:
    """D(p||q) in nats; ``inf`` when p charges a cell where q is zero."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    p = p.ravel()
    q = q.ravel()
    nz = p > 0
    if np.any(q[nz] <= 0):
        return math.inf
    return float(math.fsum(p[nz] * (np.log(p[nz]) - np.log(q[nz]))))


@dataclass(frozen=True, eq=False)
class DecodingMetric:
    """Nonnegative decoding metric q(x, y); need not be normalized."""

    q: np.ndarray

    def __post_init__(self):
        q = np.atleast_2d(np.asarray(self.q, dtype=float))
        if not np.all(np.isfinite(q)):
            raise NonFinite("metric contains non-finite entries")
        if np.any(q < 0):
            raise NegativeProbability("metric entries must be nonnegative")
        object.__setattr__(self, "q", _frozen(q))

    @property
    def shape(self):
        return self.q.shape

    @property
    def log_q(self) -> np.ndarray:
        return _safe_log(self.q)

    def check_compatible(self, source: JointSource) -> None:
        """Raise unless q > 0 wherever P_XY > 0 and the shapes agree."""
        if self.q.shape != source.pmf.shape:
            raise DimensionMismatch(
                f"metric shape {self.q.shape} does not match source {source.pmf.shape}"
            )
        bad = (source.pmf > 0) & (self.q <= 0)
        if np.any(bad):
            x, y = np.argwhere(bad)[0]
            raise IncompatibleMetric(f"q({x},{y}) = 0 but P_XY({x},{y}) > 0")

    def power(self, lam: float, tau: float) -> "DecodingMetric":
        """The equivalent metric ``lam * q**tau``."""
        with np.errstate(divide="ignore"):
            return DecodingMetric(lam * np.where(self.q > 0, self.q**tau, 0.0))


@dataclass(frozen=True, eq=False)
class CostFunction:
    """Log-domain weights a(x), stored with entries summing to zero."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).ravel()
        if not np.all(np.isfinite(a)):
            raise NonFinite("cost function must be finite")
        object.__setattr__(self, "a", _frozen(a - a.mean()))

    @classmethod
    def zeros(cls, size: int) -> "CostFunction":
        return cls(np.zeros(size))

    def __len__(self):
        return self.a.shape[0]


@dataclass(frozen=True)
class DualParams:
    rho: float
    s: float
    a: Optional[CostFunction] = field(default=None, compare=False)

    def cost_vector(self, size: int) -> np.ndarray:
        return np.zeros(size) if self.a is None else np.asarray(self.a.a)


def matched_metric(source: JointSource) -> DecodingMetric:
    """The MAP metric q(x,y) = P_{X|Y}(x|y); unused columns are uniform."""
    q = source.p_x_given_y.copy()
    empty = source.py <= 0
    q[:, empty] = 1.0 / source.x_size
    return DecodingMetric(q)


def hamming_metric(size: int, delta: float) -> DecodingMetric:
    """Minimum-Hamming-distance metric: 1-(size-1)*delta on the diagonal, delta off it."""
    if size < 1:
        raise DeltaOutOfRange("alphabet size must be positive")
    if not (0.0 < delta < 1.0 / size):
        raise DeltaOutOfRange(f"delta must lie in (0, 1/{size}), got {delta}")
    q = np.full((size, size), float(delta))
    np.fill_diagonal(q, 1.0 - (size - 1) * delta)
    return DecodingMetric(q)
