"""Scalar search and log-domain helpers."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp as _scipy_lse

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def logsumexp(arr, axis=None):
    """log(sum(exp(arr))) that tolerates all ``-inf`` slices."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return _scipy_lse(arr, axis=axis)


def golden_max(f, lo, hi, tol=1e-12, max_iter=200):
    """Maximize a unimodal ``f`` on [lo, hi]; returns (x, f(x))."""
    a, b = float(lo), float(hi)
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * (1.0 + abs(a) + abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    best = max(((c, fc), (d, fd)), key=lambda t: t[1])
    for edge in (lo, hi):
        fe = f(edge)
        if fe > best[1]:
            best = (float(edge), fe)
    return best


def seeded_golden_max(f, grid, tol=1e-12):
    """Grid scan, then golden refinement between the best point's neighbours.

    Valid for unimodal ``f``; ``grid`` must be sorted increasingly.
    """
    grid = np.asarray(grid, dtype=float)
    vals = np.array([f(g) for g in grid])
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    x, fx = golden_max(f, lo, hi, tol=tol)
    if vals[i] > fx:
        return float(grid[i]), float(vals[i])
    return x, fx


def entropy_of_weights(w):
    w = np.asarray(w)
    nz = w[w > 0]
    return float(-(nz * np.log(nz)).sum())
