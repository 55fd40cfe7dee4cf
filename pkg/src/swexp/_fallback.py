"""Pure numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` exactly and are selected automatically when the
compiled extension is unavailable.  Array conventions:

``logp``   (X, Y) log P_XY, ``-inf`` off the support.
``delta``  (X, X, Y) with ``delta[xb, x, y] = log q(xb, y) - log q(x, y)``;
           must be finite everywhere (callers clip ``-inf`` entries).
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def _softmax_stats(z, axis):
    """Log-sum-exp along ``axis`` and the matching softmax weights."""
    m = np.max(z, axis=axis, keepdims=True)
    e = np.exp(z - m)
    tot = e.sum(axis=axis, keepdims=True)
    w = e / tot
    lse = np.squeeze(m + np.log(tot), axis=axis)
    return lse, w


def rc_value_grad(logp, delta, rho, t, b):
    """Random-coding log-objective in perspective coordinates.

    ``f = log sum_{x,y} P(x,y) exp(rho * LSE_xb((b[xb]-b[x] + t*delta)/rho))``;
    the gradient is with respect to ``(rho, t, b)``.
    """
    logp = np.asarray(logp)
    b = np.asarray(b, dtype=float)
    X = logp.shape[0]
    sup = np.isfinite(logp)
    z = (b[:, None, None] - b[None, :, None] + t * delta) / rho
    lse, w = _softmax_stats(z, axis=0)
    hw = lse - (w * z).sum(axis=0)
    arg = np.where(sup, logp + rho * lse, -np.inf)
    m = arg.max()
    ex = np.where(sup, np.exp(arg - m), 0.0)
    tot = ex.sum()
    f = m + np.log(tot)
    u = ex / tot
    grad = np.empty(2 + X)
    grad[0] = (u * hw).sum()
    grad[1] = (u[None] * w * delta).sum()
    uw = u[None] * w
    grad[2:] = uw.sum(axis=(1, 2)) - u.sum(axis=1)
    return float(f), grad


def ex_value_grad(logp, delta, rho, s, a):
    """Expurgated log-objective and its gradient in ``(rho, s, a)``.

    ``f = log sum_x (sum_xb (sum_y P(x,y) e^{a[xb]-a[x]} e^{s*delta})^{1/rho})^rho``
    """
    logp = np.asarray(logp)
    a = np.asarray(a, dtype=float)
    X = logp.shape[0]
    sup = np.isfinite(logp)
    rows = sup.any(axis=1)
    T = logp[None, :, :] + a[:, None, None] - a[None, :, None] + s * delta
    T = np.where(sup[None], T, -np.inf)
    sub = T[:, rows, :]
    g, v = _softmax_stats(sub, axis=2)
    v = np.nan_to_num(v)
    gs = (v * delta[:, rows, :]).sum(axis=2)
    gr = g / rho
    lse, w = _softmax_stats(gr, axis=0)
    hw = lse - (w * gr).sum(axis=0)
    h = rho * lse
    m = h.max()
    ex = np.exp(h - m)
    tot = ex.sum()
    f = m + np.log(tot)
    u = ex / tot
    grad = np.zeros(2 + X)
    grad[0] = (u * hw).sum()
    grad[1] = (u[None] * w * gs).sum()
    uw = u[None] * w
    da = np.zeros(X)
    da += uw.sum(axis=1)
    da[rows] -= u
    grad[2:] = da
    return float(f), grad


def sequence_digits(alphabet, n):
    """Digits of every index in ``range(alphabet**n)``, most significant first."""
    idx = np.arange(alphabet**n)
    powers = alphabet ** np.arange(n - 1, -1, -1)
    return (idx[:, None] // powers[None, :]) % alphabet


def score_matrix(table, n):
    """``out[i, j] = sum_k table[x_k(i), y_k(j)]`` over all length-n sequences."""
    X, Y = table.shape
    xd = sequence_digits(X, n)
    yd = sequence_digits(Y, n)
    out = np.zeros((X**n, Y**n))
    for k in range(n):
        out += table[xd[:, k]][:, yd[:, k]]
    return out


def sequence_error_probs(logq, W, n, bins, nbins, tol):
    """Exact per-sequence error probability of a binning code.

    ``bins[i] < 0`` marks a sequence outside the code: it is neither decoded
    nor a competitor.  Ties (within ``tol`` relative) count as errors.
    """
    bins = np.asarray(bins, dtype=np.int64)
    N = bins.shape[0]
    with np.errstate(divide="ignore"):
        logW = np.log(W)
    S = score_matrix(np.asarray(logq), n)
    Pn = np.exp(score_matrix(logW, n))
    pe = np.zeros(N)
    active = np.flatnonzero(bins >= 0)
    if active.size == 0:
        return pe
    order = active[np.argsort(bins[active], kind="stable")]
    bsorted = bins[order]
    cuts = np.flatnonzero(np.diff(bsorted)) + 1
    for members in np.split(order, cuts):
        k = members.shape[0]
        if k < 2:
            continue
        sub = S[members]
        top = np.argmax(sub, axis=0)
        best1 = sub[top, np.arange(sub.shape[1])]
        masked = sub.copy()
        masked[top, np.arange(sub.shape[1])] = -np.inf
        best2 = masked.max(axis=0)
        others = np.where(np.arange(k)[:, None] == top[None, :], best2[None, :], best1[None, :])
        err = others >= sub - tol * (1.0 + np.abs(sub))
        pe[members] = (Pn[members] * err).sum(axis=1)
    return pe
