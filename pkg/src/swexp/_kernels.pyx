# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_fallback.py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, fabs, INFINITY, isfinite

cnp.import_array()

BACKEND = "cython"


cdef inline void _neumaier_add(double* total, double* comp, double v) noexcept nogil:
    cdef double t = total[0] + v
    if fabs(total[0]) >= fabs(v):
        comp[0] += (total[0] - t) + v
    else:
        comp[0] += (v - t) + total[0]
    total[0] = t


def rc_value_grad(double[:, ::1] logp, double[:, :, ::1] delta, double rho, double t, b_in):
    cdef double[::1] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef Py_ssize_t X = logp.shape[0], Y = logp.shape[1]
    cdef Py_ssize_t x, y, xb
    cdef double[:, :, ::1] w = np.zeros((X, X, Y))
    cdef double[:, ::1] arg = np.full((X, Y), -INFINITY)
    cdef double[:, ::1] hw = np.zeros((X, Y))
    cdef double[::1] grad_b = np.zeros(X)
    cdef double m, z, tot, comp, lse, acc, fmax, f, u, dr, dt, drc, dtc
    with nogil:
        fmax = -INFINITY
        for x in range(X):
            for y in range(Y):
                if not isfinite(logp[x, y]):
                    continue
                m = -INFINITY
                for xb in range(X):
                    z = (b[xb] - b[x] + t * delta[xb, x, y]) / rho
                    w[xb, x, y] = z
                    if z > m:
                        m = z
                tot = 0.0
                comp = 0.0
                for xb in range(X):
                    _neumaier_add(&tot, &comp, exp(w[xb, x, y] - m))
                tot += comp
                lse = m + log(tot)
                acc = 0.0
                for xb in range(X):
                    z = w[xb, x, y]
                    w[xb, x, y] = exp(z - m) / tot
                    acc += w[xb, x, y] * z
                hw[x, y] = lse - acc
                arg[x, y] = logp[x, y] + rho * lse
                if arg[x, y] > fmax:
                    fmax = arg[x, y]
        tot = 0.0
        comp = 0.0
        for x in range(X):
            for y in range(Y):
                if isfinite(logp[x, y]):
                    _neumaier_add(&tot, &comp, exp(arg[x, y] - fmax))
        tot += comp
        f = fmax + log(tot)
        dr = 0.0
        drc = 0.0
        dt = 0.0
        dtc = 0.0
        for x in range(X):
            for y in range(Y):
                if not isfinite(logp[x, y]):
                    continue
                u = exp(arg[x, y] - fmax) / tot
                _neumaier_add(&dr, &drc, u * hw[x, y])
                acc = 0.0
                for xb in range(X):
                    acc += w[xb, x, y] * delta[xb, x, y]
                    grad_b[xb] += u * w[xb, x, y]
                _neumaier_add(&dt, &dtc, u * acc)
                grad_b[x] -= u
    grad = np.empty(2 + X)
    grad[0] = dr + drc
    grad[1] = dt + dtc
    grad[2:] = np.asarray(grad_b)
    return float(f), grad


def ex_value_grad(double[:, ::1] logp, double[:, :, ::1] delta, double rho, double s, a_in):
    cdef double[::1] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef Py_ssize_t X = logp.shape[0], Y = logp.shape[1]
    cdef Py_ssize_t x, y, xb
    cdef double[:, ::1] g = np.zeros((X, X))
    cdef double[:, ::1] gs = np.zeros((X, X))
    cdef double[::1] h = np.full(X, -INFINITY)
    cdef double[::1] hw = np.zeros(X)
    cdef double[::1] tmp = np.zeros(Y)
    cdef double[::1] grad_a = np.zeros(X)
    cdef double m, z, tot, comp, lse, acc, fmax, f, u, dr, ds, drc, dsc, wv
    cdef bint any_sup
    with nogil:
        fmax = -INFINITY
        for x in range(X):
            any_sup = False
            for y in range(Y):
                if isfinite(logp[x, y]):
                    any_sup = True
            if not any_sup:
                continue
            # inner log-sum over y for every competitor xb
            for xb in range(X):
                m = -INFINITY
                for y in range(Y):
                    if isfinite(logp[x, y]):
                        z = logp[x, y] + a[xb] - a[x] + s * delta[xb, x, y]
                        tmp[y] = z
                        if z > m:
                            m = z
                tot = 0.0
                comp = 0.0
                acc = 0.0
                for y in range(Y):
                    if isfinite(logp[x, y]):
                        wv = exp(tmp[y] - m)
                        _neumaier_add(&tot, &comp, wv)
                        acc += wv * delta[xb, x, y]
                tot += comp
                g[xb, x] = (m + log(tot)) / rho
                gs[xb, x] = acc / tot
            m = -INFINITY
            for xb in range(X):
                if g[xb, x] > m:
                    m = g[xb, x]
            tot = 0.0
            comp = 0.0
            for xb in range(X):
                _neumaier_add(&tot, &comp, exp(g[xb, x] - m))
            tot += comp
            lse = m + log(tot)
            acc = 0.0
            for xb in range(X):
                z = g[xb, x]
                g[xb, x] = exp(z - m) / tot
                acc += g[xb, x] * z
            hw[x] = lse - acc
            h[x] = rho * lse
            if h[x] > fmax:
                fmax = h[x]
        tot = 0.0
        comp = 0.0
        for x in range(X):
            if isfinite(h[x]):
                _neumaier_add(&tot, &comp, exp(h[x] - fmax))
        tot += comp
        f = fmax + log(tot)
        dr = 0.0
        drc = 0.0
        ds = 0.0
        dsc = 0.0
        for x in range(X):
            if not isfinite(h[x]):
                continue
            u = exp(h[x] - fmax) / tot
            _neumaier_add(&dr, &drc, u * hw[x])
            acc = 0.0
            for xb in range(X):
                acc += g[xb, x] * gs[xb, x]
                grad_a[xb] += u * g[xb, x]
            _neumaier_add(&ds, &dsc, u * acc)
            grad_a[x] -= u
    grad = np.empty(2 + X)
    grad[0] = dr + drc
    grad[1] = ds + dsc
    grad[2:] = np.asarray(grad_a)
    return float(f), grad


def sequence_error_probs(logq_in, W_in, int n, bins_in, long long nbins, double tol):
    cdef double[:, ::1] logq = np.ascontiguousarray(logq_in, dtype=np.float64)
    cdef double[:, ::1] W = np.ascontiguousarray(W_in, dtype=np.float64)
    cdef long long[::1] bins = np.ascontiguousarray(bins_in, dtype=np.int64)
    cdef Py_ssize_t X = logq.shape[0], Y = logq.shape[1]
    cdef Py_ssize_t N = bins.shape[0]
    cdef Py_ssize_t Ny = Y ** n
    cdef Py_ssize_t xi, yi, k, rem, bb
    cdef int[:, ::1] xd = np.zeros((N, n), dtype=np.intc)
    cdef int[:, ::1] yd = np.zeros((Ny, n), dtype=np.intc)
    cdef double[::1] score = np.zeros(N)
    cdef double[::1] best1 = np.full(max(nbins, 1), -INFINITY)
    cdef double[::1] best2 = np.full(max(nbins, 1), -INFINITY)
    cdef long long[::1] arg1 = np.full(max(nbins, 1), -1, dtype=np.int64)
    cdef long long[::1] cnt = np.zeros(max(nbins, 1), dtype=np.int64)
    pe_arr = np.zeros(N)
    cdef double[::1] pe = pe_arr
    cdef double sc, other, p
    with nogil:
        for xi in range(N):
            rem = xi
            for k in range(n - 1, -1, -1):
                xd[xi, k] = rem % X
                rem = rem // X
        for yi in range(Ny):
            rem = yi
            for k in range(n - 1, -1, -1):
                yd[yi, k] = rem % Y
                rem = rem // Y
        for yi in range(Ny):
            for xi in range(N):
                bb = bins[xi]
                if bb >= 0:
                    best1[bb] = -INFINITY
                    best2[bb] = -INFINITY
                    arg1[bb] = -1
                    cnt[bb] = 0
            for xi in range(N):
                bb = bins[xi]
                if bb < 0:
                    continue
                sc = 0.0
                for k in range(n):
                    sc = sc + logq[xd[xi, k], yd[yi, k]]
                score[xi] = sc
                cnt[bb] += 1
                if arg1[bb] < 0 or sc > best1[bb]:
                    best2[bb] = best1[bb]
                    best1[bb] = sc
                    arg1[bb] = xi
                elif sc > best2[bb]:
                    best2[bb] = sc
            for xi in range(N):
                bb = bins[xi]
                if bb < 0 or cnt[bb] < 2:
                    continue
                sc = score[xi]
                if arg1[bb] == xi:
                    other = best2[bb]
                else:
                    other = best1[bb]
                if other >= sc - tol * (1.0 + fabs(sc)):
                    p = 1.0
                    for k in range(n):
                        p = p * W[xd[xi, k], yd[yi, k]]
                    pe[xi] += p
    return pe_arr
