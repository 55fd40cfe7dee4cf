"""Compiled kernels versus the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Prints the median wall time
per call for each kernel and backend, and the largest disagreement between
the two backends.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from swexp import _fallback
from swexp.model import hamming_metric, validate_source

try:
    from swexp import _kernels
except ImportError:  # extension not built
    _kernels = None


def _objective_case(size, seed):
    rng = np.random.default_rng(seed)
    pmf = rng.dirichlet(np.ones(size * size)).reshape(size, size)
    src = validate_source(pmf)
    logq = hamming_metric(size, 0.5 / size).log_q
    delta = np.ascontiguousarray(logq[:, None, :] - logq[None, :, :])
    a = rng.normal(size=size)
    return np.ascontiguousarray(src.log_pmf), delta, a, src


def _median_time(fn, repeat):
    times = timeit.repeat(fn, number=1, repeat=repeat)
    return float(np.median(times))


def run(repeat=7):
    rows = []
    for size in (3, 8, 16):
        logp, delta, a, _ = _objective_case(size, size)
        for name, args in (("rc_value_grad", (logp, delta, 0.6, 0.4, a)),
                           ("ex_value_grad", (logp, delta, 2.0, 0.7, a))):
            py = getattr(_fallback, name)
            t_py = _median_time(lambda: py(*args), repeat)
            row = [f"{name} |X|={size}", t_py]
            if _kernels is not None:
                cy = getattr(_kernels, name)
                t_cy = _median_time(lambda: cy(*args), repeat)
                diff = max(abs(py(*args)[0] - cy(*args)[0]),
                           float(np.max(np.abs(py(*args)[1] - cy(*args)[1]))))
                row += [t_cy, diff]
            rows.append(row)
    _, _, _, src = _objective_case(2, 0)
    logq = np.ascontiguousarray(hamming_metric(2, 0.2).log_q)
    W = np.ascontiguousarray(src.p_y_given_x)
    for n in (8, 10, 12):
        rng = np.random.default_rng(n)
        nbins = 2 ** (n // 2)
        bins = rng.integers(0, nbins, size=2**n)
        args = (logq, W, n, bins, nbins, 1e-10)
        t_py = _median_time(lambda: _fallback.sequence_error_probs(*args), max(3, repeat // 2))
        row = [f"sequence_error_probs n={n}", t_py]
        if _kernels is not None:
            t_cy = _median_time(lambda: _kernels.sequence_error_probs(*args), max(3, repeat // 2))
            diff = float(np.max(np.abs(_fallback.sequence_error_probs(*args)
                                       - _kernels.sequence_error_probs(*args))))
            row += [t_cy, diff]
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args()
    print(f"{'kernel':34s} {'numpy [s]':>11s} {'cython [s]':>11s} {'speedup':>8s} {'max diff':>10s}")
    for row in run(args.repeat):
        if len(row) == 2:
            print(f"{row[0]:34s} {row[1]:11.3e} {'n/a':>11s}")
        else:
            name, t_py, t_cy, diff = row
            print(f"{name:34s} {t_py:11.3e} {t_cy:11.3e} {t_py / t_cy:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
