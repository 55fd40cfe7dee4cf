"""Command-line interface.

Subcommands ``exponents``, ``rates``, ``verify-duality`` and ``simulate``.
Exit codes: 0 ok, 1 input error, 2 verification failure.

Exponent CSV columns, in order::

    rate, E_std_rc, E_std_ex, E_std, E_tt_rc, E_tt_ex, E_tt, E_r_gallager, E_sp,
    rho_std_rc, s_std_rc, rho_std_ex, s_std_ex, rho_std, s_std,
    rho_tt_rc, s_tt_rc, rho_tt_ex, s_tt_ex, rho_tt, s_tt, rho_r_gallager, rho_sp

Floats carry 12 significant digits.  ``--bits`` rescales rates and exponents
for display only.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import dual, rates as rates_mod, sim
from .errors import EnumerationTooLarge, SWError
from .serialize import format_float, resolve_metric, resolve_source

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2

CURVE_FAMILIES = ("std_rc", "std_ex", "std", "tt_rc", "tt_ex", "tt", "r_gallager", "sp")
_NO_S = ("r_gallager", "sp")
CSV_COLUMNS = (
    ["rate"] + [f"E_{f}" for f in CURVE_FAMILIES]
    + [c for f in CURVE_FAMILIES for c in ((f"rho_{f}",) if f in _NO_S else (f"rho_{f}", f"s_{f}"))]
)
RC_GRID_RHO = (0.0, 0.25, 0.5, 0.75, 1.0)
RC_GRID_S = (0.0, 0.5, 1.0, 1.5, 2.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rate_grid(text: str):
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError as exc:
        raise SWError(f"--rates expects MIN:MAX:COUNT, got {text!r}") from exc
    if count < 2 or not hi > lo or lo < 0 or not math.isfinite(hi):
        raise SWError("rate grid needs 0 <= MIN < MAX and COUNT >= 2")
    return [float(r) for r in np.linspace(lo, hi, count)]


def _clean(obj):
    """Round floats to 12 significant digits; spell infinities as strings."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return format_float(v)
        return float(format_float(v))
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(args):
    source = resolve_source(args.source)
    metric = resolve_metric(args.metric, source)
    metric.check_compatible(source)
    return source, metric


# --------------------------------------------------------------------------
# commands

def _combine(rc, ex, family):
    win, branch = (rc, "rc") if rc.value >= ex.value else (ex, "ex")
    return dual._retag(win, family, branch)


def exponent_table(source, metric, grid, rho_cap):
    """One dict per rate with every curve family's value and argmax."""
    curves = {f: dual.exponent_curve(source, metric, grid, f, rho_cap).points
              for f in ("std_rc", "std_ex", "tt_rc", "tt_ex", "r_gallager", "sp")}
    curves["std"] = [_combine(a, b, "std") for a, b in zip(curves["std_rc"], curves["std_ex"])]
    curves["tt"] = [_combine(a, b, "tt") for a, b in zip(curves["tt_rc"], curves["tt_ex"])]
    rows = []
    for i, r in enumerate(grid):
        row = {"rate": r}
        for f in CURVE_FAMILIES:
            p = curves[f][i]
            row[f"E_{f}"] = p.value
            row[f"rho_{f}"] = p.argmax.rho if p.argmax is not None else math.nan
            if f not in _NO_S:
                row[f"s_{f}"] = p.argmax.s if p.argmax is not None else math.nan
        rows.append(row)
    return rows


def cmd_exponents(args) -> int:
    source, metric = _load(args)
    grid = _rate_grid(args.rates)
    rows = exponent_table(source, metric, grid, args.rho_cap)
    scale = 1.0 / math.log(2) if args.bits else 1.0
    for row in rows:
        for k in row:
            if k == "rate" or k.startswith("E_"):
                row[k] *= scale
    if args.format == "json":
        _emit(_dump_json({"units": "bits" if args.bits else "nats", "columns": CSV_COLUMNS, "rows": rows}),
              args.out)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([format_float(row[c]) for c in CSV_COLUMNS])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_rates(args) -> int:
    source, metric = _load(args)
    rep = rates_mod.rate_report(source, metric)
    doc = rep.as_dict()
    scale = 1.0 / math.log(2) if args.bits else 1.0
    for k in ("h_xy", "h_q_std", "h_q_tt", "gmi_crosscheck", "lm_crosscheck", "gmi_sup_crosscheck"):
        doc[k] *= scale
    doc["units"] = "bits" if args.bits else "nats"
    if args.format == "json":
        _emit(_dump_json(doc), args.out)
        return EXIT_OK
    unit = doc["units"]
    rows = [
        ("H(X|Y)", doc["h_xy"], None),
        ("H_q (standard)", doc["h_q_std"], rep.s_star),
        ("H_q (type-by-type)", doc["h_q_tt"], rep.s_star_tt),
        ("H(X) - GMI at s*", doc["gmi_crosscheck"], None),
        ("H(X) - sup GMI", doc["gmi_sup_crosscheck"], None),
        ("H(X) - LM rate", doc["lm_crosscheck"], None),
    ]
    lines = []
    for label, value, s_star in rows:
        line = f"{label:20s}{format_float(value):>16s} {unit}"
        if s_star is not None:
            line += f"  s* = {format_float(s_star)}"
        lines.append(line)
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        Path(args.out).write_text(_dump_json(doc))
    return EXIT_OK


def cmd_verify_duality(args) -> int:
    from . import primal  # cvxpy is slow to import; only this command needs it

    if not args.tol > 0:
        raise SWError(f"--tol must be positive, got {args.tol}")
    source, metric = _load(args)
    grid = _rate_grid(args.rates)
    rep = primal.verify_duality(source, metric, grid, tolerance=args.tol, rho_cap=args.rho_cap)
    _emit(_dump_json(rep.as_dict()), args.out)
    status = "passed" if rep.passed else "FAILED"
    print(f"duality {status}: max gap {format_float(rep.max_gap)} (tolerance {format_float(rep.tolerance)})",
          file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def simulation_report(source, metric, n, M, ensemble, rho, s, seed, trials):
    """Sample a code, compute exact errors, check the bounds and expurgate."""
    ens = dual._ensemble_name(ensemble)
    code = sim.sample_code(n, M, ens, seed, source.x_size)
    pe = sim.sequence_error_probabilities(code, source, metric)
    lt_px = np.exp(sim._Letters(source, metric, n).log_px_n)
    avg = sim.ensemble_average_error(source, metric, n, M, ens, trials, seed)
    grid = []
    for r in RC_GRID_RHO:
        for sv in RC_GRID_S:
            b = sim.nletter_rc_bound(source, metric, n, M, r, sv, ens)
            grid.append({"rho": r, "s": sv, "value": b, "satisfied": bool(avg.mean <= b * (1 + 1e-12))})
    ex_code, rep = sim.expurgate(source, metric, n, M, ens, rho, seed, s)
    rd = rep.as_dict()
    digits = sim.sequence_digits(source.x_size, n)
    per_seq = []
    for i in range(code.bins.shape[0]):
        entry = {
            "index": i,
            "sequence": [int(d) for d in digits[i]],
            "bin": int(code.bins[i]),
            "error": float(pe[i]),
            "expurgated_bin": int(ex_code.bins[i]),
            "expurgated_error": float(rep.per_sequence[i]),
            "sequence_bound": float(rep.bound[i]),
        }
        if rep.ex_bound is not None:
            entry["expurgated_bound"] = float(rep.ex_bound[i])
        per_seq.append(entry)
    flags = {
        "rc_bound_satisfied": all(g["satisfied"] for g in grid),
        "sequence_bound_satisfied": bool(np.all(rep.bound_satisfied)),
        "expurgated_bound_satisfied": None if rep.ex_bound_satisfied is None
        else bool(np.all(rep.ex_bound_satisfied)),
        "nominal_expurgated_bound_satisfied": rd["flags"].get("expurgated_nominal_satisfied") and
        all(rd["flags"]["expurgated_nominal_satisfied"]),
        "covers_all_sequences": bool(np.all(ex_code.bins >= 0)),
    }
    flags["all_satisfied"] = bool(flags["rc_bound_satisfied"] and rep.all_satisfied and flags["covers_all_sequences"])
    return {
        "params": {"n": n, "M": M, "M_actual": code.M, "ensemble": ens, "rho": rho, "s": s, "trials": trials},
        "seed": seed,
        "per_sequence": per_seq,
        "averages": {
            "sampled_code": float(np.dot(lt_px, pe)),
            "ensemble": {"mean": avg.mean, "stderr": avg.stderr, "method": avg.method, "trials": avg.trials},
            "expurgated_code": rep.average,
        },
        "bounds": {
            "random_coding_grid": grid,
            "expectation": rd["bounds"]["expectation"],
            "expectation_stderr": rd["bounds"]["expectation_stderr"],
            "expectation_method": rep.method,
            "expectation_samples": rep.samples,
            "construction": rd["construction"],
        },
        "flags": flags,
    }


def cmd_simulate(args) -> int:
    source, metric = _load(args)
    report = simulation_report(source, metric, args.n, args.M, args.ensemble, args.rho, args.s,
                               args.seed, args.trials)
    report["params"]["source"] = args.source
    report["params"]["metric"] = args.metric
    _emit(_dump_json(report), args.out)
    f = report["flags"]
    print(f"random-coding bound {'ok' if f['rc_bound_satisfied'] else 'VIOLATED'}; "
          f"expurgation bound {'ok' if f['sequence_bound_satisfied'] else 'VIOLATED'}; "
          f"rounds {report['bounds']['construction']['rounds']}", file=sys.stderr)
    return EXIT_OK if f["all_satisfied"] else EXIT_VERIFY


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="swexp", description="Error exponents for source coding with side information.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, grid=True):
        sp.add_argument("--source", default="example", help="source JSON path, or 'example'")
        sp.add_argument("--metric", default="matched", help="matched | hamming:DELTA | metric JSON path")
        if grid:
            sp.add_argument("--rates", default="0.4:1.05:40", help="MIN:MAX:COUNT in nats")
        sp.add_argument("--ensemble", default="tt", choices=("standard", "std", "tt", "type-by-type"))
        sp.add_argument("--rho-cap", type=float, default=dual.DEFAULT_RHO_CAP)
        sp.add_argument("--tol", type=float, default=5e-3)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", default="csv", choices=("csv", "json"))
        sp.add_argument("--bits", action="store_true", help="display rates and exponents in bits")

    common(sub.add_parser("exponents", help="exponent curves on a rate grid"))
    common(sub.add_parser("rates", help="rate thresholds and cross-checks"), grid=False)
    common(sub.add_parser("verify-duality", help="compare primal and dual exponents"))
    sim_p = sub.add_parser("simulate", help="exact small-blocklength simulation")
    common(sim_p, grid=False)
    sim_p.add_argument("--n", type=int, default=4)
    sim_p.add_argument("--M", type=int, default=8)
    sim_p.add_argument("--rho", type=float, default=1.0)
    sim_p.add_argument("--s", type=float, default=0.5)
    sim_p.add_argument("--trials", type=int, default=1000)
    return p


_COMMANDS = {
    "exponents": cmd_exponents,
    "rates": cmd_rates,
    "verify-duality": cmd_verify_duality,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except EnumerationTooLarge as exc:
        n = f" (n={exc.n})" if exc.n is not None else ""
        print(f"error: {exc}{n}", file=sys.stderr)
        return EXIT_INPUT
    except (SWError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
