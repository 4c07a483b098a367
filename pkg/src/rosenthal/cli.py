"""Command-line interface.

Subcommands: ``eval``, ``table``, ``constants``, ``bounds`` and ``mc``.
Every emitted record has the keys command, inputs, values, provenance and
error_estimate.  JSON output is one object per line; CSV output flattens
inputs and values into columns.

Exit codes: 0 success, 2 domain error, 3 truncation failure, 4 regime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

from . import asymptotics as asy
from .config import mpf, set_precision
from .errors import DomainError, RegimeError, TruncationError
from .exact import H_exact, K_exact, L_exact, R_exact
from .series import (
    G_of_p,
    K_series,
    L_series,
    R_series,
    S_of_p,
    SeriesSpec,
    TruncationPolicy,
)

__all__ = ["main", "build_parser", "format_number", "emit"]

EXIT_DOMAIN = 2
EXIT_TRUNCATION = 3
EXIT_REGIME = 4

# Exact integer evaluation goes through Stirling rows of length p; above
# this order the series is used even for even integers.
EXACT_MAX_ORDER = 400


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def format_number(x) -> str:
    """Decimal text for CSV: integers exactly, floats round-trippable,
    scientific notation from 10^6 on."""
    if isinstance(x, bool) or x is None:
        return "" if x is None else str(x)
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isfinite(x) and abs(x) >= 1e6:
        return f"{x:.17e}"
    return repr(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return float(x)


def record(command: str, inputs: dict, values: dict, provenance: str, error_estimate) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "values": values,
        "provenance": provenance,
        "error_estimate": error_estimate,
    }


def emit(records: Sequence[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        for r in records:
            out.write(json.dumps(_jsonable(r)) + "\n")
        return
    flat = []
    for r in records:
        row = {"command": r["command"], **r["inputs"], **r["values"],
               "provenance": r["provenance"], "error_estimate": r["error_estimate"]}
        flat.append(row)
    header = []
    for row in flat:
        for k in row:
            if k not in header:
                header.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in flat:
        writer.writerow([
            format_number(row.get(k)) if not isinstance(row.get(k), str) else row[k]
            for k in header
        ])
    out.write(buf.getvalue())


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _policy(args) -> TruncationPolicy:
    try:
        return TruncationPolicy(rel_tol=args.rel_tol, max_terms=args.max_terms)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"invalid --rel-tol {args.rel_tol!r}") from exc


def _even_int(p) -> Optional[int]:
    p = float(p)
    if p == int(p) and 2 <= int(p) <= EXACT_MAX_ORDER and int(p) % 2 == 0:
        return int(p)
    return None


def cmd_eval(args) -> list:
    fam = args.family.upper()
    policy = _policy(args)
    inputs = {"family": fam, "p": args.p}
    need = lambda name: _require(args, name)
    p2m = _even_int(args.p)

    if fam in ("K", "L", "R", "G", "S"):
        if fam == "R":
            inputs["t"] = need("t")
        if p2m is not None and fam in ("K", "L", "R"):
            if fam == "K":
                value = K_exact(p2m)
            elif fam == "L":
                value = L_exact(p2m)
            else:
                value = float(R_exact(p2m, _fraction(args.t)))
            return [record("eval", inputs, {"value": value}, "exact", 0.0)]
        if fam == "K":
            res = K_series(args.p, policy)
        elif fam == "L":
            res = L_series(args.p, policy)
        elif fam == "R":
            res = R_series(args.p, args.t, policy)
        elif fam == "G":
            return [record("eval", inputs, {"value": G_of_p(args.p, policy)}, "series",
                           float(mpf(args.rel_tol)))]
        else:
            prov = "exact" if float(args.p) < 4 else "series"
            return [record("eval", inputs, {"value": S_of_p(args.p, policy)}, prov,
                           float(mpf(args.rel_tol)))]
        return [record("eval", inputs, {"value": res.mpf}, "series", res.relative_error)]

    if fam in ("F3", "G3"):
        inputs.update(theta=need("theta"), beta=need("beta"))
        spec = SeriesSpec(fam, args.p, theta=args.theta, beta=args.beta)
    elif fam in ("B4", "D4"):
        inputs.update(a=need("a"), **{"lambda": need("lam")}, gamma=need("gamma"))
        spec = SeriesSpec(fam, args.p, a=args.a, lam=args.lam, gamma=args.gamma)
    else:
        raise DomainError(f"unknown family {args.family!r}")
    res = spec.evaluate(policy)
    return [record("eval", inputs, {"value": res.mpf}, "series", res.relative_error)]


def _fraction(x):
    from fractions import Fraction

    return Fraction(str(x))


def _require(args, name):
    value = getattr(args, name)
    if value is None:
        flag = "--lambda" if name == "lam" else f"--{name}"
        raise DomainError(f"{flag} is required for this family")
    return value


def cmd_table(args) -> list:
    from .tables import table3_rows, table_rows

    policy = _policy(args)
    if args.which == 3:
        rows = table3_rows(policy)
        key = "t"
    else:
        rows = table_rows(args.which, policy, jobs=args.jobs)
        key = "p"
    out = []
    for r in rows:
        values = {k: v for k, v in r.items() if k not in (key, "provenance", "error_estimate")}
        out.append(record("table", {"table": args.which, key: r[key]}, values,
                          r["provenance"], r["error_estimate"]))
    return out


def cmd_constants(args) -> list:
    from .extremal import constants_suite
    from .tables import published_tables

    published = published_tables()["constants"]
    out = []
    for rep in constants_suite(_policy(args), with_inf_trend=False):
        d = rep.as_dict()
        pub = published.get(rep.name)
        values = {
            "value": d["value"],
            "argmax": d["argmax"],
            "bracket_lo": d["bracket"][0],
            "bracket_hi": d["bracket"][1],
            "regime_split": d["regime_split"],
            "tail_value": d["tail_value"],
        }
        if pub is not None:
            values.update(
                label_value=pub["label"][0] or "",
                label_argmax=pub["label"][1] or "",
                paper_value=float(pub["value"]),
                paper_argmax=float(pub["argmax"]),
            )
        out.append(record("constants", {"name": rep.name}, values, "series", d["tolerance"]))

    from .extremal import table3

    for t in (0.45, 0.2):
        [(tt, T, u)] = table3([t], _policy(args))
        out.append(record("constants", {"name": f"u({t})"}, {"value": u, "argmax": T},
                          "series", 1e-3))
    return out


def cmd_bounds(args) -> list:
    p = mpf(args.p)
    if p < asy.P0:
        raise RegimeError(
            f"sandwich bounds need p >= {asy.P0} (L) or p >= {asy.P1} (K); got p = {args.p}"
        )
    inputs = {"p": args.p}
    sL = asy.sandwich_L(p)
    X1, X2, Y1, Y2 = asy.XY_bounds(p)
    values = {
        "L_lower_log": sL.lower.log,
        "L_upper_log": sL.upper.log,
        "psi3": sL.psi_upper,
        "psi4": sL.psi_lower,
        "X": asy.X_of_p(p),
        "X1": X1,
        "X2": X2,
        "Y": asy.Y_of_p(p),
        "Y1": Y1,
        "Y2": Y2,
        "expansion_G": asy.expansion_G(p),
        "expansion_S": asy.expansion_S(p),
    }
    if p >= asy.P1:
        sK = asy.sandwich_K(p)
        values.update(K_lower_log=sK.lower.log, K_upper_log=sK.upper.log,
                      psi5=sK.psi_upper, psi6=sK.psi_lower)
    return [record("bounds", inputs, values, "asymptotic", 0.0)]


def cmd_mc(args) -> list:
    from .montecarlo import MCConfig, empirical_abs_moment, exact_abs_moment

    try:
        samples = int(float(args.samples))
    except ValueError as exc:
        raise DomainError(f"invalid --samples {args.samples!r}") from exc
    cfg = MCConfig(samples=samples, seed=args.seed,
                   lam=float(args.lam if args.lam is not None else 0.5),
                   mu=float(args.mu), p=float(args.p))
    est = empirical_abs_moment(cfg)
    values = {"mean": est.mean, "stderr": est.stderr, "samples": est.samples}
    p2m = _even_int(cfg.p)
    if p2m is not None:
        values["reference"] = float(H_exact(p2m, _fraction(cfg.lam), _fraction(cfg.mu)))
    else:
        values["reference"] = float(exact_abs_moment(cfg.p, cfg.lam, cfg.mu))
    values["z_score"] = (est.mean - values["reference"]) / est.stderr if est.stderr else 0.0
    inputs = {"p": cfg.p, "lambda": cfg.lam, "mu": cfg.mu, "seed": cfg.seed}
    return [record("mc", inputs, values, "monte-carlo", est.stderr)]


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise DomainError(f"{name} must be an integer, got {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="working precision in decimal digits (env RC_PRECISION)")
    common.add_argument("--rel-tol", default="1e-30", help="series truncation tolerance")
    common.add_argument("--max-terms", type=int, default=10**7, help="series term cap")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for tables")

    parser = argparse.ArgumentParser(
        prog="rosenthal-constants",
        description="Exact constants in Rosenthal-type moment inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="evaluate one constant or series")
    ev.add_argument("--family", required=True,
                    help="K, L, R, G, S, F3, G3, B4 or D4")
    ev.add_argument("--p", type=float, required=True)
    ev.add_argument("--theta", type=float)
    ev.add_argument("--beta", type=float)
    ev.add_argument("--a", type=float)
    ev.add_argument("--lambda", dest="lam", type=float)
    ev.add_argument("--gamma", type=float)
    ev.add_argument("--t", type=float)
    ev.set_defaults(func=cmd_eval)

    tb = sub.add_parser("table", parents=[common], help="recompute a published table")
    tb.add_argument("which", type=int, choices=(1, 2, 3))
    tb.set_defaults(func=cmd_table)

    cs = sub.add_parser("constants", parents=[common], help="extremal constants")
    cs.set_defaults(func=cmd_constants)

    bd = sub.add_parser("bounds", parents=[common], help="sandwich bounds and expansions")
    bd.add_argument("--p", type=float, required=True)
    bd.set_defaults(func=cmd_bounds)

    mc = sub.add_parser("mc", parents=[common], help="Monte-Carlo moment estimate")
    mc.add_argument("--p", type=float, required=True)
    mc.add_argument("--lambda", dest="lam", type=float, default=0.5)
    mc.add_argument("--mu", type=float, default=0.5)
    mc.add_argument("--samples", default="1e6")
    mc.add_argument("--seed", type=int, default=None, help="RNG seed (env RC_SEED)")
    mc.set_defaults(func=cmd_mc)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.precision is not None:
            set_precision(args.precision)
        if getattr(args, "seed", "absent") is None:
            args.seed = _env_int("RC_SEED", 0)
        records = args.func(args)
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except TruncationError as exc:
        print(f"truncation error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    emit(records, args.format)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
