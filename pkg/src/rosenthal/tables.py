"""Recomputed tables of K(p), L(p) and of u(t), T(t), with published values.

Published values live in ``data/published_tables.json`` together with per-entry
``suspect`` flags marking entries believed to be misprinted.  Each row
carries the recomputed value, the published value, the relative delta and a
status: ``ok``, ``mismatch`` (delta beyond tolerance) or ``suspect``.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from importlib import resources
from typing import Optional

from .config import get_precision, mpf, set_precision
from .exact import K_exact, L_exact
from .series import TruncationPolicy, K_series, L_series

__all__ = [
    "TABLE_TOL",
    "published_tables",
    "evaluate_KL",
    "table_rows",
    "table3_rows",
    "compare",
]

# "Four significant digits", read as a relative error of at most 5e-4.
TABLE_TOL = 5e-4
T_TOL = 5e-3


@lru_cache(maxsize=1)
def published_tables() -> dict:
    text = resources.files("rosenthal").joinpath("data/published_tables.json").read_text()
    return json.loads(text)


def _is_even_int(p) -> bool:
    return float(p) == int(p) and int(p) % 2 == 0 and int(p) >= 2


def evaluate_KL(p, policy: Optional[TruncationPolicy] = None):
    """(K, L, provenance, relative error estimate) at p; exact for even integers."""
    if _is_even_int(p):
        return K_exact(int(p)), L_exact(int(p)), "exact", 0.0
    k = K_series(p, policy)
    l = L_series(p, policy)
    err = float(max(k.relative_error, l.relative_error))
    return k.mpf, l.mpf, "series", err


def compare(value, published, suspect: bool = False, tol: float = TABLE_TOL):
    """(relative delta, status) of a recomputed value against a published one."""
    pub = mpf(published)
    delta = float((mpf(value) - pub) / pub)
    if suspect:
        status = "suspect"
    elif abs(delta) > tol:
        status = "mismatch"
    else:
        status = "ok"
    return delta, status


def _row_worker(args):
    entry, dps, policy = args
    set_precision(dps)
    return _row(entry, policy)


def _row(entry, policy):
    K, L, prov, err = evaluate_KL(mpf(entry["p"]) if not _is_even_int(entry["p"]) else entry["p"], policy)
    dK, sK = compare(K, entry["K"], entry["K_suspect"])
    dL, sL = compare(L, entry["L"], entry["L_suspect"])
    return {
        "p": entry["p"],
        "K": K if isinstance(K, int) else float(K),
        "K_paper": float(entry["K"]),
        "K_delta": dK,
        "K_status": sK,
        "L": L if isinstance(L, int) else float(L),
        "L_paper": float(entry["L"]),
        "L_delta": dL,
        "L_status": sL,
        "provenance": prov,
        "error_estimate": err,
    }


def table_rows(which: int, policy: Optional[TruncationPolicy] = None, jobs: int = 1) -> list:
    """Rows of table 1 (p = 2 .. 17) or table 2 (p = 17.5 .. 21), sorted by p."""
    key = {1: "table1", 2: "table2"}.get(int(which))
    if key is None:
        raise ValueError(f"table must be 1 or 2 here, got {which!r}")
    entries = published_tables()[key]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row_worker, [(e, get_precision(), policy) for e in entries]))
    else:
        rows = [_row(e, policy) for e in entries]
    return sorted(rows, key=lambda r: r["p"])


def table3_rows(policy: Optional[TruncationPolicy] = None) -> list:
    """Rows (t, T, u) recomputed, with published values and deltas."""
    from .extremal import table3

    entries = published_tables()["table3"]
    computed = table3([e["t"] for e in entries], policy)
    rows = []
    for e, (t, T, u) in zip(entries, computed):
        dT, sT = compare(T, e["T"], e["suspect"], T_TOL)
        du, su = compare(u, e["u"], e["suspect"])
        rows.append({
            "t": t,
            "T": float(T),
            "T_paper": float(e["T"]),
            "T_delta": dT,
            "T_status": sT,
            "u": float(u),
            "u_paper": float(e["u"]),
            "u_delta": du,
            "u_status": su,
            "provenance": "series",
            "error_estimate": 1e-3,
        })
    return sorted(rows, key=lambda r: -r["t"])
