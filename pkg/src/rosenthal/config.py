"""Working-precision context.

All extended-precision arithmetic in the package goes through ``ctx``, a
private :class:`mpmath.MPContext`, so that changing precision here never
touches the global ``mpmath.mp`` used by other code in the same process.

The default precision is 30 significant decimal digits; the environment
variable ``RC_PRECISION`` overrides it at import time.
"""

from __future__ import annotations

import contextlib
import os

from mpmath import MPContext

from .errors import DomainError

DEFAULT_DPS = 30
MIN_DPS = 15

ctx = MPContext()


def _dps_from_env() -> int:
    raw = os.environ.get("RC_PRECISION")
    if raw is None or raw.strip() == "":
        return DEFAULT_DPS
    try:
        dps = int(raw)
    except ValueError as exc:
        raise DomainError(f"RC_PRECISION must be an integer, got {raw!r}") from exc
    if dps < MIN_DPS:
        raise DomainError(f"RC_PRECISION must be >= {MIN_DPS}, got {dps}")
    return dps


ctx.dps = _dps_from_env()


def get_precision() -> int:
    return ctx.dps


def set_precision(dps: int) -> None:
    if dps < MIN_DPS:
        raise DomainError(f"precision must be >= {MIN_DPS} digits, got {dps}")
    ctx.dps = int(dps)


@contextlib.contextmanager
def precision(dps: int):
    """Temporarily run with ``dps`` significant digits."""
    if dps < MIN_DPS:
        raise DomainError(f"precision must be >= {MIN_DPS} digits, got {dps}")
    old = ctx.dps
    ctx.dps = int(dps)
    try:
        yield ctx
    finally:
        ctx.dps = old


def mpf(x):
    """Coerce ints, floats, strings and Fractions to a context float."""
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
        return ctx.mpf(x.numerator) / ctx.mpf(x.denominator)
    return ctx.mpf(x)
