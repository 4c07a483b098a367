"""Exact constants in Rosenthal-type moment inequalities.

K(p) = E|tau1 - tau2|^p with tau_i ~ Poisson(1/2) and L(p) = E|theta - 1|^p
with theta ~ Poisson(1) are evaluated exactly at even integer p, by series
at real p, and asymptotically for large p.  S(p) = K(p)^(1/p) and
C(p) = L(p)^(1/p) are the optimal constants for symmetric and for
non-negative summands respectively.
"""

from .config import ctx, get_precision, precision, set_precision
from .errors import (
    ConsistencyError,
    DomainError,
    RegimeError,
    RosenthalError,
    SolverError,
    TruncationError,
)
from .exact import (
    D3_exact,
    H_exact,
    K_exact,
    L_exact,
    P_polynomial,
    Q_polynomial,
    R_exact,
    stirling2,
)
from .logreal import LogReal, LogSumAccumulator
from .series import (
    EvalResult,
    G_of_p,
    K_series,
    L_series,
    R_series,
    S_explicit,
    S_of_p,
    TruncationPolicy,
    eval_B4,
    eval_D4,
    eval_F3,
    eval_G3,
)
from .special import bessel_i, log_bessel_i, skellam_pmf

__version__ = "0.1.0"

__all__ = [
    "ctx", "get_precision", "precision", "set_precision",
    "ConsistencyError", "DomainError", "RegimeError", "RosenthalError",
    "SolverError", "TruncationError",
    "D3_exact", "H_exact", "K_exact", "L_exact", "P_polynomial", "Q_polynomial",
    "R_exact", "stirling2",
    "LogReal", "LogSumAccumulator",
    "EvalResult", "G_of_p", "K_series", "L_series", "R_series", "S_explicit",
    "S_of_p", "TruncationPolicy", "eval_B4", "eval_D4", "eval_F3", "eval_G3",
    "bessel_i", "log_bessel_i", "skellam_pmf",
]
