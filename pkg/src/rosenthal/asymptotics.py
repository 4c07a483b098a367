"""Closed-form asymptotic scaffolding for L(p) and K(p).

Everything here is explicit: the comparators g and h, the saddle locations
M(p) and N(p), their envelopes, the normalised saddle values X(p), Y(p)
with their explicit bounds, the two-sided ("sandwich") bounds on L(p) and
K(p) for large p, and the truncated expansions of G, S and R.

Regime floors: the envelope and L-bounds hold for p >= 700, the K-bounds
for p >= 10**6.  Asking below a floor raises :class:`RegimeError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .config import ctx, mpf
from .errors import DomainError, RegimeError, SolverError
from .logreal import LogReal

__all__ = [
    "P0",
    "P1",
    "g",
    "h",
    "Delta",
    "delta",
    "zeta",
    "C14",
    "C15",
    "SolveResult",
    "solve_M",
    "solve_N",
    "Envelopes",
    "envelopes",
    "V",
    "W",
    "X_of_p",
    "Y_of_p",
    "XY_bounds",
    "SandwichBound",
    "psi1",
    "psi2",
    "sandwich_L",
    "sandwich_K",
    "expansion_G",
    "expansion_S",
    "expansion_R",
    "theorem43_forms",
    "AsymptoticEnv",
    "environment",
    "growth_gap",
]

P0 = 700
P1 = 10**6


def _positive(name, p, floor=0):
    p = mpf(p)
    if not p > floor:
        raise DomainError(f"{name} must exceed {floor}, got {p}")
    return p


def g(p):
    """p / (e ln p)."""
    p = _positive("p", p, 1)
    return p / (ctx.e * ctx.log(p))


def Delta(p):
    """ln ln p / ln p."""
    p = _positive("p", p, 1)
    lp = ctx.log(p)
    return ctx.log(lp) / lp


def delta(p):
    """1 / ln p."""
    p = _positive("p", p, 1)
    return 1 / ctx.log(p)


def h(p):
    """g(p) (1 + Delta + Delta^2)."""
    d = Delta(p)
    return g(p) * (1 + d + d * d)


def zeta(p):
    """ln 2 / ln(2p)."""
    p = _positive("p", p, mpf(1) / 2)
    return ctx.log(2) / ctx.log(2 * p)


def C14():
    """(1 - Delta(700))^-1, about 1.402365."""
    return 1 / (1 - Delta(P0))


def C15():
    """2 / (sqrt(1 + 4 Delta(700)^2) + 1), about 0.928958."""
    d = Delta(P0)
    return 2 / (ctx.sqrt(1 + 4 * d * d) + 1)


# ---------------------------------------------------------------------------
# Saddle equations  M ln M = p,  N ln(2N) = p
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    root: object
    residual: object
    iterations: int

    def __float__(self) -> float:
        return float(self.root)


def _newton_bisect(f: Callable, df: Callable, lo, hi, x0, max_iter: int = 200):
    # f increasing on [lo, hi] with f(lo) < 0 < f(hi)
    x = min(max(x0, lo), hi)
    eps = mpf(10) ** (-(ctx.dps + 2))
    for it in range(1, max_iter + 1):
        fx = f(x)
        if fx == 0:
            return x, it
        if fx < 0:
            lo = x
        else:
            hi = x
        step = fx / df(x)
        nxt = x - step
        if not (lo < nxt < hi):
            nxt = (lo + hi) / 2
        if abs(nxt - x) <= eps * abs(nxt) or hi - lo <= eps * abs(hi):
            return nxt, it
        x = nxt
    raise SolverError(f"Newton iteration did not converge in {max_iter} steps")


def solve_M(p) -> SolveResult:
    """Root of M ln M = p (M > 1)."""
    p = _positive("p", p)
    with ctx.workdps(ctx.dps + 10):
        f = lambda m: m * ctx.log(m) - p
        df = lambda m: ctx.log(m) + 1
        hi = max(p, ctx.e)
        x0 = p / ctx.log(p) if p > ctx.e else mpf(1) + p / 2
        root, its = _newton_bisect(f, df, ctx.one, hi, x0)
        residual = f(root)
    return SolveResult(+root, +residual, its)


def solve_N(p) -> SolveResult:
    """Root of N ln(2N) = p (N > 1/2)."""
    p = _positive("p", p)
    with ctx.workdps(ctx.dps + 10):
        f = lambda n: n * ctx.log(2 * n) - p
        df = lambda n: ctx.log(2 * n) + 1
        hi = max(p, ctx.e)
        x0 = p / ctx.log(2 * p) if p > ctx.e else mpf(1) / 2 + p / 2
        root, its = _newton_bisect(f, df, mpf(1) / 2, hi, x0)
        residual = f(root)
    return SolveResult(+root, +residual, its)


# ---------------------------------------------------------------------------
# Envelopes of M and N
# ---------------------------------------------------------------------------

def _eps_plus(p):
    d = Delta(p)
    return d + C14() * d * d


def _eps_minus(p):
    d = Delta(p)
    return d + C15() * d * d


def _M_plus(p):
    p = mpf(p)
    return p / ctx.log(p) * (1 + _eps_plus(p))


def _M_minus(p):
    p = mpf(p)
    return p / ctx.log(p) * (1 + _eps_minus(p))


def _N_plus(p):
    p = mpf(p)
    return p / ctx.log(2 * p) * (1 + _eps_plus(2 * p))


def _N_minus(p):
    p = mpf(p)
    return p / ctx.log(2 * p) * (1 + _eps_minus(2 * p))


@dataclass(frozen=True)
class Envelopes:
    eps_plus: object
    eps_minus: object
    M_plus: object
    M_minus: object
    N_plus: object
    N_minus: object


def _regime(p, floor):
    p = mpf(p)
    if p < floor:
        raise RegimeError(f"bound only holds for p >= {floor}, got p = {ctx.nstr(p, 8)}")
    return p


def envelopes(p) -> Envelopes:
    """eps_{+-}(p) and the envelopes M_{+-}(p), N_{+-}(p) for p >= 700.

    N_{+-}(p) = M_{+-}(2p) / 2, matching N(p) = M(2p) / 2.
    """
    p = _regime(p, P0)
    return Envelopes(
        eps_plus=_eps_plus(p),
        eps_minus=_eps_minus(p),
        M_plus=_M_plus(p),
        M_minus=_M_minus(p),
        N_plus=_N_plus(p),
        N_minus=_N_minus(p),
    )


# ---------------------------------------------------------------------------
# Saddle values
# ---------------------------------------------------------------------------

def V(x, p):
    x, p = mpf(x), mpf(p)
    lx = ctx.log(x)
    return p * lx - x * lx + x


def W(x, p):
    x, p = mpf(x), mpf(p)
    lx = ctx.log(x)
    return p * lx - x * lx + x * (1 - ctx.log(2))


def X_of_p(p):
    """V(M(p), p) / p, the maximum of V(., p) / p."""
    p = _positive("p", p)
    return V(solve_M(p).root, p) / p


def Y_of_p(p):
    """W(N(p), p) / p, the maximum of W(., p) / p."""
    p = _positive("p", p)
    return W(solve_N(p).root, p) / p


def _X1(p):
    d, dl, e = Delta(p), delta(p), _eps_plus(p)
    return d + dl + d * e + dl * (e - ctx.log1p(e))


def _X2(p):
    d, dl, e = Delta(p), delta(p), _eps_minus(p)
    l1e = ctx.log1p(e)
    return d + dl + (l1e - e) - dl * e * l1e


def _Y1(p):
    p = mpf(p)
    d2, dl2, e2 = Delta(2 * p), delta(2 * p), _eps_plus(2 * p)
    dl = delta(p)
    ln2 = ctx.log(2)
    return d2 + dl2 + (1 + e2) * dl * ln2 / (1 + dl * ln2) + e2 * (d2 + dl2)


def _Y2(p):
    p = mpf(p)
    d2, dl2, e2 = Delta(2 * p), delta(2 * p), _eps_minus(2 * p)
    return d2 + dl2 + e2 * (d2 + dl2)


def XY_bounds(p):
    """(X1, X2, Y1, Y2): explicit bounds on X(p) - ln g(p) and Y(p) - ln g(p).

    Valid for p >= 700; the monotone decrease of Y1 is claimed only for
    p >= 10**6.
    """
    p = _regime(p, P0)
    return _X1(p), _X2(p), _Y1(p), _Y2(p)


# ---------------------------------------------------------------------------
# Sandwich bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SandwichBound:
    lower: LogReal
    upper: LogReal
    regime_floor: int
    psi_upper: object
    psi_lower: object

    def brackets(self, value) -> bool:
        if not isinstance(value, LogReal):
            value = LogReal.from_value(value)
        return self.lower <= value <= self.upper


def psi1(p):
    p = mpf(p)
    d = Delta(p)
    return ctx.sqrt(2 * ctx.pi * p) * (1 + d + C14() * d * d) / ctx.log(p)


def psi2(p):
    p = mpf(p)
    onep = 1 + _eps_plus(p)
    lp2 = ctx.log(p) ** 2
    return ctx.exp(-lp2 / onep**2) * p * onep**2 / lp2


def _log_gauss_window(q, center):
    """log of a lower bound for int_{c+1}^{c+sqrt(q)} exp(F(x) - F(c)) dx.

    F is V(., q) or W(., q), maximal at c.  Right of c, |F''| = q/x^2 + 1/x
    is at most s = (q + c)/c^2, so F(x) >= F(c) - s (x - c)^2 / 2 there.
    """
    s = (q + center) / center**2
    half = ctx.sqrt(s / 2)
    mass = ctx.erf(ctx.sqrt(q) * half) - ctx.erf(half)
    return ctx.log(ctx.sqrt(ctx.pi / (2 * s)) * mass)


def sandwich_L(p) -> SandwichBound:
    """exp(p X(p)) Psi4^p <= L(p) <= exp(p X(p)) Psi3^p for p >= 700.

    Upper: e^-1 exp(pX) [1.5 exp(-pX) + (2 pi)^-1/2 + Psi1 + 2 (2 pi)^-1/2 Psi2].
    Lower: e L >= sum_{n>=3} n^p / (n+1)! >= (3/4) sum n^(p-1) / n!; Stirling
    with remainder turns each term into exp(V(n, q)), q = p - 3/2, and the
    terms to the right of M(q) are compared with a Gaussian integral.
    """
    p = _regime(p, P0)
    pX = p * X_of_p(p)
    inv_sqrt_2pi = 1 / ctx.sqrt(2 * ctx.pi)
    bracket = (
        mpf("1.5") * ctx.exp(-pX) + inv_sqrt_2pi + psi1(p) + 2 * inv_sqrt_2pi * psi2(p)
    )
    log_upper = pX - 1 + ctx.log(bracket)

    q = p - mpf(3) / 2
    Mq = solve_M(q).root
    log_lower = (
        -1 + ctx.log(mpf(3) / 4) - ctx.log(2 * ctx.pi) / 2 - mpf(1) / 12
        + V(Mq, q) + _log_gauss_window(q, Mq)
    )

    return SandwichBound(
        lower=LogReal.from_log(log_lower),
        upper=LogReal.from_log(log_upper),
        regime_floor=P0,
        psi_upper=ctx.exp((log_upper - pX) / p),
        psi_lower=ctx.exp((log_lower - pX) / p),
    )


def sandwich_K(p) -> SandwichBound:
    """exp(p Y(p)) Psi6^p <= K(p) <= exp(p Y(p)) Psi5^p for p >= 10**6.

    Uses I_n(1) < e^(1/4) 2^-n / n! for the upper bound and
    I_n(1) >= 2^-n / n! for the lower one, then the same saddle analysis
    as for L with W in place of V.
    """
    p = _regime(p, P1)
    pY = p * Y_of_p(p)
    inv_sqrt_2pi = 1 / ctx.sqrt(2 * ctx.pi)
    onep = 1 + _eps_plus(2 * p)
    lp2 = ctx.log(p) ** 2
    tail = 2 * inv_sqrt_2pi * p / lp2 * onep**2 * ctx.exp(-lp2 / (2 * onep**2))
    bracket = inv_sqrt_2pi + ctx.sqrt(p) * onep / ctx.log(2 * p) + tail
    log_upper = ctx.log(2) - mpf(3) / 4 + pY + ctx.log(bracket)

    # K >= (2/e) sum n^p 2^-n / n!, then Stirling with q = p - 1/2 as for L.
    q = p - mpf(1) / 2
    Nq = solve_N(q).root
    log_lower = (
        ctx.log(2) - 1 - ctx.log(2 * ctx.pi) / 2 - mpf(1) / 12
        + W(Nq, q) + _log_gauss_window(q, Nq)
    )

    return SandwichBound(
        lower=LogReal.from_log(log_lower),
        upper=LogReal.from_log(log_upper),
        regime_floor=P1,
        psi_upper=ctx.exp((log_upper - pY) / p),
        psi_lower=ctx.exp((log_lower - pY) / p),
    )


# ---------------------------------------------------------------------------
# Expansions
# ---------------------------------------------------------------------------

def _expansion_parts(p):
    p = _positive("p", p, 1)
    lp = ctx.log(p)
    llp = ctx.log(lp)
    return p, lp, llp


def expansion_G(p):
    """g(p) (1 + lnln p/ln p + 1/ln p + lnln^2 p/ln^2 p + lnln p/ln^2 p)."""
    p, lp, llp = _expansion_parts(p)
    return g(p) * (1 + llp / lp + 1 / lp + (llp / lp) ** 2 + llp / lp**2)


def expansion_S(p):
    """g(p) (1 + lnln p/ln p + (1 - ln 2)/ln p + lnln^2 p/ln^2 p)."""
    p, lp, llp = _expansion_parts(p)
    return g(p) * (1 + llp / lp + (1 - ctx.log(2)) / lp + (llp / lp) ** 2)


def expansion_R(p, t):
    """g(p) (1 + lnln p/ln p + (1 + ln t)/ln p + lnln^2 p/ln^2 p)."""
    p, lp, llp = _expansion_parts(p)
    t = mpf(t)
    if not (0 < t <= mpf(1) / 2):
        raise DomainError(f"t must lie in (0, 1/2], got {t}")
    return g(p) * (1 + llp / lp + (1 + ctx.log(t)) / lp + (llp / lp) ** 2)


def theorem43_forms(p):
    """(M^(1 - M/p) exp(M/p), N^(1 - N/p) (e/2)^(N/p)) with M = M(p), N = N(p).

    The logarithms of these equal X(p) and Y(p) exactly.
    """
    p = _positive("p", p)
    if p < 4:
        raise DomainError(f"p must be >= 4, got {p}")
    M = solve_M(p).root
    N = solve_N(p).root
    G_form = M ** (1 - M / p) * ctx.exp(M / p)
    S_form = N ** (1 - N / p) * (ctx.e / 2) ** (N / p)
    return G_form, S_form


# ---------------------------------------------------------------------------
# Everything at once
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticEnv:
    p: object
    g: object
    h: object
    Delta: object
    delta: object
    zeta: object
    M: object
    N: object
    X: object
    Y: object
    eps_plus: Optional[object] = None
    eps_minus: Optional[object] = None
    M_plus: Optional[object] = None
    M_minus: Optional[object] = None
    N_plus: Optional[object] = None
    N_minus: Optional[object] = None


def environment(p) -> AsymptoticEnv:
    """All scalar asymptotic quantities at p (envelopes only when p >= 700)."""
    p = _positive("p", p)
    if p < 4:
        raise DomainError(f"p must be >= 4, got {p}")
    env = dict(
        p=p, g=g(p), h=h(p), Delta=Delta(p), delta=delta(p), zeta=zeta(p),
        M=solve_M(p).root, N=solve_N(p).root, X=X_of_p(p), Y=Y_of_p(p),
    )
    if p >= P0:
        e = envelopes(p)
        env.update(
            eps_plus=e.eps_plus, eps_minus=e.eps_minus, M_plus=e.M_plus,
            M_minus=e.M_minus, N_plus=e.N_plus, N_minus=e.N_minus,
        )
    return AsymptoticEnv(**env)


def growth_gap(p, a, lam, gam, policy=None):
    """lam^-1 B4(p; a, lam, gam)^(1/p) / g(q) - (1 + Delta(q)).

    q = (p - a - gam - 1/2) / lam.  Tends to zero like O(1 / ln p).
    """
    from .series import eval_B4

    p, lam = mpf(p), mpf(lam)
    q = (p - mpf(a) - mpf(gam) - mpf(1) / 2) / lam
    if not q > ctx.e:
        raise DomainError(f"q = {q} is too small for the comparison")
    b4 = eval_B4(p, a, lam, gam, policy=policy).value
    return ctx.exp(b4.log / p) / lam / g(q) - (1 + Delta(q))
