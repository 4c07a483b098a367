"""Series evaluation of the moment constants for real p.

The four families are

    F3(p; theta, beta) = sum_{k in Z} |k|^p theta^k I_k(beta)
    G3(p; theta, beta) = sum_{k in Z} k^p theta^k I_k(beta)          (integer p)
    B4(p; a, lam, gam) = sum_{n >= 0} |n - a|^p lam^n / (e^lam Gamma(n + gam + 1))
    D4(p; a, lam, gam) = sum_{n >= 0} (n - a)^p lam^n / (e^lam Gamma(n + gam + 1))

All terms are formed in log space.  Summation starts at the first term that
can matter, runs upward through the peak, and stops once a geometric
majorant of the remaining tail falls below ``rel_tol`` times the running sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .asymptotics import solve_M
from .config import ctx, mpf
from .errors import ConsistencyError, DomainError, TruncationError
from .logreal import LogReal, LogSumAccumulator
from .special import log_bessel_i

__all__ = [
    "TruncationPolicy",
    "EvalResult",
    "SeriesSpec",
    "eval_F3",
    "eval_G3",
    "eval_B4",
    "eval_D4",
    "K_series",
    "L_series",
    "R_series",
    "G_of_p",
    "S_of_p",
    "S_explicit",
    "explicit_K_power",
    "explicit_K_power_derivative",
    "DerivativeResult",
    "derivative_series",
]


@dataclass(frozen=True)
class TruncationPolicy:
    """How far to sum.

    ``peak_margin`` is the number of terms past the peak after which the
    tail test starts.  ``max_terms`` caps the number of terms summed.
    """

    rel_tol: object = "1e-30"
    max_terms: int = 10**7
    peak_margin: int = 3

    def __post_init__(self):
        if not mpf(self.rel_tol) > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if int(self.max_terms) < 1000:
            raise DomainError(f"max_terms must be >= 1000, got {self.max_terms}")
        if int(self.peak_margin) < 0:
            raise DomainError(f"peak_margin must be >= 0, got {self.peak_margin}")

    @property
    def tol(self):
        return mpf(self.rel_tol)


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class EvalResult:
    value: LogReal
    terms_used: int
    peak_index: int
    tail_bound: LogReal

    @property
    def mpf(self):
        return self.value.to_mpf()

    def __float__(self) -> float:
        return float(self.value)

    @property
    def relative_error(self):
        if self.value.is_zero:
            return ctx.zero if self.tail_bound.is_zero else ctx.inf
        if self.tail_bound.is_zero:
            return ctx.zero
        return ctx.exp(self.tail_bound.log - self.value.log)

    def scaled(self, factor: LogReal) -> "EvalResult":
        return EvalResult(
            self.value * factor, self.terms_used, self.peak_index, abs(self.tail_bound * factor)
        )


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------

class _Terms:
    """Memoised term function n -> LogReal."""

    def __init__(self, fn: Callable[[int], LogReal]):
        self._fn = fn
        self._cache: dict[int, LogReal] = {}

    def __call__(self, n: int) -> LogReal:
        t = self._cache.get(n)
        if t is None:
            t = self._fn(n)
            self._cache[n] = t
        return t

    def mag(self, n: int):
        t = self(n)
        return ctx.ninf if t.sign == 0 else t.log


def _find_peak(terms: _Terms, start: int, guess: int) -> int:
    n = max(start, int(guess))
    while True:
        moved = False
        for step_dir in (1, -1):
            step = 1
            while n + step_dir * step >= start and terms.mag(n + step_dir * step) > terms.mag(n):
                n += step_dir * step
                step *= 2
                moved = True
        if not moved:
            return n


def _sum_unimodal(
    terms: _Terms,
    start: int,
    guess: int,
    policy: TruncationPolicy,
    trim_head: bool,
    acc: Optional[LogSumAccumulator] = None,
):
    """Sum terms(n), n >= start, whose magnitudes rise to one peak and then fall.

    Returns (accumulator, peak, tail_bound, count).
    """
    acc = acc if acc is not None else LogSumAccumulator()
    tol = policy.tol
    peak = _find_peak(terms, start, guess)
    peak_mag = terms.mag(peak)
    head = LogReal.zero()
    lo = start
    if trim_head and peak - start > 32 and peak_mag != ctx.ninf:
        # Smallest n whose term is not negligible; everything below is
        # bounded by (n - start) times the largest skipped term.
        cut = peak_mag + ctx.log(tol) - ctx.log(peak - start + 1) - 5
        a, b = start, peak
        while a < b:
            mid = (a + b) // 2
            if terms.mag(mid) >= cut:
                b = mid
            else:
                a = mid + 1
        lo = a
        if lo > start:
            head = LogReal.from_log(terms.mag(lo - 1) + ctx.log(lo - start))

    largest = LogReal.zero()
    n = lo
    count = 0
    while True:
        if count >= policy.max_terms:
            raise TruncationError(
                f"series not converged after {policy.max_terms} terms (peak at {peak})"
            )
        t = terms(n)
        acc.add(t)
        count += 1
        if abs(t) > largest:
            largest = abs(t)
        if n >= peak + policy.peak_margin:
            nxt = terms(n + 1)
            if nxt.sign == 0:
                tail = LogReal.zero()
                break
            if t.sign != 0:
                log_r = nxt.log - t.log
                if log_r < 0:
                    tail = LogReal.from_log(nxt.log - ctx.log(-ctx.expm1(log_r)))
                    scale = max(abs(acc.value), largest)
                    if tail <= scale * LogReal.from_value(tol / 2):
                        break
        n += 1
    return acc, peak, tail + head, count


def _peak_guess(p, c) -> int:
    # n^p c^n / n! peaks near c M(p / c)
    p, c = mpf(p), mpf(c)
    if p <= 0 or c <= 0:
        return int(ctx.ceil(c)) if c > 0 else 0
    return int(ctx.nint(c * solve_M(p / c).root))


def _finish(acc, peak, tail, count) -> EvalResult:
    return EvalResult(acc.value, count, peak, tail)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def _check_p(p, *, integer=False):
    if integer:
        if isinstance(p, bool) or int(p) != p or int(p) < 1:
            raise DomainError(f"p must be a positive integer, got {p!r}")
        return int(p)
    pm = mpf(p)
    if not pm >= 0:
        raise DomainError(f"p must be >= 0, got {p!r}")
    return pm


def _log_weight_sym(k: int, log_theta, parity: int):
    """log|theta^k + parity * theta^-k| and its sign, k >= 1."""
    x = k * abs(log_theta)
    if parity == 1:
        return 1, x + ctx.log1p(ctx.exp(-2 * x))
    if log_theta == 0:
        return 0, ctx.ninf
    sign = 1 if log_theta > 0 else -1
    return sign, x + ctx.log(-ctx.expm1(-2 * x))


def _eval_bessel_family(p, theta, beta, parity, policy) -> EvalResult:
    theta, beta = mpf(theta), mpf(beta)
    if not theta > 0:
        raise DomainError(f"theta must be positive, got {theta}")
    if not beta >= 0:
        raise DomainError(f"beta must be non-negative, got {beta}")
    if beta == 0:
        # I_k(0) vanishes for k != 0; only |0|^p I_0(0) survives.
        value = LogReal.one() if mpf(p) == 0 else LogReal.zero()
        return EvalResult(value, 1, 0, LogReal.zero())
    policy = policy or DEFAULT_POLICY
    lt = ctx.log(theta)
    lp = mpf(p)
    p_is_zero = lp == 0

    def term(k: int) -> LogReal:
        if k == 0:
            return LogReal.from_log(log_bessel_i(0, beta)) if p_is_zero else LogReal.zero()
        sign, lw = _log_weight_sym(k, lt, parity)
        if sign == 0:
            return LogReal.zero()
        return LogReal(sign, lp * ctx.log(k) + lw + log_bessel_i(k, beta))

    terms = _Terms(term)
    acc = LogSumAccumulator()
    acc.add(terms(0))
    c = beta * max(theta, 1 / theta) / 2
    acc, peak, tail, count = _sum_unimodal(
        terms, 1, max(1, _peak_guess(lp, c)), policy, trim_head=(parity == 1), acc=acc
    )
    return _finish(acc, peak, tail, count + 1)


def eval_F3(p, theta, beta, policy: Optional[TruncationPolicy] = None) -> EvalResult:
    """sum over all integers k of |k|^p theta^k I_k(beta), for real p >= 0."""
    return _eval_bessel_family(_check_p(p), theta, beta, 1, policy)


def eval_G3(p, theta, beta, policy: Optional[TruncationPolicy] = None) -> EvalResult:
    """sum over all integers k of k^p theta^k I_k(beta), for integer p >= 1."""
    p = _check_p(p, integer=True)
    return _eval_bessel_family(p, theta, beta, 1 if p % 2 == 0 else -1, policy)


def _eval_poisson_family(p, a, lam, gam, signed, policy) -> EvalResult:
    a, lam, gam = mpf(a), mpf(lam), mpf(gam)
    if not lam > 0:
        raise DomainError(f"lam must be positive, got {lam}")
    if not gam > -1:
        raise DomainError(f"gam must exceed -1, got {gam}")
    policy = policy or DEFAULT_POLICY
    lp = mpf(p)
    odd = signed and int(p) % 2 == 1
    base = -lam
    llam = ctx.log(lam)

    def term(n: int) -> LogReal:
        d = n - a
        if d == 0:
            if lp != 0:
                return LogReal.zero()
            mag = ctx.zero
        else:
            mag = lp * ctx.log(abs(d))
        sign = -1 if (odd and d < 0) else 1
        return LogReal(sign, mag + n * llam + base - ctx.loggamma(n + gam + 1))

    terms = _Terms(term)
    acc = LogSumAccumulator()
    # Indices n <= a are summed directly: there |n - a|^p decreases in n.
    first = int(ctx.floor(a)) + 1 if a >= 0 else 0
    for n in range(first):
        acc.add(terms(n))
    guess = first + _peak_guess(lp, lam)
    acc, peak, tail, count = _sum_unimodal(
        terms, first, guess, policy, trim_head=not odd, acc=acc
    )
    return _finish(acc, peak, tail, count + first)


def eval_B4(p, a, lam, gam, policy: Optional[TruncationPolicy] = None) -> EvalResult:
    """sum_{n>=0} |n - a|^p lam^n / (e^lam Gamma(n + gam + 1)), real p >= 0."""
    return _eval_poisson_family(_check_p(p), a, lam, gam, False, policy)


def eval_D4(p, a, lam, gam, policy: Optional[TruncationPolicy] = None) -> EvalResult:
    """sum_{n>=0} (n - a)^p lam^n / (e^lam Gamma(n + gam + 1)), integer p >= 1."""
    return _eval_poisson_family(_check_p(p, integer=True), a, lam, gam, True, policy)


@dataclass(frozen=True)
class SeriesSpec:
    """A family name plus its parameters, evaluated on demand."""

    family: str
    p: object
    theta: object = 1
    beta: object = 1
    a: object = 1
    lam: object = 1
    gamma: object = 0

    def evaluate(self, policy: Optional[TruncationPolicy] = None) -> EvalResult:
        fam = self.family.upper()
        if fam == "F3":
            return eval_F3(self.p, self.theta, self.beta, policy)
        if fam == "G3":
            return eval_G3(self.p, self.theta, self.beta, policy)
        if fam == "B4":
            return eval_B4(self.p, self.a, self.lam, self.gamma, policy)
        if fam == "D4":
            return eval_D4(self.p, self.a, self.lam, self.gamma, policy)
        raise DomainError(f"unknown series family {self.family!r}")


# ---------------------------------------------------------------------------
# Named constants
# ---------------------------------------------------------------------------

def K_series(p, policy: Optional[TruncationPolicy] = None) -> EvalResult:
    """K(p) = E|tau1 - tau2|^p, tau_i ~ Poisson(1/2): (2/e) sum n^p I_n(1)."""
    return eval_F3(p, 1, 1, policy).scaled(LogReal.from_log(-1))


def L_series(p, policy: Optional[TruncationPolicy] = None) -> EvalResult:
    """L(p) = E|theta - 1|^p, theta ~ Poisson(1)."""
    return eval_B4(p, 1, 1, 0, policy)


def R_series(p, t, policy: Optional[TruncationPolicy] = None) -> EvalResult:
    """R(p, t) = 2 e^(-2t) sum n^p I_n(2t), 0 < t <= 1/2."""
    t = mpf(t)
    if not (0 < t <= mpf(1) / 2):
        raise DomainError(f"t must lie in (0, 1/2], got {t}")
    return eval_F3(p, 1, 2 * t, policy).scaled(LogReal.from_log(-2 * t))


def G_of_p(p, policy: Optional[TruncationPolicy] = None):
    """L(p)^(1/p); the optimal constant for non-negative summands when p >= 4."""
    pm = mpf(p)
    if not pm >= 2:
        raise DomainError(f"p must be >= 2, got {p!r}")
    return ctx.exp(L_series(pm, policy).value.log / pm)


def S_of_p(p, policy: Optional[TruncationPolicy] = None):
    """Optimal symmetric constant: K(p)^(1/p) for p >= 4, explicit on [2, 4)."""
    pm = mpf(p)
    if not pm >= 2:
        raise DomainError(f"p must be >= 2, got {p!r}")
    if pm < 4:
        return S_explicit(pm)
    return ctx.exp(K_series(pm, policy).value.log / pm)


def explicit_K_power(p):
    """1 + sqrt(2^p / pi) Gamma((p + 1) / 2), the p-th power of S on (2, 4]."""
    p = mpf(p)
    return 1 + ctx.sqrt(2**p / ctx.pi) * ctx.gamma((p + 1) / 2)


def S_explicit(p):
    """Closed form of the symmetric constant for 2 <= p <= 4."""
    pm = mpf(p)
    if not (2 <= pm <= 4):
        raise DomainError(f"S_explicit needs 2 <= p <= 4, got {p!r}")
    if pm == 2:
        return ctx.one
    return explicit_K_power(pm) ** (1 / pm)


def explicit_K_power_derivative(p=4):
    """d/dp of the closed form S(p)^p, by numerical differentiation."""
    pm = mpf(p)
    if not (2 < pm <= 4):
        raise DomainError(f"derivative only meaningful on (2, 4], got {p!r}")
    return ctx.diff(explicit_K_power, pm)


# ---------------------------------------------------------------------------
# p-derivatives of K and L
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivativeResult:
    value: object
    bound: object
    terms_used: int


def derivative_series(
    which: str, m: int, p, policy: Optional[TruncationPolicy] = None
) -> DerivativeResult:
    """m-th derivative in p of L(p) or K(p), summed termwise, with its bound.

    L: e^-1 sum |n-1|^p ln^m|n-1| / n!,   bound (m/e)^m (e B(p) - 1) / e
    K: (2/e) sum n^p ln^m n I_n(1),        bound (m/e)^m K(p + 1)
    where B(p) = e^-1 sum n^p / n!.  Requires p >= 2.
    """
    if isinstance(m, bool) or int(m) != m or int(m) < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    pm = mpf(p)
    if not pm >= 2:
        raise DomainError(f"p must be >= 2, got {p!r}")
    policy = policy or DEFAULT_POLICY
    key = which.upper()
    factor = (mpf(m) / ctx.e) ** m

    if key == "L":
        def term(n: int) -> LogReal:
            d = n - 1
            return LogReal(
                1, pm * ctx.log(d) + m * ctx.log(ctx.log(d)) - ctx.loggamma(n + 1) - 1
            )

        start, guess = 3, 1 + _peak_guess(pm, 1)
        b1 = eval_B4(pm, 0, 1, 0, policy).mpf
        bound = factor * (ctx.e * b1 - 1) / ctx.e
    elif key == "K":
        def term(n: int) -> LogReal:
            return LogReal(
                1,
                ctx.log(2) - 1 + pm * ctx.log(n) + m * ctx.log(ctx.log(n)) + log_bessel_i(n, 1),
            )

        start, guess = 2, _peak_guess(pm, mpf(1) / 2)
        bound = factor * K_series(pm + 1, policy).mpf
    else:
        raise DomainError(f"which must be 'K' or 'L', got {which!r}")

    acc, _, _, count = _sum_unimodal(_Terms(term), start, max(start, guess), policy, True)
    value = acc.value.to_mpf()
    if value > bound * (1 + mpf(10) ** (-(ctx.dps // 2))):
        raise ConsistencyError(f"derivative {value} exceeds its bound {bound}")
    return DerivativeResult(value, bound, count)
