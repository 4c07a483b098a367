"""Exact combinatorial arithmetic over Python ints and Fractions.

Stirling numbers of the second kind, Poisson and Poisson-difference
moments, the even-order Rosenthal constants K(2m), L(2m), R(2m, t), and
the two families of integer polynomials that carry them:

* ``Q_polynomial(m)``: the bivariate polynomial E(xi - eta)^(2m) for
  xi ~ Poisson(lam), eta ~ Poisson(mu);
* ``P_polynomial(m)``: the univariate polynomial with
  d^(2m)/dtheta^(2m) exp(cos theta) = exp(cos theta) * P(cos theta).

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from numbers import Rational as _RationalABC
from typing import Sequence

from .errors import ConsistencyError, DomainError

__all__ = [
    "stirling2",
    "stirling2_row",
    "poisson_raw_moment",
    "L_exact",
    "K_exact",
    "R_exact",
    "D3_exact",
    "H_exact",
    "Q_polynomial",
    "P_polynomial",
    "Polynomial",
    "BivariatePolynomial",
]


# ---------------------------------------------------------------------------
# Stirling numbers of the second kind
# ---------------------------------------------------------------------------

# Row n holds s(n, 0..n).  Rows are only ever appended, so readers never see
# a partially built row; growth is serialised by the lock.
_STIRLING_ROWS: list[list[int]] = [[1]]
_STIRLING_LOCK = threading.Lock()


def _grow_stirling(n: int) -> None:
    if n < len(_STIRLING_ROWS):
        return
    with _STIRLING_LOCK:
        while len(_STIRLING_ROWS) <= n:
            prev = _STIRLING_ROWS[-1]
            k = len(prev)  # new row index
            row = [0] * (k + 1)
            for r in range(1, k):
                row[r] = r * prev[r] + prev[r - 1]
            row[k] = 1
            _STIRLING_ROWS.append(row)


def _check_nonneg_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{name} must be a non-negative integer, got {value!r}")
    if value < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {value}")
    return value


def stirling2(n: int, r: int) -> int:
    """Stirling number of the second kind s(n, r).

    Defined through x^n = sum_r s(n, r) x(x-1)...(x-r+1) and computed by
    the recurrence s(n, r) = r s(n-1, r) + s(n-1, r-1), s(0, 0) = 1.
    """
    _check_nonneg_int("n", n)
    _check_nonneg_int("r", r)
    if r > n:
        raise DomainError(f"stirling2 requires r <= n, got n={n}, r={r}")
    _grow_stirling(n)
    return _STIRLING_ROWS[n][r]


def stirling2_row(n: int) -> tuple[int, ...]:
    """All of s(n, 0), ..., s(n, n)."""
    _check_nonneg_int("n", n)
    _grow_stirling(n)
    return tuple(_STIRLING_ROWS[n])


# ---------------------------------------------------------------------------
# Rational parameters
# ---------------------------------------------------------------------------

def _as_rational(name: str, value) -> Fraction:
    if isinstance(value, bool):
        raise DomainError(f"{name} must be rational, got {value!r}")
    if isinstance(value, (_RationalABC, str, float)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot read {name}={value!r} as a rational") from exc
    raise DomainError(f"{name} must be rational, got {type(value).__name__}")


def _positive_rational(name: str, value) -> Fraction:
    q = _as_rational(name, value)
    if q <= 0:
        raise DomainError(f"{name} must be positive, got {q}")
    return q


def _touchard(k: int, lam: Fraction) -> Fraction:
    # E xi^k = sum_l s(k, l) lam^l, since E xi_(l) = lam^l
    row = stirling2_row(k)
    acc = Fraction(0)
    power = Fraction(1)
    for coeff in row:
        acc += coeff * power
        power *= lam
    return acc


def poisson_raw_moment(k: int, lam) -> Fraction:
    """E xi^k for xi ~ Poisson(lam), exactly."""
    _check_nonneg_int("k", k)
    return _touchard(k, _positive_rational("lam", lam))


def _even_order(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int):
        raise DomainError(f"p must be an even integer >= 2, got {p!r}")
    if p < 2 or p % 2:
        raise DomainError(f"p must be an even integer >= 2, got {p}")
    return p


def _require_integer(name: str, value: Fraction) -> int:
    if value.denominator != 1:
        raise ConsistencyError(f"{name} should be an integer but came out as {value}")
    return value.numerator


def L_exact(p: int) -> int:
    """L(2m) = E(theta - 1)^(2m) for theta ~ Poisson(1).

    Alternating binomial sum over Bell numbers,
    sum_l (-1)^l C(2m, l) sum_r s(2m - l, r).
    """
    p = _even_order(p)
    total = 0
    for l in range(p + 1):
        bell = sum(stirling2_row(p - l))
        total += (-1) ** l * comb(p, l) * bell
    return total


def K_exact(p: int) -> int:
    """K(2m) = E(tau1 - tau2)^(2m) for independent tau_i ~ Poisson(1/2).

    The triple sum carries powers 2^(-r-q) and is evaluated in Fractions;
    the result must be an integer and this is checked, not assumed.
    """
    p = _even_order(p)
    value = _signed_difference_moment(p, Fraction(1, 2), Fraction(1, 2))
    return _require_integer(f"K({p})", value)


def R_exact(p: int, t) -> Fraction:
    """R(2m, t)^(2m) = E(nu1 - nu2)^(2m), nu_i ~ Poisson(t), 0 < t <= 1/2."""
    p = _even_order(p)
    t = _as_rational("t", t)
    if not (0 < t <= Fraction(1, 2)):
        raise DomainError(f"t must lie in (0, 1/2], got {t}")
    return _signed_difference_moment(p, t, t)


def _signed_difference_moment(p: int, lam: Fraction, mu: Fraction) -> Fraction:
    # E(xi - eta)^p = sum_l C(p, l) E xi^(p-l) E(-eta)^l
    total = Fraction(0)
    for l in range(p + 1):
        total += (-1) ** l * comb(p, l) * _touchard(p - l, lam) * _touchard(l, mu)
    return total


def D3_exact(p: int, a, lam) -> Fraction:
    """E(xi - a)^p for xi ~ Poisson(lam); ``a`` may be any rational."""
    _check_nonneg_int("p", p)
    a = _as_rational("a", a)
    lam = _positive_rational("lam", lam)
    total = Fraction(0)
    for l in range(p + 1):
        total += (-1) ** l * comb(p, l) * a ** (p - l) * _touchard(l, lam)
    # The expansion above is of E(a - xi)^p; flip the sign for odd p.
    return total if p % 2 == 0 else -total


def H_exact(p: int, lam, mu) -> Fraction:
    """E(xi - eta)^p with xi ~ Poisson(lam), eta ~ Poisson(mu) independent."""
    _check_nonneg_int("p", p)
    return _signed_difference_moment(
        p, _positive_rational("lam", lam), _positive_rational("mu", mu)
    )


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def _trim(coeffs: Sequence) -> tuple:
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs) if coeffs else (0,)


class Polynomial:
    """Dense univariate polynomial with int or Fraction coefficients.

    ``coeffs[i]`` multiplies x**i.  Trailing zeros are trimmed.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        self.coeffs = _trim(coeffs)

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:] or [0])

    def __add__(self, other) -> "Polynomial":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Polynomial":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = _as_poly(other)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


def _as_poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([x])


class BivariatePolynomial:
    """Dense polynomial in (lam, mu); ``grid[i][j]`` multiplies lam**i mu**j."""

    __slots__ = ("grid",)

    def __init__(self, grid: Sequence[Sequence]):
        rows = [list(r) for r in grid]
        width = max((len(r) for r in rows), default=1)
        rows = [r + [0] * (width - len(r)) for r in rows] or [[0]]
        while len(rows) > 1 and all(c == 0 for c in rows[-1]):
            rows.pop()
        while width > 1 and all(r[width - 1] == 0 for r in rows):
            width -= 1
            rows = [r[:width] for r in rows]
        self.grid = tuple(tuple(r) for r in rows)

    @property
    def total_degree(self) -> int:
        degs = [i + j for i, r in enumerate(self.grid) for j, c in enumerate(r) if c != 0]
        return max(degs) if degs else -1

    def coefficient(self, i: int, j: int):
        if i < len(self.grid) and j < len(self.grid[i]):
            return self.grid[i][j]
        return 0

    def __call__(self, lam, mu):
        acc = 0
        for row in reversed(self.grid):
            inner = 0
            for c in reversed(row):
                inner = inner * mu + c
            acc = acc * lam + inner
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self.grid == other.grid

    def __hash__(self) -> int:
        return hash(self.grid)

    def __repr__(self) -> str:
        return f"BivariatePolynomial({[list(r) for r in self.grid]!r})"


def Q_polynomial(m: int) -> BivariatePolynomial:
    """Q_2m(lam, mu) = E(xi - eta)^(2m) as an integer polynomial.

    Coefficient of lam^i mu^j is
    sum_r (-1)^r C(2m, r) s(r, i) s(2m - r, j).
    """
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise DomainError(f"m must be an integer >= 1, got {m!r}")
    p = 2 * m
    grid = [[0] * (p + 1) for _ in range(p + 1)]
    for r in range(p + 1):
        sign_binom = (-1) ** r * comb(p, r)
        row_r = stirling2_row(r)
        row_rest = stirling2_row(p - r)
        for i, s_ri in enumerate(row_r):
            if s_ri == 0:
                continue
            for j, s_rj in enumerate(row_rest):
                if s_rj:
                    grid[i][j] += sign_binom * s_ri * s_rj
    return BivariatePolynomial(grid)


_P_CACHE: list[Polynomial] = [Polynomial([1])]
_P_LOCK = threading.Lock()
_ONE_MINUS_X2 = Polynomial([1, 0, -1])
_X = Polynomial([0, 1])


def P_polynomial(m: int) -> Polynomial:
    """P_2m with (exp cos theta)^(2m) = exp(cos theta) P_2m(cos theta).

    P_0 = 1 and P_{2m+2} = (1 - x^2)(P'' + 2P' + P) - x(P' + P).
    """
    _check_nonneg_int("m", m)
    if m >= len(_P_CACHE):
        with _P_LOCK:
            while len(_P_CACHE) <= m:
                P = _P_CACHE[-1]
                d1 = P.derivative()
                d2 = d1.derivative()
                _P_CACHE.append(_ONE_MINUS_X2 * (d2 + 2 * d1 + P) - _X * (d1 + P))
    return _P_CACHE[m]
