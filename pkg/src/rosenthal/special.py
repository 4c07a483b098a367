"""Modified Bessel functions, log-gamma and the Skellam pmf.

The Bessel function is summed from its power series

    I_nu(z) = (z/2)^nu * sum_k (z^2/4)^k / (k! Gamma(nu + k + 1))

and returned as a :class:`~rosenthal.logreal.LogReal`, so that values such
as I_n(1) for n in the tens of thousands are representable.  An independent
trapezoid-rule evaluation of the integral representation of I_n(1) serves
as an oracle.
"""

from __future__ import annotations

from .config import ctx, mpf
from .errors import DomainError
from .logreal import LogReal

__all__ = [
    "log_gamma",
    "bessel_i",
    "log_bessel_i",
    "bessel_i_quadrature",
    "bessel_bounds",
    "skellam_pmf",
    "log_skellam_pmf",
]


def _tol():
    return mpf(10) ** (-(ctx.dps + 3))


def log_gamma(x):
    """ln Gamma(x) for x > 0 at the working precision."""
    x = mpf(x)
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return ctx.loggamma(x)


def _normalise_order(nu):
    nu = mpf(nu)
    if nu < 0:
        if nu != ctx.floor(nu):
            raise DomainError(f"negative non-integer Bessel order {nu} is not supported")
        nu = -nu  # I_{-n} = I_n
    return nu


def log_bessel_i(nu, z):
    """Natural log of I_nu(z); ``-inf`` when I_nu(z) is exactly zero."""
    nu = _normalise_order(nu)
    z = mpf(z)
    if z < 0:
        raise DomainError(f"bessel_i requires z >= 0, got {z}")
    if z == 0:
        return ctx.zero if nu == 0 else ctx.ninf
    q = z * z / 4
    tol = _tol()
    total = ctx.one
    term = ctx.one
    k = 0
    while True:
        term *= q / ((k + 1) * (nu + k + 1))
        total += term
        k += 1
        # Past the term peak (k > z^2/4) the ratios shrink monotonically.
        if k > q and term < tol * total:
            break
    return nu * ctx.log(z / 2) - ctx.loggamma(nu + 1) + ctx.log(total)


def bessel_i(nu, z) -> LogReal:
    """Modified Bessel function of the first kind as a LogReal.

    ``nu`` may be any real >= 0 or any integer (negative integers use
    I_{-n} = I_n).  ``z`` must be non-negative.
    """
    return LogReal.from_log(log_bessel_i(nu, z))


def bessel_i_quadrature(n: int, tol=None, max_points: int = 1 << 16):
    """I_n(1) from 2 pi I_n(1) = int_{-pi}^{pi} exp(cos t) cos(n t) dt.

    The trapezoid rule is spectrally accurate for this periodic analytic
    integrand.  The node count doubles until two estimates agree to ``tol``
    (relative).  Working precision is raised by the number of digits the
    result lies below 1, estimated from the lower bound (1/2)^n / n!.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    rel = mpf(tol) if tol is not None else mpf(10) ** (-(ctx.dps - 2))
    magnitude = -(n * ctx.log(2) + ctx.loggamma(n + 1)) / ctx.log(10)
    extra = int(ctx.ceil(max(ctx.zero, -magnitude))) + 10
    with ctx.workdps(ctx.dps + extra):
        npts = 16
        while npts < 2 * n + 16:
            npts *= 2
        two_pi = 2 * ctx.pi

        def node_sum(count, start, step):
            s = ctx.zero
            for j in range(start, count, step):
                theta = two_pi * j / count
                s += ctx.exp(ctx.cos(theta)) * ctx.cos(n * theta)
            return s

        acc = node_sum(npts, 0, 1)
        estimate = acc / npts
        while True:
            if npts * 2 > max_points:
                break
            acc += node_sum(2 * npts, 1, 2)
            npts *= 2
            refined = acc / npts
            if abs(refined - estimate) <= rel * abs(refined):
                estimate = refined
                break
            estimate = refined
    return +estimate


def bessel_bounds(n: int, lam) -> tuple[LogReal, LogReal]:
    """Two-sided bound on I_n(2 sqrt(lam)).

    lam^(n/2) / n!  <=  I_n(2 sqrt(lam))  <=  lam^(n/2) / n! * (exp(lam) - 1) / lam.

    The upper bound relies on n! / (k! (n+k)!) <= 1 / (k+1)!, which holds
    for n >= 1; at n = 0 it fails once lam is below about 4.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    lam = mpf(lam)
    if not lam > 0:
        raise DomainError(f"lam must be positive, got {lam}")
    log_lower = mpf(n) / 2 * ctx.log(lam) - ctx.loggamma(n + 1)
    log_factor = ctx.log(ctx.expm1(lam) / lam)
    return LogReal.from_log(log_lower), LogReal.from_log(log_lower + log_factor)


def _check_rates(lam, mu):
    lam, mu = mpf(lam), mpf(mu)
    if not (lam > 0 and mu > 0):
        raise DomainError(f"Poisson rates must be positive, got lam={lam}, mu={mu}")
    return lam, mu


def log_skellam_pmf(n: int, lam, mu):
    lam, mu = _check_rates(lam, mu)
    n = int(n)
    return (
        -(lam + mu)
        + mpf(n) / 2 * (ctx.log(lam) - ctx.log(mu))
        + log_bessel_i(abs(n), 2 * ctx.sqrt(lam * mu))
    )


def skellam_pmf(n: int, lam, mu):
    """P(xi - eta = n) for independent xi ~ Poisson(lam), eta ~ Poisson(mu)."""
    return ctx.exp(log_skellam_pmf(n, lam, mu))
