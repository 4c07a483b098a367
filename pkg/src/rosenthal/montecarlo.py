"""Monte-Carlo oracle for the moment constants.

Random numbers come from numpy's PCG64 generator.  Independent streams are
obtained by ``numpy.random.SeedSequence(seed).spawn(k)``: child ``i`` drives
stream ``i`` (for example xi and eta of a Skellam pair are children 0 and 1).

Poisson variates are drawn by inversion of the cumulative distribution for
lam <= 30 and by Hormann's transformed rejection (PTRS) above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import ctx, mpf
from .errors import DomainError
from .series import S_of_p, eval_F3

__all__ = [
    "MCConfig",
    "MomentEstimate",
    "make_rng",
    "spawn_rngs",
    "sample_poisson",
    "sample_poisson_array",
    "sample_skellam",
    "empirical_abs_moment",
    "exact_abs_moment",
    "Summand",
    "RosenthalReport",
    "rosenthal_check",
]

INVERSION_MAX = 30.0


@dataclass(frozen=True)
class MCConfig:
    samples: int = 10**6
    seed: int = 0
    lam: float = 0.5
    mu: float = 0.5
    p: float = 5.0

    def __post_init__(self):
        if int(self.samples) < 10**4:
            raise DomainError(f"samples must be >= 10^4, got {self.samples}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not (self.lam > 0 and self.mu > 0):
            raise DomainError(f"rates must be positive, got lam={self.lam}, mu={self.mu}")
        if not self.p >= 2:
            raise DomainError(f"p must be >= 2, got {self.p}")


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    stderr: float
    samples: int

    def within(self, target, k: float = 4.0) -> bool:
        return abs(self.mean - float(target)) <= k * self.stderr


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def spawn_rngs(seed: int, count: int) -> list:
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def _check_lam(lam) -> float:
    lam = float(lam)
    if not lam > 0:
        raise DomainError(f"Poisson rate must be positive, got {lam}")
    return lam


def _cdf_table(lam: float) -> np.ndarray:
    kmax = int(lam + 40 * math.sqrt(lam) + 50)
    pmf = np.empty(kmax + 1)
    pmf[0] = math.exp(-lam)
    for k in range(1, kmax + 1):
        pmf[k] = pmf[k - 1] * lam / k
    return np.cumsum(pmf)


def _ptrs(lam: float, rng: np.random.Generator) -> int:
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2)
    while True:
        U = rng.random() - 0.5
        V = rng.random()
        us = 0.5 - abs(U)
        k = math.floor((2 * a / us + b) * U + lam + 0.43)
        if us >= 0.07 and V <= vr:
            return k
        if k < 0 or (us < 0.013 and V > us):
            continue
        if (math.log(V) + math.log(invalpha) - math.log(a / (us * us) + b)
                <= -lam + k * loglam - math.lgamma(k + 1)):
            return k


def sample_poisson(lam, rng: np.random.Generator) -> int:
    """One Poisson(lam) variate; advances ``rng``."""
    lam = _check_lam(lam)
    if lam > INVERSION_MAX:
        return _ptrs(lam, rng)
    u = rng.random()
    cdf = _cdf_table(lam)
    k = int(np.searchsorted(cdf, u, side="left"))
    return min(k, len(cdf) - 1)


def sample_poisson_array(lam, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` Poisson(lam) variates as an int64 array."""
    lam = _check_lam(lam)
    if lam > INVERSION_MAX:
        return np.fromiter((_ptrs(lam, rng) for _ in range(size)), dtype=np.int64, count=size)
    cdf = _cdf_table(lam)
    u = rng.random(size)
    k = np.searchsorted(cdf, u, side="left")
    return np.minimum(k, len(cdf) - 1).astype(np.int64)


def sample_skellam(lam, mu, size: int, seed: int) -> np.ndarray:
    """xi - eta with xi ~ Poisson(lam), eta ~ Poisson(mu) on streams 0 and 1."""
    r_xi, r_eta = spawn_rngs(seed, 2)
    return sample_poisson_array(lam, size, r_xi) - sample_poisson_array(mu, size, r_eta)


def _estimate(values: np.ndarray) -> MomentEstimate:
    n = values.size
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MomentEstimate(mean, stderr, n)


def empirical_abs_moment(cfg: MCConfig) -> MomentEstimate:
    """Monte-Carlo estimate of E|xi - eta|^p for independent Poisson xi, eta."""
    diff = sample_skellam(cfg.lam, cfg.mu, int(cfg.samples), cfg.seed)
    return _estimate(np.abs(diff).astype(np.float64) ** float(cfg.p))


def exact_abs_moment(p, lam, mu):
    """E|xi - eta|^p = exp(-(lam + mu)) F3(p; sqrt(lam/mu), 2 sqrt(lam mu))."""
    lam, mu = mpf(lam), mpf(mu)
    f3 = eval_F3(p, ctx.sqrt(lam / mu), 2 * ctx.sqrt(lam * mu)).mpf
    return ctx.exp(-(lam + mu)) * f3


# ---------------------------------------------------------------------------
# Empirical Rosenthal inequality
# ---------------------------------------------------------------------------

_KINDS = ("two_point", "sym_poisson", "uniform")


@dataclass(frozen=True)
class Summand:
    """A symmetric summand: +-c, tau1 - tau2 with rate c, or uniform on [-c, c]."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown summand kind {self.kind!r}; choose from {_KINDS}")
        if not self.param >= 0:
            raise DomainError(f"summand parameter must be >= 0, got {self.param}")

    def variance(self) -> float:
        c = float(self.param)
        return {"two_point": c * c, "sym_poisson": 2 * c, "uniform": c * c / 3}[self.kind]

    def abs_moment(self, p) -> float:
        c = float(self.param)
        if c == 0:
            return 0.0
        if self.kind == "two_point":
            return c ** float(p)
        if self.kind == "uniform":
            return c ** float(p) / (float(p) + 1)
        return float(exact_abs_moment(p, c, c))

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        c = float(self.param)
        if c == 0:
            return np.zeros(size)
        if self.kind == "two_point":
            return c * (2.0 * rng.integers(0, 2, size) - 1.0)
        if self.kind == "uniform":
            return rng.uniform(-c, c, size)
        first = sample_poisson_array(c, size, rng)
        return (first - sample_poisson_array(c, size, rng)).astype(np.float64)


@dataclass(frozen=True)
class RosenthalReport:
    n: int
    p: float
    norm: MomentEstimate  # of ||sum xi||_p
    denominator: float
    ratio: float
    ratio_stderr: float
    constant: float
    passed: bool


def rosenthal_check(n: int, distribution_menu: Sequence[Summand], p, cfg: MCConfig) -> RosenthalReport:
    """Estimate ||sum xi_i||_p / max(||sum xi_i||_2, (sum ||xi_i||_p^p)^(1/p)).

    The menu gives the summands directly when it has n entries, one summand
    repeated n times when it has one entry, and otherwise a seeded random
    draw of n entries.  The check passes when the ratio does not exceed
    S(p) by more than four standard errors.
    """
    if isinstance(n, bool) or int(n) < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    p = float(p)
    if p < 4:
        raise DomainError(f"p must be >= 4, got {p}")
    menu = list(distribution_menu)
    if not menu:
        raise DomainError("empty distribution menu")
    streams = spawn_rngs(cfg.seed, n + 1)
    if len(menu) == n:
        summands = menu
    elif len(menu) == 1:
        summands = menu * n
    else:
        picks = streams[n].integers(0, len(menu), n)
        summands = [menu[int(i)] for i in picks]

    var = sum(s.variance() for s in summands)
    pth = sum(s.abs_moment(p) for s in summands)
    if var == 0 or pth == 0:
        raise DomainError("all summands are identically zero")
    denominator = max(math.sqrt(var), pth ** (1 / p))

    size = int(cfg.samples)
    total = np.zeros(size)
    for s, rng in zip(summands, streams):
        total += s.sample(size, rng)
    est = _estimate(np.abs(total) ** p)
    norm = est.mean ** (1 / p)
    norm_se = norm / (p * est.mean) * est.stderr if est.mean > 0 else 0.0
    ratio = norm / denominator
    ratio_se = norm_se / denominator
    constant = float(S_of_p(p))
    return RosenthalReport(
        n=n,
        p=p,
        norm=MomentEstimate(norm, norm_se, size),
        denominator=denominator,
        ratio=ratio,
        ratio_stderr=ratio_se,
        constant=constant,
        passed=ratio <= constant + 4 * ratio_se,
    )
