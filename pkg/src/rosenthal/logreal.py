"""Signed log-magnitude reals.

A :class:`LogReal` stores ``sign * exp(log)``.  Series terms such as
n^p lam^n / n! at p in the thousands or millions are formed and summed in
this representation so nothing ever has to be materialised at full size.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import ctx, mpf

__all__ = ["LogReal", "LogSumAccumulator"]


@dataclass(frozen=True, eq=False)
class LogReal:
    sign: int
    log: object  # context mpf; ignored when sign == 0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls) -> "LogReal":
        return cls(0, ctx.ninf)

    @classmethod
    def one(cls) -> "LogReal":
        return cls(1, ctx.zero)

    @classmethod
    def from_log(cls, log, sign: int = 1) -> "LogReal":
        log = mpf(log)
        if sign == 0 or ctx.isinf(log) and log < 0:
            return cls.zero()
        return cls(sign, log)

    @classmethod
    def from_value(cls, x) -> "LogReal":
        x = mpf(x)
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, ctx.log(abs(x)))

    # -- queries ----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_mpf(self):
        if self.sign == 0:
            return ctx.zero
        return self.sign * ctx.exp(self.log)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log > 709.78:
            return self.sign * float("inf")
        return float(self.to_mpf())

    def __abs__(self) -> "LogReal":
        return LogReal(abs(self.sign), self.log)

    def __neg__(self) -> "LogReal":
        return LogReal(-self.sign, self.log)

    # -- arithmetic -------------------------------------------------------
    def __mul__(self, other) -> "LogReal":
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * other.sign, self.log + other.log)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogReal":
        other = _coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        if self.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * other.sign, self.log - other.log)

    def __rtruediv__(self, other) -> "LogReal":
        return _coerce(other) / self

    def __add__(self, other) -> "LogReal":
        other = _coerce(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.log >= other.log else (other, self)
        ratio = ctx.exp(lo.log - hi.log)
        if hi.sign == lo.sign:
            return LogReal(hi.sign, hi.log + ctx.log1p(ratio))
        if ratio == 1:
            return LogReal.zero()
        return LogReal(hi.sign, hi.log + ctx.log1p(-ratio))

    __radd__ = __add__

    def __sub__(self, other) -> "LogReal":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LogReal":
        return _coerce(other) + (-self)

    def __pow__(self, exponent) -> "LogReal":
        exponent = mpf(exponent)
        if self.sign == 0:
            if exponent > 0:
                return LogReal.zero()
            if exponent == 0:
                return LogReal.one()
            raise ZeroDivisionError("0 raised to a negative power")
        if self.sign < 0:
            if exponent != ctx.floor(exponent):
                raise ValueError("negative LogReal to a non-integer power")
            sign = -1 if int(exponent) % 2 else 1
            return LogReal(sign, self.log * exponent)
        return LogReal(1, self.log * exponent)

    def root(self, p) -> "LogReal":
        """Positive p-th root, computed as exp(log / p)."""
        if self.sign < 0:
            raise ValueError("root of a negative LogReal")
        if self.sign == 0:
            return self
        return LogReal(1, self.log / mpf(p))

    # -- comparison -------------------------------------------------------
    def _key(self):
        if self.sign == 0:
            return (0, 0)
        return (self.sign, self.sign * self.log)

    def __eq__(self, other) -> bool:
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return self.sign == other.sign
        return self.sign == other.sign and self.log == other.log

    def __lt__(self, other) -> bool:
        return self._key() < _coerce(other)._key()

    def __le__(self, other) -> bool:
        return self._key() <= _coerce(other)._key()

    def __gt__(self, other) -> bool:
        return self._key() > _coerce(other)._key()

    def __ge__(self, other) -> bool:
        return self._key() >= _coerce(other)._key()

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogReal(0)"
        return f"LogReal(sign={self.sign}, log={ctx.nstr(self.log, 15)})"


def _coerce(x) -> LogReal:
    if isinstance(x, LogReal):
        return x
    if isinstance(x, (int, float)) or isinstance(x, ctx.mpf):
        return LogReal.from_value(x)
    try:
        return LogReal.from_value(mpf(x))
    except (TypeError, ValueError) as exc:
        raise TypeError(f"cannot coerce {type(x).__name__} to LogReal") from exc


class LogSumAccumulator:
    """Running sum of LogReal terms.

    Terms are scaled by exp(-ref), where ``ref`` is the largest log
    magnitude seen so far, and the scaled values are summed with Neumaier
    compensation.  When a larger term arrives the running sum is rescaled.
    """

    __slots__ = ("_ref", "_sum", "_comp", "count")

    def __init__(self):
        self._ref = None
        self._sum = ctx.zero
        self._comp = ctx.zero
        self.count = 0

    def add(self, term: LogReal) -> None:
        self.count += 1
        if term.sign == 0:
            return
        if self._ref is None:
            self._ref = term.log
        elif term.log > self._ref:
            scale = ctx.exp(self._ref - term.log)
            self._sum *= scale
            self._comp *= scale
            self._ref = term.log
        x = term.sign * ctx.exp(term.log - self._ref)
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._comp += (self._sum - t) + x
        else:
            self._comp += (x - t) + self._sum
        self._sum = t

    @property
    def value(self) -> LogReal:
        if self._ref is None:
            return LogReal.zero()
        total = self._sum + self._comp
        if total == 0:
            return LogReal.zero()
        return LogReal(1 if total > 0 else -1, self._ref + ctx.log(abs(total)))
