"""Signed numbers stored as ``sign * exp(ln)``.

Enough arithmetic for products, quotients and powers of constants that
over- or underflow doubles by thousands of orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DECIMAL_LIMIT = 700.0


@dataclass(frozen=True, order=False)
class LogValue:
    sign: int
    ln: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if self.sign == 0:
            object.__setattr__(self, "ln", -math.inf)
        elif math.isnan(self.ln):
            raise ValueError("ln magnitude is NaN")

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0:
            return cls(0)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_ln(cls, ln: float, sign: int = 1) -> "LogValue":
        return cls(sign, ln)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.ln > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.ln)

    @property
    def log10(self) -> float:
        return self.ln / math.log(10.0)

    def _coerce(self, other) -> "LogValue":
        return other if isinstance(other, LogValue) else LogValue.from_float(float(other))

    def __mul__(self, other):
        o = self._coerce(other)
        if self.sign == 0 or o.sign == 0:
            return LogValue(0)
        return LogValue(self.sign * o.sign, self.ln + o.ln)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.sign == 0:
            raise ZeroDivisionError("LogValue division by zero")
        if self.sign == 0:
            return LogValue(0)
        return LogValue(self.sign * o.sign, self.ln - o.ln)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: float):
        if self.sign == 0:
            if k > 0:
                return LogValue(0)
            raise ZeroDivisionError("0 to a non-positive power")
        if self.sign < 0 and not float(k).is_integer():
            raise ValueError("fractional power of a negative LogValue")
        sign = -1 if (self.sign < 0 and int(k) % 2) else 1
        return LogValue(sign, self.ln * k)

    def _key(self):
        if self.sign == 0:
            return (0, 0.0)
        return (self.sign, self.sign * self.ln)

    def __lt__(self, other):
        return self._key() < self._coerce(other)._key()

    def __le__(self, other):
        return self._key() <= self._coerce(other)._key()

    def __gt__(self, other):
        return self._key() > self._coerce(other)._key()

    def __ge__(self, other):
        return self._key() >= self._coerce(other)._key()

    def decimal(self, digits: int = 12):
        """Decimal string, or ``None`` when ``|ln| >= 700``."""
        if self.sign == 0:
            return "0"
        if abs(self.ln) >= DECIMAL_LIMIT:
            return None
        return f"{float(self):.{digits}g}"

    def to_dict(self) -> dict:
        return {"sign": self.sign, "ln": self.ln if self.sign else None}


def log1mexp(x: float) -> float:
    """``log(1 - exp(x))`` for ``x < 0`` without cancellation."""
    if x >= 0:
        raise ValueError("log1mexp needs x < 0")
    if x > -math.log(2.0):
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))
