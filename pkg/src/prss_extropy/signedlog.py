"""Sign/log-magnitude numbers for overflow-safe products."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["SignedLogValue"]


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``sign`` is one of -1, 0, +1; zero is represented with
    ``log_magnitude = -inf``.
    """

    sign: int
    log_magnitude: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0 and self.log_magnitude != -math.inf:
            object.__setattr__(self, "log_magnitude", -math.inf)
        if self.sign != 0 and math.isnan(self.log_magnitude):
            raise ValueError("log_magnitude is NaN")

    @classmethod
    def from_float(cls, x: float) -> SignedLogValue:
        x = float(x)
        if math.isnan(x):
            raise ValueError("cannot represent NaN")
        if x == 0.0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_magnitude: float, sign: int = 1) -> SignedLogValue:
        return cls(sign, log_magnitude)

    @classmethod
    def one(cls) -> SignedLogValue:
        return cls(1, 0.0)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf

    __float__ = to_float

    def __mul__(self, other: SignedLogValue | float) -> SignedLogValue:
        if not isinstance(other, SignedLogValue):
            other = SignedLogValue.from_float(other)
        sign = self.sign * other.sign
        if sign == 0:
            return SignedLogValue(0, -math.inf)
        return SignedLogValue(sign, self.log_magnitude + other.log_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other: SignedLogValue | float) -> SignedLogValue:
        if not isinstance(other, SignedLogValue):
            other = SignedLogValue.from_float(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLogValue")
        if self.sign == 0:
            return self
        return SignedLogValue(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __pow__(self, k: int) -> SignedLogValue:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        if k == 0:
            return SignedLogValue.one()
        if self.sign == 0:
            return self
        sign = self.sign if k % 2 else 1
        return SignedLogValue(sign, k * self.log_magnitude)

    def __neg__(self) -> SignedLogValue:
        return SignedLogValue(-self.sign, self.log_magnitude)

    def __abs__(self) -> SignedLogValue:
        return SignedLogValue(abs(self.sign), self.log_magnitude)

    def __lt__(self, other: SignedLogValue) -> bool:
        return self._key() < other._key()

    def __le__(self, other: SignedLogValue) -> bool:
        return self._key() <= other._key()

    def _key(self) -> tuple[int, float]:
        # orders by value: negatives by decreasing magnitude, then zero, then positives
        if self.sign > 0:
            return (1, self.log_magnitude)
        if self.sign < 0:
            return (-1, -self.log_magnitude)
        return (0, 0.0)

    def to_dict(self) -> dict:
        return {"sign": self.sign, "log_magnitude": self.log_magnitude, "value": self.to_float()}
