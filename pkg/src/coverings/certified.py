"""One-sided floating point bounds on exact nonnegative reals.

A :class:`CertifiedValue` is a double together with a direction.  An
``UPPER`` value is guaranteed to be at least the exact quantity it stands
for, a ``LOWER`` value at most.  Every operation evaluates the exact
rational result of its float operands and rounds it outward, so the
guarantee survives arbitrary chains of operations without touching the
FPU rounding mode.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "Direction",
    "CertifiedValue",
    "UPPER",
    "LOWER",
    "round_directed",
    "nudge",
]


class Direction(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"

    @property
    def opposite(self) -> "Direction":
        return Direction.LOWER if self is Direction.UPPER else Direction.UPPER


UPPER = Direction.UPPER
LOWER = Direction.LOWER


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    return Fraction(float(x))


def round_directed(exact, direction: Direction) -> float:
    """Nearest double on the safe side of ``exact``.

    ``float(Fraction)`` is correctly rounded, so one step of ``nextafter``
    is enough whenever the conversion was inexact.
    """
    exact = _as_fraction(exact)
    f = float(exact)
    if Fraction(f) == exact:
        return f
    if direction is UPPER and Fraction(f) < exact:
        return math.nextafter(f, math.inf)
    if direction is LOWER and Fraction(f) > exact:
        return math.nextafter(f, -math.inf)
    return f


def nudge(values, direction: Direction):
    """Move correctly rounded results one ulp outward (scalar or array)."""
    target = np.inf if direction is UPPER else -np.inf
    return np.nextafter(values, target)


@dataclass(frozen=True)
class CertifiedValue:
    value: float
    direction: Direction

    @classmethod
    def exact(cls, x, direction: Direction) -> "CertifiedValue":
        """Certify an exactly known rational (int, Fraction or float)."""
        return cls(round_directed(x, direction), direction)

    @classmethod
    def infinity(cls) -> "CertifiedValue":
        return cls(math.inf, LOWER)

    @property
    def is_upper(self) -> bool:
        return self.direction is UPPER

    def __float__(self) -> float:
        return self.value

    def _combine(self, exact, direction: Direction) -> "CertifiedValue":
        return CertifiedValue(round_directed(exact, direction), direction)

    def _require_same(self, other: "CertifiedValue", op: str) -> None:
        if other.direction is not self.direction:
            raise ValueError(f"{op} needs operands of the same direction")

    def _finite(self) -> bool:
        return math.isfinite(self.value)

    def __add__(self, other):
        if isinstance(other, CertifiedValue):
            self._require_same(other, "addition")
            if not (self._finite() and other._finite()):
                return CertifiedValue(self.value + other.value, self.direction)
            exact = Fraction(self.value) + Fraction(other.value)
        else:
            exact = Fraction(self.value) + _as_fraction(other)
        return self._combine(exact, self.direction)

    __radd__ = __add__

    def __sub__(self, other):
        # bound - (opposite bound) keeps the bound's direction
        if isinstance(other, CertifiedValue):
            if other.direction is self.direction:
                raise ValueError("subtraction needs operands of opposite direction")
            exact = Fraction(self.value) - Fraction(other.value)
        else:
            exact = Fraction(self.value) - _as_fraction(other)
        return self._combine(exact, self.direction)

    def __mul__(self, other):
        # both factors are bounds on nonnegative quantities
        if isinstance(other, CertifiedValue):
            self._require_same(other, "multiplication")
            if not (self._finite() and other._finite()):
                return CertifiedValue(self.value * other.value, self.direction)
            exact = Fraction(self.value) * Fraction(other.value)
        else:
            c = _as_fraction(other)
            if c < 0:
                raise ValueError("scaling by a negative constant flips direction")
            if not self._finite():
                return CertifiedValue(self.value * float(c), self.direction)
            exact = Fraction(self.value) * c
        return self._combine(exact, self.direction)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CertifiedValue):
            if other.direction is self.direction:
                raise ValueError("division needs a divisor of opposite direction")
            divisor = other.value
        else:
            divisor = float(_as_fraction(other))
            if _as_fraction(other) < 0:
                raise ValueError("division by a negative constant flips direction")
        if divisor == 0:
            if self.direction is UPPER:
                return CertifiedValue(math.inf, UPPER)
            raise ZeroDivisionError("lower bound divided by a zero lower bound")
        if math.isinf(divisor):
            return CertifiedValue(0.0, self.direction)
        if not self._finite():
            return CertifiedValue(self.value, self.direction)
        d = Fraction(divisor) if isinstance(other, CertifiedValue) else _as_fraction(other)
        return self._combine(Fraction(self.value) / d, self.direction)

    def reciprocal(self) -> "CertifiedValue":
        """1/UPPER is a LOWER bound and vice versa."""
        flipped = self.direction.opposite
        if self.value == 0:
            if flipped is UPPER:
                return CertifiedValue(math.inf, UPPER)
            raise ZeroDivisionError("reciprocal of a zero upper bound")
        if math.isinf(self.value):
            return CertifiedValue(0.0, flipped)
        return self._combine(1 / Fraction(self.value), flipped)

    def root(self, k: int) -> "CertifiedValue":
        """k-th root, adjusted ulp by ulp until the bound is verified exactly."""
        if k < 1:
            raise ValueError("root index must be positive")
        if k == 1 or self.value == 0 or math.isinf(self.value):
            return self
        if self.value < 0:
            raise ValueError("root of a negative bound")
        x = Fraction(self.value)
        r = self.value ** (1.0 / k)
        if self.direction is UPPER:
            while Fraction(r) ** k < x:
                r = math.nextafter(r, math.inf)
            while r > 0 and Fraction(math.nextafter(r, 0.0)) ** k >= x:
                r = math.nextafter(r, 0.0)
        else:
            while Fraction(r) ** k > x:
                r = math.nextafter(r, 0.0)
            while Fraction(math.nextafter(r, math.inf)) ** k <= x:
                r = math.nextafter(r, math.inf)
        return CertifiedValue(r, self.direction)

    def __pow__(self, k: int) -> "CertifiedValue":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are certified")
        if not self._finite():
            return self if k else CertifiedValue(1.0, self.direction)
        return self._combine(Fraction(self.value) ** k, self.direction)

    def certifies(self, exact) -> bool:
        """True when this bound is on the correct side of ``exact``."""
        exact = _as_fraction(exact)
        if math.isinf(self.value):
            return self.value > 0 if self.direction is UPPER else self.value < 0
        if self.direction is UPPER:
            return Fraction(self.value) >= exact
        return Fraction(self.value) <= exact

    def __le__(self, other) -> bool:
        return self.value <= float(other)

    def __lt__(self, other) -> bool:
        return self.value < float(other)

    def __ge__(self, other) -> bool:
        return self.value >= float(other)

    def __gt__(self, other) -> bool:
        return self.value > float(other)

    def __repr__(self) -> str:
        return f"CertifiedValue({self.value!r}, {self.direction.name})"
