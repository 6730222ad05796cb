"""Multiplicative bases, factorization over a base, and the restricted
arithmetic functions built on it.

A base is a set of pairwise coprime integers > 1, given either as an
explicit list or as all primes in ``(primes_above, upto]``.  An integer is
factorized by the base when it is a product of powers of base elements,
each power within the element's exponent cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping

from sympy import factorint

from .certified import UPPER, CertifiedValue

__all__ = [
    "BaseDescriptor",
    "Factorization",
    "NotFactorized",
    "factorize_over_base",
    "lambda_k",
    "omega_prime",
    "tail_sum_S",
    "tail_sum_S_exact",
    "tail_sum_T",
    "tail_sum_T_exact",
    "eulerian_numbers",
    "tail_numerator_poly",
]


@dataclass(frozen=True)
class BaseDescriptor:
    """Either ``elements`` or ``primes_above`` is set, never both.

    ``v`` is the exponent cap: ``None`` for unbounded, an int shared by all
    elements, or a mapping from element to cap (missing elements unbounded).
    """

    elements: tuple[int, ...] | None = None
    primes_above: int | None = None
    upto: int | None = None
    v: int | Mapping[int, int] | None = None
    _caps: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if (self.elements is None) == (self.primes_above is None):
            raise ValueError("give exactly one of elements / primes_above")
        if self.elements is not None:
            els = tuple(int(q) for q in self.elements)
            if any(q < 2 for q in els):
                raise ValueError("base elements must exceed 1")
            for a, b in combinations(els, 2):
                if math.gcd(a, b) != 1:
                    raise ValueError(f"base elements {a} and {b} are not coprime")
            object.__setattr__(self, "elements", tuple(sorted(els)))
        v = self.v
        if isinstance(v, Mapping):
            caps = tuple(sorted((int(q), int(c)) for q, c in v.items()))
            if any(c < 1 for _, c in caps):
                raise ValueError("exponent caps must be >= 1")
            object.__setattr__(self, "_caps", caps)
        elif v is not None and int(v) < 1:
            raise ValueError("exponent cap must be >= 1")

    @classmethod
    def primes(cls, above: int, upto: int | None = None, v=None) -> "BaseDescriptor":
        return cls(primes_above=int(above), upto=upto, v=v)

    @classmethod
    def explicit(cls, elements, v=None) -> "BaseDescriptor":
        return cls(elements=tuple(elements), v=v)

    @property
    def is_prime_interval(self) -> bool:
        return self.primes_above is not None

    def cap(self, q: int) -> int | None:
        if isinstance(self.v, Mapping):
            return dict(self._caps).get(q)
        return None if self.v is None else int(self.v)

    def contains(self, q: int) -> bool:
        if self.elements is not None:
            return q in self.elements
        from sympy import isprime

        return (
            q > self.primes_above
            and (self.upto is None or q <= self.upto)
            and isprime(q)
        )

    def to_dict(self) -> dict:
        if isinstance(self.v, Mapping):
            v = {str(q): c for q, c in self._caps}
        else:
            v = self.v
        if self.elements is not None:
            return {"elements": list(self.elements), "v": v}
        return {"primes_above": self.primes_above, "upto": self.upto, "v": v}

    @classmethod
    def from_dict(cls, obj: dict) -> "BaseDescriptor":
        v = obj.get("v")
        if isinstance(v, dict):
            v = {int(q): int(c) for q, c in v.items()}
        if "elements" in obj:
            return cls(elements=tuple(obj["elements"]), v=v)
        return cls(primes_above=obj["primes_above"], upto=obj.get("upto"), v=v)


@dataclass(frozen=True)
class Factorization:
    exponents: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    def value(self) -> int:
        return math.prod(q**e for q, e in self.exponents)

    def __len__(self) -> int:
        return len(self.exponents)

    def __bool__(self) -> bool:
        return True

    def __eq__(self, other):
        if isinstance(other, dict):
            return self.as_dict() == other
        if isinstance(other, Factorization):
            return self.exponents == other.exponents
        return NotImplemented

    def __hash__(self):
        return hash(self.exponents)


@dataclass(frozen=True)
class NotFactorized:
    """Outcome for integers outside the base.

    ``reason`` is ``"foreign_factor"`` or ``"exponent_cap"``.
    """

    reason: str
    witness: int

    def __bool__(self) -> bool:
        return False


def factorize_over_base(m: int, base: BaseDescriptor) -> Factorization | NotFactorized:
    if m < 1:
        raise ValueError("m must be positive")
    exps: dict[int, int] = {}
    if base.elements is not None:
        rest = m
        for q in base.elements:
            e = 0
            while rest % q == 0:
                rest //= q
                e += 1
            if e:
                exps[q] = e
        if rest != 1:
            return NotFactorized("foreign_factor", rest)
    else:
        for p, e in factorint(m).items():
            if p <= base.primes_above or (base.upto is not None and p > base.upto):
                return NotFactorized("foreign_factor", p)
            exps[p] = e
    for q, e in exps.items():
        cap = base.cap(q)
        if cap is not None and e > cap:
            return NotFactorized("exponent_cap", q)
    return Factorization(tuple(sorted(exps.items())))


def lambda_k(m: int, k: int, base: BaseDescriptor) -> int:
    """Number of k-tuples of base-factorized integers whose lcm is m."""
    if k < 1:
        raise ValueError("k must be positive")
    f = factorize_over_base(m, base)
    if not f:
        return 0
    return math.prod((e + 1) ** k - e**k for _, e in f.exponents)


def omega_prime(m: int, base: BaseDescriptor) -> int | None:
    """Distinct base elements dividing m; ``None`` when m is not factorized."""
    f = factorize_over_base(m, base)
    if not f:
        return None
    return len(f)


# -- tail sums over powers of a base element --------------------------------


@lru_cache(maxsize=None)
def eulerian_numbers(k: int) -> tuple[int, ...]:
    """Coefficients of the Eulerian polynomial A_k (length k)."""
    return tuple(
        sum((-1) ** j * math.comb(k + 1, j) * (i + 1 - j) ** k for j in range(i + 1))
        for i in range(k)
    )


@lru_cache(maxsize=None)
def tail_numerator_poly(k: int) -> tuple[int, ...]:
    """Integer coefficients (highest degree first) of N_k with

        sum_{j>=1} ((j+1)^k - j^k) / q^j = N_k(q) / (q-1)^k.

    Uses sum_{j>=0} ((j+1)^k - j^k) x^j = A_k(x) / (1-x)^k.
    """
    E = eulerian_numbers(k)
    coeffs = [0] * (k + 1)  # coeffs[d] multiplies q^d
    for i, e in enumerate(E):
        coeffs[k - i] += e
    for d in range(k + 1):
        coeffs[d] -= math.comb(k, d) * (-1) ** (k - d)
    assert coeffs[k] == 0
    return tuple(reversed(coeffs[:k]))


def _horner(coeffs, q: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * q + c
    return acc


def _check_base_element(q: int) -> None:
    if q < 2:
        raise ValueError(f"tail sums need q >= 2, got {q}")


def tail_sum_S_exact(q: int, v: int | None = None) -> Fraction:
    """sum_{j=1}^{v} q^-j; v=None means the full geometric series 1/(q-1)."""
    _check_base_element(q)
    if v is None:
        return Fraction(1, q - 1)
    return Fraction(q**v - 1, q**v * (q - 1))


def tail_sum_S(q: int, v: int | None = None) -> CertifiedValue:
    return CertifiedValue.exact(tail_sum_S_exact(q, v), UPPER)


def tail_sum_T_exact(q: int, v: int | None, k: int) -> Fraction:
    """sum_{j=1}^{v} ((j+1)^k - j^k) / q^j, closed form when v is None."""
    _check_base_element(q)
    if k < 1:
        raise ValueError("k must be positive")
    if v is None:
        return Fraction(_horner(tail_numerator_poly(k), q), (q - 1) ** k)
    num = sum(((j + 1) ** k - j**k) * q ** (v - j) for j in range(1, v + 1))
    return Fraction(num, q**v)


def tail_sum_T(q: int, v: int | None, k: int) -> CertifiedValue:
    return CertifiedValue.exact(tail_sum_T_exact(q, v, k), UPPER)
