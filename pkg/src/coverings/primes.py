"""Segmented prime sieve and certified reductions over primes in an interval.

Intervals are half open, ``lo < p <= hi``.  Real thresholds such as e^t are
turned into exact integer cutoffs with high precision decimal arithmetic.

Per-prime terms are supplied as exact rationals (``Fraction`` or a
``(numerator, denominator)`` pair of ints).  Each term is converted to the
nearest double and pushed one ulp outward; sums are then formed with
``math.fsum`` (correctly rounded) and products with a fixed pairwise tree,
each level pushed outward again.  The result is deterministic.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from decimal import ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .certified import UPPER, CertifiedValue, Direction, nudge
from .residues import ResourceLimitError

__all__ = [
    "PrimeInterval",
    "exp_floor",
    "iter_prime_segments",
    "primes_in",
    "certified_prime_sum",
    "certified_prime_product",
    "certified_sum_of_terms",
    "certified_product_of_terms",
    "sieve_capacity",
    "segment_length",
]

EXP_DIGITS = 50
EXP_GUARD = Decimal("1e-6")


def sieve_capacity() -> int:
    return int(os.environ.get("COVERINGS_SIEVE_CAPACITY", 10**10))


def segment_length() -> int:
    """Number of odd integers per sieve segment."""
    return int(os.environ.get("COVERINGS_SIEVE_SEGMENT", 1 << 16))


def exp_floor(t) -> int:
    """floor(e^t), refusing if e^t lies within 1e-6 of an integer."""
    with localcontext() as ctx:
        ctx.prec = EXP_DIGITS
        x = Decimal(str(t)).exp()
        f = x.to_integral_value(rounding=ROUND_FLOOR)
        if x - f < EXP_GUARD or (f + 1) - x < EXP_GUARD:
            raise ValueError(f"e^{t} is too close to an integer to cut exactly")
    return int(f)


@dataclass(frozen=True)
class PrimeInterval:
    lo: int
    hi: int
    lo_label: str = ""
    hi_label: str = ""

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty interval with hi < lo: ({self.lo}, {self.hi}]")

    @classmethod
    def exp(cls, t_lo, t_hi) -> "PrimeInterval":
        return cls(exp_floor(t_lo), exp_floor(t_hi), f"e^{t_lo}", f"e^{t_hi}")

    @classmethod
    def reals(cls, lo, hi) -> "PrimeInterval":
        """Integer cutoffs for real endpoints (p > lo iff p > floor(lo))."""
        return cls(math.floor(lo), math.floor(hi), str(lo), str(hi))

    def __contains__(self, p: int) -> bool:
        return self.lo < p <= self.hi

    @property
    def is_empty(self) -> bool:
        return self.hi <= self.lo

    def label(self) -> str:
        return f"({self.lo_label or self.lo}, {self.hi_label or self.hi}]"

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "lo_label": self.lo_label, "hi_label": self.hi_label}


@lru_cache(maxsize=8)
def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def iter_prime_segments(interval: PrimeInterval, seg: int | None = None) -> Iterator[np.ndarray]:
    """Yield ascending arrays of the primes in ``interval``, one per segment."""
    lo, hi = interval.lo, interval.hi
    if hi > sieve_capacity():
        raise ResourceLimitError(f"sieve bound {hi} exceeds capacity {sieve_capacity()}")
    if hi <= lo or hi < 2:
        return
    seg = seg or segment_length()
    base = _small_primes(math.isqrt(hi))
    if lo < 2 <= hi:
        yield np.array([2], dtype=np.int64)
    # odd candidates start..hi
    start = max(lo + 1, 3)
    if start % 2 == 0:
        start += 1
    odd_base = base[base > 2]
    while start <= hi:
        stop = min(start + 2 * seg, hi + 1)  # exclusive
        n = (stop - start + 1) // 2
        mask = np.ones(n, dtype=bool)
        for p in odd_base:
            p = int(p)
            pp = p * p
            if pp >= stop:
                break
            first = max(pp, -(-start // p) * p)
            if first % 2 == 0:
                first += p
            if first >= stop:
                continue
            mask[(first - start) // 2 :: p] = False
        out = start + 2 * np.flatnonzero(mask).astype(np.int64)
        if out.size:
            yield out
        start += 2 * seg


@lru_cache(maxsize=32)
def _primes_cached(lo: int, hi: int) -> np.ndarray:
    parts = list(iter_prime_segments(PrimeInterval(lo, hi)))
    arr = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def primes_in(interval: PrimeInterval) -> np.ndarray:
    """All primes p with lo < p <= hi, ascending (read-only array)."""
    return _primes_cached(interval.lo, interval.hi)


# -- certified reductions ------------------------------------------------------

Term = Callable[[int], "Fraction | tuple[int, int]"]


def _term_floats(elements, term: Term, direction: Direction, positive=False) -> np.ndarray:
    vals = []
    for q in elements:
        t = term(int(q))
        if isinstance(t, tuple):
            num, den = t
        else:
            num, den = t.numerator, t.denominator
        if positive and num * den <= 0:
            raise ValueError(f"factor for {q} is not positive")
        vals.append(num / den)  # int true division is correctly rounded
    return nudge(np.asarray(vals, dtype=np.float64), direction)


def certified_sum_of_terms(elements, term: Term, direction: Direction) -> CertifiedValue:
    """Certified bound on sum(term(q) for q in elements)."""
    if len(elements) == 0:
        return CertifiedValue(0.0, direction)
    vals = _term_floats(elements, term, direction)
    return CertifiedValue(float(nudge(math.fsum(vals), direction)), direction)


def certified_product_of_terms(elements, factor: Term, direction: Direction) -> CertifiedValue:
    """Certified bound on prod(factor(q) for q in elements); factors must be positive."""
    if len(elements) == 0:
        return CertifiedValue(1.0, direction)
    vals = _term_floats(elements, factor, direction, positive=True)
    while vals.size > 1:
        if vals.size % 2:
            tail = vals[-1:]
            vals = np.concatenate([nudge(vals[:-1:2] * vals[1::2], direction), tail])
        else:
            vals = nudge(vals[0::2] * vals[1::2], direction)
    return CertifiedValue(float(vals[0]), direction)


def certified_prime_sum(interval: PrimeInterval, term: Term, direction: Direction = UPPER) -> CertifiedValue:
    return certified_sum_of_terms(primes_in(interval), term, direction)


def certified_prime_product(
    interval: PrimeInterval, factor: Term, direction: Direction = UPPER
) -> CertifiedValue:
    return certified_product_of_terms(primes_in(interval), factor, direction)
