import math
from fractions import Fraction

import numpy as np
import pytest
from sympy import isprime, primepi

from coverings.certified import LOWER, UPPER
from coverings.primes import (
    PrimeInterval,
    certified_prime_product,
    certified_prime_sum,
    exp_floor,
    iter_prime_segments,
    primes_in,
)
from coverings.residues import ResourceLimitError


def trial_division_primes(lo, hi):
    return [n for n in range(lo + 1, hi + 1) if n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))]


def test_examples():
    assert primes_in(PrimeInterval(10, 30)).tolist() == [11, 13, 17, 19, 23, 29]
    assert len(primes_in(PrimeInterval(19, 403))) == 71 == primepi(403) - primepi(19)
    assert len(primes_in(PrimeInterval(7, 7))) == 0


@pytest.mark.parametrize("lo,hi", [(0, 2), (1, 3), (2, 3), (0, 100), (97, 1000), (0, 10**5), (65521, 70001)])
def test_sieve_matches_trial_division(lo, hi):
    assert primes_in(PrimeInterval(lo, hi)).tolist() == trial_division_primes(lo, hi)


def test_small_segments_agree():
    iv = PrimeInterval(1000, 20000)
    parts = np.concatenate(list(iter_prime_segments(iv, seg=37)))
    assert parts.tolist() == primes_in(iv).tolist()


def test_boundaries_exclusive_inclusive():
    assert 23 not in primes_in(PrimeInterval(23, 29)).tolist()
    assert 29 in primes_in(PrimeInterval(23, 29)).tolist()
    assert primes_in(PrimeInterval(22, 23)).tolist() == [23]


def test_capacity_refusal(monkeypatch):
    monkeypatch.setenv("COVERINGS_SIEVE_CAPACITY", "1000")
    with pytest.raises(ResourceLimitError):
        list(iter_prime_segments(PrimeInterval(0, 5000)))


def test_large_window():
    ps = primes_in(PrimeInterval(10**9, 10**9 + 1000))
    assert ps.tolist() == [n for n in range(10**9 + 1, 10**9 + 1001) if isprime(n)]


def test_exp_floor():
    assert exp_floor(6) == 403
    assert exp_floor(7) == 1096
    assert exp_floor(11) == 59874
    assert exp_floor(15) == 3269017
    for t in range(1, 15):
        assert exp_floor(t) == math.floor(math.exp(t))
    with pytest.raises(ValueError):
        exp_floor(0)
    iv = PrimeInterval.exp(6, 7)
    assert (iv.lo, iv.hi) == (403, 1096)


def test_reals_interval():
    iv = PrimeInterval.reals(19.5, 403.4)
    assert (iv.lo, iv.hi) == (19, 403)


def test_empty_reductions():
    iv = PrimeInterval(7, 7)
    assert certified_prime_sum(iv, lambda q: Fraction(1, q)).value == 0
    assert certified_prime_product(iv, lambda q: Fraction(q + 1, q)).value == 1


@pytest.mark.parametrize("hi", [100, 403, 2000, 10**4])
def test_direction_soundness(hi):
    iv = PrimeInterval(19, hi)
    ps = [int(p) for p in primes_in(iv)]
    cube = lambda q: (1, (q - 1) ** 3)
    exact_sum = sum(Fraction(1, (p - 1) ** 3) for p in ps)
    assert certified_prime_sum(iv, cube, UPPER).certifies(exact_sum)
    assert certified_prime_sum(iv, cube, LOWER).certifies(exact_sum)

    fac = lambda q: (q + 1, q - 1)  # 1 + 2/(q-1)
    exact_prod = math.prod(Fraction(p + 1, p - 1) for p in ps)
    up = certified_prime_product(iv, fac, UPPER)
    lo = certified_prime_product(iv, fac, LOWER)
    assert up.certifies(exact_prod) and lo.certifies(exact_prod)
    assert (up.value - lo.value) / up.value < 1e-11

    shrink = lambda q: (q - 1, q)  # factors below 1
    exact_small = math.prod(Fraction(p - 1, p) for p in ps)
    assert certified_prime_product(iv, shrink, UPPER).certifies(exact_small)
    assert certified_prime_product(iv, shrink, LOWER).certifies(exact_small)


def test_sum_example_19_403():
    iv = PrimeInterval(19, 403)
    exact = sum(Fraction(1, (int(p) - 1) ** 3) for p in primes_in(iv))
    got = certified_prime_sum(iv, lambda q: Fraction(1, (q - 1) ** 3), UPPER)
    assert got.certifies(exact)
    assert got.value - float(exact) <= 4 * math.ulp(float(exact))


def test_determinism():
    iv = PrimeInterval.exp(10, 11)
    f = lambda q: (q + 1, q - 1)
    assert certified_prime_product(iv, f).value == certified_prime_product(iv, f).value


def test_nonpositive_factor_rejected():
    with pytest.raises(ValueError):
        certified_prime_product(PrimeInterval(2, 10), lambda q: (0, 1))
