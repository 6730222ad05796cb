import math
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coverings.base import (
    BaseDescriptor,
    NotFactorized,
    eulerian_numbers,
    factorize_over_base,
    lambda_k,
    omega_prime,
    tail_sum_S,
    tail_sum_S_exact,
    tail_sum_T,
    tail_sum_T_exact,
)
from coverings.primes import PrimeInterval, primes_in

ABOVE19 = BaseDescriptor.primes(19)
B2357 = BaseDescriptor.explicit([2, 3, 5, 7])
B495 = BaseDescriptor.explicit([4, 9, 5])


def brute_lambda(m, k, base):
    """Count k-tuples of factorized divisors of m whose lcm is m."""
    divs = [d for d in range(1, m + 1) if m % d == 0 and factorize_over_base(d, base)]
    return sum(1 for t in product(divs, repeat=k) if math.lcm(*t) == m)


def test_factorize_examples():
    assert factorize_over_base(667, ABOVE19) == {23: 1, 29: 1}
    f = factorize_over_base(4, ABOVE19)
    assert isinstance(f, NotFactorized) and f.reason == "foreign_factor"
    assert factorize_over_base(36, BaseDescriptor.explicit([4, 9])) == {4: 1, 9: 1}
    assert factorize_over_base(1, ABOVE19) == {}


def test_factorize_exponent_cap():
    capped = BaseDescriptor.primes(19, v=1)
    f = factorize_over_base(23**2, capped)
    assert not f and f.reason == "exponent_cap"
    assert factorize_over_base(23 * 29, capped) == {23: 1, 29: 1}
    per = BaseDescriptor.explicit([2, 3], v={2: 3})
    assert factorize_over_base(8 * 27, per) == {2: 3, 3: 3}
    assert factorize_over_base(16, per).reason == "exponent_cap"


def test_factorization_reconstructs():
    for m in range(1, 500):
        f = factorize_over_base(m, B2357)
        if f:
            assert f.value() == m


def test_base_validation():
    with pytest.raises(ValueError):
        BaseDescriptor.explicit([4, 6])
    with pytest.raises(ValueError):
        BaseDescriptor.explicit([1, 3])
    with pytest.raises(ValueError):
        BaseDescriptor.primes(19, v=0)
    with pytest.raises(ValueError):
        BaseDescriptor()


def test_base_serialization():
    for b in (ABOVE19, BaseDescriptor.primes(19, upto=1000, v=2), B495,
              BaseDescriptor.explicit([2, 3], v={2: 3})):
        assert BaseDescriptor.from_dict(b.to_dict()) == b
    assert ABOVE19.to_dict() == {"primes_above": 19, "upto": None, "v": None}


def test_lambda_examples():
    assert lambda_k(23, 3, ABOVE19) == 7
    for k in (1, 2, 5):
        assert lambda_k(1, k, ABOVE19) == 1
        assert lambda_k(1, k, B495) == 1
    assert lambda_k(6, 2, BaseDescriptor.explicit([2, 3])) == 9
    assert brute_lambda(6, 2, BaseDescriptor.explicit([2, 3])) == 9
    assert lambda_k(4, 3, ABOVE19) == 0


@pytest.mark.parametrize("base", [B2357, B495], ids=["2357", "495"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_lambda_matches_tuple_enumeration(base, k):
    for m in range(1, 201):
        assert lambda_k(m, k, base) == brute_lambda(m, k, base), m


def test_lambda_one_and_divisor_bound():
    for m in range(1, 300):
        if factorize_over_base(m, B2357):
            assert lambda_k(m, 1, B2357) == 1
            d = sum(1 for x in range(1, m + 1) if m % x == 0)
            for k in (2, 3):
                assert lambda_k(m, k, B2357) <= d**k


def test_restricted_multiplicativity():
    rng = random.Random(7)
    for base in (B2357, B495, ABOVE19):
        els = list(base.elements) if base.elements else [23, 29, 31, 37, 41]
        checked = 0
        while checked < 200:
            m = math.prod(q ** rng.randint(0, 3) for q in els)
            n = math.prod(q ** rng.randint(0, 3) for q in els)
            if math.gcd(m, n) != 1:
                continue
            k = rng.randint(1, 4)
            assert lambda_k(m * n, k, base) == lambda_k(m, k, base) * lambda_k(n, k, base)
            checked += 1


def test_omega_prime():
    assert omega_prime(667, ABOVE19) == 2
    assert omega_prime(1, ABOVE19) == 0
    assert omega_prime(8, BaseDescriptor.explicit([2])) == 1
    assert omega_prime(36, BaseDescriptor.explicit([4, 9])) == 2
    assert omega_prime(4, ABOVE19) is None


# -- tail sums -------------------------------------------------------------------


def test_tail_S_examples():
    assert tail_sum_S_exact(2) == 1
    assert tail_sum_S_exact(2, 2) == Fraction(3, 4)
    s = tail_sum_S(23)
    assert s.certifies(Fraction(1, 22))
    assert s.value - 1 / 22 <= math.ulp(1 / 22)
    with pytest.raises(ValueError):
        tail_sum_S(1)


def test_tail_T_examples():
    assert tail_sum_T_exact(2, None, 3) == 25
    assert tail_sum_T_exact(5, None, 3) == Fraction(83, 32)
    assert 2 * tail_sum_T_exact(5, None, 3) <= Fraction(14, 5 - 3)
    for q in (2, 3, 7, 101):
        assert tail_sum_T_exact(q, None, 1) == tail_sum_S_exact(q)
    with pytest.raises(ValueError):
        tail_sum_T(1, None, 3)


def test_eulerian_numbers():
    assert eulerian_numbers(1) == (1,)
    assert eulerian_numbers(3) == (1, 4, 1)
    assert eulerian_numbers(4) == (1, 11, 11, 1)


def partial_T(q, n, k):
    return sum(Fraction((j + 1) ** k - j**k, q**j) for j in range(1, n + 1))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 6])
@pytest.mark.parametrize("q", [2, 3, 5, 23, 101])
def test_tail_T_closed_form_vs_partial_sums(q, k):
    closed = tail_sum_T_exact(q, None, k)
    prev = Fraction(0)
    for n in range(1, 61):
        cur = partial_T(q, n, k)
        assert cur > prev
        assert tail_sum_T_exact(q, n, k) == cur
        assert tail_sum_T(q, None, k).certifies(cur)
        prev = cur
    # the remaining tail beyond j = 400 is negligible at this tolerance
    far = partial_T(q, 400, k)
    assert abs(float(closed - far)) <= 1e-12 * float(closed)


def test_tail_S_finite_matches_series():
    for q in (2, 3, 10, 23):
        for v in range(1, 8):
            assert tail_sum_S_exact(q, v) == sum(Fraction(1, q**j) for j in range(1, v + 1))


def test_simplified_tail_bounds_hold_on_used_primes():
    # sum_{j>=0} ((j+1)^3 - j^3)/q^j <= 1 + 7/(q-3), checked rather than assumed
    for p in primes_in(PrimeInterval(3, 10**4)):
        p = int(p)
        full = 1 + tail_sum_T_exact(p, None, 3)
        assert full <= 1 + Fraction(7, p - 3)
        assert 1 + 2 * tail_sum_T_exact(p, None, 3) <= 1 + Fraction(14, p - 3)


@given(st.integers(2, 10**6), st.integers(1, 5))
def test_finite_caps_below_closed_form(q, k):
    assert tail_sum_T_exact(q, 3, k) < tail_sum_T_exact(q, None, k)
