"""Certified reductions over primes in an interval.

Run: python demos/03_prime_products.py
"""
from fractions import Fraction

from coverings import PrimeInterval, certified_prime_product, hough_quick_check, primes_in
from coverings.certified import LOWER, UPPER

# %% Blocks (e^(6+i), e^(7+i)] and the product of 1 + 2/(p-1) over each
for i in range(9):
    iv = PrimeInterval.exp(6 + i, 7 + i)
    up = certified_prime_product(iv, lambda p: (p + 1, p - 1), UPPER)
    lo = certified_prime_product(iv, lambda p: (p + 1, p - 1), LOWER)
    print(f"{iv.label():<14} {len(primes_in(iv)):>7} primes  {lo.value:.12f} <= prod <= {up.value:.12f}")

# %% The quick check with P0 = e^11, delta = 0.86
holds, value = hough_quick_check(353, None, Fraction(86, 100))
print("primes > 353:", holds, value)
for q1 in (300, 320, 340):
    print(f"primes > {q1}:", hough_quick_check(q1)[0])
