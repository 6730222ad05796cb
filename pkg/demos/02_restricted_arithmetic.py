"""Bases, restricted tuple counts, and tail sums over prime powers.

Run: python demos/02_restricted_arithmetic.py
"""
from coverings import BaseDescriptor, factorize_over_base, lambda_k, omega_prime
from coverings.base import tail_sum_T_exact

big_primes = BaseDescriptor.primes(19)
squares = BaseDescriptor.explicit([4, 9, 5])

# %% Factorizing over a base: foreign factors and coprime non-prime bases
for m, base in [(667, big_primes), (4, big_primes), (36 * 5, squares), (6, squares)]:
    print(m, base.to_dict(), "->", factorize_over_base(m, base))

# %% lambda'_k counts k-tuples of base-factorized integers with a given lcm
for m in (23, 23**2, 23 * 29, 4):
    print(f"lambda'_3({m}) =", lambda_k(m, 3, big_primes), " omega' =", omega_prime(m, big_primes))

# %% Tail sums sum_j ((j+1)^k - j^k)/q^j have exact closed forms for every k
for q in (2, 5, 23):
    print(q, [str(tail_sum_T_exact(q, None, k)) for k in (1, 2, 3)])
