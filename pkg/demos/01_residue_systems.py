"""Deciding coverage exactly.

Run: python demos/01_residue_systems.py
"""
from pathlib import Path

from coverings import ResidueSystem, ResourceLimitError, is_covering, uncovered_classes
from coverings.residues import format_system_text, load_system

# %% The classic system with distinct moduli dividing 12
erdos = load_system((Path(__file__).parent / "erdos12.txt").read_text())
print(format_system_text(erdos))
u = uncovered_classes(erdos)
print("lcm:", u.modulus, "| uncovered:", u.count, "| covers:", is_covering(erdos))

# %% Every class is needed: dropping any one leaves a gap
for i, c in enumerate(erdos):
    u = uncovered_classes(erdos.without(i), cap=5)
    print(f"without {c}: density {u.density}, e.g. {list(u.sample)}")

# %% Huge prime factors in the moduli cost nothing extra
P = 1_000_000_007
system = ResidueSystem.from_pairs(
    [(0, 2), (0, 3), (1, 4), (1, 6), (11, 12 * P), (23, 24 * P), (47, 48 * P)]
)
u = uncovered_classes(system, cap=3)
print(f"lcm = {u.modulus}; uncovered density = {u.density}")
print("first uncovered residues:", list(u.sample))

# %% Independent classes modulo many primes have a CRT-product uncovered set;
# the search refuses rather than running away
primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]
system = ResidueSystem.from_pairs([(0, 2), (0, 3)] + [(p - 1, p) for p in primes[2:]])
try:
    uncovered_classes(system, max_nodes=100_000)
except ResourceLimitError as exc:
    print("refused:", exc)
