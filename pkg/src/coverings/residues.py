"""Finite residue systems and exact coverage decisions.

Coverage is decided by refining a residue tree one prime at a time.  A
node ``r mod M`` is pruned as soon as some class contains it and is
emitted whole as soon as no remaining class meets it.  When every live
class needs the branching prime p, at most one child per class is
constrained and the other children are emitted together as one block with
holes, so a large prime factor costs no more than a small one.

Repeated moduli are accepted unless the system is built in strict mode.
Modulus 1 is legal; ``0 mod 1`` is the whole of Z and covers on its own.
"""

from __future__ import annotations

import heapq
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np
from sympy import factorint

__all__ = [
    "ResidueClass",
    "ResidueSystem",
    "UncoveredSet",
    "ResourceLimitError",
    "DuplicateModulusError",
    "ResidueParseError",
    "lcm_of_system",
    "uncovered_classes",
    "is_covering",
    "uncovered_density",
    "brute_force_uncovered",
    "parse_system_text",
    "format_system_text",
    "system_to_dict",
    "system_from_dict",
    "load_system",
    "DEFAULT_MAX_NODES",
]

DEFAULT_MAX_NODES = 5_000_000


class ResourceLimitError(RuntimeError):
    """The computation was refused because it would exceed a work bound."""


class DuplicateModulusError(ValueError):
    pass


class ResidueParseError(ValueError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno
        self.line = line
        self.reason = reason


@dataclass(frozen=True, order=True)
class ResidueClass:
    residue: int
    modulus: int

    def __post_init__(self):
        m = int(self.modulus)
        if m < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "residue", int(self.residue) % m)

    def __contains__(self, n: int) -> bool:
        return n % self.modulus == self.residue

    def __str__(self) -> str:
        return f"{self.residue} mod {self.modulus}"


@dataclass(frozen=True)
class ResidueSystem:
    classes: tuple[ResidueClass, ...] = ()
    allow_repeated_moduli: bool = True

    def __post_init__(self):
        classes = tuple(
            c if isinstance(c, ResidueClass) else ResidueClass(*c) for c in self.classes
        )
        object.__setattr__(self, "classes", classes)
        if not self.allow_repeated_moduli:
            seen = set()
            for c in classes:
                if c.modulus in seen:
                    raise DuplicateModulusError(f"modulus {c.modulus} repeated")
                seen.add(c.modulus)

    @classmethod
    def from_pairs(cls, pairs: Iterable, strict: bool = False) -> "ResidueSystem":
        return cls(tuple(ResidueClass(a, m) for a, m in pairs), not strict)

    @property
    def moduli(self) -> list[int]:
        return [c.modulus for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self) -> Iterator[ResidueClass]:
        return iter(self.classes)

    def __add__(self, other: "ResidueSystem") -> "ResidueSystem":
        return ResidueSystem(self.classes + tuple(other.classes), self.allow_repeated_moduli)

    def without(self, index: int) -> "ResidueSystem":
        return ResidueSystem(
            self.classes[:index] + self.classes[index + 1 :], self.allow_repeated_moduli
        )


@dataclass(frozen=True)
class UncoveredSet:
    """Uncovered residues mod ``modulus``, stored as disjoint blocks.

    A block ``(r, M, p, holes)`` with ``M*p | modulus`` stands for every
    residue congruent to ``r`` mod ``M`` except those congruent to
    ``r + t*M`` mod ``M*p`` for ``t`` in ``holes``.  Plain blocks have
    ``p == 1`` and no holes.
    """

    modulus: int
    count: int
    blocks: tuple[tuple[int, int, int, tuple[int, ...]], ...] = field(repr=False)
    sample: tuple[int, ...] = ()

    @property
    def density(self) -> Fraction:
        return Fraction(self.count, self.modulus)

    @property
    def is_empty(self) -> bool:
        return self.count == 0

    def residues(self) -> Iterator[int]:
        """Yield the uncovered residues in increasing order."""
        Q = self.modulus

        def expand(r, M, p, holes):
            if not holes:
                return iter(range(r, Q, M))
            hs = frozenset(holes)
            return (x for x in range(r, Q, M) if ((x - r) // M) % p not in hs)

        return heapq.merge(*(expand(*b) for b in self.blocks))

    def classes(self, limit: int = DEFAULT_MAX_NODES) -> frozenset[int]:
        if self.count > limit:
            raise ResourceLimitError(
                f"{self.count} uncovered residues exceed the enumeration limit {limit}"
            )
        out = set()
        Q = self.modulus
        for r, M, p, holes in self.blocks:
            if holes:
                hs = frozenset(holes)
                out.update(x for x in range(r, Q, M) if ((x - r) // M) % p not in hs)
            else:
                out.update(range(r, Q, M))
        return frozenset(out)

    def __len__(self) -> int:
        return self.count


def lcm_of_system(system: ResidueSystem) -> int:
    return math.lcm(*system.moduli) if len(system) else 1


def uncovered_classes(
    system: ResidueSystem,
    cap: int | None = None,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> UncoveredSet:
    """Exact uncovered set of ``system`` modulo the lcm of its moduli.

    ``cap`` limits how many residues are listed in ``sample``; the count
    and density are always exact.  Raises :class:`ResourceLimitError` when
    more than ``max_nodes`` tree nodes would be visited.
    """
    Q = lcm_of_system(system)
    if any(c.modulus == 1 for c in system):
        return UncoveredSet(Q, 0, ())
    active = tuple(sorted({(c.residue, c.modulus) for c in system}))
    primes_of = {m: sorted(factorint(m)) for m in {m for _, m in active}}

    blocks: list[tuple[int, int, int, tuple[int, ...]]] = []
    count = 0
    visited = 0
    stack = [(0, 1, active)]
    while stack:
        r, M, live = stack.pop()
        visited += 1
        if visited > max_nodes:
            raise ResourceLimitError(
                f"coverage search exceeded {max_nodes} nodes (lcm {Q})"
            )
        if not live:
            blocks.append((r, M, 1, ()))
            count += Q // M
            continue
        # primes each live class still needs at this node
        needs = [
            [q for q in primes_of[m] if (m // math.gcd(m, M)) % q == 0] for _, m in live
        ]
        shared = set(needs[0]).intersection(*needs[1:])
        # a prime every live class needs lets the unconstrained children merge
        p = min(shared) if shared else min(q[0] for q in needs)

        rest = []
        by_child: dict[int, list[tuple[int, int]]] = {}
        for (a, m), nd in zip(live, needs):
            if p not in nd:
                rest.append((a, m))
                continue
            g = math.gcd(m, M)
            # the unique child r + t*M meeting a mod g*p
            t = ((a - r) // g) * pow(M // g, -1, p) % p
            by_child.setdefault(t, []).append((a, m))

        M2 = M * p
        children = []
        for t, classes in sorted(by_child.items()):
            if any(math.gcd(m, M2) == m for _, m in classes):
                continue
            children.append((r + t * M, M2, tuple(rest) + tuple(classes)))
        if rest:
            if visited + len(stack) + p > max_nodes:
                raise ResourceLimitError(
                    f"coverage search exceeded {max_nodes} nodes (lcm {Q})"
                )
            constrained = set(by_child)
            children.extend(
                (r + t * M, M2, tuple(rest)) for t in range(p) if t not in constrained
            )
            children.sort()
        elif len(by_child) < p:
            holes = tuple(sorted(by_child))
            blocks.append((r, M, p, holes))
            count += Q // M - len(holes) * (Q // M2)
        stack.extend(reversed(children))

    blocks.sort()
    sample: tuple[int, ...] = ()
    if cap is not None and cap > 0:
        out = []
        for x in UncoveredSet(Q, count, tuple(blocks)).residues():
            out.append(x)
            if len(out) >= cap:
                break
        sample = tuple(out)
    return UncoveredSet(Q, count, tuple(blocks), sample)


def is_covering(system: ResidueSystem, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    return uncovered_classes(system, max_nodes=max_nodes).count == 0


def uncovered_density(system: ResidueSystem, max_nodes: int = DEFAULT_MAX_NODES) -> Fraction:
    return uncovered_classes(system, max_nodes=max_nodes).density


def brute_force_uncovered(system: ResidueSystem) -> set[int]:
    """Enumerate 0..Q-1 against every class.  Reference oracle for small Q."""
    Q = lcm_of_system(system)
    n = np.arange(Q, dtype=np.int64)
    hit = np.zeros(Q, dtype=bool)
    for c in system:
        hit |= n % c.modulus == c.residue
    return set(np.flatnonzero(~hit).tolist())


# -- text and structured formats ------------------------------------------------

_LINE = re.compile(r"^\s*(-?\d+)\s*(?:mod|%)\s*(-?\d+)\s*$")


def parse_system_text(text: str, strict: bool = False) -> ResidueSystem:
    """Parse ``<residue> mod <modulus>`` lines; ``#`` starts a comment."""
    classes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        mt = _LINE.match(line)
        if not mt:
            raise ResidueParseError(lineno, raw, "expected '<residue> mod <modulus>'")
        a, m = int(mt.group(1)), int(mt.group(2))
        if m < 1:
            raise ResidueParseError(lineno, raw, "modulus must be positive")
        classes.append(ResidueClass(a, m))
    return ResidueSystem(tuple(classes), not strict)


def format_system_text(system: ResidueSystem) -> str:
    return "".join(f"{c}\n" for c in system)


def system_to_dict(system: ResidueSystem) -> dict:
    return {"classes": [[c.residue, c.modulus] for c in system]}


def system_from_dict(obj: dict, strict: bool = False) -> ResidueSystem:
    try:
        pairs = obj["classes"]
        classes = []
        for item in pairs:
            a, m = item
            if isinstance(a, bool) or isinstance(m, bool):
                raise TypeError
            classes.append(ResidueClass(int(a), int(m)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed residue system object: {exc!r}") from None
    return ResidueSystem(tuple(classes), not strict)


def load_system(text: str, strict: bool = False) -> ResidueSystem:
    """Read either format, picking JSON when the text starts with ``{``."""
    if text.lstrip().startswith("{"):
        return system_from_dict(json.loads(text), strict=strict)
    return parse_system_text(text, strict=strict)
