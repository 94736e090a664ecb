"""Permutations of {0..n-1} and finite permutation groups.

Composition is right-to-left throughout the package: ``(g * h)(x) == g(h(x))``.
Groups are stored as explicit element sets; every consumer enumerates the
elements anyway, so no generator machinery is kept around.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InputError


@dataclass(frozen=True, order=True)
class Perm:
    """A permutation, stored as the tuple of images ``mapping[i] = image of i``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise InputError(f"not a permutation of 0..{len(self.mapping) - 1}: {self.mapping}")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: tuple[int, ...]) -> "Perm":
        m = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                m[a] = b
        return cls(tuple(m))

    @property
    def degree(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __mul__(self, other: "Perm") -> "Perm":
        """Right-to-left composition: ``(self * other)(x) = self(other(x))``."""
        if other.degree != self.degree:
            raise InputError("cannot compose permutations of different degrees")
        om = other.mapping
        sm = self.mapping
        return Perm(tuple(sm[om[i]] for i in range(len(sm))))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Perm(tuple(inv))

    def order(self) -> int:
        n = self.degree
        k = 1
        cur = self
        ident = Perm.identity(n)
        while cur != ident:
            cur = cur * self
            k += 1
        return k

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.mapping))

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.mapping) if i == j)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its minimum, sorted."""
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i] or self.mapping[i] == i:
                seen[i] = True
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.mapping[j]
            out.append(tuple(cyc))
        return sorted(out)

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)


@dataclass(frozen=True)
class PermGroup:
    """A finite group of permutations of {0..degree-1}, stored exhaustively."""

    degree: int
    elements: frozenset[Perm]

    def __post_init__(self):
        if any(p.degree != self.degree for p in self.elements):
            raise InputError("group elements must all share the declared degree")
        if Perm.identity(self.degree) not in self.elements:
            raise InputError("group must contain the identity")

    @classmethod
    def symmetric(cls, n: int) -> "PermGroup":
        return cls(n, frozenset(Perm(p) for p in itertools.permutations(range(n))))

    @classmethod
    def trivial(cls, n: int) -> "PermGroup":
        return cls(n, frozenset({Perm.identity(n)}))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self.elements

    def __iter__(self):
        return iter(self.sorted_elements())

    def sorted_elements(self) -> list[Perm]:
        return sorted(self.elements)

    def is_group(self) -> bool:
        """Full closure scan: x * y.inverse() stays inside for every pair."""
        for x in self.elements:
            for y in self.elements:
                if x * y.inverse() not in self.elements:
                    return False
        return True

    def is_cyclic(self) -> bool:
        return any(p.order() == self.order for p in self.elements)


def group_closure(generators: Iterable[Perm], degree: int | None = None) -> PermGroup:
    """Smallest permutation group containing ``generators``.

    ``degree`` is required when the generator set is empty; otherwise it must
    match the generators. Closure runs by repeated products until fixpoint.
    """
    gens = list(generators)
    if not gens:
        if degree is None:
            raise InputError("degree is required for an empty generator set")
        return PermGroup.trivial(degree)
    n = gens[0].degree
    if any(g.degree != n for g in gens):
        raise InputError("generators must share one degree")
    if degree is not None and degree != n:
        raise InputError(f"declared degree {degree} does not match generators of degree {n}")

    raw_gens = [g.mapping for g in gens]
    seen: set[tuple[int, ...]] = {tuple(range(n))}
    frontier = [tuple(range(n))]
    while frontier:
        nxt = []
        for h in frontier:
            for g in raw_gens:
                prod = tuple(g[h[i]] for i in range(n))
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return PermGroup(n, frozenset(Perm(m) for m in seen))


def is_homomorphism(source: PermGroup, mapping: Mapping[Perm, Perm]) -> bool:
    """Exhaustively test ``mapping(g * h) == mapping(g) * mapping(h)`` on ``source``.

    Every element of the source group must have an image; a missing element is
    an input error, not a negative answer.
    """
    elems = source.sorted_elements()
    for g in elems:
        if g not in mapping:
            raise InputError(f"mapping is undefined on group element {g}")
    # raw-tuple tables keep the quadratic scan cheap for orders in the hundreds
    table = {g.mapping: mapping[g].mapping for g in elems}
    n = source.degree
    raw = [g.mapping for g in elems]
    for g in raw:
        fg = table[g]
        for h in raw:
            gh = tuple(g[h[i]] for i in range(n))
            fh = table[h]
            if table[gh] != tuple(fg[fh[i]] for i in range(len(fg))):
                return False
    return True


def embed_sym(h: Perm, n: int) -> Perm:
    """Extend a permutation of {0..k-1} to {0..n-1} by the identity on the tail.

    The induced map is an injective group homomorphism of symmetric groups.
    """
    k = h.degree
    if k > n:
        raise InputError(f"cannot embed a degree-{k} permutation into degree {n}")
    return Perm(h.mapping + tuple(range(k, n)))
