"""Uniform extension operator on finite sets (empty signature).

Bijections between subsets of {0..n-1} extend to full permutations by mapping
the complement of the domain onto the complement of the image in increasing
order. The assignment is functorial: identities go to identities and
composites to composites, because complements compose along with the maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InputError
from .homogeneity import Obstruction
from .perms import Perm


@dataclass(frozen=True)
class SetBijection:
    """A bijection between two subsets of {0..ambient-1}.

    ``domain`` is sorted; ``images[i]`` is the image of ``domain[i]``.
    """

    ambient: int
    domain: tuple[int, ...]
    images: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.domain))) != self.domain:
            raise InputError("domain must be a sorted duplicate-free tuple")
        if len(set(self.images)) != len(self.images):
            raise InputError("bijection must be injective")
        if len(self.domain) != len(self.images):
            raise InputError("domain and image sizes differ")
        for v in self.domain + self.images:
            if not (0 <= v < self.ambient):
                raise InputError(f"vertex {v} outside 0..{self.ambient - 1}")

    @classmethod
    def identity(cls, ambient: int, subset: tuple[int, ...]) -> "SetBijection":
        subset = tuple(sorted(subset))
        return cls(ambient, subset, subset)

    def then(self, outer: "SetBijection") -> "SetBijection":
        """Composite ``outer after self``; requires matching sets."""
        if outer.ambient != self.ambient:
            raise InputError("bijections live in different ambient sets")
        if tuple(sorted(self.images)) != outer.domain:
            raise InputError("bijections do not compose: image and domain differ")
        lut = dict(zip(outer.domain, outer.images))
        return SetBijection(self.ambient, self.domain, tuple(lut[v] for v in self.images))


def ens_extend(f: SetBijection) -> Perm:
    """Extend a subset bijection to a permutation of the whole ambient set.

    The complement of the domain is carried onto the complement of the image
    in strictly increasing order.
    """
    n = f.ambient
    mapping = [-1] * n
    for v, w in zip(f.domain, f.images):
        mapping[v] = w
    rest_src = [v for v in range(n) if mapping[v] < 0]
    used = set(f.images)
    rest_tgt = [w for w in range(n) if w not in used]
    for v, w in zip(rest_src, rest_tgt):
        mapping[v] = w
    return Perm(tuple(mapping))


def ens_obstruction(n: int) -> Optional[Obstruction]:
    """Fixed-set obstruction for the n-element set, or None for n <= 2.

    For n >= 3 the transposition of the last two points fixes everything else,
    which rules out a one-point-extension functor on subsets of the n-set.
    This matches the generic fixed-set scan on the edgeless structure.
    """
    if n < 1:
        raise InputError(f"expected a positive set size, got {n}")
    if n <= 2:
        return None
    witness = Perm(tuple(range(n - 2)) + (n - 1, n - 2))
    return Obstruction(fixed_set=tuple(range(n - 2)), witness=witness)
