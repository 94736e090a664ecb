"""Exact arithmetic for finite cyclic groups and their common extension space.

Embeddings between cyclic groups are multiplication maps x -> n*x; two
multipliers give the same embedding iff they agree modulo the target order,
so :class:`CyclicEmbedding` stores the reduced multiplier. Elements of the
ambient group (rationals mod 1) are reduced fractions; their decomposition
into prime-power components is computed on demand by modular inverses.

The extension-operator story lives in :func:`extend_automorphism` and
:func:`cyclic_section`. Note that a multiplicative section of the unit-group
restriction (Z/n)* -> (Z/k)* does not always exist: it splits per prime, and
the p-part has no section when 2 <= v_p(k) < v_p(n) for odd p, or when
3 <= v_2(k) < v_2(n). The smallest failures are (k, n) = (8, 16) and (9, 27),
so Z_16 and Z_27 are homogeneous but not uniformly homogeneous even though
every cyclic group has the plain extension property.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Optional

from .errors import CapabilityError, InputError, InternalError

#: denominators beyond this are rejected loudly rather than computed
DENOMINATOR_BOUND = 10**6


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization as ((p, exponent), ...) with primes ascending."""
    if n < 1:
        raise InputError(f"factorization requires a positive integer, got {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(p: int) -> bool:
    return p >= 2 and factorize(p) == ((p, 1),)


def p_free_part(n: int, p: int) -> int:
    """n with every factor of the prime p divided out."""
    if n < 1:
        raise InputError(f"expected a positive integer, got {n}")
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    while n % p == 0:
        n //= p
    return n


def _crt(residues: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine pairwise-coprime congruences x = r (mod m); returns (x, prod)."""
    x, m = 0, 1
    for r, mod in residues:
        inv = pow(m % mod, -1, mod) if mod > 1 else 0
        x = x + m * ((r - x) * inv % mod)
        m *= mod
    return x % m, m


# ---------------------------------------------------------------------------
# rationals mod 1 and their prime-power components


@dataclass(frozen=True, order=True)
class QZElem:
    """A rational number modulo 1, stored reduced with 0 <= num < den."""

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise InputError(f"denominator must be positive, got {self.den}")
        num = self.num % self.den
        g = gcd(num, self.den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", self.den // g)
        if self.den > DENOMINATOR_BOUND:
            raise CapabilityError(
                f"denominator {self.den} exceeds the configured bound {DENOMINATOR_BOUND}"
            )

    @classmethod
    def zero(cls) -> "QZElem":
        return cls(0, 1)

    def is_zero(self) -> bool:
        return self.num == 0

    def __add__(self, other: "QZElem") -> "QZElem":
        return QZElem(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "QZElem":
        return QZElem(-self.num, self.den)

    def __sub__(self, other: "QZElem") -> "QZElem":
        return self + (-other)

    def scaled(self, k: int) -> "QZElem":
        return QZElem(self.num * k, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


@dataclass(frozen=True)
class PruferVector:
    """Finitely many prime-power components, absent primes meaning zero.

    Each component is a nonzero rational mod 1 whose denominator is a power of
    its prime; the componentwise sum mod 1 recovers the represented element.
    """

    components: tuple[tuple[int, QZElem], ...]

    def __post_init__(self):
        prev = 0
        for p, c in self.components:
            if p <= prev:
                raise InputError("component primes must be strictly ascending")
            if not is_prime(p):
                raise InputError(f"{p} is not prime")
            if c.is_zero():
                raise InputError("zero components must be omitted")
            if p_free_part(c.den, p) != 1:
                raise InputError(f"component at {p} has denominator {c.den}, not a power of {p}")
            prev = p

    @classmethod
    def make(cls, parts: Mapping[int, QZElem]) -> "PruferVector":
        return cls(tuple((p, c) for p, c in sorted(parts.items()) if not c.is_zero()))

    @classmethod
    def zero(cls) -> "PruferVector":
        return cls(())

    def component(self, p: int) -> QZElem:
        for q, c in self.components:
            if q == p:
                return c
        return QZElem.zero()

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "PruferVector") -> "PruferVector":
        parts = dict(self.components)
        for p, c in other.components:
            parts[p] = parts.get(p, QZElem.zero()) + c
        return PruferVector.make(parts)

    def recompose(self) -> QZElem:
        total = QZElem.zero()
        for _, c in self.components:
            total = total + c
        return total

    def __str__(self) -> str:
        if not self.components:
            return "{}"
        return "{" + ", ".join(f"{p}: {c}" for p, c in self.components) + "}"


def prufer_decompose(q: QZElem) -> PruferVector:
    """Split a rational mod 1 into its prime-power components.

    The component at p is a/d' with d' = p^v_p(den); numerators come from the
    inverse of the complementary factor, so recomposition returns the input.
    """
    parts: dict[int, QZElem] = {}
    for p, e in factorize(q.den):
        ppow = p**e
        rest = q.den // ppow
        a = (q.num * pow(rest, -1, ppow)) % ppow
        parts[p] = QZElem(a, ppow)
    return PruferVector.make(parts)


def prufer_recompose(v: PruferVector) -> QZElem:
    return v.recompose()


# ---------------------------------------------------------------------------
# embeddings of cyclic groups


@dataclass(frozen=True)
class CyclicEmbedding:
    """The map x -> multiplier * x (mod target_order) from Z_source to Z_target.

    This is an embedding exactly when gcd(multiplier, target) == target/source;
    multipliers are stored reduced modulo the target order, which makes
    equality of embeddings plain field equality.
    """

    source_order: int
    target_order: int
    multiplier: int

    def __post_init__(self):
        if self.source_order < 1 or self.target_order < 1:
            raise InputError("group orders must be positive")
        if self.target_order % self.source_order != 0:
            raise InputError(
                f"Z_{self.source_order} does not embed into Z_{self.target_order}: order must divide"
            )
        mult = self.multiplier % self.target_order
        object.__setattr__(self, "multiplier", mult)
        if gcd(mult, self.target_order) != self.target_order // self.source_order:
            raise InputError(
                f"{self.multiplier} does not define an embedding of Z_{self.source_order} "
                f"into Z_{self.target_order}"
            )

    @classmethod
    def canonical(cls, source_order: int, target_order: int) -> "CyclicEmbedding":
        if source_order < 1 or target_order % source_order != 0:
            raise InputError(f"no canonical embedding of Z_{source_order} into Z_{target_order}")
        return cls(source_order, target_order, target_order // source_order)

    def apply(self, x: int) -> int:
        return (self.multiplier * x) % self.target_order

    def then(self, outer: "CyclicEmbedding") -> "CyclicEmbedding":
        """The composite ``outer after self``; multipliers multiply."""
        if outer.source_order != self.target_order:
            raise InputError("embeddings do not compose: orders mismatch")
        return CyclicEmbedding(
            self.source_order, outer.target_order, outer.multiplier * self.multiplier
        )


def lemma_solve(e: CyclicEmbedding, f: CyclicEmbedding) -> int:
    """The least unit b mod n with b * e = f as maps; always exists.

    Any two embeddings of Z_k into Z_n differ by an automorphism of the
    target: dividing the congruence by n/k reduces it mod k, where e becomes
    invertible, and the solution lifts to a unit by stepping in increments of
    k (at most n/k steps, one of which must be coprime to n).
    """
    if e.source_order != f.source_order or e.target_order != f.target_order:
        raise InputError("embeddings must share source and target orders")
    k, n = e.source_order, e.target_order
    step = n // k
    e1 = e.multiplier // step
    f1 = f.multiplier // step
    b = 0 if k == 1 else (f1 * pow(e1, -1, k)) % k
    while gcd(b, n) != 1:
        b += k
    if b >= n or (b * e.multiplier - f.multiplier) % n != 0:
        raise InternalError(f"automorphism solve failed for {e} vs {f}")
    return b


def amalgamate(
    f: CyclicEmbedding, g: CyclicEmbedding
) -> tuple[CyclicEmbedding, CyclicEmbedding]:
    """Complete a span Z_k -> Z_m, Z_k -> Z_n to a commuting cospan in Z_{mn}.

    Both legs are pushed along the canonical embeddings into Z_{mn}; the
    mismatch between the two composites is an automorphism of the target,
    which is folded into the first leg. Commutation is verified pointwise on
    all k source elements before returning.
    """
    if f.source_order != g.source_order:
        raise InputError("amalgamation requires a shared source order")
    k = f.source_order
    m, n = f.target_order, g.target_order
    into = m * n
    via_m = f.then(CyclicEmbedding.canonical(m, into))
    via_n = g.then(CyclicEmbedding.canonical(n, into))
    b = lemma_solve(via_m, via_n)
    f2 = CyclicEmbedding(m, into, b * (into // m))
    g2 = CyclicEmbedding.canonical(n, into)
    for x in range(k):
        if f2.apply(f.apply(x)) != g2.apply(g.apply(x)):
            raise InternalError(f"amalgamation square does not commute at {x}")
    return f2, g2


# ---------------------------------------------------------------------------
# the extension operator on the ambient group


def eta(m: int, l: int) -> PruferVector:
    """Image of l in the ambient group: component (l * [m]_p / m) mod 1 per p | m.

    [m]_p denotes m with all factors of p removed. The map is an injective
    homomorphism of Z_m into the ambient group (property-tested).
    """
    if m < 1:
        raise InputError(f"group order must be positive, got {m}")
    if not (0 <= l < m):
        raise InputError(f"element {l} outside Z_{m}")
    parts: dict[int, QZElem] = {}
    for p, _ in factorize(m):
        parts[p] = QZElem(l * p_free_part(m, p), m)
    return PruferVector.make(parts)


def k_apply(n: int, x: PruferVector) -> PruferVector:
    """Multiply the component at each prime p by [n]_p, reducing mod 1.

    Since [n]_p is coprime to p the component denominators are preserved, so
    the operator is injective; it is also additive and compatible with
    composing embeddings because p-free parts are multiplicative.
    """
    if n < 1:
        raise InputError(f"multiplier must be positive, got {n}")
    parts = {p: c.scaled(p_free_part(n, p)) for p, c in x.components}
    return PruferVector.make(parts)


def extend_automorphism(b: int, k: int, n: int) -> int:
    """Extend the automorphism x -> b*x of Z_k to Z_n along the canonical embedding.

    The result c satisfies c = b (mod k) and gcd(c, n) = 1, assembled by CRT
    from per-prime lifts. Lifts are chosen multiplicatively wherever a
    multiplicative section of (Z/p^c)* -> (Z/p^a)* exists (torsion lift
    x -> x^(p^(c-1)) for a = 1, the sign character for p = 2, a = 2); in the
    residual cases, where no section exists at all, the plain lift b is used
    and the assignment cannot be a homomorphism. See :func:`cyclic_section`.
    """
    if k < 1 or n < 1:
        raise InputError("group orders must be positive")
    if n % k != 0:
        raise InputError(f"Z_{k} is not a subgroup of Z_{n}: {k} does not divide {n}")
    b %= k
    if k == 1:
        return 1 % n
    if gcd(b, k) != 1:
        raise InputError(f"{b} is not a unit modulo {k}")
    kf = dict(factorize(k))
    residues = []
    for p, cexp in factorize(n):
        ppow = p**cexp
        aexp = kf.get(p, 0)
        if aexp == 0:
            r = 1
        elif aexp == cexp:
            r = b % ppow
        elif p == 2 and aexp == 1:
            r = 1
        elif p == 2 and aexp == 2:
            r = 1 if b % 4 == 1 else ppow - 1
        elif p > 2 and aexp == 1:
            r = pow(b, p ** (cexp - 1), ppow)
        else:
            r = b % ppow
        residues.append((r, ppow))
    c, _ = _crt(residues)
    if gcd(c, n) != 1 or c % k != b:
        raise InternalError(f"extension of {b} from Z_{k} to Z_{n} failed self-check")
    return c


def units(n: int) -> list[int]:
    """Units modulo n in ascending order; Z_1 has the single unit 0."""
    if n < 1:
        raise InputError(f"modulus must be positive, got {n}")
    if n == 1:
        return [0]
    return [u for u in range(1, n) if gcd(u, n) == 1]


def section_possible(k: int, n: int) -> bool:
    """Whether (Z/n)* -> (Z/k)* admits a multiplicative section.

    Splits per prime: a section exists unless some p | k has
    v_p(k) < v_p(n) with v_p(k) >= 2 (odd p) or v_p(k) >= 3 (p = 2).
    """
    if k < 1 or n < 1 or n % k != 0:
        raise InputError(f"{k} must divide {n}")
    nf = dict(factorize(n))
    for p, aexp in factorize(k):
        cexp = nf[p]
        if cexp > aexp and ((p > 2 and aexp >= 2) or (p == 2 and aexp >= 3)):
            return False
    return True


def cyclic_section(k: int, n: int) -> Optional[dict[int, int]]:
    """Homomorphic extension table (Z/k)* -> (Z/n)*, or None when none exists.

    Each value extends its key along the canonical embedding Z_k -> Z_n; the
    table is verified multiplicative before returning.
    """
    if not section_possible(k, n):
        return None
    table = {b: extend_automorphism(b, k, n) for b in units(k)}
    for b1, b2 in itertools.product(table, repeat=2):
        prod = (b1 * b2) % k
        if k == 1:
            prod = 0
        if (table[b1] * table[b2] - table[prod]) % n != 0:
            raise InternalError(f"constructed section for k={k}, n={n} is not multiplicative")
    return table


@dataclass(frozen=True)
class CyclicUniformityReport:
    """Per-divisor section verdicts for Z_n."""

    n: int
    ok: bool
    failing_k: Optional[int]
    sections: tuple[tuple[int, bool], ...]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "uniformly_homogeneous": self.ok,
            "sections": [{"k": k, "exists": e} for k, e in self.sections],
        }


def uniformly_homogeneous_cyclic(n: int) -> CyclicUniformityReport:
    """Decide uniform homogeneity of Z_n via subgroup extension operators.

    Z_n is uniformly homogeneous iff for every divisor k the automorphisms of
    the order-k subgroup admit a homomorphic choice of extensions, i.e. a
    section of (Z/n)* -> (Z/k)*. The smallest failures are n = 16 and n = 27.
    """
    if n < 1:
        raise InputError(f"group order must be positive, got {n}")
    verdicts = []
    failing = None
    for k in range(1, n + 1):
        if n % k != 0:
            continue
        exists = section_possible(k, n)
        verdicts.append((k, exists))
        if not exists and failing is None:
            failing = k
    return CyclicUniformityReport(n=n, ok=failing is None, failing_k=failing, sections=tuple(verdicts))
