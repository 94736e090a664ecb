"""Finite relational structures over universes {0..n-1}.

A structure is a signature (named relations with arities) plus one table of
tuples per relation. Everything here is immutable and deterministic: tables
are kept as sorted tuples, and all enumeration orders are fixed so that
reports and witnesses are reproducible bit for bit.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import CapabilityError, InputError
from .perms import Perm, PermGroup

#: largest universe accepted by canonical_form (full permutation minimization)
CANONICAL_SIZE_BOUND = 8


@dataclass(frozen=True)
class Signature:
    """An ordered list of (relation name, arity) pairs. May be empty."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate relation names in signature: {names}")
        for name, arity in self.relations:
            if arity < 1:
                raise InputError(f"relation {name!r} has arity {arity}; arities must be >= 1")

    @classmethod
    def digraph(cls) -> "Signature":
        return cls((("E", 2),))

    @classmethod
    def empty(cls) -> "Signature":
        return cls(())

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise InputError(f"unknown relation {name!r}")


@dataclass(frozen=True)
class FinStructure:
    """A finite relational structure on the universe {0..size-1}.

    ``tables[i]`` holds the sorted tuples of ``signature.relations[i]``.
    Use :meth:`make` to build one from unsorted caller data.
    """

    signature: Signature
    size: int
    tables: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.size < 0:
            raise InputError("size must be non-negative")
        if len(self.tables) != len(self.signature.relations):
            raise InputError("one table per relation is required")
        for (name, arity), table in zip(self.signature.relations, self.tables):
            prev = None
            for t in table:
                if len(t) != arity:
                    raise InputError(f"relation {name!r}: tuple {t} has wrong arity (want {arity})")
                if any(not (0 <= v < self.size) for v in t):
                    raise InputError(f"relation {name!r}: tuple {t} mentions a vertex outside 0..{self.size - 1}")
                if prev is not None and not (prev < t):
                    raise InputError(f"relation {name!r}: table must be strictly sorted")
                prev = t

    @classmethod
    def make(
        cls,
        signature: Signature,
        size: int,
        relations: Mapping[str, Iterable[Iterable[int]]] | None = None,
    ) -> "FinStructure":
        relations = dict(relations or {})
        unknown = set(relations) - set(signature.names)
        if unknown:
            raise InputError(f"relations not in signature: {sorted(unknown)}")
        tables = []
        for name, _ in signature.relations:
            rows = {tuple(int(v) for v in t) for t in relations.get(name, ())}
            tables.append(tuple(sorted(rows)))
        return cls(signature, size, tuple(tables))

    @classmethod
    def digraph(cls, size: int, edges: Iterable[tuple[int, int]]) -> "FinStructure":
        return cls.make(Signature.digraph(), size, {"E": edges})

    @cached_property
    def table_sets(self) -> tuple[frozenset[tuple[int, ...]], ...]:
        return tuple(frozenset(t) for t in self.tables)

    def rel(self, name: str) -> tuple[tuple[int, ...], ...]:
        return self.tables[self.signature.names.index(name)]

    def rel_set(self, name: str) -> frozenset[tuple[int, ...]]:
        return self.table_sets[self.signature.names.index(name)]

    @property
    def vertices(self) -> range:
        return range(self.size)

    def to_json_dict(self) -> dict:
        return {
            "signature": [{"name": n, "arity": a} for n, a in self.signature.relations],
            "size": self.size,
            "relations": {n: [list(t) for t in table] for n, table in zip(self.signature.names, self.tables)},
        }


def relabel(s: FinStructure, perm: Perm) -> FinStructure:
    """Apply a permutation of the universe to every relation tuple."""
    if perm.degree != s.size:
        raise InputError(f"permutation degree {perm.degree} does not match structure size {s.size}")
    m = perm.mapping
    tables = tuple(tuple(sorted(tuple(m[v] for v in t) for t in table)) for table in s.tables)
    return FinStructure(s.signature, s.size, tables)


def induced_substructure(s: FinStructure, vertices: Iterable[int]) -> tuple[FinStructure, tuple[int, ...]]:
    """Induce on a vertex subset, re-indexed in increasing vertex order.

    Returns the induced structure together with the vertex list: position i of
    the new universe corresponds to ``verts[i]`` in ``s``.
    """
    verts = tuple(sorted(set(int(v) for v in vertices)))
    for v in verts:
        if not (0 <= v < s.size):
            raise InputError(f"vertex {v} outside universe 0..{s.size - 1}")
    pos = {v: i for i, v in enumerate(verts)}
    vset = set(verts)
    tables = tuple(
        tuple(sorted(tuple(pos[v] for v in t) for t in table if set(t) <= vset))
        for table in s.tables
    )
    return FinStructure(s.signature, len(verts), tables), verts


@dataclass(frozen=True)
class PartialIso:
    """An isomorphism between induced substructures of two structures.

    ``domain`` is the sorted tuple of source vertices and ``images[i]`` is the
    image of ``domain[i]``. Construction validates injectivity and that the
    map preserves relation tuples in both directions.
    """

    source: FinStructure
    target: FinStructure
    domain: tuple[int, ...]
    images: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.domain))) != self.domain:
            raise InputError("domain must be a sorted duplicate-free tuple")
        if len(set(self.images)) != len(self.images):
            raise InputError("map must be injective")
        if len(self.domain) != len(self.images):
            raise InputError("domain and image lengths differ")
        for v in self.domain:
            if not (0 <= v < self.source.size):
                raise InputError(f"domain vertex {v} outside source universe")
        for v in self.images:
            if not (0 <= v < self.target.size):
                raise InputError(f"image vertex {v} outside target universe")
        if self.source.signature != self.target.signature:
            raise InputError("source and target signatures differ")
        lut = dict(zip(self.domain, self.images))
        dset = set(self.domain)
        iset = set(self.images)
        rev = {w: v for v, w in lut.items()}
        for src_table, tgt_table in zip(self.source.table_sets, self.target.table_sets):
            for t in src_table:
                if set(t) <= dset and tuple(lut[v] for v in t) not in tgt_table:
                    raise InputError(f"map does not preserve tuple {t}")
            for t in tgt_table:
                if set(t) <= iset and tuple(rev[w] for w in t) not in src_table:
                    raise InputError(f"map does not reflect tuple {t}")

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain, self.images))


def _vertex_profile(s: FinStructure) -> list[tuple]:
    """Per-vertex invariant: occurrence counts by (relation, position), plus
    the count of constant tuples (v, v, ..., v), which captures loop status."""
    prof: list[list[int]] = [[] for _ in range(s.size)]
    for (_, arity), table in zip(s.signature.relations, s.tables):
        counts: dict[tuple[int, int], int] = {}
        const: dict[int, int] = {}
        for t in table:
            for pos, v in enumerate(t):
                counts[(v, pos)] = counts.get((v, pos), 0) + 1
            if len(set(t)) == 1:
                const[t[0]] = const.get(t[0], 0) + 1
        for v in range(s.size):
            prof[v].extend(counts.get((v, pos), 0) for pos in range(arity))
            prof[v].append(const.get(v, 0))
    return [tuple(p) for p in prof]


def _iter_embeddings(a: FinStructure, b: FinStructure) -> Iterator[tuple[int, ...]]:
    """Backtracking enumeration of embeddings of ``a`` into ``b``.

    An embedding is an injection that is an isomorphism onto the induced image:
    tuples must be preserved, and tuples of ``b`` lying inside the image must
    pull back. Maps come out in lexicographic order of the image array because
    vertex 0 of ``a`` is assigned first and candidates ascend.
    """
    if a.signature != b.signature:
        return
    if a.size > b.size:
        return
    n_a, n_b = a.size, b.size
    prof_a = _vertex_profile(a)
    prof_b = _vertex_profile(b)
    exact = n_a == n_b
    # constant-tuple counts must match exactly (loops cannot appear or vanish);
    # other occurrence counts may only grow when the ambient structure is larger
    def compatible(u: int, w: int) -> bool:
        pa, pb = prof_a[u], prof_b[w]
        if exact:
            return pa == pb
        i = 0
        for _, arity in a.signature.relations:
            for _ in range(arity):
                if pa[i] > pb[i]:
                    return False
                i += 1
            if pa[i] != pb[i]:
                return False
            i += 1
        return True

    cand = [[w for w in range(n_b) if compatible(u, w)] for u in range(n_a)]
    if any(not c for c in cand):
        return

    # tuples of `a` touching vertex u with all entries <= u (assigned prefix)
    a_tuples_at: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in range(n_a)]
    for ri, table in enumerate(a.tables):
        for t in table:
            m = max(t)
            a_tuples_at[m].append((t, ri))
    b_sets = b.table_sets
    a_sets = a.table_sets
    # tuples of `b` indexed by the vertices they touch, per relation
    b_tuples_touching: list[list[list[tuple[int, ...]]]] = [
        [[] for _ in range(n_b)] for _ in a.tables
    ]
    for ri, table in enumerate(b.tables):
        for t in table:
            for v in set(t):
                b_tuples_touching[ri][v].append(t)

    img = [-1] * n_a
    used = [False] * n_b
    rev: dict[int, int] = {}

    def consistent(u: int, w: int) -> bool:
        for t, ri in a_tuples_at[u]:
            if tuple(img[v] for v in t) not in b_sets[ri]:
                return False
        for ri in range(len(a.tables)):
            for t in b_tuples_touching[ri][w]:
                pre = tuple(rev.get(x, -1) for x in t)
                if -1 in pre:
                    continue
                if pre not in a_sets[ri]:
                    return False
        return True

    def rec(u: int) -> Iterator[tuple[int, ...]]:
        if u == n_a:
            yield tuple(img)
            return
        for w in cand[u]:
            if used[w]:
                continue
            img[u] = w
            used[w] = True
            rev[w] = u
            if consistent(u, w):
                yield from rec(u + 1)
            used[w] = False
            del rev[w]
        img[u] = -1

    yield from rec(0)


def find_embeddings(a: FinStructure, b: FinStructure) -> list[tuple[int, ...]]:
    """All embeddings of ``a`` into ``b``, in lexicographic order."""
    return list(_iter_embeddings(a, b))


def find_isomorphisms(a: FinStructure, b: FinStructure) -> list[tuple[int, ...]]:
    """All isomorphisms a -> b as image arrays, lexicographically ordered.

    Empty exactly when the structures are not isomorphic. An embedding
    between equal-sized structures is automatically an isomorphism.
    """
    if a.size != b.size:
        return []
    return list(_iter_embeddings(a, b))


def is_isomorphic(a: FinStructure, b: FinStructure) -> bool:
    if a.size != b.size:
        return False
    return next(_iter_embeddings(a, b), None) is not None


def automorphism_group(s: FinStructure) -> PermGroup:
    return PermGroup(s.size, frozenset(Perm(m) for m in find_isomorphisms(s, s)))


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Label-independent encoding: equal codes iff isomorphic (fixed signature)."""

    code: bytes


def _min_relabeling(s: FinStructure) -> tuple[tuple[tuple[tuple[int, ...], ...], ...], tuple[int, ...]]:
    best = None
    best_perm = None
    for p in itertools.permutations(range(s.size)):
        tables = tuple(
            tuple(sorted(tuple(p[v] for v in t) for t in table)) for table in s.tables
        )
        if best is None or tables < best:
            best = tables
            best_perm = p
    return best, best_perm


def canonicalize(s: FinStructure) -> FinStructure:
    """The lexicographically minimal relabeling of ``s`` over all permutations."""
    if s.size > CANONICAL_SIZE_BOUND:
        raise CapabilityError(
            f"canonical form is limited to {CANONICAL_SIZE_BOUND} vertices (got {s.size})"
        )
    if s.size == 0:
        return s
    tables, _ = _min_relabeling(s)
    return FinStructure(s.signature, s.size, tables)


def canonical_form(s: FinStructure) -> CanonicalForm:
    c = canonicalize(s)
    payload = (c.signature.relations, c.size, c.tables)
    return CanonicalForm(repr(payload).encode("ascii"))


def age(s: FinStructure) -> list[FinStructure]:
    """One canonical representative per isomorphism class of nonempty induced
    substructures, sorted by (size, canonical code)."""
    seen: dict[CanonicalForm, FinStructure] = {}
    for k in range(1, s.size + 1):
        for verts in itertools.combinations(range(s.size), k):
            sub, _ = induced_substructure(s, verts)
            form = canonical_form(sub)
            if form not in seen:
                seen[form] = canonicalize(sub)
    return [seen[form] for form in sorted(seen, key=lambda f: (seen[f].size, f.code))]


# ---------------------------------------------------------------------------
# JSON structure files


def structure_from_json_dict(data, where: str = "structure") -> FinStructure:
    """Parse the on-disk JSON object format, with located error messages."""
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    for key in ("signature", "size", "relations"):
        if key not in data:
            raise InputError(f"{where}: missing key {key!r}")
    sig_raw = data["signature"]
    if not isinstance(sig_raw, list):
        raise InputError(f"{where}.signature: expected a list")
    rels = []
    for i, entry in enumerate(sig_raw):
        if not isinstance(entry, dict) or "name" not in entry or "arity" not in entry:
            raise InputError(f"{where}.signature[{i}]: expected an object with 'name' and 'arity'")
        if not isinstance(entry["name"], str) or not isinstance(entry["arity"], int):
            raise InputError(f"{where}.signature[{i}]: 'name' must be a string and 'arity' an integer")
        rels.append((entry["name"], entry["arity"]))
    try:
        signature = Signature(tuple(rels))
    except InputError as exc:
        raise InputError(f"{where}.signature: {exc}") from None
    size = data["size"]
    if not isinstance(size, int) or size < 0:
        raise InputError(f"{where}.size: expected a non-negative integer")
    rel_raw = data["relations"]
    if not isinstance(rel_raw, dict):
        raise InputError(f"{where}.relations: expected an object")
    tables: dict[str, list[tuple[int, ...]]] = {}
    for name, rows in rel_raw.items():
        if name not in signature.names:
            raise InputError(f"{where}.relations.{name}: relation not declared in signature")
        arity = signature.arity(name)
        if not isinstance(rows, list):
            raise InputError(f"{where}.relations.{name}: expected a list of tuples")
        parsed = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != arity:
                raise InputError(f"{where}.relations.{name}[{i}]: expected a list of {arity} integers")
            for v in row:
                if not isinstance(v, int) or not (0 <= v < size):
                    raise InputError(
                        f"{where}.relations.{name}[{i}]: vertex {v} out of range for size {size}"
                    )
            parsed.append(tuple(row))
        tables[name] = parsed
    return FinStructure.make(signature, size, tables)


def load_structure(path) -> FinStructure:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON: {exc}") from None
    return structure_from_json_dict(data, where=str(path))


def dump_structure(s: FinStructure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(s.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
