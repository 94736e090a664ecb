"""Decision procedures for homogeneity, set-homogeneity and uniform homogeneity.

All checkers are exhaustive over subsets of small universes. A structure is
homogeneous when every isomorphism between nonempty induced substructures
restricts from an automorphism; set-homogeneous when every isomorphic pair of
substructures is linked setwise by an automorphism; uniformly homogeneous when
extensions can be chosen functorially, i.e. there is an operator K on
substructure isomorphisms with

    (1) K(id_A) = id,
    (2) K(f) an automorphism extending f,
    (3) K(f o g) = K(f) o K(g).

For a set-homogeneous structure, (1)-(3) are achievable exactly when each
isomorphism class of substructures admits a homomorphic section of the
restriction map aut(ambient) -> aut(representative); sections transport to all
copies by conjugation, which is how :func:`build_uniform_functor` fills its
table.

The empty substructure is excluded everywhere: its only isomorphism extends
trivially and admitting it would degenerate the fixed-set obstruction below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InputError, InternalError
from .perms import Perm, PermGroup, group_closure
from .structures import (
    FinStructure,
    PartialIso,
    automorphism_group,
    canonical_form,
    find_isomorphisms,
    find_embeddings,
    induced_substructure,
    age,
)


# ---------------------------------------------------------------------------
# result / witness types


@dataclass(frozen=True)
class Obstruction:
    """A nontrivial automorphism fixing a nonempty vertex set pointwise.

    For a finite homogeneous structure this certifies that no functor on its
    age can realize one-point extensions naturally (the inclusion of the fixed
    set forces the automorphism to the identity).
    """

    fixed_set: tuple[int, ...]
    witness: Perm

    def __post_init__(self):
        if not self.fixed_set:
            raise InputError("obstruction requires a nonempty fixed set")
        if self.witness.is_identity():
            raise InputError("obstruction witness must differ from the identity")
        if any(self.witness(v) != v for v in self.fixed_set):
            raise InputError("witness does not fix the declared set pointwise")


@dataclass(frozen=True)
class SectionWitness:
    """A homomorphic extension operator for one substructure class.

    ``subset`` is the embedded copy the section was computed on, ``class_rep``
    the induced structure on it (indices follow the sorted subset), and
    ``table`` maps every automorphism of the copy to an ambient automorphism
    extending it, multiplicatively.
    """

    class_rep: FinStructure
    subset: tuple[int, ...]
    table: dict[Perm, Perm] = field(compare=False)

    def __post_init__(self):
        aut_a = automorphism_group(self.class_rep)
        if set(self.table) != set(aut_a.elements):
            raise InputError("section table must be defined on exactly aut(class_rep)")
        verts = self.subset
        for h, g in self.table.items():
            if any(g(verts[i]) != verts[h(i)] for i in range(len(verts))):
                raise InputError(f"section image {g} does not extend {h} on {verts}")
        for h1 in self.table:
            for h2 in self.table:
                if self.table[h1 * h2] != self.table[h1] * self.table[h2]:
                    raise InputError("section table is not a homomorphism")


@dataclass(frozen=True)
class UniformFunctor:
    """A full extension-operator table over all substructure isomorphisms.

    Keys are ``(domain, images)`` with ``domain`` a sorted vertex tuple and
    ``images[i]`` the image of ``domain[i]``; values are ambient automorphisms.
    ``anchors`` records, per class representative, the automorphism carrying
    the representative onto each copy (used to fill the table by conjugation).
    """

    structure: FinStructure
    table: dict[tuple[tuple[int, ...], tuple[int, ...]], Perm] = field(compare=False)
    anchors: dict[tuple[int, ...], dict[tuple[int, ...], Perm]] = field(compare=False)

    def apply(self, domain: Iterable[int], images: Iterable[int]) -> Perm:
        key = (tuple(domain), tuple(images))
        if key not in self.table:
            raise InputError(f"no table entry for isomorphism {key}")
        return self.table[key]

    def verify(self) -> None:
        """Exhaustive scan of conditions (1)-(3); raises InternalError on failure."""
        aut = automorphism_group(self.structure).elements
        ident = Perm.identity(self.structure.size)
        by_domain: dict[tuple[int, ...], list[tuple[tuple[int, ...], tuple[int, ...]]]] = {}
        for dom, img in self.table:
            by_domain.setdefault(dom, []).append((dom, img))
        for (dom, img), g in self.table.items():
            if g not in aut:
                raise InternalError(f"table value for {(dom, img)} is not an automorphism")
            if any(g(v) != w for v, w in zip(dom, img)):
                raise InternalError(f"table value for {(dom, img)} does not extend the isomorphism")
        for dom in by_domain:
            if self.table.get((dom, dom)) != ident:
                raise InternalError(f"identity isomorphism on {dom} is not sent to the identity")
        for (dom_f, img_f), kf in self.table.items():
            mid = tuple(sorted(img_f))
            lut_f = dict(zip(dom_f, img_f))
            for (dom_g, img_g) in by_domain.get(mid, ()):
                lut_g = dict(zip(dom_g, img_g))
                composite = (dom_f, tuple(lut_g[lut_f[v]] for v in dom_f))
                kg = self.table[(dom_g, img_g)]
                if self.table.get(composite) != kg * kf:
                    raise InternalError(
                        f"composition law fails on g={(dom_g, img_g)} after f={(dom_f, img_f)}"
                    )


@dataclass(frozen=True)
class UniformityResult:
    ok: bool
    functor: Optional[UniformFunctor]
    failing_class: Optional[tuple[int, ...]]
    set_homogeneity_failure: Optional[tuple[tuple[int, ...], tuple[int, ...]]]
    sections: tuple[SectionWitness, ...] = ()


@dataclass(frozen=True)
class HomogeneityReport:
    """Combined verdicts for one structure, with witnesses for every failure.

    ``katetov_obstructed`` is None when the structure is not homogeneous (the
    obstruction test only applies to homogeneous structures).
    """

    homogeneous: bool
    set_homogeneous: bool
    uniformly_homogeneous: bool
    katetov_obstructed: Optional[bool]
    homogeneity_failure: Optional[PartialIso] = None
    set_homogeneity_failure: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    uniformity_failing_class: Optional[tuple[int, ...]] = None
    katetov_witness: Optional[Obstruction] = None

    def __post_init__(self):
        if self.uniformly_homogeneous and not self.homogeneous:
            raise InternalError("uniformly homogeneous structure reported as non-homogeneous")
        if self.homogeneous and not self.set_homogeneous:
            raise InternalError("homogeneous structure reported as non-set-homogeneous")

    def to_json_dict(self) -> dict:
        def subset(t):
            return list(t) if t is not None else None

        return {
            "homogeneous": self.homogeneous,
            "set_homogeneous": self.set_homogeneous,
            "uniformly_homogeneous": self.uniformly_homogeneous,
            "katetov_obstructed": self.katetov_obstructed,
            "witnesses": {
                "homogeneity_failure": None
                if self.homogeneity_failure is None
                else {
                    "domain": list(self.homogeneity_failure.domain),
                    "images": list(self.homogeneity_failure.images),
                },
                "set_homogeneity_failure": None
                if self.set_homogeneity_failure is None
                else [subset(self.set_homogeneity_failure[0]), subset(self.set_homogeneity_failure[1])],
                "uniformity_failing_class": subset(self.uniformity_failing_class),
                "katetov_obstruction": None
                if self.katetov_witness is None
                else {
                    "fixed_set": list(self.katetov_witness.fixed_set),
                    "automorphism": list(self.katetov_witness.witness.mapping),
                },
            },
        }


# ---------------------------------------------------------------------------
# basic checkers


def _subset_restrictions(aut: PermGroup, verts: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    return frozenset(tuple(g(v) for v in verts) for g in aut.elements)


def is_homogeneous(s: FinStructure) -> tuple[bool, Optional[PartialIso]]:
    """Exhaustive check over all ordered pairs of nonempty subsets.

    Returns the first isomorphism (in (size, domain, codomain, map) order)
    admitting no automorphism extension, if any.
    """
    aut = automorphism_group(s)
    for size in range(1, s.size + 1):
        combos = list(itertools.combinations(range(s.size), size))
        induced = {a: induced_substructure(s, a)[0] for a in combos}
        restr = {a: _subset_restrictions(aut, a) for a in combos}
        for a in combos:
            sa = induced[a]
            for b in combos:
                for m in find_isomorphisms(sa, induced[b]):
                    images = tuple(b[m[i]] for i in range(size))
                    if images not in restr[a]:
                        return False, PartialIso(s, s, a, images)
    return True, None


def has_extension_property(s: FinStructure) -> tuple[bool, Optional[tuple]]:
    """Independent formulation of homogeneity via one-sided extensions.

    For every pair A, B in the age with an embedding f: A -> B and every
    embedding e: A -> s there must be an embedding g: B -> s with g o f = e.
    Equivalent to :func:`is_homogeneous` on finite structures (B may be the
    whole structure, which forces extensions to be automorphisms).
    """
    reps = age(s)
    into_s = [find_embeddings(rep, s) for rep in reps]
    for ia, a in enumerate(reps):
        for ib, b in enumerate(reps):
            if a.size > b.size:
                continue
            for f in find_embeddings(a, b):
                for e in into_s[ia]:
                    if not any(
                        all(g[f[i]] == e[i] for i in range(a.size)) for g in into_s[ib]
                    ):
                        return False, (a, b, f, e)
    return True, None


def is_set_homogeneous(s: FinStructure) -> tuple[bool, Optional[tuple]]:
    """True when every isomorphic pair of nonempty substructures is linked
    setwise by an automorphism; otherwise returns the first failing pair."""
    aut = automorphism_group(s)
    for size in range(1, s.size + 1):
        combos = list(itertools.combinations(range(s.size), size))
        induced = {a: induced_substructure(s, a)[0] for a in combos}
        orbits = {
            a: frozenset(frozenset(g(v) for v in a) for g in aut.elements) for a in combos
        }
        for a in combos:
            for b in combos:
                if frozenset(b) in orbits[a]:
                    continue
                if find_isomorphisms(induced[a], induced[b]):
                    return False, (a, b)
    return True, None


# ---------------------------------------------------------------------------
# sections and the extension-operator table


def _generators(group: PermGroup) -> list[Perm]:
    gens: list[Perm] = []
    have = {Perm.identity(group.degree)}
    for p in group.sorted_elements():
        if p not in have:
            gens.append(p)
            have = set(group_closure(gens).elements)
            if len(have) == group.order:
                break
    return gens


def _section_search(
    s: FinStructure,
    verts: tuple[int, ...],
    aut_s: PermGroup,
) -> Optional[SectionWitness]:
    sub, verts = induced_substructure(s, verts)
    aut_a = automorphism_group(sub)
    k = len(verts)

    ext: dict[Perm, list[Perm]] = {}
    for h in aut_a.sorted_elements():
        want = tuple(verts[h(i)] for i in range(k))
        cands = [g for g in aut_s.sorted_elements() if tuple(g(v) for v in verts) == want]
        if not cands:
            return None
        ext[h] = cands

    ident_a = Perm.identity(k)
    ident_s = Perm.identity(s.size)
    if ident_s not in ext[ident_a]:
        return None

    gens = _generators(aut_a)
    elems = aut_a.sorted_elements()

    def expand(gen_images: dict[Perm, Perm]) -> Optional[dict[Perm, Perm]]:
        table = {ident_a: ident_s}
        frontier = [ident_a]
        while frontier:
            nxt = []
            for h in frontier:
                for gen in gens:
                    h2 = gen * h
                    img2 = gen_images[gen] * table[h]
                    if h2 in table:
                        if table[h2] != img2:
                            return None
                    else:
                        table[h2] = img2
                        nxt.append(h2)
            frontier = nxt
        if len(table) != len(elems):
            raise InternalError("generator set failed to span the automorphism group")
        return table

    ext_sets = {h: set(cands) for h, cands in ext.items()}
    for choice in itertools.product(*(ext[g] for g in gens)):
        table = expand(dict(zip(gens, choice)))
        if table is None:
            continue
        if any(table[h] not in ext_sets[h] for h in elems):
            continue
        ok = all(
            table[h1 * h2] == table[h1] * table[h2] for h1 in elems for h2 in elems
        )
        if ok:
            return SectionWitness(class_rep=sub, subset=verts, table=table)
    return None


def section_search(s: FinStructure, subset: Iterable[int]) -> Optional[SectionWitness]:
    """Search for a homomorphic extension operator on one embedded copy.

    Exhausts all multiplicative assignments from the copy's automorphism group
    into its ambient extensions; None means no such operator exists. Requires
    a set-homogeneous ambient structure and a nonempty subset.
    """
    verts = tuple(sorted(set(int(v) for v in subset)))
    if not verts:
        raise InputError("section search requires a nonempty subset")
    if any(not (0 <= v < s.size) for v in verts):
        raise InputError(f"subset {verts} outside universe 0..{s.size - 1}")
    ok, _ = is_set_homogeneous(s)
    if not ok:
        raise InputError("section search requires a set-homogeneous structure")
    return _section_search(s, verts, automorphism_group(s))


def _class_decomposition(s: FinStructure):
    """Subsets of the universe grouped by isomorphism class of the induced
    substructure, each class keyed by its first (size, lex) representative."""
    classes: dict[bytes, list[tuple[int, ...]]] = {}
    order: list[bytes] = []
    for size in range(1, s.size + 1):
        for verts in itertools.combinations(range(s.size), size):
            sub, _ = induced_substructure(s, verts)
            key = canonical_form(sub).code
            if key not in classes:
                classes[key] = []
                order.append(key)
            classes[key].append(verts)
    return [(key, classes[key]) for key in order]


def build_uniform_functor(s: FinStructure, sections: Iterable[SectionWitness]) -> UniformFunctor:
    """Assemble the full extension-operator table from one section per class.

    Copies of each class are reached by anchor automorphisms chosen through
    set-homogeneity; an isomorphism f: X -> Y is conjugated back to the class
    representative, pushed through the section, and conjugated forward again.
    The finished table is re-verified against conditions (1)-(3) before it is
    returned; failure there is a bug, not bad input.
    """
    ok, _ = is_set_homogeneous(s)
    if not ok:
        raise InputError("a uniform extension operator requires a set-homogeneous structure")
    aut_s = automorphism_group(s)
    aut_sorted = aut_s.sorted_elements()

    by_class: dict[bytes, SectionWitness] = {}
    for sec in sections:
        key = canonical_form(sec.class_rep).code
        if key in by_class:
            raise InputError("duplicate section for one isomorphism class")
        by_class[key] = sec

    table: dict[tuple[tuple[int, ...], tuple[int, ...]], Perm] = {}
    anchors: dict[tuple[int, ...], dict[tuple[int, ...], Perm]] = {}

    for key, copies in _class_decomposition(s):
        if key not in by_class:
            raise InputError("sections must cover every isomorphism class of substructures")
        sec = by_class[key]
        rep = sec.subset
        rep_pos = {v: i for i, v in enumerate(rep)}
        rep_set = set(rep)
        phi: dict[tuple[int, ...], Perm] = {}
        for copy in copies:
            copy_set = set(copy)
            for g in aut_sorted:
                if {g(v) for v in rep} == copy_set:
                    phi[copy] = g
                    break
            else:
                raise InternalError(f"set-homogeneity failed to carry {rep} onto {copy}")
        anchors[rep] = phi

        induced_cache = {copy: induced_substructure(s, copy)[0] for copy in copies}
        for x in copies:
            sx = induced_cache[x]
            phi_x = phi[x]
            for y in copies:
                phi_y_inv = phi[y].inverse()
                for m in find_isomorphisms(sx, induced_cache[y]):
                    lut = {x[i]: y[m[i]] for i in range(len(x))}
                    psi = Perm(tuple(rep_pos[phi_y_inv(lut[phi_x(v)])] for v in rep))
                    value = phi[y] * sec.table[psi] * phi_x.inverse()
                    table[(x, tuple(lut[v] for v in x))] = value

    functor = UniformFunctor(structure=s, table=table, anchors=anchors)
    functor.verify()
    return functor


def is_uniformly_homogeneous(s: FinStructure, build_functor: bool = True) -> UniformityResult:
    """Decide uniform homogeneity; sections are searched once per class.

    Set-homogeneity is necessary and checked first. When every class has a
    section the structure is uniformly homogeneous (the assembled table
    extends every substructure isomorphism); the first section-less class is
    reported otherwise. ``build_functor=False`` skips assembling the full
    table, which is quadratic in the number of substructure isomorphisms.
    """
    ok, wit = is_set_homogeneous(s)
    if not ok:
        return UniformityResult(False, None, None, wit)
    aut_s = automorphism_group(s)
    sections: list[SectionWitness] = []
    for key, copies in _class_decomposition(s):
        rep = copies[0]
        sec = _section_search(s, rep, aut_s)
        if sec is None:
            return UniformityResult(False, None, rep, None)
        sections.append(sec)
    functor = build_uniform_functor(s, sections) if build_functor else None
    return UniformityResult(True, functor, None, None, tuple(sections))


def katetov_obstruction(s: FinStructure) -> Optional[Obstruction]:
    """First nontrivial automorphism with a nonempty fixed set, if any.

    Only meaningful (and only accepted) for homogeneous structures, where it
    certifies that no functor on the age realizes one-point extensions.
    """
    ok, _ = is_homogeneous(s)
    if not ok:
        raise InputError("the fixed-set obstruction applies to homogeneous structures only")
    for g in automorphism_group(s).sorted_elements():
        if g.is_identity():
            continue
        fixed = g.fixed_points()
        if fixed:
            return Obstruction(fixed_set=fixed, witness=g)
    return None


def analyze(s: FinStructure) -> HomogeneityReport:
    """Run every decision procedure on one structure and bundle the verdicts."""
    hom, hom_wit = is_homogeneous(s)
    set_hom, set_wit = is_set_homogeneous(s)
    uni = is_uniformly_homogeneous(s, build_functor=False)
    if hom:
        kat = katetov_obstruction(s)
        katetov_obstructed: Optional[bool] = kat is not None
    else:
        kat = None
        katetov_obstructed = None
    return HomogeneityReport(
        homogeneous=hom,
        set_homogeneous=set_hom,
        uniformly_homogeneous=uni.ok,
        katetov_obstructed=katetov_obstructed,
        homogeneity_failure=hom_wit,
        set_homogeneity_failure=set_wit,
        uniformity_failing_class=uni.failing_class,
        katetov_witness=kat,
    )
