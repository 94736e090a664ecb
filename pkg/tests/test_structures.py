import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from homstruct.errors import CapabilityError, InputError
from homstruct.fixtures import digraph_m, directed_cycle, edgeless_set, eta_perm
from homstruct.perms import Perm
from homstruct.structures import (
    FinStructure,
    PartialIso,
    Signature,
    age,
    automorphism_group,
    canonical_form,
    canonicalize,
    dump_structure,
    find_embeddings,
    find_isomorphisms,
    induced_substructure,
    is_isomorphic,
    load_structure,
    relabel,
    structure_from_json_dict,
)
from oracles import naive_embeddings, naive_isomorphisms


def small_digraphs(max_size=4):
    """Random small digraphs as (size, edge set)."""
    return st.integers(1, max_size).flatmap(
        lambda n: st.frozensets(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * n
        ).map(lambda es: FinStructure.digraph(n, sorted(es)))
    )


# --- construction and validation ---


def test_signature_validation():
    with pytest.raises(InputError):
        Signature((("E", 2), ("E", 1)))
    with pytest.raises(InputError):
        Signature((("R", 0),))
    assert Signature.empty().relations == ()


def test_structure_validation():
    with pytest.raises(InputError):
        FinStructure.digraph(2, [(0, 2)])
    with pytest.raises(InputError):
        FinStructure.make(Signature.digraph(), 2, {"E": [(0,)]})
    with pytest.raises(InputError):
        FinStructure.make(Signature.digraph(), 2, {"F": [(0, 1)]})


def test_make_sorts_and_dedups():
    s = FinStructure.digraph(2, [(1, 0), (0, 1), (1, 0)])
    assert s.rel("E") == ((0, 1), (1, 0))


# --- induced substructures ---


def test_induced_hub_pair_is_loop_clique(m):
    sub, verts = induced_substructure(m, (0, 1))
    assert verts == (0, 1)
    assert sub.rel("E") == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_induced_full_universe_is_identity(m):
    sub, verts = induced_substructure(m, range(6))
    assert sub == m and verts == tuple(range(6))


def test_induced_cycle_part_is_directed_4_cycle(m):
    sub, _ = induced_substructure(m, (2, 3, 4, 5))
    assert is_isomorphic(sub, directed_cycle(4))


def test_induced_rejects_out_of_range(m):
    with pytest.raises(InputError):
        induced_substructure(m, (0, 6))


@given(small_digraphs(), st.data())
def test_induced_is_monotone(s, data):
    outer = data.draw(st.sets(st.integers(0, s.size - 1)))
    inner = data.draw(st.sets(st.sampled_from(sorted(outer)) if outer else st.nothing()))
    via_outer, overts = induced_substructure(s, outer)
    positions = [overts.index(v) for v in sorted(inner)]
    twice, _ = induced_substructure(via_outer, positions)
    direct, _ = induced_substructure(s, inner)
    assert twice == direct


# --- isomorphisms and embeddings ---


def test_single_point_isomorphism():
    a = FinStructure.digraph(1, [])
    assert find_isomorphisms(a, a) == [(0,)]


def test_m_has_exactly_four_self_isomorphisms(m):
    assert len(find_isomorphisms(m, m)) == 4


def test_reversed_edge_has_one_isomorphism():
    a = FinStructure.digraph(2, [(0, 1)])
    b = FinStructure.digraph(2, [(1, 0)])
    assert find_isomorphisms(a, b) == [(1, 0)]


def test_isomorphisms_in_lexicographic_order():
    s = edgeless_set(3)
    found = find_isomorphisms(s, s)
    assert found == sorted(found)
    assert len(found) == 6


@settings(max_examples=60)
@given(small_digraphs(3), small_digraphs(3))
def test_isomorphisms_match_naive_enumeration(a, b):
    assert find_isomorphisms(a, b) == sorted(naive_isomorphisms(a, b))


@settings(max_examples=60)
@given(small_digraphs(2), small_digraphs(4))
def test_embeddings_match_naive_enumeration(a, b):
    assert find_embeddings(a, b) == naive_embeddings(a, b)


def test_mismatched_signatures_are_never_isomorphic():
    assert find_isomorphisms(edgeless_set(2), FinStructure.digraph(2, [])) == []


# --- automorphism groups ---


def test_aut_m_is_generated_by_rotation(m, eta):
    g = automorphism_group(m)
    assert g.order == 4
    assert eta in g
    assert {p.order() for p in g.elements} == {1, 2, 4}


def test_aut_edgeless_three_points_is_s3():
    assert automorphism_group(edgeless_set(3)).order == 6


def test_aut_directed_path_is_trivial():
    g = automorphism_group(FinStructure.digraph(2, [(0, 1)]))
    assert g.order == 1


@settings(max_examples=40)
@given(small_digraphs(4), st.data())
def test_aut_conjugation_equivariance(s, data):
    sigma = Perm(tuple(data.draw(st.permutations(list(range(s.size))))))
    lhs = automorphism_group(relabel(s, sigma))
    rhs = {sigma * g * sigma.inverse() for g in automorphism_group(s).elements}
    assert set(lhs.elements) == rhs


# --- canonical forms ---


def test_canonical_form_ignores_labels():
    a = FinStructure.digraph(2, [(0, 1)])
    b = FinStructure.digraph(2, [(1, 0)])
    assert canonical_form(a) == canonical_form(b)
    assert canonical_form(edgeless_set(2)) == canonical_form(edgeless_set(2))


def test_canonical_form_of_m_is_rotation_invariant(m, eta):
    assert canonical_form(m) == canonical_form(relabel(m, eta))


def test_canonical_form_size_bound():
    with pytest.raises(CapabilityError):
        canonical_form(edgeless_set(9))


@settings(max_examples=40)
@given(small_digraphs(4), st.data())
def test_canonicalize_is_relabeling_invariant(s, data):
    sigma = Perm(tuple(data.draw(st.permutations(list(range(s.size))))))
    assert canonicalize(s) == canonicalize(relabel(s, sigma))


@settings(max_examples=40)
@given(small_digraphs(3), small_digraphs(3))
def test_equal_codes_iff_isomorphic(a, b):
    assert (canonical_form(a) == canonical_form(b)) == bool(find_isomorphisms(a, b))


# --- age ---


def test_age_of_single_looped_point():
    s = FinStructure.digraph(1, [(0, 0)])
    assert age(s) == [s]


def test_age_of_m_contains_cycle_and_loop_clique(m):
    classes = age(m)
    # frozen from an exhaustive run, cross-checked by pairwise-isomorphism dedup
    assert len(classes) == 21
    c4 = canonical_form(directed_cycle(4))
    clique = canonical_form(induced_substructure(m, (0, 1))[0])
    codes = {canonical_form(c) for c in classes}
    assert c4 in codes and clique in codes


def test_age_matches_pairwise_isomorphism_dedup(m):
    reps = []
    for k in range(1, 7):
        for verts in itertools.combinations(range(6), k):
            sub, _ = induced_substructure(m, verts)
            if not any(naive_isomorphisms(sub, r) for r in reps if r.size == sub.size):
                reps.append(sub)
    assert len(reps) == len(age(m))


def test_age_sorted_by_size_then_code(m):
    classes = age(m)
    keys = [(c.size, canonical_form(c).code) for c in classes]
    assert keys == sorted(keys)


# --- partial isomorphisms ---


def test_partial_iso_validates(m):
    PartialIso(m, m, (0, 1), (1, 0))
    with pytest.raises(InputError):
        PartialIso(m, m, (0, 2), (2, 0))  # loop vs no loop
    with pytest.raises(InputError):
        PartialIso(m, m, (0, 1), (1, 1))


# --- JSON files ---


def test_structure_file_round_trip(tmp_path, m):
    path = tmp_path / "m.json"
    dump_structure(m, path)
    assert load_structure(path) == m


def test_fixture_file_matches_bundled_m():
    import pathlib

    path = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "M.json"
    assert load_structure(path) == digraph_m()


@pytest.mark.parametrize(
    "mangle, fragment",
    [
        (lambda d: d.pop("size"), "missing key 'size'"),
        (lambda d: d["relations"]["E"].append([0, 9]), "vertex 9 out of range"),
        (lambda d: d["relations"]["E"].append([0]), "expected a list of 2 integers"),
        (lambda d: d["relations"].update(F=[[0, 0]]), "not declared in signature"),
        (lambda d: d.update(signature=[{"name": "E"}]), "'name' and 'arity'"),
    ],
)
def test_structure_file_diagnostics(mangle, fragment, m):
    data = m.to_json_dict()
    mangle(data)
    with pytest.raises(InputError, match=".*"):
        try:
            structure_from_json_dict(data, where="doc")
        except InputError as exc:
            assert fragment in str(exc)
            raise


def test_load_structure_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(InputError, match="invalid JSON"):
        load_structure(path)
