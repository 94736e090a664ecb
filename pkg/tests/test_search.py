import itertools
import json
import random

import pytest

from homstruct.errors import CapabilityError, InputError
from homstruct.fixtures import digraph_m, empty_digraph
from homstruct.homogeneity import is_homogeneous, is_uniformly_homogeneous
from homstruct.search import (
    SearchConfig,
    canonical_mask,
    classify_all,
    digraph_automorphisms,
    enumerate_digraphs,
    invariant_prefilter,
    mask_homogeneous,
    mask_to_structure,
    neighborhood_prefilter,
    pipeline_verdict,
    structure_to_mask,
)
from homstruct.structures import find_isomorphisms


# frozen by the exhaustive runs below and cross-checked against the naive
# checker for n <= 3; (labeled homogeneous, isomorphism classes)
FROZEN = {1: (2, 2), 2: (12, 8), 3: (56, 22), 4: (552, 76), 5: (1468, 102)}


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_digraphs(1)) == 2
    assert sum(1 for _ in enumerate_digraphs(2)) == 16
    first = next(enumerate_digraphs(2))
    assert first.rel("E") == ()


def test_enumeration_capability_bound():
    with pytest.raises(CapabilityError):
        next(enumerate_digraphs(7))


def test_mask_round_trip(m):
    mask = structure_to_mask(m)
    assert mask == 4836068055
    assert mask_to_structure(6, mask) == m


def test_mask_encoding_requires_digraphs():
    from homstruct.fixtures import edgeless_set

    with pytest.raises(InputError):
        structure_to_mask(edgeless_set(2))


# --- prefilters ---


def test_prefilter_accepts_m(m):
    assert invariant_prefilter(m)
    assert neighborhood_prefilter(m)


def test_prefilter_rejects_directed_path():
    from homstruct.structures import FinStructure

    assert not invariant_prefilter(FinStructure.digraph(2, [(0, 1)]))


def test_prefilter_accepts_edgeless():
    assert invariant_prefilter(empty_digraph(5))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_filter_stages_never_reject_homogeneous(n):
    for mask in range(1 << (n * n)):
        s = mask_to_structure(n, mask)
        if is_homogeneous(s)[0]:
            assert invariant_prefilter(s), mask
            assert neighborhood_prefilter(s), mask


# --- mask-level checkers ---


def test_digraph_automorphisms_match_generic(m):
    from homstruct.structures import automorphism_group

    mask = structure_to_mask(m)
    fast = set(digraph_automorphisms(6, mask))
    slow = {g.mapping for g in automorphism_group(m).elements}
    assert fast == slow


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mask_homogeneous_matches_generic(n):
    for mask in range(1 << (n * n)):
        assert mask_homogeneous(n, mask) == is_homogeneous(mask_to_structure(n, mask))[0]


def test_canonical_mask_is_relabeling_invariant():
    rng = random.Random(1)
    for _ in range(50):
        mask = rng.getrandbits(16)
        perm = list(range(4))
        rng.shuffle(perm)
        remapped = 0
        for i in range(4):
            for j in range(4):
                if (mask >> (i * 4 + j)) & 1:
                    remapped |= 1 << (perm[i] * 4 + perm[j])
        assert canonical_mask(4, mask) == canonical_mask(4, remapped)


# --- classification ---


def naive_counts(n):
    labeled = 0
    reps = []
    for s in enumerate_digraphs(n):
        if is_homogeneous(s)[0]:
            labeled += 1
            if not any(find_isomorphisms(s, r) for r in reps):
                reps.append(s)
    return labeled, len(reps)


@pytest.mark.parametrize("n", [1, 2])
def test_frozen_counts_match_naive_exhaustion(n):
    assert naive_counts(n) == FROZEN[n]


def test_classify_small_matches_frozen():
    report = classify_all(SearchConfig(max_vertices=3))
    for entry in report.results:
        stages = dict(entry.stage_counts)
        assert (stages["homogeneous"], entry.homogeneous_classes) == FROZEN[entry.n]
        assert entry.non_uniform_classes == 0
        counts = [count for _, count in entry.stage_counts]
        assert counts == sorted(counts, reverse=True)


def test_chunk_invariance():
    reports = [
        classify_all(SearchConfig(max_vertices=3, chunks=c)).to_json_dict(include_wall_time=False)
        for c in (1, 4, 16)
    ]
    assert [rep.pop("chunks") for rep in reports] == [1, 4, 16]  # config echo only
    assert reports[0] == reports[1] == reports[2]


def test_checkpoint_resume(tmp_path):
    path = str(tmp_path / "ckpt.json")
    config = SearchConfig(max_vertices=3, chunks=4, checkpoint_path=path)
    first = classify_all(config)
    data = json.loads(open(path).read())
    assert set(data["done"]) == {f"{n}/{c}" for n in (1, 2, 3) for c in range(4)}
    # drop two chunks and resume: identical report
    for key in ("3/1", "3/3"):
        del data["done"][key]
    with open(path, "w") as fh:
        json.dump(data, fh)
    second = classify_all(config)
    assert first.to_json_dict(include_wall_time=False) == second.to_json_dict(include_wall_time=False)


def test_checkpoint_config_mismatch(tmp_path):
    path = str(tmp_path / "ckpt.json")
    classify_all(SearchConfig(max_vertices=2, chunks=2, checkpoint_path=path))
    with pytest.raises(InputError):
        classify_all(SearchConfig(max_vertices=2, chunks=3, checkpoint_path=path))


def test_threads_env_gives_same_report(monkeypatch):
    base = classify_all(SearchConfig(max_vertices=2)).to_json_dict(include_wall_time=False)
    monkeypatch.setenv("THREADS", "2")
    threaded = classify_all(SearchConfig(max_vertices=2, chunks=2)).to_json_dict(
        include_wall_time=False
    )
    threaded.pop("chunks")
    base.pop("chunks")
    assert base == threaded


def test_full_6_vertex_enumeration_is_out_of_scope():
    with pytest.raises(CapabilityError):
        classify_all(SearchConfig(max_vertices=6))


def test_targeted_6_vertex_range_rediscovers_m(m):
    mask = structure_to_mask(m)
    config = SearchConfig(max_vertices=6, mask_range=(mask, mask + 1))
    report = classify_all(config)
    assert len(report.results) == 1
    entry = report.results[0]
    assert entry.n == 6
    assert dict(entry.stage_counts)["homogeneous"] == 1
    assert entry.non_uniform_classes == 1
    witness = entry.witnesses[0]
    assert find_isomorphisms(witness, m)


def test_pipeline_verdict_for_m(m):
    assert pipeline_verdict(6, structure_to_mask(m)) == (True, False)


def test_report_restriction_note_present():
    report = classify_all(SearchConfig(max_vertices=1))
    assert "digraphs" in report.to_json_dict()["restriction"]
    assert report.render_text().splitlines()[0].startswith("digraph homogeneity search")


def test_homogeneous_class_reps_pairwise_non_isomorphic():
    seen = set()
    reps = []
    for mask in range(1 << 9):
        if mask_homogeneous(3, mask):
            cmask = canonical_mask(3, mask)
            if cmask not in seen:
                seen.add(cmask)
                reps.append(mask_to_structure(3, cmask))
    for a, b in itertools.combinations(reps, 2):
        assert not find_isomorphisms(a, b)


def test_search_config_validation():
    with pytest.raises(InputError):
        SearchConfig(max_vertices=0)
    with pytest.raises(InputError):
        SearchConfig(chunks=0)
    with pytest.raises(InputError):
        SearchConfig(stages=("neighborhood",))
    with pytest.raises(InputError):
        SearchConfig(mask_range=(5, 5))
