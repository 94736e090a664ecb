"""Exhaustive classification of small digraphs by homogeneity properties.

Digraphs on n vertices are enumerated as adjacency bitmasks (bit i*n + j set
means arrow i -> j), prefiltered by the kernel stages, fully checked by a
mask-specialized homogeneity test, deduplicated up to isomorphism, and the
surviving class representatives are classified for uniform homogeneity with
the generic machinery. The final report is independent of chunk boundaries.

Scope note, repeated in every report header: the search covers exactly the
digraph signature (one binary relation, loops allowed), not arbitrary finite
relational structures.

Full 6-vertex enumeration (2^36 masks) is out of scope; n = 6 is supported
only on an explicit mask range, which is enough to verify supplied structures
such as the bundled digraph M.
"""

from __future__ import annotations

import itertools
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from ._kernels import stage_codes
from .errors import CapabilityError, InputError
from .homogeneity import is_uniformly_homogeneous
from .structures import FinStructure

RESTRICTION_NOTE = (
    "search restricted to digraphs (a single binary relation, loops allowed); "
    "other finite relational signatures are not enumerated"
)

_MAX_ENUM = 6
_BLOCK = 1 << 20
_STAGE_NAMES = ("degree", "neighborhood")


def structure_to_mask(s: FinStructure) -> int:
    if s.signature.names != ("E",) or s.signature.arity("E") != 2:
        raise InputError("mask encoding requires the digraph signature (one binary relation E)")
    if s.size > _MAX_ENUM:
        raise CapabilityError(f"mask encoding supports at most {_MAX_ENUM} vertices")
    mask = 0
    for i, j in s.rel("E"):
        mask |= 1 << (i * s.size + j)
    return mask


def mask_to_structure(n: int, mask: int) -> FinStructure:
    if not (0 <= mask < 1 << (n * n)):
        raise InputError(f"mask {mask} out of range for {n} vertices")
    edges = [(i, j) for i in range(n) for j in range(n) if (mask >> (i * n + j)) & 1]
    return FinStructure.digraph(n, edges)


def enumerate_digraphs(n: int) -> Iterator[FinStructure]:
    """All 2^(n*n) labeled digraphs on n vertices, in mask order."""
    if n > _MAX_ENUM:
        raise CapabilityError(f"enumeration supports at most {_MAX_ENUM} vertices, got {n}")
    if n < 1:
        raise InputError(f"vertex count must be positive, got {n}")
    for mask in range(1 << (n * n)):
        yield mask_to_structure(n, mask)


# ---------------------------------------------------------------------------
# single-structure prefilters (reference semantics for the kernel stages)


def _digraph_stats(s: FinStructure):
    if s.signature.names != ("E",) or s.signature.arity("E") != 2:
        raise InputError("prefilters apply to the digraph signature only")
    n = s.size
    rows = [0] * n
    for i, j in s.rel("E"):
        rows[i] |= 1 << j
    cols = [0] * n
    for i in range(n):
        for j in range(n):
            if (rows[j] >> i) & 1:
                cols[i] |= 1 << j
    loops = [(rows[i] >> i) & 1 for i in range(n)]
    loopmask = sum(bit << i for i, bit in enumerate(loops))
    return n, rows, cols, loops, loopmask


def invariant_prefilter(s: FinStructure) -> bool:
    """Necessary condition for homogeneity: within each loop class all
    vertices share one (out-degree, in-degree) pair."""
    n, rows, cols, loops, _ = _digraph_stats(s)
    seen: dict[int, tuple[int, int]] = {}
    for i in range(n):
        stat = (bin(rows[i]).count("1"), bin(cols[i]).count("1"))
        if loops[i] in seen and seen[loops[i]] != stat:
            return False
        seen.setdefault(loops[i], stat)
    return True


def neighborhood_prefilter(s: FinStructure) -> bool:
    """Second necessary condition: within each loop class the reciprocated
    degree and the counts of looped out-/in-neighbors are constant."""
    n, rows, cols, loops, loopmask = _digraph_stats(s)
    seen: dict[int, tuple[int, int, int]] = {}
    for i in range(n):
        stat = (
            bin(rows[i] & cols[i]).count("1"),
            bin(rows[i] & loopmask).count("1"),
            bin(cols[i] & loopmask).count("1"),
        )
        if loops[i] in seen and seen[loops[i]] != stat:
            return False
        seen.setdefault(loops[i], stat)
    return True


# ---------------------------------------------------------------------------
# mask-specialized full checkers


def _mask_rows(n: int, mask: int) -> list[int]:
    full = (1 << n) - 1
    return [(mask >> (i * n)) & full for i in range(n)]


def _mask_profiles(n: int, rows: list[int]):
    cols = [0] * n
    for i in range(n):
        for j in range(n):
            if (rows[j] >> i) & 1:
                cols[i] |= 1 << j
    loopmask = 0
    for i in range(n):
        if (rows[i] >> i) & 1:
            loopmask |= 1 << i
    prof = []
    for i in range(n):
        prof.append(
            (
                (rows[i] >> i) & 1,
                bin(rows[i]).count("1"),
                bin(cols[i]).count("1"),
                bin(rows[i] & cols[i]).count("1"),
                bin(rows[i] & loopmask).count("1"),
                bin(cols[i] & loopmask).count("1"),
            )
        )
    return prof


def digraph_automorphisms(n: int, mask: int) -> list[tuple[int, ...]]:
    """All automorphisms of the mask-encoded digraph, as image tuples."""
    rows = _mask_rows(n, mask)
    prof = _mask_profiles(n, rows)
    cand = [[w for w in range(n) if prof[w] == prof[u]] for u in range(n)]
    out: list[tuple[int, ...]] = []
    img = [-1] * n
    used = [False] * n

    def rec(u: int) -> None:
        if u == n:
            out.append(tuple(img))
            return
        for w in cand[u]:
            if used[w]:
                continue
            ok = True
            for j in range(u):
                if ((rows[u] >> j) & 1) != ((rows[w] >> img[j]) & 1) or (
                    (rows[j] >> u) & 1
                ) != ((rows[img[j]] >> w) & 1):
                    ok = False
                    break
            if ok:
                img[u] = w
                used[w] = True
                rec(u + 1)
                used[w] = False
        img[u] = -1

    rec(0)
    return out


def _embedding_count(n: int, rows: list[int], verts: tuple[int, ...]) -> int:
    """Number of embeddings of the induced substructure on ``verts`` back into
    the whole digraph (image need not be ``verts``)."""
    k = len(verts)
    img = [0] * k
    used = [False] * n
    count = 0

    def rec(i: int) -> None:
        nonlocal count
        if i == k:
            count += 1
            return
        u = verts[i]
        lu = (rows[u] >> u) & 1
        for w in range(n):
            if used[w] or ((rows[w] >> w) & 1) != lu:
                continue
            ok = True
            for j in range(i):
                v = verts[j]
                x = img[j]
                if ((rows[u] >> v) & 1) != ((rows[w] >> x) & 1) or (
                    (rows[v] >> u) & 1
                ) != ((rows[x] >> w) & 1):
                    ok = False
                    break
            if ok:
                img[i] = w
                used[w] = True
                rec(i + 1)
                used[w] = False

    rec(0)
    return count


def mask_homogeneous(n: int, mask: int) -> bool:
    """Homogeneity by counting: for every nonempty subset, the number of
    embeddings of its induced substructure equals the number of distinct
    automorphism restrictions (restrictions are always embeddings, so equality
    of counts means every isomorphism extends)."""
    rows = _mask_rows(n, mask)
    auts = digraph_automorphisms(n, mask)
    for k in range(1, n + 1):
        for verts in itertools.combinations(range(n), k):
            restr = len({tuple(g[v] for v in verts) for g in auts})
            if _embedding_count(n, rows, verts) != restr:
                return False
    return True


@lru_cache(maxsize=8)
def _all_perms(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(n)))


def canonical_mask(n: int, mask: int) -> int:
    """Minimum of the mask over all vertex relabelings."""
    rows = _mask_rows(n, mask)
    best = None
    for p in _all_perms(n):
        m2 = 0
        for i in range(n):
            ri = rows[i]
            base = p[i] * n
            for j in range(n):
                if (ri >> j) & 1:
                    m2 |= 1 << (base + p[j])
        if best is None or m2 < best:
            best = m2
    return best


def pipeline_verdict(
    n: int,
    mask: int,
    stages: tuple[str, ...] = _STAGE_NAMES,
    backend: Optional[str] = None,
) -> tuple[bool, bool]:
    """(homogeneous, uniformly homogeneous) for one mask, exactly as the
    search pipeline computes them (prefilter stages then full checks)."""
    codes = stage_codes(np.array([mask], dtype=np.int64), n, backend=backend)
    if "degree" in stages and codes[0] < 1:
        return False, False
    if "neighborhood" in stages and codes[0] < 2:
        return False, False
    if not mask_homogeneous(n, mask):
        return False, False
    uni = is_uniformly_homogeneous(mask_to_structure(n, mask), build_functor=False)
    return True, uni.ok


# ---------------------------------------------------------------------------
# chunked classification with checkpointing


@dataclass(frozen=True)
class SearchConfig:
    max_vertices: int = 5
    chunks: int = 1
    checkpoint_path: Optional[str] = None
    stages: tuple[str, ...] = _STAGE_NAMES
    mask_range: Optional[tuple[int, int]] = None
    backend: Optional[str] = None

    def __post_init__(self):
        if not (1 <= self.max_vertices <= _MAX_ENUM):
            raise InputError(f"max_vertices must be within 1..{_MAX_ENUM}")
        if self.chunks < 1:
            raise InputError("chunks must be at least 1")
        for stage in self.stages:
            if stage not in _STAGE_NAMES:
                raise InputError(f"unknown filter stage {stage!r}")
        if "neighborhood" in self.stages and "degree" not in self.stages:
            raise InputError("the neighborhood stage requires the degree stage")
        if self.mask_range is not None:
            lo, hi = self.mask_range
            if not (0 <= lo < hi):
                raise InputError(f"invalid mask range {self.mask_range}")

    def config_key(self) -> dict:
        return {
            "max_vertices": self.max_vertices,
            "chunks": self.chunks,
            "stages": list(self.stages),
            "mask_range": list(self.mask_range) if self.mask_range else None,
        }


@dataclass(frozen=True)
class VertexCountReport:
    n: int
    stage_counts: tuple[tuple[str, int], ...]
    homogeneous_classes: int
    non_uniform_classes: int
    witnesses: tuple[FinStructure, ...]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "stages": [{"stage": name, "count": count} for name, count in self.stage_counts],
            "homogeneous_classes": self.homogeneous_classes,
            "non_uniform_classes": self.non_uniform_classes,
            "witnesses": [w.to_json_dict() for w in self.witnesses],
        }


@dataclass(frozen=True)
class SearchReport:
    config: SearchConfig
    results: tuple[VertexCountReport, ...]
    wall_time_seconds: float

    def to_json_dict(self, include_wall_time: bool = True) -> dict:
        out = {
            "schema": 1,
            "restriction": RESTRICTION_NOTE,
            "max_vertices": self.config.max_vertices,
            "chunks": self.config.chunks,
            "stages_enabled": list(self.config.stages),
            "results": [r.to_json_dict() for r in self.results],
        }
        if include_wall_time:
            out["wall_time_seconds"] = round(self.wall_time_seconds, 3)
        return out

    def render_text(self) -> str:
        lines = [f"digraph homogeneity search (note: {RESTRICTION_NOTE})"]
        for r in self.results:
            lines.append(f"n = {r.n}")
            for name, count in r.stage_counts:
                lines.append(f"  {name:<24} {count}")
            lines.append(f"  homogeneous classes      {r.homogeneous_classes}")
            lines.append(f"  hom-but-not-uniform      {r.non_uniform_classes}")
            for w in r.witnesses:
                lines.append(f"    witness: size={w.size} edges={list(w.rel('E'))}")
        total_nonuniform = sum(r.non_uniform_classes for r in self.results)
        if total_nonuniform:
            lines.append(f"found {total_nonuniform} homogeneous-but-not-uniform class(es)")
        else:
            lines.append(
                "no homogeneous-but-not-uniformly-homogeneous digraph exists in the searched range"
            )
        lines.append(f"wall time: {self.wall_time_seconds:.2f}s")
        return "\n".join(lines)


def _classify_chunk(args) -> tuple[dict, list[int]]:
    """Worker for one contiguous mask range: kernel stages plus full checks."""
    n, start, stop, stages, backend = args
    counts = {"degree": 0, "neighborhood": 0, "homogeneous": 0}
    hom_masks: list[int] = []
    use_degree = "degree" in stages
    use_nbhd = "neighborhood" in stages
    for b0 in range(start, stop, _BLOCK):
        b1 = min(stop, b0 + _BLOCK)
        masks = np.arange(b0, b1, dtype=np.int64)
        if use_degree:
            codes = stage_codes(masks, n, backend=backend)
            counts["degree"] += int((codes >= 1).sum())
            counts["neighborhood"] += int((codes == 2).sum())
            survivors = masks[codes == 2] if use_nbhd else masks[codes >= 1]
        else:
            survivors = masks
        for mask in survivors.tolist():
            if mask_homogeneous(n, mask):
                counts["homogeneous"] += 1
                hom_masks.append(mask)
    return counts, hom_masks


def _chunk_ranges(start: int, stop: int, chunks: int) -> list[tuple[int, int]]:
    width = stop - start
    out = []
    for c in range(chunks):
        lo = start + width * c // chunks
        hi = start + width * (c + 1) // chunks
        out.append((lo, hi))
    return out


class _Checkpoint:
    """Plain-text chunk ledger, rewritten atomically after every chunk."""

    def __init__(self, path: Optional[str], config: SearchConfig):
        self.path = path
        self.config_key = config.config_key()
        self.done: dict[str, tuple[dict, list[int]]] = {}
        if path and os.path.exists(path):
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"unreadable checkpoint {path}: {exc}") from None
            if data.get("schema") != 1 or data.get("config") != self.config_key:
                raise InputError(
                    f"checkpoint {path} was written for a different search configuration"
                )
            for key, entry in data["done"].items():
                self.done[key] = (entry["counts"], entry["hom_masks"])

    def get(self, key: str):
        return self.done.get(key)

    def put(self, key: str, counts: dict, hom_masks: list[int]) -> None:
        self.done[key] = (counts, hom_masks)
        if not self.path:
            return
        payload = {
            "schema": 1,
            "config": self.config_key,
            "done": {
                k: {"counts": c, "hom_masks": masks} for k, (c, masks) in self.done.items()
            },
        }
        tmp = self.path + ".tmp"
        try:
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True)
                fh.write("\n")
            os.replace(tmp, self.path)
        except OSError as exc:
            raise InputError(f"cannot write checkpoint {self.path}: {exc}") from None


def _threads() -> int:
    raw = os.environ.get("THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


def classify_all(config: SearchConfig) -> SearchReport:
    """Classify every digraph with up to ``config.max_vertices`` vertices.

    Pipeline per mask: prefilter stages, mask-level homogeneity, then uniform
    homogeneity once per isomorphism class of the homogeneous survivors.
    Resumable from a checkpoint; the merged report does not depend on the
    chunk count.

    Supplying ``mask_range`` switches to targeted mode: only
    ``n = max_vertices`` is classified, on that mask slice. n = 6 is available
    only this way (full 2^36 enumeration is out of scope).
    """
    t0 = time.perf_counter()
    checkpoint = _Checkpoint(config.checkpoint_path, config)
    threads = _threads()
    results = []
    sizes = (
        [config.max_vertices]
        if config.mask_range is not None
        else list(range(1, config.max_vertices + 1))
    )
    for n in sizes:
        if n == _MAX_ENUM and config.mask_range is None:
            raise CapabilityError(
                "full 6-vertex enumeration (2^36 masks) is out of scope; "
                "supply an explicit mask range or check structures directly"
            )
        full_range = config.mask_range if config.mask_range is not None else (0, 1 << (n * n))
        if full_range[1] > 1 << (n * n):
            raise InputError(f"mask range {full_range} exceeds the {n}-vertex mask space")

        ranges = _chunk_ranges(full_range[0], full_range[1], config.chunks)
        pending = []
        for ci, (lo, hi) in enumerate(ranges):
            if checkpoint.get(f"{n}/{ci}") is None:
                pending.append((ci, lo, hi))
        if pending and threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                args = [(n, lo, hi, config.stages, config.backend) for _, lo, hi in pending]
                for (ci, _, _), (counts, hom_masks) in zip(pending, pool.map(_classify_chunk, args)):
                    checkpoint.put(f"{n}/{ci}", counts, hom_masks)
        else:
            for ci, lo, hi in pending:
                counts, hom_masks = _classify_chunk((n, lo, hi, config.stages, config.backend))
                checkpoint.put(f"{n}/{ci}", counts, hom_masks)

        merged = {"degree": 0, "neighborhood": 0, "homogeneous": 0}
        hom_masks: list[int] = []
        for ci in range(len(ranges)):
            counts, masks = checkpoint.get(f"{n}/{ci}")
            for key in merged:
                merged[key] += counts[key]
            hom_masks.extend(masks)

        classes: dict[int, int] = {}
        for mask in hom_masks:
            cmask = canonical_mask(n, mask)
            classes[cmask] = classes.get(cmask, 0) + 1
        non_uniform = []
        uniform_labeled = 0
        for cmask in sorted(classes):
            rep = mask_to_structure(n, cmask)
            if is_uniformly_homogeneous(rep, build_functor=False).ok:
                uniform_labeled += classes[cmask]
            else:
                non_uniform.append(rep)

        stage_counts = [("labeled", full_range[1] - full_range[0])]
        if "degree" in config.stages:
            stage_counts.append(("degree_regular", merged["degree"]))
        if "neighborhood" in config.stages:
            stage_counts.append(("neighborhood_regular", merged["neighborhood"]))
        stage_counts.append(("homogeneous", merged["homogeneous"]))
        stage_counts.append(("uniformly_homogeneous", uniform_labeled))
        results.append(
            VertexCountReport(
                n=n,
                stage_counts=tuple(stage_counts),
                homogeneous_classes=len(classes),
                non_uniform_classes=len(non_uniform),
                witnesses=tuple(non_uniform),
            )
        )
    return SearchReport(
        config=config, results=tuple(results), wall_time_seconds=time.perf_counter() - t0
    )
