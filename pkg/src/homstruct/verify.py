"""Built-in verification suite over the bundled objects.

Thirteen named checks re-derive, by exhaustive computation, every documented
property of the six-vertex digraph M, the finite-set extension operator, the
symmetric-group embeddings, and the cyclic-group extension theory. Each check
reports pass/fail with a deterministic detail string; the first counterexample
found is always included in the detail.

Check 13 currently fails, and the failure is real: a multiplicative section of
(Z/n)* -> (Z/k)* does not exist for (k, n) = (8, 16) or (9, 27), so Z_16 and
Z_27 are homogeneous but not uniformly homogeneous. The check is kept as
stated rather than weakened; see the README for the analysis.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import gcd

from .cyclic import (
    CyclicEmbedding,
    QZElem,
    amalgamate,
    eta,
    extend_automorphism,
    k_apply,
    lemma_solve,
    p_free_part,
    prufer_decompose,
    units,
)
from .finite_sets import SetBijection, ens_extend, ens_obstruction
from .fixtures import digraph_m, directed_cycle, edgeless_set, eta_perm
from .homogeneity import is_homogeneous, is_uniformly_homogeneous, katetov_obstruction
from .perms import Perm, PermGroup, embed_sym, group_closure, is_homomorphism
from .structures import automorphism_group, induced_substructure


@dataclass(frozen=True)
class CheckResult:
    index: int
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "all_passed": self.all_passed,
            "checks": [
                {"index": c.index, "name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }

    def render_text(self) -> str:
        lines = ["built-in verification suite"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{status}] {c.index:>2} {c.name}: {c.detail}")
        lines.append(
            "all checks passed"
            if self.all_passed
            else f"{sum(not c.passed for c in self.checks)} of {len(self.checks)} checks failed"
        )
        return "\n".join(lines)


def _check_aut_m() -> tuple[bool, str]:
    m = digraph_m()
    g = automorphism_group(m)
    expected = group_closure([eta_perm()])
    eta2 = eta_perm() * eta_perm()
    ok = g.order == 4 and g.is_cyclic() and g == expected and not eta2.is_identity()
    return ok, f"aut(M) has order {g.order}, cyclic={g.is_cyclic()}, generated by the rotation"


def _check_m_homogeneous() -> tuple[bool, str]:
    ok, wit = is_homogeneous(digraph_m())
    return ok, "every substructure isomorphism of M extends" if ok else f"witness: {wit}"


def _check_m_not_uniform() -> tuple[bool, str]:
    res = is_uniformly_homogeneous(digraph_m(), build_functor=False)
    ok = (not res.ok) and res.failing_class == (0, 1)
    return ok, f"no extension operator; obstructing class {res.failing_class} = {{a, b}}"


def _check_swap_extensions() -> tuple[bool, str]:
    g = automorphism_group(digraph_m())
    ext = [p for p in g.sorted_elements() if p(0) == 1 and p(1) == 0]
    eta = eta_perm()
    ok = (
        set(ext) == {eta, eta * eta * eta}
        and all(p.order() == 4 for p in ext)
        and not any(p.order() == 2 for p in ext)
    )
    return ok, f"extensions of the hub swap: {[str(p) for p in ext]}, both of order 4"


def _check_cycle_restriction() -> tuple[bool, str]:
    sub, verts = induced_substructure(digraph_m(), (2, 3, 4, 5))
    aut_c = automorphism_group(sub)
    power = Perm.identity(6)
    restricted = set()
    for _ in range(4):
        restricted.add(Perm(tuple(verts.index(power(v)) for v in verts)))
        power = power * eta_perm()
    ok = set(aut_c.elements) == restricted and aut_c.order == 4
    return ok, "all 4 automorphisms of M restricted to the 4-cycle are rotation powers"


def _check_c4_homogeneous() -> tuple[bool, str]:
    ok, _ = is_homogeneous(directed_cycle(4))
    return ok, "the directed 4-cycle is homogeneous"


def _check_set_obstruction() -> tuple[bool, str]:
    for n in (1, 2):
        if ens_obstruction(n) is not None:
            return False, f"unexpected obstruction for the {n}-set"
    for n in range(3, 7):
        obs = ens_obstruction(n)
        if obs is None:
            return False, f"missing obstruction for the {n}-set"
        gen = katetov_obstruction(edgeless_set(n))
        if gen is None or obs.fixed_set != gen.fixed_set or obs.witness != gen.witness:
            return False, f"set obstruction disagrees with the generic scan at n={n}"
    return True, "no obstruction for sets of size <= 2; fixed-set witnesses for 3..6"


def _set_bijections(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    out = []
    for k in range(n + 1):
        for dom in itertools.combinations(range(n), k):
            for img_set in itertools.combinations(range(n), k):
                for img in itertools.permutations(img_set):
                    out.append((dom, img))
    return out


def _check_ens_laws() -> tuple[bool, str]:
    pairs_checked = 0
    for n in range(1, 6):
        bijections = _set_bijections(n)
        ext = {
            (dom, img): ens_extend(SetBijection(n, dom, img)).mapping
            for dom, img in bijections
        }
        ident = tuple(range(n))
        for dom, img in bijections:
            if dom == img and all(a == b for a, b in zip(dom, img)):
                if ext[(dom, img)] != ident:
                    return False, f"identity law fails on {dom} in the {n}-set"
        by_domain: dict[tuple[int, ...], list] = {}
        for dom, img in bijections:
            by_domain.setdefault(dom, []).append((dom, img))
        for dom_f, img_f in bijections:
            mid = tuple(sorted(img_f))
            lut_f = dict(zip(dom_f, img_f))
            for dom_g, img_g in by_domain.get(mid, ()):
                lut_g = dict(zip(dom_g, img_g))
                comp = (dom_f, tuple(lut_g[lut_f[v]] for v in dom_f))
                ef = ext[(dom_f, img_f)]
                eg = ext[(dom_g, img_g)]
                if ext[comp] != tuple(eg[ef[i]] for i in range(n)):
                    return False, f"composition law fails at f={ (dom_f, img_f) }, g={ (dom_g, img_g) }"
                pairs_checked += 1
    return True, f"identity and composition laws hold on {pairs_checked} composable pairs (n <= 5)"


def _check_embed_sym() -> tuple[bool, str]:
    for n in range(1, 7):
        target = PermGroup.symmetric(n)
        for k in range(1, n + 1):
            source = PermGroup.symmetric(k)
            mapping = {h: embed_sym(h, n) for h in source.elements}
            if len(set(mapping.values())) != source.order:
                return False, f"embedding S_{k} -> S_{n} is not injective"
            if any(img not in target for img in mapping.values()):
                return False, f"embedding S_{k} -> S_{n} leaves the target group"
            if not is_homomorphism(source, mapping):
                return False, f"embedding S_{k} -> S_{n} is not a homomorphism"
    return True, "tail-identity embeddings S_k -> S_n are injective homomorphisms for k <= n <= 6"


def _embeddings(k: int, n: int) -> list[CyclicEmbedding]:
    return [CyclicEmbedding(k, n, a) for a in range(n) if gcd(a, n) == n // k]


def _check_lemma() -> tuple[bool, str]:
    count = 0
    for n in range(1, 61):
        for k in range(1, n + 1):
            if n % k:
                continue
            embs = _embeddings(k, n)
            for e, f in itertools.product(embs, repeat=2):
                b = lemma_solve(e, f)
                if (b * e.multiplier - f.multiplier) % n != 0 or (n > 1 and gcd(b, n) != 1):
                    return False, f"invalid solve for k={k}, n={n}: {e.multiplier} vs {f.multiplier}"
                count += 1
    return True, f"automorphism found for all {count} embedding pairs with n <= 60"


def _check_amalgamation() -> tuple[bool, str]:
    count = 0
    for k in range(1, 13):
        for m in range(k, 13):
            if m % k:
                continue
            for n in range(k, 13):
                if n % k:
                    continue
                for f in _embeddings(k, m):
                    for g in _embeddings(k, n):
                        amalgamate(f, g)  # raises InternalError if a square fails
                        count += 1
    return True, f"all {count} amalgamation squares with k, m, n <= 12 commute pointwise"


def _check_operator_conditions() -> tuple[bool, str]:
    rng = random.Random(0)

    def random_vec():
        num = rng.randrange(0, 10**4)
        den = rng.randrange(1, 10**4 + 1)
        return prufer_decompose(QZElem(num, den))

    for _ in range(300):
        x, y = random_vec(), random_vec()
        n = rng.randrange(1, 10**4)
        if k_apply(n, x + y) != k_apply(n, x) + k_apply(n, y):
            return False, f"additivity fails for n={n}"
        if not x.is_zero() and k_apply(n, x).is_zero():
            return False, f"injectivity fails for n={n}"

    for n1 in range(1, 41):
        for n2 in range(1, 41):
            for p in (2, 3, 5, 7):
                if p_free_part(n1 * n2, p) != p_free_part(n1, p) * p_free_part(n2, p):
                    return False, f"p-free parts not multiplicative at {n1}, {n2}, {p}"
    probe = prufer_decompose(QZElem(1, 360))
    for n1 in range(1, 41):
        for n2 in range(1, 41):
            if k_apply(n1 * n2, probe) != k_apply(n2, k_apply(n1, probe)):
                return False, f"composition fails at {n1}, {n2}"

    points = 0
    for m in range(1, 31):
        etas = [eta(m, x) for x in range(m)]
        for k in range(1, 31):
            mk = m * k
            for n in range(1, mk + 1):
                if gcd(n, mk) != k:
                    continue
                for x in range(m):
                    if eta(mk, (n * x) % mk) != k_apply(n, etas[x]):
                        return False, f"naturality fails at m={m}, k={k}, n={n}, x={x}"
                    points += 1
    return True, f"additivity, injectivity, composition, and naturality hold ({points} naturality points)"


def _check_cyclic_uniform() -> tuple[bool, str]:
    for n in range(1, 31):
        for k in range(1, n + 1):
            if n % k:
                continue
            table = {b: extend_automorphism(b, k, n) for b in units(k)}
            for b, c in table.items():
                if (n > 1 and gcd(c, n) != 1) or c % k != b:
                    return False, f"extension invalid at n={n}, k={k}, b={b}"
            for b1, b2 in itertools.product(table, repeat=2):
                prod = (b1 * b2) % k if k > 1 else 0
                if (table[b1] * table[b2] - table[prod]) % n != 0:
                    return (
                        False,
                        f"counterexample n={n}, k={k}: E({b1})*E({b2}) != E({b1}*{b2} mod {k}); "
                        f"no multiplicative section of (Z/{n})* onto (Z/{k})* exists, so Z_{n} "
                        "is homogeneous but not uniformly homogeneous",
                    )
    return True, "homomorphic extension sections exist for every k | n <= 30"


_CHECKS = (
    ("aut_m_cyclic_of_order_4", _check_aut_m),
    ("m_homogeneous", _check_m_homogeneous),
    ("m_not_uniformly_homogeneous", _check_m_not_uniform),
    ("hub_swap_extensions_have_order_4", _check_swap_extensions),
    ("cycle_restrictions_are_rotation_powers", _check_cycle_restriction),
    ("directed_4_cycle_homogeneous", _check_c4_homogeneous),
    ("set_obstruction_threshold", _check_set_obstruction),
    ("set_extension_functor_laws", _check_ens_laws),
    ("symmetric_group_embedding_homomorphism", _check_embed_sym),
    ("cyclic_lemma_totality", _check_lemma),
    ("amalgamation_squares_commute", _check_amalgamation),
    ("ambient_operator_conditions", _check_operator_conditions),
    ("cyclic_groups_uniformly_homogeneous", _check_cyclic_uniform),
)


def verify_paper() -> VerifyReport:
    """Run the thirteen checks in order; results are deterministic."""
    results = []
    for index, (name, fn) in enumerate(_CHECKS, start=1):
        passed, detail = fn()
        results.append(CheckResult(index=index, name=name, passed=passed, detail=detail))
    return VerifyReport(checks=tuple(results))
