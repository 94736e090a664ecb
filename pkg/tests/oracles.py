"""Brute-force reference implementations used only to cross-check the library.

Everything here trades efficiency for obviousness: full enumeration over all
bijections, all table assignments, all units. None of it shares code with the
production paths it validates.
"""

import itertools
from math import gcd


def naive_isomorphisms(a, b):
    """All isomorphisms a -> b by checking every bijection directly."""
    if a.size != b.size or a.signature != b.signature:
        return []
    out = []
    for perm in itertools.permutations(range(b.size)):
        ok = True
        for ta, tb in zip(a.table_sets, b.table_sets):
            mapped = {tuple(perm[v] for v in t) for t in ta}
            if mapped != set(tb):
                ok = False
                break
        if ok:
            out.append(perm)
    return out


def naive_embeddings(a, b):
    """All embeddings a -> b by checking every injection directly."""
    if a.signature != b.signature or a.size > b.size:
        return []
    out = []
    for image in itertools.permutations(range(b.size), a.size):
        ok = True
        for ta, tb, (_, arity) in zip(a.table_sets, b.table_sets, a.signature.relations):
            mapped = {tuple(image[v] for v in t) for t in ta}
            inside = {t for t in tb if all(v in image for v in t)}
            if mapped != inside:
                ok = False
                break
        if ok:
            out.append(image)
    return sorted(out)


def naive_homogeneous(s):
    """Homogeneity straight from the definition, via naive enumeration."""
    auts = naive_isomorphisms(s, s)
    from homstruct.structures import induced_substructure

    n = s.size
    for k in range(1, n + 1):
        for a_verts in itertools.combinations(range(n), k):
            sa, _ = induced_substructure(s, a_verts)
            for b_verts in itertools.combinations(range(n), k):
                sb, _ = induced_substructure(s, b_verts)
                for iso in naive_isomorphisms(sa, sb):
                    want = {a_verts[i]: b_verts[iso[i]] for i in range(k)}
                    if not any(all(g[v] == w for v, w in want.items()) for g in auts):
                        return False
    return True


def naive_functor_table_exists(s):
    """Exhaustive search over all extension-operator tables.

    Assigns an extending automorphism to every substructure isomorphism,
    propagating the composition law and backtracking on conflicts. True iff
    some complete assignment satisfies identity, extension, and composition.
    """
    from homstruct.structures import automorphism_group, induced_substructure

    n = s.size
    aut = [g.mapping for g in automorphism_group(s).sorted_elements()]
    isos = []
    for k in range(1, n + 1):
        subsets = list(itertools.combinations(range(n), k))
        induced = {v: induced_substructure(s, v)[0] for v in subsets}
        for a_verts in subsets:
            for b_verts in subsets:
                for iso in naive_isomorphisms(induced[a_verts], induced[b_verts]):
                    images = tuple(b_verts[iso[i]] for i in range(k))
                    isos.append((a_verts, images))
    ident = tuple(range(n))
    ext = {}
    for dom, img in isos:
        lut = dict(zip(dom, img))
        cands = [g for g in aut if all(g[v] == lut[v] for v in dom)]
        if not cands:
            return False  # not even homogeneous
        ext[(dom, img)] = cands

    by_domain = {}
    for key in isos:
        by_domain.setdefault(key[0], []).append(key)

    def composite(f, g):
        """g after f; defined when g's domain is f's image set."""
        dom_f, img_f = f
        lut_g = dict(zip(*g))
        return (dom_f, tuple(lut_g[w] for w in img_f))

    order = sorted(ext, key=lambda key: len(ext[key]))
    assignment = {}

    def close():
        """Close the assignment under composition to a fixpoint; None on conflict."""
        added = []
        changed = True
        while changed:
            changed = False
            for f in list(assignment):
                mid = tuple(sorted(f[1]))
                for g in by_domain.get(mid, ()):
                    if g not in assignment:
                        continue
                    comp = composite(f, g)
                    val = tuple(assignment[g][assignment[f][i]] for i in range(n))
                    if comp in assignment:
                        if assignment[comp] != val:
                            return None
                    else:
                        if val not in ext[comp]:
                            return None
                        assignment[comp] = val
                        added.append(comp)
                        changed = True
        return added

    for dom in by_domain:
        key = (dom, dom)
        assignment[key] = ident
        if ident not in ext[key]:
            return False

    base = close()
    if base is None:
        return False

    def solve(idx):
        while idx < len(order) and order[idx] in assignment:
            idx += 1
        if idx == len(order):
            return True
        key = order[idx]
        for cand in ext[key]:
            assignment[key] = cand
            added = close()
            if added is not None and solve(idx + 1):
                return True
            if added:
                for k2 in added:
                    del assignment[k2]
            del assignment[key]
        return False

    return solve(0)


def brute_unit_solve(e_mult, f_mult, n):
    """Least b with gcd(b, n) = 1 and b*e = f mod n, by scanning all residues."""
    for b in range(n):
        if (n == 1 or gcd(b, n) == 1) and (b * e_mult - f_mult) % n == 0:
            return b
    return None


def naive_prufer_decompose(num, den):
    """Prime-power components by brute force over all residue combinations."""
    from homstruct.cyclic import factorize

    ppows = [p**e for p, e in factorize(den)]
    for combo in itertools.product(*(range(q) for q in ppows)):
        total_num = sum(a * (den // q) for a, q in zip(combo, ppows))
        if (total_num - num) % den == 0:
            return {q: a for a, q in zip(combo, ppows)}
    return None


def naive_cyclic_section(k, n):
    """Exhaustive search for a multiplicative section of (Z/n)* -> (Z/k)*.

    DFS over all assignments b -> c with c = b (mod k), gcd(c, n) = 1,
    pruning on every multiplicative violation. Mirrors the generic section
    machinery, specialized to cyclic groups.
    """
    us = [0] if k == 1 else [u for u in range(1, k) if gcd(u, k) == 1]
    cands = {
        b: [c for c in range(n) if (n == 1 or gcd(c, n) == 1) and c % k == b]
        for b in us
    }

    def consistent(assign):
        for b1 in assign:
            for b2 in assign:
                prod = (b1 * b2) % k if k > 1 else 0
                if prod in assign and (assign[b1] * assign[b2] - assign[prod]) % n != 0:
                    return False
        return True

    def dfs(i, assign):
        if i == len(us):
            return dict(assign)
        b = us[i]
        for c in cands[b]:
            assign[b] = c
            if consistent(assign):
                result = dfs(i + 1, assign)
                if result is not None:
                    return result
            del assign[b]
        return None

    return dfs(0, {})
