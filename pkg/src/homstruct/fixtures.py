"""Bundled structures: the six-vertex digraph M and small helpers.

M is homogeneous but not uniformly homogeneous. Its universe is encoded as

    0 = a,  1 = b,  2 = a0,  3 = b0,  4 = a1,  5 = b1;

a and b carry loops and a two-way arrow, a0 -> b0 -> a1 -> b1 -> a0 is a
directed four-cycle, and the hubs feed alternate cycle vertices (a into a0 and
a1, b into b0 and b1). Its automorphism group is cyclic of order four,
generated by the rotation eta = (a b)(a0 b0 a1 b1): the swap of {a, b} only
extends to the two order-four rotations, so the two-element loop clique admits
no multiplicative choice of extensions.
"""

from __future__ import annotations

from .perms import Perm
from .structures import FinStructure, Signature

M_VERTEX_NAMES = ("a", "b", "a0", "b0", "a1", "b1")

M_EDGES = (
    (0, 0), (0, 1), (1, 0), (1, 1),
    (2, 3), (3, 4), (4, 5), (5, 2),
    (0, 2), (0, 4), (1, 3), (1, 5),
)


def digraph_m() -> FinStructure:
    """The six-vertex digraph M with the fixed vertex encoding above."""
    return FinStructure.digraph(6, M_EDGES)


def eta_perm() -> Perm:
    """The generator of aut(M): swaps the hubs and rotates the four-cycle."""
    return Perm((1, 0, 3, 4, 5, 2))


def m_vertex_name(v: int) -> str:
    return M_VERTEX_NAMES[v]


def directed_cycle(n: int) -> FinStructure:
    """The directed n-cycle 0 -> 1 -> ... -> n-1 -> 0."""
    return FinStructure.digraph(n, [(i, (i + 1) % n) for i in range(n)])


def edgeless_set(n: int) -> FinStructure:
    """n points over the empty signature."""
    return FinStructure.make(Signature.empty(), n)


def empty_digraph(n: int) -> FinStructure:
    return FinStructure.digraph(n, [])


def complete_digraph(n: int, loops: bool = False) -> FinStructure:
    edges = [(i, j) for i in range(n) for j in range(n) if loops or i != j]
    return FinStructure.digraph(n, edges)
