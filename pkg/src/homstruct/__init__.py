"""Homogeneity analysis for finite relational structures.

Subpackages cover finite structures and their automorphisms, homogeneity /
set-homogeneity / uniform-homogeneity deciders with witnesses, the extension
operator on finite sets, exact cyclic-group arithmetic, and an exhaustive
digraph search with accelerated prefilter kernels.
"""

from .errors import CapabilityError, InputError, InternalError
from .perms import Perm, PermGroup, embed_sym, group_closure, is_homomorphism
from .structures import (
    CanonicalForm,
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
)
from .homogeneity import (
    HomogeneityReport,
    Obstruction,
    SectionWitness,
    UniformFunctor,
    UniformityResult,
    analyze,
    build_uniform_functor,
    has_extension_property,
    is_homogeneous,
    is_set_homogeneous,
    is_uniformly_homogeneous,
    katetov_obstruction,
    section_search,
)
from .finite_sets import SetBijection, ens_extend, ens_obstruction
from .cyclic import (
    CyclicEmbedding,
    CyclicUniformityReport,
    PruferVector,
    QZElem,
    amalgamate,
    cyclic_section,
    eta,
    extend_automorphism,
    k_apply,
    lemma_solve,
    p_free_part,
    prufer_decompose,
    prufer_recompose,
    section_possible,
    uniformly_homogeneous_cyclic,
)
from .fixtures import digraph_m, directed_cycle, edgeless_set, eta_perm

__version__ = "0.1.0"
