"""Essential relations on a finite set and the algebra of permuted orders."""

from .algebra import QQ, ZZ, AlgebraElement, Ring
from .errors import (
    DimensionError,
    DomainError,
    FamilyInvariantError,
    InconsistencyError,
    RelationParseError,
    ResourceGuardError,
)
from .relations import (
    Permutation,
    Relation,
    RelationClass,
    classify,
    compose,
    conjugate,
    contained_permutations,
    delta,
    format_relation,
    parse_relation,
    symmetric_group,
    transitive_closure,
    transpose,
)
from .essentiality import (
    Block,
    BlockCover,
    EssVerdict,
    cover_number,
    enumerate_essential,
    essential_masks,
    is_essential,
    maximal_essential_check,
    min_block_cover,
    quick_filter,
)
from .orders import OrderLattice, build_order_lattice, mobius_value, order_join, stabilizer
from .lattice import (
    FiniteLattice,
    MultiplicativeFamily,
    OrderAlgebra,
    idempotent_family,
    order_idempotents,
)
from .essential_algebra import (
    EssentialAlgebra,
    e_multiply,
    n_ideal_generators,
    nilpotency_index,
    project_to_P,
    quotient_by_H,
    regular_representation_on_L,
)
from .permuted import (
    GroupAlgebraMatrix,
    PBasisElement,
    PermutedOrderAlgebra,
    central_idempotents,
    p_multiply_f_basis,
    structure_map,
    verify_structure_iso,
)
from .representations import SimpleParam, act_on_ideal, semisimplicity_check, simple_module_table
from .branching import (
    ExtensionSet,
    branching_dimensions,
    embed_phi,
    extension_set,
    verify_lemma_9_1,
)

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "ZZ",
    "AlgebraElement",
    "Ring",
    "DimensionError",
    "DomainError",
    "FamilyInvariantError",
    "InconsistencyError",
    "RelationParseError",
    "ResourceGuardError",
    "Permutation",
    "Relation",
    "RelationClass",
    "classify",
    "compose",
    "conjugate",
    "contained_permutations",
    "delta",
    "format_relation",
    "parse_relation",
    "symmetric_group",
    "transitive_closure",
    "transpose",
    "Block",
    "BlockCover",
    "EssVerdict",
    "cover_number",
    "enumerate_essential",
    "essential_masks",
    "is_essential",
    "maximal_essential_check",
    "min_block_cover",
    "quick_filter",
    "OrderLattice",
    "build_order_lattice",
    "mobius_value",
    "order_join",
    "stabilizer",
    "FiniteLattice",
    "MultiplicativeFamily",
    "OrderAlgebra",
    "idempotent_family",
    "order_idempotents",
    "EssentialAlgebra",
    "e_multiply",
    "n_ideal_generators",
    "nilpotency_index",
    "project_to_P",
    "quotient_by_H",
    "regular_representation_on_L",
    "GroupAlgebraMatrix",
    "PBasisElement",
    "PermutedOrderAlgebra",
    "central_idempotents",
    "p_multiply_f_basis",
    "structure_map",
    "verify_structure_iso",
    "SimpleParam",
    "act_on_ideal",
    "semisimplicity_check",
    "simple_module_table",
    "ExtensionSet",
    "branching_dimensions",
    "embed_phi",
    "extension_set",
    "verify_lemma_9_1",
    "__version__",
]
