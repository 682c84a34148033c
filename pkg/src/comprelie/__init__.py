"""Exact computations in Com-Pre-Lie algebras built on shuffle words.

The package provides the shuffle/half-shuffle word algebra, linear
endomorphisms of the letter space, the induced pre-Lie products and their
enveloping-algebra extensions, truncated character groups (including the
composition of control-theoretic input-output series), free Com-Pre-Lie
algebras on partitioned trees, admissible-word combinatorics, and the
decorated-forest picture with the Connes-Kreimer coproduct.
"""

from .words import (
    EMPTY_WORD,
    Letter,
    Tensor,
    Word,
    concat,
    deconcatenate,
    half_shuffle,
    lyndon_words,
    normalize,
    parse_tensor,
    parse_word,
    shuffle,
    tensor_to_str,
    word,
    word_to_str,
)
from .endo import (
    Endo,
    apply_endo,
    diagonal_weights,
    endo_from_json,
    endo_to_json,
    fliess_channel,
    iterate_endo,
    load_endo,
    nilpotency_index,
    save_endo,
    transpose_endo,
)
from .prelie import (
    ComPreLieContext,
    associativity_witness,
    image_span_contains,
    induced_morphism,
    lie_bracket,
    prelie,
    prelie_closed,
    span_dimension_of_products,
)
from .enveloping import (
    SymMonomial,
    SymTensor,
    closed_action,
    closed_star,
    dual_coproduct,
    extend_bullet,
    full_coproduct,
    pair_tensor,
    star,
    sym_pairing,
)
from .characters import (
    FliessElement,
    TruncatedSeries,
    diamond,
    fibonacci_dims,
    fliess_diamond,
    fliess_tilde,
    inverse,
    tilde_compose,
)
from .trees import (
    PartitionedTree,
    TreeTensor,
    all_partitioned_trees,
    all_rooted_trees,
    free_bullet,
    injectivity_rank,
    parse_tree,
    phi_cpl,
    phi_into,
    tree_to_str,
)
from .admissible import (
    DyckPath,
    admissible_words,
    count_admissible,
    count_sigma,
    from_dyck,
    is_admissible,
    is_sigma_admissible,
    sigma_admissible_words,
    to_dyck,
)
from .forests import (
    Forest,
    ForestPoly,
    ck_coproduct,
    delta_cobracket,
    dual_prelie_coeff,
    forest_star,
    t_word,
    y_bracket_check,
)

__all__ = [
    "EMPTY_WORD",
    "Letter",
    "Tensor",
    "Word",
    "concat",
    "deconcatenate",
    "half_shuffle",
    "lyndon_words",
    "normalize",
    "parse_tensor",
    "parse_word",
    "shuffle",
    "tensor_to_str",
    "word",
    "word_to_str",
    "Endo",
    "apply_endo",
    "diagonal_weights",
    "endo_from_json",
    "endo_to_json",
    "fliess_channel",
    "iterate_endo",
    "load_endo",
    "nilpotency_index",
    "save_endo",
    "transpose_endo",
    "ComPreLieContext",
    "associativity_witness",
    "image_span_contains",
    "induced_morphism",
    "lie_bracket",
    "prelie",
    "prelie_closed",
    "span_dimension_of_products",
    "SymMonomial",
    "SymTensor",
    "closed_action",
    "closed_star",
    "dual_coproduct",
    "extend_bullet",
    "full_coproduct",
    "pair_tensor",
    "star",
    "sym_pairing",
    "FliessElement",
    "TruncatedSeries",
    "diamond",
    "fibonacci_dims",
    "fliess_diamond",
    "fliess_tilde",
    "inverse",
    "tilde_compose",
    "PartitionedTree",
    "TreeTensor",
    "all_partitioned_trees",
    "all_rooted_trees",
    "free_bullet",
    "injectivity_rank",
    "parse_tree",
    "phi_cpl",
    "phi_into",
    "tree_to_str",
    "DyckPath",
    "admissible_words",
    "count_admissible",
    "count_sigma",
    "from_dyck",
    "is_admissible",
    "is_sigma_admissible",
    "sigma_admissible_words",
    "to_dyck",
    "Forest",
    "ForestPoly",
    "ck_coproduct",
    "delta_cobracket",
    "dual_prelie_coeff",
    "forest_star",
    "t_word",
    "y_bracket_check",
]

__version__ = "0.1.0"
