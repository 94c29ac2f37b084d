"""S1S over ultimately periodic words, decided through Buchi automata."""

from .buchi import (
    AlphabetMismatch,
    BuchiNfa,
    Match,
    empty_nfa,
    exact_up_nfa,
    ex_project,
    find_match,
    format_dot,
    format_nfa,
    intersection,
    is_satisfiable,
    match_for_up,
    membership_up,
    parse_nfa,
    trans,
    transa,
    union,
)
from .complement import (
    DEFAULT_MAX_COLORS,
    BudgetExceeded,
    Color,
    ComplementStats,
    DimensionMismatch,
    color_add,
    color_nfa,
    complement,
    complement_with_stats,
    gamma_letter,
    gamma_word,
    kind_nfa,
    kind_nfa_semigroup,
    realizable_colors,
    rf_nfa,
)
from .encodings import (
    check_merge_encoding,
    exists_prefix_merge_nfa,
    interp_of_word,
    merge0_nfa,
    never_merge_nfa,
    phi_merge,
)
from .logic import (
    And,
    Ex2,
    FoAnd,
    FoEx1,
    FoEx2,
    FoIn,
    FoLess,
    FoNot,
    FullFormula,
    Incl,
    Less,
    MinFormula,
    NonSingletonWitness,
    Not,
    UnassignedVariable,
    UnknownVariable,
    UpInterpretation,
    models_full_up,
    models_up,
    models_up_direct,
    reduce_full,
    sat_full,
    sat_min,
    translate,
)
from .semigroup import (
    AssociativityViolation,
    FiniteSemigroup,
    UpWord,
    col,
    drop_prefix,
    format_semigroup,
    format_up_word,
    idempotent_power,
    merges_up,
    new_semigroup,
    parse_semigroup,
    parse_up_word,
    ramseyan_factorization_up,
    subsemigroup_closure,
    up_at,
    up_equiv,
)
from .syntax import (
    ParseError,
    format_formula,
    format_interpretation,
    parse_formula,
    parse_interpretation,
)

__version__ = "0.1.0"
