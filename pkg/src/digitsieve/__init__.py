"""digitsieve: experiments on integers with prescribed binary digits.

Core pieces: digit patterns and their member sets (:mod:`patterns`),
squarefree/Euler statistics (:mod:`multstats`), decay exponents and 2-D
lattice reduction (:mod:`bounds`), character sums (:mod:`charsums`),
Hilbert cubes (:mod:`hilbert`) and restricted-digit sets in F_{p^n}
(:mod:`ffield`).  The ``digitsieve`` console script fronts all of it.
"""

__version__ = "0.1.0"

from .errors import ResourceCapError, ValidationError
from .patterns import (
    DigitPattern,
    DigitSymbol,
    congruence_histogram,
    count_multiples,
    enumerate_members,
    make_pattern,
    member_count,
    pattern_from_string,
    pattern_to_string,
    random_pattern,
    split_free_positions,
)
from .multstats import (
    SQUAREFREE_DENSITY,
    euler_ratio_sum,
    moebius_table,
    squarefree_count_direct,
    squarefree_count_moebius,
)
from .bounds import (
    BoundParams,
    gauss_reduce,
    measure_cong_decay,
    measure_dyadic_square_sum,
    predicted_med_q_exponent,
    predicted_two_window_exponent,
    tau,
    theta,
)
from .charsums import (
    CharContext,
    double_char_sum,
    exp_sum,
    legendre,
    moment_char_sum,
    qr_split,
    spaced_subset,
)
from .hilbert import (
    HilbertCube,
    build_cube,
    compute_f_and_F,
    longest_ap,
    max_cube_dimension,
    max_cube_dimension_brute,
    primitive_root_test,
    primitive_roots,
    sigma_star,
    subset_sums_k,
)
from .ffield import (
    DigitSetFamily,
    FieldContext,
    build_W,
    check_conditions,
    find_irreducible,
    qr_split_W,
    quad_char,
    split_largest_index_set,
)

__all__ = [
    "__version__",
    "ValidationError",
    "ResourceCapError",
    "DigitPattern",
    "DigitSymbol",
    "make_pattern",
    "pattern_from_string",
    "pattern_to_string",
    "random_pattern",
    "enumerate_members",
    "member_count",
    "congruence_histogram",
    "count_multiples",
    "split_free_positions",
    "SQUAREFREE_DENSITY",
    "moebius_table",
    "squarefree_count_direct",
    "squarefree_count_moebius",
    "euler_ratio_sum",
    "BoundParams",
    "tau",
    "theta",
    "predicted_med_q_exponent",
    "predicted_two_window_exponent",
    "measure_cong_decay",
    "measure_dyadic_square_sum",
    "gauss_reduce",
    "CharContext",
    "legendre",
    "exp_sum",
    "qr_split",
    "double_char_sum",
    "moment_char_sum",
    "spaced_subset",
    "HilbertCube",
    "build_cube",
    "subset_sums_k",
    "sigma_star",
    "longest_ap",
    "max_cube_dimension",
    "max_cube_dimension_brute",
    "primitive_root_test",
    "primitive_roots",
    "compute_f_and_F",
    "FieldContext",
    "DigitSetFamily",
    "find_irreducible",
    "quad_char",
    "build_W",
    "qr_split_W",
    "check_conditions",
    "split_largest_index_set",
]
