"""Sum-rank-metric coding workbench.

Linearized Reed-Solomon and folded LRS codes over finite-field towers,
with linear-algebraic list decoders, subspace-design and subspace-evasive
message restrictions, and a seeded channel-experiment CLI.
"""

from .designs import (
    AffineSubspace,
    EvasiveSet,
    SubspaceDesign,
    intersect_evasive,
    intersect_periodic,
    random_design,
    verify_design,
)
from .flrs import (
    FlrsParams,
    flrs_decode_list,
    flrs_encode,
    flrs_interpolate,
    flrs_key_equation_holds,
    flrs_solve,
)
from .gf import DigitField, FieldElement, FieldTower, load_tower
from .lrs import LrsParams, demo_params, encode, min_distance_exhaustive
from .lrs_decoder import (
    InterpolationPoly,
    PeriodicSubspace,
    decode_list,
    interpolate,
    key_equation_holds,
    solve_key_equation,
)
from .metric import (
    BlockProfile,
    SumRankVector,
    sample_error,
    sum_rank_distance,
    sum_rank_weight,
)
from .skew import (
    SkewPoly,
    class_representatives,
    conjugate_test,
    count_roots_bound_check,
    gen_power,
    lagrange_interpolate,
    op_eval,
    product_rule_check,
)

__version__ = "0.1.0"
