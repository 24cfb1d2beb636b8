"""Weighted Littlewood-Paley analysis on periodic grids."""

from .grid import (
    CubeFamily,
    DyadicCube,
    GridError,
    GridFunction,
    GridSpec,
    VectorSequence,
    cube_average,
    enumerate_cubes,
    integral,
    lp_lq_norm,
    lp_norm,
    load_grid_function,
    save_grid_function,
    weak_lp_norm,
    weighted_lp_norm,
)
from .weights import (
    AltConst,
    AltPow,
    Const,
    Dyadic,
    FamilyNodes,
    Pow,
    Prod,
    ShiftPow,
    WeightError,
    WeightSequence,
    WeightSpec,
    a1_constant,
    ap_constant,
    check_admissible,
    parse_weight,
    reverse_holder_probe,
    same_constant_check,
    sigma1,
    xclass_constants,
    xclass_fit,
)
from .maximal import (
    MaximalConfig,
    fefferman_stein_ratio,
    kernel_sum_ratio,
    maximal_fn,
    maximal_fn_bruteforce,
    maximal_sigma,
    weighted_maximal_ratio,
)
from .lpaley import (
    BandDecomposition,
    CoefficientSet,
    LevelError,
    LPPair,
    analyze,
    band,
    band_decompose,
    calderon_residual,
    make_lp_pair,
    partition_sum,
    project_admissible,
    synthesize,
)
from .spaces import (
    NormRequest,
    TestFunctionDictionary,
    bmo_norm,
    besov_norm,
    build_dictionary,
    hardy_grand_norm,
    seq_b_norm,
    seq_f_infty_norm,
    seq_f_norm,
    tl_infty_norm,
    tl_norm,
)
from .verify import (
    CoincidenceRefusal,
    CorpusMember,
    EquivalenceReport,
    classical_besov_norm,
    classical_tl_norm,
    coincidence_check,
    delta_coefficient_check,
    equivalence_report,
    holder_floor_check,
    make_corpus,
    spike_family,
)

__version__ = "0.1.0"
