"""Harmonic analysis on depth-truncated bounded Vilenkin groups.

Mixed-radix group arithmetic, the Vilenkin character system with fast
Chrestenson transforms, Fejer and Marcinkiewicz-Fejer kernels and means,
the localized-oscillation operators behind Lebesgue-point classification,
and a p-atom harness for quasi-locality and weak-type experiments.
"""

from .atoms import (
    Atom,
    QuasiLocalityReport,
    hardy_quasinorm,
    make_atom,
    quasilocality_integral,
    verify_atom,
    weak_type_check,
)
from .characters import (
    block_dirichlet,
    character_table,
    dirichlet,
    dirichlet_shift,
    dirichlet_table,
    rademacher,
    rademacher_power_sum,
    vilenkin,
    vilenkin_column,
)
from .group import DEFAULT_GRID_CAP, GroupStructure, MixedRadixIndex, make_structure
from .kernels import (
    ESTIMATE_IDS,
    EstimateReport,
    KernelTable,
    block_shift_majorant,
    double_shift_majorant,
    estimate_scan,
    fejer_kernel_1d,
    kernel_decomposition_rhs,
    kernel_majorant_2d,
    marcinkiewicz_kernel,
    r_factor,
    r_factor_closed,
    r_factor_table,
    scale_sum_majorant,
)
from .means import (
    MeansEvaluation,
    evaluate_means,
    fejer_means_1d,
    marcinkiewicz_means,
    means_error,
    partial_sum_2d,
    save_means_evaluation,
    sigma_multiplier,
)
from .operators import (
    LebesgueReport,
    OperatorProfile,
    classify_point,
    lebesgue_reports,
    maximal_function,
    maximal_function_grid,
    v_component,
    v_component_grid,
    v_component_sup_grid,
    v_maximal,
    v_sup_grid,
    w_operator_1d,
    w_operator_2d,
    w_sequence,
)
from .sampled import (
    SampledFunction,
    Spectrum,
    dumps_csv,
    haar_integrate,
    loads_csv,
    lp_norm,
    read_csv,
    write_csv,
)
from .testfunctions import build_test_function, list_test_functions, parse_fn_spec
from .transform import (
    convolve,
    forward,
    inverse,
    naive_convolve,
    naive_forward,
    naive_inverse,
    translate,
)

__version__ = "0.1.0"
