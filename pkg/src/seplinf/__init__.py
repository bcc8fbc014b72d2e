"""Best uniform approximation of trivariate functions by sums of univariate ones."""

from .candidates import AUXILIARY, CandidateSet, OptimizerConfig, build_candidate_set, eval_auxiliary, maximize_auxiliary
from .catalog import (
    CATALOG,
    FACE_MATRIX,
    CatalogEntry,
    evaluate_catalog,
    instantiate,
    load_catalog,
    verify_catalog_against_matrix,
)
from .cycles import (
    CycleVector,
    InvalidCycleError,
    WeightedPointSet,
    enumerate_minimal_cycles,
    golomb_ratio,
    is_minimal,
    plane_sums,
    structure_violations,
)
from .formula import approximation_error, candidate_grid
from .function_model import (
    BUILTINS,
    DeltaReport,
    FunctionSource,
    GridFunction,
    Point3,
    builtin,
    check_delta_conditions,
    evaluate,
    load_grid,
)
from .lp_oracle import GridSpec, LpSolution, extract_dual_cycle, grid_error, refine_and_bound, uniform_grid

__version__ = "0.1.0"
