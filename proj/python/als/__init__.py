from als._core import (
    AlsError,
    CycleAnalysis,
    DenseMatrix,
    Method,
    ProblemInstance,
    SineScenarioSpec,
    SolverConfig,
    SolverRun,
    TracePoint,
    als_solve,
    batch_ls_solve,
    cycle_matrix,
    cyclic_index,
    default_als_iterations,
    detect_periodic_onset,
    dot,
    gen_random_problem,
    gen_sine_problem,
    ils_solve,
    largest_singular_value,
    mat_vec,
    max_step_size_als,
    max_step_size_ils,
    multiplication_count,
    residual_cost,
    sls_solve,
    two_norm,
)

__all__ = [
    "AlsError",
    "CycleAnalysis",
    "DenseMatrix",
    "Method",
    "ProblemInstance",
    "SineScenarioSpec",
    "SolverConfig",
    "SolverRun",
    "TracePoint",
    "als_solve",
    "batch_ls_solve",
    "cycle_matrix",
    "cyclic_index",
    "default_als_iterations",
    "detect_periodic_onset",
    "dot",
    "gen_random_problem",
    "gen_sine_problem",
    "ils_solve",
    "largest_singular_value",
    "mat_vec",
    "max_step_size_als",
    "max_step_size_ils",
    "multiplication_count",
    "residual_cost",
    "sls_solve",
    "two_norm",
]
