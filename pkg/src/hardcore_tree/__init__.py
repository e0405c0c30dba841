"""Translation-invariant Gibbs measures of the fertile three-state hard-core
models (loop, rod, key, whistle) on Cayley trees."""

from .bifurcation import (
    BranchPoint,
    ConvexityReport,
    CriticalPoint,
    SweepPoint,
    alpha_poly,
    find_lambda_cr,
    sweep,
    verify_convexity_loop_k3,
)
from .branch import (
    asymmetric_constraint_y,
    branch_map,
    loop_k3_branch_polynomial,
    phi_loop_k3,
    phi_rod_k3,
)
from .errors import (
    BracketFailure,
    ConvergenceFailure,
    ConvexityViolation,
    EmptySupport,
    NonFiniteInput,
    SolverError,
    TooLarge,
    UnsupportedCase,
)
from .graphs import FertileGraph, State, adjacency_matrix, is_admissible_configuration, is_admissible_pair
from .oracle import (
    BoundaryWeights,
    FiniteMeasure,
    FiniteTree,
    consistency_defect,
    count_admissible,
    enumerate_admissible,
    measure,
)
from .recursion import Field, ModelParams, jacobian, recursion_map, residual
from .solver import Branch, Solution, SolutionSet, check_bounds, multistart_newton, solve_all, solve_symmetric

__version__ = "0.1.0"
