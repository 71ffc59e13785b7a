"""Extended-precision Krylov subspace approximation of matrix functions:
Lanczos iterates, weighted-norm optimal approximations, a-priori error
bounds, classical approximation constructions, and an experiment harness.
"""

from .errors import (
    DimensionError,
    DomainError,
    LanfaError,
    ParameterError,
    SingularShiftError,
    SolverError,
)
from .precision import DEFAULT_BITS, ENV_BITS, Precision, mpf
from .xlinalg import Tridiagonal, dense_solve, solve_shifted_tridiag, tridiag_eig
from .funcs import (
    ExpScaled,
    InvPower,
    InvSqrt,
    Polynomial,
    Rational,
    RationalFunction,
    Sign,
    Sqrt,
    eval_scalar,
    format_function,
    parse_function,
)
from .instances import (
    HardInstance,
    ProblemInstance,
    adversarial_b,
    hard_instance,
    ones_b,
    spectrum,
)
from .krylov import KrylovDecomposition, krylov_grade, lanczos
from .matfunc import (
    FAILED,
    exact_apply,
    lanczos_fa,
    lanczos_fa_iterates,
    lanczos_fa_series,
)
from .optimal import (
    EXACT,
    AbsRational,
    PowerOfA,
    ShiftedA,
    TwoNorm,
    krylov_optimal,
    lanczos_or,
    lanczos_or_error_series,
    optimal_error_series,
    optimality_ratio,
    optimality_ratio_series,
    verify_error_decomposition,
    verify_shifted_projection,
)
from .approx import (
    BestApprox,
    ChebPoly,
    chebyshev_interpolant,
    discrete_best_poly,
    pade_exp,
    remez_best_poly,
    sup_error,
    zolotarev_sqrt,
)
from .bounds import (
    IndefiniteReport,
    NearOptimalityReport,
    cg_residuals,
    indefinite_theorem_check,
    inv_minimax_exact,
    kappa_shift,
    lanczos_or_bound,
    minres_residuals,
    rational_bound,
    triangle_bound,
    triangle_bound_series,
    uniform_bound,
    verify_cg_minres_relation,
)

__version__ = "1.0.0"
