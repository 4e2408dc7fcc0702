"""Numerical atlas of divided-difference di-/tri-gamma families.

Evaluates the polygamma special-function core, the divided-difference
function families built on it, verifies their complete-monotonicity
classification with sharp-threshold recovery, and certifies the related
gamma-ratio and polygamma inequalities and limits.
"""

from .cmcheck import (
    CmReport,
    Theorem1Prediction,
    ViolationWitness,
    cm_verify,
    find_violation,
    sharp_lambda_estimate,
    theorem1_predicate,
)
from .errors import (
    BracketError,
    CmAtlasError,
    DegenerateParameterError,
    DomainError,
    EvalOverflowError,
    OrderError,
    QuadratureError,
)
from .families import (
    DEFAULT_GRID,
    GridSpec,
    ParamTriple,
    capital_lambda,
    delta,
    delta_deriv,
    divided_diff_psi,
    h_func,
    kernel_g,
    ln_h,
    phi,
    q_func,
    theta,
    theta_deriv,
    theta_quadrature,
    z_func,
)
from .ineq import (
    REGISTRY,
    InequalityVerdict,
    check_alzer_ratio,
    check_batir_psi,
    check_exp_psi_bound,
    check_gamma_ratio,
    check_limits_suite,
    check_p_polynomial,
    check_qi_psi_bounds,
    check_thm3_divided_diff,
    check_watson,
    run_registry,
)
from .specfun import (
    EULER_GAMMA,
    Constants,
    PolyEval,
    constants,
    digamma,
    ln_gamma,
    polygamma,
    polygamma_oracle,
    psi_positive_root,
)

__version__ = "0.1.0"
