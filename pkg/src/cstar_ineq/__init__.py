"""Numerical checks of convex operator inequalities on matrix algebras and Hilbert C*-modules."""

from ._kernel import available_backends, default_backend
from .convexity import (
    ScalarFunction,
    SupportingLine,
    catalog_function,
    convexity_check,
    one_sided_derivative,
    supporting_line,
    verify_supporting_line,
)
from .errors import (
    CStarIneqError,
    DimensionError,
    DomainError,
    NegativityError,
    NumericalError,
    PreconditionError,
    ReproductionError,
    StateError,
    SymmetryError,
    UsageError,
)
from .hilbert_module import compression, inner_product, is_positive, module_norm, op_apply
from .inequalities import (
    InequalityReport,
    SearchConfig,
    check_commutative_loewner,
    check_hilbert_mccarty,
    check_loewner_mccarty,
    check_mond_pecaric_state,
    check_norm_mccarty,
    check_state_mccarty,
    reproduce_paper_counterexamples,
    search_counterexamples,
)
from .linalg import (
    SpectralDecomposition,
    hermitian_eig,
    matrix_function,
    matrix_power,
    operator_norm,
    psd_verdict,
)
from .localization import build_localization, induced_operator, iota, verify_transport
from .states import State, eval_state, make_state, random_state

__version__ = "0.1.0"
