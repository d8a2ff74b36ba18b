"""Exact graded Weyl algebras for symplectic field theory with descendants."""
from .core import (
    DEFAULT_WINDOW,
    HBAR,
    Form,
    Generator,
    H2Class,
    Monomial,
    Orbit,
    P,
    Q,
    Series,
    Signature,
    T,
    TruncationWindow,
    Z,
    add,
    genus_expansion,
    grade_of,
    hbar_coefficient,
    linear_combination,
    normal_form,
    partial_derivative,
    poisson_bracket,
    set_t_zero,
    star,
    supercommutative_product,
    truncate,
    weyl_bracket,
)
from .errors import *  # noqa: F401,F403
from .identities import (
    CheckReport,
    FirstOrderOperator,
    GeometryData,
    Status,
    build_delta,
    check_descendant_commutation,
    check_master,
    check_t0_specializations,
    dilaton_defect,
    divisor_defect,
    euler_operator,
    string_defect,
)
from .homology import (
    ExactnessCertificate,
    Inconclusive,
    WindowBasis,
    check_dsquared,
    differential_matrix,
    homology_basis,
    is_exact,
)
from .cobordism import (
    act_left,
    act_right,
    check_chain_map,
    check_covariance,
    check_fundamental,
    cylinder_signature,
    dF_operator,
    doubled_signature,
    exp_series,
    pushforward,
    trivial_potential,
)
from .kernel import BACKEND
from .textio import format_window, parse_geometry, parse_series, parse_signature, parse_window
from .textio import print_canonical

__version__ = "0.1.0"
