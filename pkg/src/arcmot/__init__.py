"""arcmot: exact motivic-integral values for plane arc families.

The package computes the two-index family of rational values G_{k,m}(t, L)
attached to pairs of tangency orders of plane arcs, by three independent
routes that must agree; its deformed extension with one parameter per
order; the normalized versions at t = 1; and the generating series built
from the geometric specialization of the parameters.  Everything is exact
integer arithmetic; a verification layer re-proves the defining identities
on demand.
"""

from .kernel import (
    FactoredRational,
    Monomial,
    LaurentPoly,
    rat_sum,
    rat_eq_exact,
    rat_eq_modp,
    substitute,
    derivative,
    emit,
    parse,
)
from .integrals import (
    g_recurrence,
    g_closed_form,
    g_diag_divisor_sum,
    g_diag_chain_sum,
    g_reduce_to_gcd,
    s_direct,
    s_multiples,
    s_mobius,
    rowsum,
    check_inversion_symmetry,
    GTable,
)
from .deformed import (
    LambdaContext,
    g_def_recurrence,
    g_def_closed_form,
    g_def_t1,
    h_chain_sum,
    h_from_ratio,
    check_def_inversion_symmetry,
)
from .series import (
    check_functional_eq,
    check_series_symmetry,
    check_h_derivative,
    check_h_mixed_derivative,
    z_value,
    check_z_ode,
    check_z_pde_coefficient,
)
from .report import CellCheck, VerificationReport
from . import verify

__version__ = "1.0.0"

__all__ = [
    "FactoredRational",
    "Monomial",
    "LaurentPoly",
    "rat_sum",
    "rat_eq_exact",
    "rat_eq_modp",
    "substitute",
    "derivative",
    "emit",
    "parse",
    "g_recurrence",
    "g_closed_form",
    "g_diag_divisor_sum",
    "g_diag_chain_sum",
    "g_reduce_to_gcd",
    "s_direct",
    "s_multiples",
    "s_mobius",
    "rowsum",
    "check_inversion_symmetry",
    "GTable",
    "LambdaContext",
    "g_def_recurrence",
    "g_def_closed_form",
    "g_def_t1",
    "h_chain_sum",
    "h_from_ratio",
    "check_def_inversion_symmetry",
    "check_functional_eq",
    "check_series_symmetry",
    "check_h_derivative",
    "check_h_mixed_derivative",
    "z_value",
    "check_z_ode",
    "check_z_pde_coefficient",
    "CellCheck",
    "VerificationReport",
    "verify",
]
