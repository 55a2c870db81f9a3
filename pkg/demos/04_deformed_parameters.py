"""
Deformed parameters
===================

Each diagonal step can carry its own parameter lam_k instead of the
line class L.  Setting every lam_k = L recovers the undeformed values;
dividing the t=1 specializations gives the normalized ratio H, which
depends on the two orders only through their gcd.
"""

from arcmot import emit, rat_eq_exact
from arcmot.deformed import (
    ALL_L,
    LambdaContext,
    g_def_recurrence,
    h_chain_sum,
    lambda_support,
)
from arcmot.integrals import g_recurrence
from arcmot.kernel import parse_signed_monomial

# symbolic deformation of the first nontrivial diagonal
g = g_def_recurrence(2, 2)
print("deformed G(2,2) =", emit(g, "latex"))
print("parameters used:", sorted(lambda_support(g)))

# degeneration: all lam_k = L gives back the plain value
assert rat_eq_exact(g_def_recurrence(4, 6, ALL_L), g_recurrence(4, 6))
print("\nall-L degeneration reproduces the undeformed G(4,6)")

# the normalized t=1 ratio
h = h_chain_sum(6, 6)
print("\nH(6,6) =", emit(h, "latex"))
print("parameters used:", sorted(lambda_support(h)))

# H sees only the gcd: coprime orders give the constant 1
assert h_chain_sum(5, 7).is_one()
print("H(5,7) = 1 (coprime orders)")

# custom parameter tables come from the same grammar the CLI accepts
ctx = LambdaContext.of_table({2: parse_signed_monomial("A*tau^2")})
print("\nH(2,2) with lam2 = A*tau^2:",
      emit(h_chain_sum(2, 2, ctx), "latex"))
