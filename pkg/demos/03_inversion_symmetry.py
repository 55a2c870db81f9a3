"""
Inversion symmetry
==================

Substituting t -> 1/t, L -> 1/L multiplies each value by an explicit
monomial: G(1/t, 1/L) = t^{-2(k-1)(m-1)} L^{2k+2m-2} G(t, L).
"""

from arcmot import emit, rat_eq_exact, substitute
from arcmot.kernel import FactoredRational
from arcmot.integrals import check_inversion_symmetry, g_recurrence, tl

INV = {"t": FactoredRational.monomial_value({"t": -1}),
       "L": FactoredRational.monomial_value({"L": -1})}

# spell the identity out at (2,3)
k, m = 2, 3
g = g_recurrence(k, m)
flipped = substitute(g, INV)
factor = tl(-2 * (k - 1) * (m - 1), 2 * k + 2 * m - 2)
print("G(2,3)          =", emit(g, "latex"))
print("G(2,3) inverted =", emit(flipped, "latex"))
print("monomial factor =", emit(factor, "latex"))
assert rat_eq_exact(flipped, factor * g)
print("identity holds at (2,3)")

# the exponent on L matters: 2k+2m-2, not 2(k+m); the latter already
# fails at the base cell
g = g_recurrence(1, 1)
assert not rat_eq_exact(substitute(g, INV), tl(0, 4) * g)
assert rat_eq_exact(substitute(g, INV), tl(0, 2) * g)
print("alternative exponent 2(k+m) fails at (1,1), as expected")

# sweep a range
N = 8
assert all(check_inversion_symmetry(k, m)
           for k in range(1, N + 1) for m in range(k, N + 1))
print(f"identity verified on all pairs up to {N}")
