"""
First integral values
=====================

Compute the exact value attached to a pair of tangency orders (k, m),
look at its factored shape, and print it as JSON and LaTeX.
"""

from arcmot import emit
from arcmot.integrals import g_recurrence

# the base cell: orders (1, 1)
g = g_recurrence(1, 1)
print("G(1,1) latex:", emit(g, "latex"))
print("G(1,1) json: ", emit(g))
print()

# moving off the diagonal only shifts a monomial prefactor
for m in (2, 3, 4):
    print(f"G(1,{m}) =", emit(g_recurrence(1, m), "latex"))
print()

# diagonals pick up a genuine denominator factor
print("G(2,2) =", emit(g_recurrence(2, 2), "latex"))
print("G(3,3) =", emit(g_recurrence(3, 3), "latex"))
print()

# values are symmetric in the two orders
assert g_recurrence(2, 5) == g_recurrence(5, 2)
print("G(2,5) == G(5,2):", emit(g_recurrence(2, 5), "latex"))
