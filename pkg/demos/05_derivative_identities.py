"""
Derivative identities
=====================

The ratio H satisfies differential-functional equations: a lam_alpha
derivative factors into a closed kernel times two smaller H values, and
the tau-power specialization Z satisfies a divisor-sum differential
equation in tau.
"""

from arcmot import derivative, emit
from arcmot.deformed import h_chain_sum
from arcmot.series import (
    check_h_derivative,
    check_h_mixed_derivative,
    check_z_ode,
    z_value,
)

# a first derivative in one parameter
d = derivative(h_chain_sum(2, 2), "lam2")
print("dH(2,2)/dlam2 =", emit(d, "latex"))
assert check_h_derivative(2, 2, 2)
print("matches the factored right-hand side")

# derivatives in a parameter not dividing the gcd vanish
assert derivative(h_chain_sum(4, 4), "lam3").is_zero()
assert check_h_derivative(4, 4, 3)
print("dH(4,4)/dlam3 = 0 (3 does not divide 4)")

# repeated and mixed derivatives factor the same way
assert check_h_mixed_derivative(4, 4, (2,), (2,))
assert check_h_mixed_derivative(8, 8, (2, 4), (1, 1))
print("second and mixed derivatives verified at (4,4) and (8,8)")

# the tau-power specialization and its differential equation
print("\nZ_2 =", emit(z_value(2), "latex"))
for n in range(1, 9):
    assert check_z_ode(n)
print("tau ODE verified for n = 1..8")
