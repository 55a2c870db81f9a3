"""Coefficientwise checks of the generating-series identities.

The G values are coefficients of a five-variable generating series whose
monomial exponents are determined by the index pair (k, m) alone, so every
series-level identity here is checked per coefficient: substitutions act
as index maps with monomial multipliers, the one genuinely infinite sum is
replaced by the closed-form rowsum, and derivative identities for the
normalized t = 1 values are checked by symbolic differentiation.  Nothing
is truncated; every check is an exact statement about finitely many
rational values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .kernel import (
    FactoredRational,
    Monomial,
    ONE,
    derivative,
    rat_eq_exact,
    rat_inv_one_minus,
    rat_sum,
    substitute,
    lam,
)
from .numtheory import divisors
from .integrals import (
    InvalidOrderError,
    L_MINUS_ONE,
    tl,
    g_recurrence,
    rowsum,
    check_inversion_symmetry,
)
from .deformed import SYMBOLIC, h_chain_sum, lambda_support
from .report import Checker, VerificationReport

__all__ = [
    "InvalidSequenceError",
    "SeriesWindow",
    "check_functional_eq",
    "check_series_symmetry",
    "check_h_derivative",
    "check_h_mixed_derivative",
    "z_value",
    "check_z_ode",
    "check_z_pde_coefficient",
]


class InvalidSequenceError(ValueError):
    """A derivative index sequence was not strictly increasing from >= 2."""


@dataclass
class SeriesWindow:
    """The finite window of series coefficients with orders up to max_order.

    The five formal series variables never appear explicitly: the
    coefficient at (k, m) is the G value itself, and exponent bookkeeping
    under substitution is carried by the index pair.
    """

    max_order: int
    coefficients: dict[tuple[int, int], FactoredRational] = field(
        default_factory=dict)

    @classmethod
    def build(cls, max_order: int,
              value_fn: Callable[[int, int], FactoredRational] = g_recurrence,
              ) -> "SeriesWindow":
        if max_order < 1:
            raise InvalidOrderError("window bound must be >= 1")
        win = cls(max_order)
        for k in range(1, max_order + 1):
            for m in range(k, max_order + 1):
                val = value_fn(k, m)
                win.coefficients[(k, m)] = val
                win.coefficients[(m, k)] = val
        return win

    def value(self, k: int, m: int) -> FactoredRational:
        return self.coefficients[(k, m)]


def check_functional_eq(max_order: int,
                        checker: Checker | None = None) -> VerificationReport:
    """Verify the series functional equation coefficient by coefficient.

    Off the diagonal the equation says each coefficient reduces one block
    toward the diagonal: G(k, m) = t^{k(k-1)} L^{-k} G(k, m-k) for m > k
    (and symmetrically).  On the diagonal the third summand of the
    equation, whose substitution collapses the second index, gives
    G(k, k) = (L-1) t^{k(k-1)} L^{-k} rowsum(k), with the infinite row sum
    in closed form.  Every cell (k, m) up to the bound is reported.
    """
    checker = checker or Checker()
    win = SeriesWindow.build(max_order)
    report = VerificationReport("functional-equation")
    for k in range(1, max_order + 1):
        for m in range(k, max_order + 1):
            if k == m:
                rhs = L_MINUS_ONE * tl(k * (k - 1), -k) * rowsum(k)
            else:
                rhs = tl(k * (k - 1), -k) * win.value(k, m - k)
            lhs = win.value(k, m)
            report.check((k, m), lambda: checker.eq(lhs, rhs), checker.mode)
    return report


_INV_IMAGES = {"t": Monomial.var("t", -1), "L": Monomial.var("L", -1)}


def check_series_symmetry(max_order: int,
                          checker: Checker | None = None
                          ) -> VerificationReport:
    """Verify the series-level inversion symmetry per coefficient.

    The coefficient multiplier is assembled from the series substitution
    itself: the global t^2 L^2, t^{-2k} L^{-2k} and t^{-2m} L^{-2m} from
    the two linear variables, and t^{2km} from the cross variable, giving
    G(k, m)(t^-1, L^-1) t^{2-2k-2m+2km} L^{2-2k-2m} = G(k, m).  Each cell
    also cross-checks that this is the same statement as the direct
    inversion symmetry of the values.
    """
    checker = checker or Checker()
    win = SeriesWindow.build(max_order)
    report = VerificationReport("series-symmetry")
    for k in range(1, max_order + 1):
        for m in range(k, max_order + 1):
            g = win.value(k, m)
            factor = tl(2 - 2 * k - 2 * m + 2 * k * m, 2 - 2 * k - 2 * m)
            lhs = substitute(g, _INV_IMAGES) * factor

            def cell(k=k, m=m, lhs=lhs, g=g):
                here = checker.eq(lhs, g)
                agree = check_inversion_symmetry(k, m, checker.eq)
                return here and agree

            report.check((k, m), cell, checker.mode)
    return report


def _shifted_h(k: int, m: int, step: int) -> FactoredRational:
    """H(k, m) with L replaced by L^step and each lam_i read as lam_{i*step}."""
    h = h_chain_sum(k, m, SYMBOLIC)
    images: dict[str, Monomial] = {"L": Monomial.var("L", step)}
    for i in lambda_support(h):
        images[lam(i)] = Monomial.var(lam(i * step))
    return substitute(h, images)


def _lam_kernel(alpha: int, order: int = 1) -> FactoredRational:
    """order! (1 - L^-alpha) L^{-alpha(order-1)}
    / ((lam_alpha - 1) (1 - lam_alpha L^-alpha)^order)."""
    inv_lam_minus_one = -FactoredRational.inv_one_minus({lam(alpha): 1})
    inv_pole = rat_inv_one_minus(
        FactoredRational.monomial_value({lam(alpha): 1, "L": -alpha}))
    return (math.factorial(order)
            * (ONE - tl(0, -alpha))
            * tl(0, -alpha * (order - 1))
            * inv_lam_minus_one
            * inv_pole ** order)


def check_h_derivative(k: int, m: int, alpha: int,
                       eq: Callable[[FactoredRational, FactoredRational],
                                    bool] = rat_eq_exact) -> bool:
    """Check the first-derivative identity for H(k, m) in lam_alpha:
    the derivative equals
    (1 - L^-alpha) / ((lam_alpha - 1)(1 - lam_alpha L^-alpha))
    times H(alpha, alpha) times H(k/alpha, m/alpha) with L read as L^alpha
    and lam_i as lam_{i*alpha} -- and vanishes when alpha does not divide
    gcd(k, m)."""
    if alpha < 2:
        raise InvalidOrderError(f"derivative index must be >= 2, got {alpha}")
    lhs = derivative(h_chain_sum(k, m, SYMBOLIC), lam(alpha))
    a = math.gcd(k, m)
    if a % alpha:
        return lhs.is_zero()
    rhs = (_lam_kernel(alpha)
           * h_chain_sum(alpha, alpha, SYMBOLIC)
           * _shifted_h(k // alpha, m // alpha, alpha))
    return eq(lhs, rhs)


def check_h_mixed_derivative(k: int, m: int, alpha_seq: Sequence[int],
                             order_seq: Sequence[int],
                             eq: Callable[[FactoredRational,
                                           FactoredRational],
                                          bool] = rat_eq_exact) -> bool:
    """Check the mixed-derivative identity for H(k, m).

    Differentiate order_seq[j] times in lam_{alpha_seq[j]} for each j.  When
    each alpha divides the next and the last divides gcd(k, m), the result
    factors as per-index kernels times the telescoping product
    H(a_1, a_1)(L) * H(a_2/a_1, a_2/a_1)(L^{a_1}) * ...
    * H(k/a_n, m/a_n)(L^{a_n}); otherwise the derivative vanishes.
    The kernel for a repeated derivative of order r in lam_a is
    r! (1 - L^-a) L^{-a(r-1)} / ((lam_a - 1)(1 - lam_a L^-a)^r).
    """
    alphas = tuple(alpha_seq)
    orders = tuple(order_seq)
    if not alphas or len(alphas) != len(orders):
        raise InvalidSequenceError(
            "need one derivative order per index, at least one index")
    if any(a < 2 for a in alphas) or any(
            x >= y for x, y in zip(alphas, alphas[1:])):
        raise InvalidSequenceError(
            f"indices must be strictly increasing from >= 2, got {alphas}")
    if any(r < 1 for r in orders):
        raise InvalidSequenceError(f"orders must be >= 1, got {orders}")

    lhs = h_chain_sum(k, m, SYMBOLIC)
    for a, r in zip(alphas, orders):
        for _ in range(r):
            lhs = derivative(lhs, lam(a))

    telescopes = all(y % x == 0 for x, y in zip(alphas, alphas[1:]))
    if not telescopes or math.gcd(k, m) % alphas[-1]:
        return lhs.is_zero()

    rhs = ONE
    for a, r in zip(alphas, orders):
        rhs = rhs * _lam_kernel(a, r)
    rhs = rhs * h_chain_sum(alphas[0], alphas[0], SYMBOLIC)
    for prev, cur in zip(alphas, alphas[1:]):
        rhs = rhs * _shifted_h(cur // prev, cur // prev, prev)
    rhs = rhs * _shifted_h(k // alphas[-1], m // alphas[-1], alphas[-1])
    return eq(lhs, rhs)


_z_cache: dict[tuple[int, int], FactoredRational] = {}


def _z_image(val: FactoredRational) -> FactoredRational:
    """Specialize every lam_i in a value to A tau^i."""
    images = {lam(i): Monomial.of({"A": 1, "tau": i})
              for i in lambda_support(val)}
    return substitute(val, images) if images else val


def z_value(n: int, m: int | None = None) -> FactoredRational:
    """Z(n) = H(n, n) under lam_i = A tau^i: a rational value in L, A, tau.
    The optional second order gives the off-diagonal coefficient's value."""
    if m is None:
        m = n
    if n < 1 or m < 1:
        raise InvalidOrderError(f"orders must be >= 1, got ({n}, {m})")
    a = math.gcd(n, m)
    val = _z_cache.get((a, a))
    if val is None:
        val = _z_image(h_chain_sum(a, a, SYMBOLIC))
        _z_cache[(a, a)] = val
    return val


def _tau_term_head(alpha: int) -> FactoredRational:
    """A alpha tau^{alpha-1} (1 - L^-alpha)
    / ((A tau^alpha - 1)(1 - A tau^alpha L^-alpha))."""
    a_tau = FactoredRational.monomial_value({"A": 1, "tau": alpha})
    inv_first = -rat_inv_one_minus(a_tau)  # 1/(A tau^alpha - 1)
    inv_second = rat_inv_one_minus(a_tau * tl(0, -alpha))
    return (alpha * FactoredRational.monomial_value({"A": 1, "tau": alpha - 1})
            * (ONE - tl(0, -alpha)) * inv_first * inv_second)


def check_z_ode(n: int,
                eq: Callable[[FactoredRational, FactoredRational],
                             bool] = rat_eq_exact) -> bool:
    """Check the divisor-sum differential identity for Z(n):
    dZ(n)/dtau = sum over alpha | n, alpha >= 2 of
    A alpha tau^{alpha-1} (1 - L^-alpha)
    / ((A tau^alpha - 1)(1 - A tau^alpha L^-alpha))
    * Z(alpha) * Z(n/alpha)(L^alpha, tau^alpha)."""
    if n < 1:
        raise InvalidOrderError(f"order must be >= 1, got {n}")
    lhs = derivative(z_value(n), "tau")
    parts = []
    for alpha in divisors(n):
        if alpha < 2:
            continue
        inner = substitute(z_value(n // alpha),
                           {"L": Monomial.var("L", alpha),
                            "tau": Monomial.var("tau", alpha)})
        parts.append(_tau_term_head(alpha) * z_value(alpha) * inner)
    return eq(lhs, rat_sum(parts))


def check_z_pde_coefficient(k: int, m: int,
                            eq: Callable[[FactoredRational, FactoredRational],
                                         bool] = rat_eq_exact) -> bool:
    """Check the (k, m) coefficient of the tau-derivative identity for the
    full two-variable series: same divisor sum as the diagonal case, with
    the trailing factor the (k/alpha, m/alpha) value at (L^alpha,
    tau^alpha).  Coprime orders make both sides 0."""
    if k < 1 or m < 1:
        raise InvalidOrderError(f"orders must be >= 1, got ({k}, {m})")
    lhs = derivative(z_value(k, m), "tau")
    parts = []
    for alpha in divisors(math.gcd(k, m)):
        if alpha < 2:
            continue
        inner = substitute(z_value(k // alpha, m // alpha),
                           {"L": Monomial.var("L", alpha),
                            "tau": Monomial.var("tau", alpha)})
        parts.append(_tau_term_head(alpha) * z_value(alpha) * inner)
    return eq(lhs, rat_sum(parts))
