"""Deformed-parameter tests: the parameter context, the deformed
recurrence and closed form, the degeneration back to the undeformed
values, the t=1 normalization, and the H ratio.
"""

import pytest

from arcmot.kernel import (
    FactoredRational,
    LaurentPoly,
    ONE,
    parse_signed_monomial,
    rat_eq_exact,
    rat_inv_one_minus,
    substitute,
)
from arcmot.integrals import g_recurrence, tl
from arcmot.deformed import (
    ALL_L,
    LambdaContext,
    SYMBOLIC,
    check_def_inversion_symmetry,
    g_def_closed_form,
    g_def_recurrence,
    g_def_t1,
    h_chain_sum,
    h_from_ratio,
    lambda_support,
)
from arcmot.integrals import InvalidOrderError
from arcmot.numtheory import divisors

L = FactoredRational.monomial_value({"L": 1})
LM1 = L - ONE


def lam_value(i):
    return FactoredRational.from_poly(LaurentPoly.variable(f"lam{i}"))


# ---- parameter contexts ----

def test_context_symbolic():
    assert SYMBOLIC.mode == "symbolic"
    assert SYMBOLIC.value(1) == L  # index 1 is always the line class
    assert SYMBOLIC.value(4) == lam_value(4)


def test_context_all_l():
    assert ALL_L.mode == "specialized"
    assert ALL_L.value(1) == L
    assert ALL_L.value(9) == L


def test_context_tau_powers():
    ctx = LambdaContext.tau_powers()
    assert ctx.value(3) == FactoredRational.monomial_value({"A": 1, "tau": 3})
    assert ctx.value(1) == L


def test_context_table():
    ctx = LambdaContext.of_table({2: parse_signed_monomial("L"),
                                  4: parse_signed_monomial("A*tau^4")})
    assert ctx.value(2) == L
    assert ctx.value(4) == FactoredRational.monomial_value({"A": 1, "tau": 4})
    assert ctx.value(3) == lam_value(3)  # unlisted indices stay symbolic
    assert ctx.mode == "specialized"


def test_context_table_validation():
    with pytest.raises(ValueError):
        LambdaContext.of_table({1: L})          # index 1 is not free
    with pytest.raises(ValueError):
        LambdaContext.of_table({2: L - L})      # zero value
    with pytest.raises(ValueError):
        LambdaContext(kind="other")


def test_contexts_are_hashable_keys():
    a = LambdaContext.of_table({2: L})
    b = LambdaContext.of_table({2: L})
    assert a.key() == b.key()
    assert SYMBOLIC.key() != ALL_L.key()


# ---- deformed values ----

def test_deformed_diagonal_frozen():
    lam2 = lam_value(2)
    expect = (lam2 - ONE) * LM1 ** 2 * tl(2, -5) \
        * rat_inv_one_minus(lam2 * tl(2, -2))
    assert rat_eq_exact(g_def_recurrence(2, 2), expect)
    assert rat_eq_exact(g_def_closed_form(2, 2), expect)


def test_deformed_off_diagonal_carries_gcd_parameters_only():
    val = g_def_recurrence(4, 6)
    assert lambda_support(val) <= {2}
    val = g_def_recurrence(6, 6)
    assert lambda_support(val) <= {2, 3, 6}
    assert lambda_support(g_def_recurrence(3, 5)) == set()


def test_degeneration_reproduces_undeformed():
    for k in range(1, 6):
        for m in range(k, 6):
            assert rat_eq_exact(g_def_recurrence(k, m, ALL_L),
                                g_recurrence(k, m)), (k, m)
            assert rat_eq_exact(g_def_closed_form(k, m, ALL_L),
                                g_recurrence(k, m)), (k, m)


def test_deformed_routes_agree_symbolically():
    for k in range(1, 6):
        for m in range(k, 6):
            assert rat_eq_exact(g_def_recurrence(k, m),
                                g_def_closed_form(k, m)), (k, m)


def test_deformed_with_table_context():
    ctx = LambdaContext.of_table({2: parse_signed_monomial("A*tau^2")})
    val = g_def_recurrence(2, 2, ctx)
    at2 = FactoredRational.monomial_value({"A": 1, "tau": 2})
    expect = (at2 - ONE) * LM1 ** 2 * tl(2, -5) \
        * rat_inv_one_minus(at2 * tl(2, -2))
    assert rat_eq_exact(val, expect)


def test_t1_value_from_closed_form():
    # substituting t=1 into the full closed form must agree with the
    # dedicated t=1 evaluation
    t_one = FactoredRational.from_int(1)
    for k, m in ((2, 2), (2, 4), (3, 3), (4, 6), (6, 6)):
        spec = substitute(g_def_closed_form(k, m), {"t": t_one})
        assert rat_eq_exact(spec, g_def_t1(k, m)), (k, m)


def test_t1_undeformed_is_measure_normalization():
    for k in range(1, 7):
        for m in range(k, 7):
            assert rat_eq_exact(g_def_t1(k, m, ALL_L),
                                LM1 ** 2 * tl(0, -k - m)), (k, m)


# ---- the H ratio ----

def test_h_frozen_value():
    lam2 = lam_value(2)
    expect = (lam2 - ONE) * tl(0, -1) * rat_inv_one_minus(lam2 * tl(0, -2))
    assert rat_eq_exact(h_chain_sum(2, 2), expect)


def test_h_depends_only_on_gcd():
    # (4,6) has gcd 2; its closed form at t=1 matches the (2,2) ratio
    t_one = FactoredRational.from_int(1)
    spec = substitute(g_def_closed_form(4, 6), {"t": t_one})
    assert rat_eq_exact(spec, LM1 ** 2 * tl(0, -10) * h_chain_sum(2, 2))


def test_h_normalizations():
    assert h_chain_sum(1, 1).is_one()
    assert h_chain_sum(3, 5).is_one()  # coprime orders
    for k in range(1, 7):
        for m in range(k, 7):
            assert h_chain_sum(k, m, ALL_L).is_one(), (k, m)


def test_h_from_ratio_agrees():
    for k, m in ((2, 2), (3, 3), (2, 4), (4, 6), (6, 6), (5, 7)):
        assert rat_eq_exact(h_from_ratio(k, m), h_chain_sum(k, m)), (k, m)


def test_h_expansion_structure():
    # H(4,4) = f(4,1) - f(4,2) + f(2,1) f(4,2) with
    # f(a,b) = (lam_a - 1) L^-b (1 - L^{b-a}) / ((1 - lam_a L^-a)(1 - L^-b))
    def f(a, b):
        return (lam_value(a) - ONE) * tl(0, -b) \
            * FactoredRational.one_minus({"L": b - a}) \
            * rat_inv_one_minus(lam_value(a) * tl(0, -a)) \
            * rat_inv_one_minus(tl(0, -b))

    expect = f(4, 1) - f(4, 2) + f(2, 1) * f(4, 2)
    assert rat_eq_exact(h_chain_sum(4, 4), expect)


# ---- symmetry and validation ----

def test_deformed_inversion_symmetry():
    for k in range(1, 6):
        for m in range(k, 6):
            assert check_def_inversion_symmetry(k, m), (k, m)


def test_deformed_order_validation():
    with pytest.raises(InvalidOrderError):
        g_def_recurrence(0, 2)
    with pytest.raises(InvalidOrderError):
        h_chain_sum(1, -1)


def test_deformed_values_are_canonical():
    for k in range(1, 6):
        for m in range(k, 6):
            g_def_recurrence(k, m).validate()
            h_chain_sum(k, m).validate()
