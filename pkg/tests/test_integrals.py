"""Arc-integral value tests: frozen small cases, agreement between the
independent evaluation routes, the gcd reduction, the auxiliary S sums,
and the inversion symmetry.

Frozen expected values were derived by unrolling the recurrence by hand;
they pin the implementation rather than restating it.
"""

import pytest

from arcmot.kernel import (
    FactoredRational,
    ONE,
    ZERO,
    emit,
    rat_eq_exact,
    rat_inv_one_minus,
    substitute,
)
from arcmot.integrals import (
    G_BASE,
    GTable,
    InvalidOrderError,
    NotADivisorError,
    check_inversion_symmetry,
    g_closed_form,
    g_diag_chain_sum,
    g_diag_divisor_sum,
    g_recurrence,
    g_reduce_to_gcd,
    rowsum,
    s_direct,
    s_mobius,
    s_multiples,
    tl,
)
from arcmot.numtheory import divisors

L = FactoredRational.monomial_value({"L": 1})
LM1 = L - ONE

G11_JSON = ('{"unit":{"sign":1,"exps":{"L":-2}},'
            '"num":[{"c":1,"exps":{"L":2}},{"c":-2,"exps":{"L":1}},'
            '{"c":1,"exps":{}}],"den":[]}')


def test_base_value_byte_exact():
    assert emit(g_recurrence(1, 1)) == G11_JSON
    assert rat_eq_exact(g_recurrence(1, 1), LM1 ** 2 * tl(0, -2))
    assert g_recurrence(1, 1) == G_BASE


def test_frozen_small_values():
    # hand-unrolled: one off-diagonal step from the base value
    assert rat_eq_exact(g_recurrence(1, 2), LM1 ** 2 * tl(0, -3))
    assert rat_eq_exact(g_recurrence(1, 5), LM1 ** 2 * tl(0, -6))
    # first diagonal above the base
    g22 = LM1 ** 3 * tl(2, -5) * rat_inv_one_minus(tl(2, -1))
    assert rat_eq_exact(g_recurrence(2, 2), g22)
    # k=3 diagonal picks up both m=1 and m=2 contributions
    g33 = LM1 ** 3 * tl(6, -7) * (ONE + tl(2, -1)) \
        * rat_inv_one_minus(tl(6, -2))
    assert rat_eq_exact(g_recurrence(3, 3), g33)


def test_symmetry_in_the_orders():
    for k, m in ((1, 4), (2, 3), (2, 6), (3, 5), (4, 6)):
        assert g_recurrence(k, m) == g_recurrence(m, k)


def test_single_reduction_step():
    # the implementation collapses repeated steps; check one literal step
    for k in range(1, 7):
        for m in range(k + 1, 13):
            lhs = g_recurrence(k, m)
            rhs = tl(k * (k - 1), -k) * g_recurrence(k, m - k)
            assert rat_eq_exact(lhs, rhs), (k, m)


def test_order_validation():
    for bad in ((0, 1), (1, 0), (-2, 3)):
        with pytest.raises(InvalidOrderError):
            g_recurrence(*bad)
    with pytest.raises(InvalidOrderError):
        g_closed_form(0, 5)


def test_s_direct_frozen():
    assert rat_eq_exact(s_direct(1, 2), tl(0, -1))
    assert rat_eq_exact(s_direct(1, 3), tl(0, -2) + tl(2, -3))
    assert rat_eq_exact(s_direct(2, 4), tl(2, -2))
    assert s_direct(3, 3).is_zero()
    with pytest.raises(NotADivisorError):
        s_direct(3, 2)
    with pytest.raises(NotADivisorError):
        s_direct(2, 5)


def test_s_multiples_frozen():
    assert rat_eq_exact(s_multiples(1, 2), tl(0, -3))
    assert rat_eq_exact(s_multiples(2, 4), tl(3, -6))
    assert rat_eq_exact(s_multiples(1, 3), tl(0, -4) + tl(2, -5))
    assert s_multiples(4, 4).is_zero()


def test_s_multiples_closed_equals_literal():
    for k in range(2, 25):
        for a in divisors(k):
            closed = s_multiples(a, k, closed=True)
            literal = s_multiples(a, k, closed=False)
            assert rat_eq_exact(closed, literal), (a, k)


def test_s_mobius_equals_direct():
    for k in range(2, 25):
        for a in (d for d in divisors(k) if d < k):
            assert rat_eq_exact(s_direct(a, k), s_mobius(a, k)), (a, k)


def test_gcd_reduction_frozen():
    pref, a = g_reduce_to_gcd(2, 3)
    assert a == 1 and rat_eq_exact(pref, tl(2, -3))
    pref, a = g_reduce_to_gcd(2, 4)
    assert a == 2 and rat_eq_exact(pref, tl(2, -2))
    pref, a = g_reduce_to_gcd(6, 4)
    assert a == 2
    assert rat_eq_exact(g_recurrence(6, 4), pref * g_recurrence(2, 2))


def test_diagonal_routes_agree():
    for k in range(1, 9):
        diag = g_recurrence(k, k)
        assert rat_eq_exact(g_diag_divisor_sum(k), diag), k
        assert rat_eq_exact(g_diag_chain_sum(k), diag), k


def test_closed_form_agrees_with_recurrence():
    for k in range(1, 7):
        for m in range(k, 7):
            assert rat_eq_exact(g_closed_form(k, m), g_recurrence(k, m)), \
                (k, m)


def test_closed_form_frozen_cell():
    # gcd(2,3)=1 so the chain sum collapses to the single empty tuple
    assert rat_eq_exact(g_closed_form(2, 3), LM1 ** 2 * tl(2, -5))


def test_rowsum_base():
    assert rat_eq_exact(rowsum(1), LM1 * tl(0, -1))


def test_rowsum_matches_literal_definition():
    for k in range(2, 7):
        gkk = g_recurrence(k, k)
        parts = [g_recurrence(k, m) for m in range(1, k)]
        parts.append(gkk)
        parts.append(gkk / LM1)
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        assert rat_eq_exact(rowsum(k), total), k


def test_inversion_symmetry_small():
    for k in range(1, 7):
        for m in range(k, 7):
            assert check_inversion_symmetry(k, m), (k, m)


def test_inversion_symmetry_literal_cell():
    # G(1/t, 1/L) = t^{-2(k-1)(m-1)} L^{2k+2m-2} G(t, L) at (2,3)
    g = g_recurrence(2, 3)
    flipped = substitute(g, {"t": FactoredRational.monomial_value({"t": -1}),
                             "L": FactoredRational.monomial_value({"L": -1})})
    assert rat_eq_exact(flipped, tl(-4, 8) * g)


def test_gtable_routes():
    base = GTable("recurrence")
    for route in GTable.ROUTES:
        table = GTable(route)
        for k in range(1, 6):
            for m in range(1, 6):
                assert rat_eq_exact(table.value(k, m), base.value(k, m)), \
                    (route, k, m)
    with pytest.raises(ValueError):
        GTable("fastest")


def test_gtable_cache_is_symmetric():
    table = GTable("closed")
    assert table.value(2, 5) == table.value(5, 2)


def test_values_are_canonical():
    for k in range(1, 6):
        for m in range(k, 6):
            g_recurrence(k, m).validate()
            g_closed_form(k, m).validate()
    for k in range(2, 13):
        for a in divisors(k):
            s_multiples(a, k).validate()
            if a < k:
                s_direct(a, k).validate()
