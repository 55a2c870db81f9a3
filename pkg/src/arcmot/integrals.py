"""The two-index family G(k, m) of exact arc integrals, by every route.

G(k, m) is a rational value in t and L attached to a pair of tangency
orders.  It is determined by a small system: a base value at (1, 1),
symmetry in (k, m), an off-diagonal reduction step, and a diagonal step
expressing G(k, k) through the earlier entries of row k.  The same family
has closed forms: a divisor sum over the auxiliary polynomials S(a, k), a
sum over divisor chains, and a fully explicit sum over chain tuples.  All
routes must agree exactly; the verification layer re-checks that on demand.

Everything here returns FactoredRational values and is memoized at module
level (warm the caches single-threaded before sharing across threads).
"""

from __future__ import annotations

import math
from typing import Callable

from .kernel import (
    FactoredRational,
    Monomial,
    ONE,
    ZERO,
    LaurentPoly,
    rat_sum,
    rat_eq_exact,
    substitute,
)
from .numtheory import (
    mobius,
    divisors,
    enumerate_divisor_chains,
    enumerate_chain_tuples,
)

__all__ = [
    "InvalidOrderError",
    "NotADivisorError",
    "g_recurrence",
    "s_direct",
    "s_multiples",
    "s_mobius",
    "g_reduce_to_gcd",
    "g_diag_divisor_sum",
    "g_diag_chain_sum",
    "g_closed_form",
    "check_inversion_symmetry",
    "rowsum",
    "GTable",
    "G_BASE",
    "L_MINUS_ONE",
    "tl",
]


class InvalidOrderError(ValueError):
    """A tangency order was below 1."""


class NotADivisorError(ValueError):
    """The first index must divide the second."""


def tl(t_exp: int, l_exp: int) -> FactoredRational:
    """The monomial value t**t_exp * L**l_exp."""
    return FactoredRational.monomial_value({"t": t_exp, "L": l_exp})


L_MINUS_ONE = FactoredRational.monomial_value({"L": 1}) - 1

# 1/(L-1) == -1/(1-L): still within the factored form
_INV_L_MINUS_ONE = -FactoredRational.inv_one_minus({"L": 1})

# base value at orders (1, 1)
G_BASE = L_MINUS_ONE ** 2 * tl(0, -2)


def _check_orders(k: int, m: int = 1) -> None:
    if k < 1 or m < 1:
        raise InvalidOrderError(f"orders must be >= 1, got ({k}, {m})")


def _inv_diag_factor(k: int) -> FactoredRational:
    # 1 / (1 - t^{k(k-1)} L^{1-k}), the diagonal denominator
    return FactoredRational.inv_one_minus({"t": k * (k - 1), "L": 1 - k})


_g_rec_cache: dict[tuple[int, int], FactoredRational] = {}


def g_recurrence(k: int, m: int) -> FactoredRational:
    """Evaluate G(k, m) by the defining reduction system.

    Order of moves: swap so k <= m; for m > k collapse all off-diagonal
    steps at once, G(k, m) = t^{k(k-1)q} L^{-kq} G(k, m - qk) with
    q = (m-1)//k; on the diagonal, G(k, k) equals
    (L-1) t^{k(k-1)} L^{-k} / (1 - t^{k(k-1)} L^{1-k}) times the sum of the
    earlier row entries.  (k + m, k) strictly decreases, so this terminates.
    """
    _check_orders(k, m)
    if k > m:
        k, m = m, k
    val = _g_rec_cache.get((k, m))
    if val is not None:
        return val
    if k == 1 and m == 1:
        val = G_BASE
    elif k < m:
        q = (m - 1) // k
        val = tl(k * (k - 1) * q, -k * q) * g_recurrence(k, m - q * k)
    else:
        row = rat_sum(g_recurrence(k, j) for j in range(1, k))
        val = L_MINUS_ONE * tl(k * (k - 1), -k) * _inv_diag_factor(k) * row
    _g_rec_cache[(k, m)] = val
    _g_rec_cache[(m, k)] = val
    return val


def s_direct(a: int, k: int) -> FactoredRational:
    """S(a, k): sum of t^{(k-1)(m-1)-(a-1)^2} L^{2a-k-m} over m < k with
    gcd(m, k) = a.  Empty (hence 0) when a = k."""
    _check_orders(a, k)
    if k % a:
        raise NotADivisorError(f"{a} does not divide {k}")
    terms: dict[Monomial, int] = {}
    shift = (a - 1) ** 2
    for m in range(a, k, a):
        if math.gcd(m, k) == a:
            mono = Monomial.of({"t": (k - 1) * (m - 1) - shift,
                                "L": 2 * a - k - m})
            terms[mono] = terms.get(mono, 0) + 1
    return FactoredRational.from_poly(LaurentPoly(terms))


def s_multiples(a: int, k: int, closed: bool = True) -> FactoredRational:
    """Sum of t^{(k-1)(m-1)} L^{-k-m} over multiples a | m, m < k.

    With closed=True uses the geometric closed form
    (t^{(k-1)(a-1)} L^{-k-a} - t^{(k-1)^2} L^{-2k}) / (1 - t^{(k-1)a} L^{-a});
    otherwise the literal sum.  Both are 0 at a = k.
    """
    _check_orders(a, k)
    if k % a:
        raise NotADivisorError(f"{a} does not divide {k}")
    if a == k:
        return ZERO
    if not closed:
        terms: dict[Monomial, int] = {}
        for m in range(a, k, a):
            mono = Monomial.of({"t": (k - 1) * (m - 1), "L": -k - m})
            terms[mono] = terms.get(mono, 0) + 1
        return FactoredRational.from_poly(LaurentPoly(terms))
    head = tl((k - 1) * (a - 1), -k - a)
    ratio = FactoredRational.one_minus({"t": (k - 1) * (k - a), "L": a - k})
    return head * ratio * FactoredRational.inv_one_minus(
        {"t": (k - 1) * a, "L": -a})


def s_mobius(a: int, k: int) -> FactoredRational:
    """S(a, k) recovered from the multiples sums by Moebius inversion:
    t^{-(a-1)^2} L^{2a} sum over a | b | k of mu(b/a) * s_multiples(b, k)."""
    _check_orders(a, k)
    if k % a:
        raise NotADivisorError(f"{a} does not divide {k}")
    parts = []
    for b in divisors(k):
        if b % a == 0:
            mu = mobius(b // a)
            if mu:
                parts.append(mu * s_multiples(b, k))
    return tl(-((a - 1) ** 2), 2 * a) * rat_sum(parts)


def g_reduce_to_gcd(k: int, m: int) -> tuple[FactoredRational, int]:
    """Monomial prefactor carrying G(k, m) down to the diagonal at the gcd:
    G(k, m) = t^{(k-1)(m-1)-(a-1)^2} L^{2a-k-m} G(a, a) with a = gcd(k, m).

    Returns (prefactor, a); asserts the identity on the recurrence values.
    """
    _check_orders(k, m)
    a = math.gcd(k, m)
    pref = tl((k - 1) * (m - 1) - (a - 1) ** 2, 2 * a - k - m)
    assert rat_eq_exact(g_recurrence(k, m), pref * g_recurrence(a, a))
    return pref, a


_g_div_cache: dict[int, FactoredRational] = {}


def g_diag_divisor_sum(k: int) -> FactoredRational:
    """Diagonal value by the divisor sum
    G(k, k) = [(L-1) t^{k(k-1)} L^{-k} / (1 - t^{k(k-1)} L^{1-k})]
              * sum over proper divisors a of S(a, k) G(a, a),
    recursing on the same route for the smaller diagonals."""
    _check_orders(k)
    val = _g_div_cache.get(k)
    if val is not None:
        return val
    if k == 1:
        val = G_BASE
    else:
        total = rat_sum(s_direct(a, k) * g_diag_divisor_sum(a)
                        for a in divisors(k) if a < k)
        val = L_MINUS_ONE * tl(k * (k - 1), -k) * _inv_diag_factor(k) * total
    _g_div_cache[k] = val
    return val


_g_chain_cache: dict[int, FactoredRational] = {}


def g_diag_chain_sum(k: int) -> FactoredRational:
    """Diagonal value as an explicit sum over divisor chains
    1 = a_0 < ... < a_r = k: each chain contributes
    (L-1)^{2+r} t^{sum a_j(a_j-1)} L^{-2-sum a_j}
    / prod (1 - t^{a_j(a_j-1)} L^{1-a_j}) times prod S(a_{j-1}, a_j),
    sums and products over j = 1..r."""
    _check_orders(k)
    val = _g_chain_cache.get(k)
    if val is not None:
        return val
    parts = []
    for chain in enumerate_divisor_chains(k):
        inner = chain.seq[1:]
        term = (L_MINUS_ONE ** (2 + len(inner))
                * tl(sum(a * (a - 1) for a in inner), -2 - sum(inner)))
        for a in inner:
            term = term * _inv_diag_factor(a)
        for lo, hi in zip(chain.seq, inner):
            term = term * s_direct(lo, hi)
        parts.append(term)
    val = rat_sum(parts)
    _g_chain_cache[k] = val
    return val


def _tuple_step_factor(lo: int, b: int, hi: int) -> FactoredRational:
    # one step of the chain-tuple product, Moebius sign included
    mu = mobius(b // lo)
    if mu == 0:
        return ZERO
    val = (L_MINUS_ONE * tl((hi - 1) * b, -b)
           * FactoredRational.one_minus({"t": (hi - 1) * (hi - b),
                                         "L": b - hi})
           * _inv_diag_factor(hi)
           * FactoredRational.inv_one_minus({"t": (hi - 1) * b, "L": -b}))
    return -val if mu < 0 else val


_g_closed_cache: dict[tuple[int, int], FactoredRational] = {}


def g_closed_form(k: int, m: int) -> FactoredRational:
    """Fully explicit G(k, m): the monomial prefactor
    (L-1)^2 t^{(k-1)(m-1)} L^{-k-m} times a sum over all chain tuples with
    target gcd(k, m) of the per-step factors (see _tuple_step_factor).
    The empty tuple contributes 1, so coprime orders give a pure monomial
    multiple of (L-1)^2."""
    _check_orders(k, m)
    a = math.gcd(k, m)
    key = (k, m)
    val = _g_closed_cache.get(key)
    if val is not None:
        return val
    parts = []
    for tup in enumerate_chain_tuples(a):
        term = ONE
        for lo, b, hi in tup.steps():
            term = term * _tuple_step_factor(lo, b, hi)
            if term.is_zero():
                break
        if not term.is_zero():
            parts.append(term)
    val = (L_MINUS_ONE ** 2 * tl((k - 1) * (m - 1), -k - m)
           * rat_sum(parts))
    _g_closed_cache[key] = val
    return val


_T_INV = Monomial.var("t", -1)
_L_INV = Monomial.var("L", -1)


def check_inversion_symmetry(k: int, m: int,
                             eq: Callable[[FactoredRational, FactoredRational],
                                          bool] = rat_eq_exact) -> bool:
    """Does G(k, m) at (t^-1, L^-1) equal
    t^{-2(k-1)(m-1)} L^{2k+2m-2} G(k, m)?

    The L exponent is 2k+2m-2, fixed by the (1, 1) case:
    left side (L-1)^2 versus L^2 (L-1)^2 L^-2.
    """
    _check_orders(k, m)
    g = g_recurrence(k, m)
    lhs = substitute(g, {"t": _T_INV, "L": _L_INV})
    rhs = tl(-2 * (k - 1) * (m - 1), 2 * k + 2 * m - 2) * g
    return eq(lhs, rhs)


def rowsum(k: int) -> FactoredRational:
    """Exact value of the full row sum over m >= 1 of G(k, m):
    the finite part below the diagonal plus G(k, k) (1 + 1/(L-1)),
    the tail having collapsed to G(k, k)/(L-1)."""
    _check_orders(k)
    diag = g_recurrence(k, k)
    parts = [g_recurrence(k, j) for j in range(1, k)]
    parts.append(diag)
    parts.append(diag * _INV_L_MINUS_ONE)
    return rat_sum(parts)


class GTable:
    """Symmetric (k, m) table of G values computed by a fixed route.

    Routes: "recurrence" (the reduction system), "closed" (chain-tuple
    closed form), "chain" (gcd reduction onto the divisor-chain diagonal
    form).  The routes share no logic beyond the kernel, so their
    agreement on every cell is a real cross-check, and the verification
    suite asserts it.
    """

    ROUTES = ("recurrence", "closed", "chain")

    def __init__(self, route: str = "recurrence"):
        if route not in self.ROUTES:
            raise ValueError(f"unknown route {route!r}; pick from {self.ROUTES}")
        self.route = route
        self.cache: dict[tuple[int, int], FactoredRational] = {}

    def value(self, k: int, m: int) -> FactoredRational:
        _check_orders(k, m)
        val = self.cache.get((k, m))
        if val is not None:
            return val
        if self.route == "recurrence":
            val = g_recurrence(k, m)
        elif self.route == "closed":
            val = g_closed_form(min(k, m), max(k, m))
        else:
            a = math.gcd(k, m)
            pref = tl((k - 1) * (m - 1) - (a - 1) ** 2, 2 * a - k - m)
            val = pref * g_diag_chain_sum(a)
        self.cache[(k, m)] = val
        self.cache[(m, k)] = val
        return val
