"""The parameter-deformed system and its normalized t = 1 ratios.

The diagonal reduction step of the undeformed system carries a factor
(L - 1); the deformation replaces it, independently at each order k, by
(lam_k - 1) with a fresh parameter lam_k (lam_1 is always L, never free).
A LambdaContext fixes what the parameters mean: fully symbolic, everything
specialized to L (which degenerates back to the undeformed family), the
geometric family lam_i = A tau^i, or an explicit table.

H(k, m) denotes the t = 1 value normalized by its all-L specialization;
it is a rational value in L and the parameters only, computed as a chain
sum, and is the object whose derivative identities the series layer checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .kernel import (
    FactoredRational,
    Monomial,
    ONE,
    ZERO,
    lam,
    rat_sum,
    rat_eq_exact,
    rat_inv_one_minus,
    substitute,
)
from .numtheory import mobius, enumerate_chain_tuples
from .integrals import (
    InvalidOrderError,
    G_BASE,
    L_MINUS_ONE,
    tl,
    g_recurrence,
)

__all__ = [
    "LambdaContext",
    "SYMBOLIC",
    "ALL_L",
    "lambda_support",
    "g_def_recurrence",
    "g_def_closed_form",
    "g_def_t1",
    "h_chain_sum",
    "h_from_ratio",
    "check_def_inversion_symmetry",
]

_L_VALUE = FactoredRational.monomial_value({"L": 1})


@dataclass(frozen=True)
class LambdaContext:
    """Assignment of the deformation parameters lam_i, i >= 2.

    kind is one of "symbolic", "all_L", "tau_powers", "table"; table kind
    carries explicit values and leaves unlisted indices symbolic.  Only
    indices dividing gcd(k, m) ever matter for a computation at (k, m),
    so tables need no other entries.
    """

    kind: str
    table: tuple[tuple[int, FactoredRational], ...] = ()

    @classmethod
    def symbolic(cls) -> "LambdaContext":
        return cls("symbolic")

    @classmethod
    def all_l(cls) -> "LambdaContext":
        """Every lam_i specialized to L: the undeformed family."""
        return cls("all_L")

    @classmethod
    def tau_powers(cls) -> "LambdaContext":
        """The geometric family lam_i = A tau^i."""
        return cls("tau_powers")

    @classmethod
    def of_table(cls, mapping: Mapping[int, FactoredRational]
                 ) -> "LambdaContext":
        items = []
        for i, v in mapping.items():
            if i < 2:
                raise ValueError("table indices start at 2 (lam_1 is L)")
            if not isinstance(v, FactoredRational) or v.is_zero():
                raise ValueError(f"lam_{i} needs a nonzero value")
            items.append((i, v))
        return cls("table", tuple(sorted(items, key=lambda p: p[0])))

    def __post_init__(self):
        if self.kind not in ("symbolic", "all_L", "tau_powers", "table"):
            raise ValueError(f"unknown context kind {self.kind!r}")

    @property
    def mode(self) -> str:
        return "symbolic" if self.kind == "symbolic" else "specialized"

    def value(self, i: int) -> FactoredRational:
        """The value of lam_i; lam_1 is L unconditionally."""
        if i < 1:
            raise InvalidOrderError(f"parameter index must be >= 1, got {i}")
        if i == 1:
            return _L_VALUE
        if self.kind == "all_L":
            return _L_VALUE
        if self.kind == "tau_powers":
            return FactoredRational.monomial_value({"A": 1, "tau": i})
        if self.kind == "table":
            for j, v in self.table:
                if j == i:
                    return v
        return FactoredRational.monomial_value({lam(i): 1})

    def key(self) -> tuple:
        return (self.kind, self.table)


SYMBOLIC = LambdaContext.symbolic()
ALL_L = LambdaContext.all_l()


def lambda_support(val: FactoredRational) -> set[int]:
    """Indices i of the parameters lam_i occurring in a value."""
    return {int(name[3:]) for name in val.variables() if name.startswith("lam")}


def _check_orders(k: int, m: int = 1) -> None:
    if k < 1 or m < 1:
        raise InvalidOrderError(f"orders must be >= 1, got ({k}, {m})")


_def_rec_cache: dict[tuple, FactoredRational] = {}


def g_def_recurrence(k: int, m: int,
                     ctx: LambdaContext = SYMBOLIC) -> FactoredRational:
    """Deformed G(k, m) by the reduction system: the off-diagonal step is
    unchanged, while the diagonal becomes
    G(k, k) = (lam_k - 1) t^{k(k-1)} L^{-k} / (1 - lam_k t^{k(k-1)} L^{-k})
              * sum of the earlier row entries,
    with the same (1, 1) base value."""
    _check_orders(k, m)
    if k > m:
        k, m = m, k
    key = (k, m, ctx.key())
    val = _def_rec_cache.get(key)
    if val is not None:
        return val
    if k == 1 and m == 1:
        val = G_BASE
    elif k < m:
        q = (m - 1) // k
        val = tl(k * (k - 1) * q, -k * q) * g_def_recurrence(k, m - q * k, ctx)
    else:
        lam_k = ctx.value(k)
        row = rat_sum(g_def_recurrence(k, j, ctx) for j in range(1, k))
        pref = ((lam_k - 1) * tl(k * (k - 1), -k)
                * rat_inv_one_minus(lam_k * tl(k * (k - 1), -k)))
        val = pref * row
    _def_rec_cache[key] = val
    return val


def _def_step_factor(lo: int, b: int, hi: int,
                     ctx: LambdaContext) -> FactoredRational:
    # one chain-tuple step of the deformed closed form
    mu = mobius(b // lo)
    if mu == 0:
        return ZERO
    lam_hi = ctx.value(hi)
    val = ((lam_hi - 1) * tl((hi - 1) * b, -b)
           * FactoredRational.one_minus({"t": (hi - 1) * (hi - b),
                                         "L": b - hi})
           * rat_inv_one_minus(lam_hi * tl(hi * (hi - 1), -hi))
           * FactoredRational.inv_one_minus({"t": (hi - 1) * b, "L": -b}))
    return -val if mu < 0 else val


_def_closed_cache: dict[tuple, FactoredRational] = {}


def g_def_closed_form(k: int, m: int,
                      ctx: LambdaContext = SYMBOLIC) -> FactoredRational:
    """Deformed G(k, m) in closed form: (L-1)^2 t^{(k-1)(m-1)} L^{-k-m}
    times the chain-tuple sum with per-step factor
    mu(b/a_prev) (lam_a - 1) t^{(a-1)b} L^{-b} (1 - t^{(a-1)(a-b)} L^{b-a})
    / [(1 - lam_a t^{a(a-1)} L^{-a}) (1 - t^{(a-1)b} L^{-b})].
    Specializing every lam to L recovers the undeformed closed form."""
    _check_orders(k, m)
    a = math.gcd(k, m)
    key = (k, m, ctx.key())
    val = _def_closed_cache.get(key)
    if val is not None:
        return val
    parts = []
    for tup in enumerate_chain_tuples(a):
        term = ONE
        for lo, b, hi in tup.steps():
            term = term * _def_step_factor(lo, b, hi, ctx)
            if term.is_zero():
                break
        if not term.is_zero():
            parts.append(term)
    val = (L_MINUS_ONE ** 2 * tl((k - 1) * (m - 1), -k - m)
           * rat_sum(parts))
    _def_closed_cache[key] = val
    return val


def _h_step_factor(lo: int, b: int, hi: int,
                   ctx: LambdaContext) -> FactoredRational:
    # the t = 1 shadow of _def_step_factor
    mu = mobius(b // lo)
    if mu == 0:
        return ZERO
    lam_hi = ctx.value(hi)
    val = ((lam_hi - 1) * tl(0, -b)
           * FactoredRational.one_minus({"L": b - hi})
           * rat_inv_one_minus(lam_hi * tl(0, -hi))
           * FactoredRational.inv_one_minus({"L": -b}))
    return -val if mu < 0 else val


_h_cache: dict[tuple, FactoredRational] = {}


def h_chain_sum(k: int, m: int,
                ctx: LambdaContext = SYMBOLIC) -> FactoredRational:
    """The normalized t = 1 value H(k, m): chain-tuple sum with per-step
    factor mu(b/a_prev) (lam_a - 1) L^{-b} (1 - L^{b-a})
    / [(1 - lam_a L^{-a}) (1 - L^{-b})].  Coprime orders give 1, and the
    value depends on (k, m) only through gcd(k, m)."""
    _check_orders(k, m)
    a = math.gcd(k, m)
    key = (a, ctx.key())
    val = _h_cache.get(key)
    if val is not None:
        return val
    parts = []
    for tup in enumerate_chain_tuples(a):
        term = ONE
        for lo, b, hi in tup.steps():
            term = term * _h_step_factor(lo, b, hi, ctx)
            if term.is_zero():
                break
        if not term.is_zero():
            parts.append(term)
    val = rat_sum(parts)
    _h_cache[key] = val
    return val


def g_def_t1(k: int, m: int,
             ctx: LambdaContext = SYMBOLIC) -> FactoredRational:
    """Deformed G(k, m) at t = 1: (L-1)^2 L^{-k-m} times the t = 1 chain
    sum.  Identical to substituting t = 1 into the closed form, because
    substitution is a ring homomorphism and acts factor by factor on the
    sum; that identity is pinned down by tests rather than assumed."""
    _check_orders(k, m)
    return L_MINUS_ONE ** 2 * tl(0, -k - m) * h_chain_sum(k, m, ctx)


def h_from_ratio(k: int, m: int,
                 ctx: LambdaContext = SYMBOLIC) -> FactoredRational:
    """H(k, m) by its definition: the t = 1 deformed value divided by its
    all-L specialization.  Must agree with h_chain_sum; the agreement is
    exactly the statement that the all-L chain sum is 1."""
    _check_orders(k, m)
    return g_def_t1(k, m, ctx) / g_def_t1(k, m, ALL_L)


def check_def_inversion_symmetry(
        k: int, m: int,
        eq: Callable[[FactoredRational, FactoredRational], bool] = rat_eq_exact,
) -> bool:
    """Does the symbolic deformed G(k, m) at (t^-1, L^-1, lam_i^-1) equal
    t^{-2(k-1)(m-1)} L^{2k+2m-2} times itself?  Same monomial factor as the
    undeformed symmetry; the parameter inversion rides along."""
    _check_orders(k, m)
    g = g_def_closed_form(k, m, SYMBOLIC)
    images: dict[str, Monomial] = {"t": Monomial.var("t", -1),
                                   "L": Monomial.var("L", -1)}
    for i in lambda_support(g):
        images[lam(i)] = Monomial.var(lam(i), -1)
    lhs = substitute(g, images)
    rhs = tl(-2 * (k - 1) * (m - 1), 2 * k + 2 * m - 2) * g
    return eq(lhs, rhs)
