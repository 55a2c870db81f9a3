"""Exact arithmetic for multivariate Laurent polynomials and factored rationals.

Values live over a fixed, totally ordered variable universe

    t < L < lam2 < lam3 < ... < A < tau

and a rational value is always stored in the shape

    sign * unit * num / prod (1 - body_i)^mult_i

where ``unit`` is a single Laurent monomial, ``num`` is a Laurent polynomial
with arbitrary-precision integer coefficients, and every denominator factor
is the binomial ``1 - monomial`` kept in a canonical orientation: the first
nonzero exponent of the body (in variable order) is positive.  Flipping an
anti-canonical factor extracts a unit exactly,

    1 - m**-1 == (-m**-1) * (1 - m),

so no information is lost by the normalization.

Design constraints, deliberately:

* integer coefficients only -- no floats, no rational coefficients;
* no multivariate gcd.  Simplification is trial division of the numerator
  by the known denominator factors, nothing cleverer;
* exact equality is decided by cross multiplication, probabilistic equality
  by evaluation at random points of a large prime field (no false negatives
  on genuinely equal inputs: evaluation is a ring homomorphism);
* values are immutable after construction and every operation is a pure
  function, so values can be shared freely between threads.

``==`` on :class:`FactoredRational` is *structural* identity of the stored
canonical form.  Two mathematically equal values built along different
roads can differ structurally (uncancelled content in the numerator);
mathematical equality is :func:`rat_eq_exact` / :func:`rat_eq_modp`.
"""

from __future__ import annotations

import json
import random
from typing import Callable, Iterable, Mapping, Union

__all__ = [
    "VAR_T",
    "VAR_L",
    "VAR_A",
    "VAR_TAU",
    "lam",
    "var_sort_key",
    "Monomial",
    "LaurentPoly",
    "CanonFactor",
    "canonical_one_minus",
    "FactoredRational",
    "ZERO",
    "ONE",
    "rat_inv_one_minus",
    "rat_sum",
    "rat_eq_exact",
    "rat_eq_modp",
    "substitute",
    "derivative",
    "emit",
    "parse",
    "parse_signed_monomial",
    "DEFAULT_PRIME",
    "DegeneratePointError",
    "ZeroSubstitutionError",
    "NotRepresentableError",
    "ParseError",
]


# --------------------------------------------------------------------------
# variables

VAR_T = "t"
VAR_L = "L"
VAR_A = "A"
VAR_TAU = "tau"


def lam(i: int) -> str:
    """Name of the i-th deformation variable; indices start at 2 (lam1 == L)."""
    if i < 2:
        raise ValueError("deformation variable indices start at 2")
    return f"lam{i}"


_VAR_KEY_CACHE: dict[str, tuple[int, int]] = {}


def var_sort_key(name: str) -> tuple[int, int]:
    """Position of a variable in the fixed total order t < L < lam_i < A < tau."""
    key = _VAR_KEY_CACHE.get(name)
    if key is None:
        if name == VAR_T:
            key = (0, 0)
        elif name == VAR_L:
            key = (1, 0)
        elif name.startswith("lam"):
            try:
                i = int(name[3:])
            except ValueError:
                raise ValueError(f"unknown variable {name!r}") from None
            if i < 2 or name != f"lam{i}":
                raise ValueError(f"unknown variable {name!r}")
            key = (2, i)
        elif name == VAR_A:
            key = (3, 0)
        elif name == VAR_TAU:
            key = (4, 0)
        else:
            raise ValueError(f"unknown variable {name!r}")
        _VAR_KEY_CACHE[name] = key
    return key


_KEY_END = (10**9, 0)


# --------------------------------------------------------------------------
# errors

class DegeneratePointError(RuntimeError):
    """Random sampling kept hitting vanishing denominators."""


class ZeroSubstitutionError(ValueError):
    """A substitution image was zero."""


class NotRepresentableError(ArithmeticError):
    """The exact result cannot be written as sign*unit*num / prod(1 - m_i)."""


class ParseError(ValueError):
    """Malformed serialized value."""


# --------------------------------------------------------------------------
# monomials

class Monomial:
    """A Laurent monomial: finitely many variables with nonzero integer exponents.

    Stored as a tuple of (name, exponent) pairs sorted by variable order.
    """

    __slots__ = ("exps", "_hash")

    def __init__(self, exps: tuple[tuple[str, int], ...] = ()):
        self.exps = exps
        self._hash = hash(exps)

    @classmethod
    def of(cls, mapping: Mapping[str, int]) -> "Monomial":
        items = []
        for name, e in mapping.items():
            var_sort_key(name)
            if not isinstance(e, int):
                raise TypeError("exponents must be integers")
            if e:
                items.append((name, e))
        items.sort(key=lambda p: var_sort_key(p[0]))
        return cls(tuple(items))

    @classmethod
    def var(cls, name: str, e: int = 1) -> "Monomial":
        var_sort_key(name)
        return cls(((name, e),)) if e else UNIT_MONOMIAL

    def is_unit(self) -> bool:
        return not self.exps

    def exp(self, name: str) -> int:
        for v, e in self.exps:
            if v == name:
                return e
        return 0

    def variables(self) -> set[str]:
        return {v for v, _ in self.exps}

    def __mul__(self, other: "Monomial") -> "Monomial":
        a, b = self.exps, other.exps
        if not a:
            return other
        if not b:
            return self
        out = []
        i = j = 0
        la, lb = len(a), len(b)
        while i < la or j < lb:
            ka = var_sort_key(a[i][0]) if i < la else _KEY_END
            kb = var_sort_key(b[j][0]) if j < lb else _KEY_END
            if ka < kb:
                out.append(a[i])
                i += 1
            elif kb < ka:
                out.append(b[j])
                j += 1
            else:
                e = a[i][1] + b[j][1]
                if e:
                    out.append((a[i][0], e))
                i += 1
                j += 1
        return Monomial(tuple(out))

    def inverse(self) -> "Monomial":
        return Monomial(tuple((v, -e) for v, e in self.exps))

    def __pow__(self, n: int) -> "Monomial":
        if n == 0:
            return UNIT_MONOMIAL
        if n == 1:
            return self
        return Monomial(tuple((v, e * n) for v, e in self.exps))

    def cmp(self, other: "Monomial") -> int:
        """Lexicographic comparison of full exponent vectors in variable order."""
        a, b = self.exps, other.exps
        i = j = 0
        la, lb = len(a), len(b)
        while i < la or j < lb:
            ka = var_sort_key(a[i][0]) if i < la else _KEY_END
            kb = var_sort_key(b[j][0]) if j < lb else _KEY_END
            if ka < kb:
                xa, xb = a[i][1], 0
                i += 1
            elif kb < ka:
                xa, xb = 0, b[j][1]
                j += 1
            else:
                xa, xb = a[i][1], b[j][1]
                i += 1
                j += 1
            if xa != xb:
                return -1 if xa < xb else 1
        return 0

    def __lt__(self, other: "Monomial") -> bool:
        return self.cmp(other) < 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return self._hash

    def sort_tuple(self) -> tuple:
        # stable total order for deterministic iteration; not the term order
        return tuple((var_sort_key(v), e) for v, e in self.exps)

    def eval_modp(self, point: Mapping[str, int], p: int) -> int:
        acc = 1
        for v, e in self.exps:
            acc = acc * pow(point[v], e, p) % p
        return acc

    def exps_dict(self) -> dict[str, int]:
        return dict(self.exps)

    def __repr__(self) -> str:
        if not self.exps:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self.exps)


UNIT_MONOMIAL = Monomial(())


# --------------------------------------------------------------------------
# Laurent polynomials

class LaurentPoly:
    """Sparse Laurent polynomial: monomial -> nonzero integer coefficient."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[Monomial, int]):
        self.terms = terms
        self._hash = None

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls({})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({UNIT_MONOMIAL: c}) if c else cls({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls.const(1)

    @classmethod
    def from_monomial(cls, m: Monomial, c: int = 1) -> "LaurentPoly":
        return cls({m: c}) if c else cls({})

    @classmethod
    def variable(cls, name: str, e: int = 1) -> "LaurentPoly":
        return cls({Monomial.var(name, e): 1})

    @classmethod
    def from_dict(cls, mapping: Mapping[Monomial, int]) -> "LaurentPoly":
        return cls({m: c for m, c in mapping.items() if c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {UNIT_MONOMIAL: 1}

    def as_constant(self) -> int | None:
        if not self.terms:
            return 0
        if len(self.terms) == 1 and UNIT_MONOMIAL in self.terms:
            return self.terms[UNIT_MONOMIAL]
        return None

    def as_single_term(self) -> tuple[Monomial, int] | None:
        if len(self.terms) == 1:
            return next(iter(self.terms.items()))
        return None

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly(out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.terms or not other.terms:
            return LaurentPoly({})
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Monomial, int] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = ma * mb
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return LaurentPoly(out)

    def mul_monomial(self, m: Monomial, c: int = 1) -> "LaurentPoly":
        if not c:
            return LaurentPoly({})
        if m.is_unit() and c == 1:
            return self
        return LaurentPoly({mm * m: cc * c for mm, cc in self.terms.items()})

    def mul_one_minus(self, body: Monomial) -> "LaurentPoly":
        """self * (1 - body), in one pass."""
        out = dict(self.terms)
        for m, c in self.terms.items():
            mm = m * body
            s = out.get(mm, 0) - c
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
        return LaurentPoly(out)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def leading_monomial(self) -> Monomial:
        it = iter(self.terms)
        best = next(it)
        for m in it:
            if best.cmp(m) < 0:
                best = m
        return best

    def content_monomial(self) -> Monomial:
        """Componentwise minimum exponent over all terms (the monomial content)."""
        mins: dict[str, int] = {}
        seen: dict[str, int] = {}
        n = 0
        for m in self.terms:
            n += 1
            for v, e in m.exps:
                if v in mins:
                    if e < mins[v]:
                        mins[v] = e
                    seen[v] += 1
                else:
                    mins[v] = e
                    seen[v] = 1
        # a variable missing from some term has exponent 0 there
        for v, cnt in seen.items():
            if cnt < n and mins[v] > 0:
                mins[v] = 0
        return Monomial.of({v: e for v, e in mins.items() if e})

    def derivative(self, name: str) -> "LaurentPoly":
        var_sort_key(name)
        shift = Monomial.var(name, -1)
        out: dict[Monomial, int] = {}
        for m, c in self.terms.items():
            e = m.exp(name)
            if e:
                mm = m * shift
                s = out.get(mm, 0) + c * e
                if s:
                    out[mm] = s
                else:
                    out.pop(mm, None)
        return LaurentPoly(out)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for m in self.terms:
            out.update(m.variables())
        return out

    def eval_modp(self, point: Mapping[str, int], p: int) -> int:
        acc = 0
        for m, c in self.terms.items():
            acc = (acc + c * m.eval_modp(point, p)) % p
        return acc

    def divexact_one_minus(self, body: Monomial) -> "LaurentPoly | None":
        """Exact quotient self / (1 - body), or None when not divisible.

        Terms are grouped into progressions key * body**j; along each
        progression the quotient coefficients are the running prefix sums,
        and divisibility is exactly "every progression sums to zero".
        """
        if not self.terms:
            return self
        pivot_var, pivot_exp = body.exps[0]  # canonical body: pivot_exp > 0
        classes: dict[Monomial, dict[int, int]] = {}
        for m, c in self.terms.items():
            j = m.exp(pivot_var) // pivot_exp
            key = m * (body ** (-j)) if j else m
            col = classes.get(key)
            if col is None:
                classes[key] = {j: c}
            else:
                col[j] = c
        out: dict[Monomial, int] = {}
        for key, col in classes.items():
            if sum(col.values()) != 0:
                return None
        for key, col in classes.items():
            js = sorted(col)
            run = 0
            for j in range(js[0], js[-1]):
                run += col.get(j, 0)
                if run:
                    out[key * (body ** j)] = run
        return LaurentPoly(out)

    def divexact(self, g: "LaurentPoly") -> "LaurentPoly | None":
        """Exact quotient self / g over the integers, or None."""
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self
        gc = g.as_constant()
        if gc is not None:
            out = {}
            for m, c in self.terms.items():
                q, r = divmod(c, gc)
                if r:
                    return None
                out[m] = q
            return LaurentPoly(out)
        cp = self.content_monomial()
        cg = g.content_monomial()
        rem = dict(self.mul_monomial(cp.inverse()).terms)
        G = g.mul_monomial(cg.inverse())
        gl = G.leading_monomial()
        glc = G.terms[gl]
        gl_inv = gl.inverse()
        out: dict[Monomial, int] = {}
        while rem:
            lm = None
            for m in rem:
                if lm is None or lm.cmp(m) < 0:
                    lm = m
            qm = lm * gl_inv
            if any(e < 0 for _, e in qm.exps):
                return None
            q, r = divmod(rem[lm], glc)
            if r:
                return None
            out[qm] = q
            for gm, gcoef in G.terms.items():
                pos = qm * gm
                s = rem.get(pos, 0) - q * gcoef
                if s:
                    rem[pos] = s
                else:
                    rem.pop(pos, None)
        return LaurentPoly(out).mul_monomial(cp * cg.inverse())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items(), key=lambda kv: kv[0].sort_tuple()):
            bits.append(f"{c}" if m.is_unit() else f"{c}*{m!r}")
        return " + ".join(bits)


# --------------------------------------------------------------------------
# canonical denominator factors

class CanonFactor:
    """The binomial (1 - body) with the body in canonical orientation."""

    __slots__ = ("body", "_hash")

    def __init__(self, body: Monomial):
        if body.is_unit():
            raise ValueError("factor body must be a nonconstant monomial")
        if body.exps[0][1] <= 0:
            raise ValueError("factor body not in canonical orientation")
        self.body = body
        self._hash = hash(("CanonFactor", body))

    def expand(self) -> LaurentPoly:
        return LaurentPoly({UNIT_MONOMIAL: 1, self.body: -1})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CanonFactor) and self.body == other.body

    def __hash__(self) -> int:
        return self._hash

    def sort_tuple(self) -> tuple:
        return self.body.sort_tuple()

    def __repr__(self) -> str:
        return f"(1 - {self.body!r})"


def canonical_one_minus(body: Monomial) -> tuple[int, Monomial, CanonFactor]:
    """Write (1 - body) as sign * unit * (1 - canonical_body).

    Returns (sign, unit, factor).  For an anti-canonical body the
    orientation flip extracts the unit exactly: 1 - m**-1 == (-m**-1)*(1 - m).
    """
    if body.is_unit():
        raise ZeroDivisionError("factor (1 - 1) is zero")
    if body.exps[0][1] > 0:
        return 1, UNIT_MONOMIAL, CanonFactor(body)
    return -1, body, CanonFactor(body.inverse())


# --------------------------------------------------------------------------
# factored rationals

_ImageType = Union["FactoredRational", Monomial, tuple[int, Monomial]]


class FactoredRational:
    """sign * unit * num / prod (1 - body_i)^mult_i, in canonical form.

    Canonical form: num is zero-free with componentwise-minimal exponents
    all zero and positive leading coefficient; unit carries the extracted
    monomial content; den maps canonical factors to positive multiplicities,
    none of which divides num.  Zero is (+1, 1, 0, {}).
    """

    __slots__ = ("sign", "unit", "num", "den", "_hash")

    def __init__(self, sign: int, unit: Monomial, num: LaurentPoly,
                 den: dict[CanonFactor, int]):
        # raw constructor: callers go through _make for normalization
        self.sign = sign
        self.unit = unit
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_int(cls, c: int) -> "FactoredRational":
        return _make(1, UNIT_MONOMIAL, LaurentPoly.const(c), {})

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "FactoredRational":
        return _make(1, UNIT_MONOMIAL, p, {})

    @classmethod
    def monomial_value(cls, exps: Mapping[str, int], sign: int = 1,
                       ) -> "FactoredRational":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return _make(sign, Monomial.of(exps), LaurentPoly.one(), {})

    @classmethod
    def one_minus(cls, exps: Mapping[str, int]) -> "FactoredRational":
        m = Monomial.of(exps)
        return _make(1, UNIT_MONOMIAL, LaurentPoly({UNIT_MONOMIAL: 1, m: -1}), {})

    @classmethod
    def inv_one_minus(cls, exps: Mapping[str, int]) -> "FactoredRational":
        s, u, f = canonical_one_minus(Monomial.of(exps))
        return _make(s, u.inverse(), LaurentPoly.one(), {f: 1})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return (self.sign == 1 and self.unit.is_unit() and self.num.is_one()
                and not self.den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def as_signed_monomial(self) -> tuple[int, Monomial] | None:
        if self.den or not self.num.is_one():
            return None
        return self.sign, self.unit

    def variables(self) -> set[str]:
        out = self.num.variables() | self.unit.variables()
        for f in self.den:
            out.update(f.body.variables())
        return out

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "FactoredRational | None":
        if isinstance(other, FactoredRational):
            return other
        if isinstance(other, int):
            return FactoredRational.from_int(other)
        return None

    def __add__(self, other) -> "FactoredRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return rat_sum((self, o))

    __radd__ = __add__

    def __sub__(self, other) -> "FactoredRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return rat_sum((self, -o))

    def __rsub__(self, other) -> "FactoredRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return rat_sum((o, -self))

    def __neg__(self) -> "FactoredRational":
        if self.is_zero():
            return self
        return FactoredRational(-self.sign, self.unit, self.num, self.den)

    def __mul__(self, other) -> "FactoredRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return ZERO
        den = dict(self.den)
        for f, m in o.den.items():
            den[f] = den.get(f, 0) + m
        return _make(self.sign * o.sign, self.unit * o.unit,
                     self.num * o.num, den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FactoredRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero value")
        if self.is_zero():
            return ZERO
        s, u, facs, residual = _factor_binomials(o.num)
        sign = self.sign * o.sign * s
        unit = self.unit * (o.unit * u).inverse()
        num = self.num
        for f, m in o.den.items():
            for _ in range(m):
                num = num.mul_one_minus(f.body)
        den = dict(self.den)
        for f, m in facs.items():
            den[f] = den.get(f, 0) + m
        if not residual.is_one():
            q = num.divexact(residual)
            if q is None:
                raise NotRepresentableError(
                    "quotient does not fit the factored form")
            num = q
        return _make(sign, unit, num, den)

    def __rtruediv__(self, other) -> "FactoredRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "FactoredRational":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (ONE / self) ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- evaluation --------------------------------------------------------

    def eval_modp(self, point: Mapping[str, int], p: int) -> int:
        """Value at a prime-field point; raises ZeroDivisionError when a
        denominator factor vanishes there."""
        den = 1
        for f, mult in self.den.items():
            base = (1 - f.body.eval_modp(point, p)) % p
            if base == 0:
                raise ZeroDivisionError("denominator factor vanishes at point")
            den = den * pow(base, mult, p) % p
        acc = self.num.eval_modp(point, p) * self.unit.eval_modp(point, p)
        if self.sign < 0:
            acc = -acc
        return acc * pow(den, -1, p) % p

    # -- structural identity -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return (self.sign == other.sign and self.unit == other.unit
                and self.num == other.num and self.den == other.den)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.sign, self.unit, self.num,
                               frozenset(self.den.items())))
        return self._hash

    # -- maintenance -------------------------------------------------------

    def validate(self) -> None:
        """Assert every canonical-form invariant; for tests."""
        assert self.sign in (1, -1)
        if self.num.is_zero():
            assert self.sign == 1 and self.unit.is_unit() and not self.den
            return
        assert all(c != 0 for c in self.num.terms.values())
        assert self.num.content_monomial().is_unit(), "unextracted content"
        assert self.num.terms[self.num.leading_monomial()] > 0, "negative lead"
        for f, mult in self.den.items():
            assert mult > 0
            assert f.body.exps[0][1] > 0
            assert self.num.divexact_one_minus(f.body) is None, \
                "denominator factor divides numerator"

    def __repr__(self) -> str:
        if self.is_zero():
            return "FactoredRational(0)"
        s = ("" if self.sign > 0 else "-") + ("" if self.unit.is_unit()
                                              else repr(self.unit) + "*")
        s += f"({self.num!r})"
        if self.den:
            facs = sorted(self.den.items(), key=lambda kv: kv[0].sort_tuple())
            s += " / " + "*".join(
                f"{f!r}" + (f"^{m}" if m > 1 else "") for f, m in facs)
        return f"FactoredRational({s})"


def _make(sign: int, unit: Monomial, num: LaurentPoly,
          den: dict[CanonFactor, int]) -> FactoredRational:
    """Normalize raw parts into canonical form."""
    if num.is_zero():
        return FactoredRational(1, UNIT_MONOMIAL, LaurentPoly.zero(), {})
    clean: dict[CanonFactor, int] = {}
    for f, mult in den.items():
        if mult > 0:
            clean[f] = clean.get(f, 0) + mult
        elif mult < 0:
            # negative powers of factors belong upstairs
            for _ in range(-mult):
                num = num.mul_one_minus(f.body)
    if clean and len(num.terms) > 1:
        for f in sorted(clean, key=CanonFactor.sort_tuple):
            while clean.get(f, 0) > 0:
                q = num.divexact_one_minus(f.body)
                if q is None:
                    break
                num = q
                clean[f] -= 1
                if len(num.terms) <= 1:
                    break
            if clean.get(f, 0) == 0:
                del clean[f]
            if len(num.terms) <= 1:
                break
        clean = {f: m for f, m in clean.items() if m > 0}
    content = num.content_monomial()
    if not content.is_unit():
        num = num.mul_monomial(content.inverse())
        unit = unit * content
    if num.terms[num.leading_monomial()] < 0:
        num = -num
        sign = -sign
    return FactoredRational(sign, unit, num, clean)


ZERO = FactoredRational(1, UNIT_MONOMIAL, LaurentPoly.zero(), {})
ONE = FactoredRational(1, UNIT_MONOMIAL, LaurentPoly.one(), {})


def rat_inv_one_minus(q: FactoredRational) -> FactoredRational:
    """1/(1 - q), exactly.

    For q a signed monomial the result stays a single canonical factor
    (flipping orientation or routing through (1 - q^2) as needed); general
    q falls back to rational division and may not be representable.
    """
    sm = q.as_signed_monomial()
    if sm is None:
        return ONE / (ONE - q)
    s, body = sm
    if body.is_unit():
        if s > 0:
            raise ZeroDivisionError("factor (1 - 1) is zero")
        raise NotRepresentableError("1/(1 + 1) has no factored form")
    if s > 0:
        cs, cu, cf = canonical_one_minus(body)
        return _make(cs, cu.inverse(), LaurentPoly.one(), {cf: 1})
    # 1/(1 + body) == (1 - body) / (1 - body^2)
    cs, cu, cf = canonical_one_minus(body * body)
    return _make(cs, cu.inverse(),
                 LaurentPoly({UNIT_MONOMIAL: 1, body: -1}), {cf: 1})


def _factor_binomials(p: LaurentPoly
                      ) -> tuple[int, Monomial, dict[CanonFactor, int], LaurentPoly]:
    """Best-effort split of p into sign * unit * prod(1-body)^mult * residual.

    Only trial division against candidate bodies built from pairs of the
    polynomial's own monomials is attempted; anything left over is returned
    as the residual.  No gcd, no general factorization.
    """
    sign = 1
    unit = UNIT_MONOMIAL
    facs: dict[CanonFactor, int] = {}
    content = p.content_monomial()
    if not content.is_unit():
        p = p.mul_monomial(content.inverse())
        unit = content
    fuel = 200
    while len(p.terms) >= 2 and fuel > 0:
        fuel -= 1
        if len(p.terms) == 2:
            (m1, c1), (m2, c2) = sorted(p.terms.items(),
                                        key=lambda kv: kv[0].sort_tuple())
            if c1 != -c2:
                break
            # c1*m1 + c2*m2 == c1 * m1 * (1 - m2/m1)
            s, u, f = canonical_one_minus(m2 * m1.inverse())
            facs[f] = facs.get(f, 0) + 1
            if c1 * s < 0:
                sign = -sign
            unit = unit * m1 * u
            p = LaurentPoly.const(abs(c1))
            break
        if len(p.terms) > 40:
            break
        monos = sorted(p.terms, key=Monomial.sort_tuple)
        found = False
        for i in range(len(monos)):
            for j in range(i + 1, len(monos)):
                cand = monos[j] * monos[i].inverse()
                s, u, f = canonical_one_minus(cand)
                q = p.divexact_one_minus(f.body)
                if q is not None:
                    facs[f] = facs.get(f, 0) + 1
                    p = q
                    content = p.content_monomial()
                    if not content.is_unit():
                        p = p.mul_monomial(content.inverse())
                        unit = unit * content
                    found = True
                    break
            if found:
                break
        if not found:
            break
    c = p.as_constant()
    if c is not None and c < 0:
        sign = -sign
        p = LaurentPoly.const(-c)
    elif c is None and p.terms[p.leading_monomial()] < 0:
        sign = -sign
        p = -p
    return sign, unit, facs, p


# --------------------------------------------------------------------------
# sums

def rat_sum(values: Iterable[FactoredRational]) -> FactoredRational:
    """Exact sum over a shared denominator (cheaper than folding pairwise)."""
    vals = [v for v in values if not v.is_zero()]
    if not vals:
        return ZERO
    if len(vals) == 1:
        return vals[0]
    den: dict[CanonFactor, int] = {}
    for v in vals:
        for f, m in v.den.items():
            if m > den.get(f, 0):
                den[f] = m
    acc: dict[Monomial, int] = {}
    for v in vals:
        poly = v.num.mul_monomial(v.unit, v.sign)
        for f, m in den.items():
            extra = m - v.den.get(f, 0)
            for _ in range(extra):
                poly = poly.mul_one_minus(f.body)
        for mono, c in poly.terms.items():
            s = acc.get(mono, 0) + c
            if s:
                acc[mono] = s
            else:
                acc.pop(mono, None)
    return _make(1, UNIT_MONOMIAL, LaurentPoly(acc), den)


# --------------------------------------------------------------------------
# equality

def rat_eq_exact(x: FactoredRational, y: FactoredRational) -> bool:
    """Mathematical equality by cross multiplication; no gcd involved."""
    if x is y or x == y:
        return True
    extra_x: list[tuple[CanonFactor, int]] = []  # from y.den, multiply into x side
    extra_y: list[tuple[CanonFactor, int]] = []
    for f in set(x.den) | set(y.den):
        mx = x.den.get(f, 0)
        my = y.den.get(f, 0)
        if mx > my:
            extra_y.append((f, mx - my))
        elif my > mx:
            extra_x.append((f, my - mx))
    lhs = x.num.mul_monomial(x.unit, x.sign)
    for f, m in extra_x:
        for _ in range(m):
            lhs = lhs.mul_one_minus(f.body)
    rhs = y.num.mul_monomial(y.unit, y.sign)
    for f, m in extra_y:
        for _ in range(m):
            rhs = rhs.mul_one_minus(f.body)
    return lhs.terms == rhs.terms


DEFAULT_PRIME = (1 << 61) - 1


def rat_eq_modp(x: FactoredRational, y: FactoredRational, trials: int = 20,
                seed: int = 0, prime: int = DEFAULT_PRIME) -> bool:
    """Probabilistic equality at random prime-field points.

    Deterministic for a given seed.  Points where any denominator factor of
    either side vanishes are skipped; more than 100*trials consecutive bad
    points raise DegeneratePointError.  Genuinely equal inputs are never
    reported unequal (evaluation is a homomorphism); unequal inputs collide
    only with probability O(degree/prime) per trial.
    """
    rng = random.Random(seed)
    live = sorted(x.variables() | y.variables(), key=var_sort_key)
    good = 0
    bad_streak = 0
    limit = 100 * trials
    while good < trials:
        point = {v: rng.randrange(1, prime) for v in live}
        try:
            vx = x.eval_modp(point, prime)
            vy = y.eval_modp(point, prime)
        except ZeroDivisionError:
            bad_streak += 1
            if bad_streak > limit:
                raise DegeneratePointError(
                    f"{bad_streak} consecutive sample points hit a vanishing "
                    f"denominator") from None
            continue
        bad_streak = 0
        if vx != vy:
            return False
        good += 1
    return True


# --------------------------------------------------------------------------
# substitution

def _image_as_signed_monomial(img: _ImageType) -> tuple[int, Monomial] | None:
    if isinstance(img, Monomial):
        return 1, img
    if isinstance(img, tuple):
        s, m = img
        if s not in (1, -1) or not isinstance(m, Monomial):
            raise TypeError("signed monomial image must be (+-1, Monomial)")
        return s, m
    if isinstance(img, FactoredRational):
        return img.as_signed_monomial()
    raise TypeError(f"unsupported substitution image {img!r}")


def _image_as_rational(img: _ImageType) -> FactoredRational:
    if isinstance(img, FactoredRational):
        return img
    s, m = _image_as_signed_monomial(img)
    return _make(s, m, LaurentPoly.one(), {})


def substitute(x: FactoredRational,
               sigma: Mapping[str, _ImageType]) -> FactoredRational:
    """Exact substitution of variables by nonzero images.

    Images may be monomials, signed monomials, or whole values.  A monomial
    image keeps the factored shape intact; a general image routes through
    full rational arithmetic and may raise NotRepresentableError if the
    result leaves the representable class.
    """
    for name, img in sigma.items():
        var_sort_key(name)
        if isinstance(img, FactoredRational) and img.is_zero():
            raise ZeroSubstitutionError(f"image of {name!r} is zero")
    if not sigma or x.is_zero():
        return x
    live = x.variables()
    if not (live & set(sigma)):
        return x

    signed: dict[str, tuple[int, Monomial]] = {}
    monomial_path = True
    for name, img in sigma.items():
        sm = _image_as_signed_monomial(img)
        if sm is None:
            monomial_path = False
            break
        signed[name] = sm

    if monomial_path:
        return _substitute_monomial(x, signed)
    return _substitute_general(x, sigma)


def _map_monomial(m: Monomial,
                  signed: Mapping[str, tuple[int, Monomial]]
                  ) -> tuple[int, Monomial]:
    sign = 1
    acc = UNIT_MONOMIAL
    for v, e in m.exps:
        img = signed.get(v)
        if img is None:
            acc = acc * Monomial.var(v, e)
        else:
            s, mm = img
            if s < 0 and e % 2:
                sign = -sign
            acc = acc * (mm ** e)
    return sign, acc


def _substitute_monomial(x: FactoredRational,
                         signed: Mapping[str, tuple[int, Monomial]]
                         ) -> FactoredRational:
    s0, unit = _map_monomial(x.unit, signed)
    sign = x.sign * s0
    num_terms: dict[Monomial, int] = {}
    for m, c in x.num.terms.items():
        s, mm = _map_monomial(m, signed)
        cc = num_terms.get(mm, 0) + s * c
        if cc:
            num_terms[mm] = cc
        else:
            num_terms.pop(mm, None)
    num = LaurentPoly(num_terms)
    den: dict[CanonFactor, int] = {}
    for f, mult in x.den.items():
        s, b = _map_monomial(f.body, signed)
        if b.is_unit():
            if s > 0:
                raise ZeroDivisionError(
                    "denominator factor vanishes under substitution")
            raise NotRepresentableError(
                "denominator factor became the integer 2 under substitution")
        if s > 0:
            cs, cu, cf = canonical_one_minus(b)
            den[cf] = den.get(cf, 0) + mult
            if cs < 0 and mult % 2:
                sign = -sign
            unit = unit * (cu ** (-mult))
        else:
            # 1 / (1 + b) == (1 - b) / (1 - b*b)
            cs, cu, cf = canonical_one_minus(b * b)
            den[cf] = den.get(cf, 0) + mult
            if cs < 0 and mult % 2:
                sign = -sign
            unit = unit * (cu ** (-mult))
            for _ in range(mult):
                num = num.mul_one_minus(b)
    return _make(sign, unit, num, den)


def _substitute_general(x: FactoredRational,
                        sigma: Mapping[str, _ImageType]) -> FactoredRational:
    images = {name: _image_as_rational(img) for name, img in sigma.items()}

    def value_of(v: str, e: int) -> FactoredRational:
        img = images.get(v)
        if img is None:
            return FactoredRational.monomial_value({v: e})
        return img ** e

    def map_mono(m: Monomial, c: int = 1) -> FactoredRational:
        acc = FactoredRational.from_int(c)
        for v, e in m.exps:
            acc = acc * value_of(v, e)
        return acc

    num_val = rat_sum(map_mono(m, c) for m, c in x.num.terms.items())
    acc = map_mono(x.unit) * num_val
    if x.sign < 0:
        acc = -acc
    for f, mult in x.den.items():
        fval = ONE - map_mono(f.body)
        if fval.is_zero():
            raise ZeroDivisionError(
                "denominator factor vanishes under substitution")
        for _ in range(mult):
            acc = acc / fval
    return acc


# --------------------------------------------------------------------------
# differentiation

def derivative(x: FactoredRational, name: str) -> FactoredRational:
    """Exact partial derivative, quotient rule on the factored form."""
    var_sort_key(name)
    if x.is_zero():
        return ZERO
    shift = Monomial.var(name, -1)
    parts: list[FactoredRational] = []
    base = x.num.derivative(name)
    a = x.unit.exp(name)
    if a:
        base = base + x.num.mul_monomial(shift, a)
    if not base.is_zero():
        parts.append(_make(x.sign, x.unit, base, dict(x.den)))
    for f, mult in x.den.items():
        b = f.body.exp(name)
        if b:
            den2 = dict(x.den)
            den2[f] = mult + 1
            poly = x.num.mul_monomial(f.body * shift, mult * b)
            parts.append(_make(x.sign, x.unit, poly, den2))
    return rat_sum(parts)


# --------------------------------------------------------------------------
# serialization

def _exps_to_json(m: Monomial) -> dict[str, int]:
    return {v: e for v, e in sorted(m.exps, key=lambda p: var_sort_key(p[0]))}


def emit(x: FactoredRational, fmt: str = "json") -> str:
    """Serialize a value; "json" is bit-exact round-trippable, "latex" is
    display-only."""
    if fmt == "json":
        return _emit_json(x)
    if fmt == "latex":
        return _emit_latex(x)
    raise ValueError(f"unknown format {fmt!r}")


def _emit_json(x: FactoredRational) -> str:
    import functools
    num_terms = sorted(x.num.terms.items(),
                       key=functools.cmp_to_key(lambda a, b: a[0].cmp(b[0])),
                       reverse=True)
    doc = {
        "unit": {"sign": x.sign, "exps": _exps_to_json(x.unit)},
        "num": [{"c": c, "exps": _exps_to_json(m)} for m, c in num_terms],
        "den": [{"body": _exps_to_json(f.body), "mult": mult}
                for f, mult in sorted(x.den.items(),
                                      key=lambda kv: kv[0].sort_tuple())],
    }
    return json.dumps(doc, separators=(",", ":"))


_LATEX_NAMES = {VAR_T: "t", VAR_L: r"\mathbb{L}", VAR_A: "A", VAR_TAU: r"\tau"}


def _latex_var(name: str) -> str:
    fixed = _LATEX_NAMES.get(name)
    if fixed is not None:
        return fixed
    return r"\lambda_{%s}" % name[3:]


def _latex_monomial(m: Monomial) -> str:
    bits = []
    for v, e in m.exps:
        sym = _latex_var(v)
        bits.append(sym if e == 1 else "%s^{%d}" % (sym, e))
    return "".join(bits)


def _latex_term(m: Monomial, c: int, lead: bool) -> str:
    sign = "-" if c < 0 else ("" if lead else "+")
    mag = abs(c)
    if m.is_unit():
        return f"{sign}{mag}"
    coeff = "" if mag == 1 else str(mag)
    return f"{sign}{coeff}{_latex_monomial(m)}"


def _latex_poly(p: LaurentPoly) -> str:
    import functools
    terms = sorted(p.terms.items(),
                   key=functools.cmp_to_key(lambda a, b: a[0].cmp(b[0])),
                   reverse=True)
    return "".join(_latex_term(m, c, i == 0) for i, (m, c) in enumerate(terms))


def _emit_latex(x: FactoredRational) -> str:
    if x.is_zero():
        return "0"
    sign = "-" if x.sign < 0 else ""
    if x.num.is_one():
        num = "" if not x.unit.is_unit() else "1"
    elif x.num.as_single_term():
        num = _latex_poly(x.num)
    else:
        num = "(" + _latex_poly(x.num) + ")"
    unit = _latex_monomial(x.unit)
    upper = num + unit or "1"
    if not x.den:
        return sign + upper
    facs = sorted(x.den.items(), key=lambda kv: kv[0].sort_tuple())
    lower = "".join(
        r"(1-%s)" % _latex_monomial(f.body) + ("" if m == 1 else "^{%d}" % m)
        for f, m in facs)
    return r"%s\frac{%s}{%s}" % (sign, upper, lower)


def _parse_exps(doc, where: str) -> Monomial:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: exponent map must be an object")
    out = {}
    for name, e in doc.items():
        try:
            var_sort_key(name)
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from None
        if not isinstance(e, int) or isinstance(e, bool) or e == 0:
            raise ParseError(f"{where}: exponents must be nonzero integers")
        out[name] = e
    return Monomial.of(out)


def parse(text: str) -> FactoredRational:
    """Inverse of emit(..., "json")."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"unit", "num", "den"}:
        raise ParseError("expected an object with keys unit, num, den")
    unit_doc = doc["unit"]
    if (not isinstance(unit_doc, dict) or set(unit_doc) != {"sign", "exps"}
            or unit_doc["sign"] not in (1, -1)):
        raise ParseError("unit must be {sign: +-1, exps: {...}}")
    sign = unit_doc["sign"]
    unit = _parse_exps(unit_doc["exps"], "unit")
    if not isinstance(doc["num"], list):
        raise ParseError("num must be a list of terms")
    terms: dict[Monomial, int] = {}
    for i, term in enumerate(doc["num"]):
        if (not isinstance(term, dict) or set(term) != {"c", "exps"}
                or not isinstance(term["c"], int) or isinstance(term["c"], bool)
                or term["c"] == 0):
            raise ParseError(f"num[{i}] must be {{c: nonzero int, exps: ...}}")
        m = _parse_exps(term["exps"], f"num[{i}]")
        if m in terms:
            raise ParseError(f"num[{i}]: duplicate monomial")
        terms[m] = term["c"]
    if not isinstance(doc["den"], list):
        raise ParseError("den must be a list of factors")
    den: dict[CanonFactor, int] = {}
    for i, fac in enumerate(doc["den"]):
        if (not isinstance(fac, dict) or set(fac) != {"body", "mult"}
                or not isinstance(fac["mult"], int) or fac["mult"] < 1):
            raise ParseError(f"den[{i}] must be {{body: ..., mult: >=1}}")
        body = _parse_exps(fac["body"], f"den[{i}]")
        try:
            f = CanonFactor(body)
        except ValueError as exc:
            raise ParseError(f"den[{i}]: {exc}") from None
        if f in den:
            raise ParseError(f"den[{i}]: duplicate factor")
        den[f] = fac["mult"]
    return _make(sign, unit, LaurentPoly(terms), den)


# --------------------------------------------------------------------------
# tiny expression grammar for signed monomials (CLI lambda specs)

def parse_signed_monomial(text: str) -> FactoredRational:
    """Parse expressions like "L", "-L^2", "A*tau^4", "1" into values.

    Grammar: optional sign, then "1" or *-separated factors name[^int].
    """
    s = text.strip()
    if not s:
        raise ParseError("empty monomial expression")
    sign = 1
    if s[0] in "+-":
        if s[0] == "-":
            sign = -1
        s = s[1:].strip()
    if not s:
        raise ParseError(f"dangling sign in {text!r}")
    if s == "1":
        return FactoredRational.monomial_value({}, sign)
    exps: dict[str, int] = {}
    for raw in s.split("*"):
        piece = raw.strip()
        if not piece:
            raise ParseError(f"empty factor in {text!r}")
        name, caret, epart = piece.partition("^")
        name = name.strip()
        try:
            var_sort_key(name)
        except ValueError:
            raise ParseError(f"unknown variable {name!r} in {text!r}") from None
        if caret:
            try:
                e = int(epart.strip())
            except ValueError:
                raise ParseError(f"bad exponent in {text!r}") from None
        else:
            e = 1
        if e == 0:
            continue
        exps[name] = exps.get(name, 0) + e
    exps = {v: e for v, e in exps.items() if e}
    return FactoredRational.monomial_value(exps, sign)
