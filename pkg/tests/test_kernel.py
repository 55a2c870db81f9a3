"""Kernel tests: monomial order, Laurent arithmetic, the factored rational
normal form, equality strategies, substitution, differentiation, emit/parse.

Expected values are frozen from hand computation; randomized property
checks use a fixed seed so failures reproduce.
"""

import json
import random

import pytest

from arcmot.kernel import (
    DEFAULT_PRIME,
    DegeneratePointError,
    FactoredRational,
    LaurentPoly,
    Monomial,
    NotRepresentableError,
    ONE,
    ParseError,
    UNIT_MONOMIAL,
    ZERO,
    ZeroSubstitutionError,
    derivative,
    emit,
    parse,
    parse_signed_monomial,
    rat_eq_exact,
    rat_eq_modp,
    rat_inv_one_minus,
    rat_sum,
    substitute,
    var_sort_key,
)

T = LaurentPoly.variable("t")
L = LaurentPoly.variable("L")
ONE_P = LaurentPoly.one()

RT = FactoredRational.from_poly(T)
RL = FactoredRational.from_poly(L)

G11_JSON = ('{"unit":{"sign":1,"exps":{"L":-2}},'
            '"num":[{"c":1,"exps":{"L":2}},{"c":-2,"exps":{"L":1}},'
            '{"c":1,"exps":{}}],"den":[]}')


def mono(**exps):
    return Monomial.of(exps)


def rmono(**exps):
    return FactoredRational.monomial_value(exps)


def random_poly(rng, nvars=2, nterms=4, span=3):
    names = ["t", "L", "lam2"][:nvars]
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        m = Monomial.of({v: rng.randint(-span, span) for v in names})
        terms[m] = terms.get(m, 0) + rng.randint(-5, 5)
    p = LaurentPoly.from_dict(terms)
    return p if not p.is_zero() else ONE_P


def random_rational(rng):
    num = random_poly(rng)
    bodies = [{"t": 1}, {"L": 1}, {"t": 2, "L": -1}, {"t": 1, "L": 1}]
    val = FactoredRational.from_poly(num)
    for body in rng.sample(bodies, rng.randint(0, 2)):
        val = val * FactoredRational.inv_one_minus(body)
    return val


# ---- variable order and monomials ----

def test_variable_order():
    names = ["t", "L", "lam2", "lam3", "lam10", "A", "tau"]
    assert sorted(names, key=var_sort_key) == names
    with pytest.raises(Exception):
        var_sort_key("x")


def test_monomial_product_inverse_power():
    m = mono(t=2, L=-1) * mono(t=-2, L=3)
    assert m == mono(L=2)
    assert mono(t=1, L=2).inverse() == mono(t=-1, L=-2)
    assert mono(t=1, L=-1) ** 3 == mono(t=3, L=-3)
    assert mono(t=1) * mono(t=-1) == UNIT_MONOMIAL
    assert UNIT_MONOMIAL.is_unit()


def test_monomial_lex_order_with_negative_exponents():
    # missing variables count as exponent 0; t^-1 ranks below the unit
    assert mono(t=-1) < UNIT_MONOMIAL
    assert UNIT_MONOMIAL < mono(t=1)
    assert mono(t=-1, L=5) < mono(L=1)
    assert mono(L=1) < mono(t=1, L=-9)
    assert not mono(t=1) < mono(t=1)


def test_monomial_eval_modp():
    p = 101
    m = mono(t=2, L=-1)
    # 3^2 * inverse(5) mod 101
    assert m.eval_modp({"t": 3, "L": 5}, p) == 9 * pow(5, p - 2, p) % p


# ---- Laurent polynomial ring ----

def test_poly_ring_ops():
    assert (ONE_P + T) * (ONE_P - T) == ONE_P - T * T
    assert (ONE_P + T) ** 2 == ONE_P + LaurentPoly.const(2) * T + T * T
    assert (T - T).is_zero()
    assert (T + L).as_constant() is None
    assert (T * T.mul_monomial(mono(t=-2))).as_constant() == 1
    assert T.mul_monomial(mono(t=-1)).is_one()


def test_poly_ring_axioms_randomized():
    rng = random.Random(7)
    for _ in range(60):
        a, b, c = (random_poly(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert a + (b + c) == (a + b) + c
        assert a - a == LaurentPoly.zero()


def test_poly_mul_one_minus():
    body = mono(t=2, L=-1)
    p = random_poly(random.Random(3))
    assert p.mul_one_minus(body) == p - p.mul_monomial(body)


def test_poly_derivative():
    p = T * T * T + L  # t^3 + L
    assert p.derivative("t") == LaurentPoly.const(3) * T * T
    assert p.derivative("L") == ONE_P
    q = LaurentPoly.variable("t", -2)
    assert q.derivative("t") == LaurentPoly.from_monomial(mono(t=-3), -2)


def test_divexact_one_minus():
    one_minus_t = ONE_P - T
    p = ONE_P - T * T * T
    assert p.divexact_one_minus(mono(t=1)) == ONE_P + T + T * T
    assert (ONE_P - T * T).divexact_one_minus(mono(t=1)) == ONE_P + T
    assert one_minus_t.divexact_one_minus(mono(t=2)) is None
    # multivariate body
    tl = mono(t=1, L=1)
    p = ONE_P - LaurentPoly.from_monomial(tl ** 3)
    q = p.divexact_one_minus(tl)
    assert q == ONE_P + LaurentPoly.from_monomial(tl) \
        + LaurentPoly.from_monomial(tl ** 2)


def test_divexact_roundtrip_randomized():
    rng = random.Random(11)
    for _ in range(80):
        p = random_poly(rng)
        q = random_poly(rng)
        prod = p * q
        got = prod.divexact(q)
        assert got == p, (p, q)
    # non-divisible pair
    assert (ONE_P + T).divexact(ONE_P - T) is None


# ---- factored rational normal form ----

def test_zero_and_one():
    assert ZERO.is_zero() and not ZERO
    assert ONE.is_one() and ONE
    assert FactoredRational.from_int(0) == ZERO
    assert FactoredRational.from_int(1) == ONE
    assert (RT - RT) == ZERO


def test_canonical_orientation_flip():
    # 1/(1 - L^-1) normalizes to -L/(1-L)
    x = FactoredRational.inv_one_minus({"L": -1})
    y = -RL * FactoredRational.inv_one_minus({"L": 1})
    assert x == y  # structural equality after normalization
    x.validate()
    # and equals the unflipped arithmetic value: (1-L^-1) * x == 1
    assert rat_eq_exact(x * FactoredRational.one_minus({"L": -1}), ONE)


def test_double_flip_is_identity():
    body = {"t": -2, "L": 3}
    f = FactoredRational.one_minus(body)
    g = FactoredRational.one_minus({"t": 2, "L": -3})
    assert rat_eq_exact(f * FactoredRational.inv_one_minus(body), ONE)
    assert rat_eq_exact(g * FactoredRational.inv_one_minus({"t": 2, "L": -3}),
                        ONE)


def test_eager_cancellation():
    # (1-t^2)/(1-t) collapses to the polynomial 1+t
    x = FactoredRational.from_poly(ONE_P - T * T) \
        * FactoredRational.inv_one_minus({"t": 1})
    assert x == FactoredRational.from_poly(ONE_P + T)
    assert not x.den


def test_division_binomial():
    num = FactoredRational.from_poly(ONE_P - T * T)
    den = FactoredRational.from_poly(ONE_P - T)
    assert num / den == FactoredRational.from_poly(ONE_P + T)


def test_division_three_term_divisor():
    # (1-t^3)/(1+t+t^2) = 1-t
    num = FactoredRational.from_poly(ONE_P - T ** 3)
    den = FactoredRational.from_poly(ONE_P + T + T * T)
    assert rat_eq_exact(num / den, FactoredRational.from_poly(ONE_P - T))


def test_division_not_representable():
    with pytest.raises(NotRepresentableError):
        ONE / FactoredRational.from_poly(ONE_P + T)


def test_inv_one_minus_of_negative_monomial():
    # 1/(1+t) = (1-t)/(1-t^2)
    q = -RT
    x = rat_inv_one_minus(q)
    assert rat_eq_exact(x * FactoredRational.from_poly(ONE_P + T), ONE)
    x.validate()


def test_rat_inv_one_minus_general_value():
    # 1 - (2t - t^2) = (1-t)^2 stays inside the factored class
    q = FactoredRational.from_int(2) * RT - RT ** 2
    x = rat_inv_one_minus(q)
    assert x == FactoredRational.inv_one_minus({"t": 1}) ** 2
    # 1 - (t + L) is an irreducible trinomial: no factored inverse exists
    with pytest.raises(NotRepresentableError):
        rat_inv_one_minus(RT + RL)


def test_structural_vs_mathematical_equality():
    x = FactoredRational.from_poly(ONE_P + T + T * T) \
        * FactoredRational.inv_one_minus({"t": 3})
    y = FactoredRational.inv_one_minus({"t": 1})
    assert x != y           # different stored shapes
    assert rat_eq_exact(x, y)
    assert rat_eq_modp(x, y)


def test_rat_sum():
    # 1/(1-t) + 1/(1+t) = 2/(1-t^2)
    x = FactoredRational.inv_one_minus({"t": 1})
    y = rat_inv_one_minus(-RT)
    s = rat_sum([x, y])
    expect = FactoredRational.from_int(2) \
        * FactoredRational.inv_one_minus({"t": 2})
    assert s == expect
    assert rat_sum([]) == ZERO
    assert rat_sum([x, -x]) == ZERO


def test_field_ops_randomized():
    rng = random.Random(23)
    for _ in range(40):
        a = random_rational(rng)
        b = random_rational(rng)
        assert rat_eq_exact(a + b, b + a)
        assert rat_eq_exact(a * b, b * a)
        assert rat_eq_exact(a + b - b, a)
        assert rat_eq_exact((a + b) * a, a * a + b * a)
        (a * b).validate()
        (a + b).validate()


def test_pow_negative():
    x = FactoredRational.one_minus({"t": 1})
    assert rat_eq_exact(x ** -2 * x ** 2, ONE)
    assert (RT ** -3) == rmono(t=-3)


# ---- equality strategies ----

def test_rat_eq_modp_no_false_negatives():
    rng = random.Random(5)
    for _ in range(25):
        x = random_rational(rng)
        r = rmono(t=rng.randint(-2, 2), L=rng.randint(-2, 2))
        y = (x * r) / r
        assert rat_eq_modp(x, y, trials=8, seed=rng.randint(0, 10 ** 6))
        assert rat_eq_exact(x, y)


def test_rat_eq_modp_detects_difference():
    x = FactoredRational.inv_one_minus({"t": 1})
    assert not rat_eq_modp(x, x + ONE, trials=4, seed=0)
    assert not rat_eq_exact(x, x + ONE)


def test_rat_eq_modp_degenerate_prime():
    # with p=2 every candidate point makes 1-t vanish
    x = FactoredRational.inv_one_minus({"t": 1})
    with pytest.raises(DegeneratePointError):
        rat_eq_modp(x, x, trials=4, seed=0, prime=2)


def test_eval_modp_matches_exact_arithmetic():
    p = DEFAULT_PRIME
    x = (RL - ONE) ** 2 * rmono(L=-2)
    want = (12345 - 1) ** 2 * pow(12345, -2, p) % p
    assert x.eval_modp({"L": 12345}, p) == want
    y = FactoredRational.inv_one_minus({"t": 1})
    assert y.eval_modp({"t": 7}, p) == pow(1 - 7, -1, p)


# ---- substitution ----

def test_substitute_monomial_images():
    x = FactoredRational.one_minus({"t": 2, "L": -1})
    got = substitute(x, {"t": mono(L=1)})
    assert got == FactoredRational.one_minus({"L": 1})
    # negated image through the signed-monomial path
    got = substitute(FactoredRational.inv_one_minus({"t": 1}),
                     {"t": (-1, mono(t=1))})
    assert rat_eq_exact(got, rat_inv_one_minus(-RT))


def test_substitute_homomorphism_randomized():
    rng = random.Random(17)
    sigma = {"t": mono(L=2), "L": mono(t=-1, L=1)}
    for _ in range(25):
        a = random_rational(rng)
        b = random_rational(rng)
        try:
            sa, sb = substitute(a, sigma), substitute(b, sigma)
        except ZeroDivisionError:
            continue  # a denominator collapsed at this image
        assert rat_eq_exact(substitute(a * b, sigma), sa * sb)
        assert rat_eq_exact(substitute(a + b, sigma), sa + sb)


def test_substitute_general_images():
    x = RT * RT + ONE
    got = substitute(x, {"t": RL + ONE})
    assert rat_eq_exact(got, (RL + ONE) ** 2 + ONE)


def test_substitute_errors():
    with pytest.raises(ZeroSubstitutionError):
        substitute(RT, {"t": ZERO})
    with pytest.raises(ZeroDivisionError):
        substitute(FactoredRational.inv_one_minus({"t": 1}),
                   {"t": UNIT_MONOMIAL})


def test_substitute_unit_image_in_numerator_only():
    x = FactoredRational.one_minus({"t": 1})
    assert substitute(x, {"t": UNIT_MONOMIAL}) == ZERO


# ---- differentiation ----

def test_derivative_simple_pole():
    # d/dt 1/(1-t) = 1/(1-t)^2
    x = FactoredRational.inv_one_minus({"t": 1})
    assert rat_eq_exact(derivative(x, "t"), x * x)


def test_derivative_polynomial():
    x = RT ** 3 + RL
    assert rat_eq_exact(derivative(x, "t"), FactoredRational.from_int(3)
                        * RT ** 2)
    assert rat_eq_exact(derivative(x, "L"), ONE)
    assert derivative(ONE, "t") == ZERO


def test_derivative_product_rule_randomized():
    rng = random.Random(29)
    for _ in range(25):
        a = random_rational(rng)
        b = random_rational(rng)
        lhs = derivative(a * b, "t")
        rhs = derivative(a, "t") * b + a * derivative(b, "t")
        assert rat_eq_exact(lhs, rhs)


# ---- emit and parse ----

def test_emit_json_byte_exact():
    val = (RL - ONE) ** 2 * rmono(L=-2)
    assert emit(val) == G11_JSON


def test_emit_latex():
    val = (RL - ONE) ** 2 * rmono(L=-2)
    assert emit(val, "latex") == \
        r"(\mathbb{L}^{2}-2\mathbb{L}+1)\mathbb{L}^{-2}"
    lam = FactoredRational.from_poly(LaurentPoly.variable("lam2"))
    frac = (lam - ONE) * FactoredRational.inv_one_minus({"lam2": 1, "L": -2})
    # the body lam2*L^-2 flips (L precedes lam2), pulling out a minus sign
    assert emit(frac, "latex") == ("-\\frac{(\\lambda_{2}-1)\\mathbb{L}^{2}"
                                   "\\lambda_{2}^{-1}}"
                                   "{(1-\\mathbb{L}^{2}\\lambda_{2}^{-1})}")


def test_emit_json_term_order_is_descending():
    val = FactoredRational.from_poly(ONE_P + T + T * T)
    doc = json.loads(emit(val))
    exps = [term["exps"].get("t", 0) for term in doc["num"]]
    assert exps == [2, 1, 0]


def test_parse_round_trip():
    rng = random.Random(41)
    for _ in range(30):
        x = random_rational(rng)
        assert parse(emit(x)) == x
    assert parse(emit(ZERO)) == ZERO


def test_parse_rejects_malformed():
    with pytest.raises(ParseError):
        parse("not json")
    with pytest.raises(ParseError):
        parse('{"unit":{"sign":1,"exps":{}},"num":[]}')  # missing den
    with pytest.raises(ParseError):
        parse('{"unit":{"sign":2,"exps":{}},"num":[{"c":1,"exps":{}}],'
              '"den":[]}')
    with pytest.raises(ParseError):
        # unknown variable name
        parse('{"unit":{"sign":1,"exps":{"q":1}},"num":[{"c":1,"exps":{}}],'
              '"den":[]}')


def test_parse_normalizes_unreduced_input():
    # structural input is validated strictly, but the value itself is
    # renormalized, so a numerator with common content still round-trips
    got = parse('{"unit":{"sign":1,"exps":{}},"num":[{"c":1,"exps":{"t":2}},'
                '{"c":1,"exps":{"t":1}}],"den":[]}')
    assert got == FactoredRational.from_poly(T + T * T)
    assert got.unit == mono(t=1)


def test_parse_signed_monomial_grammar():
    assert parse_signed_monomial("L") == RL
    assert parse_signed_monomial("1") == ONE
    assert parse_signed_monomial("-A*tau^2") == \
        -rmono(A=1, tau=2)
    assert parse_signed_monomial("t^-3*L^2") == rmono(t=-3, L=2)
    for bad in ("", "2*L", "L+1", "L^", "q", "--L"):
        with pytest.raises(ParseError):
            parse_signed_monomial(bad)


def test_validate_catches_corruption():
    from arcmot.kernel import CanonFactor

    x = (RL - ONE) * FactoredRational.inv_one_minus({"t": 1})
    x.validate()
    with pytest.raises(AssertionError):
        # unextracted monomial content
        FactoredRational(1, UNIT_MONOMIAL, T + T * T, {}).validate()
    with pytest.raises(AssertionError):
        # negative leading coefficient
        FactoredRational(1, UNIT_MONOMIAL, -(ONE_P + T), {}).validate()
    with pytest.raises(AssertionError):
        # denominator factor divides the numerator
        FactoredRational(1, UNIT_MONOMIAL, ONE_P - T,
                         {CanonFactor(mono(t=1)): 1}).validate()
