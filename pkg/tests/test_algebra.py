import random
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from pivcheck.algebra import (PoleError, Poly, RatFn, bareiss_det, eval_at,
                              format_rational, poly_arith, poly_derivative,
                              poly_gcd, ratfn_arith, ratfn_derivative,
                              to_rational)

from conftest import T, cofactor_det, rand_poly

ONE = Poly([1])

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12).map(
    lambda f: mpq(f.numerator, f.denominator))
polys = st.lists(rationals, max_size=6).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


# -- scalars ---------------------------------------------------------------

def test_decimal_strings_are_exact():
    assert to_rational("0.7") == mpq(7, 10)
    assert to_rational("7/10") == mpq(7, 10)
    assert to_rational("-2") == -2
    assert to_rational(Fraction(3, 9)) == mpq(1, 3)


def test_bool_rejected_float_exact():
    with pytest.raises(TypeError):
        to_rational(True)
    # a float converts to its exact binary value, not to 1/10
    assert to_rational(0.1) != mpq(1, 10)
    assert to_rational(0.5) == mpq(1, 2)


def test_format_rational():
    assert format_rational(mpq(-3, 4)) == "-3/4"
    assert format_rational(mpq(6, 3)) == "2"


# -- polynomials -------------------------------------------------------------

def test_poly_examples():
    assert (1 + T) * (1 - T) == Poly([1, 0, -1])
    p = Poly([3, 0, 2])
    assert p + Poly() == p
    assert Poly([1, 2]).scale(mpq(1, 2)) == Poly([mpq(1, 2), 1])
    assert poly_arith(Poly([1, 1]), Poly([1, -1]), "mul") == Poly([1, 0, -1])


def test_zero_polynomial_conventions():
    z = Poly([0, 0, 0])
    assert z.is_zero() and z.degree is None
    assert Poly([5]).degree == 0
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)


def test_gcd_examples():
    assert poly_gcd(T * T - 1, T - 1) == T - 1
    p = Poly([2, 4])
    assert poly_gcd(p, Poly()) == p.monic()
    assert poly_gcd(T * T + 1, T + 2) == ONE


def test_gcd_both_zero_raises():
    with pytest.raises(ValueError):
        poly_gcd(Poly(), Poly())


def test_derivative_examples():
    assert poly_derivative(T ** 3) == Poly([0, 0, 3])
    assert Poly([7]).derivative().is_zero()
    assert Poly([mpq(1, 4), 0, mpq(1, 2)]).derivative() == T


def test_divmod_and_exact_div():
    q, r = divmod(T ** 3 + 1, T + 1)
    assert q == Poly([1, -1, 1]) and r.is_zero()
    with pytest.raises(ArithmeticError):
        (T ** 2 + 1).exact_div(T + 1)
    with pytest.raises(ZeroDivisionError):
        divmod(T, Poly())


def test_parity_and_reflect():
    assert Poly([1, 0, 3]).parity() == 1
    assert Poly([0, 2, 0, 1]).parity() == -1
    assert Poly([1, 1]).parity() is None
    assert Poly().parity() == 0
    assert Poly([1, 2, 3]).reflect() == Poly([1, -2, 3])


def test_poly_json_roundtrip():
    p = Poly([mpq(-1, 3), 0, 2])
    assert p.to_json() == ["-1/3", "0", "2"]
    assert Poly.from_json(p.to_json()) == p


def test_poly_is_immutable():
    with pytest.raises(AttributeError):
        T.coeffs = ()


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly()


@given(polys, nonzero_polys)
def test_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(polys, polys)
def test_gcd_divides_and_is_monic(a, b):
    if a.is_zero() and b.is_zero():
        return
    g = poly_gcd(a, b)
    assert g.lead == 1
    assert (a % g).is_zero() and (b % g).is_zero()


@given(nonzero_polys, nonzero_polys, nonzero_polys)
@settings(max_examples=50)
def test_gcd_recovers_common_factor(a, b, c):
    g = poly_gcd(a * c, b * c)
    assert (g % c.monic()).is_zero()


@given(polys, polys)
def test_product_rule(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(polys, rationals)
def test_horner_matches_power_sum(p, x):
    assert p(x) == sum((c * x ** k for k, c in enumerate(p.coeffs)), mpq(0))


# -- rational functions --------------------------------------------------------

def test_ratfn_examples():
    inv_t = RatFn(1, T)
    assert inv_t + inv_t == RatFn(2, T)
    a = RatFn(T + 3, T * T - 2)
    assert a / a == RatFn(1)
    assert RatFn(T, 1 + T) * RatFn(1 + T, T) == RatFn(1)
    assert ratfn_arith(inv_t, inv_t, "add") == RatFn(2, T)


def test_ratfn_normal_form_is_structural():
    f = RatFn(Poly([0, -4]), Poly([2, 0, 4]))
    assert f.den.lead == 1
    assert f == RatFn(Poly([0, -2]), Poly([1, 0, 2]))
    assert hash(f) == hash(RatFn(Poly([0, -2]), Poly([1, 0, 2])))


def test_ratfn_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        RatFn(T) / RatFn(0)
    with pytest.raises(ZeroDivisionError):
        RatFn(1, Poly())


def test_ratfn_derivative_examples():
    assert ratfn_derivative(RatFn(1, T)) == RatFn(-1, T * T)
    alpha0 = RatFn(Poly([0, -2]), Poly([1, 0, 2]))
    assert alpha0.derivative() == RatFn(Poly([-2, 0, 4]), Poly([1, 0, 2]) ** 2)
    assert RatFn(5).derivative().is_zero()


def test_eval_examples():
    assert eval_at(T * T + 1, 2) == 5
    with pytest.raises(PoleError, match="t = 0"):
        eval_at(RatFn(1, T), 0)
    assert eval_at(RatFn(Poly([0, -2]), Poly([1, 0, 2])), 1) == mpq(-2, 3)


def test_ratfn_json_matches_integer_encoding():
    alpha0 = RatFn(Poly([0, -2]), Poly([1, 0, 2]))
    assert alpha0.to_json() == {"num": ["0", "-2"], "den": ["1", "0", "2"]}
    assert RatFn.from_json(alpha0.to_json()) == alpha0
    half = RatFn(Poly([mpq(1, 2)]), T)
    assert half.to_json() == {"num": ["1"], "den": ["0", "2"]}


@given(polys, nonzero_polys, polys, nonzero_polys)
@settings(max_examples=60)
def test_ratfn_field_laws(a, b, c, d):
    f, g = RatFn(a, b), RatFn(c, d)
    assert f + g == g + f
    assert (f + g) - g == f
    if not g.is_zero():
        assert (f * g) / g == f
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


# -- determinants ----------------------------------------------------------------

def test_bareiss_examples():
    p = Poly([1, 2, 3])
    assert bareiss_det([[p]]) == p
    assert bareiss_det([[ONE, Poly()], [Poly(), T]]) == T
    P0, P1, P2 = ONE, T, Poly([mpq(1, 6), 0, mpq(1, 2)])
    assert bareiss_det([[P1, P2], [P0, P1]]) == Poly([mpq(-1, 6), 0, mpq(1, 2)])
    assert bareiss_det([]) == ONE


def test_bareiss_needs_pivoting():
    m = [[Poly(), ONE, T], [ONE, Poly(), Poly()], [T, T, ONE]]
    assert bareiss_det(m) == cofactor_det(m)


def test_bareiss_singular():
    m = [[T, T * T], [ONE, T]]
    assert bareiss_det(m).is_zero()


@pytest.mark.parametrize("size", [2, 3, 4])
def test_bareiss_matches_cofactor(size):
    rng = random.Random(size)
    for _ in range(40):
        m = [[rand_poly(rng, 2) for _ in range(size)] for _ in range(size)]
        assert bareiss_det(m) == cofactor_det(m)
