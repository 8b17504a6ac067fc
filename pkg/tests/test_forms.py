"""Scalar backends, forms, operators, and decomposition containers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waringforms.forms import (BinaryForm, Decomposition, DiffOperator,
                               LinearFormPower, apply_operator,
                               direction_factor, operator_product)
from waringforms.scalars import GaussianRational, to_complex

rationals = st.fractions(min_value=-9, max_value=9,
                         max_denominator=6)


def gaussian(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


scalars = st.builds(GaussianRational,
                    rationals,
                    st.one_of(st.just(Fraction(0)), rationals))


@given(scalars, scalars, scalars)
def test_gaussian_rational_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@given(scalars)
def test_gaussian_rational_division(a):
    if bool(a):
        assert (a / a) == gaussian(1)
        assert a * (gaussian(1) / a) == gaussian(1)
    with pytest.raises(ZeroDivisionError):
        a / gaussian(0)


@given(scalars, scalars)
def test_gaussian_rational_hash_eq(a, b):
    if a == b:
        assert hash(a) == hash(b)
    z = to_complex(a)
    w = to_complex(b)
    assert isinstance(z, complex)
    if a == b:
        assert z == w


def test_from_monomial_binomial_normalization():
    # x^3: monomials (1,0,0,0) -> a = (1,0,0,0); 3x^2y -> a_1 = 3/C(3,1) = 1
    f = BinaryForm.from_monomial(3, [0, 3, 0, 0])
    assert [str(a) for a in f.coeffs] == ["0", "1", "0", "0"]
    assert f.monomial_coeffs() == (gaussian(0), gaussian(3), gaussian(0),
                                   gaussian(0))


def test_from_monomial_length_check():
    with pytest.raises(ValueError):
        BinaryForm.from_monomial(3, [1, 2])


exact_forms = st.integers(min_value=1, max_value=6).flatmap(
    lambda d: st.lists(scalars, min_size=d + 1, max_size=d + 1)
).map(BinaryForm)


@given(exact_forms, scalars)
def test_derivative_inverts_integration(f, c):
    assert f.integrate_x(c).derivative_x() == f


@given(exact_forms)
def test_derivative_degree_and_zero(f):
    if f.degree >= 1:
        assert f.derivative_x().degree == f.degree - 1


def test_derivative_of_constant_raises():
    with pytest.raises(ValueError):
        BinaryForm([gaussian(5)]).derivative_x()


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 5))
def test_direction_factor_kills_its_power(p, q, d):
    if p == 0 and q == 0:
        return
    power = Decomposition(
        d, (LinearFormPower(gaussian(1), gaussian(p), gaussian(q)),)).expand()
    image = apply_operator(direction_factor(gaussian(p), gaussian(q)), power)
    assert image.is_zero


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
       st.integers(-3, 3), st.integers(1, 4))
def test_operator_product_composes(a0, a1, b0, b1, d):
    g = DiffOperator((gaussian(a0), gaussian(a1)))
    h = DiffOperator((gaussian(b0), gaussian(b1)))
    if g.is_zero or h.is_zero:
        return
    f = BinaryForm([gaussian(k * k - 2 * k + 1, k) for k in range(d + 3)])
    combined = apply_operator(operator_product(g, h), f)
    nested = apply_operator(g, apply_operator(h, f))
    assert combined == nested


def test_apply_operator_order_exceeds_degree():
    f = BinaryForm([gaussian(1), gaussian(0)])
    g = DiffOperator((gaussian(1), gaussian(0), gaussian(0)))
    with pytest.raises(ValueError):
        apply_operator(g, f)


def test_apply_operator_backend_mismatch():
    f = BinaryForm([gaussian(1), gaussian(0)]).to_float()
    g = DiffOperator((gaussian(1), gaussian(0)))
    with pytest.raises(TypeError):
        apply_operator(g, f)


def test_evaluate_matches_expansion():
    # f = (x + 2y)^3 evaluated at a few points
    dec = Decomposition(
        3, (LinearFormPower(gaussian(1), gaussian(1), gaussian(2)),))
    f = dec.expand()
    for x0, y0 in [(1, 0), (0, 1), (2, -1), (3, 5)]:
        expected = gaussian((x0 + 2 * y0) ** 3)
        assert f.evaluate(gaussian(x0), gaussian(y0)) == expected


def test_decomposition_container_rules():
    one, zero, two = gaussian(1), gaussian(0), gaussian(2)
    with pytest.raises(ValueError):
        LinearFormPower(zero, one, one)
    with pytest.raises(ValueError):
        LinearFormPower(one, zero, zero)
    y_term = LinearFormPower(one, zero, one)
    with pytest.raises(ValueError):
        Decomposition(2, (y_term, y_term), canonical=True)
    with pytest.raises(ValueError):  # repeated slopes
        Decomposition(2, (LinearFormPower(one, one, two),
                          LinearFormPower(two, one, two)), canonical=True)
    with pytest.raises(ValueError):  # not monic
        Decomposition(2, (LinearFormPower(one, two, one),), canonical=True)
    with pytest.raises(TypeError):  # mixed backends
        Decomposition(2, (LinearFormPower(one, one, two),
                          LinearFormPower(1 + 0j, 1 + 0j, 0j)))
    with pytest.raises(ValueError):
        Decomposition(2, ())


def test_expand_golden():
    # (x + y)^2 + (x - y)^2 = 2x^2 + 2y^2
    dec = Decomposition(2, (LinearFormPower(gaussian(1), gaussian(1),
                                            gaussian(1)),
                            LinearFormPower(gaussian(1), gaussian(1),
                                            gaussian(-1))))
    f = dec.expand()
    assert f.monomial_coeffs() == (gaussian(2), gaussian(0), gaussian(2))
