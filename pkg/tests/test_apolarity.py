"""Annihilator spaces, squarefree operator tests, and the rank oracle."""

from fractions import Fraction
from functools import reduce

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waringforms.apolarity import (annihilator_space, apolarity_check,
                                   apolarity_image, operator_discriminant,
                                   oracle_rank, oracle_report,
                                   squarefree_binary)
from waringforms.errors import ZeroFormError
from waringforms.forms import (BinaryForm, DiffOperator, apply_operator,
                               direction_factor, operator_product)
from waringforms.scalars import GaussianRational


def g(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def form(*monomials):
    return BinaryForm.from_monomial(len(monomials) - 1, list(monomials))


def xy_power(d):
    m = [0] * (d + 1)
    m[d - 1] = 1
    return form(*m)  # x * y^(d-1)


def test_annihilator_of_mixed_monomial_is_dx_squared():
    for d in range(3, 7):
        ann = annihilator_space(xy_power(d), 2)
        assert ann.dimension == 1
        b = ann.basis[0].coeffs
        # span{dx^2}: only the j=0 coefficient may be nonzero
        assert bool(b[0]) and not any(bool(v) for v in b[1:])


def test_annihilator_dimensions_golden():
    f = form(3, -3, 9, -1)
    assert annihilator_space(f, 1).dimension == 0
    ann = annihilator_space(f, 2)
    assert ann.dimension == 1
    b = ann.basis[0].coeffs
    # proportional to dy^2 - dx^2: middle coefficient zero, ends opposite
    assert not bool(b[1]) and b[0] == -b[2]


def test_annihilator_validation():
    with pytest.raises(ZeroFormError):
        annihilator_space(BinaryForm([g(0), g(0)]), 1)
    with pytest.raises(ValueError):
        annihilator_space(form(1, 0, 1), 3)


scalars = st.builds(GaussianRational,
                    st.fractions(min_value=-6, max_value=6, max_denominator=4))
exact_forms = st.integers(min_value=2, max_value=6).flatmap(
    lambda d: st.lists(scalars, min_size=d + 1, max_size=d + 1)
).map(BinaryForm).filter(lambda f: not f.is_zero)


@settings(max_examples=40)
@given(exact_forms, st.integers(1, 6))
def test_annihilator_elements_annihilate(f, e):
    if e > f.degree:
        return
    ann = annihilator_space(f, e)
    d = f.degree
    # kernel dimension staircase lower bound
    assert ann.dimension >= max(0, (e + 1) - (d - e + 1))
    for op in ann.basis:
        assert apply_operator(op, f).is_zero


def test_squarefree_binary_goldens():
    dy2_minus_dx2 = DiffOperator((g(-1), g(0), g(1)))
    assert squarefree_binary(dy2_minus_dx2)
    dx2 = DiffOperator((g(1), g(0), g(0)))
    assert not squarefree_binary(dx2)  # double root at infinity
    dxdy = DiffOperator((g(0), g(1), g(0)))
    assert squarefree_binary(dxdy)
    dy3 = DiffOperator((g(0), g(0), g(0), g(1)))
    assert not squarefree_binary(dy3)  # triple root at zero


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                min_size=1, max_size=4))
def test_discriminant_vanishes_iff_repeated_direction(pairs):
    pairs = [(p, q) for p, q in pairs if p or q]
    if not pairs:
        return
    factors = [direction_factor(g(p), g(q)) for p, q in pairs]
    op = reduce(operator_product, factors)
    projective = set()
    for p, q in pairs:
        if p == 0:
            projective.add("inf")
        else:
            projective.add(str(Fraction(q, p)))
    repeated = len(projective) < len(pairs)
    if len(pairs) == 1:
        assert squarefree_binary(op)
    else:
        assert squarefree_binary(op) == (not repeated)
        assert bool(operator_discriminant(op)) == (not repeated)


def test_oracle_goldens():
    assert oracle_rank(form(3, -3, 9, -1)) == 2
    assert oracle_rank(form(1, 3, 3, 1)) == 1  # (x+y)^3
    assert oracle_rank(form(1, 0, 2, 0, 1)) == 3  # (x^2+y^2)^2
    for d in (2, 3, 5):
        assert oracle_rank(xy_power(d)) == d
    report = oracle_report(form(3, -3, 9, -1))
    assert report.certified and report.failure_bound == 0.0
    assert apply_operator(report.witness, form(3, -3, 9, -1)).is_zero


def test_oracle_float_backend():
    report = oracle_report(form(3, -3, 9, -1).to_float())
    assert report.rank == 2
    assert not report.certified


def test_oracle_seed_determinism():
    a = oracle_report(xy_power(5), seed=7)
    b = oracle_report(xy_power(5), seed=7)
    assert a.witness.coeffs == b.witness.coeffs


def test_apolarity_check_goldens():
    f = form(3, -3, 9, -1)
    assert apolarity_check(f, [g(1), g(-1)])
    assert not apolarity_check(form(1, 3, 3, 1), [g(2)])
    cusp = form(8, 12, 6, 0)
    assert apolarity_check(cusp, [g(Fraction(1, 2))], include_y_term=True)
    assert not apolarity_check(cusp, [g(Fraction(-1, 2))],
                               include_y_term=True)


def test_apolarity_image_rules():
    f = form(1, 0, 0, 0)
    # order d+1 annihilates trivially
    assert apolarity_image(f, [g(0), g(1), g(2)], include_y_term=True) is None
    with pytest.raises(ValueError):
        apolarity_image(f, [g(1), g(1)])
    with pytest.raises(ValueError):
        apolarity_image(f, [g(1), g(2), g(3), g(4), g(5)])


def test_apolarity_check_float():
    f = form(3, -3, 9, -1).to_float()
    assert apolarity_check(f, [1 + 0j, -1 + 0j])
    assert not apolarity_check(f, [2 + 0j, -1 + 0j])
