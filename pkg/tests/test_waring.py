"""Rank driver: F-rank, branch rule, decompositions, enumeration,
verification, roots-of-unity construction."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waringforms.errors import NumericError, ZeroFormError
from waringforms.forms import BinaryForm, Decomposition, LinearFormPower
from waringforms.linalg import MonicPoly, build_hankel, is_squarefree_poly
from waringforms.scalars import GaussianRational, to_complex
from waringforms.waring import (AboveD, FRankCertificate, decompose,
                                enumerate_decompositions, f_rank,
                                roots_of_unity_decomposition, verify,
                                waring_rank)


def g(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def form(*monomials):
    return BinaryForm.from_monomial(len(monomials) - 1, list(monomials))


def term_multiset(dec):
    return sorted((str(t.weight), str(t.x_coef), str(t.y_coef))
                  for t in dec.terms)


def test_f_rank_certificate_invariants():
    f = form(3, -3, 9, -1)
    cert = f_rank(f)
    assert isinstance(cert, FRankCertificate)
    assert cert.rank == 2 and cert.certified
    # the vector must actually solve the Hankel system
    system = build_hankel(f, cert.rank)
    for row, rhs in zip(system.matrix, system.rhs):
        acc = g(0)
        for entry, c in zip(row, cert.c_vector):
            acc = acc + entry * c
        assert acc == rhs
    assert is_squarefree_poly(cert.t_poly)


def test_f_rank_sentinel_for_pure_y_power():
    result = f_rank(form(0, 0, 0, 5))
    assert isinstance(result, AboveD)
    assert result.degree == 3 and result.value == 4


def test_f_rank_validation():
    with pytest.raises(ZeroFormError):
        f_rank(BinaryForm([g(0), g(0)]))
    with pytest.raises(ValueError):
        f_rank(form(4))


def test_branch_rule_equal_ranks():
    report = waring_rank(form(3, -3, 9, -1))
    assert (report.f_rank, report.fx_rank) == (2, 2)
    assert report.waring_rank == 2
    assert report.branch == "FiniteBranch"
    assert report.unique_minimal


def test_branch_rule_y_term():
    report = waring_rank(form(8, 12, 6, 0))
    assert (report.f_rank, report.fx_rank) == (3, 1)
    assert report.waring_rank == 2
    assert report.branch == "YTermBranch"
    assert report.unique_minimal


def test_degenerate_monomials():
    report = waring_rank(form(0, 0, 0, 0, 7))
    assert isinstance(report.f_rank, AboveD)
    assert (report.fx_rank, report.waring_rank) == (0, 1)
    assert report.branch == "DegenerateMonomial"
    assert term_multiset(decompose(form(0, 0, 0, 0, 7))) == [("7", "0", "1")]

    const = waring_rank(form(5))
    assert (const.f_rank, const.waring_rank) == (1, 1)
    assert term_multiset(decompose(form(5))) == [("5", "1", "0")]


def test_rank_one_fast_path():
    report = waring_rank(form(1, 3, 3, 1))  # (x+y)^3
    assert (report.f_rank, report.waring_rank) == (1, 1)
    assert term_multiset(decompose(form(1, 3, 3, 1))) == [("1", "1", "1")]
    # scaled direction stays monic with the weight absorbing the scale
    report = waring_rank(form(24, 24, 6))  # 6(2x+y)^2
    assert report.waring_rank == 1
    assert term_multiset(decompose(form(24, 24, 6))) == [("24", "1", "1/2")]


def test_rank_one_float_via_hankel():
    report = waring_rank(form(24, 24, 6).to_float())
    assert report.waring_rank == 1
    assert report.branch == "FiniteBranch"
    assert not report.certificate.certified


def test_degree_one():
    report = waring_rank(form(2, 3))
    assert report.waring_rank == 1
    assert term_multiset(decompose(form(2, 3))) == [("2", "1", "3/2")]


def test_decompose_goldens():
    assert term_multiset(decompose(form(3, -3, 9, -1))) == [
        ("1", "1", "1"), ("2", "1", "-1")]
    assert term_multiset(decompose(form(8, 12, 6, 0))) == [
        ("-1", "0", "1"), ("8", "1", "1/2")]
    assert term_multiset(decompose(form(0, 3, 0, 0))) == [
        ("-1", "0", "1"), ("-1/2", "1", "-1"), ("1/2", "1", "1")]
    assert term_multiset(decompose(form(1, 0, 0, 0, 0, 1))) == [
        ("1", "0", "1"), ("1", "1", "0")]


def test_decompose_expands_back():
    for f in (form(3, -3, 9, -1), form(8, 12, 6, 0), form(0, 3, 0, 0),
              form(2, -7, 4, 9, -1, 3)):
        dec = decompose(f)
        if dec.exact:
            assert dec.expand() == f
        else:
            assert (dec.expand() - f.to_float()).max_abs() <= 1e-9


def test_mixed_monomial_rank_is_degree():
    for d in range(2, 7):
        m = [0] * (d + 1)
        m[d - 1] = 1
        report = waring_rank(form(*m))
        assert report.waring_rank == d
        assert report.fx_rank == d  # sentinel value of the derivative
        assert report.branch == "FiniteBranch"


def test_enumerate_unique_regime_returns_one():
    decs = enumerate_decompositions(form(3, -3, 9, -1), 5)
    assert len(decs) == 1
    assert enumerate_decompositions(form(3, -3, 9, -1), 0) == []


def test_enumerate_distinct_members():
    f = form(0, 3, 0, 0)
    decs = enumerate_decompositions(f, 4)
    assert len(decs) == 4
    seen = {tuple(term_multiset(d.to_float())) for d in decs}
    assert len(seen) == 4
    for dec in decs:
        assert len(dec.terms) == 3
        assert (dec.expand().to_float() - f.to_float()).max_abs() <= 1e-9


def test_verify_pass_and_fail():
    f = form(3, -3, 9, -1)
    good = decompose(f)
    report = verify(f, good)
    assert report.passed and report.length_ok
    assert report.max_residual == 0.0
    assert report.apolarity_residual == 0.0

    wrong = Decomposition(
        3, (LinearFormPower(g(1), g(1), g(1)),), canonical=True)
    report = verify(f, wrong)
    assert not report.passed and not report.length_ok
    assert report.max_residual > 1.0

    with pytest.raises(ValueError):
        verify(form(1, 0, 1), wrong)


def test_verify_cross_backend():
    f = form(8, 12, 6, 0)
    dec = decompose(f).to_float()
    report = verify(f, dec)
    assert report.passed
    assert report.max_residual <= 1e-12


def test_roots_of_unity_cases():
    cases = {
        "ends nonzero": form(3, -3, 9, -1),
        "top zero": form(8, 12, 6, 0),
        "bottom zero": form(0, 3, 0, 5),
        "both zero": form(0, 3, 0, 0),
        "pure power": form(1, 3, 3, 1),
    }
    for name, f in cases.items():
        dec = roots_of_unity_decomposition(f)
        assert not dec.exact and not dec.canonical, name
        assert dec.length <= f.degree, name
        resid = (dec.expand() - f.to_float()).max_abs()
        assert resid <= 1e-9, (name, resid)
    assert roots_of_unity_decomposition(form(1, 3, 3, 1)).length == 1
    # pure y^d goes through the mirrored shear
    dec = roots_of_unity_decomposition(form(0, 0, 0, 2))
    assert (dec.expand() - form(0, 0, 0, 2).to_float()).max_abs() <= 1e-9


def test_roots_of_unity_weights_golden():
    # 3x^2y: weights are the cube roots of unity over 3
    dec = roots_of_unity_decomposition(form(0, 3, 0, 0))
    weights = sorted(round(abs(to_complex(t.weight)), 9) for t in dec.terms)
    assert weights == [round(1 / 3, 9)] * 3


def test_zero_and_degenerate_inputs():
    with pytest.raises(ZeroFormError):
        waring_rank(BinaryForm([g(0), g(0), g(0)]))
    with pytest.raises(ZeroFormError):
        roots_of_unity_decomposition(BinaryForm([g(0), g(0)]))
    with pytest.raises(ValueError):
        roots_of_unity_decomposition(form(3))


def test_seed_stability_in_unique_regime():
    f = form(2, -7, 4, 9, -1, 3)
    report = waring_rank(f)
    if report.unique_minimal:
        a = decompose(f, seed=0)
        b = decompose(f, seed=123456)
        assert term_multiset(a.to_float()) == term_multiset(b.to_float())


scalars = st.integers(min_value=-9, max_value=9)
random_forms = st.integers(min_value=2, max_value=5).flatmap(
    lambda d: st.lists(scalars, min_size=d + 1, max_size=d + 1)
).map(lambda m: form(*m)).filter(lambda f: not f.is_zero)


@settings(max_examples=30, deadline=None)
@given(random_forms)
def test_rank_chain_and_verified_decomposition(f):
    report = waring_rank(f)
    d = f.degree
    fr = report.f_rank.value if isinstance(report.f_rank, AboveD) \
        else report.f_rank
    wr = report.waring_rank
    assert 1 <= wr <= d
    assert fr >= wr >= report.fx_rank >= wr - 1
    dec = decompose(f)
    assert len(dec.terms) == wr
    assert verify(f, dec).passed
