"""Linear algebra layer: affine solvers, resultants, roots, searches."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from math import comb

from waringforms.errors import NumericError
from waringforms.forms import BinaryForm
from waringforms.linalg import (AffineSolutionSet, MonicPoly, SearchFailure,
                                build_hankel, exact_poly_gcd,
                                find_squarefree_member, is_squarefree_poly,
                                poly_roots, principal_lattice,
                                resultant_with_derivative, search_family,
                                solve_affine, solve_hankel,
                                sylvester_resultant, vandermonde_solve)
from waringforms.scalars import GaussianRational


def g(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def form(*monomials):
    return BinaryForm.from_monomial(len(monomials) - 1, list(monomials))


def test_build_hankel_golden():
    # 8x^3+12x^2y+6xy^2: a = (8, 4, 2, 0)
    system = build_hankel(form(8, 12, 6, 0), 2)
    assert system.matrix == ((g(8), g(4)), (g(4), g(2)))
    assert system.rhs == (g(-2), g(0))
    with pytest.raises(ValueError):
        build_hankel(form(8, 12, 6, 0), 4)


def test_solve_affine_exact_branches():
    # unique
    sol = solve_affine([[g(2), g(0)], [g(0), g(3)]], [g(4), g(9)])
    assert sol.parameters == 0 and sol.particular == (g(2), g(3))
    # inconsistent
    assert solve_affine([[g(1), g(1)], [g(2), g(2)]], [g(1), g(3)]) is None
    # underdetermined: x + y = 1
    sol = solve_affine([[g(1), g(1)]], [g(1)])
    assert sol.parameters == 1
    member = sol.member((g(7),))
    assert member[0] + member[1] == g(1)


def test_solve_affine_float_matches_exact():
    rows = [[g(1), g(2)], [g(3), g(4)]]
    rhs = [g(5), g(6)]
    exact = solve_affine(rows, rhs)
    approx = solve_affine([[complex(1), complex(2)], [complex(3), complex(4)]],
                          [complex(5), complex(6)])
    for a, b in zip(exact.particular, approx.particular):
        assert abs(complex(a.re, a.im) - b) < 1e-12
    # float inconsistency detected by rank comparison
    assert solve_affine([[1 + 0j, 1 + 0j], [2 + 0j, 2 + 0j]],
                        [1 + 0j, 3 + 0j]) is None


def test_hankel_solution_feeds_recurrence():
    f = form(3, -3, 9, -1)
    sol = solve_hankel(build_hankel(f, 2))
    assert sol is not None and sol.parameters == 0
    c = sol.particular
    a = f.coeffs
    for j in range(2):
        assert a[j + 2] == -(c[0] * a[j] + c[1] * a[j + 1])


def test_resultant_goldens():
    # frozen orientation: Res(T, T') = 27 for T = lambda^3 - 1
    assert resultant_with_derivative(MonicPoly((g(-1), g(0), g(0)))) == g(27)
    # repeated root kills it: (lambda - 1)^2 = lambda^2 - 2lambda + 1
    assert resultant_with_derivative(MonicPoly((g(1), g(-2)))) == g(0)
    # cross-check formal degrees on a non-monic pair
    assert sylvester_resultant([g(2)], [g(5)]) == g(1)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=4))
def test_squarefree_agrees_with_gcd(coeffs):
    poly = MonicPoly(tuple(g(c) for c in coeffs))
    by_resultant = is_squarefree_poly(poly)
    gcd = exact_poly_gcd(poly.descending(), poly.derivative_descending())
    assert by_resultant == (len(gcd) == 1)


def test_exact_poly_gcd_golden():
    # gcd(lambda^2 - 1, lambda - 1) = lambda - 1
    gcd = exact_poly_gcd([g(1), g(0), g(-1)], [g(1), g(-1)])
    assert gcd == [g(1), g(-1)]


def test_poly_roots_exact_and_float():
    # rational roots stay exact
    roots = poly_roots(MonicPoly((g(Fraction(-1, 2)), g(Fraction(1, 2)))))
    assert sorted(str(r) for r in roots) == ["-1", "1/2"]
    # irrational pair drops to float
    roots = poly_roots(MonicPoly((g(-2), g(0))))
    assert all(isinstance(r, complex) for r in roots)
    assert sorted(round(abs(r), 9) for r in roots) == [
        round(2 ** 0.5, 9)] * 2
    with pytest.raises(NumericError):
        poly_roots(MonicPoly((g(1), g(-2))))  # (lambda - 1)^2


def test_vandermonde_interpolation():
    betas = [g(0), g(1), g(-2), g(Fraction(1, 3))]
    weights = [g(3), g(-1), g(5), g(2)]
    values = [sum((w * b ** i for w, b in zip(weights, betas)), g(0))
              for i in range(4)]
    assert vandermonde_solve(betas, values) == weights
    with pytest.raises(ValueError):
        vandermonde_solve([g(1), g(1)], [g(0), g(0)])


@given(st.integers(1, 3), st.integers(1, 5))
def test_principal_lattice_size(p, D):
    points = list(principal_lattice(p, D))
    assert len(points) == comb(p + D, D)
    assert len(set(points)) == len(points)


def test_search_family_certifies_empty_families():
    # family c0 = t, c1 = 0 with attempt requiring a squarefree quadratic
    # that never exists: T = (lambda - t)^2 family has none
    def attempt(t):
        poly = MonicPoly((g(t[0]) * g(t[0]), g(-2) * g(t[0])))
        return poly if is_squarefree_poly(poly) else None

    result = search_family(1, 2, attempt, exact=True)
    assert isinstance(result, SearchFailure)
    assert result.certified and result.failure_bound == 0.0


def test_find_squarefree_member_uses_free_parameters():
    # T = lambda^2 + c1*lambda + c0 with c1 forced to 0, c0 free;
    # particular point c0 = 0 is a double root, so the search must move
    sols = AffineSolutionSet((g(0), g(0)), ((g(1), g(0)),))
    member = find_squarefree_member(sols)
    assert isinstance(member, MonicPoly)
    assert is_squarefree_poly(member)
