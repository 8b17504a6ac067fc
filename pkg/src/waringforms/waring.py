"""Rank driver for complex binary forms.

The F-rank of a form is the smallest recurrence order r whose Hankel
system both solves and admits a coefficient vector with squarefree
characteristic polynomial; the Waring rank then follows from comparing
the F-ranks of the form and of its x-derivative.  This module computes
both ranks with certificates, builds minimal power-sum decompositions
for every branch, enumerates distinct minimal decompositions when the
minimal one is not unique, verifies candidate decompositions, and
constructs the generic length-d power sum supported on roots of unity.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from functools import reduce
from math import comb
from typing import Optional, Union

import numpy as np

from .errors import NumericError, ZeroFormError
from .forms import (BinaryForm, Decomposition, LinearFormPower,
                    apply_operator, direction_factor, operator_product)
from .linalg import (DEFAULT_TOL, SEARCH_BUDGET, AffineSolutionSet, MonicPoly,
                     SearchFailure, _deterministic_points, build_hankel,
                     find_squarefree_member, is_squarefree_poly, poly_roots,
                     solve_hankel, vandermonde_solve)
from .scalars import (abs_value, is_exact, one_like, to_complex, zero_like)

FINITE_BRANCH = "FiniteBranch"
Y_TERM_BRANCH = "YTermBranch"
DEGENERATE_MONOMIAL = "DegenerateMonomial"

# Trial cap multiplier for enumerate_decompositions.
ENUM_TRIAL_FACTOR = 16
ENUM_TRIAL_FLOOR = 48


@dataclass(frozen=True)
class AboveD:
    """F-rank sentinel: no recurrence of order <= degree works, so the
    F-rank exceeds the degree.  Compares as degree + 1."""

    degree: int
    certified: bool = True
    failure_bound: float = 0.0

    @property
    def value(self) -> int:
        return self.degree + 1


@dataclass(frozen=True)
class FRankCertificate:
    """Witness for F-rank == rank.

    c_vector solves the order-r Hankel system and t_poly (its monic
    characteristic polynomial) is squarefree; solutions is the full
    affine solution set the vector was drawn from.  certified means the
    rejections of every smaller order were exact proofs; otherwise
    failure_bound adds up the miss probabilities of the exhausted
    randomized searches below.
    """

    rank: int
    c_vector: tuple
    t_poly: MonicPoly
    solutions: AffineSolutionSet
    certified: bool
    failure_bound: float


@dataclass(frozen=True)
class RankReport:
    """Joint rank result for one form.

    f_rank is an int or AboveD; fx_rank is always numeric (the sentinel
    for the derivative collapses to its comparison value d).  branch
    names which construction produced waring_rank.  certificate /
    fx_certificate hold the F-rank witnesses when the respective rank is
    numeric, else None.  unique_minimal reflects the length threshold
    floor((d+1)/2) below which the minimal decomposition is unique.
    """

    f_rank: Union[int, AboveD]
    fx_rank: int
    waring_rank: int
    branch: str
    certificate: Optional[FRankCertificate]
    fx_certificate: Optional[FRankCertificate]
    unique_minimal: bool


@dataclass(frozen=True)
class VerificationReport:
    max_residual: float
    apolarity_residual: float
    length_ok: bool
    passed: bool


def f_rank(f: BinaryForm, seed=0, budget: int = SEARCH_BUDGET):
    """Smallest order r in 1..d whose Hankel system solves with some
    squarefree characteristic vector, as an FRankCertificate; AboveD(d)
    when no order works.

    Rejections at smaller orders are certified when the backend is exact
    and every squarefree search below either proved inconsistency or
    exhausted a full interpolation lattice; randomized rejections
    downgrade certainty and accumulate into failure_bound.
    """
    if f.is_zero:
        raise ZeroFormError("F-rank of the zero form is undefined")
    d = f.degree
    if d < 1:
        raise ValueError("F-rank needs degree >= 1")
    certified = f.exact
    miss = 0.0
    for r in range(1, d + 1):
        solutions = solve_hankel(build_hankel(f, r))
        if solutions is None:
            continue
        found = find_squarefree_member(solutions, seed=f"{seed}:order:{r}",
                                       budget=budget)
        if isinstance(found, SearchFailure):
            if not found.certified:
                certified = False
                miss = min(1.0, miss + found.failure_bound)
            continue
        return FRankCertificate(r, found.coeffs, found, solutions,
                                certified, miss)
    return AboveD(d, certified, miss)


def _pure_y_weight(f: BinaryForm):
    """The coefficient c when f == c * y^d literally, else None."""
    if any(bool(v) for v in f.coeffs[:-1]):
        return None
    return f.coeffs[-1]


def _rank_one_slope(f: BinaryForm):
    """The slope beta when f == a_0 (x + beta y)^d on the exact backend.

    Float forms return None here and reach the same conclusion through
    the order-1 Hankel solve.
    """
    if not f.exact or not bool(f.coeffs[0]):
        return None
    a = f.coeffs
    beta = a[1] / a[0]
    power = a[0]
    for i in range(1, len(a)):
        power = power * beta
        if a[i] != power:
            return None
    return beta


def _direct_rank_one(f: BinaryForm, beta) -> FRankCertificate:
    c0 = -beta
    poly = MonicPoly((c0,))
    solutions = AffineSolutionSet((c0,), ())
    return FRankCertificate(1, (c0,), poly, solutions, f.exact, 0.0)


def waring_rank(f: BinaryForm, seed=0) -> RankReport:
    """Rank report for f: both F-ranks, the Waring rank, and the branch.

    Branch rule: equal comparison values give waring_rank = F-rank(f)
    with a finite decomposition; F-rank(f) above F-rank(f_x) gives
    waring_rank = F-rank(f_x) + 1 with a pure y^d term.  AboveD
    sentinels compare as degree + 1.
    """
    if f.is_zero:
        raise ZeroFormError("rank of the zero form is undefined")
    d = f.degree
    if d == 0:
        return RankReport(1, 0, 1, DEGENERATE_MONOMIAL, None, None, True)
    if _pure_y_weight(f) is not None:
        # y^d itself: F-rank is above d, the derivative chain bottoms out
        # at rank 0, and the one-term decomposition is trivially minimal.
        return RankReport(AboveD(d), 0, 1, DEGENERATE_MONOMIAL, None, None,
                          True)
    if d == 1:
        cert = _direct_rank_one(f, f.coeffs[1] / f.coeffs[0])
        return RankReport(1, 1, 1, FINITE_BRANCH, cert, None, True)
    slope = _rank_one_slope(f)
    if slope is not None:
        cert = _direct_rank_one(f, slope)
        return RankReport(1, 1, 1, FINITE_BRANCH, cert, None, True)

    fr = f_rank(f, seed=f"{seed}:f")
    fxr = f_rank(f.derivative_x(), seed=f"{seed}:fx")
    f_cert = fr if isinstance(fr, FRankCertificate) else None
    fx_cert = fxr if isinstance(fxr, FRankCertificate) else None
    f_value = fr.rank if f_cert is not None else fr.value
    fx_value = fxr.rank if fx_cert is not None else fxr.value

    if f_value < fx_value:
        raise NumericError(
            f"rank chain violated: F-rank {f_value} below derivative "
            f"F-rank {fx_value}; a squarefree search must have missed")
    if f_value == fx_value:
        if f_cert is None:
            raise NumericError("equal F-ranks above both degrees cannot "
                               "happen for a nonzero form")
        rank, branch = f_value, FINITE_BRANCH
    else:
        if fx_cert is None:
            raise NumericError("derivative F-rank above its degree is only "
                               "possible for a pure power of y")
        rank, branch = fx_value + 1, Y_TERM_BRANCH
    report_fr = fr if isinstance(fr, AboveD) else fr.rank
    return RankReport(report_fr, fx_value, rank, branch, f_cert, fx_cert,
                      rank <= (d + 1) // 2)


def _term_sort_key(term: LinearFormPower):
    if term.is_y_term:
        return (1, 0.0, 0.0)
    q = to_complex(term.y_coef)
    return (0, q.real, q.imag)


def _gauss_newton_polish(g: BinaryForm, betas: list, weights: list,
                         steps: int = 4) -> tuple:
    """Sharpen a float power-sum fit against all of g's coefficients.

    Companion-matrix roots and triangular elimination each leave
    eps-level forward error that the degree-d expansion amplifies by
    |beta|^d, so a raw fit of a form with slopes outside the unit disk
    can miss by many digits.  A few minimum-norm Newton steps on the
    full system sum_k w_k beta_k^i = a_i (i = 0..d) pull the residual
    back to rounding level.  Returns refined (weights, betas)."""
    d = g.degree
    a = np.array([to_complex(v) for v in g.coeffs], dtype=complex)
    scale = max(1.0, float(np.max(np.abs(a))))
    w = np.array([to_complex(v) for v in weights], dtype=complex)
    b = np.array([to_complex(v) for v in betas], dtype=complex)
    r = len(w)
    orders = np.arange(1, d + 1, dtype=float)

    def eval_residual(wv, bv):
        V = np.vander(bv, d + 1, increasing=True).T
        return V @ wv - a, V

    err_vec, V = eval_residual(w, b)
    best = (w, b)
    best_err = float(np.max(np.abs(err_vec)))
    for _ in range(steps):
        if best_err <= 1e-15 * scale:
            break
        J = np.zeros((d + 1, 2 * r), dtype=complex)
        J[:, :r] = V
        for k in range(r):
            powers = np.vander(b[k:k + 1], d, increasing=True)[0]
            J[1:, r + k] = orders * w[k] * powers
        step, *_ = np.linalg.lstsq(J, -err_vec, rcond=None)
        w = w + step[:r]
        b = b + step[r:]
        err_vec, V = eval_residual(w, b)
        err = float(np.max(np.abs(err_vec)))
        if err >= best_err:
            break
        best, best_err = (w.copy(), b.copy()), err
    w, b = best
    return [complex(v) for v in w], [complex(v) for v in b]


def _float_weight_fit(g: BinaryForm, betas: list) -> list:
    """Least-squares weights over every normalized coefficient of g.

    Fitting only the first r coefficients is exact over the rationals,
    but in floats it is blind to a term whose slope is huge and whose
    weight is correspondingly tiny (the term only registers in the top
    coefficients).  The full-moment system sees every term; column
    equilibration keeps the huge-slope columns well-scaled."""
    d = g.degree
    a = np.array([to_complex(v) for v in g.coeffs], dtype=complex)
    nodes = np.array([to_complex(b) for b in betas], dtype=complex)
    V = np.vander(nodes, d + 1, increasing=True).T
    col = np.max(np.abs(V), axis=0)
    col[col == 0] = 1.0
    u, *_ = np.linalg.lstsq(V / col, a, rcond=None)
    return [complex(v) for v in u / col]


def _finite_from_poly(g: BinaryForm, poly: MonicPoly) -> Decomposition:
    """Length-r decomposition of g from a squarefree characteristic
    polynomial of an order-r recurrence that g satisfies."""
    r = poly.degree
    betas = poly_roots(poly)
    if is_exact(betas[0]):
        weights = vandermonde_solve(betas, list(g.coeffs[:r]))
        for w in weights:
            if not bool(w):
                # over the exact backend a vanishing weight proves the
                # recurrence order was not minimal for this form
                raise NumericError("zero weight in an exact power-sum fit")
    else:
        weights = _float_weight_fit(g, betas)
        weights, betas = _gauss_newton_polish(g, betas, weights)
        if any(not bool(w) for w in weights):
            raise NumericError("unrecoverably small weight in a float "
                               "power-sum fit")
    one = one_like(betas[0])
    terms = [LinearFormPower(w, one, b) for w, b in zip(weights, betas)]
    terms.sort(key=_term_sort_key)
    return Decomposition(g.degree, tuple(terms), canonical=True)


def _integrate_finite(f: BinaryForm, inner: Decomposition) -> Decomposition:
    """Lift a decomposition of f_x to one of f by dividing the weights by
    d and topping up with the y^d term that absorbs the constant of
    integration."""
    d = f.degree
    scale = one_like(inner.terms[0].weight) * d
    finite = [LinearFormPower(t.weight / scale, t.x_coef, t.y_coef)
              for t in inner.terms]
    a_d = f.coeffs[d]
    if not is_exact(finite[0].weight):
        a_d = to_complex(a_d)
    acc = zero_like(finite[0].weight)
    for t in finite:
        acc = acc + t.weight * t.y_coef ** d
    mu = a_d - acc
    drop = abs_value(mu) <= 1e-12 * max(1.0, f.max_abs()) if not is_exact(mu) \
        else not bool(mu)
    if drop:
        # a vanishing y-term would mean f itself had the shorter rank
        raise NumericError("y-term weight vanished while integrating; the "
                           "branch comparison was inconsistent")
    y_term = LinearFormPower(mu, zero_like(mu), one_like(mu))
    finite.sort(key=_term_sort_key)
    return Decomposition(d, tuple(finite + [y_term]), canonical=True)


def _degenerate_decomposition(f: BinaryForm) -> Decomposition:
    one = one_like(f.coeffs[0])
    zero = zero_like(f.coeffs[0])
    if f.degree == 0:
        term = LinearFormPower(f.coeffs[0], one, zero)
    else:
        term = LinearFormPower(f.coeffs[-1], zero, one)
    return Decomposition(f.degree, (term,), canonical=True)


def _build_decomposition(f: BinaryForm, report: RankReport) -> Decomposition:
    if report.branch == DEGENERATE_MONOMIAL:
        return _degenerate_decomposition(f)
    if report.branch == FINITE_BRANCH:
        return _finite_from_poly(f, report.certificate.t_poly)
    inner = _finite_from_poly(f.derivative_x(),
                              report.fx_certificate.t_poly)
    return _integrate_finite(f, inner)


def decompose(f: BinaryForm, seed=0) -> Decomposition:
    """One minimal canonical power-sum decomposition of f."""
    report = waring_rank(f, seed)
    return _build_decomposition(f, report)


def _decomposition_key(dec: Decomposition, places: int = 6) -> tuple:
    items = []
    for t in dec.terms:
        vals = (to_complex(t.weight), to_complex(t.x_coef),
                to_complex(t.y_coef))
        items.append(tuple(round(part, places) for v in vals
                           for part in (v.real, v.imag)))
    return tuple(sorted(items))


def enumerate_decompositions(f: BinaryForm, count: int, seed=0) -> list:
    """Up to count pairwise-distinct minimal decompositions of f.

    In the unique regime (rank <= floor((d+1)/2)) the list has one entry.
    Otherwise new members come from varying the free parameters of the
    Hankel solution set behind the rank: f's own set when its F-rank
    equals the Waring rank, else the derivative's set re-integrated.
    """
    if count <= 0:
        return []
    report = waring_rank(f, seed)
    first = _build_decomposition(f, report)
    if report.unique_minimal or report.branch == DEGENERATE_MONOMIAL:
        return [first]

    wr = report.waring_rank
    if report.certificate is not None and report.certificate.rank == wr:
        base, cert, integrate = f, report.certificate, False
    elif report.fx_certificate is not None:
        base, cert, integrate = f.derivative_x(), report.fx_certificate, True
    else:
        return [first]

    solutions = cert.solutions
    out = [first]
    keys = {_decomposition_key(first)}
    if solutions.parameters == 0:
        return out
    scale = max(1.0, f.max_abs())

    def try_point(t) -> bool:
        poly = MonicPoly(solutions.member(t))
        if not is_squarefree_poly(poly):
            return False
        try:
            dec = _finite_from_poly(base, poly)
            if integrate:
                dec = _integrate_finite(f, dec)
        except NumericError:
            return False
        if len(dec.terms) != wr:
            return False
        if (dec.expand().to_float() - f.to_float()).max_abs() > \
                DEFAULT_TOL * scale:
            return False
        key = _decomposition_key(dec)
        if key in keys:
            return False
        keys.add(key)
        out.append(dec)
        return True

    budget = max(ENUM_TRIAL_FLOOR, ENUM_TRIAL_FACTOR * count)
    used = 0
    for t in _deterministic_points(solutions.parameters):
        if len(out) >= count or used >= budget:
            break
        used += 1
        try_point(t)
    rng = random.Random(f"{seed}:enumerate")
    while len(out) < count and used < budget:
        used += 1
        try_point(tuple(rng.randint(-99, 99)
                        for _ in range(solutions.parameters)))
    return out


def _apolarity_residual(f: BinaryForm, dec: Decomposition) -> float:
    """Sup-norm of (product of directional derivations applied to f); one
    first-order factor per term, so any valid decomposition sends it to
    zero."""
    if len(dec.terms) > f.degree:
        return 0.0
    factors = []
    for t in dec.terms:
        p, q = t.x_coef, t.y_coef
        if not is_exact(p):
            # unit-scale float directions so the residual is meaningful
            # for decompositions with very large slopes
            s = max(abs_value(p), abs_value(q))
            p, q = p / s, q / s
        factors.append(direction_factor(p, q))
    operator = reduce(operator_product, factors)
    return apply_operator(operator, f).max_abs()


def verify(f: BinaryForm, dec: Decomposition, tol: float = DEFAULT_TOL,
           seed=0) -> VerificationReport:
    """Check dec against f: expansion residual, annihilation residual,
    and length minimality.

    passed requires the expansion residual within tol (relative to the
    sup norm of f) and the length to equal the Waring rank; the
    apolarity residual is reported unthresholded.
    """
    if dec.degree != f.degree:
        raise ValueError(f"decomposition degree {dec.degree} does not match "
                         f"form degree {f.degree}")
    target, aligned = f, dec
    if f.exact and not dec.exact:
        target = f.to_float()
    elif dec.exact and not f.exact:
        aligned = dec.to_float()
    max_residual = (aligned.expand() - target).max_abs()
    apolarity_residual = _apolarity_residual(target, aligned)
    length_ok = len(dec.terms) == waring_rank(f, seed).waring_rank
    passed = max_residual <= tol * max(1.0, f.max_abs()) and length_ok
    return VerificationReport(max_residual, apolarity_residual, length_ok,
                              passed)


def roots_of_unity_decomposition(f: BinaryForm) -> Decomposition:
    """Power sum of length <= d supported on scaled d-th roots of unity.

    After a change of coordinates that makes both end coefficients
    nonzero (or notes that both vanish), the normalized coefficient
    vector is inverted by a discrete Fourier transform: the k-th weight
    is the mean of a_i * zeta^(-ki), and terms with vanishing weight are
    dropped.  The output is non-canonical and always on the float
    backend, since d-th roots of the end coefficients are irrational in
    general.
    """
    if f.is_zero:
        raise ZeroFormError("cannot decompose the zero form")
    d = f.degree
    if d < 1:
        raise ValueError("needs degree >= 1")
    m = [to_complex(v) for v in f.monomial_coeffs()]
    shear = None  # ("x", alpha): new x = x - alpha*y; ("y", alpha): mirror

    if m[0] != 0 and m[d] == 0:
        alpha = _nonvanishing_shift(f, at_one=True)
        m = _shear_monomials_x(m, alpha)
        shear = ("x", alpha)
    elif m[d] != 0 and m[0] == 0:
        alpha = _nonvanishing_shift(f, at_one=False)
        m = _shear_monomials_y(m, alpha)
        shear = ("y", alpha)

    a = [m[i] / comb(d, i) for i in range(d + 1)]
    if m[0] != 0:
        s = _principal_root(a[0], d)
        t = _principal_root(a[d], d)
        a = [a[i] / (s ** (d - i) * t ** i) for i in range(d + 1)]
    else:
        s = t = 1 + 0j
    zeta = cmath.exp(2j * cmath.pi / d)
    weights = []
    for k in range(1, d + 1):
        lam = sum(a[i] * zeta ** (-k * i) for i in range(d)) / d
        weights.append(lam)
    peak = max(abs(w) for w in weights)
    terms = []
    for k, lam in zip(range(1, d + 1), weights):
        if abs(lam) <= 1e-12 * max(1.0, peak):
            continue
        p, q = s, zeta ** k * t
        if shear is not None:
            kind, alpha = shear
            if kind == "x":
                q = q - alpha * p
            else:
                p = p - alpha * q
        terms.append(LinearFormPower(lam, p, q))
    if not terms:
        raise NumericError("all root-of-unity weights vanished for a "
                           "nonzero form")
    return Decomposition(d, tuple(terms), canonical=False)


def _principal_root(z: complex, d: int) -> complex:
    return cmath.exp(cmath.log(z) / d)


def _nonvanishing_shift(f: BinaryForm, at_one: bool) -> int:
    """Smallest integer alpha with f(alpha, 1) != 0 (or f(1, alpha) for
    the mirrored case); a degree-d form cannot vanish at d+1 of them."""
    d = f.degree
    one = one_like(f.coeffs[0])
    best, best_mag = None, -1.0
    for alpha in range(d + 2):
        arg = alpha * one
        value = f.evaluate(arg, one) if at_one else f.evaluate(one, arg)
        if f.exact:
            if bool(value):
                return alpha
            continue
        mag = abs_value(value) / (1.0 + alpha) ** d
        if mag > 1e-12 * max(1.0, f.max_abs()):
            return alpha
        if mag > best_mag:
            best, best_mag = alpha, mag
    if f.exact or best_mag <= 0.0:
        raise NumericError("no integer shift separates the form from zero")
    return best


def _shear_monomials_x(m: list, alpha: int) -> list:
    """Monomial coefficients after substituting x -> x + alpha*y (so the
    new variable is x - alpha*y)."""
    d = len(m) - 1
    return [sum(m[i] * comb(d - i, k - i) * alpha ** (k - i)
                for i in range(k + 1))
            for k in range(d + 1)]


def _shear_monomials_y(m: list, alpha: int) -> list:
    d = len(m) - 1
    return [sum(m[i] * comb(i, k) * alpha ** (i - k)
                for i in range(k, d + 1))
            for k in range(d + 1)]
