"""Brute-force rank oracle built on graded annihilator spaces.

Independent of the Hankel driver by construction: ranks here come from
scanning operator orders and testing kernel members for repeated
projective roots, so the two pipelines can cross-validate each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import lcm, perm
from operator import mul

from .errors import OracleSearchError, ZeroFormError
from .forms import (BinaryForm, DiffOperator, apply_operator,
                    direction_factor, operator_product)
from .linalg import (DEFAULT_TOL, SEARCH_BUDGET, SQUAREFREE_REL_TOL,
                     SearchFailure, _hadamard_bound, exact_poly_gcd,
                     search_family, solve_affine, sylvester_resultant)
from .scalars import GaussianRational, abs_value, as_scalar, zero_like


@dataclass(frozen=True)
class AnnihilatorBasis:
    """Basis of the operators of one fixed order annihilating a form."""

    order: int
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)


def annihilator_space(f: BinaryForm, e: int) -> AnnihilatorBasis:
    """All operators of order e annihilating f, as a kernel basis.

    An operator sum_j b_j dx^(e-j) dy^j kills the degree-d form exactly
    when every moment row (a_k, ..., a_{k+e}), k = 0..d-e, pairs to zero
    with b; the kernel is computed on the form's own scalar backend.
    """
    d = f.degree
    if f.is_zero:
        raise ZeroFormError("every operator annihilates the zero form")
    if not 1 <= e <= d:
        raise ValueError(f"operator order must lie in 1..{d}, got {e}")
    a = f.coeffs
    rows = [[a[k + j] for j in range(e + 1)] for k in range(d - e + 1)]
    zero = zero_like(a[0])
    solutions = solve_affine(rows, [zero] * (d - e + 1))
    return AnnihilatorBasis(e, tuple(DiffOperator(vec)
                                     for vec in solutions.basis))


def _partials_descending(g: DiffOperator):
    # Partial derivatives of g as a binary form in the two derivative
    # symbols, dehomogenized so that the variable tracks the finite root.
    b = g.coeffs
    e = g.degree
    desc_x = [(e - j) * b[j] for j in range(e)][::-1]
    desc_y = [(j + 1) * b[j + 1] for j in range(e)][::-1]
    return desc_x, desc_y


def operator_discriminant(g: DiffOperator):
    """Resultant of the two partial derivatives of g as a binary form.

    Zero exactly when g has a repeated projective root (order >= 2, any
    backend); the Euler relation e*g = X*g_X + Y*g_Y turns a common root
    of the partials into a repeated root of g and conversely.
    """
    desc_x, desc_y = _partials_descending(g)
    return sylvester_resultant(desc_x, desc_y)


def squarefree_binary(g: DiffOperator,
                      rel_tol: float = SQUAREFREE_REL_TOL) -> bool:
    """True when g has no repeated projective root.

    Reading sum_j b_j dx^(e-j) dy^j as a binary form, the root matching
    the pure dx power sits at infinity with multiplicity e - deg q for
    the dehomogenization q(t) = sum_j b_j t^j.  Exact backend: infinity
    multiplicity <= 1 and gcd(q, q') constant.  Float backend: Hadamard
    scaled threshold on the discriminant resultant.
    """
    b = g.coeffs
    e = g.degree
    if g.is_zero:
        raise ValueError("the zero operator has every root repeated")
    if e == 0:
        return True
    if not g.exact:
        desc_x, desc_y = _partials_descending(g)
        disc = sylvester_resultant(desc_x, desc_y)
        bound = _hadamard_bound(desc_x, desc_y)
        return abs(disc) > rel_tol * max(bound, 1.0)
    deg = max(j for j, v in enumerate(b) if bool(v))
    if e - deg >= 2:
        return False
    if deg == 0:
        return True
    # the root at zero is equally cheap to read off: its multiplicity is
    # the index of the first nonzero coefficient
    if min(j for j, v in enumerate(b) if bool(v)) >= 2:
        return False
    q_desc = [b[j] for j in range(deg, -1, -1)]
    dq_desc = [(deg - i) * q_desc[i] for i in range(deg)]
    return len(exact_poly_gcd(q_desc, dq_desc)) == 1


def _integer_generators(generators):
    """Integer rescale of real-rational kernel generators.

    Returns None when any entry has an imaginary part; rescaling one
    generator changes the parametrization but not the spanned kernel,
    so search results and certificates carry over unchanged.
    """
    out = []
    for gen in generators:
        parts = []
        for v in gen:
            if bool(v.im):
                return None
            parts.append(v.re)
        scale = lcm(*(p.denominator for p in parts))
        out.append(tuple(int(p * scale) for p in parts))
    return out


@dataclass(frozen=True)
class OracleReport:
    """Oracle rank together with the strength of the claim.

    The witness operator is concrete; certified says every smaller order
    was provably ruled out (exact backend only); failure_bound adds up
    the miss probabilities of any uncertified rejections on the way.
    """

    rank: int
    witness: DiffOperator
    certified: bool
    failure_bound: float


def oracle_report(f: BinaryForm, seed=0,
                  budget: int = SEARCH_BUDGET) -> OracleReport:
    """Smallest order whose annihilator slice has a squarefree member.

    Kernel dimension 0 skips the order, dimension 1 tests the lone
    generator (scalar multiples share the root pattern), dimension >= 2
    searches integer combinations: deterministic small points first,
    then an exhaustive certification scan when feasible, then seeded
    random points.  The scan cannot pass order d mathematically, so
    exhaustion is reported as a search failure, never as an answer.
    """
    if f.is_zero:
        raise ZeroFormError("rank of the zero form is undefined")
    d = f.degree
    if d < 1:
        raise ValueError("the rank oracle needs degree >= 1")
    certified = f.exact
    miss_bound = 0.0
    for e in range(1, d + 1):
        ann = annihilator_space(f, e)
        dim = ann.dimension
        if dim == 0:
            continue
        if dim == 1:
            g = ann.basis[0]
            if squarefree_binary(g):
                return OracleReport(e, g, certified, miss_bound)
            continue
        generators = [g.coeffs for g in ann.basis]
        width = e + 1
        int_gens = _integer_generators(generators) if f.exact else None
        if int_gens is not None:
            # Hot path: integer parameters against integer generators
            # keeps the per-point cost at native int speed; only the
            # survivors of the infinity-multiplicity check pay for an
            # exact gcd.
            columns = list(zip(*int_gens))

            def attempt(t):
                vec = [sum(map(mul, t, col)) for col in columns]
                deg = next((k for k in reversed(range(width))
                            if vec[k]), -1)
                if deg < 0 or e - deg >= 2:
                    return None
                if next(k for k in range(width) if vec[k]) >= 2:
                    return None
                op = DiffOperator(tuple(GaussianRational(v) for v in vec))
                return op if squarefree_binary(op) else None
        else:
            zero = zero_like(generators[0][0])

            def attempt(t):
                vec = [zero] * width
                for t_i, gen in zip(t, generators):
                    if t_i:
                        vec = [acc + t_i * v for acc, v in zip(vec, gen)]
                op = DiffOperator(tuple(vec))
                if op.is_zero:
                    return None
                return op if squarefree_binary(op) else None

        # The discriminant resultant of the combined operator is one
        # polynomial of total degree <= 2e-2 in the t parameters.
        found = search_family(dim, 2 * e - 2, attempt, f.exact,
                              seed=f"{seed}:order:{e}", budget=budget)
        if isinstance(found, SearchFailure):
            if not found.certified:
                certified = False
                miss_bound = min(1.0, miss_bound + found.failure_bound)
            continue
        return OracleReport(e, found, certified, miss_bound)
    raise OracleSearchError(
        f"no squarefree annihilator found through order {d} "
        f"(accumulated miss bound {miss_bound:.3g}); this is a search "
        f"failure, not a rank")


def oracle_rank(f: BinaryForm, seed=0) -> int:
    """Rank of f by the annihilator criterion (see oracle_report)."""
    return oracle_report(f, seed).rank


def direction_product(betas, include_y_term: bool,
                      exact: bool) -> DiffOperator:
    """Product of one dy - beta*dx factor per finite direction, times one
    dx factor when the pure y power participates."""
    one = GaussianRational(1) if exact else 1 + 0j
    zero = zero_like(one)
    factors = [direction_factor(one, as_scalar(b, exact)) for b in betas]
    if include_y_term:
        factors.append(direction_factor(zero, one))
    if not factors:
        raise ValueError("no direction factors given")
    return reduce(operator_product, factors)


def apolarity_image(f: BinaryForm, betas,
                    include_y_term: bool = False):
    """Image of f under the direction-product operator.

    None signals an operator order of exactly d + 1: differentiating a
    degree-d form d + 1 times gives zero identically, so callers must
    treat None as an exact annihilation.
    """
    d = f.degree
    exact = f.exact
    coerced = [as_scalar(b, exact) for b in betas]
    for i in range(len(coerced)):
        for j in range(i + 1, len(coerced)):
            if coerced[i] == coerced[j]:
                raise ValueError("duplicate direction in apolarity check")
    order = len(coerced) + (1 if include_y_term else 0)
    if order > d + 1:
        raise ValueError(
            f"{order} direction factors exceed degree {d} + 1")
    if order == d + 1:
        return None
    op = direction_product(coerced, include_y_term, exact)
    return apply_operator(op, f)


def apolarity_check(f: BinaryForm, betas, include_y_term: bool = False,
                    tol: float = DEFAULT_TOL) -> bool:
    """Whether the direction-product operator annihilates f.

    Exact backend: literal zero test.  Float backend: the residual is
    compared against tol scaled by the form size, the falling factorial
    of the differentiation order, and the factor magnitudes.
    """
    image = apolarity_image(f, betas, include_y_term)
    if image is None:
        return True
    if image.exact:
        return image.is_zero
    order = len(betas) + (1 if include_y_term else 0)
    magnitude = 1.0
    for b in betas:
        magnitude *= 1.0 + abs_value(as_scalar(b, False))
    scale = float(perm(f.degree, order)) * max(1.0, f.max_abs()) * magnitude
    return image.max_abs() <= tol * max(1.0, scale)
