"""Binary forms, constant-coefficient differential operators, and
power-sum decompositions.

A degree-d form is stored through its binomial-normalized coefficient
vector (a_0, ..., a_d), meaning

    f(x, y) = sum_i  C(d, i) * a_i * x^(d-i) * y^i.

Every formula in the package is written against this normalization; the
plain monomial coefficients are only materialized at the text boundary
(parser/formatter) and inside the brute-force differentiation below.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .scalars import (
    GaussianRational,
    Scalar,
    abs_value,
    is_exact,
    one_like,
    to_complex,
    zero_like,
)


def _normalize_coeffs(coeffs):
    """Coerce a coefficient sequence into one backend.

    Any GaussianRational entry pins the exact backend (ints and Fractions
    are promoted, floats rejected); any float/complex entry pins the float
    backend.  A vector of plain ints/Fractions defaults to exact, so
    exactness is never lost by accident.
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("empty coefficient vector")
    has_exact = any(isinstance(c, GaussianRational) for c in coeffs)
    has_float = any(isinstance(c, (float, complex)) for c in coeffs)
    if has_exact and has_float:
        raise TypeError("mixed exact and float coefficients")
    if has_float:
        return tuple(complex(c) for c in coeffs)
    return tuple(c if isinstance(c, GaussianRational) else GaussianRational(c)
                 for c in coeffs)


class BinaryForm:
    """A complex binary form in x and y, binomial-normalized."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = _normalize_coeffs(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return is_exact(self.coeffs[0])

    @classmethod
    def from_monomial(cls, degree: int, monomial_coeffs, exact: bool = True):
        """Build from plain monomial coefficients m_i of x^(d-i) y^i."""
        monomial_coeffs = list(monomial_coeffs)
        if len(monomial_coeffs) != degree + 1:
            raise ValueError(
                f"degree {degree} needs {degree + 1} coefficients, "
                f"got {len(monomial_coeffs)}")
        if exact:
            coeffs = [GaussianRational(m) if not isinstance(m, GaussianRational)
                      else m for m in monomial_coeffs]
            return cls([m / comb(degree, i) for i, m in enumerate(coeffs)])
        return cls([complex(m) / comb(degree, i)
                    for i, m in enumerate(monomial_coeffs)])

    def monomial_coeffs(self) -> tuple:
        d = self.degree
        return tuple(a * comb(d, i) for i, a in enumerate(self.coeffs))

    @property
    def is_zero(self) -> bool:
        return all(not bool(a) for a in self.coeffs)

    def max_abs(self) -> float:
        return max(abs_value(a) for a in self.coeffs)

    def to_float(self) -> "BinaryForm":
        if not self.exact:
            return self
        return BinaryForm([to_complex(a) for a in self.coeffs])

    def derivative_x(self) -> "BinaryForm":
        """Partial derivative in x; degree drops by one."""
        d = self.degree
        if d < 1:
            raise ValueError("cannot differentiate a degree-0 form")
        return BinaryForm([d * a for a in self.coeffs[:d]])

    def integrate_x(self, constant_term=None) -> "BinaryForm":
        """An x-antiderivative of degree d+1.

        constant_term fixes the new top coefficient: the result's a_{d+1}
        is constant_term / (d+1), so derivative_x(integrate_x(f, c)) == f
        for every c.
        """
        d = self.degree
        if constant_term is None:
            constant_term = zero_like(self.coeffs[0])
        return BinaryForm([a / (d + 1) for a in self.coeffs]
                          + [constant_term / (d + 1)])

    def evaluate(self, x0, y0):
        d = self.degree
        total = zero_like(self.coeffs[0])
        for i, a in enumerate(self.coeffs):
            total = total + comb(d, i) * a * x0 ** (d - i) * y0 ** i
        return total

    def __sub__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return BinaryForm([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __add__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return BinaryForm([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return (self.exact == other.exact
                and self.degree == other.degree
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"BinaryForm({list(self.coeffs)!r})"


@dataclass(frozen=True)
class DiffOperator:
    """Constant-coefficient operator sum_j b_j dx^(e-j) dy^j.

    The coefficient vector is plain (not binomial-normalized); coeffs[j]
    multiplies dx^(e-j) dy^j where e = len(coeffs) - 1.
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalize_coeffs(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return is_exact(self.coeffs[0])

    @property
    def is_zero(self) -> bool:
        return all(not bool(b) for b in self.coeffs)

    def to_float(self) -> "DiffOperator":
        if not self.exact:
            return self
        return DiffOperator(tuple(to_complex(b) for b in self.coeffs))


def operator_product(g1: DiffOperator, g2: DiffOperator) -> DiffOperator:
    """Composition of two constant-coefficient operators (they commute,
    so this is plain coefficient convolution)."""
    if g1.exact != g2.exact:
        raise TypeError("mixed exact and float operators")
    e1, e2 = g1.degree, g2.degree
    zero = zero_like(g1.coeffs[0])
    out = [zero] * (e1 + e2 + 1)
    for j, b in enumerate(g1.coeffs):
        if not bool(b):
            continue
        for k, c in enumerate(g2.coeffs):
            out[j + k] = out[j + k] + b * c
    return DiffOperator(tuple(out))


def direction_factor(p, q) -> DiffOperator:
    """The first-order operator p*dy - q*dx, which kills (p x + q y)^d."""
    return DiffOperator((-q, p))


def _falling(n: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= n - t
    return out


def apply_operator(g: DiffOperator, f: BinaryForm) -> BinaryForm:
    """Apply g to f by brute-force monomial differentiation.

    dx^i dy^j acting on x^m y^n gives (m!/(m-i)!) (n!/(n-j)!) x^(m-i) y^(n-j)
    when m >= i and n >= j, and zero otherwise.  Output degree is d - e.
    """
    d, e = f.degree, g.degree
    if e > d:
        raise ValueError(f"operator degree {e} exceeds form degree {d}")
    if g.exact != f.exact:
        raise TypeError("operator and form use different backends")
    m = f.monomial_coeffs()
    zero = zero_like(f.coeffs[0])
    out = [zero] * (d - e + 1)
    for j, b in enumerate(g.coeffs):
        if not bool(b):
            continue
        # term dx^(e-j) dy^j hitting monomial index i = k + j
        for k in range(d - e + 1):
            i = k + j
            scale = _falling(d - i, e - j) * _falling(i, j)
            out[k] = out[k] + b * m[i] * scale
    return BinaryForm.from_monomial(d - e, out, exact=f.exact)


@dataclass(frozen=True)
class LinearFormPower:
    """One power-sum term: weight * (x_coef * x + y_coef * y)^degree,
    with the degree carried by the owning Decomposition."""

    weight: Scalar
    x_coef: Scalar
    y_coef: Scalar

    def __post_init__(self):
        if not bool(self.weight):
            raise ValueError("zero weight in a decomposition term")
        if not bool(self.x_coef) and not bool(self.y_coef):
            raise ValueError("zero linear form in a decomposition term")

    @property
    def exact(self) -> bool:
        return (is_exact(self.weight) and is_exact(self.x_coef)
                and is_exact(self.y_coef))

    @property
    def is_y_term(self) -> bool:
        return not bool(self.x_coef)


@dataclass(frozen=True)
class Decomposition:
    """A power-sum presentation f = sum_k w_k (p_k x + q_k y)^degree.

    canonical means: every term is monic in x (p_k = 1) except at most one
    pure y-term (p, q) = (0, 1), and the finite slopes q_k are pairwise
    distinct.
    """

    degree: int
    terms: tuple
    canonical: bool = False

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty decomposition")
        object.__setattr__(self, "terms", tuple(self.terms))
        exacts = {t.exact for t in self.terms}
        if len(exacts) > 1:
            raise TypeError("decomposition mixes exact and float terms")
        if self.canonical:
            one = one_like(self.terms[0].weight)
            y_terms = [t for t in self.terms if t.is_y_term]
            if len(y_terms) > 1:
                raise ValueError("canonical decomposition with two y-terms")
            for t in y_terms:
                if t.y_coef != one:
                    raise ValueError("canonical y-term must be weight * y^d")
            betas = [t.y_coef for t in self.terms if not t.is_y_term]
            for t in self.terms:
                if not t.is_y_term and t.x_coef != one:
                    raise ValueError("canonical terms must be monic in x")
            if len(set((to_complex(b).real, to_complex(b).imag) for b in betas)) \
                    != len(betas):
                raise ValueError("canonical slopes must be pairwise distinct")

    @property
    def length(self) -> int:
        return len(self.terms)

    @property
    def exact(self) -> bool:
        return self.terms[0].exact

    def finite_terms(self):
        return [t for t in self.terms if not t.is_y_term]

    def y_terms(self):
        return [t for t in self.terms if t.is_y_term]

    def expand(self) -> BinaryForm:
        """Multiply out the power sum; exact in, exact out."""
        d = self.degree
        zero = zero_like(self.terms[0].weight)
        coeffs = [zero] * (d + 1)
        for t in self.terms:
            # a_i picks up w * p^(d-i) * q^i
            powers_q = [one_like(t.weight)]
            for _ in range(d):
                powers_q.append(powers_q[-1] * t.y_coef)
            powers_p = [one_like(t.weight)]
            for _ in range(d):
                powers_p.append(powers_p[-1] * t.x_coef)
            for i in range(d + 1):
                coeffs[i] = coeffs[i] + t.weight * powers_p[d - i] * powers_q[i]
        return BinaryForm(coeffs)

    def to_float(self) -> "Decomposition":
        if not self.exact:
            return self
        return Decomposition(
            self.degree,
            tuple(LinearFormPower(to_complex(t.weight), to_complex(t.x_coef),
                                  to_complex(t.y_coef)) for t in self.terms),
            canonical=self.canonical,
        )


def expand(decomposition: Decomposition) -> BinaryForm:
    return decomposition.expand()
