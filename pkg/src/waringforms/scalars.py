"""Scalar arithmetic for the two coefficient backends.

Exact computations run over Gaussian rationals: complex numbers whose real
and imaginary parts are `fractions.Fraction` values, so equality against
zero is decidable.  Approximate computations use the builtin `complex`
(IEEE double pairs), where equality is only ever tested through explicit
tolerances by the callers.

Algorithms elsewhere in the package are written against the shared
arithmetic surface (+, -, *, /, ==, integer powers) so a single
implementation serves both backends; the helpers at the bottom of this
module are the only sanctioned crossing points between them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class GaussianRational:
    """A complex number with exact rational real and imaginary parts.

    Arithmetic mixes freely with Python ints and Fractions (which are
    coerced), but deliberately refuses floats and complex values: mixing
    backends silently is the classic way to lose exactness.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @staticmethod
    def _coerce(value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = GaussianRational(1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        # Must agree with int/Fraction hashing because equality does.
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


Scalar = Union[GaussianRational, complex]

GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)


def is_exact(value) -> bool:
    return isinstance(value, GaussianRational)


def to_complex(value) -> complex:
    """Demote any scalar (exact, float, or plain int/Fraction) to complex."""
    if isinstance(value, GaussianRational):
        return complex(value)
    return complex(value)


def abs_value(value) -> float:
    """Magnitude of a scalar as a float, for residual reporting."""
    return abs(to_complex(value))


def zero_like(sample) -> Scalar:
    return GR_ZERO if isinstance(sample, GaussianRational) else 0j


def one_like(sample) -> Scalar:
    return GR_ONE if isinstance(sample, GaussianRational) else 1 + 0j


def as_scalar(value, exact: bool) -> Scalar:
    """Coerce an int/Fraction/str/float/complex literal into a backend scalar."""
    if exact:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("cannot promote a float complex to the exact backend")
        if isinstance(value, float):
            # Fraction(float) is exact binary expansion; accept only through
            # strings elsewhere, but a literal float here is a caller bug.
            raise TypeError("cannot promote a float to the exact backend")
        return GaussianRational(Fraction(value))
    if isinstance(value, GaussianRational):
        return complex(value)
    return complex(value)
