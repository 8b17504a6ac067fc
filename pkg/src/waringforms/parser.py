"""Text grammar for forms, operators, and decompositions.

Forms are sums of terms ``[coefficient]["*"][x[^exp]]["*"][y[^exp]]`` with
integer, decimal, rational ``p/q``, or parenthesized complex ``(a+bi)``
coefficients; whitespace is insignificant and homogeneity is enforced.
Operators use the same grammar over the symbols ``dx``/``dy``.
Decompositions are sums of ``weight*(linear form)^degree`` chunks as
emitted by format_decomposition.

Exact-mode parsing produces Gaussian-rational coefficients (decimals are
read exactly), float-mode parsing produces complex ones.  The formatters
invert the parsers: parse(format(f)) reproduces f on both backends.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb

from .errors import ParseError
from .forms import BinaryForm, Decomposition, DiffOperator, LinearFormPower
from .scalars import GaussianRational, to_complex

_TOKEN_RE = re.compile(r"\s*(?:(\d+\.\d+|\.\d+|\d+)|([A-Za-z]+)|([+\-*/^()]))")

_NUM, _ID, _OP = "num", "id", "op"


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos and not m.group():
            # skip leading whitespace that matched nothing else
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {text[len(text) - len(stripped)]!r}",
                             len(text) - len(stripped))
        if not any(m.groups()):
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append((_NUM, m.group(1), start))
        elif m.group(2) is not None:
            tokens.append((_ID, m.group(2), start))
        else:
            tokens.append((_OP, m.group(3), start))
        pos = m.end()
    rest = text[pos:].strip()
    if rest:
        raise ParseError(f"unexpected character {rest[0]!r}",
                         len(text) - len(text[pos:].lstrip()))
    return tokens


class _Stream:
    def __init__(self, tokens, text_len):
        self.tokens = tokens
        self.i = 0
        self.text_len = text_len

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok

    def here(self) -> int:
        tok = self.peek()
        return tok[2] if tok is not None else self.text_len

    def expect_op(self, char):
        tok = self.next()
        if tok is None or tok[0] != _OP or tok[1] != char:
            raise ParseError(f"expected {char!r}",
                             tok[2] if tok else self.text_len)
        return tok


def _parse_unsigned_rational(stream, exact):
    """NUMBER or NUMBER/NUMBER; returns Fraction (exact) or float."""
    tok = stream.next()
    if tok is None or tok[0] != _NUM:
        raise ParseError("expected a number", tok[2] if tok else stream.text_len)
    value = Fraction(tok[1]) if exact else float(tok[1])
    nxt = stream.peek()
    if nxt is not None and nxt[0] == _OP and nxt[1] == "/":
        if "." in tok[1]:
            raise ParseError("rational numerator must be an integer", tok[2])
        stream.next()
        den = stream.next()
        if den is None or den[0] != _NUM or "." in den[1]:
            raise ParseError("rational denominator must be an integer",
                             den[2] if den else stream.text_len)
        if int(den[1]) == 0:
            raise ParseError("zero denominator", den[2])
        if exact:
            value = Fraction(int(tok[1]), int(den[1]))
        else:
            value = float(tok[1]) / float(den[1])
    return value


def _parse_complex_literal(stream, exact):
    """'(' already peeked: parse (a+bi) style literal, consume through ')'."""
    stream.expect_op("(")
    sign = 1
    tok = stream.peek()
    if tok is not None and tok[0] == _OP and tok[1] in "+-":
        stream.next()
        sign = -1 if tok[1] == "-" else 1
    first = _parse_unsigned_rational(stream, exact) * sign
    re_part, im_part = first, Fraction(0) if exact else 0.0
    tok = stream.peek()
    if tok is not None and tok[0] == _ID and tok[1] == "i":
        stream.next()
        re_part, im_part = (Fraction(0) if exact else 0.0), first
    else:
        if tok is not None and tok[0] == _OP and tok[1] in "+-":
            stream.next()
            s2 = -1 if tok[1] == "-" else 1
            second = _parse_unsigned_rational(stream, exact) * s2
            itok = stream.next()
            if itok is None or itok[0] != _ID or itok[1] != "i":
                raise ParseError("expected 'i' in complex literal",
                                 itok[2] if itok else stream.text_len)
            im_part = second
    stream.expect_op(")")
    if exact:
        return GaussianRational(re_part, im_part)
    return complex(re_part, im_part)


def _paren_group_is_coefficient(stream):
    """Lookahead from a '(': complex literals contain no x/y identifiers."""
    depth = 0
    for kind, value, _pos in stream.tokens[stream.i:]:
        if kind == _OP and value == "(":
            depth += 1
        elif kind == _OP and value == ")":
            depth -= 1
            if depth == 0:
                return True
        elif kind == _ID and depth >= 1 and value != "i":
            return False
    return True


def _parse_coefficient(stream, exact):
    """Return a backend scalar, or None when no coefficient is present."""
    tok = stream.peek()
    if tok is None:
        return None
    if tok[0] == _NUM:
        value = _parse_unsigned_rational(stream, exact)
        return GaussianRational(value) if exact else complex(value)
    if tok[0] == _OP and tok[1] == "(" and _paren_group_is_coefficient(stream):
        return _parse_complex_literal(stream, exact)
    return None


def _split_variable_run(run: str, varx: str, vary: str, pos: int):
    """Decompose a letter run like 'xy' or 'dxdy' into (sawx, sawy)."""
    rest = run
    sawx = sawy = False
    if rest.startswith(varx):
        sawx = True
        rest = rest[len(varx):]
    if rest.startswith(vary):
        sawy = True
        rest = rest[len(vary):]
    if rest or not (sawx or sawy):
        raise ParseError(f"unexpected symbol {run!r}", pos)
    return sawx, sawy


def _parse_exponent(stream) -> int:
    tok = stream.peek()
    if tok is None or tok[0] != _OP or tok[1] != "^":
        return 1
    stream.next()
    num = stream.next()
    if num is None or num[0] != _NUM or "." in num[1]:
        raise ParseError("exponent must be a positive integer",
                         num[2] if num else stream.text_len)
    exp = int(num[1])
    if exp < 1:
        raise ParseError("exponent must be a positive integer", num[2])
    return exp


def _parse_variable_part(stream, varx, vary):
    """Parse [x[^e]]["*"][y[^e]]; returns (ex, ey), possibly (0, 0)."""
    ex = ey = 0
    tok = stream.peek()
    if tok is None or tok[0] != _ID:
        return ex, ey
    sawx, sawy = _split_variable_run(tok[1], varx, vary, tok[2])
    stream.next()
    if sawx and sawy:
        # glued run like 'xy': exponents can only follow the trailing symbol
        ex = 1
        ey = _parse_exponent(stream)
        return ex, ey
    if sawx:
        ex = _parse_exponent(stream)
        nxt = stream.peek()
        if nxt is not None and nxt[0] == _OP and nxt[1] == "*":
            after = stream.tokens[stream.i + 1] if stream.i + 1 < len(stream.tokens) else None
            if after is not None and after[0] == _ID:
                stream.next()
                nxt = stream.peek()
        if nxt is not None and nxt[0] == _ID:
            _sx, sy = _split_variable_run(nxt[1], varx, vary, nxt[2])
            if _sx or not sy:
                raise ParseError(f"unexpected symbol {nxt[1]!r}", nxt[2])
            stream.next()
            ey = _parse_exponent(stream)
        return ex, ey
    ey = _parse_exponent(stream)
    return ex, ey


def _parse_homogeneous_sum(stream, varx, vary, exact, stop_at_rparen=False):
    """Parse a signed sum of terms; returns (degree, {y_exponent: coeff}).

    Homogeneity (equal total degree across terms) is enforced here.
    """
    monomials = {}
    degree = None
    first = True
    while True:
        tok = stream.peek()
        if tok is None:
            break
        if stop_at_rparen and tok[0] == _OP and tok[1] == ")":
            break
        sign = 1
        if tok[0] == _OP and tok[1] in "+-":
            stream.next()
            sign = -1 if tok[1] == "-" else 1
        elif not first:
            raise ParseError("expected '+' or '-' between terms", tok[2])
        term_pos = stream.here()
        coeff = _parse_coefficient(stream, exact)
        nxt = stream.peek()
        if coeff is not None and nxt is not None and nxt[0] == _OP and nxt[1] == "*":
            stream.next()
        ex, ey = _parse_variable_part(stream, varx, vary)
        if coeff is None:
            if ex == 0 and ey == 0:
                raise ParseError("expected a term", term_pos)
            coeff = GaussianRational(1) if exact else complex(1)
        if sign < 0:
            coeff = -coeff
        term_degree = ex + ey
        if degree is None:
            degree = term_degree
        elif term_degree != degree:
            raise ParseError(
                f"non-homogeneous term of degree {term_degree} in a "
                f"degree-{degree} sum", term_pos)
        monomials[ey] = monomials.get(ey, GaussianRational(0) if exact else 0j) + coeff
        first = False
    if degree is None:
        raise ParseError("empty input", stream.here())
    return degree, monomials


def parse_form(text: str, expected_degree: int | None = None,
               exact: bool = True) -> BinaryForm:
    """Parse a binary form in x and y.

    A literal zero parses to the zero form of expected_degree (or 0).
    """
    tokens = _tokenize(text)
    stream = _Stream(tokens, len(text))
    degree, monomials = _parse_homogeneous_sum(stream, "x", "y", exact)
    leftover = stream.peek()
    if leftover is not None:
        raise ParseError("trailing input", leftover[2])
    zero = GaussianRational(0) if exact else 0j
    coeffs = [monomials.get(i, zero) for i in range(degree + 1)]
    all_zero = all(not bool(c) for c in coeffs)
    if all_zero and degree == 0 and expected_degree is not None:
        degree = expected_degree
        coeffs = [zero] * (degree + 1)
    if expected_degree is not None and degree != expected_degree:
        raise ParseError(
            f"expected degree {expected_degree}, found {degree}", 0)
    return BinaryForm.from_monomial(degree, coeffs, exact=exact)


def parse_operator(text: str, exact: bool = True) -> DiffOperator:
    """Parse a constant-coefficient operator in dx and dy.

    Coefficients stay plain (no binomial normalization)."""
    tokens = _tokenize(text)
    stream = _Stream(tokens, len(text))
    degree, monomials = _parse_homogeneous_sum(stream, "dx", "dy", exact)
    leftover = stream.peek()
    if leftover is not None:
        raise ParseError("trailing input", leftover[2])
    zero = GaussianRational(0) if exact else 0j
    return DiffOperator(tuple(monomials.get(j, zero) for j in range(degree + 1)))


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def _fraction_str(fr: Fraction) -> str:
    return str(fr)


def _float_str(v: float) -> str:
    return repr(v)


def _scalar_pieces(z):
    """Split a scalar into (is_real, sign, magnitude_text, complex_literal).

    Real scalars report a printable magnitude and a sign; complex ones get
    a full parenthesized literal (sign folded inside).
    """
    if isinstance(z, GaussianRational):
        if z.im == 0:
            return True, (-1 if z.re < 0 else 1), _fraction_str(abs(z.re)), None
        sign = "+" if z.im >= 0 else "-"
        lit = f"({_fraction_str(z.re)}{sign}{_fraction_str(abs(z.im))}i)"
        return False, 1, None, lit
    z = complex(z)
    if z.imag == 0.0:
        return True, (-1 if z.real < 0 else 1), _float_str(abs(z.real)), None
    sign = "+" if z.imag >= 0 else "-"
    lit = f"({_float_str(z.real)}{sign}{_float_str(abs(z.imag))}i)"
    return False, 1, None, lit


def _is_unit_magnitude(text: str) -> bool:
    return text in ("1", "1.0")


def _monomial_str(d: int, i: int) -> str:
    ex, ey = d - i, i
    parts = []
    if ex:
        parts.append("x" if ex == 1 else f"x^{ex}")
    if ey:
        parts.append("y" if ey == 1 else f"y^{ey}")
    return "".join(parts)


def format_form(f: BinaryForm) -> str:
    """Monomial-expanded text; exact coefficients as rationals, float ones
    as shortest round-trip decimals."""
    d = f.degree
    pieces = []
    for i, m in enumerate(f.monomial_coeffs()):
        if not bool(m):
            continue
        var = _monomial_str(d, i)
        is_real, sign, mag, lit = _scalar_pieces(m)
        if is_real:
            body = var if (_is_unit_magnitude(mag) and var) else \
                (mag if not var else f"{mag}{var}")
        else:
            sign = 1
            body = f"{lit}{var}" if var else lit
        pieces.append((sign, body))
    if not pieces:
        return "0"
    out = []
    for k, (sign, body) in enumerate(pieces):
        if k == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append(("- " if sign < 0 else "+ ") + body)
    return " ".join(out)


def format_operator(g: DiffOperator) -> str:
    e = g.degree
    pieces = []
    for j, b in enumerate(g.coeffs):
        if not bool(b):
            continue
        ex, ey = e - j, j
        parts = []
        if ex:
            parts.append("dx" if ex == 1 else f"dx^{ex}")
        if ey:
            parts.append("dy" if ey == 1 else f"dy^{ey}")
        var = "".join(parts)
        is_real, sign, mag, lit = _scalar_pieces(b)
        if is_real:
            body = var if (_is_unit_magnitude(mag) and var) else \
                (mag if not var else f"{mag}{var}")
        else:
            sign = 1
            body = f"{lit}{var}" if var else lit
        pieces.append((sign, body))
    if not pieces:
        return "0"
    out = []
    for k, (sign, body) in enumerate(pieces):
        if k == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append(("- " if sign < 0 else "+ ") + body)
    return " ".join(out)


def _linear_form_str(p, q) -> str:
    parts = []
    if bool(p):
        is_real, sign, mag, lit = _scalar_pieces(p)
        if is_real:
            text = "x" if _is_unit_magnitude(mag) else f"{mag}x"
            parts.append(("-" if sign < 0 else "") + text)
        else:
            parts.append(f"{lit}x")
    if bool(q):
        is_real, sign, mag, lit = _scalar_pieces(q)
        if is_real:
            text = "y" if _is_unit_magnitude(mag) else f"{mag}y"
        else:
            sign = 1
            text = f"{lit}y"
        if parts:
            parts.append(("- " if sign < 0 else "+ ") + text)
        else:
            parts.append(("-" if sign < 0 else "") + text)
    return " ".join(parts)


def format_decomposition(dec: Decomposition) -> str:
    """Render as 'w1*(p1 x + q1 y)^d + ...'; unit weights are dropped."""
    out = []
    for k, t in enumerate(dec.terms):
        is_real, sign, mag, lit = _scalar_pieces(t.weight)
        chunk = f"({_linear_form_str(t.x_coef, t.y_coef)})^{dec.degree}"
        if is_real:
            if not _is_unit_magnitude(mag):
                chunk = f"{mag}*{chunk}"
        else:
            sign = 1
            chunk = f"{lit}*{chunk}"
        if k == 0:
            out.append(("-" if sign < 0 else "") + chunk)
        else:
            out.append(("- " if sign < 0 else "+ ") + chunk)
    return " ".join(out)


def _looks_canonical(terms) -> bool:
    y_terms = [t for t in terms if t.is_y_term]
    if len(y_terms) > 1:
        return False
    one = GaussianRational(1) if terms[0].exact else complex(1)
    for t in y_terms:
        if t.y_coef != one:
            return False
    betas = []
    for t in terms:
        if t.is_y_term:
            continue
        if t.x_coef != one:
            return False
        betas.append(to_complex(t.y_coef))
    return len(set((b.real, b.imag) for b in betas)) == len(betas)


def parse_decomposition(text: str, exact: bool = True) -> Decomposition:
    """Parse the format_decomposition grammar back into a Decomposition."""
    tokens = _tokenize(text)
    stream = _Stream(tokens, len(text))
    terms = []
    degree = None
    first = True
    while stream.peek() is not None:
        tok = stream.peek()
        sign = 1
        if tok[0] == _OP and tok[1] in "+-":
            stream.next()
            sign = -1 if tok[1] == "-" else 1
        elif not first:
            raise ParseError("expected '+' or '-' between terms", tok[2])
        first = False
        term_pos = stream.here()
        weight = _parse_coefficient(stream, exact)
        if weight is not None:
            stream.expect_op("*")
        else:
            weight = GaussianRational(1) if exact else complex(1)
        stream.expect_op("(")
        lin_degree, monomials = _parse_homogeneous_sum(
            stream, "x", "y", exact, stop_at_rparen=True)
        stream.expect_op(")")
        if lin_degree != 1:
            raise ParseError("decomposition terms need a linear form", term_pos)
        zero = GaussianRational(0) if exact else 0j
        p = monomials.get(0, zero)
        q = monomials.get(1, zero)
        exp = _parse_exponent(stream)
        if degree is None:
            degree = exp
        elif exp != degree:
            raise ParseError(
                f"term of power {exp} in a degree-{degree} decomposition",
                term_pos)
        if sign < 0:
            weight = -weight
        if not bool(weight):
            raise ParseError("zero weight in decomposition", term_pos)
        if not bool(p) and not bool(q):
            raise ParseError("zero linear form in decomposition", term_pos)
        terms.append(LinearFormPower(weight, p, q))
    if not terms:
        raise ParseError("empty input", 0)
    return Decomposition(degree, tuple(terms),
                         canonical=_looks_canonical(terms))
