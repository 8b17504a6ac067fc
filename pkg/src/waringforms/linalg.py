"""Linear algebra for the rank algorithm: Hankel systems, affine solution
sets, monic characteristic polynomials, squarefree-member search, root
extraction, and progressive Vandermonde solves.

Exact-backend systems are solved by exact row reduction over Gaussian
rationals, so consistency and kernels are decided, not estimated.  The
float backend uses column-pivoted QR with a relative rank tolerance and
never tests float equality without an explicit threshold.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

import numpy as np
import scipy.linalg

from .errors import NumericError
from .forms import BinaryForm
from .scalars import GaussianRational, abs_value, is_exact, to_complex

# Relative rank threshold for float factorizations.
RANK_TOL = 1e-10
# Random squarefree-search trials before giving up.
SEARCH_BUDGET = 64
# Random integer parameters are drawn from [-RANDOM_BOUND, RANDOM_BOUND].
RANDOM_BOUND = 10 ** 6
# Certified no-squarefree-member scans are attempted up to this many points.
CERT_LIMIT = 10 ** 5
# Accuracy contract for float roots: |T(root)| <= FACTOR * max(1,|c|oo) * r.
ROOT_RESIDUAL_FACTOR = 2.0 ** -40
# Rational-root extraction gives up when divisor enumeration would touch
# integers beyond this magnitude.
DIVISOR_CAP = 10 ** 9
# Relative threshold on the float resultant, scaled by the Hadamard bound.
SQUAREFREE_REL_TOL = 1e-12
# Default user-facing verification tolerance (CLI --tol).
DEFAULT_TOL = 1e-9


# ---------------------------------------------------------------------------
# Hankel systems and affine solution sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HankelSystem:
    """The order-r recurrence system for a degree-d form: matrix[i][j] =
    a_{i+j} (shape (d-r+1) x r), rhs_i = -a_{r+i}."""

    matrix: tuple
    rhs: tuple
    order: int
    degree: int


def build_hankel(f: BinaryForm, r: int) -> HankelSystem:
    d = f.degree
    if not 1 <= r <= d:
        raise ValueError(f"order must lie in 1..{d}, got {r}")
    a = f.coeffs
    rows = tuple(tuple(a[i + j] for j in range(r)) for i in range(d - r + 1))
    rhs = tuple(-a[r + i] for i in range(d - r + 1))
    return HankelSystem(rows, rhs, r, d)


@dataclass(frozen=True)
class AffineSolutionSet:
    """All solutions particular + sum_m t_m * basis[m] of a linear system."""

    particular: tuple
    basis: tuple

    @property
    def exact(self) -> bool:
        return is_exact(self.particular[0]) if self.particular else True

    @property
    def parameters(self) -> int:
        return len(self.basis)

    def member(self, t) -> tuple:
        vec = list(self.particular)
        for weight, direction in zip(t, self.basis):
            if weight:
                for k in range(len(vec)):
                    vec[k] = vec[k] + weight * direction[k]
        return tuple(vec)


def _solve_affine_exact(rows, rhs):
    n = len(rows[0]) if rows else 0
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for col in range(n):
        pivot_row = None
        for i in range(rank, len(aug)):
            if bool(aug[i][col]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        aug[rank], aug[pivot_row] = aug[pivot_row], aug[rank]
        inv = aug[rank][col]
        aug[rank] = [v / inv for v in aug[rank]]
        for i in range(len(aug)):
            if i != rank and bool(aug[i][col]):
                factor = aug[i][col]
                aug[i] = [v - factor * w for v, w in zip(aug[i], aug[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(aug)):
        if bool(aug[i][n]):
            return None
    zero = GaussianRational(0)
    one = GaussianRational(1)
    particular = [zero] * n
    for k, col in enumerate(pivots):
        particular[col] = aug[k][n]
    free_cols = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free_cols:
        vec = [zero] * n
        vec[fc] = one
        for k, col in enumerate(pivots):
            vec[col] = -aug[k][fc]
        basis.append(tuple(vec))
    return AffineSolutionSet(tuple(particular), tuple(basis))


def _solve_affine_float(rows, rhs, rank_tol):
    m, n = len(rows), len(rows[0]) if rows else 0
    M = np.array([[complex(v) for v in row] for row in rows], dtype=complex)
    b = np.array([complex(v) for v in rhs], dtype=complex)
    scale = max(np.max(np.abs(M)) if M.size else 0.0,
                np.max(np.abs(b)) if b.size else 0.0)
    if scale == 0.0:
        # zero system: everything solves it
        basis = tuple(tuple(1 + 0j if k == j else 0j for k in range(n))
                      for j in range(n))
        return AffineSolutionSet(tuple(0j for _ in range(n)), basis)
    tol = rank_tol * scale
    Q, R, piv = scipy.linalg.qr(M, pivoting=True)
    diag = np.abs(np.diag(R)) if min(m, n) else np.array([])
    rank = int(np.sum(diag > tol))
    # consistency: compare against the rank of the augmented matrix
    _, Raug, _ = scipy.linalg.qr(np.column_stack([M, b]), pivoting=True)
    diag_aug = np.abs(np.diag(Raug))
    rank_aug = int(np.sum(diag_aug > tol))
    if rank_aug > rank:
        return None
    qT_b = Q.conj().T @ b
    particular = np.zeros(n, dtype=complex)
    if rank:
        z = scipy.linalg.solve_triangular(R[:rank, :rank], qT_b[:rank])
        particular[piv[:rank]] = z
    basis = []
    for j in range(rank, n):
        vec = np.zeros(n, dtype=complex)
        vec[piv[j]] = 1.0
        if rank:
            u = scipy.linalg.solve_triangular(R[:rank, :rank], R[:rank, j])
            vec[piv[:rank]] = -u
        basis.append(tuple(complex(v) for v in vec))
    return AffineSolutionSet(tuple(complex(v) for v in particular),
                             tuple(basis))


def solve_affine(rows, rhs, rank_tol: float = RANK_TOL):
    """Full solution set of rows @ x = rhs, or None when inconsistent.

    Backend is chosen by the rhs entries (exact elimination vs pivoted QR),
    so callers must not mix exact and float scalars between the two.
    """
    some = rhs[0] if rhs else rows[0][0]
    if is_exact(some):
        return _solve_affine_exact(rows, rhs)
    return _solve_affine_float(rows, rhs, rank_tol)


def solve_hankel(system: HankelSystem, rank_tol: float = RANK_TOL):
    """Full solution set of the Hankel system, or None when inconsistent."""
    return solve_affine(system.matrix, system.rhs, rank_tol)


# ---------------------------------------------------------------------------
# monic polynomials, resultants, gcd
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonicPoly:
    """lambda^r + c_{r-1} lambda^{r-1} + ... + c_0; coeffs holds (c_0..c_{r-1})."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def exact(self) -> bool:
        return is_exact(self.coeffs[0]) if self.coeffs else True

    def __call__(self, z):
        # Horner with the implicit leading 1; the int seed coerces into
        # whichever backend z lives in.
        acc = 1
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def descending(self) -> list:
        one = GaussianRational(1) if self.exact else 1 + 0j
        return [one] + [self.coeffs[k] for k in range(self.degree - 1, -1, -1)]

    def derivative_descending(self) -> list:
        r = self.degree
        one = GaussianRational(1) if self.exact else 1 + 0j
        out = [one * r]
        for k in range(r - 1, 0, -1):
            out.append(self.coeffs[k] * k)
        return out

    def max_abs(self) -> float:
        return max((abs_value(c) for c in self.coeffs), default=0.0)


def exact_determinant(rows):
    """Determinant by exact field elimination; rows of Gaussian rationals."""
    n = len(rows)
    work = [list(r) for r in rows]
    det = GaussianRational(1)
    for col in range(n):
        pivot_row = None
        for i in range(col, n):
            if bool(work[i][col]):
                pivot_row = i
                break
        if pivot_row is None:
            return GaussianRational(0)
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            det = -det
        pivot = work[col][col]
        det = det * pivot
        for i in range(col + 1, n):
            if bool(work[i][col]):
                factor = work[i][col] / pivot
                work[i] = [v - factor * w for v, w in zip(work[i], work[col])]
    return det


def sylvester_resultant(a_desc, b_desc):
    """Resultant of two polynomials given by descending coefficient lists,
    taken at their formal degrees (len - 1)."""
    m, n = len(a_desc) - 1, len(b_desc) - 1
    exact = is_exact(a_desc[0])
    zero = GaussianRational(0) if exact else 0j
    one = GaussianRational(1) if exact else 1 + 0j
    if m == 0 and n == 0:
        return one
    if n == 0:
        return b_desc[0] ** m
    if m == 0:
        return a_desc[0] ** n
    size = m + n
    rows = []
    for shift in range(n):
        rows.append([zero] * shift + list(a_desc) + [zero] * (n - 1 - shift))
    for shift in range(m):
        rows.append([zero] * shift + list(b_desc) + [zero] * (m - 1 - shift))
    if exact:
        return exact_determinant(rows)
    mat = np.array([[complex(v) for v in row] for row in rows], dtype=complex)
    return complex(np.linalg.det(mat))


def resultant_with_derivative(T: MonicPoly):
    """Res(T, T'); zero exactly when T has a repeated root."""
    if T.degree < 1:
        raise ValueError("resultant needs degree >= 1")
    return sylvester_resultant(T.descending(), T.derivative_descending())


def _hadamard_bound(a_desc, b_desc) -> float:
    m, n = len(a_desc) - 1, len(b_desc) - 1
    if m == 0 or n == 0:
        return max(abs_value(a_desc[0]) ** max(n, 1),
                   abs_value(b_desc[0]) ** max(m, 1), 1.0)
    row_a = sum(abs_value(v) ** 2 for v in a_desc) ** 0.5
    row_b = sum(abs_value(v) ** 2 for v in b_desc) ** 0.5
    return (row_a ** n) * (row_b ** m)


def is_squarefree_poly(T: MonicPoly) -> bool:
    """Squarefree test through the resultant with the derivative: decidable
    on the exact backend, Hadamard-scaled threshold on floats."""
    res = resultant_with_derivative(T)
    if is_exact(res):
        return bool(res)
    bound = _hadamard_bound(T.descending(), T.derivative_descending())
    return abs(res) > SQUAREFREE_REL_TOL * max(bound, 1.0)


def exact_poly_gcd(a_desc, b_desc):
    """Monic gcd of two exact polynomials (descending coefficients)."""
    def trim(p):
        k = 0
        while k < len(p) - 1 and not bool(p[k]):
            k += 1
        return p[k:]

    def is_zero_poly(p):
        return all(not bool(v) for v in p)

    def make_monic(p):
        lead = p[0]
        return [v / lead for v in p]

    A, B = trim(list(a_desc)), trim(list(b_desc))
    if is_zero_poly(A) and is_zero_poly(B):
        return [GaussianRational(1)]
    while not is_zero_poly(B):
        if len(B) == 1:
            return [GaussianRational(1)]
        # A mod B by synthetic long division (both made monic first)
        A, B = make_monic(A), make_monic(B)
        R = list(A)
        while len(R) >= len(B):
            factor = R[0]
            if bool(factor):
                for k in range(len(B)):
                    R[k] = R[k] - factor * B[k]
            R = trim(R[1:]) if len(R) > 1 else []
        if not R:
            R = [GaussianRational(0)]
        A, B = B, R
    return make_monic(A)


# ---------------------------------------------------------------------------
# squarefree-member search over an affine family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchFailure:
    """No squarefree member found.  certified means the whole family was
    proved repeated-root (exact backend, feasible interpolation scan);
    otherwise failure_bound carries the reported miss probability."""

    certified: bool
    failure_bound: float


def principal_lattice(p: int, D: int):
    """All t in N^p with sum(t) <= D: unisolvent for total degree D."""
    if p == 0:
        yield ()
        return
    for head in range(D + 1):
        for tail in principal_lattice(p - 1, D - head):
            yield (head,) + tail


def _deterministic_points(p: int):
    seen = set()
    def emit(t):
        if t not in seen:
            seen.add(t)
            yield t
    yield from emit((0,) * p)
    for v in (-1, 1, -2, 2, -3, 3):
        for m in range(p):
            t = tuple(v if k == m else 0 for k in range(p))
            yield from emit(t)
    if 2 <= p <= 5:
        for t in itertools.product((-1, 0, 1), repeat=p):
            yield from emit(t)


def search_family(p: int, degree_bound: int, attempt, exact: bool,
                  seed=0, budget: int = SEARCH_BUDGET):
    """Shared parameter-space search: find t with attempt(t) not None.

    attempt must be the indicator of a "good" member whose bad locus is
    cut out by one polynomial of total degree <= degree_bound in the p
    parameters.  Deterministic small integer points are tried first; on
    the exact backend, when C(p+degree_bound, degree_bound) <= CERT_LIMIT,
    an exhaustive principal-lattice scan either finds a member or proves
    none exists anywhere; otherwise seeded random integer points up to
    budget, returning an uncertified SearchFailure with a miss-probability
    bound on exhaustion.
    """
    for t in _deterministic_points(p):
        hit = attempt(t)
        if hit is not None:
            return hit
    if p == 0:
        return SearchFailure(certified=exact, failure_bound=0.0)
    D = degree_bound
    if exact and comb(p + D, D) <= CERT_LIMIT:
        for t in principal_lattice(p, D):
            hit = attempt(t)
            if hit is not None:
                return hit
        return SearchFailure(certified=True, failure_bound=0.0)
    rng = random.Random(f"{seed}")
    for _ in range(budget):
        t = tuple(rng.randint(-RANDOM_BOUND, RANDOM_BOUND) for _ in range(p))
        hit = attempt(t)
        if hit is not None:
            return hit
    bound = D * budget / (2 * RANDOM_BOUND + 1)
    return SearchFailure(certified=False, failure_bound=min(bound, 1.0))


def find_squarefree_member(solutions: AffineSolutionSet, seed=0,
                           budget: int = SEARCH_BUDGET):
    """Search the affine family for a coefficient vector whose monic
    polynomial is squarefree.

    Res(T(t), T'(t)) is one polynomial of total degree <= 2r-1 in the
    family parameters t, so the search_family certification contract
    applies with that bound.
    """
    r = len(solutions.particular)

    def attempt(t):
        T = MonicPoly(solutions.member(t))
        return T if is_squarefree_poly(T) else None

    return search_family(solutions.parameters, 2 * r - 1, attempt,
                         solutions.exact, seed, budget)


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------

def _divisors(n: int):
    n = abs(n)
    if n == 0 or n > DIVISOR_CAP:
        return None
    out = []
    for i in range(1, isqrt(n) + 1):
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
    return sorted(out)


def _rational_roots(T: MonicPoly):
    """All-rational factorization attempt; returns list of Fractions or
    None when T is not fully rational-rooted (or extraction is infeasible)."""
    coeffs = list(T.coeffs)
    if any(c.im != 0 for c in coeffs):
        return None
    # work monic, ascending, Fraction entries plus implicit lead
    work = [c.re for c in coeffs]
    roots = []
    while work:
        # strip roots at zero
        if work[0] == 0:
            roots.append(Fraction(0))
            work = work[1:]
            continue
        denom_lcm = 1
        for v in work:
            denom_lcm = denom_lcm * v.denominator // _gcd(denom_lcm, v.denominator)
        const = work[0] * denom_lcm
        if abs(const.numerator) > DIVISOR_CAP or denom_lcm > DIVISOR_CAP:
            return None
        num_divs = _divisors(int(const))
        den_divs = _divisors(denom_lcm)
        if num_divs is None or den_divs is None:
            return None
        found = None
        for pd in num_divs:
            for qd in den_divs:
                for cand in (Fraction(pd, qd), Fraction(-pd, qd)):
                    acc = Fraction(1)
                    for c in reversed(work):
                        acc = acc * cand + c
                    if acc == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return None
        roots.append(found)
        # synthetic division of the monic poly by (lambda - found):
        # quotient q is monic of degree r-1, q_k = c_{k+1} + found * q_{k+1}
        r = len(work)
        q = [Fraction(0)] * r
        q[r - 1] = Fraction(1)
        for k in range(r - 2, -1, -1):
            q[k] = work[k + 1] + found * q[k + 1]
        work = q[:r - 1]
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _newton_polish(z: complex, desc: np.ndarray, ddesc: np.ndarray,
                   steps: int = 3) -> complex:
    # keep the lowest-residual iterate; near-multiple roots oscillate
    best = complex(z)
    best_resid = abs(np.polyval(desc, best))
    for _ in range(steps):
        fz = np.polyval(desc, z)
        dz = np.polyval(ddesc, z)
        if dz == 0:
            break
        z = z - fz / dz
        resid = abs(np.polyval(desc, z))
        if resid < best_resid:
            best, best_resid = complex(z), resid
    return best


def poly_roots(T: MonicPoly) -> list:
    """The r roots of T, pairwise distinct.

    Exact backend: full rational factorization is attempted first (divisor
    candidates for the primitive integer polynomial); if every root is
    rational the result stays exact, otherwise the whole vector drops to
    float.  Float roots come from companion-matrix eigenvalues plus Newton
    polish and must satisfy |T(root)| <= 2^-40 * r * sum_i |c_i| |root|^i,
    the running-error scale of evaluating T at the root.
    """
    r = T.degree
    if r < 1:
        raise ValueError("no roots of a degree-0 polynomial")
    if T.exact:
        rational = _rational_roots(T)
        if rational is not None:
            if len(set(rational)) != len(rational):
                raise NumericError("repeated exact root; T was not squarefree")
            return [GaussianRational(root) for root in rational]
    desc = np.array([complex(v) for v in T.descending()], dtype=complex)
    ddesc = np.polyder(desc)
    desc_abs = np.abs(desc)

    def contract(z: complex) -> float:
        scale = float(np.polyval(desc_abs, abs(z)))
        return ROOT_RESIDUAL_FACTOR * r * max(1.0, scale)

    raw = np.roots(desc)
    roots = [_newton_polish(complex(z), desc, ddesc) for z in raw]
    for i, z in enumerate(roots):
        resid = abs(np.polyval(desc, z))
        if resid > contract(z):
            z2 = _newton_polish(z, desc, ddesc, steps=40)
            if abs(np.polyval(desc, z2)) > contract(z2):
                raise NumericError(
                    f"root residual {resid:.3e} exceeds contract "
                    f"{contract(z):.3e}")
            roots[i] = z2
    scale = 1.0 + max(abs(z) for z in roots)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= 2.0 ** -20 * scale:
                raise NumericError("root cluster detected; T behaves as "
                                   "non-squarefree in float arithmetic")
    return roots


# ---------------------------------------------------------------------------
# Vandermonde weights
# ---------------------------------------------------------------------------

def vandermonde_solve(betas, values) -> list:
    """Solve sum_k w_k * beta_k^i = values[i] (i = 0..len-1) progressively.

    Bjorck-Pereyra elimination order: O(n^2) operations, works unchanged
    over both scalar backends.  Nodes must be pairwise distinct.
    """
    if len(betas) != len(values):
        raise ValueError("node/value length mismatch")
    n = len(betas) - 1
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if betas[i] == betas[j]:
                raise ValueError("repeated interpolation node")
    w = list(values)
    for k in range(n):
        for i in range(n, k, -1):
            w[i] = w[i] - betas[k] * w[i - 1]
    for k in range(n - 1, -1, -1):
        for i in range(k + 1, n + 1):
            w[i] = w[i] / (betas[i] - betas[i - k - 1])
        for i in range(k, n):
            w[i] = w[i] - w[i + 1]
    return w
