"""Exact scalars, free modules, and finite commutative algebras.

Everything in this package runs over either the rationals or a prime field,
with no floating point anywhere: rationals are `fractions.Fraction`, prime
field elements are residues in [0, p).  Vectors are plain tuples of Scalar,
matrices are tuples of row tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product


class CharacteristicError(ArithmeticError):
    """An operation needed to invert an integer that is zero in the base ring."""


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for q in range(3, math.isqrt(p) + 1, 2):
        if p % q == 0:
            return False
    return True


@dataclass(frozen=True, slots=True)
class Ring:
    """Base ring descriptor: the rationals (p is None) or the field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @property
    def kind(self):
        return "Q" if self.p is None else "Fp"

    @property
    def characteristic(self):
        return 0 if self.p is None else self.p

    def scalar(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.ring != self:
                raise ValueError(f"scalar belongs to {value.ring}, not {self}")
            return value
        if self.p is None:
            return Scalar(self, Fraction(value))
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise CharacteristicError(f"denominator {value.denominator} vanishes mod {self.p}")
            num = value.numerator % self.p
            den = value.denominator % self.p
            return Scalar(self, num * pow(den, self.p - 2, self.p) % self.p)
        return Scalar(self, int(value) % self.p)

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def one(self):
        return self.scalar(1)

    def integer_invertible(self, k: int) -> bool:
        if self.p is None:
            return k != 0
        return k % self.p != 0

    def parse(self, text: str) -> "Scalar":
        return self.scalar(Fraction(text)) if self.p is None else self.scalar(int(text))

    def __str__(self):
        return "Q" if self.p is None else f"F{self.p}"


QQ = Ring()


def GF(p: int) -> Ring:
    return Ring(p)


@dataclass(frozen=True, slots=True)
class Scalar:
    """An exact base ring element: a Fraction over Q, a residue over F_p."""

    ring: Ring
    value: object

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise ValueError(f"mixed rings {self.ring} and {other.ring}")
            return other
        return self.ring.scalar(other)

    def __add__(self, other):
        if isinstance(other, MultiPoly):
            return NotImplemented
        other = self._coerce(other)
        v = self.value + other.value
        return Scalar(self.ring, v if self.ring.p is None else v % self.ring.p)

    __radd__ = __add__

    def __neg__(self):
        v = -self.value
        return Scalar(self.ring, v if self.ring.p is None else v % self.ring.p)

    def __sub__(self, other):
        if isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        if isinstance(other, MultiPoly):
            return NotImplemented
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return NotImplemented
        other = self._coerce(other)
        v = self.value * other.value
        return Scalar(self.ring, v if self.ring.p is None else v % self.ring.p)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        if self.ring.p is None:
            return Scalar(self.ring, 1 / self.value)
        return Scalar(self.ring, pow(self.value, self.ring.p - 2, self.ring.p))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    @property
    def is_zero(self):
        return self.value == 0

    def __bool__(self):
        return not self.is_zero

    def __lt__(self, other):
        other = self._coerce(other)
        return self.value < other.value

    def __le__(self, other):
        other = self._coerce(other)
        return self.value <= other.value

    def zero_like(self):
        return self.ring.zero

    def one_like(self):
        return self.ring.one

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"{self.value}:{self.ring}"


# ---------------------------------------------------------------------------
# Vectors

def vec(ring: Ring, entries) -> tuple:
    return tuple(ring.scalar(e) for e in entries)

def zero_vec(ring: Ring, n: int) -> tuple:
    return (ring.zero,) * n

def unit_vec(ring: Ring, n: int, i: int) -> tuple:
    return tuple(ring.one if j == i else ring.zero for j in range(n))

def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))

def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))

def vec_scale(c, u):
    return tuple(c * a for a in u)

def vec_is_zero(u):
    return all(a.is_zero for a in u)

def vec_dot(u, v):
    total = None
    for a, b in zip(u, v, strict=True):
        term = a * b
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# Linear algebra over the base field

@dataclass(frozen=True)
class LinearSolution:
    """Outcome of an exact linear solve: a particular solution (None when the
    system is inconsistent) plus a kernel basis in reduced echelon form."""

    solution: tuple | None
    kernel: tuple

    @property
    def consistent(self):
        return self.solution is not None


def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r]), tuple(pivots)


def solve_linear(mat, rhs) -> LinearSolution:
    """Solve mat * x = rhs exactly over the base field.

    The kernel basis is returned in all cases; the particular solution is
    None exactly when the system is inconsistent.
    """
    rows = [list(r) for r in mat]
    m = len(rows)
    n = len(rows[0]) if rows else len(rhs) if rhs else 0
    if rhs:
        ring = rhs[0].ring
    elif rows and rows[0]:
        ring = rows[0][0].ring
    else:
        ring = None
    aug = [rows[i] + [rhs[i]] for i in range(m)]
    red, pivots = rref(aug)
    pivots = list(pivots)
    kernel = _kernel_from_rref(red, pivots, n, ring)
    if n in pivots:
        return LinearSolution(None, kernel)
    if not red:
        return LinearSolution(zero_vec(ring, n) if n else (), kernel)
    sol = [ring.zero] * n
    for r, c in enumerate(pivots):
        sol[c] = red[r][n]
    return LinearSolution(tuple(sol), kernel)


def _kernel_from_rref(red, pivots, n, ring=None):
    if n == 0:
        return ()
    if ring is None and red:
        ring = red[0][0].ring
    if ring is None:
        # no constraints at all: caller must have at least one row or rhs
        raise ValueError("cannot infer ring from an empty system")
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ring.zero] * n
        v[f] = ring.one
        for r, c in enumerate(pivots):
            if c < n:
                v[c] = -red[r][f]
        basis.append(tuple(v))
    return tuple(basis)


def row_space_basis(vectors):
    """Reduced echelon basis of the span of the given vectors."""
    vectors = [v for v in vectors if not vec_is_zero(v)]
    if not vectors:
        return ()
    red, _ = rref(vectors)
    return tuple(r for r in red if not vec_is_zero(r))


def reduce_against(echelon, v):
    """Reduce v modulo the span of an echelon basis."""
    v = list(v)
    for row in echelon:
        lead = next(i for i, x in enumerate(row) if not x.is_zero)
        if not v[lead].is_zero:
            f = v[lead]
            v = [x - f * y for x, y in zip(v, row)]
    return tuple(v)


def in_span(echelon, v):
    return vec_is_zero(reduce_against(echelon, v))


def spans_equal(basis_a, basis_b):
    return row_space_basis(basis_a) == row_space_basis(basis_b)


def det(rows):
    """Determinant by expansion over column subsets; entries may be Scalars
    or MultiPolys (anything with ring ops and zero_like/one_like)."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    memo = {}

    def minor(i, cols_mask):
        if i == n:
            return rows[0][0].one_like()
        key = cols_mask
        if key in memo:
            return memo[key]
        total = rows[0][0].zero_like()
        sign_flip = 0
        for j in range(n):
            bit = 1 << j
            if cols_mask & bit:
                continue
            entry = rows[i][j]
            term = entry * minor(i + 1, cols_mask | bit)
            total = total + (term if sign_flip % 2 == 0 else -term)
            sign_flip += 1
        memo[key] = total
        return total

    return minor(0, 0)


# ---------------------------------------------------------------------------
# Multivariate polynomials in auxiliary variables

class MultiPoly:
    """Sparse polynomial in auxiliary variables t_1..t_k with Scalar
    coefficients.  Terms map exponent tuples to nonzero Scalars."""

    __slots__ = ("ring", "nvars", "terms")

    def __init__(self, ring: Ring, nvars: int, terms=None):
        clean = {}
        for exps, c in (terms or {}).items():
            c = ring.scalar(c)
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} has wrong length")
            if not c.is_zero:
                clean[tuple(exps)] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def constant(cls, ring, nvars, value):
        return cls(ring, nvars, {(0,) * nvars: ring.scalar(value)})

    @classmethod
    def variable(cls, ring, nvars, i):
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(ring, nvars, {exps: ring.one})

    @classmethod
    def variables(cls, ring, nvars):
        return [cls.variable(ring, nvars, i) for i in range(nvars)]

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring or other.nvars != self.nvars:
                raise ValueError("mixed polynomial rings")
            return other
        return MultiPoly.constant(self.ring, self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, self.ring.zero) + c
            if s.is_zero:
                terms.pop(e, None)
            else:
                terms[e] = s
        return MultiPoly(self.ring, self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return MultiPoly(self.ring, self.nvars,
                             {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly(self.ring, self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.ring, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    @property
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return not self.is_zero

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.ring.zero)

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self, d: int):
        return all(sum(e) == d for e in self.terms)

    def substitute(self, values):
        """Full numeric substitution; returns a Scalar."""
        values = [self.ring.scalar(v) for v in values]
        if len(values) != self.nvars:
            raise ValueError("wrong number of substitution values")
        total = self.ring.zero
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def shift(self, new_nvars: int, offset: int):
        """Reindex into a larger variable set, variable i becoming i+offset."""
        if offset + self.nvars > new_nvars:
            raise ValueError("shift does not fit")
        pad_l = (0,) * offset
        pad_r = (0,) * (new_nvars - offset - self.nvars)
        return MultiPoly(self.ring, new_nvars,
                         {pad_l + e + pad_r: c for e, c in self.terms.items()})

    def zero_like(self):
        return MultiPoly(self.ring, self.nvars, {})

    def one_like(self):
        return MultiPoly.constant(self.ring, self.nvars, 1)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.ring, self.nvars, self.terms) == (other.ring, other.nvars, other.terms)

    def __hash__(self):
        return hash((self.ring, self.nvars, tuple(self.sorted_terms())))

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"t{i + 1}^{k}" if k > 1 else f"t{i + 1}"
                            for i, k in enumerate(e) if k)
            parts.append(f"{c}" if not mono else f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self})"


# ---------------------------------------------------------------------------
# Univariate polynomial helpers (coefficient lists, index = degree)

def poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    return coeffs

def poly_is_zero(coeffs):
    return not poly_trim(coeffs)

def poly_degree(coeffs):
    t = poly_trim(coeffs)
    return len(t) - 1 if t else -1

def poly_add(a, b):
    ring = (a or b)[0].ring
    n = max(len(a), len(b))
    a = list(a) + [ring.zero] * (n - len(a))
    b = list(b) + [ring.zero] * (n - len(b))
    return poly_trim(x + y for x, y in zip(a, b))

def poly_scale(c, a):
    return poly_trim(c * x for x in a)

def poly_mul(a, b):
    a, b = poly_trim(a), poly_trim(b)
    if not a or not b:
        return []
    ring = a[0].ring
    out = [ring.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return poly_trim(out)

def poly_divmod(a, b):
    a, b = poly_trim(a), poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    ring = b[0].ring
    rem = list(a)
    quo = [ring.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = b[-1].inverse()
    for k in range(len(a) - len(b), -1, -1):
        if len(rem) < len(b) + k:
            continue
        f = rem[len(b) + k - 1] * inv_lead
        if f.is_zero:
            continue
        quo[k] = f
        for j, y in enumerate(b):
            rem[j + k] = rem[j + k] - f * y
    return poly_trim(quo), poly_trim(rem)

def poly_monic(a):
    a = poly_trim(a)
    if not a:
        return a
    inv = a[-1].inverse()
    return [inv * x for x in a]

def poly_gcd(a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)

def poly_lcm(a, b):
    g = poly_gcd(a, b)
    q, _ = poly_divmod(poly_mul(a, b), g)
    return poly_monic(q)

def poly_derivative(a):
    a = poly_trim(a)
    if len(a) <= 1:
        return []
    ring = a[0].ring
    return poly_trim(ring.scalar(k) * a[k] for k in range(1, len(a)))

def poly_eval(a, x: Scalar):
    total = x.ring.zero
    for c in reversed(poly_trim(a)):
        total = total * x + c
    return total

def poly_to_string(a, var="t"):
    a = poly_trim(a)
    if not a:
        return "0"
    parts = []
    for k, c in enumerate(a):
        if c.is_zero:
            continue
        if k == 0:
            parts.append(f"{c}")
        else:
            head = var if k == 1 else f"{var}^{k}"
            if c == c.ring.one:
                parts.append(head)
            elif c == -c.ring.one:
                parts.append(f"-{head}")
            else:
                parts.append(f"{c}*{head}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Finite commutative algebras given by structure constants

class FiniteAlgebra:
    """Commutative unital algebra, free of finite rank over the base ring,
    with multiplication given by structure constants.

    mul[i][j] is the coordinate vector of (basis_i * basis_j).  Commutativity,
    associativity and unitality are all verified eagerly at construction;
    downstream formulas assume them silently.
    """

    def __init__(self, ring: Ring, basis_names, mul, one, presentation=None, _check=True):
        self.ring = ring
        self.basis_names = tuple(basis_names)
        n = len(self.basis_names)
        self.mul = tuple(tuple(vec(ring, mul[i][j]) for j in range(n)) for i in range(n))
        self.one = vec(ring, one)
        self.presentation = presentation
        if len(set(self.basis_names)) != n:
            raise ValueError("duplicate basis names")
        if len(self.one) != n or any(len(self.mul[i][j]) != n for i in range(n) for j in range(n)):
            raise ValueError("structure constant shape mismatch")
        if _check:
            self._validate()

    @property
    def rank(self):
        return len(self.basis_names)

    @property
    def is_zero(self):
        return self.rank == 0

    def _validate(self):
        n = self.rank
        for i in range(n):
            for j in range(i + 1, n):
                if self.mul[i][j] != self.mul[j][i]:
                    raise ValueError(f"multiplication not commutative at ({i},{j})")
        for i in range(n):
            if self.mul_vec(self.one, unit_vec(self.ring, n, i)) != unit_vec(self.ring, n, i):
                raise ValueError(f"unit fails on basis element {self.basis_names[i]}")
        for i in range(n):
            for j in range(n):
                left = self.mul[i][j]
                for k in range(n):
                    if self.mul_vec(left, unit_vec(self.ring, n, k)) != \
                       self.mul_vec(unit_vec(self.ring, n, i), self.mul[j][k]):
                        raise ValueError(f"multiplication not associative at ({i},{j},{k})")

    # -- arithmetic on coordinate vectors ---------------------------------

    def element(self, coords):
        return vec(self.ring, coords)

    def scalar_embed(self, c):
        return vec_scale(self.ring.scalar(c), self.one)

    def mul_vec(self, u, v):
        out = [self.ring.zero] * self.rank
        for i, a in enumerate(u):
            if a.is_zero:
                continue
            for j, b in enumerate(v):
                if b.is_zero:
                    continue
                coef = a * b
                for k, c in enumerate(self.mul[i][j]):
                    if not c.is_zero:
                        out[k] = out[k] + coef * c
        return tuple(out)

    def pow_vec(self, u, k: int):
        result = self.one
        for _ in range(k):
            result = self.mul_vec(result, u)
        return result

    def mul_poly_vec(self, u, v):
        """Product of two elements with MultiPoly coordinates."""
        zero = u[0].zero_like()
        out = [zero] * self.rank
        for i, a in enumerate(u):
            if a.is_zero:
                continue
            for j, b in enumerate(v):
                if b.is_zero:
                    continue
                coef = a * b
                for k, c in enumerate(self.mul[i][j]):
                    if not c.is_zero:
                        out[k] = out[k] + coef * c
        return tuple(out)

    def generic_element(self, nvars=None, offset=0):
        """Coordinates of the generic element sum_i t_{offset+i} * basis_i."""
        nvars = self.rank if nvars is None else nvars
        return tuple(MultiPoly.variable(self.ring, nvars, offset + i) for i in range(self.rank))

    def multiplication_matrix(self, u):
        """Matrix of multiplication by u; column j is u * basis_j."""
        cols = [self.mul_vec(u, unit_vec(self.ring, self.rank, j)) for j in range(self.rank)]
        return tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))

    def multiplication_matrix_poly(self, u):
        zero = u[0].zero_like()
        cols = []
        for j in range(self.rank):
            col = [zero] * self.rank
            for i, a in enumerate(u):
                if a.is_zero:
                    continue
                for k, c in enumerate(self.mul[i][j]):
                    if not c.is_zero:
                        col[k] = col[k] + a * c
            cols.append(col)
        return tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))

    def trace_of(self, u):
        m = self.multiplication_matrix(u)
        total = self.ring.zero
        for i in range(self.rank):
            total = total + m[i][i]
        return total

    def norm_of(self, u):
        return det(self.multiplication_matrix(u))

    def norm_of_poly(self, u):
        return det(self.multiplication_matrix_poly(u))

    def is_invertible(self, u):
        return not self.norm_of(u).is_zero

    def inverse_vec(self, u):
        sol = solve_linear(self.multiplication_matrix(u), self.one)
        if sol.solution is None:
            raise ZeroDivisionError("element is not invertible")
        return sol.solution

    def basis_index(self, name: str):
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise ValueError(f"no basis element named {name!r}") from None

    def structural_eq(self, other):
        return (isinstance(other, FiniteAlgebra)
                and self.ring == other.ring
                and self.basis_names == other.basis_names
                and self.one == other.one
                and self.mul == other.mul)

    def __repr__(self):
        return f"FiniteAlgebra({self.ring}, rank {self.rank}: {','.join(self.basis_names)})"

    # -- constructors ------------------------------------------------------

    @classmethod
    def base(cls, ring: Ring):
        return cls(ring, ("1",), (((ring.one,),),), (ring.one,))

    @classmethod
    def quotient_polynomial(cls, ring: Ring, minpoly, var="x"):
        """k[x]/(f) for monic f, with the power basis 1, x, ..., x^{deg-1}."""
        minpoly = [ring.scalar(c) for c in minpoly]
        if poly_degree(minpoly) < 1:
            raise ValueError("minimal polynomial must have degree >= 1")
        if minpoly[-1] != ring.one:
            raise ValueError("minimal polynomial must be monic")
        n = len(minpoly) - 1
        names = ["1"] if n >= 1 else []
        if n >= 2:
            names.append(var)
        for k in range(2, n):
            names.append(f"{var}^{k}")
        def reduced(power):
            p = [ring.zero] * power + [ring.one]
            _, r = poly_divmod(p, minpoly)
            r = r + [ring.zero] * (n - len(r))
            return r[:n]
        mul = [[reduced(i + j) for j in range(n)] for i in range(n)]
        one = [ring.one] + [ring.zero] * (n - 1)
        pres = {"kind": "univariate", "minpoly": tuple(minpoly), "var": var}
        return cls(ring, names, mul, one, presentation=pres)

    @classmethod
    def product_ring(cls, ring: Ring, n: int):
        """k^n with componentwise operations."""
        names = [f"e{i + 1}" for i in range(n)]
        mul = [[[ring.one if i == j == k else ring.zero for k in range(n)]
                for j in range(n)] for i in range(n)]
        one = [ring.one] * n
        return cls(ring, names, mul, one)

    @classmethod
    def truncated_polynomials(cls, ring: Ring, nvars: int, order: int, var_names=None):
        """k[x_1..x_m] / (x_1..x_m)^order, monomial basis by (degree, lex)."""
        if var_names is None:
            var_names = [f"x{i + 1}" for i in range(nvars)] if nvars > 1 else ["x"]
        monos = []
        for d in range(order):
            stack = [(d, ())]
            level = []
            def fill(remaining, prefix):
                if len(prefix) == nvars - 1:
                    level.append(prefix + (remaining,))
                    return
                for a in range(remaining + 1):
                    fill(remaining - a, prefix + (a,))
            fill(d, ())
            monos.extend(sorted(level))
        index = {m: i for i, m in enumerate(monos)}
        def name(m):
            if sum(m) == 0:
                return "1"
            return "*".join(f"{var_names[i]}^{k}" if k > 1 else var_names[i]
                            for i, k in enumerate(m) if k)
        n = len(monos)
        mul = []
        for a in monos:
            row = []
            for b in monos:
                s = tuple(x + y for x, y in zip(a, b))
                col = [ring.zero] * n
                if sum(s) < order:
                    col[index[s]] = ring.one
                row.append(col)
            mul.append(row)
        one = [ring.one] + [ring.zero] * (n - 1)
        pres = {"kind": "truncated", "nvars": nvars, "order": order}
        return cls(ring, [name(m) for m in monos], mul, one, presentation=pres)

    @classmethod
    def product_algebra(cls, left: "FiniteAlgebra", right: "FiniteAlgebra"):
        """The direct product left x right with componentwise operations."""
        if left.ring != right.ring:
            raise ValueError("mixed rings")
        ring = left.ring
        nl, nr = left.rank, right.rank
        names = [f"l.{s}" for s in left.basis_names] + [f"r.{s}" for s in right.basis_names]
        n = nl + nr
        mul = [[None] * n for _ in range(n)]
        zero = zero_vec(ring, n)
        for i in range(n):
            for j in range(n):
                if i < nl and j < nl:
                    mul[i][j] = tuple(left.mul[i][j]) + zero_vec(ring, nr)
                elif i >= nl and j >= nl:
                    mul[i][j] = zero_vec(ring, nl) + tuple(right.mul[i - nl][j - nl])
                else:
                    mul[i][j] = zero
        one = tuple(left.one) + tuple(right.one)
        return cls(ring, names, mul, one)


class AlgebraMorphism:
    """Unital multiplicative linear map between finite algebras, stored as the
    images of the source basis.  Both conditions are verified at construction."""

    def __init__(self, source: FiniteAlgebra, target: FiniteAlgebra, columns, _check=True):
        if source.ring != target.ring:
            raise ValueError("mixed rings")
        self.source = source
        self.target = target
        self.columns = tuple(vec(target.ring, c) for c in columns)
        if len(self.columns) != source.rank or any(len(c) != target.rank for c in self.columns):
            raise ValueError("morphism shape mismatch")
        if _check:
            self._validate()

    def _validate(self):
        if self.apply(self.source.one) != self.target.one:
            raise ValueError("morphism does not preserve the unit")
        n = self.source.rank
        for i in range(n):
            for j in range(i, n):
                lhs = self.apply(self.source.mul[i][j])
                rhs = self.target.mul_vec(self.columns[i], self.columns[j])
                if lhs != rhs:
                    raise ValueError(
                        f"morphism not multiplicative on "
                        f"({self.source.basis_names[i]}, {self.source.basis_names[j]})")

    @property
    def matrix(self):
        """rank_target x rank_source matrix, rows over target coordinates."""
        return tuple(tuple(self.columns[j][i] for j in range(self.source.rank))
                     for i in range(self.target.rank))

    @classmethod
    def from_matrix(cls, source, target, rows, _check=True):
        cols = [[rows[i][j] for i in range(target.rank)] for j in range(source.rank)]
        return cls(source, target, cols, _check=_check)

    @classmethod
    def identity(cls, algebra):
        cols = [unit_vec(algebra.ring, algebra.rank, i) for i in range(algebra.rank)]
        return cls(algebra, algebra, cols, _check=False)

    def apply(self, u):
        out = zero_vec(self.target.ring, self.target.rank)
        for a, col in zip(u, self.columns, strict=True):
            if not a.is_zero:
                out = vec_add(out, vec_scale(a, col))
        return out

    def apply_poly(self, u):
        """Apply to an element with MultiPoly coordinates."""
        zero = u[0].zero_like()
        out = [zero] * self.target.rank
        for a, col in zip(u, self.columns, strict=True):
            if a.is_zero:
                continue
            for k, c in enumerate(col):
                if not c.is_zero:
                    out[k] = out[k] + a * c
        return tuple(out)

    def compose(self, inner: "AlgebraMorphism"):
        """self after inner."""
        if inner.target is not self.source and not inner.target.structural_eq(self.source):
            raise ValueError("composition mismatch")
        cols = [self.apply(c) for c in inner.columns]
        return AlgebraMorphism(inner.source, self.target, cols, _check=False)

    def image_basis(self):
        return row_space_basis(self.columns)

    def kernel_basis(self):
        mat = self.matrix
        if self.target.rank == 0:
            ring = self.source.ring
            return tuple(unit_vec(ring, self.source.rank, i) for i in range(self.source.rank))
        return solve_linear(mat, zero_vec(self.target.ring, self.target.rank)).kernel

    def is_surjective(self):
        return len(self.image_basis()) == self.target.rank


def evaluation_morphism(algebra: FiniteAlgebra, point):
    """Evaluation at a point of a presented algebra.

    For a univariate quotient k[x]/(f), `point` is the value of x (a root of
    f).  For a truncated polynomial algebra, `point` must be the origin.
    """
    ring = algebra.ring
    base = FiniteAlgebra.base(ring)
    pres = algebra.presentation
    if pres is None:
        raise ValueError("algebra carries no presentation; supply a morphism instead")
    if pres["kind"] == "univariate":
        v = ring.scalar(point)
        if not poly_eval(list(pres["minpoly"]), v).is_zero:
            raise ValueError(f"{v} is not a root of the defining polynomial")
        cols = [(v ** k,) for k in range(algebra.rank)]
        return AlgebraMorphism(algebra, base, cols)
    if pres["kind"] == "truncated":
        values = [ring.scalar(c) for c in (point if isinstance(point, (list, tuple)) else [point])]
        if any(not c.is_zero for c in values):
            raise ValueError("truncated polynomial algebras only have the origin as a point")
        cols = [(ring.one,)] + [(ring.zero,)] * (algebra.rank - 1)
        return AlgebraMorphism(algebra, base, cols)
    raise ValueError(f"unknown presentation kind {pres['kind']!r}")


# ---------------------------------------------------------------------------
# Ideals and quotients

def ideal_closure(algebra: FiniteAlgebra, gens):
    """Reduced echelon basis of the ideal generated by the given elements:
    the smallest subspace containing them that is stable under multiplication
    by every basis element."""
    basis = row_space_basis(list(gens))
    while True:
        extra = []
        for v in basis:
            for i in range(algebra.rank):
                w = algebra.mul_vec(v, unit_vec(algebra.ring, algebra.rank, i))
                if not in_span(basis, w):
                    extra.append(w)
        if not extra:
            return basis
        basis = row_space_basis(list(basis) + extra)


def is_ideal(algebra: FiniteAlgebra, basis):
    basis = row_space_basis(basis)
    for v in basis:
        for i in range(algebra.rank):
            if not in_span(basis, algebra.mul_vec(v, unit_vec(algebra.ring, algebra.rank, i))):
                return False
    return True


@dataclass(frozen=True)
class Quotient:
    algebra: FiniteAlgebra
    projection: AlgebraMorphism
    section: tuple  # lift of each quotient basis element to the source


def quotient_algebra(algebra: FiniteAlgebra, ideal_basis) -> Quotient:
    """Quotient by an ideal, with induced structure constants and a verified
    projection morphism.  The unit ideal yields the rank-zero algebra, which
    is flagged via `is_zero` rather than silently misused."""
    basis = row_space_basis(ideal_basis)
    if not is_ideal(algebra, basis):
        raise ValueError("given subspace is not an ideal")
    ring = algebra.ring
    n = algebra.rank
    pivots = []
    for row in basis:
        pivots.append(next(i for i, x in enumerate(row) if not x.is_zero))
    complement = [j for j in range(n) if j not in pivots]

    def project(v):
        reduced = reduce_against(basis, v)
        return tuple(reduced[j] for j in complement)

    q_names = [algebra.basis_names[j] for j in complement]
    q_mul = [[project(algebra.mul[complement[a]][complement[b]])
              for b in range(len(complement))] for a in range(len(complement))]
    q_one = project(algebra.one)
    pres = None
    quotient = FiniteAlgebra(ring, q_names, q_mul, q_one, presentation=pres)
    if quotient.is_zero:
        proj = AlgebraMorphism(algebra, quotient, [()] * n, _check=False)
    else:
        proj = AlgebraMorphism(algebra, quotient, [project(unit_vec(ring, n, j)) for j in range(n)])
    section = tuple(unit_vec(ring, n, j) for j in complement)
    return Quotient(quotient, proj, section)


# ---------------------------------------------------------------------------
# Classical characteristic polynomial (the oracle side)

def classical_charpoly(rows):
    """Coefficients of det(tI - M) for a square matrix M, monic of degree n.
    Exact in any characteristic (no Faddeev-LeVerrier division by integers)."""
    n = len(rows)
    ring = rows[0][0].ring if n else QQ
    t = MultiPoly.variable(ring, 1, 0)
    poly_rows = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = MultiPoly.constant(ring, 1, -rows[i][j])
            if i == j:
                entry = entry + t
            row.append(entry)
        poly_rows.append(tuple(row))
    if n == 0:
        return [ring.one]
    d = det(poly_rows)
    return [d.coefficient((k,)) for k in range(n + 1)]
