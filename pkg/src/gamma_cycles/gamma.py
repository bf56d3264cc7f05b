"""Divided powers of free modules, with independent symmetric-tensor oracles.

The weight-d divided power module of a free module with basis e_1..e_n has a
basis of divided monomials indexed by multi-indices of weight d.  The product
formulas implemented here (binomial rule for the external product, matrix
enumeration for the internal one) are cross-checked against a completely
separate model, symmetric tensors inside the d-fold tensor power, where the
products are a shuffle and a slotwise multiplication.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations

from .exact_algebra import FiniteAlgebra, MultiPoly, Ring, Scalar


@lru_cache(maxsize=None)
def multi_indices(rank: int, degree: int):
    """All weight-`degree` multi-indices of length `rank`, ascending lex."""
    if rank == 0:
        return ((),) if degree == 0 else ()
    out = []

    def fill(prefix, remaining):
        if len(prefix) == rank - 1:
            out.append(prefix + (remaining,))
            return
        for a in range(remaining + 1):
            fill(prefix + (a,), remaining - a)

    fill((), degree)
    return tuple(out)


def gamma_dimension(rank: int, degree: int) -> int:
    return math.comb(rank + degree - 1, degree) if rank > 0 else (1 if degree == 0 else 0)


class GammaElement:
    """Element of the weight-d divided power module, sparse over the divided
    monomial basis."""

    __slots__ = ("ring", "rank", "degree", "terms")

    def __init__(self, ring: Ring, rank: int, degree: int, terms=None):
        clean = {}
        for alpha, c in (terms or {}).items():
            c = ring.scalar(c)
            alpha = tuple(alpha)
            if len(alpha) != rank or any(a < 0 for a in alpha) or sum(alpha) != degree:
                raise ValueError(f"bad multi-index {alpha} for rank {rank}, weight {degree}")
            if not c.is_zero:
                clean[alpha] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("GammaElement is immutable")

    @classmethod
    def zero(cls, ring, rank, degree):
        return cls(ring, rank, degree, {})

    @classmethod
    def basis(cls, ring, alpha):
        alpha = tuple(alpha)
        return cls(ring, len(alpha), sum(alpha), {alpha: ring.one})

    def _coerce(self, other):
        if not isinstance(other, GammaElement):
            raise TypeError("expected a GammaElement")
        if (other.ring, other.rank, other.degree) != (self.ring, self.rank, self.degree):
            raise ValueError("ring, rank or weight mismatch")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            s = terms.get(a, self.ring.zero) + c
            if s.is_zero:
                terms.pop(a, None)
            else:
                terms[a] = s
        return GammaElement(self.ring, self.rank, self.degree, terms)

    def __neg__(self):
        return GammaElement(self.ring, self.rank, self.degree,
                            {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def scale(self, c):
        c = self.ring.scalar(c)
        return GammaElement(self.ring, self.rank, self.degree,
                            {a: c * v for a, v in self.terms.items()})

    @property
    def is_zero(self):
        return not self.terms

    def coefficient(self, alpha):
        return self.terms.get(tuple(alpha), self.ring.zero)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, GammaElement):
            return NotImplemented
        return (self.ring, self.rank, self.degree, self.terms) == \
               (other.ring, other.rank, other.degree, other.terms)

    def __hash__(self):
        return hash((self.ring, self.rank, self.degree, tuple(self.sorted_terms())))

    def __repr__(self):
        if self.is_zero:
            return "Gamma(0)"
        body = " + ".join(f"{c}*g{list(a)}" for a, c in self.sorted_terms())
        return f"Gamma({body})"


def external_product(u: GammaElement, v: GammaElement) -> GammaElement:
    """Product of divided powers of a single module, raising the weight.

    On basis elements the coefficient is the product over coordinates of
    binomial(a_i + b_i, a_i); the integer binomial is mapped into the base
    ring, so the rule is meaningful in any characteristic.
    """
    if (u.ring, u.rank) != (v.ring, v.rank):
        raise ValueError("ring or rank mismatch")
    ring = u.ring
    out = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            coef = 1
            for x, y in zip(a, b):
                coef *= math.comb(x + y, x)
            c = ca * cb * ring.scalar(coef)
            if c.is_zero:
                continue
            s = tuple(x + y for x, y in zip(a, b))
            prev = out.get(s)
            total = c if prev is None else prev + c
            if total.is_zero:
                out.pop(s, None)
            else:
                out[s] = total
    return GammaElement(ring, u.rank, u.degree + v.degree, out)


def gamma_of_vector(coords, degree: int) -> GammaElement:
    """Divided power of an actual module element: gamma^d(sum c_i e_i) expands
    over weight-d multi-indices with coefficient prod c_i^{a_i}."""
    coords = tuple(coords)
    if not coords:
        raise ValueError("empty coordinate vector")
    ring = coords[0].ring
    terms = {}
    for alpha in multi_indices(len(coords), degree):
        c = ring.one
        ok = True
        for x, a in zip(coords, alpha):
            if a == 0:
                continue
            if x.is_zero:
                ok = False
                break
            c = c * x ** a
        if ok and not c.is_zero:
            terms[alpha] = c
    return GammaElement(ring, len(coords), degree, terms)


def gamma_unit(algebra: FiniteAlgebra, degree: int) -> GammaElement:
    """gamma^d of the algebra unit, the multiplicative unit for the internal
    product."""
    return gamma_of_vector(algebra.one, degree)


def contingency_tables(row_sums, col_sums):
    """All matrices with nonnegative integer entries and the given row and
    column sums, enumerated depth first with column-capacity pruning."""
    rows = tuple(row_sums)
    cols = tuple(col_sums)
    if sum(rows) != sum(cols):
        return
    n = len(cols)
    table = []

    def fill_row(i, remaining_cols):
        if i == len(rows):
            if all(c == 0 for c in remaining_cols):
                yield tuple(table)
            return
        target = rows[i]

        def compose(j, left, row):
            if j == n - 1:
                if left <= remaining_cols[j]:
                    yield row + (left,)
                return
            upper = min(left, remaining_cols[j])
            for a in range(upper + 1):
                yield from compose(j + 1, left - a, row + (a,))

        for row in compose(0, target, ()):
            table.append(row)
            nxt = tuple(c - r for c, r in zip(remaining_cols, row))
            yield from fill_row(i + 1, nxt)
            table.pop()

    yield from fill_row(0, cols)


def _basis_internal(algebra: FiniteAlgebra, alpha, beta, cache):
    """Internal product of two basis divided monomials of the same weight,
    over the algebra's multiplication: a sum over matrices with row sums
    alpha and column sums beta of external products of divided powers of the
    pairwise basis products."""
    key = (alpha, beta)
    if key in cache:
        return cache[key]
    ring = algebra.ring
    n = algebra.rank
    d = sum(alpha)
    total = GammaElement.zero(ring, n, d)
    for table in contingency_tables(alpha, beta):
        term = None
        for i in range(n):
            for j in range(n):
                c = table[i][j]
                if c == 0:
                    continue
                factor = gamma_of_vector(algebra.mul[i][j], c)
                term = factor if term is None else external_product(term, factor)
                if term.is_zero:
                    break
            if term is not None and term.is_zero:
                break
        if term is not None and term.is_zero:
            continue  # a pairwise product vanished in the algebra
        if term is None:
            term = GammaElement(ring, n, 0, {(0,) * n: ring.one})
        if term.degree != d:
            # only possible when d == 0; weights agree by construction
            raise AssertionError("internal product weight drift")
        total = total + term
    cache[key] = total
    return total


def internal_product(u: GammaElement, v: GammaElement, algebra: FiniteAlgebra,
                     cache=None) -> GammaElement:
    """Weight-preserving product on divided powers of an algebra, extended
    bilinearly from basis divided monomials.

    An optional cache (a plain dict) may be shared across calls by batch
    checkers; it only ever stores basis-pair products for this algebra.
    """
    if u.degree != v.degree:
        raise ValueError("internal product needs equal weights")
    if (u.ring, u.rank) != (v.ring, v.rank):
        raise ValueError("ring or rank mismatch")
    if u.rank != algebra.rank or u.ring != algebra.ring:
        raise ValueError("operands do not live over the given algebra")
    if cache is None:
        cache = {}
    total = GammaElement.zero(u.ring, u.rank, u.degree)
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            c = ca * cb
            if c.is_zero:
                continue
            total = total + _basis_internal(algebra, a, b, cache).scale(c)
    return total


# ---------------------------------------------------------------------------
# Symmetric tensor oracle

def _sorted_word(word):
    return tuple(sorted(word))


def _distinct_permutations(word):
    """All distinct permutations of a sorted tuple, in ascending order."""
    word = list(word)
    n = len(word)
    if n == 0:
        yield ()
        return
    while True:
        yield tuple(word)
        i = n - 2
        while i >= 0 and word[i] >= word[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while word[j] <= word[i]:
            j -= 1
        word[i], word[j] = word[j], word[i]
        word[i + 1:] = reversed(word[i + 1:])


class SymTensor:
    """Symmetric tensor of order d over a rank-n module, stored on the full
    tensor word basis.  Symmetry (equal coefficients across each permutation
    orbit, with complete orbits) is validated at construction."""

    __slots__ = ("ring", "rank", "degree", "coeffs")

    def __init__(self, ring: Ring, rank: int, degree: int, coeffs=None):
        clean = {}
        for word, c in (coeffs or {}).items():
            c = ring.scalar(c)
            word = tuple(word)
            if len(word) != degree or any(not (0 <= w < rank) for w in word):
                raise ValueError(f"bad tensor word {word}")
            if not c.is_zero:
                clean[word] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", clean)
        self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("SymTensor is immutable")

    def _validate(self):
        for word, c in self.coeffs.items():
            canon = _sorted_word(word)
            for perm in _distinct_permutations(canon):
                if self.coeffs.get(perm, self.ring.zero) != c:
                    raise ValueError(f"tensor not symmetric near word {word}")

    @classmethod
    def zero(cls, ring, rank, degree):
        return cls(ring, rank, degree, {})

    def __add__(self, other):
        if (other.ring, other.rank, other.degree) != (self.ring, self.rank, self.degree):
            raise ValueError("shape mismatch")
        coeffs = dict(self.coeffs)
        for w, c in other.coeffs.items():
            s = coeffs.get(w, self.ring.zero) + c
            if s.is_zero:
                coeffs.pop(w, None)
            else:
                coeffs[w] = s
        return SymTensor(self.ring, self.rank, self.degree, coeffs)

    def scale(self, c):
        c = self.ring.scalar(c)
        return SymTensor(self.ring, self.rank, self.degree,
                         {w: c * v for w, v in self.coeffs.items()})

    @property
    def is_zero(self):
        return not self.coeffs

    def coefficient(self, word):
        return self.coeffs.get(tuple(word), self.ring.zero)

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (self.ring, self.rank, self.degree, self.coeffs) == \
               (other.ring, other.rank, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.ring, self.rank, self.degree, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        body = " + ".join(f"{c}*w{list(w)}" for w, c in sorted(self.coeffs.items()))
        return f"SymTensor({body or '0'})"


def to_sym_tensor(u: GammaElement) -> SymTensor:
    """Embed a divided power element into symmetric tensors: each divided
    monomial maps to the sum of the distinct permutations of its word."""
    coeffs = {}
    for alpha, c in u.terms.items():
        word = []
        for i, a in enumerate(alpha):
            word.extend([i] * a)
        for perm in _distinct_permutations(tuple(word)):
            prev = coeffs.get(perm)
            coeffs[perm] = c if prev is None else prev + c
    return SymTensor(u.ring, u.rank, u.degree, coeffs)


def from_sym_tensor(t: SymTensor) -> GammaElement:
    """Inverse of to_sym_tensor: read the coefficient at each sorted word."""
    terms = {}
    for word, c in t.coeffs.items():
        if word != _sorted_word(word):
            continue
        alpha = [0] * t.rank
        for w in word:
            alpha[w] += 1
        terms[tuple(alpha)] = c
    return GammaElement(t.ring, t.rank, t.degree, terms)


def shuffle_product(s: SymTensor, t: SymTensor) -> SymTensor:
    """Shuffle of symmetric tensors: distribute the two words over every
    choice of slot positions.  This is the oracle for the external product
    and never consults the divided power formulas."""
    if (s.ring, s.rank) != (t.ring, t.rank):
        raise ValueError("shape mismatch")
    d, e = s.degree, t.degree
    out = {}
    for w1, c1 in s.coeffs.items():
        for w2, c2 in t.coeffs.items():
            c = c1 * c2
            for positions in combinations(range(d + e), d):
                word = [None] * (d + e)
                it1 = iter(w1)
                for p in positions:
                    word[p] = next(it1)
                it2 = iter(w2)
                for q in range(d + e):
                    if word[q] is None:
                        word[q] = next(it2)
                key = tuple(word)
                prev = out.get(key)
                total = c if prev is None else prev + c
                if total.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = total
    return SymTensor(s.ring, s.rank, d + e, out)


def slotwise_product(s: SymTensor, t: SymTensor, algebra: FiniteAlgebra) -> SymTensor:
    """Multiply two order-d symmetric tensors slot by slot inside the d-fold
    tensor power of the algebra.  This is the oracle for the internal
    product and never consults the divided power formulas."""
    if s.degree != t.degree:
        raise ValueError("slotwise product needs equal orders")
    if (s.ring, s.rank) != (t.ring, t.rank) or s.rank != algebra.rank:
        raise ValueError("shape mismatch")
    ring = s.ring
    d = s.degree
    out = {}
    for w1, c1 in s.coeffs.items():
        for w2, c2 in t.coeffs.items():
            base = c1 * c2
            supports = []
            for k in range(d):
                col = algebra.mul[w1[k]][w2[k]]
                supports.append([(i, c) for i, c in enumerate(col) if not c.is_zero])
            def spread(k, coef, word):
                if k == d:
                    prev = out.get(word)
                    total = coef if prev is None else prev + coef
                    if total.is_zero:
                        out.pop(word, None)
                    else:
                        out[word] = total
                    return
                for i, c in supports[k]:
                    spread(k + 1, coef * c, word + (i,))
            spread(0, base, ())
    return SymTensor(ring, s.rank, d, out)


def sym_oracle_product(s: SymTensor, t: SymTensor, mode: str,
                       algebra: FiniteAlgebra | None = None) -> SymTensor:
    """Dispatcher for the two oracle products."""
    if mode == "external":
        return shuffle_product(s, t)
    if mode == "internal":
        if algebra is None:
            raise ValueError("internal oracle needs the algebra")
        return slotwise_product(s, t, algebra)
    raise ValueError(f"unknown mode {mode!r}")


def gamma_basis_elements(ring: Ring, rank: int, degree: int):
    """The divided monomial basis in canonical (ascending lex) order."""
    return [GammaElement.basis(ring, a) for a in multi_indices(rank, degree)]
