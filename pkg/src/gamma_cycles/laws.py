"""Degree-homogeneous polynomial laws on finite algebras.

A degree-d law is stored extensionally: a row vector of coefficients on the
weight-d divided monomial basis of the carrier.  Evaluation at an element
with polynomial coordinates recovers the law's value over any coefficient
extension, which is what every symbolic check in this package runs on.
"""

from __future__ import annotations

from .exact_algebra import FiniteAlgebra, MultiPoly, Scalar
from .gamma import (GammaElement, gamma_unit, internal_product, multi_indices)


class PolyLaw:
    """A degree-d homogeneous polynomial law on a finite algebra, given by
    its coefficient functional on divided monomials."""

    def __init__(self, degree: int, carrier: FiniteAlgebra, psi,
                 known_multiplicative=None):
        if degree < 0:
            raise ValueError("law degree must be nonnegative")
        if carrier.is_zero and degree > 0:
            raise ValueError("positive-degree laws on the zero algebra are vacuous")
        self.degree = degree
        self.carrier = carrier
        self.indices = multi_indices(carrier.rank, degree)
        if isinstance(psi, dict):
            row = [carrier.ring.scalar(psi.get(a, 0)) for a in self.indices]
            unknown = set(psi) - set(self.indices)
            if unknown:
                raise ValueError(f"coefficients on foreign multi-indices {sorted(unknown)}")
        else:
            row = [carrier.ring.scalar(c) for c in psi]
            if len(row) != len(self.indices):
                raise ValueError("psi row has the wrong length")
        self.psi = tuple(row)
        self._index_of = {a: i for i, a in enumerate(self.indices)}
        self._multiplicative = known_multiplicative

    @property
    def ring(self):
        return self.carrier.ring

    def psi_of(self, alpha):
        return self.psi[self._index_of[tuple(alpha)]]

    def apply_gamma(self, u: GammaElement) -> Scalar:
        """Apply the coefficient functional to a divided power element."""
        if u.rank != self.carrier.rank or u.degree != self.degree:
            raise ValueError("element does not match the law's carrier or degree")
        total = self.ring.zero
        for a, c in u.terms.items():
            total = total + c * self.psi[self._index_of[a]]
        return total

    def evaluate(self, coords):
        """Value at an element of the carrier, or of the carrier extended by
        auxiliary polynomial variables when the coordinates are MultiPolys."""
        coords = tuple(coords)
        if len(coords) != self.carrier.rank:
            raise ValueError("coordinate vector has the wrong length")
        symbolic = any(isinstance(c, MultiPoly) for c in coords)
        if symbolic:
            nvars = next(c.nvars for c in coords if isinstance(c, MultiPoly))
            coords = tuple(c if isinstance(c, MultiPoly)
                           else MultiPoly.constant(self.ring, nvars, c)
                           for c in coords)
            total = MultiPoly(self.ring, nvars, {})
        else:
            total = self.ring.zero
        powers = [{0: (coords[i].one_like() if symbolic else self.ring.one)}
                  for i in range(len(coords))]

        def power(i, k):
            if k not in powers[i]:
                powers[i][k] = power(i, k - 1) * coords[i]
            return powers[i][k]

        for alpha, c in zip(self.indices, self.psi):
            if c.is_zero:
                continue
            term = c if not symbolic else MultiPoly.constant(self.ring, coords[0].nvars, c)
            for i, a in enumerate(alpha):
                if a:
                    term = term * power(i, a)
            total = total + term
        return total

    def evaluate_generic(self, nvars=None, offset=0) -> MultiPoly:
        return self.evaluate(self.carrier.generic_element(nvars, offset))

    def __eq__(self, other):
        if not isinstance(other, PolyLaw):
            return NotImplemented
        return (self.degree == other.degree
                and self.carrier.structural_eq(other.carrier)
                and self.psi == other.psi)

    def __repr__(self):
        return f"PolyLaw(degree {self.degree} on {self.carrier!r})"


def law_from_evaluator(carrier: FiniteAlgebra, degree: int, evaluator) -> PolyLaw:
    """Extract the coefficient functional of a law from one generic
    evaluation.

    The evaluator receives the coordinates of the generic element
    sum_i t_i e_i (MultiPolys in rank-many variables) and must return a
    homogeneous degree-d polynomial; anything else is rejected, which is the
    one place where non-laws are quarantined.
    """
    if carrier.is_zero:
        if degree > 0:
            raise ValueError("positive-degree laws on the zero algebra are vacuous")
        value = evaluator(())
        if isinstance(value, MultiPoly):
            value = value.constant_term()
        return PolyLaw(0, carrier, (value,))
    generic = carrier.generic_element()
    value = evaluator(generic)
    if not isinstance(value, MultiPoly):
        value = MultiPoly.constant(carrier.ring, carrier.rank, value)
    if not value.is_homogeneous(degree):
        raise ValueError(f"evaluation is not homogeneous of degree {degree}: {value}")
    psi = {alpha: value.coefficient(alpha) for alpha in multi_indices(carrier.rank, degree)}
    stray = set(value.terms) - set(psi)
    if stray:
        raise ValueError(f"evaluation has terms outside weight {degree}: {sorted(stray)}")
    return PolyLaw(degree, carrier, psi)


def is_multiplicative(law: PolyLaw, cache=None) -> bool:
    """Whether the law's functional turns the internal product into
    multiplication and sends gamma^d of the unit to 1.

    The check runs over all pairs of basis divided monomials.  Results are
    cached on the law; constructors whose output is multiplicative for
    structural reasons preseed that cache.
    """
    if law._multiplicative is not None:
        return law._multiplicative
    result = _is_multiplicative_nocache(law, cache)
    law._multiplicative = result
    return result


def _is_multiplicative_nocache(law: PolyLaw, cache=None) -> bool:
    B = law.carrier
    if B.is_zero:
        return law.psi[0] == law.ring.one
    unit = gamma_unit(B, law.degree)
    if law.apply_gamma(unit) != law.ring.one:
        return False
    if cache is None:
        cache = {}
    basis = [GammaElement.basis(law.ring, a) for a in law.indices]
    for i, u in enumerate(basis):
        pu = law.psi[i]
        for j in range(i, len(basis)):
            v = basis[j]
            lhs = law.apply_gamma(internal_product(u, v, B, cache))
            if lhs != pu * law.psi[j]:
                return False
    return True


def law_from_homs(homs) -> PolyLaw:
    """Product of finitely many algebra morphisms to the base, as a law of
    degree the number of factors."""
    homs = list(homs)
    if not homs:
        raise ValueError("need at least one morphism")
    carrier = homs[0].source
    for h in homs:
        if h.target.rank != 1:
            raise ValueError("each factor must map to the base")
        if not h.source.structural_eq(carrier):
            raise ValueError("factors have different sources")

    def evaluator(coords):
        total = None
        for h in homs:
            value = h.apply_poly(coords)[0]
            total = value if total is None else total * value
        return total

    law = law_from_evaluator(carrier, len(homs), evaluator)
    law._multiplicative = True
    return law


def determinant_law(carrier: FiniteAlgebra) -> PolyLaw:
    """Determinant of multiplication: the norm law of a finite free algebra,
    of degree equal to the rank."""
    if carrier.is_zero:
        return PolyLaw(0, carrier, (carrier.ring.one,), known_multiplicative=True)

    def evaluator(coords):
        return carrier.norm_of_poly(coords)

    law = law_from_evaluator(carrier, carrier.rank, evaluator)
    law._multiplicative = True
    return law


def constant_law(carrier: FiniteAlgebra) -> PolyLaw:
    """The unique multiplicative degree-0 law, constant 1."""
    return PolyLaw(0, carrier, (carrier.ring.one,), known_multiplicative=True)


def scale_law(law: PolyLaw, c) -> PolyLaw:
    """Rescale the coefficient functional (generally destroys
    multiplicativity; used by tests and mutation checks)."""
    c = law.ring.scalar(c)
    return PolyLaw(law.degree, law.carrier, tuple(c * x for x in law.psi))
