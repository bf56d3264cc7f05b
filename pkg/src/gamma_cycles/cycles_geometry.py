"""Zero-dimensional cycles and the geometry of their norm laws.

A cycle is a finite weighted set of closed points of an affine carrier: its
law multiplies residue-field norms, its trace adds residue-field traces.
This module builds both, cuts laws down to canonical finite carriers via the
Cayley-Hamilton ideal, forms sums and direct images, and decides equivalence
of carrier/law pairs over a shared ambient algebra.  The line-bundle side
lives here too: norms of free rank-d modules as top exterior determinants,
Cech transition data and its norm cocycle, and the reconstruction of a law
from its norm functor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_algebra import (AlgebraMorphism, FiniteAlgebra, MultiPoly, Ring,
                            Scalar, det, in_span, poly_degree, poly_derivative,
                            poly_eval, poly_gcd, poly_lcm, poly_monic,
                            poly_trim, quotient_algebra, reduce_against,
                            row_space_basis, solve_linear, unit_vec, vec,
                            zero_vec)
from .laws import PolyLaw, law_from_evaluator
from .trace_norm import TraceMap, cayley_hamilton_reduce


# ---------------------------------------------------------------------------
# Ambient descriptors and residue-field screens

@dataclass(frozen=True)
class PolynomialAmbient:
    """A polynomial coordinate ring over the base field, named by its
    variables.  Elements are sparse exponent-tuple maps; the ring itself is
    never materialized."""

    ring: Ring
    var_names: tuple

    def __post_init__(self):
        object.__setattr__(self, "var_names", tuple(self.var_names))
        if not self.var_names:
            raise ValueError("polynomial ambient needs at least one variable")
        if len(set(self.var_names)) != len(self.var_names):
            raise ValueError("duplicate ambient variable names")

    @property
    def nvars(self):
        return len(self.var_names)

    @property
    def univariate(self):
        return self.nvars == 1

    def __str__(self):
        return f"{self.ring}[{','.join(self.var_names)}]"


def _divisors(m):
    m = abs(m)
    out = {1, m} if m else {1}
    i = 2
    while i * i <= m and i <= 10 ** 6:
        if m % i == 0:
            out.add(i)
            out.add(m // i)
        i += 1
    return sorted(out)


def _rational_root_candidates(coeffs):
    # p/q with p dividing the constant and q the leading integer coefficient,
    # after clearing denominators
    den = 1
    for c in coeffs:
        den = den * c.value.denominator // _gcd(den, c.value.denominator)
    ints = [int(c.value * den) for c in coeffs]
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            yield Fraction(p, q)
            yield Fraction(-p, q)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def minpoly_screen_irreducible(ring: Ring, coeffs) -> bool:
    """Cheap necessary tests for irreducibility of a monic defining
    polynomial: a nontrivial gcd with the derivative or a base-field root
    disqualifies it.

    Conclusive up to degree 3 (over Q, and over prime fields small enough
    for the exhaustive root pass); beyond that a pass is only a screen, and
    a slipped-through reducible polynomial surfaces as a zero divisor later.
    """
    coeffs = poly_trim([ring.scalar(c) for c in coeffs])
    degree = poly_degree(coeffs)
    if degree < 1:
        return False
    if degree == 1:
        return True
    if coeffs[0].is_zero:
        return False
    if poly_degree(poly_gcd(coeffs, poly_derivative(coeffs))) > 0:
        return False
    if ring.p is None:
        for r in _rational_root_candidates(coeffs):
            if poly_eval(coeffs, ring.scalar(r)).is_zero:
                return False
    elif ring.p <= 199:
        for r in range(ring.p):
            if poly_eval(coeffs, ring.scalar(r)).is_zero:
                return False
    return True


def validate_residue_field(field: FiniteAlgebra):
    """Zero-divisor screens for an algebra claimed to be a field.

    Checked symbolically on a spanning set: the generic multiplication
    matrix must have nonzero determinant and every basis element must be
    invertible; a univariate presentation additionally runs the minimal
    polynomial screen.
    """
    if field.is_zero:
        raise ValueError("the zero algebra is not a field")
    pres = field.presentation
    if pres is not None and pres.get("kind") == "univariate":
        if not minpoly_screen_irreducible(field.ring, pres["minpoly"]):
            raise ValueError("defining polynomial has a root or repeated "
                             "factor; residue ring is not a field")
    if field.norm_of_poly(field.generic_element()).is_zero:
        raise ValueError("generic multiplication is singular; not a field")
    for i, name in enumerate(field.basis_names):
        if not field.is_invertible(unit_vec(field.ring, field.rank, i)):
            raise ValueError(f"basis element {name!r} is a zero divisor")


def _closure_spans(algebra: FiniteAlgebra, vectors) -> bool:
    """Whether the unital subalgebra generated by the vectors is everything."""
    span = row_space_basis([algebra.one] + list(vectors))
    while True:
        extra = []
        for u in span:
            for v in span:
                w = algebra.mul_vec(u, v)
                if not in_span(span, w):
                    extra.append(w)
        if not extra:
            return len(span) == algebra.rank
        span = row_space_basis(list(span) + extra)


# ---------------------------------------------------------------------------
# Closed points

class Point:
    """A closed point: a residue field together with evaluation data.

    On a finite ambient algebra the evaluation is an AlgebraMorphism onto
    the residue field.  On a polynomial ambient it is the tuple of images of
    the ambient variables, and evaluation of a sparse polynomial is monomial
    substitution in the residue field.  Either way the images must generate
    the residue field, so that the point is genuinely closed with that
    residue field and not a smaller one presented wastefully.
    """

    def __init__(self, residue_field: FiniteAlgebra, evaluation=None,
                 var_images=None):
        validate_residue_field(residue_field)
        self.residue_field = residue_field
        if (evaluation is None) == (var_images is None):
            raise ValueError("give exactly one of evaluation and var_images")
        self.evaluation = evaluation
        self.var_images = None
        if evaluation is not None:
            if not evaluation.target.structural_eq(residue_field):
                raise ValueError("evaluation does not land in the residue field")
            if not evaluation.is_surjective():
                raise ValueError("evaluation does not generate the residue field")
        else:
            images = tuple(vec(residue_field.ring, v) for v in var_images)
            if any(len(v) != residue_field.rank for v in images):
                raise ValueError("variable image has the wrong length")
            if not _closure_spans(residue_field, images):
                raise ValueError("variable images do not generate the residue field")
            self.var_images = images
        self._monomials = {}

    @property
    def degree(self):
        return self.residue_field.rank

    @classmethod
    def rational(cls, ring: Ring, values):
        """A point with residue field the base, at the given coordinates."""
        field = FiniteAlgebra.base(ring)
        return cls(field, var_images=[(ring.scalar(v),) for v in values])

    @classmethod
    def algebraic(cls, ring: Ring, minpoly, images, var="z"):
        """A point whose residue field is presented by a primitive element
        with the given minimal polynomial; each variable image is a
        coefficient list in powers of that element."""
        field = FiniteAlgebra.quotient_polynomial(ring, minpoly, var=var)
        padded = []
        for image in images:
            image = list(image)
            if len(image) > field.rank:
                raise ValueError("image has more coefficients than the field has rank")
            padded.append(image + [0] * (field.rank - len(image)))
        return cls(field, var_images=padded)

    def monomial_value(self, exps):
        if exps not in self._monomials:
            F = self.residue_field
            value = F.one
            for image, e in zip(self.var_images, exps, strict=True):
                if e:
                    value = F.mul_vec(value, F.pow_vec(image, e))
            self._monomials[exps] = value
        return self._monomials[exps]

    def evaluate_terms(self, terms):
        """Value in the residue field of a sparse ambient polynomial, given
        as a map from exponent tuples to Scalar or MultiPoly coefficients."""
        F = self.residue_field
        items = [(e, c) for e, c in terms.items() if not c.is_zero]
        symbolic = any(isinstance(c, MultiPoly) for _, c in items)
        if symbolic:
            zero = next(c for _, c in items if isinstance(c, MultiPoly)).zero_like()
        else:
            zero = F.ring.zero
        out = [zero] * F.rank
        for exps, coeff in sorted(items, key=lambda t: t[0]):
            mono = self.monomial_value(exps)
            for k, m in enumerate(mono):
                if not m.is_zero:
                    out[k] = out[k] + coeff * m
        return tuple(out)

    def __repr__(self):
        kind = "morphism" if self.evaluation is not None else "substitution"
        return f"Point(degree {self.degree}, by {kind})"


# ---------------------------------------------------------------------------
# Cycles, their laws and traces

class Cycle:
    """A formal non-negative combination of closed points of one ambient."""

    def __init__(self, ambient, points):
        self.ambient = ambient
        self.points = tuple((p, int(m)) for p, m in points)
        for p, m in self.points:
            if m < 1:
                raise ValueError("multiplicities must be positive")
            if isinstance(ambient, PolynomialAmbient):
                if p.var_images is None:
                    raise ValueError("point on a polynomial ambient needs variable images")
                if len(p.var_images) != ambient.nvars:
                    raise ValueError("point has the wrong number of variable images")
                if p.residue_field.ring != ambient.ring:
                    raise ValueError("point and ambient disagree on the base ring")
            else:
                if p.evaluation is None:
                    raise ValueError("point on a finite ambient needs an evaluation morphism")
                if not p.evaluation.source.structural_eq(ambient):
                    raise ValueError("point does not evaluate this ambient algebra")

    @property
    def ring(self):
        return self.ambient.ring

    @property
    def degree(self):
        return sum(m * p.degree for p, m in self.points)

    def __repr__(self):
        support = " + ".join(f"{m}*[deg {p.degree}]" for p, m in self.points)
        return f"Cycle({support or 'empty'} on {self.ambient})"


def _field_norm(field: FiniteAlgebra, value):
    if any(isinstance(c, MultiPoly) for c in value):
        return field.norm_of_poly(value)
    return field.norm_of(value)


class CycleLaw:
    """The product-of-residue-norms law of a cycle.

    Always evaluable, at elements with plain or polynomial coefficients; an
    extensional PolyLaw additionally exists when the ambient is a finite
    algebra, and is extracted lazily by generic evaluation.
    """

    def __init__(self, cycle: Cycle):
        self.cycle = cycle
        self.degree = cycle.degree
        self._poly_law = None

    @property
    def ring(self):
        return self.cycle.ring

    def evaluate(self, coords):
        """Value at an element of a finite ambient algebra."""
        if isinstance(self.cycle.ambient, PolynomialAmbient):
            raise ValueError("polynomial ambient: evaluate sparse terms instead")
        total = None
        for p, m in self.cycle.points:
            symbolic = any(isinstance(c, MultiPoly) for c in coords)
            image = (p.evaluation.apply_poly(coords) if symbolic
                     else p.evaluation.apply(coords))
            factor = _field_norm(p.residue_field, image) ** m
            total = factor if total is None else total * factor
        return self.ring.one if total is None else total

    def evaluate_terms(self, terms):
        """Value at a sparse polynomial of a polynomial ambient."""
        if not isinstance(self.cycle.ambient, PolynomialAmbient):
            raise ValueError("finite ambient: evaluate coordinates instead")
        total = None
        for p, m in self.cycle.points:
            factor = _field_norm(p.residue_field, p.evaluate_terms(terms)) ** m
            total = factor if total is None else total * factor
        return self.ring.one if total is None else total

    def to_poly_law(self) -> PolyLaw:
        if isinstance(self.cycle.ambient, PolynomialAmbient):
            raise ValueError("laws on polynomial ambients are not finite rows; "
                             "reduce the cycle first")
        if self._poly_law is None:
            law = law_from_evaluator(self.cycle.ambient, self.degree, self.evaluate)
            # a product of residue norms is multiplicative factor by factor
            law._multiplicative = True
            self._poly_law = law
        return self._poly_law


def cycle_law(cycle: Cycle) -> CycleLaw:
    return CycleLaw(cycle)


def cycle_trace(cycle: Cycle) -> TraceMap:
    """The weighted sum of residue traces, as a functional on the finite
    ambient, or on the reduced carrier when the ambient is polynomial."""
    if isinstance(cycle.ambient, PolynomialAmbient):
        if not cycle.ambient.univariate:
            raise ValueError("traces on multivariate ambients are not materialized")
        pair = reduce_cycle(cycle)
        carrier = pair.carrier
        row = []
        for k in range(carrier.rank):
            total = cycle.ring.zero
            for p, m in cycle.points:
                F = p.residue_field
                value = F.pow_vec(p.var_images[0], k)
                total = total + cycle.ring.scalar(m) * F.trace_of(value)
            row.append(total)
        return TraceMap(carrier, cycle.degree, row, claimed=True)
    ambient = cycle.ambient
    row = []
    for j in range(ambient.rank):
        basis = unit_vec(cycle.ring, ambient.rank, j)
        total = cycle.ring.zero
        for p, m in cycle.points:
            value = p.evaluation.apply(basis)
            total = total + cycle.ring.scalar(m) * p.residue_field.trace_of(value)
        row.append(total)
    return TraceMap(ambient, cycle.degree, row, claimed=True)


# ---------------------------------------------------------------------------
# Carrier/law pairs and canonical reduction

class CyclePair:
    """A finite carrier cut out of an ambient, with a multiplicative law on
    it.  Finite ambients record the quotient projection; univariate
    polynomial ambients record the monic generator of the carrier ideal."""

    def __init__(self, ambient, carrier: FiniteAlgebra, law: PolyLaw,
                 projection=None, generator=None):
        self.ambient = ambient
        self.carrier = carrier
        self.law = law
        self.projection = projection
        self.generator = None
        if not law.carrier.structural_eq(carrier):
            raise ValueError("law does not live on the carrier")
        if isinstance(ambient, PolynomialAmbient):
            if not ambient.univariate:
                raise ValueError("pairs over multivariate ambients are not supported")
            if generator is None:
                raise ValueError("polynomial ambient needs the carrier's generator")
            gen = tuple(poly_trim([ambient.ring.scalar(c) for c in generator]))
            if not gen or gen[-1] != ambient.ring.one:
                raise ValueError("generator must be monic")
            if len(gen) == 1:
                if not carrier.is_zero:
                    raise ValueError("unit generator needs the zero carrier")
            else:
                model = FiniteAlgebra.quotient_polynomial(
                    ambient.ring, gen, var=ambient.var_names[0])
                if not carrier.structural_eq(model):
                    raise ValueError("carrier is not the quotient by its generator")
            self.generator = gen
        else:
            if projection is None:
                raise ValueError("finite ambient needs the quotient projection")
            if not projection.source.structural_eq(ambient) or \
               not projection.target.structural_eq(carrier):
                raise ValueError("projection does not map ambient onto carrier")
            if not projection.is_surjective():
                raise ValueError("projection is not onto the carrier")

    @property
    def degree(self):
        return self.law.degree

    @property
    def ring(self):
        return self.law.ring

    def evaluate_poly(self, coeffs):
        """Value of the law on an ambient univariate polynomial, given by
        its coefficient list; entries may be Scalars or MultiPolys."""
        if self.generator is None:
            raise ValueError("evaluate_poly needs a univariate polynomial ambient")
        coeffs = [c if isinstance(c, MultiPoly) else self.ring.scalar(c)
                  for c in coeffs]
        if not coeffs:
            coeffs = [self.ring.zero]
        while len(coeffs) < len(self.generator) - 1:
            coeffs.append(coeffs[0].zero_like())
        coords = _reduce_univariate(coeffs, self.generator)
        return self.law.evaluate(coords)

    def __repr__(self):
        return f"CyclePair(degree {self.degree}, carrier rank {self.carrier.rank})"


def _zero_algebra(ring: Ring) -> FiniteAlgebra:
    return FiniteAlgebra(ring, (), (), ())


def empty_pair(ambient) -> CyclePair:
    """The unit for cycle sums: the degree-0 pair on the empty carrier."""
    if isinstance(ambient, PolynomialAmbient):
        ring = ambient.ring
        carrier = _zero_algebra(ring)
        law = PolyLaw(0, carrier, (ring.one,), known_multiplicative=True)
        return CyclePair(ambient, carrier, law, generator=(ring.one,))
    ring = ambient.ring
    carrier = _zero_algebra(ring)
    law = PolyLaw(0, carrier, (ring.one,), known_multiplicative=True)
    projection = AlgebraMorphism(ambient, carrier, [()] * ambient.rank)
    return CyclePair(ambient, carrier, law, projection=projection)


def hilbert_chow(algebra: FiniteAlgebra) -> CyclePair:
    """The pair of a finite free algebra with its own determinant law: rank
    becomes degree, and the extracted trace is the matrix trace."""
    from .laws import determinant_law
    return CyclePair(algebra, algebra, determinant_law(algebra),
                     projection=AlgebraMorphism.identity(algebra))


def _reduce_univariate(coeffs, monic):
    """Remainder of a coefficient list modulo a monic Scalar polynomial.
    Coefficients may be symbolic; only multiplication by the monic's Scalar
    coefficients is used."""
    dn = len(monic) - 1
    out = list(coeffs)
    assert len(out) >= dn
    for k in range(len(out) - 1, dn - 1, -1):
        f = out[k]
        if f.is_zero:
            continue
        for j, c in enumerate(monic):
            if not c.is_zero:
                out[k - dn + j] = out[k - dn + j] - f * c
    return out[:dn]


def _canonical_generator_pair(ambient: PolynomialAmbient, carrier, law,
                              x_image) -> CyclePair:
    """Re-present a finite carrier generated by the coordinate's image as
    the quotient by the image's minimal polynomial, transporting the law."""
    ring = ambient.ring
    if carrier.is_zero:
        return empty_pair(ambient)
    powers = [carrier.one]
    while True:
        nxt = carrier.mul_vec(powers[-1], x_image)
        mat = tuple(tuple(powers[j][i] for j in range(len(powers)))
                    for i in range(carrier.rank))
        sol = solve_linear(mat, nxt)
        if sol.consistent:
            break
        powers.append(nxt)
    k = len(powers)
    # the ambient surjects through its one coordinate, so the image of x
    # must generate the whole carrier
    assert k == carrier.rank
    minpoly = [-c for c in sol.solution] + [ring.one]
    canonical = FiniteAlgebra.quotient_polynomial(ring, minpoly,
                                                  var=ambient.var_names[0])
    iso = AlgebraMorphism(canonical, carrier, powers)
    moved = law_from_evaluator(
        canonical, law.degree,
        lambda coords: law.evaluate(iso.apply_poly(coords)))
    moved._multiplicative = law._multiplicative
    return CyclePair(ambient, canonical, moved, generator=tuple(minpoly))


def reduce_pair(pair: CyclePair) -> CyclePair:
    """Cayley-Hamilton reduction of a pair, re-presented canonically: on a
    finite ambient the projection is composed through the quotient, on a
    univariate ambient the generator is recomputed as the minimal polynomial
    of the coordinate's image."""
    reduced = cayley_hamilton_reduce(pair.law)
    if isinstance(pair.ambient, PolynomialAmbient):
        if pair.carrier.is_zero:
            return pair
        if pair.carrier.rank >= 2:
            x_coords = unit_vec(pair.ring, pair.carrier.rank, 1)
        else:
            x_coords = (-pair.generator[0],)
        x_image = reduced.projection.apply(x_coords)
        return _canonical_generator_pair(pair.ambient, reduced.algebra,
                                         reduced.law, x_image)
    projection = reduced.projection.compose(pair.projection)
    return CyclePair(pair.ambient, reduced.algebra, reduced.law,
                     projection=projection)


def reduce_cycle(cycle: Cycle) -> CyclePair:
    """Canonical pair of a cycle on a univariate polynomial ambient.

    The principal pass quotients by the characteristic polynomial of the
    coordinate, which already has the right degree; a finite reduction pass
    follows in case the principal ideal was not the whole story, and an
    exact symbolic factorization check guards the first step.
    """
    ambient = cycle.ambient
    if not isinstance(ambient, PolynomialAmbient):
        raise ValueError("reduce_cycle expects a polynomial ambient; "
                         "use hilbert_chow / reduce_pair on finite ones")
    if not ambient.univariate:
        raise ValueError("multivariate cycle reduction is not supported")
    ring = ambient.ring
    if cycle.degree == 0:
        return empty_pair(ambient)
    law = cycle_law(cycle)
    d = cycle.degree
    t = MultiPoly.variable(ring, 1, 0)
    chi = law.evaluate_terms({(1,): MultiPoly.constant(ring, 1, ring.one),
                              (0,): -t})
    coeffs = poly_trim([chi.coefficient((k,)) for k in range(d + 1)])
    generator = poly_monic(coeffs)
    assert poly_degree(generator) == d
    carrier = FiniteAlgebra.quotient_polynomial(ring, generator,
                                                var=ambient.var_names[0])
    induced = law_from_evaluator(
        carrier, d,
        lambda coords: law.evaluate_terms({(k,): c for k, c in enumerate(coords)}))
    induced._multiplicative = True

    # the cycle law of a generic polynomial of degree rank+1 must agree with
    # the induced law at its remainder mod the generator, exactly
    width = carrier.rank + 2
    generic = [MultiPoly.variable(ring, width, k) for k in range(width)]
    direct = law.evaluate_terms({(k,): g for k, g in enumerate(generic)})
    folded = induced.evaluate(tuple(_reduce_univariate(generic, generator)))
    if direct != folded:
        raise ArithmeticError("cycle law does not factor through the "
                              "characteristic quotient")
    pair = CyclePair(ambient, carrier, induced, generator=tuple(generator))
    return reduce_pair(pair)


# ---------------------------------------------------------------------------
# Sums and direct images

def _subalgebra_from_span(algebra: FiniteAlgebra, vectors, prefix="u"):
    """The unital subalgebra spanned by the given vectors (assumed closed
    under products, as images of morphisms are), presented on an echelon
    basis.  Returns the subalgebra, its inclusion, and a coordinatizer."""
    if algebra.is_zero:
        identity = AlgebraMorphism.identity(algebra)
        return algebra, identity, lambda v: ()
    basis = row_space_basis(list(vectors) + [algebra.one])
    mat = tuple(tuple(basis[j][i] for j in range(len(basis)))
                for i in range(algebra.rank))

    def coordinatize(v):
        sol = solve_linear(mat, v)
        if not sol.consistent:
            raise ValueError("element lies outside the subalgebra")
        return sol.solution

    names = [f"{prefix}{k + 1}" for k in range(len(basis))]
    mul = [[coordinatize(algebra.mul_vec(a, b)) for b in basis] for a in basis]
    one = coordinatize(algebra.one)
    sub = FiniteAlgebra(algebra.ring, names, mul, one)
    inclusion = AlgebraMorphism(sub, algebra, basis)
    return sub, inclusion, coordinatize


def sum_cycles(pair1: CyclePair, pair2: CyclePair) -> CyclePair:
    """The union-of-carriers pair whose law is the product of the two laws;
    degrees add.  Both pairs must live on the same ambient."""
    a1, a2 = pair1.ambient, pair2.ambient
    if isinstance(a1, PolynomialAmbient) != isinstance(a2, PolynomialAmbient):
        raise ValueError("one ambient is polynomial, the other finite")
    ring = pair1.ring
    if isinstance(a1, PolynomialAmbient):
        if a1 != a2:
            raise ValueError(f"ambient mismatch: {a1} vs {a2}")
        g1, g2 = list(pair1.generator), list(pair2.generator)
        g = poly_monic(poly_lcm(g1, g2)) if poly_degree(g1) and poly_degree(g2) \
            else (g1 if poly_degree(g2) < 1 else g2)
        if poly_degree(g) < 1:
            return empty_pair(a1)
        carrier = FiniteAlgebra.quotient_polynomial(ring, g, var=a1.var_names[0])

        def evaluator(coords):
            v1 = pair1.law.evaluate(tuple(_reduce_univariate(list(coords), g1)))
            v2 = pair2.law.evaluate(tuple(_reduce_univariate(list(coords), g2)))
            return v1 * v2

        law = law_from_evaluator(carrier, pair1.degree + pair2.degree, evaluator)
        law._multiplicative = True
        return CyclePair(a1, carrier, law, generator=tuple(g))

    if not a1.structural_eq(a2):
        raise ValueError("ambient algebras differ")
    if pair1.carrier.is_zero and pair2.carrier.is_zero:
        return empty_pair(a1)
    product = FiniteAlgebra.product_algebra(pair1.carrier, pair2.carrier)
    columns = [tuple(c1) + tuple(c2)
               for c1, c2 in zip(pair1.projection.columns,
                                 pair2.projection.columns, strict=True)]
    union, inclusion, coordinatize = _subalgebra_from_span(product, columns)
    n1 = pair1.carrier.rank

    def evaluator(coords):
        lifted = inclusion.apply_poly(coords)
        v1 = pair1.law.evaluate(lifted[:n1])
        v2 = pair2.law.evaluate(lifted[n1:])
        return v1 * v2

    law = law_from_evaluator(union, pair1.degree + pair2.degree, evaluator)
    law._multiplicative = True
    projection = AlgebraMorphism(a1, union, [coordinatize(c) for c in columns])
    return CyclePair(a1, union, law, projection=projection)


def pushforward(pair: CyclePair, pullback: AlgebraMorphism) -> CyclePair:
    """Direct image of a pair along a map of finite ambients, given by the
    pullback morphism on coordinate algebras.  The law is precomposed, the
    carrier is the image subalgebra, and the result is reduced so that its
    presentation is canonical."""
    if isinstance(pair.ambient, PolynomialAmbient):
        raise ValueError("pushforward needs finite ambient algebras")
    if not pullback.target.structural_eq(pair.ambient):
        raise ValueError("pullback does not land in the pair's ambient")
    composed = pair.projection.compose(pullback)
    image, inclusion, coordinatize = _subalgebra_from_span(
        pair.carrier, composed.columns, prefix="w")

    def evaluator(coords):
        return pair.law.evaluate(inclusion.apply_poly(coords))

    law = law_from_evaluator(image, pair.degree, evaluator)
    law._multiplicative = pair.law._multiplicative
    projection = AlgebraMorphism(pullback.source, image,
                                 [coordinatize(c) for c in composed.columns])
    return reduce_pair(CyclePair(pullback.source, image, law,
                                 projection=projection))


# ---------------------------------------------------------------------------
# Equivalence of pairs

def canonical_pair(pair: CyclePair) -> CyclePair:
    """Reduce, then re-present the carrier canonically: as the quotient of
    the ambient by the kernel ideal (finite ambient) or by the recomputed
    monic generator (univariate ambient)."""
    reduced = reduce_pair(pair)
    if isinstance(pair.ambient, PolynomialAmbient):
        return reduced
    ambient = pair.ambient
    kernel = row_space_basis(reduced.projection.kernel_basis())
    quotient = quotient_algebra(ambient, kernel)

    def lift(coords):
        out = None
        for c, s in zip(coords, quotient.section, strict=True):
            term = tuple(c * x for x in s)
            out = term if out is None else tuple(a + b for a, b in
                                                 zip(out, term, strict=True))
        return out if out is not None else ()

    if quotient.algebra.is_zero:
        law = PolyLaw(0, quotient.algebra, (reduced.law.psi[0],),
                      known_multiplicative=reduced.law._multiplicative)
        return CyclePair(ambient, quotient.algebra, law,
                         projection=quotient.projection)

    def evaluator(coords):
        moved = reduced.projection.apply_poly(lift(coords))
        return reduced.law.evaluate(moved)

    law = law_from_evaluator(quotient.algebra, reduced.degree, evaluator)
    law._multiplicative = reduced.law._multiplicative
    return CyclePair(ambient, quotient.algebra, law,
                     projection=quotient.projection)


def pairs_equivalent(pair1: CyclePair, pair2: CyclePair) -> bool:
    """Whether two pairs over the same ambient have identical canonical
    representatives: equal carrier ideals and coefficientwise equal laws."""
    a1, a2 = pair1.ambient, pair2.ambient
    if isinstance(a1, PolynomialAmbient) != isinstance(a2, PolynomialAmbient):
        raise ValueError("pairs live over different kinds of ambient")
    if isinstance(a1, PolynomialAmbient):
        if a1 != a2:
            raise ValueError(f"ambient mismatch: {a1} vs {a2}")
    elif not a1.structural_eq(a2):
        raise ValueError("ambient algebras differ")
    if pair1.degree != pair2.degree:
        return False
    c1, c2 = canonical_pair(pair1), canonical_pair(pair2)
    if isinstance(a1, PolynomialAmbient):
        return c1.generator == c2.generator and c1.law.psi == c2.law.psi
    return c1.carrier.structural_eq(c2.carrier) and c1.law == c2.law


# ---------------------------------------------------------------------------
# Norms of modules: the top exterior determinant

def _mat_mul(a, b):
    n, m, k = len(a), len(b[0]) if b else 0, len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            total = None
            for s in range(k):
                term = a[i][s] * b[s][j]
                total = term if total is None else total + term
            row.append(total)
        out.append(tuple(row))
    return tuple(out)


def _mat_identity(ring, n):
    return tuple(unit_vec(ring, n, i) for i in range(n))


class BModule:
    """A module over a finite algebra, free over the base, with the action
    stored as one base-linear matrix per algebra basis element.  Unit and
    composition axioms are verified at construction; the generic action
    must be invertible, which screens out non-invertible modules."""

    def __init__(self, algebra: FiniteAlgebra, action, _check=True):
        self.algebra = algebra
        self.action = tuple(tuple(vec(algebra.ring, row) for row in m)
                            for m in action)
        if len(self.action) != algebra.rank:
            raise ValueError("need one action matrix per algebra basis element")
        ranks = {len(m) for m in self.action} | {len(r) for m in self.action for r in m}
        if len(ranks) > 1:
            raise ValueError("action matrices must be square of one size")
        if _check:
            self._validate()

    @property
    def ring(self):
        return self.algebra.ring

    @property
    def rank(self):
        return len(self.action[0]) if self.action else 0

    def _validate(self):
        if self.algebra.is_zero:
            return
        ring = self.ring
        n = self.rank
        if n != self.algebra.rank:
            raise ValueError("module is not free of the algebra's rank over "
                             "the base; not invertible")
        one_matrix = self.action_of(self.algebra.one)
        if one_matrix != _mat_identity(ring, n):
            raise ValueError("the unit does not act as the identity")
        for i in range(self.algebra.rank):
            for j in range(i, self.algebra.rank):
                composed = _mat_mul(self.action[i], self.action[j])
                expected = self.action_of(self.algebra.mul[i][j])
                if composed != expected:
                    raise ValueError(f"action not multiplicative at basis pair ({i},{j})")
        generic = [[MultiPoly(ring, self.algebra.rank, {})] * n for _ in range(n)]
        for k, m in enumerate(self.action):
            tk = MultiPoly.variable(ring, self.algebra.rank, k)
            for a in range(n):
                for b in range(n):
                    if not m[a][b].is_zero:
                        generic[a][b] = generic[a][b] + tk * m[a][b]
        if det(tuple(tuple(r) for r in generic)).is_zero:
            raise ValueError("generic action is singular; module is not invertible")

    def action_of(self, u):
        n = self.rank
        out = [[self.ring.zero] * n for _ in range(n)]
        for k, c in enumerate(u):
            if c.is_zero:
                continue
            m = self.action[k]
            for a in range(n):
                for b in range(n):
                    if not m[a][b].is_zero:
                        out[a][b] = out[a][b] + c * m[a][b]
        return tuple(tuple(r) for r in out)

    @classmethod
    def regular(cls, algebra: FiniteAlgebra):
        """The algebra as a module over itself."""
        action = [algebra.multiplication_matrix(unit_vec(algebra.ring,
                                                         algebra.rank, i))
                  for i in range(algebra.rank)]
        return cls(algebra, action)

    def rebased(self, change):
        """The same module written in a new base-module basis: rows of
        `change` are the new basis vectors in the old coordinates."""
        n = self.rank
        mat = tuple(tuple(change[j][i] for j in range(n)) for i in range(n))
        sol = solve_linear(mat, zero_vec(self.ring, n))
        if sol.kernel:
            raise ValueError("change of basis is singular")
        inverse_cols = []
        for i in range(n):
            inverse_cols.append(solve_linear(mat, unit_vec(self.ring, n, i)).solution)
        inverse = tuple(tuple(inverse_cols[j][i] for j in range(n)) for i in range(n))
        action = [_mat_mul(inverse, _mat_mul(m, mat)) for m in self.action]
        return BModule(self.algebra, action)


class ModuleMorphism:
    """A base-linear map between modules over the same algebra, checked to
    commute with every basis action."""

    def __init__(self, source: BModule, target: BModule, rows, _check=True):
        if not source.algebra.structural_eq(target.algebra):
            raise ValueError("modules live over different algebras")
        self.source = source
        self.target = target
        self.rows = tuple(vec(source.ring, r) for r in rows)
        if len(self.rows) != target.rank or \
           any(len(r) != source.rank for r in self.rows):
            raise ValueError("morphism shape mismatch")
        if _check:
            for i in range(source.algebra.rank):
                left = _mat_mul(self.rows, source.action[i])
                right = _mat_mul(target.action[i], self.rows)
                if left != right:
                    raise ValueError(f"map does not commute with the action of "
                                     f"basis element {i}")

    @classmethod
    def multiplication(cls, module: BModule, u):
        """Action of an algebra element as a module endomorphism."""
        return cls(module, module, module.action_of(vec(module.ring, u)),
                   _check=False)

    def compose(self, inner: "ModuleMorphism"):
        return ModuleMorphism(inner.source, self.target,
                              _mat_mul(self.rows, inner.rows), _check=False)


@dataclass(frozen=True)
class NormLine:
    """Token for the rank-1 base module of top exterior powers attached to a
    module, trivialized by the module's own ordered basis."""

    module: BModule


@dataclass(frozen=True)
class NormMap:
    source: NormLine
    target: NormLine
    value: Scalar


def norm_module(psi: ModuleMorphism) -> NormMap:
    """The induced map on top exterior powers: with both lines trivialized
    by the module bases, it is multiplication by the determinant."""
    return NormMap(NormLine(psi.source), NormLine(psi.target), det(psi.rows))


class ModuleTensor:
    """Tensor product over the algebra of two modules, presented as the
    quotient of the base tensor square by the action-balancing relations."""

    def __init__(self, left: BModule, right: BModule):
        if not left.algebra.structural_eq(right.algebra):
            raise ValueError("modules live over different algebras")
        algebra = left.algebra
        ring = algebra.ring
        d1, d2 = left.rank, right.rank
        size = d1 * d2
        relations = []
        for k in range(algebra.rank):
            a_act, b_act = left.action[k], right.action[k]
            for i in range(d1):
                for j in range(d2):
                    row = [ring.zero] * size
                    for a in range(d1):
                        if not a_act[a][i].is_zero:
                            row[a * d2 + j] = row[a * d2 + j] + a_act[a][i]
                    for b in range(d2):
                        if not b_act[b][j].is_zero:
                            row[i * d2 + b] = row[i * d2 + b] - b_act[b][j]
                    relations.append(tuple(row))
        self.relations = row_space_basis(relations)
        expected = size - algebra.rank
        if len(self.relations) != expected:
            raise ValueError("tensor product is not free of the expected rank")
        pivots = [next(i for i, x in enumerate(r) if not x.is_zero)
                  for r in self.relations]
        self.complement = tuple(i for i in range(size) if i not in pivots)
        self.left = left
        self.right = right
        self.algebra = algebra
        self.size = size
        action = []
        for k in range(algebra.rank):
            m = self._pushed_action(left.action[k])
            action.append(m)
        self.module = BModule(algebra, action)

    def project(self, v):
        reduced = reduce_against(self.relations, v)
        return tuple(reduced[i] for i in self.complement)

    def section_vec(self, idx):
        return unit_vec(self.algebra.ring, self.size, self.complement[idx])

    def _pushed_action(self, a_act):
        d2 = self.right.rank
        cols = []
        for idx in range(len(self.complement)):
            src = self.complement[idx]
            a, b = divmod(src, d2)
            image = [self.algebra.ring.zero] * self.size
            for a2 in range(self.left.rank):
                if not a_act[a2][a].is_zero:
                    image[a2 * d2 + b] = a_act[a2][a]
            cols.append(self.project(tuple(image)))
        n = len(self.complement)
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def tensor_modules(left: BModule, right: BModule) -> ModuleTensor:
    return ModuleTensor(left, right)


def tensor_morphisms(psi: ModuleMorphism, phi: ModuleMorphism,
                     source: ModuleTensor, target: ModuleTensor) -> ModuleMorphism:
    """The induced map on tensor products, pushed through the quotient
    presentations."""
    d2s = source.right.rank
    d2t = target.right.rank
    cols = []
    for idx in range(len(source.complement)):
        a, b = divmod(source.complement[idx], d2s)
        image = [psi.source.ring.zero] * target.size
        for a2 in range(target.left.rank):
            ca = psi.rows[a2][a]
            if ca.is_zero:
                continue
            for b2 in range(target.right.rank):
                cb = phi.rows[b2][b]
                if not cb.is_zero:
                    image[a2 * d2t + b2] = image[a2 * d2t + b2] + ca * cb
        cols.append(target.project(tuple(image)))
    n_t = len(target.complement)
    rows = tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(n_t))
    return ModuleMorphism(source.module, target.module, rows)


# ---------------------------------------------------------------------------
# Cech cocycles and their norms

@dataclass(frozen=True)
class NormedPatch:
    """A cover piece: a finite algebra with a multiplicative law on it."""

    algebra: FiniteAlgebra
    law: PolyLaw

    def __post_init__(self):
        if not self.law.carrier.structural_eq(self.algebra):
            raise ValueError("patch law does not live on the patch algebra")


class Cocycle:
    """Transition data for a line bundle over a combinatorial two-level
    cover: pieces, pairwise overlaps with restriction morphisms, invertible
    transitions on overlaps, and (optionally) triple overlaps witnessing the
    cocycle identity.

    Overlap keys are ordered label pairs (a, b) with a before b in the cover
    listing; the reverse transition is implicitly the inverse and the
    diagonal is implicitly 1.
    """

    def __init__(self, pieces, overlaps, restrictions, transitions, triples=None):
        self.labels = tuple(sorted(pieces))
        self.pieces = dict(pieces)
        self.overlaps = dict(overlaps)
        self.restrictions = dict(restrictions)
        unknown = set(transitions) - set(self.overlaps)
        if unknown:
            raise ValueError(f"transitions on unknown overlaps {sorted(unknown)}")
        self.transitions = {key: vec(self.overlaps[key].algebra.ring, value)
                            for key, value in transitions.items()}
        self.triples = dict(triples) if triples else {}
        self._validate()

    @property
    def degree(self):
        return next(iter(self.pieces.values())).law.degree

    def _validate(self):
        degrees = {patch.law.degree for patch in self.pieces.values()}
        degrees |= {patch.law.degree for patch in self.overlaps.values()}
        if len(degrees) != 1:
            raise ValueError("patch laws must share one degree")
        for (a, b), patch in sorted(self.overlaps.items()):
            if a not in self.pieces or b not in self.pieces:
                raise ValueError(f"overlap ({a},{b}) references unknown pieces")
            for label in (a, b):
                rho = self.restrictions.get((label, (a, b)))
                if rho is None:
                    raise ValueError(f"missing restriction {label} -> ({a},{b})")
                self._check_restriction(rho, self.pieces[label], patch)
            phi = self.transitions.get((a, b))
            if phi is None:
                raise ValueError(f"missing transition on overlap ({a},{b})")
            if not patch.algebra.is_invertible(phi):
                raise ValueError(f"transition on overlap ({a},{b}) is not invertible")
        for key, (patch, maps) in sorted(self.triples.items()):
            a, b, c = key
            for pair in ((a, b), (b, c), (a, c)):
                rho = maps.get(pair)
                if rho is None:
                    raise ValueError(f"triple {key} is missing the map from {pair}")
                self._check_restriction(rho, self.overlaps[pair], patch)
            lhs = patch.algebra.mul_vec(
                maps[(a, b)].apply(self.transitions[(a, b)]),
                maps[(b, c)].apply(self.transitions[(b, c)]))
            rhs = maps[(a, c)].apply(self.transitions[(a, c)])
            if lhs != rhs:
                raise ValueError(f"cocycle identity fails on triple {key}")

    @staticmethod
    def _check_restriction(rho: AlgebraMorphism, source: NormedPatch,
                           target: NormedPatch):
        if not rho.source.structural_eq(source.algebra) or \
           not rho.target.structural_eq(target.algebra):
            raise ValueError("restriction endpoints do not match the patches")
        # laws must agree through the restriction, as symbolic polynomials
        moved = target.law.evaluate(rho.apply_poly(source.algebra.generic_element()))
        if moved != source.law.evaluate_generic():
            raise ValueError("restriction is not compatible with the patch laws")


def tensor_cocycles(c1: Cocycle, c2: Cocycle) -> Cocycle:
    """Tensor of two line bundles over the same cover: transitions multiply
    in each overlap algebra."""
    if c1.labels != c2.labels or sorted(c1.overlaps) != sorted(c2.overlaps):
        raise ValueError("cocycles live on different covers")
    for key in c1.overlaps:
        if not c1.overlaps[key].algebra.structural_eq(c2.overlaps[key].algebra):
            raise ValueError(f"overlap ({key}) algebras differ")
    transitions = {key: c1.overlaps[key].algebra.mul_vec(c1.transitions[key],
                                                         c2.transitions[key])
                   for key in c1.transitions}
    return Cocycle(c1.pieces, c1.overlaps, c1.restrictions, transitions,
                   c1.triples)


@dataclass(frozen=True)
class BaseCocycle:
    """Scalar transition data on the base, keyed like the source cocycle."""

    labels: tuple
    transitions: dict

    def verify(self) -> bool:
        for value in self.transitions.values():
            if value.is_zero:
                return False
        for (a, b), t_ab in self.transitions.items():
            for (b2, c), t_bc in self.transitions.items():
                if b2 != b:
                    continue
                t_ac = self.transitions.get((a, c))
                if t_ac is not None and t_ab * t_bc != t_ac:
                    return False
        return True


def norm_cocycle(cocycle: Cocycle) -> BaseCocycle:
    """Apply each overlap's law to its transition: the norms form a scalar
    cocycle on the base because the laws are multiplicative."""
    transitions = {}
    for key in sorted(cocycle.transitions):
        patch = cocycle.overlaps[key]
        value = patch.law.evaluate(cocycle.transitions[key])
        if value.is_zero:
            raise ValueError(f"norm of the transition on overlap {key} "
                             f"is not invertible")
        transitions[key] = value
    return BaseCocycle(cocycle.labels, transitions)


# ---------------------------------------------------------------------------
# The norm functor on trivialized line bundles, and back

def functor_law_roundtrip(pair: CyclePair) -> bool:
    """Treat the pair's law as a norm functor on endomorphisms of the
    trivial rank-1 module, extract a law back from that functor by generic
    evaluation, and compare coefficientwise.  Also checks the functor's
    monoidal behaviour: products of endomorphisms map to products, and a
    base scalar acting on the trivial module maps to its d-th power."""
    law = pair.law
    B = law.carrier
    d = law.degree
    ring = law.ring
    if B.is_zero:
        return law.psi == (ring.one,)
    n = B.rank

    def functor_value(coords):
        # the functor's value on "multiply by b": expand the d-th divided
        # power of b over the weight-d monomials and pair with the law's
        # coefficient row (written out directly, not via PolyLaw.evaluate)
        nvars = next(c.nvars for c in coords if isinstance(c, MultiPoly))
        total = MultiPoly(ring, nvars, {})
        for alpha, c in zip(law.indices, law.psi):
            if c.is_zero:
                continue
            term = MultiPoly.constant(ring, nvars, c)
            for i, a in enumerate(alpha):
                for _ in range(a):
                    term = term * coords[i]
            total = total + term
        return total

    extracted = law_from_evaluator(B, d, functor_value)
    if extracted != law:
        return False
    width = 2 * n + 1
    xs = B.generic_element(width, 0)
    ys = B.generic_element(width, n)
    if functor_value(B.mul_poly_vec(xs, ys)) != \
       functor_value(xs) * functor_value(ys):
        return False
    f = MultiPoly.variable(ring, width, 2 * n)
    scaled = tuple(f * MultiPoly.constant(ring, width, c) for c in B.one)
    return functor_value(scaled) == f ** d
