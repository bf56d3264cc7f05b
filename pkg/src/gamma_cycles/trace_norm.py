"""Trace functionals of degree-d laws, the multilinear tower between trace
and norm, characteristic polynomials, carrier reduction, and first-order
trace deformations.

The tower Theta_k attached to a law n sends k elements to the coefficient
of t_1...t_k in n(1 + sum t_i b_i).  It can be read off the law's
coefficient functional directly, or rebuilt from the plain trace by a
product recursion; comparing the two routes is one of the package's core
consistency checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .exact_algebra import (CharacteristicError, FiniteAlgebra, MultiPoly,
                            Scalar, ideal_closure, quotient_algebra,
                            solve_linear, unit_vec, vec, zero_vec)
from .gamma import (GammaElement, external_product, gamma_of_vector,
                    multi_indices)
from .laws import PolyLaw, is_multiplicative, law_from_evaluator


class TraceMap:
    """Linear functional on a finite algebra, marked with the degree of the
    law it came from (or claims to come from).

    When `claimed` is set the unit normalization theta(1) = d * 1 is
    verified; plain functionals can skip it so that the trace recognizer has
    something honest to reject.
    """

    def __init__(self, carrier: FiniteAlgebra, degree: int, theta, claimed=False):
        self.carrier = carrier
        self.degree = degree
        self.theta = vec(carrier.ring, theta)
        if len(self.theta) != carrier.rank:
            raise ValueError("theta row has the wrong length")
        if claimed:
            unit_value = self.apply(carrier.one)
            expected = carrier.ring.scalar(degree)
            if unit_value != expected:
                raise ValueError(f"theta(1) = {unit_value}, expected {expected}")

    @property
    def ring(self):
        return self.carrier.ring

    def apply(self, coords) -> Scalar:
        total = self.ring.zero
        for c, t in zip(coords, self.theta, strict=True):
            total = total + c * t
        return total

    def apply_poly(self, coords):
        total = coords[0].zero_like()
        for c, t in zip(coords, self.theta, strict=True):
            if not t.is_zero:
                total = total + c * t
        return total

    def __eq__(self, other):
        if not isinstance(other, TraceMap):
            return NotImplemented
        return (self.degree == other.degree
                and self.carrier.structural_eq(other.carrier)
                and self.theta == other.theta)

    def __repr__(self):
        return f"TraceMap(degree {self.degree}, theta {[str(t) for t in self.theta]})"


# ---------------------------------------------------------------------------
# The tower from the law's coefficient functional

def theta_k_from_norm(law: PolyLaw, args) -> Scalar:
    """Theta_k off the law: apply the coefficient functional to
    gamma^{d-k}(1) times the product of gamma^1 of the arguments.  Zero for
    k above the degree."""
    args = [tuple(law.ring.scalar(c) for c in b) for b in args]
    k = len(args)
    d = law.degree
    if k > d:
        return law.ring.zero
    element = gamma_of_vector(law.carrier.one, d - k)
    for b in args:
        element = external_product(element, gamma_of_vector(b, 1))
        if element.is_zero:
            return law.ring.zero
    return law.apply_gamma(element)


def theta_symbolic_from_norm(law: PolyLaw, k: int, nvars: int, var_groups) -> MultiPoly:
    """Theta_k at k generic arguments, each a block of fresh variables.

    var_groups lists, for each argument, the variable offset of its block.
    Computed by multilinear expansion of theta_k_from_norm over the basis,
    which is exact because each slot enters through gamma^1.
    """
    B = law.carrier
    ring = law.ring
    total = MultiPoly(ring, nvars, {})
    for combo in _index_tuples(B.rank, k):
        value = theta_k_from_norm(law, [unit_vec(ring, B.rank, i) for i in combo])
        if value.is_zero:
            continue
        term = MultiPoly.constant(ring, nvars, value)
        for slot, i in enumerate(combo):
            term = term * MultiPoly.variable(ring, nvars, var_groups[slot] + i)
        total = total + term
    return total


def _index_tuples(rank, k):
    if k == 0:
        yield ()
        return
    for rest in _index_tuples(rank, k - 1):
        for i in range(rank):
            yield rest + (i,)


# ---------------------------------------------------------------------------
# The tower from a bare trace, by the product recursion

def theta_k_from_trace(trace: TraceMap, args, memo=None) -> Scalar:
    """Theta_k rebuilt from the trace alone:

        Theta_1 = theta,
        Theta_{k+1}(b_1, .., b_{k+1}) = theta(b_1) * Theta_k(b_2, .., b_{k+1})
            - sum_i Theta_k(b_2, .., b_1 * b_i, .., b_{k+1}).

    Values are memoized per call (or per caller-supplied memo dict) keyed by
    the sorted argument tuple, which is legitimate because the tower is
    symmetric.
    """
    if memo is None:
        memo = {}
    args = tuple(tuple(trace.ring.scalar(c) for c in b) for b in args)
    if not args:
        raise ValueError("the recursion starts at one argument")
    return _theta_rec(trace, args, memo)


def _theta_rec(trace: TraceMap, args, memo):
    key = tuple(sorted(args))
    if key in memo:
        return memo[key]
    if len(args) == 1:
        value = trace.apply(args[0])
    else:
        head, rest = args[0], args[1:]
        value = trace.apply(head) * _theta_rec(trace, rest, memo)
        B = trace.carrier
        for i in range(len(rest)):
            merged = rest[:i] + (B.mul_vec(head, rest[i]),) + rest[i + 1:]
            value = value - _theta_rec(trace, merged, memo)
    memo[key] = value
    return value


def is_degree_d_trace(trace: TraceMap):
    """Recognize degree-d traces: the unit must go to d, and the recursion
    tower must vanish in level d+1 on every multiset of basis elements.
    Returns (ok, witness) where the witness is a failing tuple or None."""
    B = trace.carrier
    d = trace.degree
    expected = trace.ring.scalar(d)
    if trace.apply(B.one) != expected:
        return False, (B.one,)
    memo = {}
    for combo in combinations_with_replacement(range(B.rank), d + 1):
        args = tuple(unit_vec(trace.ring, B.rank, i) for i in combo)
        if not _theta_rec(trace, args, memo).is_zero:
            return False, args
    return True, None


def trace_from_norm(law: PolyLaw) -> TraceMap:
    """First-order part of a multiplicative law: theta(b) is the coefficient
    functional at gamma^{d-1}(1) x gamma^1(b).  Works in any characteristic."""
    if not is_multiplicative(law):
        raise ValueError("law is not multiplicative")
    B = law.carrier
    row = [theta_k_from_norm(law, [unit_vec(law.ring, B.rank, j)])
           for j in range(B.rank)]
    return TraceMap(B, law.degree, row, claimed=True)


def norm_from_trace(trace: TraceMap) -> PolyLaw:
    """Rebuild the degree-d law from a degree-d trace.

    Needs d! invertible in the base ring; the coefficient on a divided
    monomial gamma^alpha is Theta_d at the basis arguments repeated per
    alpha, divided by the product of the alpha_i factorials.
    """
    d = trace.degree
    ring = trace.ring
    if not ring.integer_invertible(math.factorial(d)):
        raise CharacteristicError(
            f"{d}! is not invertible in characteristic {ring.characteristic}")
    ok, witness = is_degree_d_trace(trace)
    if not ok:
        raise ValueError(f"not a degree-{d} trace; failing tuple {witness}")
    B = trace.carrier
    memo = {}
    psi = {}
    for alpha in multi_indices(B.rank, d):
        args = []
        for i, a in enumerate(alpha):
            args.extend([unit_vec(ring, B.rank, i)] * a)
        value = _theta_rec(trace, tuple(args), memo) if args else ring.one
        denom = 1
        for a in alpha:
            denom *= math.factorial(a)
        psi[alpha] = value / ring.scalar(denom)
    law = PolyLaw(d, B, psi)
    # multiplicative by the representability of degree-d traces; the test
    # suite re-verifies this on unflagged copies
    law._multiplicative = True
    return law


# ---------------------------------------------------------------------------
# Characteristic polynomials and carrier reduction

@dataclass(frozen=True)
class CharPoly:
    """chi(t) = law evaluated at b - t, stored as a coefficient list of
    length degree+1 (index = power of t)."""

    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def evaluate(self, t: Scalar):
        total = t.ring.zero
        for c in reversed(self.coeffs):
            total = total * t + c
        return total

    def constant_term(self):
        return self.coeffs[0]

    def leading(self):
        return self.coeffs[-1]


def char_poly(law: PolyLaw, b) -> CharPoly:
    """Characteristic polynomial of an element under a degree-d law: the
    coefficient of t^k is (-1)^k times the functional at
    gamma^k(1) x gamma^{d-k}(b)."""
    b = tuple(law.ring.scalar(c) for c in b)
    d = law.degree
    coeffs = []
    for k in range(d + 1):
        u = external_product(gamma_of_vector(law.carrier.one, k),
                             gamma_of_vector(b, d - k))
        value = law.apply_gamma(u)
        if k % 2 == 1:
            value = -value
        coeffs.append(value)
    return CharPoly(tuple(coeffs))


def char_poly_generic(law: PolyLaw):
    """Coefficients of the characteristic polynomial at the generic element,
    as MultiPolys in rank-many variables."""
    B = law.carrier
    ring = law.ring
    n = B.rank
    d = law.degree
    out = []
    for k in range(d + 1):
        unit_part = gamma_of_vector(B.one, k)
        coeff = MultiPoly(ring, n, {})
        for beta in multi_indices(n, d - k):
            value = law.apply_gamma(
                external_product(unit_part, GammaElement.basis(ring, beta)))
            if value.is_zero:
                continue
            mono = MultiPoly(ring, n, {beta: value})
            coeff = coeff + mono
        if k % 2 == 1:
            coeff = -coeff
        out.append(coeff)
    return out


@dataclass(frozen=True)
class ReducedLaw:
    """Result of a Cayley-Hamilton reduction: the quotient carrier, the
    induced law on it, and the projection from the original carrier."""

    algebra: FiniteAlgebra
    law: PolyLaw
    projection: object  # AlgebraMorphism


def cayley_hamilton_reduce(law: PolyLaw) -> ReducedLaw:
    """Quotient the carrier by the ideal generated by all values of the
    generic characteristic polynomial at the generic element, and verify
    exactly that the law factors through the quotient.

    A failure of the factorization check would contradict the theory, so it
    raises instead of degrading.
    """
    B = law.carrier
    ring = law.ring
    n = B.rank
    coeffs = char_poly_generic(law)
    generic = B.generic_element()
    power = tuple(MultiPoly.constant(ring, n, c) for c in B.one)
    chi_value = tuple(MultiPoly(ring, n, {}) for _ in range(n))
    for k, c in enumerate(coeffs):
        if k > 0:
            power = B.mul_poly_vec(power, generic)
        if c.is_zero:
            continue
        chi_value = tuple(acc + c * p for acc, p in zip(chi_value, power))
    exponents = set()
    for coordinate in chi_value:
        exponents.update(coordinate.terms)
    gens = []
    for e in sorted(exponents):
        gens.append(tuple(coordinate.coefficient(e) for coordinate in chi_value))
    ideal = ideal_closure(B, gens)
    quotient = quotient_algebra(B, ideal)
    Q = quotient.algebra

    if Q.is_zero:
        if law.degree != 0:
            raise ArithmeticError("law of positive degree reduced to the empty carrier")
        induced = PolyLaw(0, Q, (law.psi[0],), known_multiplicative=law._multiplicative)
        return ReducedLaw(Q, induced, quotient.projection)

    def lift(coords):
        out = tuple(MultiPoly(ring, Q.rank, {}) for _ in range(n))
        for c, s in zip(coords, quotient.section, strict=True):
            out = tuple(acc + c * sv for acc, sv in zip(out, s))
        return out

    induced = law_from_evaluator(Q, law.degree, lambda coords: law.evaluate(lift(coords)))
    induced._multiplicative = law._multiplicative

    # exact factorization check: evaluating upstairs equals projecting and
    # evaluating downstairs, as polynomials in the upstairs coordinates
    upstairs = law.evaluate_generic()
    projected = quotient.projection.apply_poly(B.generic_element())
    downstairs = induced.evaluate(projected)
    if upstairs != downstairs:
        raise ArithmeticError("law does not factor through its reduced carrier")
    return ReducedLaw(Q, induced, quotient.projection)


# ---------------------------------------------------------------------------
# First-order deformations of a multiple-point trace

@dataclass(frozen=True)
class DualTraceDeformation:
    """Solution space of first-order deformations of d times a point trace:
    functionals theta'' with theta''(1) = 0 making theta + eps * theta'' a
    degree-d trace over the dual numbers."""

    carrier: FiniteAlgebra
    degree: int
    point: object  # AlgebraMorphism to the base
    basis: tuple   # rows spanning the space of theta''

    @property
    def dimension(self):
        return len(self.basis)


def tangent_deformations(carrier: FiniteAlgebra, point, degree: int) -> DualTraceDeformation:
    """All first-order deformations of the trace d * (evaluation at a
    rational point).

    The trace conditions are linear in the unknown functional theta''
    because the square of the deformation parameter vanishes; the recursion
    for the tower is run over pairs (value, linear form in the unknowns) and
    the level-(d+1) kernel is solved exactly.
    """
    ring = carrier.ring
    d = degree
    if not ring.integer_invertible(math.factorial(d + 1)):
        raise CharacteristicError(
            f"deformation theory here needs {d + 1}! invertible, "
            f"characteristic is {ring.characteristic}")
    if point.source is not carrier and not point.source.structural_eq(carrier):
        raise ValueError("point does not evaluate the carrier")
    if point.target.rank != 1:
        raise ValueError("point must evaluate to the base")
    n = carrier.rank
    d_scalar = ring.scalar(d)

    def ev(b):
        return point.apply(b)[0]

    # dual pairs (a, l): a is the value of d*ev, l the coefficient row of
    # the unknown functional; multiplication kills l*l'
    def dual_theta(b):
        return (d_scalar * ev(b), tuple(b))

    def pair_mul(x, y):
        a, l = x
        b, m = y
        return (a * b, tuple(a * mi + b * li for li, mi in zip(l, m)))

    def pair_sub(x, y):
        return (x[0] - y[0], tuple(li - mi for li, mi in zip(x[1], y[1])))

    memo = {}

    def rec(args):
        key = tuple(sorted(args))
        if key in memo:
            return memo[key]
        if len(args) == 1:
            value = dual_theta(args[0])
        else:
            head, rest = args[0], args[1:]
            value = pair_mul(dual_theta(head), rec(rest))
            for i in range(len(rest)):
                merged = rest[:i] + (carrier.mul_vec(head, rest[i]),) + rest[i + 1:]
                value = pair_sub(value, rec(merged))
        memo[key] = value
        return value

    rows = [tuple(carrier.one)]  # theta''(1) = 0
    for combo in combinations_with_replacement(range(n), d + 1):
        args = tuple(unit_vec(ring, n, i) for i in combo)
        a, l = rec(args)
        if not a.is_zero:
            raise ArithmeticError("base trace fails its own tower; check the point")
        rows.append(l)
    solution = solve_linear(rows, zero_vec(ring, len(rows)))
    return DualTraceDeformation(carrier, d, point, solution.kernel)
