import math
from itertools import combinations_with_replacement, permutations

import pytest

from gamma_cycles.exact_algebra import (CharacteristicError, GF, QQ,
                                        FiniteAlgebra, MultiPoly,
                                        classical_charpoly,
                                        evaluation_morphism, unit_vec, vec)
from gamma_cycles.laws import determinant_law, law_from_homs
from gamma_cycles.trace_norm import (
    TraceMap, cayley_hamilton_reduce, char_poly, is_degree_d_trace,
    norm_from_trace, tangent_deformations, theta_k_from_norm,
    theta_k_from_trace, theta_symbolic_from_norm, trace_from_norm)

F2 = GF(2)


def split_cubic():
    """Q[x]/(x(x-1)(x-2)), a rank-3 split algebra."""
    # (x)(x-1)(x-2) = x^3 - 3x^2 + 2x
    return FiniteAlgebra.quotient_polynomial(QQ, (0, 2, -3, 1))


def proj_law(n):
    B = FiniteAlgebra.product_ring(QQ, n)
    from gamma_cycles.exact_algebra import AlgebraMorphism
    base = FiniteAlgebra.quotient_polynomial(QQ, (-1, 1), var="z")
    homs = [AlgebraMorphism(B, base,
                            [((QQ.one,) if j == i else (QQ.zero,))
                             for j in range(n)])
            for i in range(n)]
    return B, law_from_homs(homs)


# ---------------------------------------------------------------------------
# first-order part

def test_square_of_a_hom_has_doubled_trace():
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, -1, 1))
    f = evaluation_morphism(B, QQ.one)
    law = law_from_homs([f, f])
    trace = trace_from_norm(law)
    for j in range(B.rank):
        e = unit_vec(QQ, B.rank, j)
        assert trace.apply(e) == QQ.scalar(2) * f.apply(e)[0]


def test_degree_one_trace_is_the_law():
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, -1, 1))
    f = evaluation_morphism(B, QQ.zero)
    law = law_from_homs([f])
    trace = trace_from_norm(law)
    for j in range(B.rank):
        e = unit_vec(QQ, B.rank, j)
        assert trace.apply(e) == law.evaluate(e)


def test_determinant_trace_is_matrix_trace():
    B = split_cubic()
    law = determinant_law(B)
    trace = trace_from_norm(law)
    for j in range(B.rank):
        e = unit_vec(QQ, B.rank, j)
        M = B.multiplication_matrix(e)
        matrix_trace = M[0][0] + M[1][1] + M[2][2]
        assert trace.apply(e) == matrix_trace


# ---------------------------------------------------------------------------
# the tower off the norm

def test_tower_vanishes_above_degree():
    B, law = proj_law(2)
    args = [unit_vec(QQ, 2, 0)] * 3
    assert theta_k_from_norm(law, args).is_zero
    assert theta_k_from_norm(law, args + args).is_zero


def test_diagonal_is_d_factorial_times_norm():
    B = split_cubic()
    law = determinant_law(B)
    d = law.degree
    diagonal = theta_symbolic_from_norm(law, d, B.rank, [0] * d)
    expected = law.evaluate_generic() * MultiPoly.constant(
        QQ, B.rank, QQ.scalar(math.factorial(d)))
    assert diagonal == expected


def test_theta2_of_projection_product():
    # oracle: expand the off-diagonal double sum directly
    B, law = proj_law(3)
    b = vec(QQ, (2, 3, 5))
    c = vec(QQ, (7, 1, -4))
    oracle = QQ.zero
    for i in range(3):
        for j in range(3):
            if i != j:
                oracle = oracle + b[i] * c[j]
    assert theta_k_from_norm(law, [b, c]) == oracle


def test_theta1_is_theta():
    B = split_cubic()
    law = determinant_law(B)
    trace = trace_from_norm(law)
    for j in range(B.rank):
        e = unit_vec(QQ, B.rank, j)
        assert theta_k_from_norm(law, [e]) == trace.apply(e)


def test_unit_slot_drops_to_lower_level():
    # Theta_{k+1}(1, b..) = (d - k) Theta_k(b..)
    B = split_cubic()
    law = determinant_law(B)
    d = law.degree
    for k in (1, 2):
        for combo in combinations_with_replacement(range(B.rank), k):
            args = [unit_vec(QQ, B.rank, i) for i in combo]
            with_unit = theta_k_from_norm(law, [B.one] + args)
            below = theta_k_from_norm(law, args)
            assert with_unit == QQ.scalar(d - k) * below


# ---------------------------------------------------------------------------
# the tower off a bare trace

def point_sum_trace():
    """theta(b) = b(0) + b(1) on Q[x]/(x^2 - x), the trace of a two-point
    cycle."""
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, -1, 1))
    # theta(1) = 2, theta(x) = 0 + 1
    return B, TraceMap(B, 2, (QQ.scalar(2), QQ.one), claimed=True)


def test_recursion_matches_direct_double_sum():
    B, trace = point_sum_trace()
    points = (QQ.zero, QQ.one)

    def value(u, t):
        # u = a + b x at x = t
        return u[0] + u[1] * t

    b = vec(QQ, (3, -2))
    c = vec(QQ, (1, 4))
    oracle = QQ.zero
    for i, j in permutations(range(2), 2):
        oracle = oracle + value(b, points[i]) * value(c, points[j])
    assert theta_k_from_trace(trace, [b, c]) == oracle


def test_recursion_agrees_with_norm_route():
    B = split_cubic()
    law = determinant_law(B)
    trace = trace_from_norm(law)
    memo = {}
    for k in (1, 2, 3, 4):
        for combo in combinations_with_replacement(range(B.rank), k):
            args = [unit_vec(QQ, B.rank, i) for i in combo]
            assert theta_k_from_trace(trace, args, memo) == \
                theta_k_from_norm(law, args)


def test_point_sum_is_a_degree_d_trace():
    _, trace = point_sum_trace()
    ok, witness = is_degree_d_trace(trace)
    assert ok and witness is None


def test_wrong_unit_value_is_rejected():
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, -1, 1))
    trace = TraceMap(B, 2, (QQ.scalar(3), QQ.one))
    ok, witness = is_degree_d_trace(trace)
    assert not ok
    assert witness == (B.one,)
    # a claimed trace refuses that unit value outright
    with pytest.raises(ValueError):
        TraceMap(B, 2, (QQ.scalar(3), QQ.one), claimed=True)


# ---------------------------------------------------------------------------
# trace <-> norm

def test_doubled_point_trace_rebuilds_square_law():
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, 1))
    trace = TraceMap(B, 2, (QQ.scalar(2), QQ.zero), claimed=True)
    law = norm_from_trace(trace)
    for a, b in ((3, 1), (-2, 5), (0, 4)):
        assert law.evaluate(vec(QQ, (a, b))) == QQ.scalar(a * a)


def test_round_trip_both_ways():
    B = split_cubic()
    law = determinant_law(B)
    trace = trace_from_norm(law)
    assert norm_from_trace(trace) == law
    rebuilt = trace_from_norm(norm_from_trace(trace))
    assert rebuilt.theta == trace.theta


def test_norm_from_trace_needs_invertible_factorial():
    B = FiniteAlgebra.quotient_polynomial(F2, (0, 0, 1))
    trace = TraceMap(B, 2, (F2.zero, F2.one), claimed=True)
    with pytest.raises(CharacteristicError):
        norm_from_trace(trace)


def test_mod_p_traces_coincide_for_shifted_multiplicity():
    # over F_2 the cycles [x] and 3[x] have equal trace functionals even
    # though their laws differ
    B = FiniteAlgebra.quotient_polynomial(F2, (0, 1))
    from gamma_cycles.laws import law_from_evaluator
    law1 = law_from_evaluator(B, 1, lambda c: c[0])
    law3 = law_from_evaluator(B, 3, lambda c: c[0] * c[0] * c[0])
    t1 = trace_from_norm(law1)
    t3 = trace_from_norm(law3)
    assert t1.theta == t3.theta
    # the degree-indexed laws still differ symbolically
    assert law1.evaluate_generic() != law3.evaluate_generic()


# ---------------------------------------------------------------------------
# characteristic polynomials and Cayley-Hamilton

def test_char_poly_sign_matches_matrix_oracle():
    for minpoly in ((0, -1, 1), (-2, 0, 1), (0, 2, -3, 1), (0, 0, 0, 1)):
        B = FiniteAlgebra.quotient_polynomial(QQ, minpoly)
        law = determinant_law(B)
        d = law.degree
        sign = QQ.one if d % 2 == 0 else QQ.zero - QQ.one
        for j in range(B.rank):
            b = unit_vec(QQ, B.rank, j)
            oracle = [sign * c for c in
                      classical_charpoly(B.multiplication_matrix(b))]
            assert list(char_poly(law, b).coeffs) == oracle


def test_char_poly_of_two_point_cycle_law():
    # frozen by hand: the law of 2[0] + 1[1] sends x - t to (-t)^2 (1 - t)
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, -1, 1))
    law = determinant_law(B)
    cp = char_poly(law, unit_vec(QQ, 3, 1))
    assert [c.value for c in cp.coeffs] == [0, 0, 1, -1]


def test_element_is_root_of_its_char_poly():
    B = split_cubic()
    law = determinant_law(B)
    for j in range(B.rank):
        b = unit_vec(QQ, B.rank, j)
        coeffs = char_poly(law, b).coeffs
        acc = vec(QQ, (0, 0, 0))
        power = B.one
        for c in coeffs:
            acc = tuple(x + c * y for x, y in zip(acc, power))
            power = B.mul_vec(power, b)
        assert all(x.is_zero for x in acc)


def test_faithful_law_reduces_to_itself():
    B = split_cubic()
    law = determinant_law(B)
    reduced = cayley_hamilton_reduce(law)
    assert reduced.algebra.rank == B.rank
    for j in range(B.rank):
        e = unit_vec(QQ, B.rank, j)
        assert reduced.projection.apply(e) == e


# ---------------------------------------------------------------------------
# tangent spaces of trace deformations

def test_tangent_dimension_counts_low_monomials():
    cases = [((0, 0, 0, 0, 1), 2, 2),        # Q[x]/(x^4), d=2
             ((0, 0, 0, 0, 0, 1), 3, 3)]     # Q[x]/(x^5), d=3
    for minpoly, degree, expected in cases:
        B = FiniteAlgebra.quotient_polynomial(QQ, minpoly)
        point = evaluation_morphism(B, QQ.zero)
        report = tangent_deformations(B, point, degree)
        assert report.dimension == expected


def test_tangent_dimension_on_fat_plane_point():
    B = FiniteAlgebra.truncated_polynomials(QQ, 2, 3)
    point = evaluation_morphism(B, QQ.zero)
    report = tangent_deformations(B, point, 2)
    # monomial count: x, y, x^2, xy, y^2
    assert report.dimension == 5


def test_tangent_functionals_kill_deep_monomials():
    # first-order deformations vanish on m^{d+1}: no functional touches x^3
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, 0, 0, 1))
    point = evaluation_morphism(B, QQ.zero)
    report = tangent_deformations(B, point, 2)
    for functional in report.basis:
        assert functional[3].is_zero
        assert functional[0].is_zero  # theta''(1) = 0
