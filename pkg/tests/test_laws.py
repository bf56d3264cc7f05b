import pytest
from hypothesis import given, settings, strategies as st

from gamma_cycles.exact_algebra import (GF, QQ, FiniteAlgebra, MultiPoly,
                                        evaluation_morphism, unit_vec, vec)
from gamma_cycles.laws import (PolyLaw, constant_law, determinant_law,
                               is_multiplicative, law_from_evaluator,
                               law_from_homs, scale_law)

F3 = GF(3)


def split_line():
    return FiniteAlgebra.product_ring(QQ, 2)


def coordinate_projection(B, i):
    """The i-th coordinate of a product-of-lines algebra, as a morphism to
    the rank-1 base."""
    from gamma_cycles.exact_algebra import AlgebraMorphism
    base = FiniteAlgebra.quotient_polynomial(B.ring, (-1, 1), var="z")
    cols = [((B.ring.one,) if j == i else (B.ring.zero,))
            for j in range(B.rank)]
    return AlgebraMorphism(B, base, cols)


def projections(B):
    return [coordinate_projection(B, i) for i in range(B.rank)]


# ---------------------------------------------------------------------------
# construction and evaluation

def test_product_of_projections_evaluates_to_ab():
    B = split_line()
    law = law_from_homs(projections(B))
    a, b = QQ.scalar(5), QQ.scalar(-3)
    assert law.evaluate((a, b)) == a * b


def test_norm_of_sqrt2_extension():
    # oracle: 2x2 multiplication-matrix determinant, expanded by hand to
    # a^2 - 2 b^2
    B = FiniteAlgebra.quotient_polynomial(QQ, (-2, 0, 1))
    law = determinant_law(B)
    for a, b in ((1, 1), (3, -2), (0, 5), (7, 0)):
        M = B.multiplication_matrix(vec(QQ, (a, b)))
        oracle = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        assert oracle.value == a * a - 2 * b * b
        assert law.evaluate(vec(QQ, (a, b))) == oracle


def test_determinant_psi_row_on_split_line():
    # oracle: the 2x2 determinant of diag(a, b) is ab, so only the mixed
    # divided monomial survives
    B = split_line()
    law = determinant_law(B)
    assert law.psi_of((1, 1)) == QQ.one
    assert law.psi_of((2, 0)).is_zero
    assert law.psi_of((0, 2)).is_zero


def test_point_power_law_psi_row():
    # f -> f(Q)^d on Q[x]/(x^2 - x), Q = 1.  Oracle: expand the d-th power
    # of t_0*1(Q) + t_1*x(Q) as a plain polynomial and read coefficients;
    # the divided-monomial row carries exactly those values.
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, -1, 1))
    Q_values = (QQ.one, QQ.one)  # 1(Q), x(Q) at Q = 1
    d = 3
    t0 = MultiPoly.variable(QQ, 2, 0)
    t1 = MultiPoly.variable(QQ, 2, 1)
    expansion = (t0 * MultiPoly.constant(QQ, 2, Q_values[0])
                 + t1 * MultiPoly.constant(QQ, 2, Q_values[1])) ** d

    def evaluator(coords):
        acc = None
        for c, v in zip(coords, Q_values):
            term = c * v
            acc = term if acc is None else acc + term
        return acc ** d

    law = law_from_evaluator(B, d, evaluator)
    for alpha in law.indices:
        assert law.psi_of(alpha) == expansion.coefficient(alpha)
    # at a point with a single nonvanishing basis value the row collapses
    # to the indicator of one divided monomial
    origin = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, 1))
    law0 = law_from_evaluator(origin, d, lambda coords: coords[0] ** d)
    for alpha in law0.indices:
        expected = QQ.one if alpha == (d, 0) else QQ.zero
        assert law0.psi_of(alpha) == expected


def test_degree_zero_law_is_constant_one():
    B = split_line()
    law = law_from_evaluator(B, 0, lambda coords: QQ.one)
    assert law.psi == (QQ.one,)
    assert law.evaluate((QQ.scalar(9), QQ.scalar(4))) == QQ.one


def test_law_from_evaluator_rejects_inhomogeneous():
    B = split_line()
    with pytest.raises(ValueError):
        law_from_evaluator(B, 2, lambda coords: coords[0] * coords[1] + coords[0])


# ---------------------------------------------------------------------------
# multiplicativity

def test_product_of_homs_is_multiplicative():
    B = split_line()
    law = law_from_homs(projections(B))
    law._multiplicative = None  # force the real check
    assert is_multiplicative(law)


def test_doubled_psi_fails_unit_condition():
    B = split_line()
    law = law_from_homs(projections(B))
    doubled = PolyLaw(law.degree, B, tuple(c + c for c in law.psi))
    assert not is_multiplicative(doubled)


def test_determinant_law_on_dual_numbers_multiplicative():
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, 1))
    law = determinant_law(B)
    law._multiplicative = None
    assert is_multiplicative(law)


def test_single_hom_degree_one_is_the_hom():
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, -1, 1))
    f = evaluation_morphism(B, QQ.one)
    law = law_from_homs([f])
    assert law.degree == 1
    for j in range(B.rank):
        e = unit_vec(QQ, B.rank, j)
        assert law.evaluate(e) == f.apply(e)[0]


def test_three_projections_psi_support():
    B = FiniteAlgebra.product_ring(QQ, 3)
    law = law_from_homs([coordinate_projection(B, i) for i in range(3)])
    for alpha in law.indices:
        expected = QQ.one if alpha == (1, 1, 1) else QQ.zero
        assert law.psi_of(alpha) == expected


# ---------------------------------------------------------------------------
# symbolic evaluation is the extension of scalars

@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5),
       st.integers(-5, 5))
@settings(max_examples=25)
def test_symbolic_specializes(a, b, c, d):
    B = FiniteAlgebra.quotient_polynomial(QQ, (-2, 0, 1))
    law = determinant_law(B)
    generic = law.evaluate_generic()
    u = vec(QQ, (a, b))
    v = vec(QQ, (c, d))
    w = B.mul_vec(u, v)
    # multiplicativity observed pointwise, and generic evaluation
    # specializes to the scalar one
    assert law.evaluate(w) == law.evaluate(u) * law.evaluate(v)
    assert generic.substitute(u) == law.evaluate(u)


def test_scale_and_constant_laws():
    B = split_line()
    law = determinant_law(B)
    tripled = scale_law(law, QQ.scalar(3))
    u = vec(QQ, (2, 7))
    assert tripled.evaluate(u) == QQ.scalar(3) * law.evaluate(u)
    flat = constant_law(B)
    assert flat.evaluate(u) == QQ.one


def test_is_multiplicative_over_f3():
    B = FiniteAlgebra.quotient_polynomial(F3, (0, 0, 1))
    law = determinant_law(B)
    law._multiplicative = None
    assert is_multiplicative(law)
