from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gamma_cycles.exact_algebra import (
    GF, QQ, AlgebraMorphism, FiniteAlgebra, MultiPoly, classical_charpoly,
    det, evaluation_morphism, ideal_closure, in_span, poly_divmod, poly_gcd,
    poly_is_zero, poly_mul, poly_to_string, quotient_algebra, rref,
    solve_linear, unit_vec, vec, zero_vec)

F2 = GF(2)
F5 = GF(5)

rationals = st.fractions(min_value=-30, max_value=30, max_denominator=7)


def q(values):
    return vec(QQ, values)


# ---------------------------------------------------------------------------
# scalars

@given(rationals, rationals)
def test_scalar_field_ops(a, b):
    x, y = QQ.scalar(a), QQ.scalar(b)
    assert (x + y).value == a + b
    assert (x * y).value == a * b
    assert (x - y).value == a - b
    if b != 0:
        assert (x / y).value == Fraction(a) / b


@given(st.integers(-40, 40), st.integers(-40, 40))
def test_scalar_mod_p(a, b):
    x, y = F5.scalar(a), F5.scalar(b)
    assert (x * y).value == (a * b) % 5
    assert (x + y).value == (a + b) % 5


def test_scalar_parse():
    assert QQ.parse("3/2").value == Fraction(3, 2)
    assert QQ.parse("-7").value == -7
    assert F5.parse("8").value == 3
    with pytest.raises(ValueError):
        QQ.parse("x")


# ---------------------------------------------------------------------------
# linear algebra

def test_kernel_mod_2_frozen():
    # all-ones 2x2 system over F_2; elimination leaves one free column and
    # the kernel vector (1, 1)
    rows = (vec(F2, (1, 1)), vec(F2, (1, 1)))
    sol = solve_linear(rows, zero_vec(F2, 2))
    assert sol.consistent
    assert len(sol.kernel) == 1
    assert sol.kernel[0] == vec(F2, (1, 1))


matrix_entries = st.integers(-5, 5)


@st.composite
def square_systems(draw):
    n = draw(st.integers(1, 4))
    rows = tuple(q([draw(matrix_entries) for _ in range(n)]) for _ in range(n))
    rhs = q([draw(matrix_entries) for _ in range(n)])
    return rows, rhs


@given(square_systems())
def test_solve_linear_certifies(system):
    rows, rhs = system
    sol = solve_linear(rows, rhs)
    if sol.consistent:
        n = len(rows)
        for i in range(n):
            acc = QQ.zero
            for j, c in enumerate(sol.solution):
                acc = acc + rows[i][j] * c
            assert acc == rhs[i]
    for k in sol.kernel:
        for i in range(len(rows)):
            acc = QQ.zero
            for j, c in enumerate(k):
                acc = acc + rows[i][j] * c
            assert acc.is_zero


@given(square_systems())
def test_rref_pivots_are_unit_columns(system):
    rows, _ = system
    reduced, pivots = rref([list(r) for r in rows])
    for r, p in enumerate(pivots):
        assert reduced[r][p] == QQ.one
        for r2 in range(len(reduced)):
            if r2 != r:
                assert reduced[r2][p].is_zero


def test_det_2x2_oracle():
    # ad - bc by hand
    m = (q((3, 5)), q((2, 7)))
    assert det(m).value == 3 * 7 - 5 * 2


@given(st.lists(st.lists(matrix_entries, min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_det_vanishes_iff_kernel(entries):
    rows = tuple(q(r) for r in entries)
    sol = solve_linear(rows, zero_vec(QQ, 3))
    assert det(rows).is_zero == bool(sol.kernel)


# ---------------------------------------------------------------------------
# polynomials

poly_lists = st.lists(st.integers(-6, 6), min_size=1, max_size=5)


@given(poly_lists, poly_lists)
def test_poly_divmod_identity(a, b):
    pa = [QQ.scalar(c) for c in a]
    pb = [QQ.scalar(c) for c in b]
    if poly_is_zero(pb):
        return
    quot, rem = poly_divmod(pa, pb)
    recomposed = poly_mul(quot, pb)
    total = [QQ.zero] * max(len(recomposed), len(rem), len(pa))
    for i, c in enumerate(recomposed):
        total[i] = total[i] + c
    for i, c in enumerate(rem):
        total[i] = total[i] + c
    for i, c in enumerate(pa):
        assert total[i] == c
        total[i] = QQ.zero
    assert all(c.is_zero for c in total)


@given(poly_lists, poly_lists)
def test_poly_gcd_divides_both(a, b):
    pa = [QQ.scalar(c) for c in a]
    pb = [QQ.scalar(c) for c in b]
    g = poly_gcd(pa, pb)
    if poly_is_zero(g):
        assert poly_is_zero(pa) and poly_is_zero(pb)
        return
    for p in (pa, pb):
        _, rem = poly_divmod(p, g)
        assert poly_is_zero(rem)


def test_poly_to_string_display():
    coeffs = [QQ.scalar(c) for c in (0, 0, 1, -1)]
    assert poly_to_string(coeffs, "t") == "t^2 - t^3"
    assert poly_to_string([QQ.zero], "t") == "0"


# ---------------------------------------------------------------------------
# finite algebras

def test_quotient_polynomial_structure():
    B = FiniteAlgebra.quotient_polynomial(QQ, (-2, 0, 1))
    assert B.basis_names == ("1", "x")
    # x * x = 2
    assert B.mul_vec(unit_vec(QQ, 2, 1), unit_vec(QQ, 2, 1)) == q((2, 0))


def test_ideal_closure_frozen():
    # multiples of x inside Q[x]/(x^3): x and x^2 close the span by hand
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, 0, 1))
    closure = ideal_closure(B, [unit_vec(QQ, 3, 1)])
    assert len(closure) == 2
    assert in_span(closure, unit_vec(QQ, 3, 1))
    assert in_span(closure, unit_vec(QQ, 3, 2))
    assert not in_span(closure, B.one)


def test_classical_charpoly_zero_matrix():
    rows = (q((0, 0)), q((0, 0)))
    assert poly_to_string(classical_charpoly(rows), "t") == "t^2"


def test_classical_charpoly_sqrt2():
    # multiplication by x on Q[x]/(x^2 - 2) is [[0, 2], [1, 0]]; cofactor
    # expansion of tI - M gives t^2 - 2
    B = FiniteAlgebra.quotient_polynomial(QQ, (-2, 0, 1))
    M = B.multiplication_matrix(unit_vec(QQ, 2, 1))
    assert tuple(classical_charpoly(M)) == tuple(q((-2, 0, 1)))


@given(st.lists(st.lists(matrix_entries, min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_classical_charpoly_trace_det(entries):
    rows = tuple(q(r) for r in entries)
    coeffs = classical_charpoly(rows)
    trace = rows[0][0] + rows[1][1] + rows[2][2]
    assert coeffs[3] == QQ.one
    assert coeffs[2] == QQ.zero - trace
    assert coeffs[0] == QQ.zero - det(rows)


def test_quotient_by_zero_ideal_is_identity():
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, 1))
    quot = quotient_algebra(B, [])
    assert quot.algebra.rank == B.rank
    for j in range(B.rank):
        e = unit_vec(QQ, B.rank, j)
        assert quot.projection.apply(e) == e


def test_quotient_of_cube_by_square_frozen():
    # Q[x]/(x^3) mod (x^2): rank drops to 2 and x^2 maps to zero
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, 0, 1))
    ideal = ideal_closure(B, [unit_vec(QQ, 3, 2)])
    quot = quotient_algebra(B, ideal)
    model = FiniteAlgebra.quotient_polynomial(QQ, (0, 0, 1))
    assert quot.algebra.rank == 2
    iso_image = quot.projection.apply(unit_vec(QQ, 3, 1))
    # the image of x squares to zero in the quotient
    assert quot.algebra.mul_vec(iso_image, iso_image) == zero_vec(QQ, 2)
    assert quot.algebra.rank == model.rank


def test_algebra_rejects_non_associative_table():
    # a two-dimensional table where e1*e1 = e1 breaks associativity against
    # the stated unit
    mul = [[(1, 0), (0, 0)], [(0, 0), (0, 1)]]
    with pytest.raises(ValueError):
        FiniteAlgebra(QQ, ("1", "e"), mul, (1, 0))


def test_evaluation_morphism_is_root_checked():
    B = FiniteAlgebra.quotient_polynomial(QQ, (-2, 0, 1))
    with pytest.raises(ValueError):
        evaluation_morphism(B, QQ.scalar(1))
    C = FiniteAlgebra.quotient_polynomial(QQ, (0, -1, 1))
    f = evaluation_morphism(C, QQ.one)
    # x evaluates to 1, so does x + 3 evaluate to 4
    assert f.apply(q((3, 1))) == (QQ.scalar(4),)


def test_morphism_composition_and_kernel():
    B = FiniteAlgebra.quotient_polynomial(QQ, (0, -1, 1))
    f = evaluation_morphism(B, QQ.one)
    ident = AlgebraMorphism.identity(B)
    assert f.compose(ident).columns == f.columns
    kernel = f.kernel_basis()
    assert len(kernel) == 1
    for k in kernel:
        assert f.apply(k) == (QQ.zero,)


# ---------------------------------------------------------------------------
# multivariate polynomials

@given(st.integers(-4, 4), st.integers(-4, 4))
def test_multipoly_evaluation_consistency(a, b):
    x = MultiPoly.variable(QQ, 2, 0)
    y = MultiPoly.variable(QQ, 2, 1)
    p = (x + y) * (x + y) - x * y
    point = (QQ.scalar(a), QQ.scalar(b))
    expected = QQ.scalar((a + b) ** 2 - a * b)
    assert p.substitute(point) == expected


def test_multipoly_homogeneity():
    x = MultiPoly.variable(QQ, 2, 0)
    y = MultiPoly.variable(QQ, 2, 1)
    assert (x * x + x * y).is_homogeneous(2)
    assert not (x * x + y).is_homogeneous(2)
