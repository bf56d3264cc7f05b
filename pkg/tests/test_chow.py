import dataclasses

import pytest

from gamma_cycles.exact_algebra import GF, QQ, MultiPoly
from gamma_cycles.chow import (GradedAlgebra, ProjectiveCycle,
                               ProjectivePoint, affine_chart_cycle,
                               chow_determines_cycle, chow_form,
                               chow_multiplicativity_check)
from gamma_cycles.cycles_geometry import pairs_equivalent, reduce_cycle

F5 = GF(5)


def proj_line(max_level=3, ring=QQ):
    return GradedAlgebra.polynomial(ring, 2, max_level)


def rational_points_cycle(graded, *values_with_mults):
    points = [(ProjectivePoint.rational(graded,
                                        (graded.ring.scalar(v), graded.ring.one)), m)
              for v, m in values_with_mults]
    return ProjectiveCycle(graded, points)


# ---------------------------------------------------------------------------
# the graded coordinate ring

def test_polynomial_graded_levels():
    P1 = proj_line(2)
    assert P1.piece_names[0] == ("1",)
    assert P1.piece_names[1] == ("X", "Y")
    assert P1.piece_names[2] == ("X^2", "X*Y", "Y^2")


def test_graded_multiplication_is_polynomial():
    P1 = proj_line(3)
    # X * (X + Y) = X^2 + XY in level-2 coordinates
    x = (QQ.one, QQ.zero)
    x_plus_y = (QQ.one, QQ.one)
    product = P1.multiply(1, 1, x, x_plus_y)
    assert [c.value for c in product] == [1, 1, 0]


# ---------------------------------------------------------------------------
# projective points

def test_rescaled_coordinates_are_the_same_point():
    P1 = proj_line(2)
    p = ProjectivePoint.rational(P1, (QQ.scalar(2), QQ.one))
    q = ProjectivePoint.rational(P1, (QQ.scalar(4), QQ.scalar(2)))
    for level in (1, 2):
        assert p.level_values(level) == q.level_values(level)


def test_point_values_multiply_across_levels():
    P1 = proj_line(3)
    p = ProjectivePoint.rational(P1, (QQ.scalar(3), QQ.one))
    v1 = p.level_values(1)
    v2 = p.level_values(2)
    v3 = p.level_values(3)
    # X^2 * Y = X^2-value times Y-value
    field = p.residue_field
    assert v3[1] == field.mul_vec(v2[0], v1[1])


def test_quadratic_point_lives_in_its_field():
    P1 = proj_line(2)
    p = ProjectivePoint.algebraic(P1, (-2, 0, 1), [[0, 1], [1, 0]])
    assert p.degree == 2
    # X^2 evaluates to the class of z^2 = 2
    assert p.level_values(2)[0] == p.residue_field.element((2, 0))


# ---------------------------------------------------------------------------
# Chow forms

def test_two_point_form_frozen():
    # oracle: (aX + bY) at [0:1] times at [1:1] is b * (a + b); the plain
    # coefficient row over (X-weight, Y-weight) is 0, 1, 1
    P1 = proj_line(2)
    cycle = rational_points_cycle(P1, (0, 1), (1, 1))
    a = MultiPoly.variable(QQ, 2, 0)
    b = MultiPoly.variable(QQ, 2, 1)
    oracle = b * (a + b)
    form = chow_form(cycle, 1)
    assert form.degree == 2
    for alpha in form.indices:
        assert form.coefficient(alpha) == oracle.coefficient(alpha)
    assert [c.value for c in form.coeffs] == [1, 1, 0]  # (0,2), (1,1), (2,0)


def test_fat_point_form_is_pure_power():
    P1 = proj_line(3)
    for d in (2, 3):
        cycle = rational_points_cycle(P1, (0, d))
        form = chow_form(cycle, 1)
        for alpha, c in zip(form.indices, form.coeffs):
            expected = QQ.one if alpha == (0, d) else QQ.zero
            assert c == expected


def test_level_zero_form_is_one():
    P1 = proj_line(2)
    cycle = rational_points_cycle(P1, (0, 1), (1, 1))
    form = chow_form(cycle, 0)
    assert form.coeffs == (QQ.one,)


def test_quadratic_point_form_is_its_norm():
    P1 = proj_line(2)
    p = ProjectivePoint.algebraic(P1, (-2, 0, 1), [[0, 1], [1, 0]])
    form = chow_form(ProjectiveCycle(P1, [(p, 1)]), 1)
    # norm of a*sqrt(2) + b over Q: b^2 - 2 a^2
    assert [c.value for c in form.coeffs] == [1, 0, -2]


def test_proportional_forms_compare_equal():
    P1 = proj_line(2)
    cycle = rational_points_cycle(P1, (0, 1), (1, 1))
    form = chow_form(cycle, 1)
    doubled = dataclasses.replace(
        form, coeffs=tuple(QQ.scalar(2) * c for c in form.coeffs))
    assert form.proportional_to(doubled)
    assert doubled.proportional_to(form)


def test_distinct_supports_give_distinct_forms():
    P1 = proj_line(2)
    cycles = [rational_points_cycle(P1, *support) for support in
              ([(0, 1), (1, 1)], [(0, 2)], [(2, 1), (1, 1)])]
    forms = [chow_form(c, 1) for c in cycles]
    for i in range(len(forms)):
        for j in range(i + 1, len(forms)):
            assert not forms[i].proportional_to(forms[j])


# ---------------------------------------------------------------------------
# multiplicativity

def test_multiplicativity_on_the_two_point_cycle():
    P1 = proj_line(3)
    cycle = rational_points_cycle(P1, (0, 1), (1, 1))
    for l in range(4):
        for m in range(4 - l):
            assert chow_multiplicativity_check(chow_form(cycle, l),
                                               chow_form(cycle, m))


def test_corrupted_form_fails_multiplicativity():
    P1 = proj_line(2)
    cycle = rational_points_cycle(P1, (0, 1), (1, 1))
    form = chow_form(cycle, 1)
    bumped = list(form.coeffs)
    bumped[0] = bumped[0] + QQ.one
    corrupted = dataclasses.replace(form, coeffs=tuple(bumped))
    assert not chow_multiplicativity_check(corrupted, corrupted)


# ---------------------------------------------------------------------------
# forms determine cycles on the line

def test_affine_chart_recovers_the_cycle():
    P1 = proj_line(2)
    cycle = rational_points_cycle(P1, (0, 2), (1, 1))
    chart = affine_chart_cycle(cycle)
    pair = reduce_cycle(chart)
    assert [c.value for c in pair.generator] == [0, 0, -1, 1]


def test_chart_rejects_point_at_infinity():
    P1 = proj_line(2)
    infinity = ProjectivePoint.rational(P1, (QQ.one, QQ.zero))
    cycle = ProjectiveCycle(P1, [(infinity, 1)])
    with pytest.raises(ValueError):
        affine_chart_cycle(cycle)


def test_chow_determination_consistency():
    P1 = proj_line(2)
    c1 = rational_points_cycle(P1, (0, 1), (1, 1))
    c2 = rational_points_cycle(P1, (0, 2))
    c3 = rational_points_cycle(P1, (0, 1), (1, 1))
    assert chow_determines_cycle(c1, c3, 1)   # equal forms, equal cycles
    assert chow_determines_cycle(c1, c2, 1)   # distinct forms, distinct cycles
    # degree mismatch short-circuits
    assert chow_determines_cycle(c1, rational_points_cycle(P1, (0, 1)), 1)


def test_chow_determination_needs_characteristic_zero():
    P1 = proj_line(2, ring=F5)
    c1 = ProjectiveCycle(P1, [(ProjectivePoint.rational(
        P1, (F5.zero, F5.one)), 1)])
    with pytest.raises(ValueError):
        chow_determines_cycle(c1, c1, 1)
