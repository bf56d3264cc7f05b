"""Graded ambients, projective points, and Chow forms of cycles.

A cycle in a projective ambient is described by points with homogeneous
coordinates in a graded algebra generated in degree 1.  Its level-l Chow
form is the coefficient row, on the weight-d divided monomials of the
degree-l piece, of the law sending a degree-l form to the product of
residue norms of its values at the points.  The row depends on a chart
trivialization (points are scaled to unit last coordinate when possible),
so forms are compared projectively; the cross-level product identity holds
exactly because all levels share one set of point values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact_algebra import (FiniteAlgebra, MultiPoly, Ring, in_span,
                            row_space_basis, solve_linear, unit_vec, vec)
from .gamma import multi_indices
from .cycles_geometry import (Cycle, Point, PolynomialAmbient,
                              pairs_equivalent, reduce_cycle,
                              validate_residue_field)


# ---------------------------------------------------------------------------
# Graded algebras generated in degree 1

def _descending_monomials(nvars, degree):
    return tuple(sorted(multi_indices(nvars, degree), reverse=True))


class GradedAlgebra:
    """Finitely many graded pieces of a commutative graded algebra with
    A_0 = base, presented by bases per level and multiplication tables.

    mul[(l, m)][i][j] is the coordinate vector in level l+m of the product
    of the i-th level-l and j-th level-m basis elements.  Commutativity,
    associativity (where composable), the unit action of A_0, and
    generation of every level by A_1 are all verified at construction.
    """

    def __init__(self, ring: Ring, piece_names, mul, _check=True):
        self.ring = ring
        self.piece_names = tuple(tuple(level) for level in piece_names)
        if not self.piece_names or len(self.piece_names[0]) != 1:
            raise ValueError("need pieces starting with a rank-1 level 0")
        self.mul = {}
        for (l, m), table in mul.items():
            if l + m > self.max_level:
                raise ValueError(f"product table ({l},{m}) beyond the last level")
            self.mul[(l, m)] = tuple(
                tuple(vec(ring, table[i][j]) for j in range(self.rank(m)))
                for i in range(self.rank(l)))
        if _check:
            self._validate()

    @property
    def max_level(self):
        return len(self.piece_names) - 1

    def rank(self, level):
        return len(self.piece_names[level])

    def _table(self, l, m):
        table = self.mul.get((l, m))
        if table is None:
            raise ValueError(f"no product table for levels ({l},{m})")
        return table

    def _validate(self):
        for l in range(self.max_level + 1):
            if self.rank(l) == 0:
                raise ValueError(f"level {l} is empty")
        for (l, m), table in sorted(self.mul.items()):
            for i in range(self.rank(l)):
                for j in range(self.rank(m)):
                    if len(table[i][j]) != self.rank(l + m):
                        raise ValueError(f"table ({l},{m}) entry has wrong length")
                    if table[i][j] != self._table(m, l)[j][i]:
                        raise ValueError(f"products not commutative at levels ({l},{m})")
        for l in range(self.max_level + 1):
            table = self._table(0, l)
            for j in range(self.rank(l)):
                if table[0][j] != unit_vec(self.ring, self.rank(l), j):
                    raise ValueError(f"level-0 unit does not act as identity on level {l}")
        for l in range(self.max_level):
            vectors = []
            table = self._table(1, l)
            for i in range(self.rank(1)):
                vectors.extend(table[i])
            if len(row_space_basis(vectors)) != self.rank(l + 1):
                raise ValueError(f"level {l + 1} is not spanned by degree-1 products")
        for l in range(self.max_level + 1):
            for m in range(self.max_level + 1 - l):
                for q in range(self.max_level + 1 - l - m):
                    self._check_associative(l, m, q)

    def _check_associative(self, l, m, q):
        for i in range(self.rank(l)):
            ei = unit_vec(self.ring, self.rank(l), i)
            for j in range(self.rank(m)):
                ej = unit_vec(self.ring, self.rank(m), j)
                left = self.multiply(l, m, ei, ej)
                for k in range(self.rank(q)):
                    ek = unit_vec(self.ring, self.rank(q), k)
                    lhs = self.multiply(l + m, q, left, ek)
                    rhs = self.multiply(l, m + q, ei, self.multiply(m, q, ej, ek))
                    if lhs != rhs:
                        raise ValueError(
                            f"products not associative at levels ({l},{m},{q})")

    def multiply(self, l, m, u, v):
        """Bilinear product of level-l and level-m coordinate vectors;
        entries may be Scalars or MultiPolys."""
        table = self._table(l, m)
        symbolic = any(isinstance(c, MultiPoly) for c in tuple(u) + tuple(v))
        zero = (next(c for c in tuple(u) + tuple(v)
                     if isinstance(c, MultiPoly)).zero_like()
                if symbolic else self.ring.zero)
        out = [zero] * self.rank(l + m)
        for i, a in enumerate(u):
            if a.is_zero:
                continue
            for j, b in enumerate(v):
                if b.is_zero:
                    continue
                coef = a * b
                for k, c in enumerate(table[i][j]):
                    if not c.is_zero:
                        out[k] = out[k] + coef * c
        return tuple(out)

    def structural_eq(self, other):
        return (isinstance(other, GradedAlgebra)
                and self.ring == other.ring
                and self.piece_names == other.piece_names
                and self.mul == other.mul)

    def __repr__(self):
        ranks = ",".join(str(self.rank(l)) for l in range(self.max_level + 1))
        return f"GradedAlgebra({self.ring}, ranks {ranks})"

    @classmethod
    def polynomial(cls, ring: Ring, nvars: int, max_level: int, var_names=None):
        """The polynomial algebra on nvars degree-1 variables, truncated at
        max_level; level bases are monomials in descending lexicographic
        order, so the variables themselves appear in their given order."""
        if var_names is None:
            var_names = ("X", "Y", "Z", "W")[:nvars] if nvars <= 4 else \
                tuple(f"X{i + 1}" for i in range(nvars))
        var_names = tuple(var_names)
        if len(var_names) != nvars:
            raise ValueError("need one name per variable")
        levels = [_descending_monomials(nvars, l) for l in range(max_level + 1)]
        index = [{m: i for i, m in enumerate(level)} for level in levels]

        def name(mono):
            if sum(mono) == 0:
                return "1"
            return "*".join(f"{var_names[i]}^{k}" if k > 1 else var_names[i]
                            for i, k in enumerate(mono) if k)

        piece_names = [tuple(name(m) for m in level) for level in levels]
        mul = {}
        for l in range(max_level + 1):
            for m in range(max_level + 1 - l):
                table = []
                for a in levels[l]:
                    row = []
                    for b in levels[m]:
                        s = tuple(x + y for x, y in zip(a, b))
                        col = [ring.zero] * len(levels[l + m])
                        col[index[l + m][s]] = ring.one
                        row.append(col)
                    table.append(row)
                mul[(l, m)] = table
        return cls(ring, piece_names, mul)


# ---------------------------------------------------------------------------
# Projective points and cycles

class ProjectivePoint:
    """A closed point of the projective ambient: homogeneous coordinates on
    the degree-1 basis with values in a residue field, scaled to unit last
    coordinate whenever the last coordinate is invertible.

    Values on every higher level are derived through the degree-1
    surjections and verified multiplicative across all composable levels;
    coordinates that fail those identities do not define a point.
    """

    def __init__(self, graded: GradedAlgebra, residue_field: FiniteAlgebra,
                 coords):
        validate_residue_field(residue_field)
        if residue_field.ring != graded.ring:
            raise ValueError("residue field and graded ambient disagree on the base")
        self.graded = graded
        self.residue_field = residue_field
        coords = tuple(vec(residue_field.ring, c) for c in coords)
        if len(coords) != graded.rank(1):
            raise ValueError("need one coordinate per degree-1 basis element")
        if any(len(c) != residue_field.rank for c in coords):
            raise ValueError("coordinate has the wrong length in the residue field")
        if all(all(x.is_zero for x in c) for c in coords):
            raise ValueError("all degree-1 coordinates vanish; not a projective point")
        last = coords[-1]
        if residue_field.is_invertible(last):
            inv = residue_field.inverse_vec(last)
            coords = tuple(residue_field.mul_vec(c, inv) for c in coords)
        self.coords = coords
        if not _generates_field(residue_field, coords):
            raise ValueError("coordinates do not generate the residue field")
        self._levels = self._evaluate_levels()

    @property
    def degree(self):
        return self.residue_field.rank

    @classmethod
    def rational(cls, graded: GradedAlgebra, values):
        field = FiniteAlgebra.base(graded.ring)
        return cls(graded, field,
                   [(graded.ring.scalar(v),) for v in values])

    @classmethod
    def algebraic(cls, graded: GradedAlgebra, minpoly, coord_lists, var="z"):
        field = FiniteAlgebra.quotient_polynomial(graded.ring, minpoly, var=var)
        coords = []
        for c in coord_lists:
            c = list(c)
            if len(c) > field.rank:
                raise ValueError("coordinate has more coefficients than the field rank")
            coords.append(c + [0] * (field.rank - len(c)))
        return cls(graded, field, coords)

    def _evaluate_levels(self):
        F = self.residue_field
        ring = F.ring
        levels = [(F.one,), self.coords]
        for l in range(2, self.graded.max_level + 1):
            table = self.graded._table(1, l - 1)
            columns = []
            for i in range(self.graded.rank(1)):
                columns.extend(table[i])
            mat = tuple(tuple(columns[c][r] for c in range(len(columns)))
                        for r in range(self.graded.rank(l)))
            values = []
            for j in range(self.graded.rank(l)):
                sol = solve_linear(mat, unit_vec(ring, self.graded.rank(l), j))
                assert sol.consistent  # generation in degree 1 was validated
                value = tuple(ring.zero for _ in range(F.rank))
                prev = levels[l - 1]
                for c, coeff in enumerate(sol.solution):
                    if coeff.is_zero:
                        continue
                    i, k = divmod(c, self.graded.rank(l - 1))
                    term = F.mul_vec(self.coords[i], prev[k])
                    value = tuple(a + coeff * b for a, b in zip(value, term))
                values.append(value)
            levels.append(tuple(values))
        for l in range(self.graded.max_level + 1):
            for m in range(self.graded.max_level + 1 - l):
                table = self.graded._table(l, m)
                for i, vi in enumerate(levels[l]):
                    for j, vj in enumerate(levels[m]):
                        direct = F.mul_vec(vi, vj)
                        combo = tuple(ring.zero for _ in range(F.rank))
                        for k, c in enumerate(table[i][j]):
                            if not c.is_zero:
                                combo = tuple(a + c * b for a, b in
                                              zip(combo, levels[l + m][k]))
                        if direct != combo:
                            raise ValueError(
                                "coordinates do not satisfy the ambient's "
                                f"relations at levels ({l},{m})")
        return levels

    def level_values(self, l):
        """Residue-field values of the level-l basis elements."""
        return self._levels[l]

    def evaluate_form(self, l, coeffs):
        """Residue-field value of a level-l form with the given coefficient
        row (Scalars or MultiPolys)."""
        F = self.residue_field
        values = self._levels[l]
        symbolic = any(isinstance(c, MultiPoly) for c in coeffs)
        zero = (next(c for c in coeffs if isinstance(c, MultiPoly)).zero_like()
                if symbolic else F.ring.zero)
        out = [zero] * F.rank
        for c, value in zip(coeffs, values, strict=True):
            if c.is_zero:
                continue
            for k, x in enumerate(value):
                if not x.is_zero:
                    out[k] = out[k] + c * x
        return tuple(out)

    def __repr__(self):
        return f"ProjectivePoint(degree {self.degree})"


def _generates_field(field: FiniteAlgebra, vectors) -> bool:
    span = row_space_basis([field.one] + list(vectors))
    while True:
        extra = []
        for u in span:
            for v in span:
                w = field.mul_vec(u, v)
                if not in_span(span, w):
                    extra.append(w)
        if not extra:
            return len(span) == field.rank
        span = row_space_basis(list(span) + extra)


class ProjectiveCycle:
    """A weighted multiset of projective points sharing one graded ambient."""

    def __init__(self, graded: GradedAlgebra, points):
        self.graded = graded
        self.points = tuple((p, int(m)) for p, m in points)
        for p, m in self.points:
            if m < 1:
                raise ValueError("multiplicities must be positive")
            if p.graded is not graded and not p.graded.structural_eq(graded):
                raise ValueError("point lives in a different graded ambient")

    @property
    def ring(self):
        return self.graded.ring

    @property
    def degree(self):
        return sum(m * p.degree for p, m in self.points)


# ---------------------------------------------------------------------------
# Chow forms

@dataclass(frozen=True)
class ChowForm:
    """Coefficient row of the level-l norm law on the weight-d divided
    monomials of the degree-l piece, relative to the chart trivialization.
    Meaningful up to one overall unit."""

    graded: GradedAlgebra
    cycle: ProjectiveCycle
    level: int
    degree: int
    coeffs: tuple

    @property
    def indices(self):
        return multi_indices(self.graded.rank(self.level), self.degree)

    def coefficient(self, alpha):
        return self.coeffs[self.indices.index(tuple(alpha))]

    def proportional_to(self, other: "ChowForm") -> bool:
        if not isinstance(other, ChowForm):
            return NotImplemented
        if self.level != other.level or self.degree != other.degree or \
           not self.graded.structural_eq(other.graded):
            return False
        pivot = next((i for i, c in enumerate(self.coeffs) if not c.is_zero),
                     None)
        if pivot is None:
            return all(c.is_zero for c in other.coeffs)
        if other.coeffs[pivot].is_zero:
            return False
        a, b = self.coeffs[pivot], other.coeffs[pivot]
        return all(b * x == a * y
                   for x, y in zip(self.coeffs, other.coeffs, strict=True))


def chow_form(cycle: ProjectiveCycle, level: int) -> ChowForm:
    """The level-l Chow form by generic evaluation: apply the cycle's norm
    law to the generic level-l form and read off the coefficient row."""
    graded = cycle.graded
    if not 0 <= level <= graded.max_level:
        raise ValueError(f"level {level} outside the graded ambient")
    ring = cycle.ring
    n = graded.rank(level)
    d = cycle.degree
    generic = tuple(MultiPoly.variable(ring, n, j) for j in range(n))
    total = MultiPoly.constant(ring, n, ring.one)
    for p, m in cycle.points:
        value = p.evaluate_form(level, generic)
        factor = p.residue_field.norm_of_poly(value) ** m
        total = total * factor
    if not total.is_homogeneous(d):
        raise ArithmeticError("norm of the generic form is not homogeneous; "
                              "malformed cycle")
    coeffs = tuple(total.coefficient(alpha) for alpha in multi_indices(n, d))
    assert any(not c.is_zero for c in coeffs)
    return ChowForm(graded, cycle, level, d, coeffs)


def _functional_value(coeffs, indices, poly_coords):
    zero = poly_coords[0].zero_like() if poly_coords else None
    total = zero
    powers = [{} for _ in poly_coords]

    def power(i, k):
        if k == 0:
            return None
        if k not in powers[i]:
            base = poly_coords[i]
            powers[i][k] = base if k == 1 else power(i, k - 1) * base
        return powers[i][k]

    for alpha, c in zip(indices, coeffs, strict=True):
        if c.is_zero:
            continue
        term = None
        for i, a in enumerate(alpha):
            if a:
                p = power(i, a)
                term = p if term is None else term * p
        term = term * c if term is not None else zero.one_like() * c
        total = total + term
    return total


def chow_multiplicativity_check(form_l: ChowForm, form_m: ChowForm) -> bool:
    """Whether the two forms of one cycle satisfy the cross-level product
    identity: the level l+m form applied to a product of generic forms
    equals the product of the two forms' values, symbolically."""
    if form_l.cycle is not form_m.cycle:
        raise ValueError("forms must come from the same cycle")
    cycle = form_l.cycle
    graded = cycle.graded
    l, m = form_l.level, form_m.level
    if l + m > graded.max_level:
        raise ValueError("the graded ambient does not reach the product level")
    ring = cycle.ring
    form_lm = chow_form(cycle, l + m)
    nl, nm = graded.rank(l), graded.rank(m)
    width = nl + nm
    s = tuple(MultiPoly.variable(ring, width, i) for i in range(nl))
    t = tuple(MultiPoly.variable(ring, width, nl + j) for j in range(nm))
    product_coords = graded.multiply(l, m, s, t)
    lhs = _functional_value(form_lm.coeffs, form_lm.indices, product_coords)
    left = _functional_value(
        form_l.coeffs, form_l.indices,
        tuple(MultiPoly.variable(ring, width, i) for i in range(nl)))
    right = _functional_value(
        form_m.coeffs, form_m.indices,
        tuple(MultiPoly.variable(ring, width, nl + j) for j in range(nm)))
    return lhs == left * right


def affine_chart_cycle(cycle: ProjectiveCycle) -> Cycle:
    """The cycle read in the chart where the last degree-1 coordinate is 1.
    Every point must be finite in that chart (unit last coordinate)."""
    graded = cycle.graded
    if graded.rank(1) < 2:
        raise ValueError("ambient has no nontrivial chart")
    names = graded.piece_names[1][:-1]
    ambient = PolynomialAmbient(graded.ring, names)
    points = []
    for p, mult in cycle.points:
        if p.coords[-1] != p.residue_field.one:
            raise ValueError("point at infinity; chart comparison unavailable")
        affine = Point(p.residue_field, var_images=list(p.coords[:-1]))
        points.append((affine, mult))
    return Cycle(ambient, points)


def chow_determines_cycle(cycle1: ProjectiveCycle, cycle2: ProjectiveCycle,
                          level: int) -> bool:
    """Consistency check between Chow-form comparison and pair equivalence:
    forms are compared projectively, cycles through their chart pairs, and
    the two verdicts must agree.  Distinct degrees short-circuit to True
    (the cycles are inequivalent and no form comparison is attempted);
    equal degrees need characteristic 0 and level at least 1."""
    if cycle1.degree != cycle2.degree:
        return True
    if not cycle1.graded.structural_eq(cycle2.graded):
        raise ValueError("cycles live in different graded ambients")
    if cycle1.ring.p is not None:
        raise ValueError("the determination statement needs characteristic 0")
    if level < 1:
        raise ValueError("level must be at least 1")
    if cycle1.graded.rank(1) != 2:
        raise ValueError("chart pair comparison is materialized for a "
                         "2-dimensional degree-1 piece only")
    forms_equal = chow_form(cycle1, level).proportional_to(
        chow_form(cycle2, level))
    pair1 = reduce_cycle(affine_chart_cycle(cycle1))
    pair2 = reduce_cycle(affine_chart_cycle(cycle2))
    return forms_equal == pairs_equivalent(pair1, pair2)
