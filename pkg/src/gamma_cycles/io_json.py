"""Strict JSON schemas for the package's objects.

Every loader validates the complete shape of its input and rejects unknown
fields instead of ignoring them; malformed input raises SchemaError with a
message naming the offending fragment.  Dumps are canonical: construction
order is deterministic and scalars are printed in lowest terms, so equal
objects serialize to identical bytes.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .exact_algebra import (FiniteAlgebra, AlgebraMorphism, Ring, Scalar,
                            GF, QQ)
from .gamma import GammaElement
from .laws import PolyLaw
from .trace_norm import TraceMap
from .cycles_geometry import (Cycle, CyclePair, Point, PolynomialAmbient,
                              NormedPatch, Cocycle)
from .chow import GradedAlgebra, ProjectivePoint, ProjectiveCycle


class SchemaError(ValueError):
    """Input does not match the documented JSON shape."""


def _require_mapping(obj, what, required, optional=()):
    if not isinstance(obj, dict):
        raise SchemaError(f"{what} must be a JSON object, got {type(obj).__name__}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise SchemaError(f"{what} is missing field(s) {missing}")
    unknown = [k for k in obj if k not in required and k not in optional]
    if unknown:
        raise SchemaError(f"{what} has unknown field(s) {unknown}")


def _require_list(obj, what):
    if not isinstance(obj, list):
        raise SchemaError(f"{what} must be a JSON array, got {type(obj).__name__}")
    return obj


def _require_int(obj, what):
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise SchemaError(f"{what} must be an integer, got {obj!r}")
    return obj


def _require_str(obj, what):
    if not isinstance(obj, str):
        raise SchemaError(f"{what} must be a string, got {obj!r}")
    return obj


# ---------------------------------------------------------------------------
# Scalars and rings

def scalar_to_json(s: Scalar):
    v = s.value
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return int(v)


def scalar_from_json(ring: Ring, obj, what="scalar") -> Scalar:
    if isinstance(obj, bool):
        raise SchemaError(f"{what} must be an integer or fraction string, got {obj!r}")
    if isinstance(obj, int):
        return ring.scalar(obj)
    if isinstance(obj, str):
        try:
            return ring.parse(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{what}: {exc}") from None
    raise SchemaError(f"{what} must be an integer or fraction string, got {obj!r}")


def _scalars_from_json(ring, obj, what):
    return tuple(scalar_from_json(ring, v, f"{what}[{i}]")
                 for i, v in enumerate(_require_list(obj, what)))


def ring_to_json(ring: Ring):
    if ring.p is None:
        return {"kind": "Q"}
    return {"kind": "Fp", "p": ring.p}


def ring_from_json(obj) -> Ring:
    _require_mapping(obj, "ring", ["kind"], ["p"])
    kind = _require_str(obj["kind"], "ring.kind")
    if kind == "Q":
        if "p" in obj:
            raise SchemaError("ring of kind Q takes no p")
        return QQ
    if kind == "Fp":
        if "p" not in obj:
            raise SchemaError("ring of kind Fp needs p")
        try:
            return GF(_require_int(obj["p"], "ring.p"))
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
    raise SchemaError(f"unknown ring kind {kind!r}")


# ---------------------------------------------------------------------------
# Finite algebras and morphisms

def _presentation_to_json(pres):
    if pres is None:
        return None
    if pres["kind"] == "univariate":
        return {"kind": "univariate",
                "minpoly": [scalar_to_json(c) for c in pres["minpoly"]],
                "var": pres["var"]}
    if pres["kind"] == "truncated":
        return {"kind": "truncated", "nvars": pres["nvars"],
                "order": pres["order"]}
    return None


def _presentation_from_json(ring, obj):
    _require_mapping(obj, "presentation", ["kind"], ["minpoly", "var", "nvars", "order"])
    kind = _require_str(obj["kind"], "presentation.kind")
    if kind == "univariate":
        if "minpoly" not in obj or "var" not in obj:
            raise SchemaError("univariate presentation needs minpoly and var")
        return {"kind": "univariate",
                "minpoly": _scalars_from_json(ring, obj["minpoly"],
                                              "presentation.minpoly"),
                "var": _require_str(obj["var"], "presentation.var")}
    if kind == "truncated":
        if "nvars" not in obj or "order" not in obj:
            raise SchemaError("truncated presentation needs nvars and order")
        return {"kind": "truncated",
                "nvars": _require_int(obj["nvars"], "presentation.nvars"),
                "order": _require_int(obj["order"], "presentation.order")}
    raise SchemaError(f"unknown presentation kind {kind!r}")


def algebra_to_json(algebra: FiniteAlgebra):
    out = {"ring": ring_to_json(algebra.ring),
           "rank": algebra.rank,
           "basis": list(algebra.basis_names),
           "one": [scalar_to_json(c) for c in algebra.one],
           "mul": [[[scalar_to_json(c) for c in algebra.mul[i][j]]
                    for j in range(algebra.rank)]
                   for i in range(algebra.rank)]}
    pres = _presentation_to_json(algebra.presentation)
    if pres is not None:
        out["presentation"] = pres
    return out


def algebra_from_json(obj) -> FiniteAlgebra:
    _require_mapping(obj, "algebra", ["ring", "rank", "basis", "one", "mul"],
                     ["presentation"])
    ring = ring_from_json(obj["ring"])
    rank = _require_int(obj["rank"], "algebra.rank")
    basis = [_require_str(b, "algebra.basis entry")
             for b in _require_list(obj["basis"], "algebra.basis")]
    if len(basis) != rank:
        raise SchemaError(f"algebra.rank is {rank} but basis lists {len(basis)} names")
    one = _scalars_from_json(ring, obj["one"], "algebra.one")
    mul_rows = _require_list(obj["mul"], "algebra.mul")
    if len(mul_rows) != rank:
        raise SchemaError("algebra.mul must have one row per basis element")
    mul = []
    for i, row in enumerate(mul_rows):
        row = _require_list(row, f"algebra.mul[{i}]")
        if len(row) != rank:
            raise SchemaError(f"algebra.mul[{i}] must have {rank} entries")
        mul.append([_scalars_from_json(ring, cell, f"algebra.mul[{i}][{j}]")
                    for j, cell in enumerate(row)])
    pres = (_presentation_from_json(ring, obj["presentation"])
            if "presentation" in obj else None)
    try:
        algebra = FiniteAlgebra(ring, basis, mul, one, presentation=pres)
    except ValueError as exc:
        raise SchemaError(f"algebra axioms fail: {exc}") from None
    if pres is not None:
        _check_presentation(algebra)
    return algebra


def _check_presentation(algebra: FiniteAlgebra):
    pres = algebra.presentation
    if pres["kind"] == "univariate":
        model = FiniteAlgebra.quotient_polynomial(
            algebra.ring, pres["minpoly"], var=pres["var"])
    else:
        model = FiniteAlgebra.truncated_polynomials(
            algebra.ring, pres["nvars"], pres["order"])
    if not model.structural_eq(algebra):
        raise SchemaError("presentation does not match the structure constants")


def morphism_to_json(phi: AlgebraMorphism):
    return {"source": algebra_to_json(phi.source),
            "target": algebra_to_json(phi.target),
            "columns": [[scalar_to_json(c) for c in col] for col in phi.columns]}


def morphism_from_json(obj) -> AlgebraMorphism:
    _require_mapping(obj, "morphism", ["source", "target", "columns"])
    source = algebra_from_json(obj["source"])
    target = algebra_from_json(obj["target"])
    cols = _require_list(obj["columns"], "morphism.columns")
    if len(cols) != source.rank:
        raise SchemaError("morphism.columns must have one column per source basis element")
    columns = [_scalars_from_json(target.ring, col, f"morphism.columns[{i}]")
               for i, col in enumerate(cols)]
    try:
        return AlgebraMorphism(source, target, columns)
    except ValueError as exc:
        raise SchemaError(f"morphism axioms fail: {exc}") from None


# ---------------------------------------------------------------------------
# Divided-power elements and laws

def _index_key(alpha):
    return ",".join(str(a) for a in alpha)


def _index_from_key(key, rank, weight, what):
    parts = _require_str(key, what).split(",")
    try:
        alpha = tuple(int(p) for p in parts)
    except ValueError:
        raise SchemaError(f"{what}: bad index key {key!r}") from None
    if len(alpha) != rank or any(a < 0 for a in alpha) or sum(alpha) != weight:
        raise SchemaError(f"{what}: index {key!r} does not have shape "
                          f"(rank {rank}, weight {weight})")
    return alpha


def gamma_to_json(element: GammaElement):
    terms = {}
    for alpha, c in element.sorted_terms():
        terms[_index_key(alpha)] = scalar_to_json(c)
    return {"degree": element.degree, "rank": element.rank, "terms": terms}


def gamma_from_json(ring: Ring, obj) -> GammaElement:
    _require_mapping(obj, "gamma element", ["degree", "rank", "terms"])
    degree = _require_int(obj["degree"], "gamma.degree")
    rank = _require_int(obj["rank"], "gamma.rank")
    if degree < 0 or rank < 0:
        raise SchemaError("gamma.degree and gamma.rank must be nonnegative")
    if not isinstance(obj["terms"], dict):
        raise SchemaError("gamma.terms must be a JSON object")
    element = GammaElement.zero(ring, rank, degree)
    for key, value in obj["terms"].items():
        alpha = _index_from_key(key, rank, degree, "gamma.terms key")
        c = scalar_from_json(ring, value, f"gamma.terms[{key}]")
        element = element + GammaElement.basis(ring, alpha).scale(c)
    return element


def law_to_json(law: PolyLaw):
    psi = {}
    for alpha, c in zip(law.indices, law.psi, strict=True):
        if not c.is_zero:
            psi[_index_key(alpha)] = scalar_to_json(c)
    return {"degree": law.degree,
            "carrier": algebra_to_json(law.carrier),
            "psi": psi}


def law_from_json(obj) -> PolyLaw:
    _require_mapping(obj, "law", ["degree", "carrier", "psi"])
    degree = _require_int(obj["degree"], "law.degree")
    if degree < 0:
        raise SchemaError("law.degree must be nonnegative")
    carrier = algebra_from_json(obj["carrier"])
    if not isinstance(obj["psi"], dict):
        raise SchemaError("law.psi must be a JSON object")
    psi = {}
    for key, value in obj["psi"].items():
        alpha = _index_from_key(key, carrier.rank, degree, "law.psi key")
        psi[alpha] = scalar_from_json(carrier.ring, value, f"law.psi[{key}]")
    return PolyLaw(degree, carrier, psi)


def trace_to_json(trace: TraceMap):
    return {"degree": trace.degree,
            "carrier": algebra_to_json(trace.carrier),
            "theta": [scalar_to_json(c) for c in trace.theta]}


def trace_from_json(obj) -> TraceMap:
    _require_mapping(obj, "trace", ["degree", "carrier", "theta"])
    degree = _require_int(obj["degree"], "trace.degree")
    carrier = algebra_from_json(obj["carrier"])
    theta = _scalars_from_json(carrier.ring, obj["theta"], "trace.theta")
    if len(theta) != carrier.rank:
        raise SchemaError("trace.theta must have one entry per carrier basis element")
    try:
        return TraceMap(carrier, degree, theta)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


# ---------------------------------------------------------------------------
# Cycles

_POLY_AMBIENT = re.compile(r"^poly:(Q|F(\d+))\[([^\]]+)\]$")


def ambient_to_json(ambient):
    if isinstance(ambient, PolynomialAmbient):
        return f"poly:{ambient}"
    return algebra_to_json(ambient)


def ambient_from_json(obj):
    if isinstance(obj, str):
        m = _POLY_AMBIENT.match(obj)
        if not m:
            raise SchemaError(f"bad polynomial ambient {obj!r}; expected "
                              "poly:Q[x] or poly:F<p>[x,y]")
        ring = QQ if m.group(1) == "Q" else GF(int(m.group(2)))
        names = tuple(v.strip() for v in m.group(3).split(","))
        if any(not v for v in names):
            raise SchemaError(f"bad variable list in ambient {obj!r}")
        return PolynomialAmbient(ring, names)
    return algebra_from_json(obj)


def _point_to_json(point: Point, ambient):
    field = point.residue_field
    pres = field.presentation
    minpoly = ([scalar_to_json(c) for c in pres["minpoly"]]
               if pres and pres["kind"] == "univariate" else [0, 1])
    if isinstance(ambient, PolynomialAmbient):
        images = point.var_images
    else:
        images = point.evaluation.columns
    return {"minpoly": minpoly,
            "coords": [[scalar_to_json(c) for c in img] for img in images]}


def cycle_to_json(cycle: Cycle):
    return {"ambient": ambient_to_json(cycle.ambient),
            "points": [dict(_point_to_json(p, cycle.ambient), mult=m)
                       for p, m in cycle.points]}


def _point_from_json(ring, ambient, obj, what):
    _require_mapping(obj, what, ["minpoly", "coords", "mult"])
    minpoly = _scalars_from_json(ring, obj["minpoly"], f"{what}.minpoly")
    if len(minpoly) < 2:
        raise SchemaError(f"{what}.minpoly must have degree at least 1")
    coords = _require_list(obj["coords"], f"{what}.coords")
    mult = _require_int(obj["mult"], f"{what}.mult")
    if mult < 1:
        raise SchemaError(f"{what}.mult must be positive")
    try:
        field = FiniteAlgebra.quotient_polynomial(ring, minpoly, var="z")
    except ValueError as exc:
        raise SchemaError(f"{what}.minpoly: {exc}") from None
    rows = []
    for i, c in enumerate(coords):
        row = list(_scalars_from_json(ring, c, f"{what}.coords[{i}]"))
        if len(row) > field.rank:
            raise SchemaError(f"{what}.coords[{i}] is longer than the residue field rank")
        rows.append(tuple(row + [ring.zero] * (field.rank - len(row))))
    try:
        if isinstance(ambient, PolynomialAmbient):
            if len(rows) != ambient.nvars:
                raise SchemaError(f"{what}.coords must list one value per variable")
            point = Point(field, var_images=rows)
        else:
            if len(rows) != ambient.rank:
                raise SchemaError(f"{what}.coords must list one value per "
                                  "ambient basis element")
            point = Point(field, evaluation=AlgebraMorphism(ambient, field, rows))
    except ValueError as exc:
        raise SchemaError(f"{what}: {exc}") from None
    return point, mult


def cycle_from_json(obj) -> Cycle:
    _require_mapping(obj, "cycle", ["ambient", "points"])
    ambient = ambient_from_json(obj["ambient"])
    ring = ambient.ring
    points = [_point_from_json(ring, ambient, p, f"cycle.points[{i}]")
              for i, p in enumerate(_require_list(obj["points"], "cycle.points"))]
    try:
        return Cycle(ambient, points)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def pair_to_json(pair: CyclePair):
    out = {"ambient": ambient_to_json(pair.ambient),
           "law": law_to_json(pair.law)}
    if isinstance(pair.ambient, PolynomialAmbient):
        out["generator"] = [scalar_to_json(c) for c in pair.generator]
    else:
        out["carrier"] = algebra_to_json(pair.carrier)
        out["projection"] = [[scalar_to_json(c) for c in col]
                             for col in pair.projection.columns]
    return out


def pair_from_json(obj) -> CyclePair:
    _require_mapping(obj, "pair", ["ambient", "law"],
                     ["generator", "carrier", "projection"])
    ambient = ambient_from_json(obj["ambient"])
    law = law_from_json(obj["law"])
    try:
        if isinstance(ambient, PolynomialAmbient):
            if "generator" not in obj or "carrier" in obj or "projection" in obj:
                raise SchemaError("polynomial-ambient pair needs exactly the "
                                  "fields ambient, law, generator")
            generator = _scalars_from_json(ambient.ring, obj["generator"],
                                           "pair.generator")
            return CyclePair(ambient, law.carrier, law, generator=generator)
        if "carrier" not in obj or "projection" not in obj or "generator" in obj:
            raise SchemaError("finite-ambient pair needs exactly the fields "
                              "ambient, law, carrier, projection")
        carrier = algebra_from_json(obj["carrier"])
        cols = _require_list(obj["projection"], "pair.projection")
        columns = [_scalars_from_json(ambient.ring, col, f"pair.projection[{i}]")
                   for i, col in enumerate(cols)]
        projection = AlgebraMorphism(ambient, carrier, columns)
        return CyclePair(ambient, carrier, law, projection=projection)
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from None


# ---------------------------------------------------------------------------
# Graded algebras and projective cycles

def graded_to_json(graded: GradedAlgebra):
    mul = {}
    for (l, m), table in sorted(graded.mul.items()):
        mul[f"{l},{m}"] = [[[scalar_to_json(c) for c in cell]
                            for cell in row] for row in table]
    return {"pieces": [{"rank": graded.rank(l),
                        "basis": list(graded.piece_names[l])}
                       for l in range(graded.max_level + 1)],
            "ring": ring_to_json(graded.ring),
            "mul": mul}


def graded_from_json(obj) -> GradedAlgebra:
    _require_mapping(obj, "graded algebra", ["pieces", "ring", "mul"])
    ring = ring_from_json(obj["ring"])
    pieces = []
    for l, piece in enumerate(_require_list(obj["pieces"], "graded.pieces")):
        _require_mapping(piece, f"graded.pieces[{l}]", ["rank", "basis"])
        rank = _require_int(piece["rank"], f"graded.pieces[{l}].rank")
        basis = [_require_str(b, f"graded.pieces[{l}].basis entry")
                 for b in _require_list(piece["basis"], f"graded.pieces[{l}].basis")]
        if len(basis) != rank:
            raise SchemaError(f"graded.pieces[{l}] rank/basis mismatch")
        pieces.append(tuple(basis))
    if not isinstance(obj["mul"], dict):
        raise SchemaError("graded.mul must be a JSON object")
    mul = {}
    for key, table in obj["mul"].items():
        parts = key.split(",")
        if len(parts) != 2:
            raise SchemaError(f"graded.mul key {key!r} is not 'l,m'")
        try:
            l, m = int(parts[0]), int(parts[1])
        except ValueError:
            raise SchemaError(f"graded.mul key {key!r} is not 'l,m'") from None
        if not 0 <= l < len(pieces) or not 0 <= m < len(pieces):
            raise SchemaError(f"graded.mul key {key!r} outside the listed pieces")
        rows = _require_list(table, f"graded.mul[{key}]")
        if len(rows) != len(pieces[l]):
            raise SchemaError(f"graded.mul[{key}] must have one row per "
                              "level-l basis element")
        parsed = []
        for i, row in enumerate(rows):
            row = _require_list(row, f"graded.mul[{key}][{i}]")
            if len(row) != len(pieces[m]):
                raise SchemaError(f"graded.mul[{key}][{i}] has the wrong width")
            parsed.append([_scalars_from_json(ring, cell, f"graded.mul[{key}][{i}][{j}]")
                           for j, cell in enumerate(row)])
        mul[(l, m)] = parsed
    try:
        return GradedAlgebra(ring, pieces, mul)
    except ValueError as exc:
        raise SchemaError(f"graded algebra axioms fail: {exc}") from None


def projective_cycle_to_json(cycle: ProjectiveCycle):
    points = []
    for p, m in cycle.points:
        pres = p.residue_field.presentation
        minpoly = ([scalar_to_json(c) for c in pres["minpoly"]]
                   if pres and pres["kind"] == "univariate" else [0, 1])
        points.append({"minpoly": minpoly,
                       "coords": [[scalar_to_json(c) for c in coord]
                                  for coord in p.coords],
                       "mult": m})
    return {"graded": graded_to_json(cycle.graded), "points": points}


def projective_cycle_from_json(obj) -> ProjectiveCycle:
    _require_mapping(obj, "projective cycle", ["graded", "points"])
    graded = graded_from_json(obj["graded"])
    ring = graded.ring
    points = []
    for i, p in enumerate(_require_list(obj["points"], "projective.points")):
        what = f"projective.points[{i}]"
        _require_mapping(p, what, ["minpoly", "coords", "mult"])
        minpoly = _scalars_from_json(ring, p["minpoly"], f"{what}.minpoly")
        coords = [_scalars_from_json(ring, c, f"{what}.coords[{j}]")
                  for j, c in enumerate(_require_list(p["coords"], f"{what}.coords"))]
        mult = _require_int(p["mult"], f"{what}.mult")
        if mult < 1:
            raise SchemaError(f"{what}.mult must be positive")
        try:
            point = ProjectivePoint.algebraic(graded, minpoly, coords)
        except ValueError as exc:
            raise SchemaError(f"{what}: {exc}") from None
        points.append((point, mult))
    try:
        return ProjectiveCycle(graded, points)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


# ---------------------------------------------------------------------------
# Cocycles

def cocycle_from_json(obj) -> Cocycle:
    # triple-overlap witnesses stay a library-level feature; the file format
    # carries only pieces and pairwise overlaps
    _require_mapping(obj, "cocycle", ["pieces", "overlaps"])
    if not isinstance(obj["pieces"], dict):
        raise SchemaError("cocycle.pieces must be a JSON object keyed by label")
    pieces = {}
    for label, piece in obj["pieces"].items():
        what = f"cocycle.pieces[{label}]"
        _require_mapping(piece, what, ["algebra", "law"])
        algebra = algebra_from_json(piece["algebra"])
        law = law_from_json(piece["law"])
        if not law.carrier.structural_eq(algebra):
            raise SchemaError(f"{what}: law carrier differs from the piece algebra")
        pieces[label] = NormedPatch(algebra, law)
    overlaps, restrictions, transitions = {}, {}, {}
    for i, ov in enumerate(_require_list(obj["overlaps"], "cocycle.overlaps")):
        what = f"cocycle.overlaps[{i}]"
        _require_mapping(ov, what, ["pair", "algebra", "law", "restrictions",
                                    "transition"])
        pair = _require_list(ov["pair"], f"{what}.pair")
        if len(pair) != 2 or not all(isinstance(x, str) for x in pair):
            raise SchemaError(f"{what}.pair must be two labels")
        a, b = pair
        if a not in pieces or b not in pieces:
            raise SchemaError(f"{what}.pair references unknown pieces")
        algebra = algebra_from_json(ov["algebra"])
        law = law_from_json(ov["law"])
        if not law.carrier.structural_eq(algebra):
            raise SchemaError(f"{what}: law carrier differs from the overlap algebra")
        patch = NormedPatch(algebra, law)
        overlaps[(a, b)] = patch
        _require_mapping(ov["restrictions"], f"{what}.restrictions", [a, b])
        for label in (a, b):
            cols = _require_list(ov["restrictions"][label],
                                 f"{what}.restrictions[{label}]")
            columns = [_scalars_from_json(algebra.ring, col,
                                          f"{what}.restrictions[{label}][{k}]")
                       for k, col in enumerate(cols)]
            try:
                restrictions[(label, (a, b))] = AlgebraMorphism(
                    pieces[label].algebra, algebra, columns)
            except ValueError as exc:
                raise SchemaError(f"{what}.restrictions[{label}]: {exc}") from None
        transitions[(a, b)] = _scalars_from_json(algebra.ring, ov["transition"],
                                                 f"{what}.transition")
    try:
        return Cocycle(pieces, overlaps, restrictions, transitions)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


# ---------------------------------------------------------------------------
# Canonical dumping

def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
