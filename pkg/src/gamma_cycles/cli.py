"""Command-line interface.

JSON files in, canonical deterministic text (or JSON, with --json) out.
Exit status 0 on success, 1 when a mathematical check fails (a law that is
not multiplicative, inequivalent pairs, a characteristic obstruction, a
factorization failure), 2 on malformed input.  Randomized suites take an
explicit seed; GAMMA_CYCLES_SEED in the environment overrides --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io_json
from .exact_algebra import (AlgebraMorphism, CharacteristicError, GF, QQ,
                            evaluation_morphism, poly_to_string, unit_vec)
from .io_json import SchemaError
from .laws import is_multiplicative
from .trace_norm import (cayley_hamilton_reduce, char_poly, norm_from_trace,
                         tangent_deformations, theta_k_from_trace,
                         trace_from_norm)
from .gamma import external_product, internal_product
from .cycles_geometry import (CyclePair, PolynomialAmbient, cycle_law,
                              norm_cocycle, pairs_equivalent, pushforward,
                              reduce_cycle, sum_cycles)
from .chow import chow_determines_cycle, chow_form, chow_multiplicativity_check
from .verification import DEFAULT_SEED, run_all


def _read(path, loader):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    return loader(io_json.loads(text))


def _ring_flag(text):
    if text == "Q":
        return QQ
    if text.startswith("F") and text[1:].isdigit():
        return GF(int(text[1:]))
    raise SchemaError(f"bad ring {text!r}; expected Q or F<p>")


def _parse_element(carrier, text):
    """A carrier element from the command line: either a basis name or a
    JSON array of coordinates."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = None
    if isinstance(obj, list):
        coords = [io_json.scalar_from_json(carrier.ring, c, "element")
                  for c in obj]
        if len(coords) != carrier.rank:
            raise SchemaError(f"element has {len(coords)} coordinates, "
                              f"carrier rank is {carrier.rank}")
        return tuple(coords)
    if text in carrier.basis_names:
        return unit_vec(carrier.ring, carrier.rank,
                        carrier.basis_names.index(text))
    raise SchemaError(f"element {text!r} is neither a basis name nor a "
                      "coordinate array")


def _emit(args, payload, human_lines):
    if getattr(args, "json", False):
        sys.stdout.write(io_json.dumps(payload))
    else:
        sys.stdout.write("\n".join(human_lines) + "\n")


def _law_lines(law):
    lines = [f"degree: {law.degree}", f"carrier rank: {law.carrier.rank}"]
    for alpha, c in zip(law.indices, law.psi, strict=True):
        if not c.is_zero:
            lines.append(f"psi[{io_json._index_key(alpha)}] = {c}")
    return lines


def _pair_payload(pair):
    return io_json.pair_to_json(pair)


def _pair_lines(pair):
    lines = [f"degree: {pair.degree}", f"carrier rank: {pair.carrier.rank}"]
    if pair.generator is not None:
        var = pair.ambient.var_names[0]
        lines.append(f"generator: {poly_to_string(pair.generator, var)}")
    lines.extend(_law_lines(pair.law)[2:] or ["psi: 1"])
    return lines


# ---------------------------------------------------------------------------
# Subcommand handlers

def _cmd_gamma_mul(args):
    ring = _ring_flag(args.ring)
    algebra = None
    if args.mode == "internal":
        if args.algebra is None:
            raise SchemaError("internal products need --algebra")
        algebra = _read(args.algebra, io_json.algebra_from_json)
        ring = algebra.ring
    left = _read(args.left, lambda obj: io_json.gamma_from_json(ring, obj))
    right = _read(args.right, lambda obj: io_json.gamma_from_json(ring, obj))
    if args.mode == "internal":
        result = internal_product(left, right, algebra)
    else:
        result = external_product(left, right)
    lines = [f"degree: {result.degree}"]
    for alpha, c in result.sorted_terms():
        lines.append(f"{io_json._index_key(alpha)}: {c}")
    _emit(args, io_json.gamma_to_json(result), lines)
    return 0


def _cmd_law_check(args):
    law = _read(args.law, io_json.law_from_json)
    ok = is_multiplicative(law)
    _emit(args, {"multiplicative": ok}, [f"multiplicative: {str(ok).lower()}"])
    return 0 if ok else 1


def _cmd_law_eval(args):
    law = _read(args.law, io_json.law_from_json)
    coords = _parse_element(law.carrier, args.element)
    value = law.evaluate(coords)
    _emit(args, {"value": io_json.scalar_to_json(value)}, [str(value)])
    return 0


def _cmd_trace(args):
    law = _read(args.law, io_json.law_from_json)
    trace = trace_from_norm(law)
    lines = [f"degree: {trace.degree}"]
    for name, c in zip(trace.carrier.basis_names, trace.theta, strict=True):
        lines.append(f"theta[{name}] = {c}")
    _emit(args, io_json.trace_to_json(trace), lines)
    return 0


def _cmd_norm(args):
    trace = _read(args.trace, io_json.trace_from_json)
    law = norm_from_trace(trace)
    _emit(args, io_json.law_to_json(law), _law_lines(law))
    return 0


def _cmd_theta(args):
    law = _read(args.law, io_json.law_from_json)
    try:
        obj = json.loads(args.elements)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"--elements is not valid JSON: {exc}") from None
    if not isinstance(obj, list) or not obj:
        raise SchemaError("--elements must be a nonempty JSON array of "
                          "coordinate arrays")
    arguments = []
    for i, entry in enumerate(obj):
        if not isinstance(entry, list):
            raise SchemaError(f"--elements[{i}] must be a coordinate array")
        arguments.append(_parse_element(law.carrier, json.dumps(entry)))
    trace = trace_from_norm(law)
    value = theta_k_from_trace(trace, arguments)
    _emit(args, {"k": len(arguments), "value": io_json.scalar_to_json(value)},
          [str(value)])
    return 0


def _cmd_charpoly(args):
    law = _read(args.law, io_json.law_from_json)
    b = _parse_element(law.carrier, args.element)
    cp = char_poly(law, b)
    payload = {"coefficients": [io_json.scalar_to_json(c) for c in cp.coeffs]}
    _emit(args, payload, [poly_to_string(cp.coeffs, "t")])
    return 0


def _cmd_ch_reduce(args):
    law = _read(args.law, io_json.law_from_json)
    reduced = cayley_hamilton_reduce(law)
    payload = {"carrier": io_json.algebra_to_json(reduced.algebra),
               "law": io_json.law_to_json(reduced.law),
               "projection": [[io_json.scalar_to_json(c) for c in col]
                              for col in reduced.projection.columns]}
    lines = [f"carrier rank: {reduced.algebra.rank}"] + _law_lines(reduced.law)[2:]
    _emit(args, payload, lines)
    return 0


def _cmd_tangent(args):
    algebra = _read(args.algebra, io_json.algebra_from_json)
    point = evaluation_morphism(algebra,
                                io_json.scalar_from_json(algebra.ring,
                                                         _maybe_number(args.point),
                                                         "point"))
    report = tangent_deformations(algebra, point, args.degree)
    lines = [f"dimension: {report.dimension}"]
    for i, functional in enumerate(report.basis):
        row = ", ".join(str(c) for c in functional)
        lines.append(f"functional {i + 1}: [{row}]")
    payload = {"dimension": report.dimension,
               "basis": [[io_json.scalar_to_json(c) for c in f]
                         for f in report.basis]}
    _emit(args, payload, lines)
    return 0


def _maybe_number(text):
    try:
        return int(text)
    except ValueError:
        return text


def _cmd_cycle_law(args):
    cycle = _read(args.cycle, io_json.cycle_from_json)
    if isinstance(cycle.ambient, PolynomialAmbient):
        pair = reduce_cycle(cycle)
        _emit(args, _pair_payload(pair), _pair_lines(pair))
    else:
        law = cycle_law(cycle).to_poly_law()
        _emit(args, io_json.law_to_json(law), _law_lines(law))
    return 0


def _reduced_pair(cycle):
    """Reduce a cycle to its canonical pair; finite ambients keep the full
    ambient as carrier."""
    if isinstance(cycle.ambient, PolynomialAmbient):
        return reduce_cycle(cycle)
    law = cycle_law(cycle).to_poly_law()
    return CyclePair(cycle.ambient, cycle.ambient, law,
                     projection=AlgebraMorphism.identity(cycle.ambient))


def _cmd_sum(args):
    left = _reduced_pair(_read(args.left, io_json.cycle_from_json))
    right = _reduced_pair(_read(args.right, io_json.cycle_from_json))
    total = sum_cycles(left, right)
    _emit(args, _pair_payload(total), _pair_lines(total))
    return 0


def _cmd_pushforward(args):
    cycle = _read(args.cycle, io_json.cycle_from_json)
    if isinstance(cycle.ambient, PolynomialAmbient):
        raise SchemaError("pushforward acts on finite-dimensional ambients")
    pullback = _read(args.map, io_json.morphism_from_json)
    if not pullback.target.structural_eq(cycle.ambient):
        raise SchemaError("the map's target must be the cycle's ambient")
    pair = _reduced_pair(cycle)
    result = pushforward(pair, pullback)
    _emit(args, _pair_payload(result), _pair_lines(result))
    return 0


def _cmd_equiv(args):
    left = _reduced_pair(_read(args.left, io_json.cycle_from_json))
    right = _reduced_pair(_read(args.right, io_json.cycle_from_json))
    ok = pairs_equivalent(left, right)
    _emit(args, {"equivalent": ok}, [f"equivalent: {str(ok).lower()}"])
    return 0 if ok else 1


def _cmd_cocycle_norm(args):
    cocycle = _read(args.cocycle, io_json.cocycle_from_json)
    base = norm_cocycle(cocycle)
    ok = base.verify()
    lines = []
    payload = {"transitions": {}, "cocycle_identity": ok}
    for (a, b), value in sorted(base.transitions.items()):
        lines.append(f"{a},{b}: {value}")
        payload["transitions"][f"{a},{b}"] = io_json.scalar_to_json(value)
    lines.append(f"cocycle identity: {'ok' if ok else 'FAIL'}")
    _emit(args, payload, lines)
    return 0 if ok else 1


def _cmd_chow_form(args):
    cycle = _read(args.cycle, io_json.projective_cycle_from_json)
    form = chow_form(cycle, args.level)
    lines = [f"level: {form.level}", f"degree: {form.degree}"]
    payload = {"level": form.level, "degree": form.degree, "coefficients": {}}
    for alpha, c in zip(form.indices, form.coeffs, strict=True):
        key = io_json._index_key(alpha)
        payload["coefficients"][key] = io_json.scalar_to_json(c)
        lines.append(f"{key}: {c}")
    _emit(args, payload, lines)
    return 0


def _cmd_chow_check(args):
    cycle = _read(args.cycle, io_json.projective_cycle_from_json)
    if args.other is None:
        ok = True
        failed = []
        top = cycle.graded.max_level
        for l in range(top + 1):
            for m in range(top + 1 - l):
                if not chow_multiplicativity_check(chow_form(cycle, l),
                                                   chow_form(cycle, m)):
                    ok = False
                    failed.append(f"({l},{m})")
        detail = "all levels" if ok else "failing levels " + " ".join(failed)
        _emit(args, {"multiplicative": ok, "detail": detail},
              [f"multiplicative: {str(ok).lower()} ({detail})"])
        return 0 if ok else 1
    other = _read(args.other, io_json.projective_cycle_from_json)
    ok = chow_determines_cycle(cycle, other, args.level)
    _emit(args, {"consistent": ok}, [f"consistent: {str(ok).lower()}"])
    return 0 if ok else 1


def _cmd_verify_all(args):
    seed = args.seed
    env = os.environ.get("GAMMA_CYCLES_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise SchemaError(f"GAMMA_CYCLES_SEED must be an integer, "
                              f"got {env!r}") from None
    results = run_all(seed)
    passed = sum(1 for r in results if r.passed)
    lines = []
    payload = {"seed": seed, "suites": []}
    for r in results:
        status = "ok" if r.passed else "FAIL"
        lines.append(f"{status} {r.number} - {r.label}")
        if not r.passed:
            lines.append(f"  {r.detail}")
        payload["suites"].append({"number": r.number, "label": r.label,
                                  "passed": r.passed, "detail": r.detail})
        print(f"# suite {r.number}: {r.seconds:.2f}s", file=sys.stderr)
    lines.append(f"result: {passed}/{len(results)} suites passed")
    payload["passed"] = passed
    _emit(args, payload, lines)
    return 0 if passed == len(results) else 1


# ---------------------------------------------------------------------------
# Parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="gamma-cycles",
        description="Exact divided-power, polynomial-law, and zero-cycle "
                    "computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")
        p.set_defaults(func=handler)
        return p

    p = add("gamma-mul", _cmd_gamma_mul,
            "external or internal product of divided-power elements")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--mode", choices=("external", "internal"),
                   default="external")
    p.add_argument("--algebra", help="algebra file, for internal products")
    p.add_argument("--ring", default="Q", help="base ring (Q or F<p>) "
                   "when no algebra is given")

    p = add("law-check", _cmd_law_check, "test a law for multiplicativity")
    p.add_argument("--law", required=True)

    p = add("law-eval", _cmd_law_eval, "evaluate a law at a carrier element")
    p.add_argument("--law", required=True)
    p.add_argument("--element", required=True)

    p = add("trace", _cmd_trace, "extract the trace of a law")
    p.add_argument("--law", required=True)

    p = add("norm", _cmd_norm, "rebuild the law from a degree-d trace")
    p.add_argument("--trace", required=True)

    p = add("theta", _cmd_theta, "evaluate the trace tower on elements")
    p.add_argument("--law", required=True)
    p.add_argument("--elements", required=True,
                   help="JSON array of coordinate arrays")

    p = add("charpoly", _cmd_charpoly,
            "characteristic polynomial of an element under a law")
    p.add_argument("--law", required=True)
    p.add_argument("--element", required=True)

    p = add("ch-reduce", _cmd_ch_reduce,
            "Cayley-Hamilton reduction of a law's carrier")
    p.add_argument("--law", required=True)

    p = add("tangent", _cmd_tangent,
            "first-order trace deformations at a rational point")
    p.add_argument("--algebra", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--degree", type=int, required=True)

    p = add("cycle-law", _cmd_cycle_law, "the norm law of a zero cycle")
    p.add_argument("--cycle", required=True)

    p = add("sum", _cmd_sum, "sum of two cycles over a common ambient")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = add("pushforward", _cmd_pushforward,
            "direct image of a cycle along an algebra morphism")
    p.add_argument("--cycle", required=True)
    p.add_argument("--map", required=True, help="pullback morphism file")

    p = add("equiv", _cmd_equiv, "equivalence of two cycles' pairs")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = add("cocycle-norm", _cmd_cocycle_norm,
            "norms of a line bundle's transition cocycle")
    p.add_argument("--cocycle", required=True)

    p = add("chow-form", _cmd_chow_form, "level-l Chow form of a cycle")
    p.add_argument("--cycle", required=True)
    p.add_argument("--level", type=int, required=True)

    p = add("chow-check", _cmd_chow_check,
            "Chow-form multiplicativity, or determination against another cycle")
    p.add_argument("--cycle", required=True)
    p.add_argument("--other")
    p.add_argument("--level", type=int, default=1)

    p = add("verify-all", _cmd_verify_all, "run every acceptance suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CharacteristicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
