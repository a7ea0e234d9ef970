"""Command line interface.

Every subcommand prints a single deterministic JSON document (sorted keys,
two-space indent) and exits 0.  Domain failures exit 1 with an error object;
usage errors exit 2 via argparse.  Integers that could exceed 2^53 and all
exact fractions are emitted as strings so the output survives any JSON
parser.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .arith import primes_up_to
from .atverify import (
    classify_h1,
    classify_two_torsion,
    lemma_r_check,
    report_to_json,
    table_check,
    verify_surface,
)
from .polys import pdeg
from .ellsurf import (
    classify_fibers,
    model_from_json,
    surface_count,
    trace_ap,
    twist_model,
)
from .errors import VerificationError
from .heckecm import CMRule, ap_h1, split_type
from .models import REGISTRY, get_model
from .mwheights import compute_PO, config_from_model, height, ns_discriminant
from .qforms import FormClassGroup, fundamental_decomposition

_JSON_INT_LIMIT = 2**53

_TWO_TORSION_NOTE = (
    "completeness above |d| = 10000 rests on the standard one-class-per-genus "
    "finiteness expectation; the list is unconditionally complete up to at "
    "most one further discriminant"
)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= _JSON_INT_LIMIT else obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(obj) -> int:
    sys.stdout.write(json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n")
    return 0


def _load_model(spec: str, delta: int = 1):
    if os.sep in spec or spec.endswith(".json"):
        with open(spec, "r", encoding="utf-8") as fh:
            model = model_from_json(json.load(fh))
    else:
        model = get_model(spec)
    if delta != 1:
        model = twist_model(model, delta)
    return model


# ---------------------------------------------------------------- subcommands


def _cmd_classgroup(args) -> int:
    group = FormClassGroup(args.d)
    return _emit(
        {
            "d": args.d,
            "class_number": group.h,
            "elementary_divisors": group.elementary_divisors(),
            "two_torsion": group.is_two_torsion(),
            "ambiguous_classes": group.ambiguous_count(),
            "forms": [[f.a, f.b, f.c] for f in group.reduced_forms],
        }
    )


def _cmd_classify(args) -> int:
    if args.two_torsion:
        discs = classify_two_torsion(args.bound)
        out = {
            "bound": args.bound,
            "kind": "two_torsion",
            "count": len(discs),
            "discriminants": discs,
            "note": _TWO_TORSION_NOTE,
        }
    else:
        discs = classify_h1(args.bound)
        out = {
            "bound": args.bound,
            "kind": "class_number_one",
            "count": len(discs),
            "discriminants": discs,
        }
    return _emit(out)


def _cmd_ap(args) -> int:
    rule = CMRule(args.dK, args.twist if args.twist != 1 else None)
    rows = []
    for p in primes_up_to(args.pmax):
        if p <= 3:
            continue
        kind = split_type(args.dK, p)
        rows.append([p, kind, ap_h1(rule, p) if kind == "split" else None])
    return _emit(
        {"dK": args.dK, "twist": args.twist, "pmax": args.pmax, "rows": rows}
    )


def _cmd_count(args) -> int:
    model = _load_model(args.model, args.delta)
    count = surface_count(model, args.p)
    try:
        ap = trace_ap(model, args.p)
    except VerificationError:
        ap = None
    return _emit(
        {"model": model.name, "p": args.p, "surface_count": count, "trace_ap": ap}
    )


def _cmd_fibers(args) -> int:
    model = _load_model(args.model, args.delta)
    fibers = classify_fibers(model)
    rows = [
        {
            "place": f.place,
            "degree": pdeg(f.poly) if f.poly is not None else 1,
            "type": f.kodaira_type,
            "v_c4": None if f.vc4 >= 10**9 else f.vc4,
            "v_c6": None if f.vc6 >= 10**9 else f.vc6,
            "v_delta": f.vdelta,
            "components": f.component_count,
            "euler": f.euler_number,
        }
        for f in fibers
    ]
    return _emit(
        {
            "model": model.name,
            "fibers": rows,
            "euler_total": sum(r["degree"] * r["euler"] for r in rows),
        }
    )


def _cmd_verify(args) -> int:
    model = _load_model(args.model, args.delta)
    d_K, _ = fundamental_decomposition(model.d)
    report = report_to_json(
        verify_surface(model, CMRule(d_K), args.pmax, workers=args.workers)
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n")
    return _emit(report)


def _cmd_height(args) -> int:
    model = _load_model(args.model)
    if not 0 <= args.section < len(model.sections):
        raise VerificationError(
            "PRECONDITION",
            f"{model.name} has {len(model.sections)} sections, index {args.section} invalid",
        )
    section = model.sections[args.section]
    config = config_from_model(model)
    pole_order = compute_PO(section, model)
    places = dict(config.fiber_places)
    corrections = [
        [place, index, _contr_string(places[place], index)]
        for place, index in section.component_hits
    ]
    return _emit(
        {
            "model": model.name,
            "section": args.section,
            "torsion_order": section.torsion_order,
            "pole_order": pole_order,
            "corrections": corrections,
            "height": height(section, config, pole_order),
        }
    )


def _contr_string(symbol: str, index: int) -> Fraction:
    from .mwheights import contribution

    return contribution(symbol, index)


def _cmd_nsdisc(args) -> int:
    model = _load_model(args.model)
    config = config_from_model(model)
    return _emit(
        {
            "model": model.name,
            "configuration": [[sym, mult] for sym, mult in config.fibers],
            "mw_rank": config.mw_rank,
            "torsion_order": config.torsion_order,
            "mw_gram": [list(row) for row in config.mw_gram]
            if config.mw_gram is not None
            else None,
            "ns_discriminant": ns_discriminant(config),
        }
    )


def _cmd_lemma_r(args) -> int:
    result = lemma_r_check(args.d, args.r, args.bound)
    result.update({"d": args.d, "r": args.r, "bound": args.bound})
    return _emit(result)


def _cmd_table_check(args) -> int:
    return _emit(table_check())


def _cmd_list_models(args) -> int:
    rows = []
    for name in sorted(REGISTRY):
        model = REGISTRY[name]
        rows.append(
            {
                "name": name,
                "d": model.d,
                "rank20_over_Q": model.rank20_over_Q,
                "sections": len(model.sections),
                "expected_config": [[pl, sym] for pl, sym in model.expected_config],
            }
        )
    return _emit({"models": rows})


# ---------------------------------------------------------------- wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picard20",
        description="Arithmetic verification for singular K3 surfaces over Q",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classgroup", help="reduced forms and group structure")
    p.add_argument("-d", type=int, required=True, help="negative discriminant")
    p.set_defaults(func=_cmd_classgroup)

    p = sub.add_parser("classify", help="scan discriminants by class group shape")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--two-torsion", action="store_true", dest="two_torsion")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("ap", help="CM newform coefficients")
    p.add_argument("--dK", type=int, required=True, help="fundamental discriminant")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--twist", type=int, default=1, help="quadratic twist delta")
    p.set_defaults(func=_cmd_ap)

    p = sub.add_parser("count", help="point count of one surface at one prime")
    p.add_argument("--model", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--delta", type=int, default=1)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("fibers", help="Kodaira classification of the bad fibers")
    p.add_argument("--model", required=True)
    p.add_argument("--delta", type=int, default=1)
    p.set_defaults(func=_cmd_fibers)

    p = sub.add_parser("verify", help="per-prime verification report")
    p.add_argument("--model", required=True)
    p.add_argument("--pmax", type=int, default=200)
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="also write the report to this file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("height", help="canonical height of a stored section")
    p.add_argument("--model", required=True)
    p.add_argument("--section", type=int, required=True, help="section index")
    p.set_defaults(func=_cmd_height)

    p = sub.add_parser("nsdisc", help="Neron-Severi discriminant of a model")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_nsdisc)

    p = sub.add_parser("lemma-r", help="represented primes of d versus d r^2")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--bound", type=int, default=100000)
    p.set_defaults(func=_cmd_lemma_r)

    p = sub.add_parser("table-check", help="consistency of the built-in table")
    p.set_defaults(func=_cmd_table_check)

    p = sub.add_parser("list-models", help="built-in surface models")
    p.set_defaults(func=_cmd_list_models)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        sys.stdout.write(
            json.dumps(
                {"error": {"code": exc.code, "message": exc.message}},
                sort_keys=True,
                indent=2,
            )
            + "\n"
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
