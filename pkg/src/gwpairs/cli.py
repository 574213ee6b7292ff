"""Batch command-line front end.

Every command reads JSON documents, runs one kernel operation, and
writes a JSON result document (stdout or --out).  Output is
deterministic: identical inputs give byte-identical bytes.  Exit codes:
0 success, 2 parse/schema errors, 3 kernel precondition failures,
4 insufficient series precision.  The environment variable
GWP_MAX_ORDER globally caps requested series orders.
"""

import argparse
import os
import sys

from . import bps as bps_mod
from . import corr as corr_mod
from . import glue as glue_mod
from . import jsonio
from . import ratfun as ratfun_mod
from .errors import DataFormatError, KernelError, PrecisionError
from .series import QView, to_u

EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_PRECISION = 4


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DataFormatError("cannot read %s: %s" % (path, exc)) from exc


def _emit(doc, out):
    text = jsonio.dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _max_order_cap():
    raw = os.environ.get("GWP_MAX_ORDER")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise DataFormatError("GWP_MAX_ORDER must be an integer, got %r" % raw)


def _check_order(trunc):
    cap = _max_order_cap()
    if cap is not None and trunc > cap:
        raise KernelError(
            "requested order %d exceeds the GWP_MAX_ORDER cap %d" % (trunc, cap)
        )
    return trunc


def _parse_class(text):
    return tuple(int(x) for x in text.split(","))


# -- command implementations -------------------------------------------------


def cmd_bps_forward(args):
    table = jsonio.bps_from_json(jsonio.load_document(_read(args.infile), "bps"))
    beta = _parse_class(args.cls)
    if args.q:
        R = bps_mod.gv_forward_q(table, beta)
        _emit(jsonio.ratfun_to_json(R), args.out)
    else:
        trunc = _check_order(args.trunc)
        series = bps_mod.gv_forward(table, beta, trunc)
        _emit(jsonio.series_to_json(series), args.out)


def cmd_bps_invert(args):
    fmap = jsonio.class_series_from_json(
        jsonio.load_document(_read(args.infile), "class_series")
    )
    table, horizon = bps_mod.gv_invert(fmap, max_genus=args.max_genus)
    doc = jsonio.bps_to_json(table)
    doc["genus_horizon"] = {",".join(map(str, b)): g for b, g in horizon.items()}
    _emit(doc, args.out)


def cmd_bps_report(args):
    table = jsonio.bps_from_json(jsonio.load_document(_read(args.infile), "bps"))
    rep = bps_mod.integrality_report(table)
    doc = jsonio._head("bps_report")
    doc["violations"] = [
        {"g": v["genus"], "class": list(v["class"]), "n": str(v["value"])}
        for v in rep["violations"]
    ]
    doc["top_nonzero_genus"] = {
        ",".join(map(str, b)): g for b, g in rep["top_nonzero_genus"].items()
    }
    doc["max_genus_bound"] = rep["max_genus_bound"]
    _emit(doc, args.out)


def cmd_to_u(args):
    series = jsonio.series_from_json(jsonio.load_document(_read(args.infile), "series"))
    trunc = _check_order(args.trunc)
    _emit(jsonio.series_to_json(to_u(series, trunc)), args.out)


def cmd_ratrec(args):
    series = jsonio.series_from_json(jsonio.load_document(_read(args.infile), "series"))
    in_q = args.var == "q"
    if in_q and series.var != "s":
        raise DataFormatError("q-reconstruction expects an s-side series document")

    def attempt(a, b):
        if in_q:
            return ratfun_mod.reconstruct_q(series, a, b)
        return ratfun_mod.reconstruct(series, a, b)

    doc = jsonio._head("ratrec_result")
    if args.auto:
        a, b = 1, 1
        while True:
            try:
                R = attempt(a, b)
            except PrecisionError as exc:
                doc["result"] = "no_solution_within_precision"
                doc["max_bounds_tried"] = [a, b]
                doc["achievable"] = exc.achievable
                _emit(doc, args.out)
                return
            if R is not None:
                doc["result"] = "ok"
                doc["bounds"] = [a, b]
                doc["function"] = jsonio.ratfun_to_json(R)
                _emit(doc, args.out)
                return
            a, b = 2 * a, 2 * b
    R = attempt(args.num_deg, args.den_deg)
    if R is None:
        doc["result"] = "no_solution"
        doc["bounds"] = [args.num_deg, args.den_deg]
    else:
        doc["result"] = "ok"
        doc["bounds"] = [args.num_deg, args.den_deg]
        doc["function"] = jsonio.ratfun_to_json(R)
    _emit(doc, args.out)


def cmd_symcheck(args):
    R = jsonio.ratfun_from_json(jsonio.load_document(_read(args.infile), "ratfun"))
    doc = jsonio._head("symcheck_result")
    doc["symmetric"] = ratfun_mod.check_q_symmetry(R)
    _emit(doc, args.out)


def cmd_overline(args):
    ring = jsonio.ring_from_json(jsonio.load_document(_read(args.ring), "ring"))
    matrix = jsonio.corr_matrix_from_json(
        jsonio.load_document(_read(args.matrix), "corr_matrix")
    )
    factors, boundary = jsonio.monomial_from_json(
        jsonio.load_document(_read(args.monomial), "descendent"), ring
    )
    if args.chern:
        chern = jsonio.chern_from_json(jsonio.load_document(_read(args.chern), "chern"), ring)
    else:
        chern = corr_mod.ChernParams(ring)
    result = corr_mod.overline(factors, matrix, chern, ring, boundary=boundary)
    _emit(jsonio.overline_result_to_json(result, ring), args.out)


def _load_table_or_tube(path):
    doc = jsonio.load_document(_read(path))
    if doc.get("kind") == "theory_table":
        return jsonio.theory_table_from_json(doc)
    if doc.get("kind") == "tube_table":
        return jsonio.tube_table_from_json(doc)
    raise DataFormatError("expected a theory_table or tube_table document")


def cmd_glue(args):
    left = _load_table_or_tube(args.left)
    right = _load_table_or_tube(args.right)
    if not isinstance(left, glue_mod.TheoryTable):
        raise DataFormatError("the left input must be a theory_table")
    beta = _parse_class(args.cls)
    if isinstance(right, glue_mod.TubeTable):
        out = glue_mod.glue_with_tube(left, right, beta, args.max_size)
        _emit(
            jsonio.probed_map_to_json(
                {(beta, p): s for p, s in out.items()}, left.ring, left.side
            ),
            args.out,
        )
        return
    step = glue_mod.DegenerationStep(left, right, max_size=args.max_size)
    series = glue_mod.glue_gw(step, beta) if left.side == "gw" else glue_mod.glue_pairs(step, beta)
    _emit(jsonio.series_to_json(series), args.out)


def cmd_invert(args):
    pmap, ring, side = jsonio.probed_map_from_json(
        jsonio.load_document(_read(args.absolute), "probed_map")
    )
    tube = jsonio.tube_table_from_json(jsonio.load_document(_read(args.tube), "tube_table"))
    result = glue_mod.invert_step(pmap, tube)
    doc = jsonio._head("invert_result")
    doc["table"] = jsonio.theory_table_to_json(result.table)
    doc["residuals"] = [
        {
            "class": list(beta),
            "probe": p.to_string(ring),
            "difference": jsonio.series_to_json(s),
        }
        for (beta, p), s in sorted(result.residuals.items(), key=lambda kv: (kv[0][0], kv[0][1].parts))
    ]
    doc["problems"] = [
        {"class": list(p["class"]), "size": p["size"], "reason": p["reason"]}
        for p in result.problems
    ]
    doc["ok"] = result.ok
    _emit(doc, args.out)


def cmd_pipeline(args):
    spec = jsonio.load_document(_read(args.spec), "pipeline")
    leaves = {}
    for name in spec["leaves"]:
        path = os.path.join(args.leaves, name.replace("/", "_") + ".json")
        doc = jsonio.load_document(_read(path))
        if doc.get("kind") == "theory_table":
            leaves[name] = jsonio.theory_table_from_json(doc)
        elif doc.get("kind") == "tube_table":
            leaves[name] = jsonio.tube_table_from_json(doc)
        elif doc.get("kind") == "probed_map":
            leaves[name] = jsonio.probed_map_from_json(doc)[0]
        else:
            raise DataFormatError("unsupported leaf kind %r in %s" % (doc.get("kind"), path))
    values, reports = glue_mod.reduction_pipeline(
        spec["nodes"], leaves, max_size=spec.get("max_size")
    )
    summary = jsonio._head("pipeline_result")
    summary["residual_counts"] = {name: len(res) for name, res in reports.items()}
    summary["outputs"] = sorted(
        name for name in values if name not in leaves
    )
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for node in spec["nodes"]:
            name = node["output"]
            value = values[name]
            path = os.path.join(args.out, name.replace("/", "_") + ".json")
            if isinstance(value, glue_mod.TheoryTable):
                doc = jsonio.theory_table_to_json(value)
            else:
                doc = jsonio.probed_map_to_json(value, _any_ring(leaves), spec["side"])
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(jsonio.dumps(doc))
        _emit(summary, os.path.join(args.out, "summary.json"))
    else:
        _emit(summary, None)


def _any_ring(leaves):
    for v in leaves.values():
        ring = getattr(v, "ring", None)
        if ring is not None:
            return ring
    raise DataFormatError("no leaf carries a ring")


def cmd_predicate(args):
    zp = jsonio.ratfun_from_json(jsonio.load_document(_read(args.pairs), "ratfun"))
    zgw = jsonio.series_from_json(jsonio.load_document(_read(args.gw), "series"))
    trunc = _check_order(args.trunc)
    holds = corr_mod.correspondence_predicate(
        zp, zgw, args.dbeta, args.lmu_minus_absmu, trunc
    )
    doc = jsonio._head("predicate_result")
    doc["holds"] = holds
    doc["trunc"] = trunc
    _emit(doc, args.out)


# -- argument parsing ---------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gwp",
        description="Exact series kernel for curve-counting correspondences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bps-forward", help="state counts to per-class series")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--cls", required=True, help="comma-separated class vector")
    p.add_argument("--q", action="store_true", help="emit the closed q-form")
    p.add_argument("--trunc", type=int, default=13, help="u-order bound (exclusive)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bps_forward)

    p = sub.add_parser("bps-invert", help="per-class series to state counts")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-genus", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bps_invert)

    p = sub.add_parser("bps-report", help="integrality and genus-horizon report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bps_report)

    p = sub.add_parser("to-u", help="substitute s = e^{iu/2} into an exact series")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--trunc", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_to_u)

    p = sub.add_parser("ratrec", help="rational reconstruction from a series")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--num-deg", type=int, default=4)
    p.add_argument("--den-deg", type=int, default=4)
    p.add_argument("--var", choices=("q", "s"), default="q")
    p.add_argument("--auto", action="store_true", help="double bounds until precision runs out")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ratrec)

    p = sub.add_parser("symcheck", help="q <-> 1/q symmetry of a rational function")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_symcheck)

    p = sub.add_parser("overline", help="expand a descendent product")
    p.add_argument("--monomial", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--ring", required=True)
    p.add_argument("--chern")
    p.add_argument("--out")
    p.set_defaults(func=cmd_overline)

    p = sub.add_parser("glue", help="degeneration convolution at one class")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--cls", required=True)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("invert", help="solve the convolution for the unknown table")
    p.add_argument("--absolute", required=True)
    p.add_argument("--tube", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("pipeline", help="run a glue/invert DAG on leaf tables")
    p.add_argument("--spec", required=True)
    p.add_argument("--leaves", required=True, help="directory of leaf JSON files")
    p.add_argument("--out", help="directory for node outputs")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("predicate", help="check the two-theory series equality")
    p.add_argument("--pairs", required=True)
    p.add_argument("--gw", required=True)
    p.add_argument("--dbeta", type=int, required=True)
    p.add_argument("--lmu-minus-absmu", type=int, default=0)
    p.add_argument("--trunc", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predicate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except DataFormatError as exc:
        _emit_error(exc, EXIT_PARSE)
        return EXIT_PARSE
    except PrecisionError as exc:
        _emit_error(exc, EXIT_PRECISION)
        return EXIT_PRECISION
    except KernelError as exc:
        _emit_error(exc, EXIT_PRECONDITION)
        return EXIT_PRECONDITION
    return 0


def _emit_error(exc, code):
    doc = {
        "format": jsonio.FORMAT,
        "kind": "error",
        "error": {"type": type(exc).__name__, "message": str(exc), "exit": code},
    }
    if isinstance(exc, PrecisionError):
        doc["error"]["achievable"] = exc.achievable
    sys.stderr.write(jsonio.dumps(doc))


if __name__ == "__main__":
    sys.exit(main())
