"""JSON schemas for every kernel object.

All documents carry {"format": "gwp/1"}; numbers are exact rational
strings, never decimals.  Dumping is deterministic (sorted keys, fixed
indentation) so identical inputs produce byte-identical outputs.
"""

import json
from fractions import Fraction

from .bps import BpsTable
from .cohring import GradedRing, WeightedPartition
from .corr import CorrMatrix, ChernParams, DescendentMonomial
from .errors import DataFormatError
from .glue import TheoryTable, TubeTable
from .numeric import GaussianRational
from .ratfun import RationalFunction
from .series import HalfSeries

FORMAT = "gwp/1"

__all__ = [
    "FORMAT",
    "dumps",
    "load_document",
    "series_to_json",
    "series_from_json",
    "ratfun_to_json",
    "ratfun_from_json",
    "ring_to_json",
    "ring_from_json",
    "bps_to_json",
    "bps_from_json",
    "class_series_to_json",
    "class_series_from_json",
    "theory_table_to_json",
    "theory_table_from_json",
    "tube_table_to_json",
    "tube_table_from_json",
    "probed_map_to_json",
    "probed_map_from_json",
    "corr_matrix_from_json",
    "corr_matrix_to_json",
    "chern_from_json",
    "monomial_from_json",
    "overline_result_to_json",
]


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_document(text, kind=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataFormatError("input is not valid JSON: %s" % exc) from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise DataFormatError('document must carry "format": "%s"' % FORMAT)
    if kind is not None and doc.get("kind") != kind:
        raise DataFormatError(
            "expected a %r document, got %r" % (kind, doc.get("kind"))
        )
    return doc


def _head(kind):
    return {"format": FORMAT, "kind": kind}


def _frac_str(x):
    return str(Fraction(x))


def _parse_frac(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise DataFormatError("bad rational literal %r" % text) from exc


def _parse_class(value):
    if isinstance(value, str):
        return tuple(int(x) for x in value.split(",") if x != "")
    return tuple(int(x) for x in value)


# -- series ---------------------------------------------------------------


def series_to_json(series):
    doc = _head("series")
    doc["var"] = series.var
    doc["trunc"] = series.trunc
    doc["coeffs"] = {str(e): str(c) for e, c in series.coeffs.items()}
    return doc


def series_from_json(doc):
    if doc.get("kind") not in (None, "series"):
        raise DataFormatError("not a series document")
    try:
        coeffs = {
            int(e): GaussianRational.parse(str(c)) for e, c in doc["coeffs"].items()
        }
        return HalfSeries(doc["var"], coeffs, doc.get("trunc"))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError("bad series document: %s" % exc) from exc


# -- rational functions ---------------------------------------------------


def ratfun_to_json(R):
    doc = _head("ratfun")
    doc["var"] = R.var
    doc["num"] = [str(c) for c in R.num]
    doc["den"] = [str(c) for c in R.den]
    return doc


def ratfun_from_json(doc):
    try:
        return RationalFunction(doc["num"], doc["den"], doc.get("var", "q"))
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad rational-function document: %s" % exc) from exc


# -- rings ----------------------------------------------------------------


def ring_to_json(ring):
    doc = _head("ring")
    doc["basis"] = list(ring.basis)
    doc["deg"] = [_frac_str(d) for d in ring.deg]
    doc["parity"] = list(ring.parity)
    doc["pairing"] = [[str(c) for c in row] for row in ring.pairing]
    doc["mult"] = [
        [[[k, str(c)] for k, c in sorted(cell.items())] for cell in row]
        for row in ring.mult
    ]
    return doc


def ring_from_json(doc):
    try:
        return GradedRing(
            doc["basis"],
            [_parse_frac(d) for d in doc["deg"]],
            doc["parity"],
            doc["pairing"],
            doc["mult"],
        )
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad ring document: %s" % exc) from exc


# -- state-count tables ----------------------------------------------------


def bps_to_json(table):
    doc = _head("bps")
    doc["rank"] = len(next(iter(table.entries))[1]) if table.entries else None
    doc["degree_fn"] = list(table.degree_fn) if table.degree_fn else None
    doc["max_genus"] = table.max_genus
    doc["class_box"] = list(table.class_box) if table.class_box else None
    doc["bps"] = [
        {"g": g, "class": list(beta), "n": _frac_str(n)}
        for (g, beta), n in sorted(table.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    ]
    return doc


def bps_from_json(doc):
    try:
        table = BpsTable(
            max_genus=doc.get("max_genus"),
            class_box=doc.get("class_box"),
            degree_fn=doc.get("degree_fn"),
        )
        for row in doc["bps"]:
            table.set(row["g"], row["class"], _parse_frac(row["n"]))
        return table
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad state-count document: %s" % exc) from exc


# -- maps class -> series ---------------------------------------------------


def class_series_to_json(fmap):
    doc = _head("class_series")
    doc["entries"] = [
        {"class": list(beta), "series": series_to_json(s)}
        for beta, s in sorted(fmap.items())
    ]
    return doc


def class_series_from_json(doc):
    try:
        return {
            _parse_class(row["class"]): series_from_json(row["series"])
            for row in doc["entries"]
        }
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad class-series document: %s" % exc) from exc


# -- relative tables ---------------------------------------------------------


def theory_table_to_json(table):
    doc = _head("theory_table")
    doc["side"] = table.side
    doc["divisor_deg"] = list(table.divisor_deg) if table.divisor_deg else None
    doc["ring"] = ring_to_json(table.ring)
    doc["entries"] = [
        {
            "class": list(beta),
            "mu": mu.to_string(table.ring),
            "series": series_to_json(s),
        }
        for (beta, mu), s in sorted(
            table.entries.items(), key=lambda kv: (kv[0][0], kv[0][1].parts)
        )
    ]
    return doc


def theory_table_from_json(doc, ring=None):
    try:
        ring = ring if ring is not None else ring_from_json(doc["ring"])
        table = TheoryTable(doc["side"], ring, divisor_deg=doc.get("divisor_deg"))
        for row in doc["entries"]:
            table.set(
                _parse_class(row["class"]),
                WeightedPartition.parse(row["mu"], ring),
                series_from_json(row["series"]),
            )
        return table
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad theory-table document: %s" % exc) from exc


def tube_table_to_json(tube):
    doc = _head("tube_table")
    doc["side"] = tube.side
    doc["ring"] = ring_to_json(tube.ring)
    doc["entries"] = [
        {
            "class": list(beta),
            "glued": g.to_string(tube.ring),
            "free": p.to_string(tube.ring),
            "series": series_to_json(s),
        }
        for (beta, g, p), s in sorted(
            tube.entries.items(), key=lambda kv: (kv[0][0], kv[0][1].parts, kv[0][2].parts)
        )
    ]
    return doc


def tube_table_from_json(doc, ring=None):
    try:
        ring = ring if ring is not None else ring_from_json(doc["ring"])
        tube = TubeTable(doc["side"], ring)
        for row in doc["entries"]:
            tube.set(
                _parse_class(row["class"]),
                WeightedPartition.parse(row["glued"], ring),
                WeightedPartition.parse(row["free"], ring),
                series_from_json(row["series"]),
            )
        return tube
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad tube-table document: %s" % exc) from exc


def probed_map_to_json(pmap, ring, side):
    doc = _head("probed_map")
    doc["side"] = side
    doc["ring"] = ring_to_json(ring)
    doc["entries"] = [
        {
            "class": list(beta),
            "probe": p.to_string(ring),
            "series": series_to_json(s),
        }
        for (beta, p), s in sorted(pmap.items(), key=lambda kv: (kv[0][0], kv[0][1].parts))
    ]
    return doc


def probed_map_from_json(doc, ring=None):
    try:
        ring = ring if ring is not None else ring_from_json(doc["ring"])
        return (
            {
                (
                    _parse_class(row["class"]),
                    WeightedPartition.parse(row["probe"], ring),
                ): series_from_json(row["series"])
                for row in doc["entries"]
            },
            ring,
            doc["side"],
        )
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad probed-map document: %s" % exc) from exc


# -- translation matrix -------------------------------------------------------


def _partition_text(alpha):
    return ",".join(str(a) for a in alpha)


def corr_matrix_to_json(matrix):
    """Nonzero entries under pair keys "alpha|alpha_hat"; source
    partitions with no nonzero targets under bare "alpha" keys so the
    loader still sees them as declared."""
    doc = _head("corr_matrix")
    entries = {}
    for alpha, row in matrix.entries.items():
        if not row:
            entries[_partition_text(alpha)] = {}
            continue
        for alpha_hat, upoly in row.items():
            key = "%s|%s" % (_partition_text(alpha), _partition_text(alpha_hat))
            entries[key] = {
                str(uexp): {",".join(map(str, exps)): str(c) for exps, c in cpoly.items()}
                for uexp, cpoly in upoly.items()
            }
    doc["entries"] = entries
    return doc


def _parse_partition_text(text):
    parts = tuple(int(x) for x in str(text).split(",") if x != "")
    if not parts or any(p < 1 for p in parts):
        raise DataFormatError("bad partition key %r" % text)
    return tuple(sorted(parts, reverse=True))


def _parse_upoly(upoly):
    return {
        int(uexp): {
            tuple(int(e) for e in exps.split(",")): GaussianRational.parse(str(c))
            for exps, c in cpoly.items()
        }
        for uexp, cpoly in upoly.items()
    }


def corr_matrix_from_json(doc):
    """Accepts pair keys "alpha|alpha_hat" -> upoly, or row keys
    "alpha" -> {alpha_hat: upoly} (the row form can declare an all-zero
    source partition explicitly)."""
    try:
        entries = {}
        for key, value in doc["entries"].items():
            if "|" in key:
                a_text, b_text = key.split("|", 1)
                alpha = _parse_partition_text(a_text)
                alpha_hat = _parse_partition_text(b_text)
                entries.setdefault(alpha, {})[alpha_hat] = _parse_upoly(value)
            else:
                alpha = _parse_partition_text(key)
                entries.setdefault(alpha, {})
                for hat_key, upoly in value.items():
                    entries[alpha][_parse_partition_text(hat_key)] = _parse_upoly(upoly)
        return CorrMatrix(entries)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise DataFormatError("bad matrix document: %s" % exc) from exc


def chern_from_json(doc, ring):
    try:
        return ChernParams(
            ring,
            c1=doc.get("c1") or None,
            c2=doc.get("c2") or None,
            c3=doc.get("c3") or None,
        )
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad chern document: %s" % exc) from exc


def monomial_from_json(doc, ring):
    try:
        factors = []
        for row in doc["factors"]:
            gamma = ring.element(row["class"]) if isinstance(row["class"], dict) else {
                ring.index(row["class"]): GaussianRational(1)
            }
            factors.append((int(row["k"]), gamma))
        boundary = doc.get("boundary")
        if boundary is not None:
            boundary = WeightedPartition.parse(boundary, ring)
        return factors, boundary
    except (KeyError, TypeError) as exc:
        raise DataFormatError("bad descendent document: %s" % exc) from exc


def overline_result_to_json(result, ring):
    doc = _head("overline_result")
    doc["terms"] = [
        {
            "monomial": mono.to_string(ring),
            "factors": [[k, ring.basis[i]] for k, i in mono.factors],
            "boundary": None if mono.boundary is None else mono.boundary.to_string(ring),
            "series": series_to_json(series),
        }
        for mono, series in sorted(result.items())
    ]
    return doc
