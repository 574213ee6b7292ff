"""Degeneration-formula convolution, capped edges, and exact inversion.

Table shapes
------------
A TheoryTable holds relative series keyed (class, boundary partition).
A TubeTable holds doubly-bounded series keyed (class, glued partition,
free partition), stored with the glued side already paired against the
dual basis -- the same normalization in which the capped-edge closed
forms are stated.  With that convention the edge composes as a plain
convolution (no dual expansion), and gluing a table against a tube is

    A[beta, p] = sum over splittings, sum over nu of
                 L[beta1, nu] * factor(nu) * K[beta2, nu, p],

while gluing two plain tables inserts the dual partition on the right:

    Z[beta]    = sum over splittings, sum over mu of
                 L[beta1, mu] * factor(mu) * R[beta2, mu-dual].

The per-side convolution factors are z(mu) u^{2 l(mu)} on the map side
and (-1)^{|mu| - l(mu)} z(mu) q^{-|mu|} on the sheaf side.

Inversion solves the tube convolution for the unknown relative table,
one absolute class at a time in increasing order, one boundary size at
a time, as an exact square linear system over the rational-function
field of the side variable.  Tables entering an inversion must carry
exact (Laurent-polynomial) series; the closed rational forms that the
rationality statement provides are exactly of this shape.
"""

import itertools
from fractions import Fraction

from .errors import (
    DataFormatError,
    InconsistentDataError,
    MissingDataError,
    PrecisionError,
    SingularSystemError,
    VariableMismatchError,
)
from .linalg import solve_square
from .cohring import (
    WeightedPartition,
    codim,
    dual_partition,
    enumerate_weighted_partitions,
    gluing_factor,
)
from .numeric import QI_ONE, QI_ZERO, GaussianRational
from .ratfun import RationalFunction
from .series import HalfSeries

__all__ = [
    "TheoryTable",
    "TubeTable",
    "DegenerationStep",
    "gw_factor",
    "pairs_factor",
    "capped_edge",
    "capped_edge_tube",
    "compose_tubes",
    "glue_gw",
    "glue_pairs",
    "glue_with_tube",
    "InvertResult",
    "invert_step",
    "reduction_pipeline",
    "quintic_scheme_nodes",
]

_SIDE_VAR = {"pairs": "s", "gw": "u"}


def _as_class(c):
    t = tuple(int(x) for x in c)
    if any(x < 0 for x in t):
        raise DataFormatError("curve classes must be effective (componentwise >= 0)")
    return t


def _check_side_series(side, series):
    var = _SIDE_VAR[side]
    if series.var != var:
        raise VariableMismatchError(
            "%s-side tables hold series in %s, got %s" % (side, var, series.var)
        )
    if side == "pairs" and any(e % 2 for e in series.coeffs):
        raise InconsistentDataError(
            "sheaf-side series must be Laurent in q (even s-exponents only)"
        )


class TheoryTable:
    """Relative series keyed (class, boundary partition)."""

    def __init__(self, side, ring, divisor_deg=None, strict=False, class_box=None):
        if side not in _SIDE_VAR:
            raise DataFormatError("side must be 'pairs' or 'gw'")
        self.side = side
        self.ring = ring
        self.divisor_deg = None if divisor_deg is None else tuple(int(x) for x in divisor_deg)
        self.strict = strict
        self.class_box = None if class_box is None else _as_class(class_box)
        self.entries = {}

    def boundary_size(self, beta):
        if self.divisor_deg is None:
            return None
        return sum(a * x for a, x in zip(self.divisor_deg, beta))

    def set(self, beta, mu, series):
        beta = _as_class(beta)
        if not isinstance(mu, WeightedPartition):
            raise DataFormatError("boundary condition must be a WeightedPartition")
        _check_side_series(self.side, series)
        want = self.boundary_size(beta)
        if want is not None and mu.size != want:
            raise InconsistentDataError(
                "boundary size %d does not match the divisor degree %d of class %r"
                % (mu.size, want, beta)
            )
        if series.is_zero() and series.trunc is None:
            self.entries.pop((beta, mu), None)
        else:
            self.entries[(beta, mu)] = series
        return self

    def get(self, beta, mu):
        """Entry lookup; absent strict entries inside the box raise."""
        key = (_as_class(beta), mu)
        if key in self.entries:
            return self.entries[key]
        if self.strict and self._inside_box(key[0]):
            raise MissingDataError(
                "missing table entry for class %r, boundary %s"
                % (key[0], mu.to_string(self.ring)),
                key=key,
            )
        return HalfSeries.zero(_SIDE_VAR[self.side])

    def _inside_box(self, beta):
        if self.class_box is None:
            return True
        return all(x <= b for x, b in zip(beta, self.class_box))

    def classes(self):
        return sorted({b for b, _ in self.entries})

    def scale(self, c):
        out = TheoryTable(self.side, self.ring, self.divisor_deg, self.strict, self.class_box)
        for (b, mu), s in self.entries.items():
            out.entries[(b, mu)] = s.scale(c)
        return out

    def __eq__(self, other):
        if not isinstance(other, TheoryTable):
            return NotImplemented
        return self.side == other.side and self.entries == other.entries

    def __repr__(self):
        return "TheoryTable(%s, %d entries)" % (self.side, len(self.entries))


class TubeTable:
    """Doubly-bounded series keyed (class, glued partition, free partition).

    The glued index is stored pre-paired with the dual basis, so tubes
    convolve against tables and against each other without any dual
    expansion.
    """

    def __init__(self, side, ring):
        if side not in _SIDE_VAR:
            raise DataFormatError("side must be 'pairs' or 'gw'")
        self.side = side
        self.ring = ring
        self.entries = {}

    def set(self, beta, glued, free, series):
        beta = _as_class(beta)
        _check_side_series(self.side, series)
        if series.is_zero() and series.trunc is None:
            self.entries.pop((beta, glued, free), None)
        else:
            self.entries[(beta, glued, free)] = series
        return self

    def get(self, beta, glued, free):
        return self.entries.get(
            (_as_class(beta), glued, free), HalfSeries.zero(_SIDE_VAR[self.side])
        )

    def classes(self):
        return sorted({b for b, _, _ in self.entries})

    def sizes_at(self, beta):
        beta = _as_class(beta)
        return sorted({g.size for b, g, _ in self.entries if b == beta})

    def __repr__(self):
        return "TubeTable(%s, %d entries)" % (self.side, len(self.entries))


class DegenerationStep:
    """A pair of tables sharing the divisor ring, plus the splitting rule.

    ``splittings(beta)`` enumerates the componentwise decompositions
    beta1 + beta2 = beta over effective vectors; override by subclassing
    when a geometry restricts them further.
    """

    def __init__(self, left, right, max_size=None):
        if left.ring is not right.ring:
            raise InconsistentDataError("both sides of a step must share the divisor ring")
        if left.side != right.side:
            raise InconsistentDataError("both sides of a step must be the same theory")
        self.left = left
        self.right = right
        self.max_size = max_size

    def splittings(self, beta):
        beta = _as_class(beta)
        ranges = [range(x + 1) for x in beta]
        for b1 in itertools.product(*ranges):
            b2 = tuple(x - y for x, y in zip(beta, b1))
            yield b1, b2


def gw_factor(mu):
    """z(mu) u^{2 l(mu)} as an exact monomial."""
    return HalfSeries.monomial("u", 2 * mu.length, Fraction(gluing_factor(mu)))


def pairs_factor(mu):
    """(-1)^{|mu| - l(mu)} z(mu) q^{-|mu|} as an exact s-monomial."""
    sign = -1 if mu.length % 2 else 1  # (-1)^{|mu|-l(mu)} * (-1)^{|mu|} from q = -s^2
    return HalfSeries.monomial("s", -2 * mu.size, Fraction(sign * gluing_factor(mu)))


def _factor(side, mu):
    return gw_factor(mu) if side == "gw" else pairs_factor(mu)


def capped_edge(side, d, nu, mu):
    """Closed form of the degree-d edge: delta at nu = mu times the unit.

    Sheaf side: (-1)^{|nu| - l(nu)} q^d / z(nu); map side:
    u^{-2 l(nu)} / z(nu).  Raises on a size mismatch.
    """
    if nu.size != d or mu.size != d:
        raise DataFormatError(
            "edge boundary sizes (%d, %d) must both equal %d" % (nu.size, mu.size, d)
        )
    var = _SIDE_VAR[side]
    if nu != mu:
        return HalfSeries.zero(var)
    z = gluing_factor(nu)
    if side == "pairs":
        sign = (-1) ** (nu.size - nu.length) * (-1) ** d  # q^d = (-1)^d s^{2d}
        return HalfSeries.monomial("s", 2 * d, Fraction(sign, z))
    return HalfSeries.monomial("u", -2 * nu.length, Fraction(1, z))


def capped_edge_tube(side, max_size, ring, at_class):
    """TubeTable holding the capped edges of every size up to max_size."""
    tube = TubeTable(side, ring)
    at_class = _as_class(at_class)
    for d in range(0, max_size + 1):
        for nu in enumerate_weighted_partitions(d, ring):
            tube.set(at_class, nu, nu, capped_edge(side, d, nu, nu))
    return tube


def compose_tubes(left, right):
    """Convolve two tubes over their shared boundary (plain contraction)."""
    if left.side != right.side or left.ring is not right.ring:
        raise InconsistentDataError("tube composition needs matching side and ring")
    out = TubeTable(left.side, left.ring)
    by_glued = {}
    for (b2, lam, mu), s2 in right.entries.items():
        by_glued.setdefault(lam, []).append((b2, mu, s2))
    for (b1, nu, lam), s1 in left.entries.items():
        f = _factor(left.side, lam)
        for b2, mu, s2 in by_glued.get(lam, ()):
            beta = tuple(x + y for x, y in zip(b1, b2))
            term = s1 * f * s2
            prev = out.entries.get((beta, nu, mu))
            out.entries[(beta, nu, mu)] = term if prev is None else prev + term
    out.entries = {k: v for k, v in out.entries.items() if not (v.is_zero() and v.trunc is None)}
    return out


def _dual_value(table, beta, mu):
    """Value of a table at the dual of a basis partition."""
    acc = HalfSeries.zero(_SIDE_VAR[table.side])
    for c, rho in dual_partition(mu, table.ring):
        acc = acc + table.get(beta, rho).scale(c)
    return acc


def _glue_tables(step, beta, side):
    beta = _as_class(beta)
    acc = HalfSeries.zero(_SIDE_VAR[side])
    for (b1, mu), s1 in step.left.entries.items():
        if any(x > y for x, y in zip(b1, beta)):
            continue
        if step.max_size is not None and mu.size > step.max_size:
            continue
        b2 = tuple(y - x for x, y in zip(b1, beta))
        want = step.right.boundary_size(b2)
        if want is not None and want != mu.size:
            continue
        rhs = _dual_value(step.right, b2, mu)
        if rhs.is_zero() and rhs.trunc is None:
            continue
        acc = acc + s1 * _factor(side, mu) * rhs
    return acc


def glue_gw(step, beta):
    """Map-side degeneration convolution for one absolute class."""
    if step.left.side != "gw":
        raise InconsistentDataError("glue_gw needs map-side tables")
    if isinstance(step.right, TubeTable):
        return glue_with_tube(step.left, step.right, beta, step.max_size)
    return _glue_tables(step, beta, "gw")


def glue_pairs(step, beta):
    """Sheaf-side degeneration convolution for one absolute class."""
    if step.left.side != "pairs":
        raise InconsistentDataError("glue_pairs needs sheaf-side tables")
    if isinstance(step.right, TubeTable):
        return glue_with_tube(step.left, step.right, beta, step.max_size)
    return _glue_tables(step, beta, "pairs")


def glue_with_tube(table, tube, beta, max_size=None):
    """Glue a relative table against a tube, keeping the tube's free side.

    Returns {free partition: series} for the absolute class ``beta``.
    """
    if table.side != tube.side:
        raise InconsistentDataError("table and tube sides differ")
    beta = _as_class(beta)
    out = {}
    by_class_glued = {}
    for (b2, nu, p), s2 in tube.entries.items():
        by_class_glued.setdefault((b2, nu), []).append((p, s2))
    for (b1, nu), s1 in table.entries.items():
        if any(x > y for x, y in zip(b1, beta)):
            continue
        if max_size is not None and nu.size > max_size:
            continue
        b2 = tuple(y - x for x, y in zip(b1, beta))
        hits = by_class_glued.get((b2, nu))
        if not hits:
            continue
        left = s1 * _factor(table.side, nu)
        for p, s2 in hits:
            term = left * s2
            prev = out.get(p)
            out[p] = term if prev is None else prev + term
    return out


# -- exact inversion ------------------------------------------------------


class InvertResult:
    """Solved table, the residual report, and any unsolvable blocks.

    ``residuals`` maps (class, probe) to the nonzero difference between
    the supplied absolute series and the re-glued solution; ``problems``
    lists blocks whose square system was singular or whose solution left
    the Laurent-polynomial ring.  Both empty means the inversion is an
    exact certified solution.
    """

    def __init__(self, table, residuals, problems):
        self.table = table
        self.residuals = residuals
        self.problems = problems

    @property
    def ok(self):
        return not self.residuals and not self.problems

    def __repr__(self):
        state = "ok" if self.ok else (
            "%d nonzero residuals, %d problems" % (len(self.residuals), len(self.problems))
        )
        return "InvertResult(%s, %s)" % (self.table, state)


def _series_to_ratfun(series):
    if series.trunc is not None:
        raise PrecisionError(
            "inversion needs exact (closed Laurent polynomial) series; "
            "got a series truncated at order %d" % series.trunc
        )
    var = series.var
    if not series.coeffs:
        return RationalFunction.zero(var)
    shift = min(series.min_exp, 0)
    num = [QI_ZERO] * (max(series.coeffs) - shift + 1)
    for e, c in series.coeffs.items():
        num[e - shift] = c
    den = [QI_ZERO] * (-shift) + [QI_ONE]
    return RationalFunction(num, den, var)


def _ratfun_to_series(R, context):
    nonzero = [k for k, c in enumerate(R.den) if not c.is_zero()]
    if len(nonzero) != 1:
        raise InconsistentDataError(
            "%s: solution is not a Laurent polynomial (denominator %s)"
            % (context, list(map(str, R.den)))
        )
    k = nonzero[0]
    inv = R.den[k].inverse()
    return HalfSeries(R.var, {i - k: c * inv for i, c in enumerate(R.num)})


def _tube_min_class(tube):
    classes = tube.classes()
    if not classes:
        raise MissingDataError("tube table is empty")
    c0 = classes[0]
    for c in classes:
        if any(x < y for x, y in zip(c, c0)):
            c0 = tuple(min(x, y) for x, y in zip(c, c0))
    if c0 not in set(classes):
        raise InconsistentDataError(
            "tube table needs a unique componentwise-minimal class; inferred %r "
            "is not in its support" % (c0,)
        )
    return c0


def invert_step(absolute, known, ring=None, unknown_side=None):
    """Solve the tube-gluing convolution for the unknown relative table.

    ``absolute`` maps (class, free partition) to exact series; ``known``
    is the TubeTable of the other side.  Classes are processed in
    increasing order and, per class and boundary size, the square system
    over enumerated weighted partitions (ordered by codimension) is
    solved exactly over the rational-function field.  The returned
    result carries the solved table and the residual report of a full
    re-gluing pass; corrupted input shows up as nonzero residuals.
    """
    ring = ring if ring is not None else known.ring
    side = unknown_side if unknown_side is not None else known.side
    if side != known.side:
        raise InconsistentDataError("unknown side must match the tube side")
    var = _SIDE_VAR[side]
    c0 = _tube_min_class(known)
    higher = [c for c in known.classes() if c != c0]
    for (b, g, p) in known.entries:
        if b == c0 and g.size != p.size:
            raise InconsistentDataError(
                "the tube's minimal-class block must preserve the boundary size; "
                "entry (%r, |%d|, |%d|) does not" % (b, g.size, p.size)
            )
    by_free = {}
    for (b, g, p), s in known.entries.items():
        by_free.setdefault((b, p), []).append((g, s))
    table = TheoryTable(side, ring)
    problems = []
    abs_classes = sorted({b for b, _ in absolute}, key=lambda b: (sum(b), b))
    zero_rf = RationalFunction.zero(var)
    for beta in abs_classes:
        ucls = tuple(x - y for x, y in zip(beta, c0))
        if any(x < 0 for x in ucls):
            # no unknowns here; the residual pass checks these entries
            continue
        probes = {p for b, p in absolute if b == beta}
        sizes = sorted({p.size for p in probes} | set(known.sizes_at(c0)))
        for d in sizes:
            nus = enumerate_weighted_partitions(d, ring)
            nus.sort(key=lambda w: (codim(w, ring), w.parts))
            if not nus:
                continue
            rhs = []
            for p in nus:
                r = absolute.get((beta, p), HalfSeries.zero(var))
                for c in higher:
                    off = tuple(x - y for x, y in zip(beta, c))
                    if any(x < 0 for x in off):
                        continue
                    for g, s in by_free.get((c, p), ()):
                        prior = table.entries.get((off, g))
                        if prior is None:
                            continue
                        r = r - prior * _factor(side, g) * s
                rhs.append(_series_to_ratfun(r))
            matrix = []
            for p in nus:
                row = []
                for nu in nus:
                    entry = known.get(c0, nu, p)
                    row.append(_series_to_ratfun(entry * _factor(side, nu)))
                matrix.append(row)
            if all(v.is_zero() for row in matrix for v in row):
                if any(not v.is_zero() for v in rhs):
                    problems.append(
                        {
                            "class": beta,
                            "size": d,
                            "reason": "no tube data for this boundary size but the "
                            "absolute series is nonzero",
                        }
                    )
                continue
            try:
                solution = solve_square(matrix, rhs, zero_rf)
            except SingularSystemError as exc:
                problems.append(
                    {
                        "class": beta,
                        "size": d,
                        "reason": "singular system: inconsistent or insufficient "
                        "input data (%s)" % exc,
                    }
                )
                continue
            try:
                pairs = []
                for nu, val in zip(nus, solution):
                    if val.is_zero():
                        continue
                    pairs.append(
                        (
                            nu,
                            _ratfun_to_series(
                                val, "class %r, boundary %s" % (ucls, nu.to_string(ring))
                            ),
                        )
                    )
            except InconsistentDataError as exc:
                problems.append({"class": beta, "size": d, "reason": str(exc)})
                continue
            for nu, series in pairs:
                table.set(ucls, nu, series)
    residuals = {}
    by_class = {}
    for (b, p), s in absolute.items():
        by_class.setdefault(b, {})[p] = s
    for beta, want in by_class.items():
        got = glue_with_tube(table, known, beta)
        for p in set(want) | set(got):
            lhs = want.get(p, HalfSeries.zero(var))
            rhs = got.get(p, HalfSeries.zero(var))
            diff = lhs - rhs
            if not diff.is_zero():
                residuals[(beta, p)] = diff
    return InvertResult(table, residuals, problems)


# -- pipeline orchestration ------------------------------------------------


def _toposort(nodes):
    produced = {n["output"]: n for n in nodes}
    order = []
    state = {}

    def visit(name):
        if name not in produced:
            return
        mark = state.get(name)
        if mark == "done":
            return
        if mark == "busy":
            raise InconsistentDataError("pipeline has a cycle through %r" % name)
        state[name] = "busy"
        node = produced[name]
        for dep in _node_inputs(node):
            visit(dep)
        state[name] = "done"
        order.append(node)

    for n in nodes:
        visit(n["output"])
    return order


def _node_inputs(node):
    if node["op"] == "glue":
        return [node["relative"], node["tube"]]
    if node["op"] == "invert":
        return [node["absolute"], node["tube"]]
    raise DataFormatError("unknown pipeline op %r" % node["op"])


def reduction_pipeline(nodes, leaves, max_size=None):
    """Evaluate a glue/invert DAG bottom-up.

    ``nodes`` is a list of {"output", "op", and op-specific input names};
    ``leaves`` maps leaf names to TheoryTable / TubeTable / probed maps.
    Returns (values, reports): every computed object by name, plus per-
    invert residual reports.  Cycles and missing leaves raise.
    """
    values = dict(leaves)
    reports = {}
    for node in _toposort(nodes):
        for dep in _node_inputs(node):
            if dep not in values:
                raise MissingDataError(
                    "pipeline input %r is neither a leaf nor a computed node" % dep,
                    key=dep,
                )
        if node["op"] == "glue":
            rel = values[node["relative"]]
            tube = values[node["tube"]]
            out = {}
            for beta in node["classes"]:
                beta = _as_class(beta)
                for p, s in glue_with_tube(rel, tube, beta, max_size).items():
                    out[(beta, p)] = s
            values[node["output"]] = out
        else:
            res = invert_step(values[node["absolute"]], values[node["tube"]])
            values[node["output"]] = res.table
            reports[node["output"]] = res.residuals
    return values, reports


def quintic_scheme_nodes(classes):
    """The eight-step degree-reduction DAG shape for a degree-5 target.

    Leaves expected: "T1" (a probed absolute map), bundle tubes
    "P_S1".."P_S4", and blowup tubes "B12", "B23", "B34", "B45".
    """
    classes = [list(c) for c in classes]
    return [
        {"output": "T5", "op": "glue", "relative": "T4/S4", "tube": "B45", "classes": classes},
        {"output": "T4/S4", "op": "invert", "absolute": "T4", "tube": "P_S4"},
        {"output": "T4", "op": "glue", "relative": "T3/S3", "tube": "B34", "classes": classes},
        {"output": "T3/S3", "op": "invert", "absolute": "T3", "tube": "P_S3"},
        {"output": "T3", "op": "glue", "relative": "T2/S2", "tube": "B23", "classes": classes},
        {"output": "T2/S2", "op": "invert", "absolute": "T2", "tube": "P_S2"},
        {"output": "T2", "op": "glue", "relative": "T1/S1", "tube": "B12", "classes": classes},
        {"output": "T1/S1", "op": "invert", "absolute": "T1", "tube": "P_S1"},
    ]
