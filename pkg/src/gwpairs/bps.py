"""BPS transforms between integer-type state counts and descendent-free
curve series.

Conventions
-----------
Curve classes are integer coordinate vectors in a rank-r lattice,
effective meaning componentwise >= 0.  For a class b and its divisors
b = d*b' (componentwise, d >= 1) the multiple-cover transform reads

    F_b(u) = sum_g sum_{d*b' = b} (n_{g,b'} / d) * (2 sin(du/2))^{2g-2},

with the g = 0 term contributing the u^{-2} pole.  In the q-variable
(q = -s**2, s = e^{iu/2}) the same per-class sum is the closed rational
form

    F_b(q) = sum_g sum_{d*b' = b} (n_{g,b'} / d) * (-1)^{g-1} (s^d - s^{-d})^{2g-2},

always expressible in q because only even s-exponents occur.  State
counts n are stored as exact rationals: integrality is a report, not a
type constraint.
"""

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import (
    DataFormatError,
    InconsistentDataError,
    MissingDataError,
    PrecisionError,
)
from .numeric import QI_ONE, QI_ZERO, GaussianRational
from .ratfun import RationalFunction
from .series import HalfSeries

__all__ = [
    "BpsTable",
    "GwTable",
    "sin_pow_series",
    "gv_forward",
    "gv_forward_q",
    "gv_invert",
    "integrality_report",
    "connected_to_disconnected",
    "disconnected_to_connected",
    "class_divisors",
    "effective_classes_below",
]


def _as_class(c):
    t = tuple(int(x) for x in c)
    if any(x < 0 for x in t):
        raise DataFormatError("curve classes must be effective (componentwise >= 0)")
    return t


def class_divisors(beta):
    """All (d, beta/d) with d >= 1 dividing beta componentwise."""
    beta = _as_class(beta)
    g = 0
    for x in beta:
        g = gcd(g, x)
    if g == 0:
        raise DataFormatError("the zero class carries no invariants")
    out = []
    for d in range(1, g + 1):
        if g % d == 0:
            out.append((d, tuple(x // d for x in beta)))
    return out


def effective_classes_below(beta):
    """All nonzero effective classes componentwise <= beta."""
    beta = _as_class(beta)
    ranges = [range(x + 1) for x in beta]
    return [c for c in itertools.product(*ranges) if any(c)]


class BpsTable:
    """Finite table (genus, class) -> exact rational state count."""

    def __init__(self, entries=None, max_genus=None, class_box=None, degree_fn=None):
        self.entries = {}
        for (g, beta), n in (entries or {}).items():
            self.set(g, beta, n)
        self.max_genus = max_genus
        self.class_box = None if class_box is None else _as_class(class_box)
        self.degree_fn = None if degree_fn is None else tuple(int(x) for x in degree_fn)

    def set(self, g, beta, n):
        g = int(g)
        if g < 0:
            raise DataFormatError("genus must be >= 0")
        beta = _as_class(beta)
        if not any(beta):
            raise DataFormatError("the zero class carries no invariants")
        n = Fraction(n)
        if n:
            self.entries[(g, beta)] = n
        else:
            self.entries.pop((g, beta), None)

    def get(self, g, beta):
        return self.entries.get((g, _as_class(beta)), Fraction(0))

    def in_box(self, beta):
        if self.class_box is None:
            return True
        return all(x <= b for x, b in zip(_as_class(beta), self.class_box))

    def classes(self):
        return sorted({beta for _, beta in self.entries})

    def degree(self, beta):
        """d_beta from the supplied linear functional."""
        if self.degree_fn is None:
            raise MissingDataError("no degree functional supplied")
        return sum(a * x for a, x in zip(self.degree_fn, _as_class(beta)))

    def __eq__(self, other):
        if not isinstance(other, BpsTable):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return "BpsTable(%d entries)" % len(self.entries)


class GwTable:
    """Connected curve-count table (genus, class) -> rational number.

    The genus per class is bounded below; the free energy of a class is
    the finite u-Laurent sum of its entries.
    """

    def __init__(self, entries=None):
        self.entries = {}
        for (g, beta), n in (entries or {}).items():
            self.set(g, beta, n)

    def set(self, g, beta, n):
        beta = _as_class(beta)
        n = Fraction(n)
        if n:
            self.entries[(int(g), beta)] = n
        else:
            self.entries.pop((int(g), beta), None)

    def free_energy(self, beta, trunc):
        """sum_g N_{g,beta} u^{2g-2} as an exact series, then truncated."""
        beta = _as_class(beta)
        coeffs = {}
        for (g, b), n in self.entries.items():
            if b == beta:
                coeffs[2 * g - 2] = GaussianRational(n)
        return HalfSeries("u", coeffs).truncate(trunc)


@lru_cache(maxsize=None)
def _two_sin_half(d, trunc):
    """Exact expansion of 2 sin(du/2) through u-order trunc (exclusive)."""
    coeffs = {}
    n = 1
    term = Fraction(d)  # 2 * (d/2)^n / n! at n = 1
    while n < trunc:
        coeffs[n] = GaussianRational(term)
        term = term * Fraction(-d * d, 4 * (n + 1) * (n + 2))
        n += 2
    return HalfSeries("u", coeffs, trunc)


@lru_cache(maxsize=None)
def sin_pow_series(d, g, trunc):
    """(2 sin(du/2))^{2g-2} as an exact truncated u-series.

    This is the independent trigonometric route: it never touches the
    s-variable substitution, so it can serve as the oracle for it.
    """
    if d < 1 or g < 0:
        raise DataFormatError("need d >= 1 and g >= 0")
    k = 2 * g - 2
    if k == 0:
        return HalfSeries.one("u", trunc)
    if k > 0:
        base = _two_sin_half(d, trunc + k)
        return (base**k).truncate(trunc)
    base = _two_sin_half(d, trunc + 4)
    sq = (base * base).truncate(trunc + 4)
    return sq.inverse().truncate(trunc)


def gv_forward(table, beta, trunc):
    """Per-class free energy of a state-count table, as a u-series."""
    beta = _as_class(beta)
    if not table.in_box(beta):
        raise MissingDataError(
            "class %r lies outside the table's declared class box" % (beta,),
            key=beta,
        )
    acc = HalfSeries.zero("u", trunc)
    for d, sub in class_divisors(beta):
        for (g, b), n in table.entries.items():
            if b != sub:
                continue
            acc = acc + sin_pow_series(d, g, trunc).scale(
                GaussianRational(n / d)
            )
    return acc


@lru_cache(maxsize=None)
def _q_term(d, g):
    """(-1)^{g-1} (s^d - s^{-d})^{2g-2} as a rational function of q."""
    if g == 0:
        # -(-q)^d / ((-q)^d - 1)^2
        mqd = [QI_ZERO] * d + [QI_ONE if d % 2 == 0 else -QI_ONE]
        num = [-c for c in mqd]
        den_root = list(mqd)
        den_root[0] = den_root[0] - QI_ONE
        den = [QI_ZERO] * (2 * d + 1)
        for i, a in enumerate(den_root):
            for j, b in enumerate(den_root):
                den[i + j] = den[i + j] + a * b
        return RationalFunction(num, den, "q")
    # (-1)^{g-1} ((-q)^d - 1)^{2g-2} / (-q)^{d(g-1)}
    k = 2 * g - 2
    base = RationalFunction([0] * d + [1 if d % 2 == 0 else -1], [1], "q") - 1
    num = RationalFunction.constant(1, "q")
    for _ in range(k):
        num = num * base
    sign = 1 if (g - 1) % 2 == 0 else -1
    denpow = d * (g - 1)
    mq_sign = 1 if denpow % 2 == 0 else -1
    den = RationalFunction([0] * denpow + [mq_sign], [1], "q")
    return num * den.inverse() * sign


def gv_forward_q(table, beta):
    """Closed rational form in q of the per-class free energy."""
    beta = _as_class(beta)
    if not table.in_box(beta):
        raise MissingDataError(
            "class %r lies outside the table's declared class box" % (beta,),
            key=beta,
        )
    acc = RationalFunction.zero("q")
    for d, sub in class_divisors(beta):
        for (g, b), n in table.entries.items():
            if b != sub:
                continue
            acc = acc + _q_term(d, g) * GaussianRational(n / d)
    return acc


def _extract_fraction(c, context):
    if not c.is_rational():
        raise InconsistentDataError(
            "%s produced a non-real coefficient %s" % (context, c)
        )
    return c.re


def gv_invert(fmap, ray=None, max_genus=None):
    """Triangular inversion of gv_forward.

    ``fmap`` maps classes to u-series, closed under divisors for every
    class it contains.  Classes are processed by divisibility; multiple-
    cover contributions of already-solved classes are subtracted, then
    state counts are read off genus by genus using that
    (2 sin(du/2))^{2g-2} = u^{2g-2} (1 + O(u^2)).  Any leftover known
    coefficient (odd powers included) is an inconsistency and raises
    InconsistentDataError, since the transform claims exact
    representability.  Returns (table, horizon) where horizon maps each
    class to the largest genus certified by its truncation.
    """
    classes = [_as_class(b) for b in (ray if ray is not None else fmap.keys())]
    classes.sort(key=lambda b: (sum(b), b))
    table = BpsTable(max_genus=max_genus)
    horizon = {}
    solved = set()
    for beta in classes:
        series = fmap.get(beta)
        if series is None:
            raise MissingDataError("no series supplied for class %r" % (beta,), key=beta)
        # working truncation and certified genus horizon
        if series.trunc is None:
            top = max(series.coeffs) if series.coeffs else -2
            g_cap = max_genus if max_genus is not None else max(0, (top + 2) // 2)
            residual = series.truncate(max(top + 1, 2 * g_cap - 1))
        else:
            g_avail = max(0, (series.trunc + 1) // 2)
            if max_genus is not None and g_avail < max_genus:
                raise PrecisionError(
                    "series for %r certifies genus <= %d, below the requested %d"
                    % (beta, g_avail, max_genus),
                    achievable=g_avail,
                )
            g_cap = g_avail if max_genus is None else max_genus
            residual = series
        trunc = residual.trunc
        for d, sub in class_divisors(beta):
            if d == 1:
                continue
            if sub not in solved:
                raise MissingDataError(
                    "divisor class %r of %r missing from the input" % (sub, beta),
                    key=sub,
                )
            for (g, b), n in list(table.entries.items()):
                if b != sub:
                    continue
                residual = residual - sin_pow_series(d, g, trunc).scale(
                    GaussianRational(n / d)
                )
        for g in range(0, g_cap + 1):
            c = residual.coeff(2 * g - 2)
            if c.is_zero():
                continue
            n = _extract_fraction(c, "inversion at genus %d, class %r" % (g, beta))
            table.set(g, beta, n)
            residual = residual - sin_pow_series(1, g, trunc).scale(GaussianRational(n))
        # even leftovers above the horizon may be genus > g_cap content and
        # are tolerated; anything else contradicts the transform's shape
        for e in residual.support():
            if e < -2 or e % 2 or e <= 2 * g_cap - 2:
                raise InconsistentDataError(
                    "series for class %r is not in the span of the multiple-cover "
                    "forms: leftover coefficient at u^%d" % (beta, e)
                )
        solved.add(beta)
        horizon[beta] = g_cap
    return table, horizon


def integrality_report(table):
    """Non-integral entries plus the top nonzero genus per class."""
    violations = []
    top_genus = {}
    for (g, beta), n in sorted(table.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if n.denominator != 1:
            violations.append({"genus": g, "class": beta, "value": n})
        if n:
            top_genus[beta] = max(top_genus.get(beta, 0), g)
    return {
        "violations": violations,
        "top_nonzero_genus": top_genus,
        "max_genus_bound": table.max_genus,
    }


def _require_subclasses(fmap, beta, strict):
    if not strict:
        return
    for sub in effective_classes_below(beta):
        if sub != _as_class(beta) and sub not in fmap:
            raise MissingDataError(
                "connected data for subclass %r of %r is missing" % (sub, beta),
                key=sub,
            )


def connected_to_disconnected(fmap, beta, strict=True):
    """Coefficient of v^beta in exp(sum of connected series).

    ``fmap`` maps nonzero effective classes to u-series; with ``strict``
    every nonzero subclass of beta must be an explicit key (a zero
    series is fine, silence is not).
    """
    beta = _as_class(beta)
    _require_subclasses(fmap, beta, strict)
    if beta in fmap:
        total = fmap[beta]
    else:
        if strict:
            raise MissingDataError("no connected series for %r" % (beta,), key=beta)
        total = HalfSeries.zero("u")
    power = {b: s for b, s in fmap.items() if _dominated(b, beta)}
    factorial = 1
    k = 1
    current = dict(power)
    while True:
        k += 1
        factorial *= k
        nxt = {}
        for b1, s1 in current.items():
            for b2, s2 in power.items():
                b = tuple(x + y for x, y in zip(b1, b2))
                if not _dominated(b, beta):
                    continue
                prod = s1 * s2
                nxt[b] = nxt.get(b, HalfSeries.zero("u")) + prod
        if not nxt:
            break
        current = nxt
        if beta in current:
            total = total + current[beta].scale(GaussianRational(Fraction(1, factorial)))
    return total


def disconnected_to_connected(zmap, beta, strict=True):
    """Coefficient of v^beta in log(1 + sum of disconnected series)."""
    beta = _as_class(beta)
    _require_subclasses(zmap, beta, strict)
    if beta in zmap:
        total = zmap[beta]
    else:
        if strict:
            raise MissingDataError("no disconnected series for %r" % (beta,), key=beta)
        total = HalfSeries.zero("u")
    power = {b: s for b, s in zmap.items() if _dominated(b, beta)}
    k = 1
    current = dict(power)
    while True:
        k += 1
        nxt = {}
        for b1, s1 in current.items():
            for b2, s2 in power.items():
                b = tuple(x + y for x, y in zip(b1, b2))
                if not _dominated(b, beta):
                    continue
                nxt[b] = nxt.get(b, HalfSeries.zero("u")) + s1 * s2
        if not nxt:
            break
        current = nxt
        if beta in current:
            sign = Fraction(1, k) if k % 2 else Fraction(-1, k)
            total = total + current[beta].scale(GaussianRational(sign))
    return total


def _dominated(b, beta):
    return all(x <= y for x, y in zip(b, beta))
