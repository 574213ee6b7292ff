"""Descendent bookkeeping: the overline expansion over set partitions,
a pluggable triangular translation matrix, and the change-of-variable
prefactors.

The translation matrix is external data, never hardcoded: this package
only fixes its shape (entries indexed by a pair of partitions, values
Laurent series in u whose coefficients are polynomials in the formal
symbols c1, c2, c3 over Q[i], zero unless the first partition has size
>= the second).  A shipped "stationary preset" sets the single-part
diagonal entries to (iu)^{-k} and everything else to zero; it is a test
fixture consistent with the stationary prefactor below, not a claim
about the true matrix entries.

Monomials of descendent factors t_k(class) obey the odd-class sign
rule: swapping two odd-class factors flips the sign, a repeated odd
factor kills the monomial.  Normal form sorts factors and tracks the
sign.
"""

import itertools
from fractions import Fraction

from .errors import (
    DataFormatError,
    InconsistentDataError,
    MissingDataError,
    PrecisionError,
)
from .cohring import enumerate_set_partitions, small_diagonal
from .numeric import QI_I, QI_ONE, QI_ZERO, GaussianRational
from .ratfun import RationalFunction, ratfun_to_u
from .series import HalfSeries

__all__ = [
    "DescendentMonomial",
    "CorrMatrix",
    "ChernParams",
    "tau_hat_expand",
    "overline",
    "expansion_term_count",
    "stationary_prefactor",
    "correspondence_predicate",
]


class DescendentMonomial:
    """Canonical product of descendent factors (level, basis index).

    ``boundary`` optionally carries a relative condition along; it is
    inert data for the expansion engine.
    """

    __slots__ = ("factors", "boundary")

    def __init__(self, factors, boundary=None):
        object.__setattr__(self, "factors", tuple((int(k), int(i)) for k, i in factors))
        object.__setattr__(self, "boundary", boundary)

    def __setattr__(self, name, value):
        raise AttributeError("DescendentMonomial is immutable")

    @staticmethod
    def normalize(factors, ring, boundary=None):
        """Sort factors into canonical order tracking the odd sign.

        Returns (sign, monomial); monomial is None when two identical
        odd factors collide (the product is zero).
        """
        factors = [(int(k), int(i)) for k, i in factors]
        sign = 1
        # O(n^2) inversion count; ell stays small
        for a in range(len(factors)):
            for b in range(a + 1, len(factors)):
                if factors[a] > factors[b]:
                    if ring.parity[factors[a][1]] and ring.parity[factors[b][1]]:
                        sign = -sign
                elif factors[a] == factors[b] and ring.parity[factors[a][1]]:
                    return 1, None
        factors.sort()
        return sign, DescendentMonomial(factors, boundary)

    def to_string(self, ring=None):
        if not self.factors:
            body = "1"
        else:
            names = []
            for k, i in self.factors:
                cls = ring.basis[i] if ring is not None else str(i)
                names.append("t%d(%s)" % (k, cls))
            body = "*".join(names)
        if self.boundary is not None:
            body += " | " + self.boundary.to_string(ring)
        return body

    def __eq__(self, other):
        if not isinstance(other, DescendentMonomial):
            return NotImplemented
        return self.factors == other.factors and self.boundary == other.boundary

    def __lt__(self, other):
        mine = (self.factors, () if self.boundary is None else self.boundary.parts)
        theirs = (other.factors, () if other.boundary is None else other.boundary.parts)
        return mine < theirs

    def __hash__(self):
        return hash((self.factors, self.boundary))

    def __repr__(self):
        return "DescendentMonomial(%s)" % self.to_string()


class ChernParams:
    """The three tangent-type classes substituted for c1, c2, c3.

    Absolute geometries use the tangent bundle classes, relative ones
    the log-tangent classes; either way they are caller-supplied ring
    elements with deg(c_i) = i.
    """

    def __init__(self, ring, c1=None, c2=None, c3=None):
        self.ring = ring
        self.classes = []
        for i, c in enumerate((c1, c2, c3), start=1):
            el = ring.element(c) if c else {}
            if el and ring.element_degree(el) != i:
                raise DataFormatError(
                    "substituted class c%d must have degree %d" % (i, i)
                )
            self.classes.append(el)
        self._powers = {}

    def monomial_element(self, exps):
        """Ring element for c1^e1 * c2^e2 * c3^e3."""
        key = tuple(exps)
        if key in self._powers:
            return self._powers[key]
        el = self.ring.one()
        for c, e in zip(self.classes, key):
            for _ in range(e):
                el = self.ring.mul_elements(el, c)
                if not el:
                    break
            if not el:
                break
        self._powers[key] = el
        return el


def _parse_partition_key(text):
    parts = tuple(sorted((int(x) for x in text.split(",") if x.strip() != ""), reverse=True))
    if any(p < 1 for p in parts) or not parts:
        raise DataFormatError("bad partition key %r" % text)
    return parts


class CorrMatrix:
    """Triangular translation matrix keyed by pairs of partitions.

    ``entries[alpha][alpha_hat]`` is {u_exponent: {(e1,e2,e3): coeff}}.
    A partition ``alpha`` that appears as a key is fully declared: its
    absent ``alpha_hat`` values are exact zeros.  A partition that does
    not appear at all is missing data and lookups raise.
    """

    def __init__(self, entries):
        self.entries = {}
        for alpha, row in entries.items():
            alpha = tuple(alpha)
            clean_row = {}
            for alpha_hat, upoly in row.items():
                alpha_hat = tuple(alpha_hat)
                if sum(alpha_hat) > sum(alpha) and _upoly_nonzero(upoly):
                    raise InconsistentDataError(
                        "triangularity violated: entry (%s -> %s) must vanish "
                        "because the target partition is larger"
                        % (",".join(map(str, alpha)), ",".join(map(str, alpha_hat)))
                    )
                clean = _clean_upoly(upoly)
                if clean:
                    clean_row[alpha_hat] = clean
            self.entries[alpha] = clean_row
        for alpha, row in self.entries.items():
            if len(row) > 64:
                raise DataFormatError("too many target partitions for %r" % (alpha,))

    def declared(self, alpha):
        return tuple(alpha) in self.entries

    def row(self, alpha):
        alpha = tuple(alpha)
        if alpha not in self.entries:
            raise MissingDataError(
                "matrix data incomplete: no entries declared for source partition "
                "(%s)" % ",".join(map(str, alpha)),
                key=alpha,
            )
        return self.entries[alpha]

    def evaluate(self, alpha, alpha_hat, chern):
        """Substitute the c-classes: {u_exponent: ring element}."""
        row = self.row(alpha)
        upoly = row.get(tuple(alpha_hat), {})
        out = {}
        ring = chern.ring
        for uexp, cpoly in upoly.items():
            el = {}
            for exps, coeff in cpoly.items():
                base = chern.monomial_element(exps)
                for idx, c in base.items():
                    v = el.get(idx, QI_ZERO) + c * coeff
                    el[idx] = v
            el = {i: c for i, c in el.items() if not c.is_zero()}
            if el:
                out[uexp] = el
        return out

    @staticmethod
    def stationary_preset(max_size):
        """Fixture: (iu)^{-k} on single-part diagonal entries, zero elsewhere.

        Every partition of size <= max_size is declared so lookups are
        total within the size bound.
        """
        entries = {}
        for size in range(1, max_size + 1):
            for alpha in _partitions_of(size):
                entries[alpha] = {}
                if len(alpha) == 1:
                    k = alpha[0] - 1
                    coeff = QI_I ** (-k) if k else QI_ONE
                    entries[alpha][alpha] = {-k: {(0, 0, 0): coeff}}
        return CorrMatrix(entries)


def _partitions_of(d, maximum=None):
    if d == 0:
        yield ()
        return
    if maximum is None:
        maximum = d
    for first in range(min(d, maximum), 0, -1):
        for rest in _partitions_of(d - first, first):
            yield (first,) + rest


def _upoly_nonzero(upoly):
    for cpoly in upoly.values():
        for coeff in cpoly.values():
            c = coeff if isinstance(coeff, GaussianRational) else GaussianRational.coerce(coeff)
            if not c.is_zero():
                return True
    return False


def _clean_upoly(upoly):
    out = {}
    for uexp, cpoly in upoly.items():
        cc = {}
        for exps, coeff in cpoly.items():
            c = coeff if isinstance(coeff, GaussianRational) else GaussianRational.coerce(coeff)
            if not c.is_zero():
                cc[tuple(int(e) for e in exps)] = c
        if cc:
            out[int(uexp)] = cc
    return out


def tau_hat_expand(alpha_hat, gamma, ring, diagonal_rows=None):
    """Expand a bracketed insertion through the small diagonal.

    Returns a list of (coefficient, factor tuple) where the j-th factor
    is (alpha_hat[j] - 1, basis index); the tuples are raw, i.e. not
    reordered into normal form.
    """
    alpha_hat = tuple(alpha_hat)
    if not alpha_hat:
        raise DataFormatError("target partition must have at least one part")
    tensor = small_diagonal(gamma, len(alpha_hat), ring, comult_rows=diagonal_rows)
    out = []
    for tup, coeff in sorted(tensor.items()):
        factors = tuple((alpha_hat[j] - 1, tup[j]) for j in range(len(alpha_hat)))
        out.append((coeff, factors))
    return out


def _blocks_data(factors, ring):
    """Shared per-input data: parities and the signed set partitions."""
    parities = []
    for _, gamma in factors:
        parities.append(ring.element_parity(gamma))
    return parities, enumerate_set_partitions(len(factors), parities)


def expansion_term_count(factors, ring):
    """Number of set-partition terms the overline expansion runs over."""
    _, sps = _blocks_data(list(factors), ring)
    return len(sps)


def overline(factors, matrix, chern, ring, boundary=None, diagonal_rows=None):
    """The translated descendent product, expanded and normal-formed.

    ``factors`` is a sequence of (level k >= 0, ring element); the
    result maps DescendentMonomial to an exact u-series coefficient.
    Blocks whose class product vanishes contribute zero silently; a
    source partition with no declared matrix row raises MissingDataError.
    """
    factors = [(int(k), ring.element(g) if not isinstance(g, dict) else g) for k, g in factors]
    if not factors:
        raise DataFormatError("need at least one descendent factor")
    parities, sps = _blocks_data(factors, ring)
    result = {}
    for sp in sps:
        block_maps = []
        dead = False
        for block in sp.blocks:
            alpha_s = tuple(sorted((factors[i][0] + 1 for i in block), reverse=True))
            gamma_s = None
            for i in block:
                gamma_s = (
                    factors[i][1]
                    if gamma_s is None
                    else ring.mul_elements(gamma_s, factors[i][1])
                )
            if not gamma_s:
                dead = True
                break
            row = matrix.row(alpha_s)
            bmap = {}
            for alpha_hat in row:
                per_exp = matrix.evaluate(alpha_s, alpha_hat, chern)
                for uexp, el in per_exp.items():
                    acted = ring.mul_elements(el, gamma_s)
                    if not acted:
                        continue
                    for coeff, ftuple in tau_hat_expand(
                        alpha_hat, acted, ring, diagonal_rows
                    ):
                        series = HalfSeries.monomial("u", uexp, coeff)
                        prev = bmap.get(ftuple)
                        bmap[ftuple] = series if prev is None else prev + series
            if not bmap:
                dead = True
                break
            block_maps.append(bmap)
        if dead:
            continue
        combined = {(): HalfSeries.one("u")}
        for bmap in block_maps:
            nxt = {}
            for f1, s1 in combined.items():
                for f2, s2 in bmap.items():
                    key = f1 + f2
                    prod = s1 * s2
                    prev = nxt.get(key)
                    nxt[key] = prod if prev is None else prev + prod
            combined = nxt
        for ftuple, series in combined.items():
            nsign, mono = DescendentMonomial.normalize(ftuple, ring, boundary)
            if mono is None:
                continue
            total_sign = sp.sign * nsign
            scaled = series if total_sign == 1 else series.scale(-1)
            prev = result.get(mono)
            result[mono] = scaled if prev is None else prev + scaled
    return {m: s for m, s in result.items() if not s.is_zero()}


def stationary_prefactor(k_list, d_beta):
    """(-iu)^{d} (iu)^{-sum k_j} as an exact u-monomial."""
    total_k = sum(int(k) for k in k_list)
    d = int(d_beta)
    coeff = (-QI_I) ** d * QI_I ** (-total_k) if (d or total_k) else QI_ONE
    return HalfSeries.monomial("u", d - total_k, coeff)


def correspondence_predicate(zp, zgw, d_beta, lmu_minus_absmu, u_trunc):
    """Check the two-theory equality at the stated prefactors.

    Left side: the closed q-form times (-q)^{-d/2} = s^{-d}, expanded
    around u = 0 via s = e^{iu/2}.  Right side: the u-series times
    (-iu)^{d + (l(mu) - |mu|)}.  Compared coefficientwise below u_trunc;
    an under-truncated right side raises PrecisionError.
    """
    if zp.var not in ("q", "s"):
        raise DataFormatError("left side must be a rational function of q or s")
    if zgw.var != "u":
        raise DataFormatError("right side must be a series in u")
    power = int(d_beta) + int(lmu_minus_absmu)
    left = zp.to_s() if zp.var == "q" else zp
    left = left * RationalFunction.monomial(-int(d_beta), "s")
    lhs = ratfun_to_u(left, u_trunc)
    coeff = (-QI_I) ** power if power else QI_ONE
    rhs = zgw.shift(power).scale(coeff)
    if rhs.trunc is not None and rhs.trunc < u_trunc:
        raise PrecisionError(
            "right side is only known below u^%d; comparison through u^%d needs more"
            % (rhs.trunc, u_trunc - 1),
            achievable=rhs.trunc,
        )
    return lhs.agrees_with(rhs, through=u_trunc - 1)
