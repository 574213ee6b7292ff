"""Truncated Laurent series over Q[i] in one of two variables.

Conventions
-----------
Two variable tags are used, ``s`` and ``u``.  On the ``s`` side the
natural counting variable is q = -s**2, so a genuine Laurent series in
q occupies only even s-exponents and half-integral q-powers occupy the
odd ones.  The two sides are linked by the substitution s = e^{iu/2},
equivalently -q = e^{iu}.

A series stores a finite coefficient map {exponent: GaussianRational}
together with a truncation order ``trunc``:

* coefficients at exponents  e < trunc  are known exactly (absent means
  exactly zero),
* coefficients at exponents  e >= trunc  are unknown.

``trunc = None`` marks an exact series (a Laurent polynomial): every
absent coefficient is exactly zero.  Truncation is explicit data and is
propagated conservatively through arithmetic; equality checks elsewhere
in the package are always "to stated order".
"""

from fractions import Fraction
from functools import lru_cache

from .errors import (
    NonInvertibleError,
    PrecisionError,
    VariableMismatchError,
)
from .numeric import QI_ONE, QI_ZERO, GaussianRational

__all__ = ["HalfSeries", "QView", "to_u", "coefficients_equal"]


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class HalfSeries:
    """A truncated Laurent series in ``s`` or ``u`` with Q[i] coefficients."""

    __slots__ = ("var", "coeffs", "trunc")

    def __init__(self, var, coeffs=None, trunc=None):
        if var not in ("s", "u"):
            raise VariableMismatchError("variable tag must be 's' or 'u', got %r" % var)
        clean = {}
        for exp, c in (coeffs or {}).items():
            c = GaussianRational.coerce(c)
            if trunc is not None and exp >= trunc:
                continue
            if not c.is_zero():
                clean[int(exp)] = c
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("HalfSeries is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(var, trunc=None):
        return HalfSeries(var, {}, trunc)

    @staticmethod
    def one(var, trunc=None):
        return HalfSeries(var, {0: QI_ONE}, trunc)

    @staticmethod
    def monomial(var, exp, coeff=QI_ONE, trunc=None):
        return HalfSeries(var, {exp: GaussianRational.coerce(coeff)}, trunc)

    @staticmethod
    def from_q_coeffs(qcoeffs, trunc_q=None):
        """Build the s-side series of a q-series, via q = -s**2."""
        coeffs = {}
        for n, c in qcoeffs.items():
            c = GaussianRational.coerce(c)
            if n % 2:
                c = -c
            coeffs[2 * n] = c
        trunc = None if trunc_q is None else 2 * trunc_q
        return HalfSeries("s", coeffs, trunc)

    # -- basic queries -----------------------------------------------------

    @property
    def is_exact(self):
        return self.trunc is None

    @property
    def min_exp(self):
        """Lowest stored exponent (trunc for an empty truncated series)."""
        if self.coeffs:
            return min(self.coeffs)
        return self.trunc if self.trunc is not None else 0

    def valuation(self):
        """Order of the lowest known nonzero coefficient, or None if none."""
        if self.coeffs:
            return min(self.coeffs)
        return None

    def known(self, exp):
        return self.trunc is None or exp < self.trunc

    def coeff(self, exp):
        """Exact coefficient at ``exp``; raises PrecisionError past trunc."""
        if not self.known(exp):
            raise PrecisionError(
                "coefficient at %s^%d is beyond truncation order %d"
                % (self.var, exp, self.trunc),
                achievable=self.trunc - 1,
            )
        return self.coeffs.get(exp, QI_ZERO)

    def is_zero(self):
        """True when every known coefficient vanishes."""
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def _check_var(self, other):
        if self.var != other.var:
            raise VariableMismatchError(
                "cannot combine series in %s with series in %s" % (self.var, other.var)
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = HalfSeries(self.var, {0: GaussianRational.coerce(other)})
        self._check_var(other)
        trunc = _min_trunc(self.trunc, other.trunc)
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            coeffs[e] = coeffs.get(e, QI_ZERO) + c
        return HalfSeries(self.var, coeffs, trunc)

    __radd__ = __add__

    def __neg__(self):
        return HalfSeries(self.var, {e: -c for e, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = HalfSeries(self.var, {0: GaussianRational.coerce(other)})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = GaussianRational.coerce(c)
        if c.is_zero():
            return HalfSeries(self.var, {}, self.trunc)
        return HalfSeries(self.var, {e: v * c for e, v in self.coeffs.items()}, self.trunc)

    def shift(self, k):
        """Multiply by var**k (an exact monomial shift)."""
        trunc = None if self.trunc is None else self.trunc + k
        return HalfSeries(self.var, {e + k: c for e, c in self.coeffs.items()}, trunc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        self._check_var(other)
        # conservative truncation: an unknown tail of one factor first
        # pollutes the product at (trunc + valuation of the other factor)
        if self.trunc is None and other.trunc is None:
            trunc = None
        else:
            va = self.min_exp
            vb = other.min_exp
            ta = self.trunc if self.trunc is not None else None
            tb = other.trunc if other.trunc is not None else None
            cands = []
            if ta is not None:
                cands.append(ta + vb)
            if tb is not None:
                cands.append(tb + va)
            trunc = min(cands)
        coeffs = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if trunc is not None and e >= trunc:
                    continue
                prev = coeffs.get(e)
                coeffs[e] = c1 * c2 if prev is None else prev + c1 * c2
        return HalfSeries(self.var, coeffs, trunc)

    __rmul__ = __mul__

    def truncate(self, trunc):
        """Forget coefficients at exponents >= trunc."""
        new = _min_trunc(self.trunc, trunc)
        return HalfSeries(self.var, {e: c for e, c in self.coeffs.items() if e < new}, new)

    def inverse(self, trunc=None):
        """Multiplicative inverse as a truncated Laurent series.

        For a truncated input known to order T with valuation v the
        inverse is determined to order T - 2v; for an exact input the
        caller must supply ``trunc`` unless the series is a monomial.
        """
        v = self.valuation()
        if v is None:
            raise NonInvertibleError(
                "series is zero to its known order; no inverse exists"
            )
        lead = self.coeffs[v]
        if len(self.coeffs) == 1 and self.trunc is None:
            return HalfSeries.monomial(self.var, -v, lead.inverse())
        if self.trunc is None:
            if trunc is None:
                raise PrecisionError(
                    "inverse of a non-monomial exact series is an infinite series; "
                    "a truncation order is required"
                )
            own = None
        else:
            own = self.trunc - 2 * v
        out_trunc = _min_trunc(own, trunc)
        if out_trunc is not None and out_trunc <= -v:
            raise PrecisionError(
                "input truncation supports no coefficients of the inverse",
                achievable=None if own is None else own - 1,
            )
        # normalized tail t with a = lead * s^v * (1 + t)
        n_terms = (out_trunc + v) if out_trunc is not None else None
        inv_lead = lead.inverse()
        tail = {}
        for e, c in self.coeffs.items():
            if e == v:
                continue
            k = e - v
            if n_terms is None or k < n_terms:
                tail[k] = c * inv_lead
        inv = {0: QI_ONE}
        for n in range(1, n_terms):
            acc = QI_ZERO
            for k, t in tail.items():
                if 1 <= k <= n:
                    prev = inv.get(n - k)
                    if prev is not None:
                        acc = acc - t * prev
            if not acc.is_zero():
                inv[n] = acc
        coeffs = {k - v: c * inv_lead for k, c in inv.items()}
        return HalfSeries(self.var, coeffs, out_trunc)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise TypeError("only nonnegative integer powers; use inverse() for negatives")
        result = HalfSeries.one(self.var, None)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- comparisons -------------------------------------------------------

    def agrees_with(self, other, through=None):
        """Coefficientwise equality on the common known window.

        ``through`` bounds the highest exponent compared (inclusive);
        raises PrecisionError if the window is empty or the requested
        bound is not known on both sides.
        """
        self._check_var(other)
        hi = _min_trunc(self.trunc, other.trunc)
        if through is not None:
            if hi is not None and through >= hi:
                raise PrecisionError(
                    "comparison through %s^%d requested but inputs are only known "
                    "below order %d" % (self.var, through, hi),
                    achievable=hi - 1,
                )
            hi = through + 1
        exps = set(self.coeffs) | set(other.coeffs)
        for e in exps:
            if hi is not None and e >= hi:
                continue
            if self.coeffs.get(e, QI_ZERO) != other.coeffs.get(e, QI_ZERO):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, HalfSeries):
            return NotImplemented
        return (
            self.var == other.var
            and self.trunc == other.trunc
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.var, self.trunc, tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))))

    # -- formatting ----------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for e in self.support():
                c = str(self.coeffs[e])
                if "+" in c[1:] or "-" in c[1:]:
                    c = "(%s)" % c
                if e == 0:
                    parts.append(c)
                elif e == 1:
                    parts.append("%s*%s" % (c, self.var))
                else:
                    parts.append("%s*%s^%d" % (c, self.var, e))
            body = " + ".join(parts)
        if self.trunc is None:
            return body
        return "%s + O(%s^%d)" % (body, self.var, self.trunc)

    def __repr__(self):
        return "HalfSeries(%r, %s)" % (self.var, self)


class QView:
    """View of an s-side series as a Laurent series in q = -s**2.

    ``parity_ok`` is True when only even s-exponents occur, i.e. the
    series is a genuine Laurent series in q.  Half-integral q-powers
    (odd s-exponents) arise from the (-q)^{-d/2} prefactor and make
    parity_ok False.
    """

    __slots__ = ("series", "parity_ok")

    def __init__(self, series):
        if series.var != "s":
            raise VariableMismatchError("QView applies to series in s only")
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "parity_ok", all(e % 2 == 0 for e in series.coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("QView is immutable")

    def q_coeff(self, n):
        c = self.series.coeff(2 * n)
        return -c if n % 2 else c

    def q_coeffs(self):
        if not self.parity_ok:
            raise VariableMismatchError(
                "series has odd s-exponents; it is not a Laurent series in q"
            )
        return {e // 2: self.q_coeff(e // 2) for e in self.series.coeffs}

    @property
    def trunc_q(self):
        t = self.series.trunc
        if t is None:
            return None
        # q^n is known iff s^{2n} is known, i.e. 2n < t
        return (t + 1) // 2


@lru_cache(maxsize=None)
def _exp_half_series(e, trunc):
    """Exact expansion of e^{i e u / 2} through u-order trunc (exclusive)."""
    coeffs = {}
    term = QI_ONE
    step = GaussianRational(0, Fraction(e, 2))
    for n in range(trunc):
        if not term.is_zero():
            coeffs[n] = term
        term = term * step / (n + 1)
    return HalfSeries("u", coeffs, trunc)


def to_u(x, trunc):
    """Substitute s = e^{iu/2} into an exact s-series.

    The input must be exact (trunc None): a single unknown s-coefficient
    would contribute to every u-order, so a truncated s-series
    determines no u-coefficient at all.
    """
    if x.var != "s":
        raise VariableMismatchError("to_u expects a series in s")
    if not x.is_exact:
        raise PrecisionError(
            "substitution s = e^{iu/2} needs an exact series: an unknown "
            "s-coefficient contributes to every u-order (no u-order is "
            "achievable from a truncated input)",
            achievable=None,
        )
    if trunc <= 0:
        raise PrecisionError("requested u-truncation must be positive")
    out = HalfSeries.zero("u", trunc)
    for e, c in x.coeffs.items():
        out = out + _exp_half_series(e, trunc).scale(c)
    return out.truncate(trunc)


def coefficients_equal(a, b, through):
    """Exact coefficientwise equality up to and including ``through``."""
    return a.agrees_with(b, through=through)
