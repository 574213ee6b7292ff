"""Rational functions in one variable over Q[i].

Polynomials are plain coefficient lists (index = exponent, no trailing
zeros).  A RationalFunction is kept fully reduced: exact polynomial gcd
divided out, denominator monic, so structural equality is canonical
equality.  Reconstruction from a truncated Laurent series is the exact
linear-algebra (Pade-type) form of the rationality predicate: it either
certifies a rational function within given degree bounds or refutes one.
"""

from .errors import (
    DataFormatError,
    NonInvertibleError,
    PrecisionError,
    VariableMismatchError,
)
from .linalg import nullspace
from .numeric import QI_ONE, QI_ZERO, GaussianRational
from .series import HalfSeries, QView, to_u

__all__ = [
    "RationalFunction",
    "check_q_symmetry",
    "reconstruct",
    "reconstruct_q",
    "expand",
    "ratfun_to_u",
]


# -- polynomial helpers (coefficient lists over GaussianRational) --------


def poly_trim(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def poly_add(a, b):
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        x = a[k] if k < len(a) else QI_ZERO
        y = b[k] if k < len(b) else QI_ZERO
        out.append(x + y)
    return poly_trim(out)


def poly_scale(a, c):
    return poly_trim([x * c for x in a])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [QI_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return poly_trim(out)


def poly_divmod(a, b):
    """Exact division with remainder over the field Q[i]."""
    if not b:
        raise NonInvertibleError("polynomial division by zero")
    r = list(a)
    q = [QI_ZERO] * max(0, len(a) - len(b) + 1)
    inv_lead = b[-1].inverse()
    for k in range(len(a) - len(b), -1, -1):
        if len(r) < len(b) + k:
            continue
        c = r[len(b) + k - 1] * inv_lead
        if c.is_zero():
            continue
        q[k] = c
        for j, y in enumerate(b):
            r[j + k] = r[j + k] - c * y
    return poly_trim(q), poly_trim(r)


def poly_gcd(a, b):
    """Monic gcd by the Euclidean algorithm."""
    a, b = list(a), list(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a:
        a = poly_scale(a, a[-1].inverse())
    return a


def _parse_coeff(c):
    if isinstance(c, str):
        return GaussianRational.parse(c)
    return GaussianRational.coerce(c)


class RationalFunction:
    """A reduced fraction of polynomials over Q[i] in variable s or q."""

    __slots__ = ("num", "den", "var")

    def __init__(self, num, den=(1,), var="q"):
        if var not in ("s", "q", "u"):
            raise VariableMismatchError("variable tag must be 's', 'q' or 'u'")
        num = poly_trim([_parse_coeff(c) for c in num])
        den = poly_trim([_parse_coeff(c) for c in den])
        if not den:
            raise NonInvertibleError("rational function with zero denominator")
        g = poly_gcd(num, den)
        if len(g) > 1:
            num, _ = poly_divmod(num, g)
            den, _ = poly_divmod(den, g)
        inv_lead = den[-1].inverse()
        num = poly_scale(num, inv_lead)
        den = poly_scale(den, inv_lead)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(c, var="q"):
        return RationalFunction([c], [1], var)

    @staticmethod
    def monomial(k, var="q", coeff=1):
        if k >= 0:
            num = [0] * k + [coeff]
            return RationalFunction(num, [1], var)
        den = [0] * (-k) + [1]
        return RationalFunction([coeff], den, var)

    @staticmethod
    def zero(var="q"):
        return RationalFunction([], [1], var)

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) == 1

    def _check_var(self, other):
        if self.var != other.var:
            raise VariableMismatchError(
                "cannot combine function of %s with function of %s" % (self.var, other.var)
            )

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int,)):
            other = RationalFunction.constant(other, self.var)
        self._check_var(other)
        num = poly_add(
            poly_mul(list(self.num), list(other.den)),
            poly_mul(list(other.num), list(self.den)),
        )
        den = poly_mul(list(self.den), list(other.den))
        return RationalFunction(num, den, self.var)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction([-(c) for c in self.num], list(self.den), self.var)

    def __sub__(self, other):
        if isinstance(other, int):
            other = RationalFunction.constant(other, self.var)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return RationalFunction(
                poly_scale(list(self.num), GaussianRational.coerce(other)),
                list(self.den),
                self.var,
            )
        self._check_var(other)
        return RationalFunction(
            poly_mul(list(self.num), list(other.num)),
            poly_mul(list(self.den), list(other.den)),
            self.var,
        )

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise NonInvertibleError("inverse of the zero rational function")
        return RationalFunction(list(self.den), list(self.num), self.var)

    def __truediv__(self, other):
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.var == other.var and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.var, self.num, self.den))

    # -- variable changes ----------------------------------------------------

    def to_s(self):
        """Substitute q = -s**2, returning a function of s."""
        if self.var == "s":
            return self
        if self.var != "q":
            raise VariableMismatchError("to_s applies to functions of q")
        return RationalFunction(_sub_minus_s2(self.num), _sub_minus_s2(self.den), "s")

    def __str__(self):
        num = _poly_str(self.num, self.var)
        if self.den == (QI_ONE,):
            return num
        return "(%s)/(%s)" % (num, _poly_str(self.den, self.var))

    def __repr__(self):
        return "RationalFunction(%s)" % self


def _sub_minus_s2(p):
    out = [QI_ZERO] * (2 * len(p) - 1) if p else []
    for k, c in enumerate(p):
        out[2 * k] = c if k % 2 == 0 else -c
    return out


def _poly_str(p, var):
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p):
        if c.is_zero():
            continue
        cs = str(c)
        if ("+" in cs[1:]) or ("-" in cs[1:]):
            cs = "(%s)" % cs
        if k == 0:
            parts.append(cs)
        elif k == 1:
            parts.append("%s*%s" % (cs, var))
        else:
            parts.append("%s*%s^%d" % (cs, var, k))
    return " + ".join(parts)


def check_q_symmetry(R):
    """True iff R(q) = R(1/q) as rational functions (exact identity)."""
    if R.var != "q":
        raise VariableMismatchError("q-symmetry check applies to functions of q")
    a = len(R.num) - 1
    b = len(R.den) - 1
    if R.is_zero():
        return True
    rev_num = list(reversed(R.num))
    rev_den = list(reversed(R.den))
    # R(1/q) = q^(b-a) * rev(num) / rev(den)
    if b >= a:
        num = [QI_ZERO] * (b - a) + rev_num
        den = rev_den
    else:
        num = rev_num
        den = [QI_ZERO] * (a - b) + rev_den
    return RationalFunction(num, den, "q") == R


def expand(R, trunc, from_exp=None):
    """Laurent expansion of R at 0, known below ``trunc``.

    For a function of q the result is the s-side representation (even
    s-exponents via q = -s**2, truncation in q-orders); read it back
    through QView.  ``from_exp``, when given, asserts the expected
    lowest exponent; a mismatch raises DataFormatError.
    """
    if R.var == "q":
        return expand(R.to_s(), 2 * trunc, None if from_exp is None else 2 * from_exp)
    var = R.var
    if R.is_zero():
        return HalfSeries.zero(var, trunc)
    v = 0
    den = list(R.den)
    while den and den[0].is_zero():
        den.pop(0)
        v += 1
    num_series = HalfSeries(var, {k: c for k, c in enumerate(R.num)})
    n_val = num_series.valuation()
    actual_from = n_val - v
    if from_exp is not None and actual_from < from_exp:
        raise DataFormatError(
            "expansion starts at %s^%d, below the requested %s^%d"
            % (var, actual_from, var, from_exp)
        )
    den_series = HalfSeries(var, {k: c for k, c in enumerate(den)})
    need = trunc + v - n_val
    if need <= 0:
        return HalfSeries.zero(var, trunc)
    if len(den) == 1:
        inv = den_series.inverse()
    else:
        inv = den_series.inverse(trunc=need)
    return (num_series * inv).shift(-v).truncate(trunc)


def _solve_pade(known, lo, hi, max_num_deg, max_den_deg, var):
    """Shared core of reconstruct/reconstruct_q.

    ``known`` maps exponent -> coefficient for every exponent in
    [lo, hi); absent keys are exact zeros.  Returns a reduced
    RationalFunction or None.
    """
    neg = min(lo, 0)
    navail = hi - max(0, lo)
    if navail < max_num_deg + max_den_deg + 1:
        raise PrecisionError(
            "need at least %d coefficients beyond the pole part to determine or "
            "refute degree-(%d,%d) rationality; only %d are known"
            % (max_num_deg + max_den_deg + 1, max_num_deg, max_den_deg, navail),
            achievable=navail,
        )
    num_exps = list(range(neg, max_num_deg + 1))
    ncols = (max_den_deg + 1) + len(num_exps)
    rows = []
    for e in range(neg, hi):
        row = []
        for j in range(max_den_deg + 1):
            row.append(known.get(e - j, QI_ZERO))
        for k, ne in enumerate(num_exps):
            row.append(-QI_ONE if ne == e else QI_ZERO)
        rows.append(row)
    basis = nullspace(rows, ncols, QI_ZERO, QI_ONE)
    if not basis:
        return None
    vec = basis[0]
    den = poly_trim(list(vec[: max_den_deg + 1]))
    num_laurent = {ne: vec[max_den_deg + 1 + k] for k, ne in enumerate(num_exps)}
    shift = -neg
    num = [QI_ZERO] * (max_num_deg + shift + 1)
    for ne, c in num_laurent.items():
        num[ne + shift] = c
    den_shifted = [QI_ZERO] * shift + den
    result = RationalFunction(num, den_shifted, var)
    # All solutions of the homogeneous system define the same rational
    # function, so the reduced candidate is the only possible answer.
    # Re-check it against every known coefficient: in deficient cases
    # the linear system is solvable although no bounded rational
    # function matches the full window, and the honest answer is None.
    for e in range(neg, hi):
        acc = QI_ZERO
        for j, dj in enumerate(result.den):
            acc = acc + dj * known.get(e - j, QI_ZERO)
        want = result.num[e] if 0 <= e < len(result.num) else QI_ZERO
        if acc != want:
            return None
    return result


def reconstruct(x, max_num_deg, max_den_deg):
    """Recover the rational function in x's own variable behind a series.

    Returns the unique reduced RationalFunction within the degree bounds
    whose expansion matches every known coefficient of ``x``, or None
    when the exact linear system refutes one.  Raises PrecisionError if
    the series is too short to decide either way.
    """
    if x.is_exact:
        hi = (max(x.coeffs) if x.coeffs else 0) + max_den_deg + 1
        hi = max(hi, max_num_deg + max_den_deg + 1)
    else:
        hi = x.trunc
    lo = min(x.min_exp, 0) if x.coeffs else 0
    known = dict(x.coeffs)
    return _solve_pade(known, lo, hi, max_num_deg, max_den_deg, x.var)


def reconstruct_q(x, max_num_deg, max_den_deg):
    """Like reconstruct, but reads an s-side series as a series in q."""
    view = x if isinstance(x, QView) else QView(x)
    if not view.parity_ok:
        raise DataFormatError(
            "series has odd s-exponents and is not a Laurent series in q"
        )
    known = view.q_coeffs()
    if view.trunc_q is None:
        hi = (max(known) if known else 0) + max_den_deg + 1
        hi = max(hi, max_num_deg + max_den_deg + 1)
    else:
        hi = view.trunc_q
    lo = min(known) if known else 0
    lo = min(lo, 0)
    return _solve_pade(known, lo, hi, max_num_deg, max_den_deg, "q")


def ratfun_to_u(R, trunc):
    """Laurent expansion of R(e^{iu/2}) around u = 0.

    Admissible input: any rational function of s (or of q via q=-s**2)
    whose denominator does not vanish identically; zeros of the
    denominator at s = 1 become the u = 0 pole, other roots contribute
    invertible units.  The pole order in u equals the vanishing order of
    the denominator at s = 1.
    """
    Rs = R.to_s() if R.var == "q" else R
    if Rs.var != "s":
        raise VariableMismatchError("ratfun_to_u expects a function of s or q")
    if Rs.is_zero():
        return HalfSeries.zero("u", trunc)
    # margin covers the worst-case vanishing order of den at s=1
    margin = 2 * (len(Rs.den) - 1) + 2
    internal = trunc + margin
    num_u = to_u(HalfSeries("s", {k: c for k, c in enumerate(Rs.num)}), internal)
    den_u = to_u(HalfSeries("s", {k: c for k, c in enumerate(Rs.den)}), internal)
    if den_u.valuation() is None:
        raise PrecisionError(
            "pole structure not resolvable: denominator vanishes at s=1 to order "
            ">= %d, beyond the computed window" % internal,
            achievable=None,
        )
    return (num_u * den_u.inverse()).truncate(trunc)
