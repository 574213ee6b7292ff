"""Exact arithmetic over the Gaussian rationals Q[i].

Implementation notes: a value is a pair of `fractions.Fraction`
components, so both components are kept in lowest terms with positive
denominator at all times and equality is structural.  There is no
floating point anywhere: the integrality and symmetry statements
checked elsewhere in this package are exact, and a single rounded
coefficient would make every certificate worthless.

The textual form is ``a/b+c/d*i`` with either term optional, e.g.
``3``, ``-1/2``, ``i``, ``-i``, ``2*i``, ``1/2-2/3*i``.  Integers are
accepted as degenerate rationals.
"""

from fractions import Fraction

from .errors import DataFormatError

__all__ = ["GaussianRational", "QI_ZERO", "QI_ONE", "QI_I", "qi"]


class GaussianRational:
    """An element of Q[i], immutable and hashable.

    ``GaussianRational(re, im)`` accepts ints, Fractions or anything
    `Fraction` accepts (floats are rejected to keep exactness).
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, float) or isinstance(im, float):
            raise DataFormatError("floating point is not allowed in exact arithmetic")
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- conversions ---------------------------------------------------

    @staticmethod
    def coerce(value):
        """Coerce an int, Fraction or GaussianRational to GaussianRational."""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        raise DataFormatError("cannot coerce %r to a Gaussian rational" % (value,))

    @staticmethod
    def parse(text):
        """Parse the textual form ``a/b+c/d*i``.

        >>> GaussianRational.parse("1/2-2/3*i")
        GaussianRational(Fraction(1, 2), Fraction(-2, 3))
        """
        s = text.replace(" ", "")
        if not s:
            raise DataFormatError("empty Gaussian rational literal")
        # split into signed terms; a sign right after '/' or at the start
        # belongs to the number itself
        terms = []
        start = 0
        for k in range(1, len(s)):
            if s[k] in "+-" and s[k - 1] not in "+-/*":
                terms.append(s[start:k])
                start = k
        terms.append(s[start:])
        re = Fraction(0)
        im = Fraction(0)
        seen_re = seen_im = False
        for term in terms:
            try:
                if term.endswith("i"):
                    if seen_im:
                        raise DataFormatError("duplicate imaginary term in %r" % text)
                    seen_im = True
                    body = term[:-1]
                    if body.endswith("*"):
                        body = body[:-1]
                    if body in ("", "+"):
                        im += 1
                    elif body == "-":
                        im -= 1
                    else:
                        im += Fraction(body)
                else:
                    if seen_re:
                        raise DataFormatError("duplicate real term in %r" % text)
                    seen_re = True
                    re += Fraction(term)
            except (ValueError, ZeroDivisionError) as exc:
                raise DataFormatError("bad Gaussian rational literal %r" % text) from exc
        return GaussianRational(re, im)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        result = QI_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # -- predicates and hashing ----------------------------------------

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def is_rational(self):
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- formatting ----------------------------------------------------

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return "%s%s%s" % (self.re, sign, _imag_str(abs(self.im)))

    def __repr__(self):
        return "GaussianRational(%r, %r)" % (self.re, self.im)


def _imag_str(im):
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return "%s*i" % im


QI_ZERO = GaussianRational(0)
QI_ONE = GaussianRational(1)
QI_I = GaussianRational(0, 1)


def qi(re=0, im=0):
    """Shorthand constructor, also accepts the textual form."""
    if isinstance(re, str):
        return GaussianRational.parse(re)
    return GaussianRational(re, im)
