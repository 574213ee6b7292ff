"""Finite graded rings, cohomology-weighted partitions and set partitions.

A GradedRing is pure tensor data: a named basis with (complex) degrees
and parities, the Poincare pairing Gram matrix, and the multiplication
structure tensor.  No geometry is computed here; rings are supplied by
the caller and everything downstream only consumes the tensors.

Degrees use the complex grading, so odd (real-degree-one) classes carry
degree 1/2.  The sign rule is supercommutativity: products of two odd
basis elements anticommute, and the supplied tensors are validated
against it.

Elements are sparse dicts {basis index: GaussianRational}.
"""

import itertools
from fractions import Fraction

from .errors import (
    DataFormatError,
    InconsistentDataError,
    SingularSystemError,
)
from .linalg import invert_matrix
from .numeric import QI_ONE, QI_ZERO, GaussianRational

__all__ = [
    "GradedRing",
    "WeightedPartition",
    "SetPartitionSigned",
    "gluing_factor",
    "dual_partition",
    "undual_partition",
    "codim",
    "small_diagonal",
    "enumerate_set_partitions",
    "enumerate_weighted_partitions",
    "point_ring",
    "hyperplane_pair_ring",
    "surface_ring",
    "elliptic_curve_ring",
]


def _coerce(c):
    if isinstance(c, str):
        return GaussianRational.parse(c)
    return GaussianRational.coerce(c)


class GradedRing:
    """Graded basis + pairing + multiplication tensor, validated on load."""

    def __init__(self, basis, deg, parity, pairing, mult):
        f = len(basis)
        if len(set(basis)) != f:
            raise DataFormatError("basis names must be distinct")
        if len(deg) != f or len(parity) != f or len(pairing) != f:
            raise DataFormatError("deg/parity/pairing sizes must match the basis")
        self.basis = list(basis)
        self.deg = [d if isinstance(d, Fraction) else Fraction(d) for d in deg]
        self.parity = [int(p) % 2 for p in parity]
        self.pairing = [[_coerce(c) for c in row] for row in pairing]
        if any(len(row) != f for row in self.pairing):
            raise DataFormatError("pairing matrix must be square")
        # normalize mult[i][j] to a sparse {k: coeff} map
        self.mult = []
        for i in range(f):
            row = []
            for j in range(f):
                entry = mult[i][j]
                if isinstance(entry, dict):
                    items = entry.items()
                else:
                    items = [(k, c) for k, c in entry]
                cell = {}
                for k, c in items:
                    c = _coerce(c)
                    if not c.is_zero():
                        cell[int(k)] = c
                row.append(cell)
            self.mult.append(row)
        self._validate()
        try:
            gt = [[self.pairing[j][i] for j in range(f)] for i in range(f)]
            self._dual = invert_matrix(gt, QI_ZERO, QI_ONE)
        except SingularSystemError as exc:
            raise SingularSystemError(
                "pairing matrix is singular; duals are undefined"
            ) from exc
        gt = [[self.pairing[j][i] for j in range(f)] for i in range(f)]
        self._undual = gt

    def _validate(self):
        f = len(self.basis)
        unit = None
        for i in range(f):
            if all(self.mult[i][j] == {j: QI_ONE} for j in range(f)):
                unit = i
                break
        if unit is None:
            raise InconsistentDataError("ring has no multiplicative unit in its basis")
        self.one_index = unit
        for i in range(f):
            for j in range(f):
                for k, c in self.mult[i][j].items():
                    if self.deg[k] != self.deg[i] + self.deg[j]:
                        raise InconsistentDataError(
                            "multiplication is not graded: %s*%s hits %s"
                            % (self.basis[i], self.basis[j], self.basis[k])
                        )
                    if self.parity[k] != (self.parity[i] + self.parity[j]) % 2:
                        raise InconsistentDataError(
                            "multiplication does not respect parity: %s*%s"
                            % (self.basis[i], self.basis[j])
                        )
                sign = -QI_ONE if self.parity[i] and self.parity[j] else QI_ONE
                flipped = {k: c * sign for k, c in self.mult[j][i].items()}
                if flipped != self.mult[i][j]:
                    raise InconsistentDataError(
                        "multiplication violates the odd anticommutation rule at "
                        "%s,%s" % (self.basis[i], self.basis[j])
                    )

    @property
    def rank(self):
        return len(self.basis)

    def index(self, name):
        try:
            return self.basis.index(name)
        except ValueError:
            raise DataFormatError("no basis element named %r" % name) from None

    def element(self, data):
        """Build a sparse element from {name_or_index: coefficient}."""
        out = {}
        for key, c in data.items():
            i = key if isinstance(key, int) else self.index(key)
            c = _coerce(c)
            if not c.is_zero():
                out[i] = out.get(i, QI_ZERO) + c
        return {i: c for i, c in out.items() if not c.is_zero()}

    def basis_element(self, i):
        return {i: QI_ONE}

    def one(self):
        return {self.one_index: QI_ONE}

    def mul_elements(self, a, b):
        """Product of two sparse elements (signs live in the tensor)."""
        out = {}
        for i, ca in a.items():
            for j, cb in b.items():
                cc = ca * cb
                for k, m in self.mult[i][j].items():
                    v = out.get(k, QI_ZERO) + cc * m
                    out[k] = v
        return {k: v for k, v in out.items() if not v.is_zero()}

    def pair(self, a, b):
        acc = QI_ZERO
        for i, ca in a.items():
            for j, cb in b.items():
                acc = acc + ca * cb * self.pairing[i][j]
        return acc

    def dual_of_basis(self, i):
        """Expansion of the i-th dual element in the plain basis."""
        return {j: c for j, c in enumerate(self._dual[i]) if not c.is_zero()}

    def element_parity(self, a):
        parities = {self.parity[i] for i in a}
        if len(parities) > 1:
            raise InconsistentDataError("element is not parity-homogeneous")
        return parities.pop() if parities else 0

    def element_degree(self, a):
        degs = {self.deg[i] for i in a}
        if len(degs) > 1:
            raise InconsistentDataError("element is not degree-homogeneous")
        return degs.pop() if degs else Fraction(0)


class WeightedPartition:
    """A partition with parts weighted by ring basis elements.

    Parts are stored canonically (size descending, then weight index
    ascending) so structural equality is canonical equality.
    """

    __slots__ = ("parts",)

    def __init__(self, parts):
        norm = tuple(sorted(((int(s), int(w)) for s, w in parts), key=lambda p: (-p[0], p[1])))
        for s, _ in norm:
            if s < 1:
                raise DataFormatError("partition parts must be positive")
        object.__setattr__(self, "parts", norm)

    def __setattr__(self, name, value):
        raise AttributeError("WeightedPartition is immutable")

    @property
    def size(self):
        return sum(s for s, _ in self.parts)

    @property
    def length(self):
        return len(self.parts)

    def aut_order(self):
        """Order of the symmetry group permuting identical (size, weight) parts."""
        order = 1
        for _, group in itertools.groupby(self.parts):
            m = len(list(group))
            for k in range(2, m + 1):
                order *= k
        return order

    def weight_degree(self, ring):
        return sum((ring.deg[w] for _, w in self.parts), Fraction(0))

    def to_string(self, ring=None):
        if not self.parts:
            return "-"
        if ring is None:
            return ",".join("%d[%d]" % (s, w) for s, w in self.parts)
        return ",".join("%d[%s]" % (s, ring.basis[w]) for s, w in self.parts)

    @staticmethod
    def parse(text, ring):
        text = text.strip()
        if text in ("", "-"):
            return WeightedPartition(())
        parts = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk.endswith("]") or "[" not in chunk:
                raise DataFormatError("bad weighted-partition part %r" % chunk)
            size, name = chunk[:-1].split("[", 1)
            try:
                s = int(size)
            except ValueError:
                raise DataFormatError("bad part size in %r" % chunk) from None
            parts.append((s, ring.index(name)))
        return WeightedPartition(parts)

    def __eq__(self, other):
        if not isinstance(other, WeightedPartition):
            return NotImplemented
        return self.parts == other.parts

    def __lt__(self, other):
        return self.parts < other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "WeightedPartition(%r)" % (self.parts,)


def gluing_factor(mu):
    """The normalization (product of the parts) * |Aut(mu)|."""
    z = mu.aut_order()
    for s, _ in mu.parts:
        z *= s
    return z


def codim(mu, ring):
    """|mu| - l(mu) + total complex degree of the weights."""
    d = mu.size - mu.length + mu.weight_degree(ring)
    return int(d) if d.denominator == 1 else d


def _expand_partwise(mu, matrix_rows):
    """Replace each part's weight by a linear combination given by rows."""
    combos = [(QI_ONE, [])]
    for s, w in mu.parts:
        row = matrix_rows[w]
        new = []
        for coeff, parts in combos:
            for j, c in enumerate(row):
                if isinstance(c, GaussianRational):
                    cj = c
                else:
                    cj = GaussianRational.coerce(c)
                if cj.is_zero():
                    continue
                new.append((coeff * cj, parts + [(s, j)]))
        combos = new
    out = {}
    for coeff, parts in combos:
        wp = WeightedPartition(parts)
        out[wp] = out.get(wp, QI_ZERO) + coeff
    return [(c, wp) for wp, c in sorted(out.items(), key=lambda kv: kv[0].parts) if not c.is_zero()]


def dual_partition(mu, ring):
    """mu with every weight replaced by its dual-basis expansion.

    Returns a list of (coefficient, WeightedPartition); a single pair
    with coefficient 1 when the basis is self-dual on the nose.
    """
    return _expand_partwise(mu, ring._dual)


def undual_partition(mu, ring):
    """Inverse of dual_partition: expand each weight in the dual basis."""
    return _expand_partwise(mu, ring._undual)


def small_diagonal(gamma, l, ring, comult_rows=None):
    """Kunneth tensor of gamma times the small diagonal in the l-fold product.

    Built from the two-factor decomposition sum_i (-1)^{p_i} phi_i (x)
    phi_i^dual by iterated comultiplication on the first slot, then
    multiplying gamma into the first factor.  The (-1)^{p_i} Koszul sign
    makes the insertion of a class into either slot agree, which is what
    coassociativity needs on rings with odd classes.  Returns {tuple of
    basis indices: coefficient}.  ``comult_rows`` optionally overrides
    the dual-basis rows (hook for a caller-supplied relative diagonal).
    """
    if l < 1:
        raise DataFormatError("tensor length must be >= 1")
    dual_rows = comult_rows if comult_rows is not None else ring._dual
    tensor = {}
    for i, c in gamma.items():
        if not c.is_zero():
            tensor[(i,)] = tensor.get((i,), QI_ZERO) + c
    for _ in range(l - 1):
        new = {}
        for tup, c in tensor.items():
            x = tup[0]
            px = ring.parity[x]
            for i in range(ring.rank):
                # (-1)^{p_i (1 + p_x)}: expand x via x*phi_i = +-phi_i*x
                sign = -QI_ONE if (ring.parity[i] and not px) else QI_ONE
                prod = ring.mult[i][x]
                if not prod:
                    continue
                for k, mc in prod.items():
                    base = c * mc * sign
                    for j, dj in enumerate(dual_rows[i]):
                        dj = GaussianRational.coerce(dj) if not isinstance(dj, GaussianRational) else dj
                        if dj.is_zero():
                            continue
                        key = (k, j) + tup[1:]
                        v = new.get(key, QI_ZERO) + base * dj
                        new[key] = v
        tensor = {k: v for k, v in new.items() if not v.is_zero()}
    return tensor


class SetPartitionSigned:
    """A set partition of {1..l} with the odd-class reordering sign.

    Blocks are kept with elements ascending and blocks ordered by their
    minimal element; the sign is read off the permutation obtained by
    concatenating the blocks in that order, counting inversions between
    positions whose classes are odd.  Any other fixed convention would
    differ coherently, so only determinism matters.
    """

    __slots__ = ("blocks", "sign")

    def __init__(self, blocks, parities=None):
        norm = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        object.__setattr__(self, "blocks", norm)
        concat = [i for b in norm for i in b]
        sign = 1
        if parities is not None:
            odd_seq = [i for i in concat if parities[i]]
            inv = 0
            for a in range(len(odd_seq)):
                for b in range(a + 1, len(odd_seq)):
                    if odd_seq[a] > odd_seq[b]:
                        inv += 1
            sign = -1 if inv % 2 else 1
        object.__setattr__(self, "sign", sign)

    def __setattr__(self, name, value):
        raise AttributeError("SetPartitionSigned is immutable")

    def __eq__(self, other):
        if not isinstance(other, SetPartitionSigned):
            return NotImplemented
        return self.blocks == other.blocks and self.sign == other.sign

    def __hash__(self):
        return hash((self.blocks, self.sign))

    def __repr__(self):
        return "SetPartitionSigned(%r, sign=%+d)" % (self.blocks, self.sign)


def _raw_set_partitions(n):
    if n == 0:
        yield []
        return
    for rest in _raw_set_partitions(n - 1):
        yield rest + [[n - 1]]
        for k in range(len(rest)):
            yield rest[:k] + [rest[k] + [n - 1]] + rest[k + 1 :]


def enumerate_set_partitions(l, parities=None):
    """All set partitions of {0..l-1} with signs from the odd positions."""
    if l < 1:
        raise DataFormatError("need at least one element to partition")
    return [SetPartitionSigned(blocks, parities) for blocks in _raw_set_partitions(l)]


def _integer_partitions(d, maximum=None):
    if d == 0:
        yield ()
        return
    if maximum is None:
        maximum = d
    for first in range(min(d, maximum), 0, -1):
        for rest in _integer_partitions(d - first, first):
            yield (first,) + rest


def enumerate_weighted_partitions(d, ring, theta=None):
    """All weighted partitions of size d, optionally filtered by codimension."""
    if d < 0:
        raise DataFormatError("partition size must be >= 0")
    out = []
    for shape in _integer_partitions(d):
        groups = [(s, len(list(g))) for s, g in itertools.groupby(shape)]
        choices = [
            list(itertools.combinations_with_replacement(range(ring.rank), m))
            for _, m in groups
        ]
        for pick in itertools.product(*choices):
            parts = []
            for (s, _), weights in zip(groups, pick):
                parts.extend((s, w) for w in weights)
            wp = WeightedPartition(parts)
            if theta is None or codim(wp, ring) == theta:
                out.append(wp)
    return sorted(out, key=lambda w: w.parts)


# -- small stock rings used by tests and demos ---------------------------


def point_ring():
    """H* of a point: a single even unit class."""
    return GradedRing(["one"], [0], [0], [[1]], [[{0: 1}]])


def hyperplane_pair_ring():
    """Rank-2 ring {1, p} with <1,p> = 1 (a curve-fiber style divisor)."""
    return GradedRing(
        ["one", "p"],
        [0, 1],
        [0, 0],
        [[0, 1], [1, 0]],
        [
            [{0: 1}, {1: 1}],
            [{1: 1}, {}],
        ],
    )


def surface_ring():
    """Rank-3 ring {1, h, p} with h*h = p (plane-like surface)."""
    return GradedRing(
        ["one", "h", "p"],
        [0, 1, 2],
        [0, 0, 0],
        [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
        [
            [{0: 1}, {1: 1}, {2: 1}],
            [{1: 1}, {2: 1}, {}],
            [{2: 1}, {}, {}],
        ],
    )


def elliptic_curve_ring():
    """Rank-4 ring {1, a, b, p} with odd a, b and a*b = p = -b*a."""
    one = {0: 1}
    return GradedRing(
        ["one", "a", "b", "p"],
        [0, Fraction(1, 2), Fraction(1, 2), 1],
        [0, 1, 1, 0],
        [
            [0, 0, 0, 1],
            [0, 0, 1, 0],
            [0, -1, 0, 0],
            [1, 0, 0, 0],
        ],
        [
            [dict(one), {1: 1}, {2: 1}, {3: 1}],
            [{1: 1}, {}, {3: 1}, {}],
            [{2: 1}, {3: -1}, {}, {}],
            [{3: 1}, {}, {}, {}],
        ],
    )
