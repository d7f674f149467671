"""Exact arithmetic in the value group Q + Q*lambda.

lambda is a fixed quadratic irrational with lambda^2 = D for a configurable
positive non-square rational D (default 2).  A value a + b*lambda is stored
as a pair of reduced fractions; comparisons are decided by exact rational
sign analysis (squaring with sign bookkeeping), never by floating point.

The module also provides finitely generated subgroups of the value group
with exact membership certificates, quotient indices computed from integer
lattice bases, rational rank, and lexicographic compositions of values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotASubgroup, UnsupportedRank

DEFAULT_D = Fraction(2)

LESS, EQUAL, GREATER = -1, 0, 1


def _is_square(q: Fraction) -> bool:
    if q < 0:
        return False
    return (math.isqrt(q.numerator) ** 2 == q.numerator
            and math.isqrt(q.denominator) ** 2 == q.denominator)


def check_irrationality_constant(d) -> Fraction:
    """Validate and return D.  D must be positive and not a rational square."""
    d = Fraction(d)
    if d <= 0 or _is_square(d):
        raise ValueError(f"D must be a positive non-square rational, got {d}")
    return d


@dataclass(frozen=True, order=False)
class Value:
    """An element a + b*lambda of the ordered abelian group Q + Q*lambda."""

    a: Fraction
    b: Fraction
    d: Fraction = DEFAULT_D

    @staticmethod
    def of(a, b=0, d=DEFAULT_D) -> "Value":
        return Value(Fraction(a), Fraction(b), Fraction(d))

    @staticmethod
    def zero(d=DEFAULT_D) -> "Value":
        return Value(Fraction(0), Fraction(0), Fraction(d))

    def _check(self, other: "Value"):
        if self.d != other.d:
            raise ValueError("values live over different irrationality constants")

    def __add__(self, other: "Value") -> "Value":
        self._check(other)
        return Value(self.a + other.a, self.b + other.b, self.d)

    def __sub__(self, other: "Value") -> "Value":
        self._check(other)
        return Value(self.a - other.a, self.b - other.b, self.d)

    def __neg__(self) -> "Value":
        return Value(-self.a, -self.b, self.d)

    def scaled(self, k) -> "Value":
        k = Fraction(k)
        return Value(self.a * k, self.b * k, self.d)

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(D)."""
        sa = (self.a > 0) - (self.a < 0)
        if self.b == 0:
            return sa
        sb = (self.b > 0) - (self.b < 0)
        if self.a == 0:
            return sb
        if sa == sb:
            return sa
        # Opposite strict signs: the sign is decided by a^2 versus b^2 * D.
        t = self.a * self.a - self.b * self.b * self.d
        if t == 0:
            raise ArithmeticError("irrationality constant is a square")
        return sa if t > 0 else sb

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_str(self) -> str:
        return f"({self.a}, {self.b})"

    @staticmethod
    def from_str(text: str, d=DEFAULT_D) -> "Value":
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"malformed value literal {text!r}")
        parts = body[1:-1].split(",")
        if len(parts) != 2:
            raise ValueError(f"malformed value literal {text!r}")
        return Value(Fraction(parts[0].strip()), Fraction(parts[1].strip()), Fraction(d))

    def __repr__(self):
        return f"Value({self.a}, {self.b})"


def compare(v1: Value, v2: Value) -> int:
    """Exact order comparison; returns LESS, EQUAL or GREATER."""
    return (v1 - v2).sign()


@dataclass(frozen=True)
class SubgroupSpec:
    """A finitely generated subgroup of Q + Q*lambda, given by generators."""

    generators: tuple

    @staticmethod
    def of(*gens) -> "SubgroupSpec":
        return SubgroupSpec(tuple(gens))

    def to_json(self):
        return [g.to_str() for g in self.generators]

    @staticmethod
    def from_json(data, d=DEFAULT_D) -> "SubgroupSpec":
        return SubgroupSpec(tuple(Value.from_str(s, d) for s in data))


def _ext_gcd(a: int, b: int):
    """Return (g, s, t) with g = gcd(a, b) = s*a + t*b and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _common_scale(values) -> int:
    m = 1
    for v in values:
        m = math.lcm(m, v.a.denominator, v.b.denominator)
    return m


def _int_cols(gens, scale):
    return [[int(g.a * scale), int(g.b * scale)] for g in gens]


def _reduce_row(cols, trans, row, active):
    """Unimodular column ops zeroing `row` in all active columns but one.

    Mutates cols/trans in place and returns the pivot index (or None if the
    row is zero on the active set).
    """
    pivot = None
    for i in active:
        if cols[i][row] == 0:
            continue
        if pivot is None:
            pivot = i
            continue
        a, b = cols[pivot], cols[i]
        g, s, t = _ext_gcd(a[row], b[row])
        u, w = a[row] // g, b[row] // g
        new_p = [s * a[0] + t * b[0], s * a[1] + t * b[1]]
        new_i = [u * b[0] - w * a[0], u * b[1] - w * a[1]]
        cols[pivot], cols[i] = new_p, new_i
        tp, ti = trans[pivot], trans[i]
        trans[pivot] = [s * x + t * y for x, y in zip(tp, ti)]
        trans[i] = [u * y - w * x for x, y in zip(tp, ti)]
    return pivot


def _reduced_form(gens, scale):
    """Return (cols, trans, pivot0, pivot1) of the scaled generator lattice."""
    cols = _int_cols(gens, scale)
    n = len(cols)
    trans = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivot0 = _reduce_row(cols, trans, 0, list(range(n)))
    rest = [i for i in range(n) if i != pivot0]
    pivot1 = _reduce_row(cols, trans, 1, rest)
    return cols, trans, pivot0, pivot1


def subgroup_membership(v: Value, group: SubgroupSpec):
    """Integer coefficients expressing v over the generators, or None.

    A returned list ns satisfies sum(ns[i] * generators[i]) == v exactly.
    """
    gens = group.generators
    if not gens:
        return [] if v.is_zero() else None
    scale = _common_scale(list(gens) + [v])
    cols, trans, pivot0, pivot1 = _reduced_form(gens, scale)
    tx, ty = int(v.a * scale), int(v.b * scale)
    acc = [0] * len(gens)

    if pivot0 is not None:
        d0, y0 = cols[pivot0]
        if tx % d0:
            return None
        k = tx // d0
        ty -= k * y0
        tx = 0
        acc = [x + k * c for x, c in zip(acc, trans[pivot0])]
    elif tx != 0:
        return None

    if pivot1 is not None:
        d1 = cols[pivot1][1]
        if ty % d1:
            return None
        k1 = ty // d1
        acc = [x + k1 * c for x, c in zip(acc, trans[pivot1])]
        ty = 0
    if ty != 0:
        return None
    return acc


def rational_rank(group: SubgroupSpec) -> int:
    """Rational rank of the generated subgroup: 0, 1 or 2."""
    first = None
    for g in group.generators:
        if g.is_zero():
            continue
        if first is None:
            first = g
            continue
        if first.a * g.b - first.b * g.a != 0:
            return 2
    return 0 if first is None else 1


def quotient_index(big: SubgroupSpec, small: SubgroupSpec):
    """Index (big : small); a positive integer, or math.inf when infinite.

    Raises NotASubgroup unless every generator of `small` lies in `big`.
    """
    for g in small.generators:
        if subgroup_membership(g, big) is None:
            raise NotASubgroup(f"{g} is not a member of the larger group")
    r_big, r_small = rational_rank(big), rational_rank(small)
    if r_small < r_big:
        return math.inf
    if r_big == 0:
        return 1
    scale = _common_scale(list(big.generators) + list(small.generators))
    basis_big = _basis_cols(big, scale)
    basis_small = _basis_cols(small, scale)
    if r_big == 2:
        det_big = basis_big[0][0] * basis_big[1][1]
        det_small = basis_small[0][0] * basis_small[1][1]
        if det_small % det_big:
            raise UnsupportedRank("lattice determinants do not divide")
        return abs(det_small // det_big)
    # rank 1: small's basis vector is an integer multiple of big's
    vb, vs = basis_big[0], basis_small[0]
    coord = 0 if vb[0] else 1
    if vs[coord] % vb[coord]:
        raise NotASubgroup("rank-1 lattices are not nested")
    return abs(vs[coord] // vb[coord])


def _basis_cols(group: SubgroupSpec, scale):
    """Nonzero lattice basis columns of the scaled generator lattice."""
    cols, _, pivot0, pivot1 = _reduced_form(group.generators, scale)
    out = []
    if pivot0 is not None:
        out.append(cols[pivot0])
    if pivot1 is not None:
        out.append(cols[pivot1])
    return out


@dataclass(frozen=True)
class LexValue:
    """Lexicographic composition of values, highest component first."""

    components: tuple

    @staticmethod
    def of(*vals) -> "LexValue":
        return LexValue(tuple(vals))

    def compare(self, other: "LexValue") -> int:
        if len(self.components) != len(other.components):
            raise ValueError("lexicographic values of different length")
        for x, y in zip(self.components, other.components):
            c = compare(x, y)
            if c != 0:
                return c
        return 0

    def project(self, k: int) -> "LexValue":
        """Drop to the first k components (coarsening of the composition)."""
        return LexValue(self.components[:k])

    def __add__(self, other):
        return LexValue(tuple(x + y for x, y in zip(self.components, other.components)))

    def __neg__(self):
        return LexValue(tuple(-x for x in self.components))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0
