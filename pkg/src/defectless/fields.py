"""Finite fields F_q (q = p^r) and polynomial / rational function arithmetic.

Field elements are integer codes in [0, q): the base-p digits of the code are
the coefficients of the representative polynomial in the generator, lowest
degree first.  For r = 1 the code is simply the residue mod p.  Keeping
elements as plain ints makes serialization and dict keys painless; all
structure lives on the GaloisField object.
"""

from __future__ import annotations

from dataclasses import dataclass

# Fixed irreducible moduli, coefficients ascending, leading coefficient last.
# (3, 2) uses T^2 + 1 so that the generator g satisfies g^2 = -1.
_IRREDUCIBLE = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (1, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}


class GaloisField:
    """Arithmetic in F_q for q = p^r with a fixed irreducible modulus."""

    def __init__(self, p: int, r: int = 1, modulus=None):
        if p < 2 or any(p % k == 0 for k in range(2, p)):
            raise ValueError(f"p must be prime, got {p}")
        if r < 1:
            raise ValueError("r must be positive")
        self.p = p
        self.r = r
        self.q = p ** r
        if r == 1:
            self.modulus = (0, 1)
        elif modulus is not None:
            self.modulus = tuple(c % p for c in modulus)
            if len(self.modulus) != r + 1 or self.modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree r")
            if not self._is_irreducible(self.modulus):
                raise ValueError("modulus is not irreducible")
        else:
            got = _IRREDUCIBLE.get((p, r))
            if got is None:
                got = self._search_irreducible()
            self.modulus = got

    # -- encoding ------------------------------------------------------

    def _decode(self, code: int):
        out = []
        for _ in range(self.r):
            out.append(code % self.p)
            code //= self.p
        return out

    def _encode(self, coeffs) -> int:
        code = 0
        for c in reversed(list(coeffs[:self.r])):
            code = code * self.p + (c % self.p)
        return code

    def check(self, code: int) -> int:
        if not isinstance(code, int) or not 0 <= code < self.q:
            raise ValueError(f"{code!r} is not an element code of F_{self.q}")
        return code

    # -- arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        ca, cb = self._decode(a), self._decode(b)
        return self._encode([(x + y) % self.p for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        return self._encode([(-x) % self.p for x in self._decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a * b) % self.p
        ca, cb = self._decode(a), self._decode(b)
        prod = [0] * (2 * self.r - 1)
        for i, x in enumerate(ca):
            if x == 0:
                continue
            for j, y in enumerate(cb):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        return self._encode(self._reduce(prod))

    def _reduce(self, coeffs):
        coeffs = list(coeffs)
        m = self.modulus
        for i in range(len(coeffs) - 1, self.r - 1, -1):
            c = coeffs[i]
            if c:
                coeffs[i] = 0
                for j in range(self.r):
                    coeffs[i - self.r + j] = (coeffs[i - self.r + j] - c * m[j]) % self.p
        return coeffs[:self.r]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        out, base = 1, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def pth_root(self, a: int) -> int:
        """Inverse of Frobenius: the unique b with b^p = a."""
        return self.pow(a, self.p ** (self.r - 1))

    def from_int(self, n: int) -> int:
        return n % self.p

    @property
    def generator(self) -> int:
        """The class of the modulus variable; only interesting for r > 1."""
        return self.p if self.r > 1 else 1

    def elements(self):
        return range(self.q)

    def in_artin_schreier_image(self, a: int) -> bool:
        """Whether a = c^p - c for some c in F_q."""
        return any(self.sub(self.pow(c, self.p), c) == a for c in self.elements())

    # -- irreducibility ------------------------------------------------

    def _poly_mod_small(self, num, den):
        # polynomial remainder over F_p, coefficients ascending
        num = list(num)
        p = self.p
        dd = len(den) - 1
        inv_lead = pow(den[-1], -1, p)
        while len(num) - 1 >= dd and any(num):
            while num and num[-1] == 0:
                num.pop()
            if len(num) - 1 < dd:
                break
            q = (num[-1] * inv_lead) % p
            shift = len(num) - 1 - dd
            for j, c in enumerate(den):
                num[shift + j] = (num[shift + j] - q * c) % p
        while num and num[-1] == 0:
            num.pop()
        return num

    def _is_irreducible(self, mod) -> bool:
        deg = len(mod) - 1
        if deg == 1:
            return True
        for d in range(1, deg // 2 + 1):
            for other in self._monic_fp_polys(d):
                if not self._poly_mod_small(mod, other):
                    return False
        return True

    def _monic_fp_polys(self, d):
        p = self.p
        for code in range(p ** d):
            coeffs = []
            c = code
            for _ in range(d):
                coeffs.append(c % p)
                c //= p
            yield tuple(coeffs) + (1,)

    def _search_irreducible(self):
        for mod in self._monic_fp_polys(self.r):
            if self._is_irreducible(mod):
                return mod
        raise RuntimeError("no irreducible polynomial found")

    def __eq__(self, other):
        return (isinstance(other, GaloisField)
                and (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus))

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial over a GaloisField, coefficients ascending."""

    field: GaloisField
    coeffs: tuple

    @staticmethod
    def make(field, coeffs) -> "Poly":
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(field, tuple(cs))

    @staticmethod
    def zero(field) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def one(field) -> "Poly":
        return Poly(field, (1,))

    @staticmethod
    def monomial(field, coeff, exp) -> "Poly":
        if coeff == 0:
            return Poly.zero(field)
        return Poly(field, (0,) * exp + (coeff,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def ord(self) -> int:
        """Index of the lowest nonzero coefficient."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("ord of zero polynomial")

    def __add__(self, other: "Poly") -> "Poly":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Poly.make(f, [f.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "Poly":
        f = self.field
        return Poly(f, tuple(f.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        f = self.field
        if self.is_zero() or other.is_zero():
            return Poly.zero(f)
        prod = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(other.coeffs):
                if y:
                    prod[i + j] = f.add(prod[i + j], f.mul(x, y))
        return Poly.make(f, prod)

    def scale(self, c) -> "Poly":
        f = self.field
        if c == 0:
            return Poly.zero(f)
        return Poly(f, tuple(f.mul(c, x) for x in self.coeffs))

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dd = other.degree
        inv_lead = f.inv(other.coeffs[-1])
        quot = [0] * max(0, len(rem) - dd)
        while len(rem) - 1 >= dd and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < dd:
                break
            q = f.mul(rem[-1], inv_lead)
            shift = len(rem) - 1 - dd
            quot[shift] = q
            for j, c in enumerate(other.coeffs):
                rem[shift + j] = f.sub(rem[shift + j], f.mul(q, c))
        return Poly.make(f, quot), Poly.make(f, rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.scale(self.field.inv(a.coeffs[-1]))

    def derivative(self) -> "Poly":
        f = self.field
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            out.append(f.mul(f.from_int(i), c))
        return Poly.make(f, out)

    def pow(self, n: int) -> "Poly":
        out, base = Poly.one(self.field), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def map_coeffs(self, fn) -> "Poly":
        return Poly.make(self.field, [fn(c) for c in self.coeffs])

    def stretch(self, m: int) -> "Poly":
        """Substitute the variable by its m-th power."""
        out = [0] * (m * self.degree + 1) if not self.is_zero() else []
        for i, c in enumerate(self.coeffs):
            if c:
                out[m * i] = c
        return Poly.make(self.field, out)

    def contract(self, m: int) -> "Poly":
        """Inverse of stretch; all nonzero exponents must be divisible by m."""
        out = []
        for i, c in enumerate(self.coeffs):
            if c and i % m:
                raise ValueError("exponent not divisible in contract")
            if i % m == 0:
                out.append(c)
        return Poly.make(self.field, out)

    def eval(self, x):
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def exponents_divisible_by(self, m: int) -> bool:
        return all(c == 0 or i % m == 0 for i, c in enumerate(self.coeffs))

    def to_json(self):
        return list(self.coeffs)

    @staticmethod
    def from_json(field, data) -> "Poly":
        return Poly.make(field, [int(c) for c in data])


@dataclass(frozen=True)
class RatFunc:
    """Reduced rational function num/den over F_q; den is monic."""

    num: Poly
    den: Poly

    @staticmethod
    def make(num: Poly, den: Poly) -> "RatFunc":
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            return RatFunc(num, Poly.one(num.field))
        g = num.gcd(den)
        if g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = den.coeffs[-1]
        if lead != 1:
            inv = den.field.inv(lead)
            num = num.scale(inv)
            den = den.scale(inv)
        return RatFunc(num, den)

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p, Poly.one(p.field))

    @property
    def field(self):
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        return RatFunc.make(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc.make(self.num * other.num, self.den * other.den)

    def inv(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc.make(self.den, self.num)

    def derivative(self) -> "RatFunc":
        return RatFunc.make(self.num.derivative() * self.den
                            - self.num * self.den.derivative(),
                            self.den * self.den)

    def ord_at_zero(self) -> int:
        """Order of vanishing at the origin (negative for a pole)."""
        return self.num.ord() - self.den.ord()

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(field, data) -> "RatFunc":
        return RatFunc.make(Poly.from_json(field, data["num"]),
                            Poly.from_json(field, data["den"]))


def monic_polys(field: GaloisField, degree: int):
    """All monic polynomials of the exact degree over the field."""
    q = field.q
    for code in range(q ** degree):
        coeffs = []
        c = code
        for _ in range(degree):
            coeffs.append(c % q)
            c //= q
        yield Poly.make(field, coeffs + [1])


def is_irreducible(poly: Poly) -> bool:
    """Trial-division irreducibility test, adequate at small degrees."""
    d = poly.degree
    if d <= 0:
        return False
    if d == 1:
        return True
    for e in range(1, d // 2 + 1):
        for cand in monic_polys(poly.field, e):
            if (poly % cand).is_zero():
                return False
    return True


def factor_monic(poly: Poly):
    """Factor a nonzero polynomial into monic irreducibles by trial division.

    Returns (unit, [(irreducible, multiplicity), ...]).
    """
    f = poly.field
    if poly.is_zero():
        raise ValueError("cannot factor zero")
    unit = poly.coeffs[-1]
    work = poly.scale(f.inv(unit))
    out = []
    degree = 1
    while work.degree > 0:
        found = False
        for cand in monic_polys(f, degree):
            if not is_irreducible(cand):
                continue
            mult = 0
            while True:
                q, r = work.divmod(cand)
                if r.is_zero():
                    work = q
                    mult += 1
                else:
                    break
            if mult:
                out.append((cand, mult))
                found = True
                if work.degree < 2 * degree:
                    break
        if not found:
            degree += 1
            if degree > poly.degree:
                break
    return unit, out


def artin_schreier_preimage(field: GaloisField, a: int):
    """Some e with e^p - e = a, or None when a is outside the image."""
    for e in range(field.q):
        if field.sub(field.frobenius(e), a) == e:
            return e
    return None


def weier_reduce(poly: Poly):
    """Split poly = (g^p - g) + rem with rem supported off p-divisible
    positive degrees and a constant term outside the prime-field image.

    rem is zero exactly when poly is a Weierstrass image over the
    coefficient field; the cosets of the transcendental residue field are
    detected by this reduction because a rational g with polynomial
    g^p - g is itself a polynomial.
    """
    f = poly.field
    p = f.p
    g = Poly.zero(f)
    work = poly
    while True:
        target = None
        for d in range(work.degree, 0, -1):
            if d % p == 0 and work.coeffs[d] != 0:
                target = d
                break
        if target is None:
            break
        e = Poly.monomial(f, f.pth_root(work.coeffs[target]), target // p)
        g = g + e
        work = work - (e.pow(p) - e)
    if work.coeffs and work.coeffs[0]:
        e0 = artin_schreier_preimage(f, work.coeffs[0])
        if e0 is not None:
            g = g + Poly.make(f, [e0])
            work = work - Poly.make(f, [f.sub(f.frobenius(e0), e0)])
    return g, work


def poly_pth_root(poly: Poly):
    """The exact p-th root of a polynomial, or None.

    Over a perfect coefficient field a polynomial is a p-th power exactly
    when every exponent is divisible by p.
    """
    if poly.is_zero():
        return Poly.zero(poly.field)
    f = poly.field
    if not poly.exponents_divisible_by(f.p):
        return None
    return poly.contract(f.p).map_coeffs(f.pth_root)


def ratfunc_pth_root(rf: RatFunc):
    """The exact p-th root of a reduced rational function, or None."""
    rn = poly_pth_root(rf.num)
    rd = poly_pth_root(rf.den)
    if rn is None or rd is None:
        return None
    return RatFunc.make(rn, rd)


def weier_reduce_laurent(sl: dict, field: GaloisField):
    """Weierstrass reduction of a residue slice, exponent -> code.

    Subtracting code^p at exponent p*e minus code at exponent e moves
    weight from any p-divisible exponent toward zero, on both sides of
    the constant term.  Returns (g, rem) with the shift slice g and the
    canonical remainder: no nonzero code at a p-divisible exponent other
    than 0, and a constant outside the prime-subfield image.  rem empty
    means sl is a Weierstrass image in the residue function field.
    """
    p = field.p
    g = {}
    work = {i: c for i, c in sl.items() if c}
    while True:
        target = None
        for i in work:
            if i != 0 and i % p == 0:
                target = i
                break
        if target is None:
            break
        root = field.pth_root(work.pop(target))
        j = target // p
        g[j] = field.add(g.get(j, 0), root)
        carried = field.add(work.get(j, 0), root)
        if carried:
            work[j] = carried
        else:
            work.pop(j, None)
    const = work.get(0, 0)
    if const:
        e0 = artin_schreier_preimage(field, const)
        if e0 is not None:
            g[0] = field.add(g.get(0, 0), e0)
            del work[0]
    return g, work


def slice_is_pth_power(sl: dict, field: GaloisField):
    """The p-th root slice of a residue slice, or None.

    A Laurent residue slice is a p-th power in the residue function
    field exactly when every exponent is divisible by p; the codes root
    freely because the coefficient field is perfect.
    """
    if any(i % field.p for i in sl):
        return None
    return {i // field.p: field.pth_root(c) for i, c in sl.items() if c}
