"""Ground coefficient field models.

Two models of the coefficient field K of the Laurent ring, both with exact
value tracking:

* EqModel: equal characteristic.  K is the perfect closure of F_q(t); an
  element is a rational function in u = t^(1/p^k) with the depth k kept
  minimal.  All arithmetic is exact.

* MixedModel: mixed characteristic.  An element is a finite sum of
  Teichmueller digits times rational powers of p, the support confined to a
  window [v, v + N) above the leading exponent v, together with a cutoff
  below which the digits are certified.  Carries are computed by lifting
  common-denominator digit blocks into a truncated unramified coefficient
  ring and peeling digits back off.  Exponent denominators must divide a
  configured bound; p-th roots that would leave the bound are refused.

The mixed model contains the constant C with C^(p-1) = -p (a single digit
at exponent 1/(p-1)) and a primitive p-th root of unity zeta.  For odd p
this forces q = p^2: the residue field is extended so that a digit d with
d^(p-1) = -1 exists.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import (ConfigMismatch, DivisionByZero, NegativeValue, NotAOneUnit,
                     PrecisionExhausted, RootNotRepresentable, ZeroHasNoValue)
from .fields import GaloisField, Poly, RatFunc
from .values import Value


# ---------------------------------------------------------------------------
# equal characteristic
# ---------------------------------------------------------------------------

class EqElem:
    """Element of the perfect closure of F_q(t): a rational function of
    u = t^(1/p^depth), with minimal depth."""

    __slots__ = ("model", "depth", "fn")

    def __init__(self, model, depth, fn):
        self.model = model
        self.depth = depth
        self.fn = fn

    def is_zero(self):
        return self.fn.is_zero()

    def __add__(self, other):
        return self.model.add(self, other)

    def __sub__(self, other):
        return self.model.sub(self, other)

    def __mul__(self, other):
        return self.model.mul(self, other)

    def __neg__(self):
        return self.model.neg(self)

    def __eq__(self, other):
        return (isinstance(other, EqElem) and self.depth == other.depth
                and self.fn == other.fn)

    def __repr__(self):
        return f"EqElem({self.model.pretty(self)})"


class EqModel:
    characteristic = "equal"

    def __init__(self, gf: GaloisField, N=8):
        self.gf = gf
        self.p = gf.p
        self.N = Fraction(N)

    # -- construction --------------------------------------------------

    def _make(self, depth, fn) -> EqElem:
        p = self.p
        while (depth > 0 and fn.num.exponents_divisible_by(p)
               and fn.den.exponents_divisible_by(p)):
            fn = RatFunc.make(fn.num.contract(p), fn.den.contract(p))
            depth -= 1
        if fn.is_zero():
            depth = 0
        return EqElem(self, depth, fn)

    def zero(self) -> EqElem:
        return EqElem(self, 0, RatFunc.from_poly(Poly.zero(self.gf)))

    def one(self) -> EqElem:
        return EqElem(self, 0, RatFunc.from_poly(Poly.one(self.gf)))

    def const(self, code: int) -> EqElem:
        return EqElem(self, 0, RatFunc.from_poly(Poly.make(self.gf, [code])))

    def from_int(self, n: int) -> EqElem:
        return self.const(self.gf.from_int(n))

    def monomial(self, code: int, exp: Fraction) -> EqElem:
        """code * t^exp; the exponent denominator must be a power of p."""
        exp = Fraction(exp)
        if code == 0:
            return self.zero()
        den = exp.denominator
        depth = 0
        while den % self.p == 0:
            den //= self.p
            depth += 1
        if den != 1:
            raise RootNotRepresentable(
                f"t^({exp}) needs a {exp.denominator}-th root of t")
        uexp = int(exp * self.p ** depth)
        if uexp >= 0:
            fn = RatFunc.from_poly(Poly.monomial(self.gf, code, uexp))
        else:
            fn = RatFunc.make(Poly.make(self.gf, [code]),
                              Poly.monomial(self.gf, 1, -uexp))
        return self._make(depth, fn)

    def t_power(self, exp) -> EqElem:
        return self.monomial(1, Fraction(exp))

    # -- arithmetic ----------------------------------------------------

    def _common(self, e1: EqElem, e2: EqElem):
        depth = max(e1.depth, e2.depth)
        f1 = self._raise_depth(e1, depth)
        f2 = self._raise_depth(e2, depth)
        return depth, f1, f2

    def _raise_depth(self, e: EqElem, depth: int) -> RatFunc:
        m = self.p ** (depth - e.depth)
        if m == 1:
            return e.fn
        return RatFunc(e.fn.num.stretch(m), e.fn.den.stretch(m))

    def add(self, e1, e2):
        depth, f1, f2 = self._common(e1, e2)
        return self._make(depth, f1 + f2)

    def sub(self, e1, e2):
        depth, f1, f2 = self._common(e1, e2)
        return self._make(depth, f1 - f2)

    def mul(self, e1, e2):
        depth, f1, f2 = self._common(e1, e2)
        return self._make(depth, f1 * f2)

    def neg(self, e):
        return EqElem(self, e.depth, -e.fn)

    def inv(self, e):
        if e.is_zero():
            raise DivisionByZero("inverse of zero")
        return EqElem(self, e.depth, e.fn.inv())

    def div(self, e1, e2):
        return self.mul(e1, self.inv(e2))

    def pth_power(self, e):
        fr = self.gf.frobenius
        fn = RatFunc(e.fn.num.map_coeffs(fr).stretch(self.p),
                     e.fn.den.map_coeffs(fr).stretch(self.p))
        return self._make(e.depth, fn)

    def pth_root(self, e):
        rt = self.gf.pth_root
        fn = RatFunc(e.fn.num.map_coeffs(rt), e.fn.den.map_coeffs(rt))
        return self._make(e.depth + 1, fn)

    # -- valuation data ------------------------------------------------

    def value_fraction(self, e) -> Fraction:
        if e.is_zero():
            raise ZeroHasNoValue("value of 0")
        return Fraction(e.fn.num.ord() - e.fn.den.ord(), self.p ** e.depth)

    def value_lower_bound(self, e):
        """Certified lower bound for the value; None means +infinity."""
        if e.is_zero():
            return None
        return self.value_fraction(e)

    def residue_code(self, e) -> int:
        if e.is_zero():
            return 0
        v = self.value_fraction(e)
        if v < 0:
            raise NegativeValue("residue of an element of negative value")
        if v > 0:
            return 0
        num, den = e.fn.num, e.fn.den
        return self.gf.mul(num.coeffs[num.ord()], self.gf.inv(den.coeffs[den.ord()]))

    def is_zero_elem(self, e) -> bool:
        return e.is_zero()

    def is_zero_to(self, e, alpha: Fraction) -> bool:
        """Whether e is zero up to value alpha.  Exact model: zero or beyond."""
        return e.is_zero() or self.value_fraction(e) >= alpha

    def unit_level_fraction(self, e) -> Fraction:
        diff = self.sub(e, self.one())
        if diff.is_zero():
            raise NotAOneUnit("the element is exactly 1")
        lv = self.value_fraction(diff)
        if lv <= 0:
            raise NotAOneUnit("element is not congruent to 1 below value 0")
        return lv

    # -- serialization -------------------------------------------------

    def to_json(self, e):
        return {"depth": e.depth, "num": e.fn.num.to_json(),
                "den": e.fn.den.to_json()}

    def from_json(self, data):
        fn = RatFunc.make(Poly.from_json(self.gf, data["num"]),
                          Poly.from_json(self.gf, data["den"]))
        return self._make(int(data["depth"]), fn)

    def pretty(self, e) -> str:
        if e.is_zero():
            return "0"
        num = self._pretty_poly(e.fn.num, e.depth)
        if e.fn.den == Poly.one(self.gf):
            return num
        return f"({num})/({self._pretty_poly(e.fn.den, e.depth)})"

    def _pretty_poly(self, poly, depth):
        parts = []
        scale = self.p ** depth
        for i, c in enumerate(poly.coeffs):
            if c == 0:
                continue
            exp = Fraction(i, scale)
            if exp == 0:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(f"t^({exp})")
            else:
                parts.append(f"{c}*t^({exp})")
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# mixed characteristic
# ---------------------------------------------------------------------------

class MixedElem:
    """Finite Teichmueller digit expansion sum_g digit_g * p^g.

    digits: sorted tuple of (exponent: Fraction, code) with nonzero codes.
    cutoff: Fraction below which the digits are certified complete, or None
    when the expansion terminates and is exact.
    """

    __slots__ = ("model", "digits", "cutoff")

    def __init__(self, model, digits, cutoff):
        self.model = model
        self.digits = digits
        self.cutoff = cutoff

    def is_exact_zero(self):
        return not self.digits and self.cutoff is None

    def __add__(self, other):
        return self.model.add(self, other)

    def __sub__(self, other):
        return self.model.sub(self, other)

    def __mul__(self, other):
        return self.model.mul(self, other)

    def __neg__(self):
        return self.model.neg(self)

    def __eq__(self, other):
        return (isinstance(other, MixedElem) and self.digits == other.digits
                and self.cutoff == other.cutoff)

    def __repr__(self):
        return f"MixedElem({self.model.pretty(self)})"


def _min_cut(c1, c2):
    if c1 is None:
        return c2
    if c2 is None:
        return c1
    return min(c1, c2)


class MixedModel:
    characteristic = "mixed"

    def __init__(self, gf: GaloisField, N=8, denom_cap=None, hard_cap=None):
        p = gf.p
        if p > 2 and gf.r < 2:
            raise ConfigMismatch(
                "mixed characteristic with odd p needs q = p^2 so that the "
                "constant C with C^(p-1) = -p has a digit expansion; supply "
                "a residue field polynomial of degree 2")
        self.gf = gf
        self.p = p
        self.r = gf.r
        self.N = Fraction(N)
        self.denom_cap = denom_cap if denom_cap else (p - 1) * p ** 3
        self.hard_cap = hard_cap if hard_cap else max(self.denom_cap,
                                                      (p - 1) * p ** 6)
        self.cap_raised = False
        self._teich_cache = {}
        self._C = None
        self._zeta = None
        self._mod_lift = tuple(gf.modulus[:gf.r])  # ascending, degree < r

    # -- truncated unramified coefficient ring -------------------------
    # elements: tuples of r ints modulo p^L, polynomial in the residue
    # field generator reduced by the naive lift of the modulus.

    def _w_zero(self):
        return (0,) * self.r

    def _w_from_int(self, n, mod):
        return (n % mod,) + (0,) * (self.r - 1)

    def _w_add(self, x, y, mod):
        return tuple((a + b) % mod for a, b in zip(x, y))

    def _w_sub(self, x, y, mod):
        return tuple((a - b) % mod for a, b in zip(x, y))

    def _w_neg(self, x, mod):
        return tuple((-a) % mod for a in x)

    def _w_scale_int(self, x, n, mod):
        return tuple((a * n) % mod for a in x)

    def _w_mul(self, x, y, mod):
        r = self.r
        if r == 1:
            return ((x[0] * y[0]) % mod,)
        prod = [0] * (2 * r - 1)
        for i, a in enumerate(x):
            if a == 0:
                continue
            for j, b in enumerate(y):
                if b:
                    prod[i + j] = (prod[i + j] + a * b) % mod
        for i in range(2 * r - 2, r - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j, m in enumerate(self._mod_lift):
                    prod[i - r + j] = (prod[i - r + j] - c * m) % mod
        return tuple(prod[:r])

    def _w_pow(self, x, n, mod):
        out = self._w_from_int(1, mod)
        base = x
        while n:
            if n & 1:
                out = self._w_mul(out, base, mod)
            base = self._w_mul(base, base, mod)
            n >>= 1
        return out

    def _w_is_zero(self, x):
        return all(a == 0 for a in x)

    def _w_residue_code(self, x):
        return self.gf._encode([a % self.p for a in x])

    def _teich(self, code, L):
        """Teichmueller lift of a residue field element, modulo p^L."""
        key = (code, L)
        got = self._teich_cache.get(key)
        if got is not None:
            return got
        mod = self.p ** L
        w = tuple(self.gf._decode(code))
        prev = None
        while w != prev:
            prev = w
            w = self._w_pow(w, self.gf.q, mod)
        self._teich_cache[key] = w
        return w

    # -- digit block lifting -------------------------------------------

    def _check_den(self, den: int):
        if self.denom_cap % den:
            raise RootNotRepresentable(
                f"exponent denominator {den} does not divide the configured "
                f"bound {self.denom_cap}")

    def request_denominator(self, den: int):
        """Grow the denominator bound for this run, up to a hard limit."""
        if self.denom_cap % den == 0:
            return
        new_cap = math.lcm(self.denom_cap, den)
        if self.hard_cap % new_cap:
            raise RootNotRepresentable(
                f"denominator {den} exceeds even the hard bound {self.hard_cap}")
        self.denom_cap = new_cap
        self.cap_raised = True

    def _lift_digits(self, digits, M, shift, L):
        """Map digit list into slot -> ring element, pi^M = p convention."""
        mod = self.p ** L
        aux = {}
        for g, d in digits:
            pos = (g - shift) * M
            assert pos.denominator == 1 and pos >= 0
            pos = int(pos)
            slot, k = pos % M, pos // M
            if k >= L:
                continue
            w = self._w_scale_int(self._teich(d, L), self.p ** k, mod)
            aux[slot] = self._w_add(aux.get(slot, self._w_zero()), w, mod)
        return aux

    def _aux_mul(self, a, b, M, mod):
        out = {}
        for j1, w1 in a.items():
            for j2, w2 in b.items():
                w = self._w_mul(w1, w2, mod)
                j = j1 + j2
                slot, carry = j % M, j // M
                if carry:
                    w = self._w_scale_int(w, self.p ** carry, mod)
                out[slot] = self._w_add(out.get(slot, self._w_zero()), w, mod)
        return out

    def _decompose(self, aux, M, shift, cut, L, sound_exact=False):
        """Peel Teichmueller digits off a slot dictionary.

        Returns (digits, complete): complete means every slot vanished
        within the working precision AND the caller vouched (sound_exact)
        that a vanished residual implies true termination.  A residual that
        is merely zero modulo the remaining precision proves nothing, so
        without the voucher complete is always False.
        """
        digits = []
        complete = sound_exact
        for slot in sorted(aux):
            w = aux[slot]
            mod = self.p ** L
            for k in range(L):
                if self._w_is_zero(w):
                    break
                gamma = shift + Fraction(slot, M) + k
                if cut is not None and gamma >= cut:
                    complete = False
                    break
                d = self._w_residue_code(w)
                if d:
                    digits.append((gamma, d))
                    w = self._w_sub(w, self._teich(d, L), mod)
                w = tuple(a // self.p for a in w)
                mod //= self.p
                if mod == 1:
                    complete = False
                    break
            else:
                complete = False
        digits.sort()
        return digits, complete

    def _integral_sound(self, pool, count, cut):
        """Whether a vanished peel residual proves true termination.

        Holds when every digit is a rational integer (+-1, so p <= 2 with
        digit 1, or p = 3 with prime-field digits): the lifted quantity is
        then an actual integer majorized by p^L, and peeling keeps it one.
        """
        if cut is not None or self.p > 3:
            return False
        if count >= 2 ** (int(self.N) + 2):
            return False
        return all(d < self.p for _, d in pool)

    def _finish(self, digits, cut):
        for g, _ in digits:
            self._check_den(g.denominator)
        if digits and cut is not None:
            v = digits[0][0]
            cut = min(cut, v + self.N)
            digits = [d for d in digits if d[0] < cut]
        return MixedElem(self, tuple(digits), cut)

    # -- construction --------------------------------------------------

    def zero(self):
        return MixedElem(self, (), None)

    def one(self):
        return MixedElem(self, ((Fraction(0), 1),), None)

    def monomial(self, code: int, exp) -> MixedElem:
        exp = Fraction(exp)
        if code == 0:
            return self.zero()
        self._check_den(exp.denominator)
        return MixedElem(self, ((exp, code),), None)

    def from_digits(self, pairs, cutoff=None) -> MixedElem:
        digits = sorted((Fraction(g), d) for g, d in pairs if d != 0)
        for g, d in digits:
            self.gf.check(d)
            self._check_den(g.denominator)
        cut = Fraction(cutoff) if cutoff is not None else None
        if len({g for g, _ in digits}) != len(digits):
            # colliding exponents: tau is not additive, so fold through
            # the carry-aware addition instead of merging residues
            acc = MixedElem(self, (), cut)
            for g, d in digits:
                acc = self.add(acc, self.monomial(d, g))
            return acc
        return self._finish(digits, cut)

    def from_int(self, n: int) -> MixedElem:
        if n == 0:
            return self.zero()
        size = 1
        while self.p ** size <= 2 * abs(n):
            size += 1
        L = max(size + 2, int(math.ceil(self.N)) + 3)
        # Termination of integer digit expansions is a theorem exactly when
        # every digit of an integer is an integer: always for p = 2 (digit
        # 1) and p = 3 (digits +-1); and a nonnegative input for p = 2 is
        # majorized by p^L, so a vanished residual is a true zero.
        sound = (self.p == 2 and n >= 0) or self.p == 3
        aux = {0: self._w_from_int(n, self.p ** L)}
        digits, complete = self._decompose(aux, 1, Fraction(0), None, L, sound)
        cut = None if complete else Fraction(L - 1)
        return self._finish(digits, cut)

    # -- arithmetic ----------------------------------------------------

    def _digits_below(self, e, cut):
        if cut is None:
            return list(e.digits)
        return [d for d in e.digits if d[0] < cut]

    def add(self, e1, e2):
        if e1.is_exact_zero():
            return e2
        if e2.is_exact_zero():
            return e1
        cut = _min_cut(e1.cutoff, e2.cutoff)
        pool = self._digits_below(e1, cut) + self._digits_below(e2, cut)
        if not pool:
            return MixedElem(self, (), cut)
        # digit lists with disjoint exponent support concatenate with no
        # carries: the merge is already the canonical expansion
        if len({g for g, _ in pool}) == len(pool):
            return self._finish(sorted(pool), cut)
        exps = [g for g, _ in pool]
        shift = min(exps)
        M = 1
        for g in exps:
            M = math.lcm(M, g.denominator)
        if cut is not None:
            L = max(1, int(math.ceil(cut - shift))) + 1
        else:
            span = max(exps) - shift
            L = int(math.ceil(span)) + int(math.ceil(self.N)) + 3
        aux = self._lift_digits(pool, M, shift, L)
        sound = self._integral_sound(pool, len(pool), cut)
        digits, complete = self._decompose(aux, M, shift, cut, L, sound)
        if cut is None and not complete:
            cut = shift + L - 1
            digits = [d for d in digits if d[0] < cut]
        return self._finish(digits, cut)

    def neg(self, e):
        if self.p > 2:
            # -tau(d) = tau(-d) when q is odd, so negation is digit-wise
            return MixedElem(self, tuple((g, self.gf.neg(d)) for g, d in e.digits),
                             e.cutoff)
        if not e.digits:
            return e
        v = e.digits[0][0]
        cut = _min_cut(e.cutoff, v + self.N)
        pool = self._digits_below(e, cut)
        shift = v
        M = 1
        for g, _ in pool:
            M = math.lcm(M, g.denominator)
        L = max(1, int(math.ceil(cut - shift))) + 1
        mod = self.p ** L
        aux = {slot: self._w_neg(w, mod)
               for slot, w in self._lift_digits(pool, M, shift, L).items()}
        digits, _ = self._decompose(aux, M, shift, cut, L)
        return self._finish(digits, cut)

    def sub(self, e1, e2):
        # two exact elements with the same digit list differ by exactly 0;
        # for p = 2 the route through negation would blur this
        if e1.cutoff is None and e2.cutoff is None and e1.digits == e2.digits:
            return self.zero()
        return self.add(e1, self.neg(e2))

    def value_lower_bound(self, e):
        """Certified lower bound for the value; None means +infinity."""
        if e.digits:
            return e.digits[0][0]
        return e.cutoff

    def mul(self, e1, e2):
        if e1.is_exact_zero() or e2.is_exact_zero():
            return self.zero()
        if not e1.digits or not e2.digits:
            # a to-precision zero factor: result is zero to a shifted precision
            lo1, lo2 = self.value_lower_bound(e1), self.value_lower_bound(e2)
            return MixedElem(self, (), lo1 + lo2)
        for a, b in ((e1, e2), (e2, e1)):
            if len(a.digits) == 1 and a.cutoff is None:
                # tau is multiplicative, so scaling by a single digit maps
                # the digit list exactly
                g0, d0 = a.digits[0]
                digits = [(g + g0, self.gf.mul(d, d0)) for g, d in b.digits]
                cut = None if b.cutoff is None else b.cutoff + g0
                return self._finish(digits, cut)
        v1, v2 = e1.digits[0][0], e2.digits[0][0]
        c1 = e1.cutoff if e1.cutoff is not None else None
        c2 = e2.cutoff if e2.cutoff is not None else None
        cut = _min_cut(c1 + v2 if c1 is not None else None,
                       c2 + v1 if c2 is not None else None)
        pool1 = self._digits_below(e1, e1.cutoff)
        pool2 = self._digits_below(e2, e2.cutoff)
        shift = v1 + v2
        M = 1
        for g, _ in pool1 + pool2:
            M = math.lcm(M, g.denominator)
        if cut is not None:
            L = max(1, int(math.ceil(cut - shift))) + 1
        else:
            span = (pool1[-1][0] - v1) + (pool2[-1][0] - v2)
            L = int(math.ceil(span)) + int(math.ceil(self.N)) + 3
        mod = self.p ** L
        aux1 = self._lift_digits([(g - v1, d) for g, d in pool1], M, Fraction(0), L)
        aux2 = self._lift_digits([(g - v2, d) for g, d in pool2], M, Fraction(0), L)
        aux = self._aux_mul(aux1, aux2, M, mod)
        sound = self._integral_sound(pool1 + pool2,
                                     len(pool1) * len(pool2), cut)
        digits, complete = self._decompose(aux, M, shift, cut, L, sound)
        if cut is None and not complete:
            cut = shift + L - 1
            digits = [d for d in digits if d[0] < cut]
        return self._finish(digits, cut)

    def inv(self, e):
        if e.is_exact_zero():
            raise DivisionByZero("inverse of zero")
        if not e.digits:
            raise PrecisionExhausted("inverse of an element only known to be small")
        v = e.digits[0][0]
        rel = (e.cutoff - v) if e.cutoff is not None else self.N
        M = 1
        pool = self._digits_below(e, e.cutoff)
        for g, _ in pool:
            M = math.lcm(M, g.denominator)
        L = max(1, int(math.ceil(rel))) + 2
        mod = self.p ** L
        unit = self._lift_digits([(g - v, d) for g, d in pool], M, Fraction(0), L)
        lead = self._w_residue_code(unit[0])
        z = {0: self._teich(self.gf.inv(lead), L)}
        one_aux = {0: self._w_from_int(1, mod)}
        # Newton iteration z <- z(2 - uz) doubles the precision each step
        steps = max(4, (L * M).bit_length() + 1)
        for _ in range(steps):
            uz = self._aux_mul(unit, z, M, mod)
            corr = {s: self._w_neg(w, mod) for s, w in uz.items()}
            corr[0] = self._w_add(corr.get(0, self._w_zero()),
                                  self._w_scale_int(one_aux[0], 2, mod), mod)
            z = self._aux_mul(z, corr, M, mod)
            check = self._aux_mul(unit, z, M, mod)
            delta = dict(check)
            delta[0] = self._w_sub(delta.get(0, self._w_zero()), one_aux[0], mod)
            if all(self._w_is_zero(w) for w in delta.values()):
                break
        cut = -v + rel
        digits, _ = self._decompose(z, M, -v, cut, L)
        return self._finish(digits, cut)

    def div(self, e1, e2):
        return self.mul(e1, self.inv(e2))

    def pth_power(self, e):
        out = self.one()
        for _ in range(self.p):
            out = self.mul(out, e)
        return out

    def pth_root(self, e):
        """p-th root of a monomial-times-1-unit shaped element.

        The leading Teichmueller digit and the p-power part are rooted
        exactly; the remaining 1-unit factor must have level above
        p/(p-1) so the transformed Hensel iteration applies.
        """
        if e.is_exact_zero():
            return self.zero()
        if not e.digits:
            raise PrecisionExhausted("root of an element only known to be small")
        v = e.digits[0][0]
        root_exp = v / self.p
        self.request_denominator(root_exp.denominator)
        d0 = e.digits[0][1]
        mono_root = self.monomial(self.gf.pth_root(d0), root_exp)
        inv_mono = self.monomial(self.gf.inv(d0), -v)
        unit = self.mul(e, inv_mono)
        b = self.sub(unit, self.one())
        if not b.digits:
            if b.cutoff is None:
                return mono_root
            if b.cutoff <= 1:
                raise PrecisionExhausted(
                    "1-unit part not resolved past the root threshold")
            return MixedElem(self, mono_root.digits,
                             root_exp + (b.cutoff - 1))
        level = b.digits[0][0]
        threshold = Fraction(self.p, self.p - 1)
        if not level > threshold:
            raise RootNotRepresentable(
                f"1-unit level {level} is not above p/(p-1) = {threshold}")
        from .units import pth_root_high_level
        w, _ = pth_root_high_level(unit, CoeffRing(self))
        return self.mul(mono_root, w)

    # -- valuation data ------------------------------------------------

    def value_fraction(self, e) -> Fraction:
        if e.digits:
            return e.digits[0][0]
        if e.cutoff is None:
            raise ZeroHasNoValue("value of 0")
        raise PrecisionExhausted(
            f"all digits cancelled below the cutoff {e.cutoff}")

    def residue_code(self, e) -> int:
        if e.is_exact_zero():
            return 0
        if e.digits:
            v = e.digits[0][0]
            if v < 0:
                raise NegativeValue("residue of an element of negative value")
            return e.digits[0][1] if v == 0 else 0
        if e.cutoff > 0:
            return 0
        raise PrecisionExhausted("residue not certified at this precision")

    def is_zero_elem(self, e) -> bool:
        return e.is_exact_zero()

    def is_zero_to(self, e, alpha: Fraction) -> bool:
        """Certified: e has no digit below alpha and is tracked that far."""
        alpha = Fraction(alpha)
        if any(g < alpha for g, _ in e.digits):
            return False
        return e.cutoff is None or e.cutoff >= alpha

    def unit_level_fraction(self, e) -> Fraction:
        diff = self.sub(e, self.one())
        if diff.is_exact_zero():
            raise NotAOneUnit("the element is exactly 1")
        if diff.digits:
            lv = diff.digits[0][0]
            if lv <= 0:
                raise NotAOneUnit("element is not congruent to 1 below value 0")
            return lv
        if diff.cutoff is not None and diff.cutoff > 0:
            raise PrecisionExhausted(
                "1-unit level exceeds the tracked precision")
        raise NotAOneUnit("level not certified positive")

    # -- distinguished constants ---------------------------------------

    @property
    def C(self) -> MixedElem:
        """The constant with C^(p-1) = -p and value 1/(p-1)."""
        if self._C is None:
            if self.p == 2:
                self._C = self.from_int(-2)
            else:
                cand = None
                minus_one = self.gf.neg(1)
                for code in self.gf.elements():
                    if code and self.gf.pow(code, self.p - 1) == minus_one:
                        cand = code
                        break
                if cand is None:
                    raise ConfigMismatch(
                        "residue field has no digit d with d^(p-1) = -1")
                self._C = self.monomial(cand, Fraction(1, self.p - 1))
        return self._C

    def C_power(self, k: int) -> MixedElem:
        """C^k, exact for odd p (a single digit); for p = 2 computed to
        the working precision when k is negative."""
        if k == 0:
            return self.one()
        if self.p > 2:
            g, d = self.C.digits[0]
            code = self.gf.pow(d, k % (self.gf.q - 1))
            return self.monomial(code, g * k)
        if k > 0:
            out = self.one()
            for _ in range(k):
                out = self.mul(out, self.C)
            return out
        return self.inv(self.C_power(-k))

    @property
    def zeta(self) -> MixedElem:
        """A primitive p-th root of unity, to the working precision."""
        if self._zeta is None:
            if self.p == 2:
                self._zeta = self.from_int(-1)
            else:
                from .units import solve_unit_equation
                ring = CoeffRing(self)
                y, _ = solve_unit_equation(ring, ring.zero(), 1)
                self._zeta = self.add(self.one(), self.mul(self.C, y))
        return self._zeta

    # -- serialization -------------------------------------------------

    def to_json(self, e):
        return {"digits": [[str(g), d] for g, d in e.digits],
                "cutoff": None if e.cutoff is None else str(e.cutoff)}

    def from_json(self, data):
        digits = [(Fraction(g), int(d)) for g, d in data["digits"]]
        cut = data.get("cutoff")
        return self.from_digits(digits, None if cut is None else Fraction(cut))

    def pretty(self, e) -> str:
        if e.is_exact_zero():
            return "0"
        parts = []
        for g, d in e.digits:
            if g == 0:
                parts.append(f"{d}")
            elif d == 1:
                parts.append(f"{self.p}^({g})")
            else:
                parts.append(f"{d}*{self.p}^({g})")
        body = " + ".join(parts) if parts else "0"
        if e.cutoff is not None:
            body += f" + O({self.p}^({e.cutoff}))"
        return body


# ---------------------------------------------------------------------------
# ring adapter for the generic one-unit calculus
# ---------------------------------------------------------------------------

class CoeffRing:
    """Presents a coefficient model to the one-unit rewriting machinery."""

    is_laurent = False

    def __init__(self, model):
        self.model = model
        self.p = model.p

    def zero(self):
        return self.model.zero()

    def one(self):
        return self.model.one()

    def from_int(self, n):
        return self.model.from_int(n)

    def add(self, a, b):
        return self.model.add(a, b)

    def sub(self, a, b):
        return self.model.sub(a, b)

    def mul(self, a, b):
        return self.model.mul(a, b)

    def neg(self, a):
        return self.model.neg(a)

    def frobenius(self, a):
        return self.model.pth_power(a)

    def value(self, a) -> Value:
        return Value.of(self.model.value_fraction(a))

    def value_lower_bound(self, a):
        lo = self.model.value_lower_bound(a)
        return None if lo is None else Value.of(lo)

    def is_zero(self, a) -> bool:
        return self.model.is_zero_elem(a)

    def is_zero_to(self, a, alpha: Value) -> bool:
        if not alpha.is_rational:
            # rational-valued coefficients vanish past any irrational bound
            # exactly when they vanish past its rational neighbours
            return self.model.is_zero_to(a, _rational_ceiling(alpha))
        return self.model.is_zero_to(a, alpha.a)

    def certified_zero_level(self, a):
        """Largest alpha (Value or None for exact) with a = O(alpha)."""
        if self.model.characteristic == "equal":
            return None if a.is_zero() else Value.of(self.model.value_fraction(a))
        if a.digits:
            return Value.of(a.digits[0][0])
        return None if a.cutoff is None else Value.of(a.cutoff)

    def inv_approx(self, a, alpha=None):
        return self.model.inv(a)

    def split_above(self, a, alpha: Value):
        """Exact split a = keep + drop with drop the part of value > alpha."""
        model = self.model
        if model.characteristic == "equal":
            if a.is_zero() or Value.of(model.value_fraction(a)) <= alpha:
                return a, model.zero()
            return model.zero(), a
        lo = tuple((g, d) for g, d in a.digits if Value.of(g) <= alpha)
        hi = tuple((g, d) for g, d in a.digits if Value.of(g) > alpha)
        covered = a.cutoff is None or Value.of(a.cutoff) > alpha
        keep = MixedElem(model, lo, None if covered else a.cutoff)
        drop = MixedElem(model, hi, a.cutoff)
        if not hi and a.cutoff is None:
            drop = model.zero()
        return keep, drop

    def C(self):
        return self.model.C

    def C_power(self, k: int):
        return self.model.C_power(k)

    def scale_int(self, a, n):
        return self.model.mul(a, self.model.from_int(n))

    def pretty(self, a):
        return self.model.pretty(a)


def _rational_ceiling(v: Value) -> Fraction:
    """A rational slightly above v, adequate for vanishing checks at
    rational-valued elements (their values never equal an irrational)."""
    from fractions import Fraction as F
    # v = a + b*sqrt(d): bound sqrt(d) crudely but safely from above
    if v.b == 0:
        return v.a
    d = v.d
    num, den = d.numerator, d.denominator
    root_hi = F(math.isqrt(num * den) + 1, den)
    root_lo = F(math.isqrt(num * den), den)
    return v.a + (v.b * root_hi if v.b > 0 else v.b * root_lo)


# ---------------------------------------------------------------------------
# module level operation surface
# ---------------------------------------------------------------------------

def arithmetic(op: str, e1, e2):
    """Field operation dispatch: op in '+', '-', '*', '/'."""
    m = e1.model
    if op == "+":
        return m.add(e1, e2)
    if op == "-":
        return m.sub(e1, e2)
    if op == "*":
        return m.mul(e1, e2)
    if op == "/":
        return m.div(e1, e2)
    raise ValueError(f"unknown operation {op!r}")


def value(e) -> Value:
    """Valuation of a coefficient element, as a rational Value."""
    return Value.of(e.model.value_fraction(e))


def pth_root(e):
    return e.model.pth_root(e)


def residue(e) -> int:
    """Residue field element code of an element of the valuation ring."""
    return e.model.residue_code(e)


def unit_level(e) -> Value:
    """Value of e - 1 for a 1-unit e."""
    return Value.of(e.model.unit_level_fraction(e))
