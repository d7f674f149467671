"""Laurent polynomials in x over a coefficient model, under a Gauss valuation.

Two modes:

* "vt": the value of x is a fixed positive irrational element of the value
  group Q + Q*sqrt(D).  Every nonzero polynomial then has a unique term of
  minimal value.

* "rt": the value of x is 0 and the residue of x is transcendental over the
  coefficient residue field.  The value of a polynomial is the minimum of
  its coefficient values, and the residue is a polynomial in the residue
  of x.

Coefficients are elements of an EqModel or MixedModel from coeff.  Mixed
coefficients carry precision cutoffs; vanishing statements at a given value
level are certified through them.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (DivisionByZero, InverseNotApproximable, NegativeValue,
                     PrecisionExhausted, RTModeError, ZeroHasNoValue)
from .fields import Poly
from .values import Value
from . import coeff as coeff_mod


class ValConfig:
    """Valuation mode, value of x, and the coefficient model."""

    def __init__(self, mode: str, model, vx: Value = None):
        if mode not in ("vt", "rt"):
            raise ValueError(f"unknown valuation mode {mode!r}")
        self.mode = mode
        self.model = model
        self.p = model.p
        if mode == "vt":
            vx = vx if vx is not None else Value(Fraction(0), Fraction(1))
            if vx.b == 0:
                raise ValueError("vt mode needs an irrational value for x")
            if vx.sign() <= 0:
                raise ValueError("the value of x must be positive in vt mode")
        else:
            if vx is not None and not vx.is_zero():
                raise ValueError("rt mode fixes the value of x at 0")
            vx = Value.zero()
        self.vx = vx

    @property
    def gf(self):
        return self.model.gf

    def vp(self) -> Value:
        if self.model.characteristic != "mixed":
            raise ValueError("vp is a mixed characteristic quantity")
        return Value.of(Fraction(1))


class LaurentPoly:
    """Sparse Laurent polynomial: integer exponent -> coefficient element."""

    __slots__ = ("cfg", "terms")

    def __init__(self, cfg, terms):
        self.cfg = cfg
        self.terms = terms

    @staticmethod
    def make(cfg, pairs) -> "LaurentPoly":
        model = cfg.model
        terms = {}
        for i, c in pairs:
            if i in terms:
                c = model.add(terms[i], c)
            if model.is_zero_elem(c):
                terms.pop(i, None)
            else:
                terms[i] = c
        return LaurentPoly(cfg, terms)

    @staticmethod
    def zero(cfg) -> "LaurentPoly":
        return LaurentPoly(cfg, {})

    @staticmethod
    def const(cfg, c) -> "LaurentPoly":
        return LaurentPoly.make(cfg, [(0, c)])

    @staticmethod
    def one(cfg) -> "LaurentPoly":
        return LaurentPoly.const(cfg, cfg.model.one())

    @staticmethod
    def monomial(cfg, c, i: int) -> "LaurentPoly":
        return LaurentPoly.make(cfg, [(i, c)])

    def is_zero(self):
        return not self.terms

    def support(self):
        return sorted(self.terms)

    def coeff(self, i: int):
        return self.terms.get(i, self.cfg.model.zero())

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return neg(self)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __repr__(self):
        return f"LaurentPoly({pretty(self)})"


def add(f, g):
    model = f.cfg.model
    terms = dict(f.terms)
    for i, c in g.terms.items():
        s = model.add(terms[i], c) if i in terms else c
        if model.is_zero_elem(s):
            terms.pop(i, None)
        else:
            terms[i] = s
    return LaurentPoly(f.cfg, terms)


def neg(f):
    model = f.cfg.model
    return LaurentPoly(f.cfg, {i: model.neg(c) for i, c in f.terms.items()})


def sub(f, g):
    # per-exponent model.sub so equal exact coefficients cancel exactly;
    # negating first would leave complement markers for p = 2
    model = f.cfg.model
    terms = dict(f.terms)
    for i, c in g.terms.items():
        s = model.sub(terms[i], c) if i in terms else model.neg(c)
        if model.is_zero_elem(s):
            terms.pop(i, None)
        else:
            terms[i] = s
    return LaurentPoly(f.cfg, terms)


def mul(f, g):
    model = f.cfg.model
    terms = {}
    for i, a in f.terms.items():
        for j, b in g.terms.items():
            c = model.mul(a, b)
            k = i + j
            terms[k] = model.add(terms[k], c) if k in terms else c
    return LaurentPoly(f.cfg, {i: c for i, c in terms.items()
                               if not model.is_zero_elem(c)})


def scale(f, c):
    """Multiply by a coefficient element."""
    model = f.cfg.model
    out = {}
    for i, a in f.terms.items():
        b = model.mul(a, c)
        if not model.is_zero_elem(b):
            out[i] = b
    return LaurentPoly(f.cfg, out)


def shift_x(f, k: int):
    """Multiply by x^k."""
    return LaurentPoly(f.cfg, {i + k: c for i, c in f.terms.items()})


def pth_power(f):
    """f^p.  Exact term-wise Frobenius in equal characteristic; repeated
    multiplication in mixed characteristic where cross terms survive."""
    cfg = f.cfg
    model = cfg.model
    if model.characteristic == "equal":
        return LaurentPoly(cfg, {cfg.p * i: model.pth_power(c)
                                 for i, c in f.terms.items()})
    out = LaurentPoly.one(cfg)
    for _ in range(cfg.p):
        out = mul(out, f)
    return out


def int_power(f, n: int):
    if n < 0:
        raise ValueError("negative powers are not defined for polynomials")
    out = LaurentPoly.one(f.cfg)
    base = f
    while n:
        if n & 1:
            out = mul(out, base)
        base_needed = n >> 1
        if base_needed:
            base = mul(base, base)
        n = base_needed
    return out


# ---------------------------------------------------------------------------
# valuation
# ---------------------------------------------------------------------------

def term_value(cfg, i: int, c) -> Value:
    return Value.of(cfg.model.value_fraction(c)) + cfg.vx.scaled(i)


def _term_bounds(f):
    """Per term: (exponent, exact value or None, certified lower bound)."""
    cfg = f.cfg
    model = cfg.model
    out = []
    for i, c in f.terms.items():
        lo = model.value_lower_bound(c)
        bound = None if lo is None else Value.of(lo) + cfg.vx.scaled(i)
        if model.characteristic == "mixed" and not c.digits:
            out.append((i, None, bound))
        else:
            out.append((i, bound, bound))
    return out


def gauss_value(f) -> Value:
    """min over terms of (coefficient value + exponent * vx)."""
    v, _ = gauss_data(f)
    return v


def gauss_data(f):
    """Gauss value together with the sorted exponents attaining it.

    Precision-zero coefficients must be certified above the minimum, else
    the minimum itself is not certified.
    """
    if f.is_zero():
        raise ZeroHasNoValue("Gauss value of the zero polynomial")
    best = None
    leads = []
    pending = []
    for i, exact, bound in _term_bounds(f):
        if exact is None:
            pending.append((i, bound))
            continue
        if best is None or exact < best:
            best, leads = exact, [i]
        elif exact == best:
            leads.append(i)
    if best is None:
        raise PrecisionExhausted(
            "every coefficient vanished to its tracked precision")
    for i, bound in pending:
        if not bound > best:
            raise PrecisionExhausted(
                f"coefficient of x^{i} is unresolved at the minimal value")
    return best, sorted(leads)


def vt_lead(f):
    """The unique minimal-value term in vt mode: (exponent, coefficient)."""
    v, leads = gauss_data(f)
    assert len(leads) == 1, "vt Gauss value attained twice"
    return leads[0], f.terms[leads[0]]


def is_zero_to(f, alpha: Value, strict=False) -> bool:
    """Certified vanishing up to value alpha, term by term.  With strict
    the pieces must lie strictly above alpha."""
    cfg = f.cfg
    model = cfg.model

    def ok(v):
        return v > alpha if strict else v >= alpha

    for i, c in f.terms.items():
        xpart = cfg.vx.scaled(i)
        if model.characteristic == "equal":
            if c.is_zero():
                continue
            if not ok(Value.of(model.value_fraction(c)) + xpart):
                return False
        else:
            for g, _ in c.digits:
                if not ok(Value.of(g) + xpart):
                    return False
            if c.cutoff is not None and not ok(Value.of(c.cutoff) + xpart):
                return False
    return True


def _split(f, alpha: Value, strict_low: bool):
    """Exact split f = low + rest, low collecting the pieces of value
    < alpha (strict_low) or <= alpha.

    Equal characteristic splits whole terms; mixed characteristic splits
    coefficient digit lists.  A coefficient whose cutoff leaves the low
    side unresolved keeps its cutoff on both sides, so the sum of the two
    parts reproduces f as a tracked object.
    """
    cfg = f.cfg
    model = cfg.model

    def in_low(v):
        return v < alpha if strict_low else v <= alpha

    low, rest = {}, {}
    for i, c in f.terms.items():
        xpart = cfg.vx.scaled(i)
        if model.characteristic == "equal":
            if in_low(Value.of(model.value_fraction(c)) + xpart):
                low[i] = c
            else:
                rest[i] = c
        else:
            lo_digits = tuple((g, d) for g, d in c.digits
                              if in_low(Value.of(g) + xpart))
            hi_digits = tuple((g, d) for g, d in c.digits
                              if not in_low(Value.of(g) + xpart))
            covered = (c.cutoff is None
                       or not in_low(Value.of(c.cutoff) + xpart))
            if lo_digits or not covered:
                low[i] = coeff_mod.MixedElem(
                    model, lo_digits, None if covered else c.cutoff)
            if hi_digits or c.cutoff is not None:
                rest[i] = coeff_mod.MixedElem(model, hi_digits, c.cutoff)
    return LaurentPoly(cfg, low), LaurentPoly(cfg, rest)


def split_at(f, alpha: Value):
    """Exact split f = low + rest with low the sub-sum of value < alpha."""
    return _split(f, alpha, True)


def split_above(f, alpha: Value):
    """Exact split f = keep + drop with drop the sub-sum of value > alpha."""
    return _split(f, alpha, False)


def truncate(f, alpha: Value):
    """The sub-sum of f of value below alpha."""
    low, _ = split_at(f, alpha)
    return low


# ---------------------------------------------------------------------------
# residues in rt mode
# ---------------------------------------------------------------------------

def rt_residue_poly(f) -> Poly:
    """Residue of an rt-mode polynomial of Gauss value >= 0, as a polynomial
    over the residue field in the residue of x.  Negative exponents with
    nonzero residue are rejected; the engines never produce them."""
    cfg = f.cfg
    if cfg.mode != "rt":
        raise RTModeError("residue polynomials exist in rt mode only")
    model = cfg.model
    codes = {}
    for i, c in f.terms.items():
        code = model.residue_code(c)
        if code:
            if i < 0:
                raise NegativeValue(
                    "residue with a negative power of x is not polynomial")
            codes[i] = code
    if not codes:
        return Poly.zero(cfg.gf)
    deg = max(codes)
    return Poly.make(cfg.gf, [codes.get(i, 0) for i in range(deg + 1)])


# ---------------------------------------------------------------------------
# multiplicative structure
# ---------------------------------------------------------------------------

def monomial_split(f):
    """Write f = c * x^k * u with c the lead coefficient, u a 1-unit.

    Requires a unique minimal-value term (automatic in vt mode; in rt mode
    the residue must be a monomial)."""
    v, leads = gauss_data(f)
    if len(leads) != 1:
        raise InverseNotApproximable(
            "no unique minimal term: the residue is not a monomial")
    k = leads[0]
    c = f.terms[k]
    model = f.cfg.model
    cinv = model.inv(c)
    u_terms = {}
    for i, a in f.terms.items():
        u_terms[i - k] = model.mul(cinv, a)
    u = LaurentPoly(f.cfg, u_terms)
    return c, k, u


def _lead_monomial(f):
    """The value-minimal monomial inside f, with the coefficient reduced to
    its own leading part: returns (i, lead-elem, inverse-lead-elem)."""
    _, leads = gauss_data(f)
    if len(leads) != 1:
        raise InverseNotApproximable(
            "no unique minimal term: the residue is not a monomial")
    i = leads[0]
    c = f.terms[i]
    model = f.cfg.model
    if model.characteristic == "equal":
        vfrac = model.value_fraction(c)
        lead_code = c.fn.num.coeffs[c.fn.num.ord()]
        den_lead = c.fn.den.coeffs[c.fn.den.ord()]
        lead_code = model.gf.mul(lead_code, model.gf.inv(den_lead))
        lead = model.monomial(lead_code, vfrac)
        inv_lead = model.monomial(model.gf.inv(lead_code), -vfrac)
    else:
        g, d = c.digits[0]
        lead = model.monomial(d, g)
        inv_lead = model.monomial(model.gf.inv(d), -g)
    return i, lead, inv_lead


def approx_inverse(f, alpha: Value):
    """f~ with 1 - f*f~ of value above alpha, by a geometric sum.

    Writes f = mu * (1 - psi) with mu the full lead monomial (coefficient
    lead included) and returns mu^{-1} * (1 + psi + ... + psi^n) for the
    smallest n with (n+1) * v(psi) > alpha.  The identity
    1 - f*f~ = psi^(n+1) is exact; in mixed characteristic the certified
    level is rechecked after the truncations of the arithmetic."""
    if f.is_zero():
        raise DivisionByZero("inverse of the zero polynomial")
    cfg = f.cfg
    i, lead, inv_lead = _lead_monomial(f)
    mu_inv = LaurentPoly.monomial(cfg, inv_lead, -i)
    psi = sub(LaurentPoly.one(cfg), mul(mu_inv, f))
    if psi.is_zero():
        return mu_inv, {"n": 0}
    vpsi = gauss_value(psi)
    if not vpsi.sign() > 0:
        raise InverseNotApproximable("lead monomial does not dominate")
    n = 0
    while not vpsi.scaled(n + 1) > alpha:
        n += 1
        if n > 100000:
            raise InverseNotApproximable("geometric exponent out of range")
    geom = LaurentPoly.one(cfg)
    power = LaurentPoly.one(cfg)
    for _ in range(n):
        power = mul(power, psi)
        geom = add(geom, power)
    ftilde = mul(mu_inv, geom)
    resid = sub(LaurentPoly.one(cfg), mul(f, ftilde))
    if not is_zero_to(resid, alpha, strict=True):
        raise PrecisionExhausted(
            "inverse could not be certified at the requested level")
    return ftilde, {"n": n}


# ---------------------------------------------------------------------------
# ring adapter for the one-unit calculus
# ---------------------------------------------------------------------------

class LaurentRing:
    is_laurent = True

    def __init__(self, cfg: ValConfig):
        self.cfg = cfg
        self.p = cfg.p

    def zero(self):
        return LaurentPoly.zero(self.cfg)

    def one(self):
        return LaurentPoly.one(self.cfg)

    def from_int(self, n):
        return LaurentPoly.const(self.cfg, self.cfg.model.from_int(n))

    def add(self, a, b):
        return add(a, b)

    def sub(self, a, b):
        return sub(a, b)

    def mul(self, a, b):
        return mul(a, b)

    def neg(self, a):
        return neg(a)

    def frobenius(self, a):
        return pth_power(a)

    def value(self, a) -> Value:
        return gauss_value(a)

    def value_lower_bound(self, a):
        if a.is_zero():
            return None
        model = self.cfg.model
        best = None
        for i, exact, bound in _term_bounds(a):
            if bound is None:
                return None
            if best is None or bound < best:
                best = bound
        return best

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def is_zero_to(self, a, alpha: Value) -> bool:
        return is_zero_to(a, alpha)

    def certified_zero_level(self, a):
        """Largest alpha with a = O(alpha); None when a is exactly zero."""
        if a.is_zero():
            return None
        model = self.cfg.model
        best = None
        for i, c in a.terms.items():
            xpart = self.cfg.vx.scaled(i)
            if model.characteristic == "equal":
                lv = Value.of(model.value_fraction(c)) + xpart
                if best is None or lv < best:
                    best = lv
            else:
                if c.digits:
                    lv = Value.of(c.digits[0][0]) + xpart
                    if best is None or lv < best:
                        best = lv
                if c.cutoff is not None:
                    lv = Value.of(c.cutoff) + xpart
                    if best is None or lv < best:
                        best = lv
        return best

    def inv_approx(self, a, alpha):
        ftilde, _ = approx_inverse(a, alpha)
        return ftilde

    def split_above(self, a, alpha):
        return split_above(a, alpha)

    def C(self):
        return LaurentPoly.const(self.cfg, self.cfg.model.C)

    def C_power(self, k: int):
        return LaurentPoly.const(self.cfg, self.cfg.model.C_power(k))

    def scale_int(self, a, n):
        return scale(a, self.cfg.model.from_int(n))

    def pretty(self, a):
        return pretty(a)


# ---------------------------------------------------------------------------
# serialization and display
# ---------------------------------------------------------------------------

def to_json(f):
    model = f.cfg.model
    return {"terms": {str(i): model.to_json(c)
                      for i, c in sorted(f.terms.items())}}


def from_json(cfg, data):
    model = cfg.model
    return LaurentPoly.make(
        cfg, [(int(i), model.from_json(c)) for i, c in data["terms"].items()])


def pretty(f) -> str:
    if f.is_zero():
        return "0"
    model = f.cfg.model
    parts = []
    for i in sorted(f.terms):
        c = model.pretty(f.terms[i])
        if i == 0:
            parts.append(c)
        else:
            xs = "x" if i == 1 else f"x^{i}"
            parts.append(xs if c == "1" else f"({c})*{xs}")
    return " + ".join(parts)
