"""Input grammar for generator expressions.

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' exponent]
    atom   := 'x' | 't' | 'g' | integer | '(' expr ')'
    exponent := '(' rational ')' | integer
    rational := ['-'] digits ['/' digits]

Exponents on x must be integers.  In equal characteristic `t` is the
uniformizer, integer literals are residue-field codes and `g` is the
residue-field generator.  In mixed characteristic integer literals are
integers of the coefficient ring, fractional exponents are only allowed
on the base p, and `g` is the Teichmueller lift of the residue generator.

Every parsed piece is a Laurent polynomial, so products and parenthesized
sums compose with the exact ring arithmetic.
"""

from fractions import Fraction

from . import laurent
from .errors import DslSyntaxError, RationalExponentOnX
from .laurent import LaurentPoly


def parse_element(text: str, cfg) -> LaurentPoly:
    parser = _Parser(text, cfg)
    out = parser.expr()
    parser.skip_ws()
    if parser.pos != len(text):
        raise DslSyntaxError(parser.pos, "'+', '-', '*' or end of input",
                             text[parser.pos])
    return out


class _Parser:
    def __init__(self, text, cfg):
        self.text = text
        self.cfg = cfg
        self.model = cfg.model
        self.pos = 0

    # -- character plumbing -------------------------------------------------

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch):
        if not self.take(ch):
            raise DslSyntaxError(self.pos, repr(ch), self.peek())

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            raise DslSyntaxError(start, "an integer", self.peek())
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        num = self.integer()
        if self.take("/"):
            den = self.integer()
            if den == 0:
                raise DslSyntaxError(self.pos, "a nonzero denominator")
            return Fraction(num, den)
        return Fraction(num)

    # -- grammar ------------------------------------------------------------

    def expr(self) -> LaurentPoly:
        negate = False
        if self.peek() == "-":
            self.pos += 1
            negate = True
        acc = self.term()
        if negate:
            acc = laurent.neg(acc)
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                acc = laurent.add(acc, self.term())
            elif c == "-":
                self.pos += 1
                acc = laurent.sub(acc, self.term())
            else:
                return acc

    def term(self) -> LaurentPoly:
        acc = self.factor()
        while self.take("*"):
            acc = laurent.mul(acc, self.factor())
        return acc

    def factor(self) -> LaurentPoly:
        c = self.peek()
        start = self.pos
        if c == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            if self.peek() == "^":
                self.pos += 1
                e = self._exponent(start)
                if e.denominator != 1 or e < 0:
                    raise DslSyntaxError(
                        start, "a nonnegative integer power on a sum")
                return laurent.int_power(inner, int(e))
            return inner
        if c == "x":
            self.pos += 1
            e = Fraction(1)
            if self.peek() == "^":
                self.pos += 1
                e = self._exponent(start)
            if e.denominator != 1:
                raise RationalExponentOnX(start)
            return LaurentPoly.monomial(self.cfg, self.model.one(), int(e))
        if c == "t":
            self.pos += 1
            if self.model.characteristic != "equal":
                raise DslSyntaxError(
                    start, "no t in mixed characteristic", "t")
            e = Fraction(1)
            if self.peek() == "^":
                self.pos += 1
                e = self._exponent(start)
            return LaurentPoly.const(self.cfg, self.model.t_power(e))
        if c == "g":
            self.pos += 1
            gen = self.model.gf.generator
            if self.model.characteristic == "equal":
                coeff = self.model.const(gen)
            else:
                coeff = self.model.monomial(gen, Fraction(0))
            base = LaurentPoly.const(self.cfg, coeff)
            if self.peek() == "^":
                self.pos += 1
                e = self._exponent(start)
                if e.denominator != 1 or e < 0:
                    raise DslSyntaxError(
                        start, "a nonnegative integer power on g")
                return laurent.int_power(base, int(e))
            return base
        if c.isdigit():
            n = self.integer()
            if self.peek() == "^":
                self.pos += 1
                e = self._exponent(start)
                return self._int_power(n, e, start)
            return self._int_literal(n, start)
        raise DslSyntaxError(self.pos, "'x', 't', 'g', a number or '('",
                             c or "end of input")

    def _exponent(self, start) -> Fraction:
        if self.take("("):
            e = self.rational()
            self.expect(")")
            return e
        return Fraction(self.integer())

    def _int_literal(self, n, start) -> LaurentPoly:
        model = self.model
        if model.characteristic == "equal":
            if not 0 <= n < model.gf.q:
                raise DslSyntaxError(
                    start, f"a residue code below {model.gf.q}", str(n))
            return LaurentPoly.const(self.cfg, model.const(n))
        return LaurentPoly.const(self.cfg, model.from_int(n))

    def _int_power(self, n, e, start) -> LaurentPoly:
        model = self.model
        if model.characteristic == "equal":
            if e.denominator != 1 or e < 0:
                raise DslSyntaxError(
                    start, "a nonnegative integer power on a residue code")
            code = model.gf.pow(model.gf.check(n), int(e))
            return LaurentPoly.const(self.cfg, model.const(code))
        if n == model.p:
            model.request_denominator(e.denominator)
            return LaurentPoly.const(self.cfg, model.monomial(1, e))
        if e.denominator != 1:
            raise DslSyntaxError(
                start, f"a fractional exponent only on the base {model.p}")
        if e < 0:
            raise DslSyntaxError(
                start, f"a nonnegative exponent on the base {n}")
        return LaurentPoly.const(self.cfg, model.from_int(n ** int(e)))


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------

def _code_str(gf, code: int):
    """A residue code as an expression in the generator g."""
    if code < gf.p:
        return str(code), True
    parts = []
    rest = code
    i = 0
    while rest:
        digit = rest % gf.p
        rest //= gf.p
        if digit:
            if i == 0:
                parts.append(str(digit))
            else:
                gi = "g" if i == 1 else f"g^{i}"
                parts.append(gi if digit == 1 else f"{digit}*{gi}")
        i += 1
    return " + ".join(parts), len(parts) == 1


def _coeff_terms_equal(model, c):
    fn = c.fn
    den = fn.den
    nonzero = [i for i, code in enumerate(den.coeffs) if code]
    if len(nonzero) != 1 or den.coeffs[nonzero[0]] != 1:
        raise ValueError("coefficient with denominator is not printable")
    down = nonzero[0]
    scale = model.p ** c.depth
    out = []
    for i, code in enumerate(fn.num.coeffs):
        if code == 0:
            continue
        cs, atomic = _code_str(model.gf, code)
        exp = Fraction(i - down, scale)
        if exp == 0:
            out.append((cs, atomic, False))
        else:
            t = f"t^({exp})"
            if code == 1:
                out.append((t, True, False))
            else:
                cs = cs if atomic else f"({cs})"
                out.append((f"{cs}*{t}", True, False))
    return out


def _digit_str(model, d):
    """An expression whose parse is the lifted digit, with a sign flag.

    Integer literals lift positionally, not digit-wise, so a digit other
    than 0 or 1 must be spelled as a power of g (primitive when r > 1) or,
    on a prime field, as the negative of 1."""
    gf = model.gf
    if d == 1:
        return "1", False
    if gf.r > 1:
        k, acc = 1, gf.generator
        while acc != d and k < gf.q - 1:
            acc = gf.mul(acc, gf.generator)
            k += 1
        if acc != d:
            raise ValueError(f"digit {d} is not a power of g")
        return ("g" if k == 1 else f"g^{k}"), False
    if model.p > 2 and d == model.p - 1:
        return "1", True
    raise ValueError(f"digit {d} is not printable")


def _coeff_terms_mixed(model, c):
    if c.cutoff is not None:
        raise ValueError("coefficient with a precision marker is not "
                         "printable")
    out = []
    for g, d in c.digits:
        ds, neg = _digit_str(model, d)
        if g == 0:
            out.append((ds, True, neg))
        else:
            pw = f"{model.p}^({g})"
            if ds == "1":
                out.append((pw, True, neg))
            else:
                out.append((f"{ds}*{pw}", True, neg))
    return out


def print_element(f: LaurentPoly) -> str:
    """Canonical text for an element; parse_element inverts it exactly.

    Raises ValueError on coefficients outside the input grammar
    (denominators, precision markers)."""
    model = f.cfg.model
    if f.is_zero():
        return "0"
    parts = []
    for i in sorted(f.terms):
        c = f.terms[i]
        if model.characteristic == "equal":
            terms = _coeff_terms_equal(model, c)
        else:
            terms = _coeff_terms_mixed(model, c)
        if not terms:
            continue
        if i == 0:
            parts.extend((s, neg) for s, _, neg in terms)
            continue
        xs = "x" if i == 1 else f"x^({i})"
        if len(terms) == 1:
            s, atomic, neg = terms[0]
            if s == "1":
                parts.append((xs, neg))
            else:
                s = s if atomic else f"({s})"
                parts.append((f"{s}*{xs}", neg))
        else:
            joined = _join_signed(terms)
            parts.append((f"({joined})*{xs}", False))
    return _join_signed([(s, True, neg) for s, neg in parts]) or "0"


def _join_signed(terms):
    pieces = []
    for s, _, neg in terms:
        if not pieces:
            pieces.append(f"-{s}" if neg else s)
        else:
            pieces.append(f"- {s}" if neg else f"+ {s}")
    return " ".join(pieces)
