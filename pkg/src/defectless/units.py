"""Calculus of 1-units and approximate roots.

Equal characteristic: truncated Frobenius orbit sums give approximate roots
of X^p - X - a with an exactly known defect term.

Mixed characteristic: a 1-unit 1 + b whose level v(b) lies strictly above
p/(p-1) (normalizing vp = 1) has a p-th root 1 + C*y, where C is the
constant with C^(p-1) = -p and y solves

    y^p + g(y) - y = b / C^p,      g(y) = sum_{2<=i<p} binom(p,i) C^(i-p) y^i.

The root with residue-0 y is found by the contraction y <- y + f(y),
which gains at least 1/(p-1) in value per round, and is the one every
rewriting rule uses.  Boundary level exactly p/(p-1) is refused: a root
need not exist there.

Four rewriting moves on 1-units, each returning a certificate that the
original equals the replacement times the p-th power of an explicit
witness, checked to a recorded value level:

* truncate-tail: discard the part of b strictly above p/(p-1);
* split-product: factor off a chosen summand, 1+b = (1+c)(1+s);
* drop-unit: replace the whole unit by 1 when its level clears p/(p-1);
* shift-p-term: absorb a summand c^p, trading it for -p*c at a lower level.

All routines work over an abstract ring adapter (coefficient model or
Laurent ring) providing exact value comparisons and certified vanishing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (LevelTooLow, NotAOneUnit, PositiveValueRequired,
                     PrecisionExhausted, RuleNotApplicable)
from .values import Value


def low_level_bound(p: int) -> Value:
    """1/(p-1) times vp: levels above this admit the rewriting rules."""
    return Value.of(Fraction(1, p - 1))


def high_level_bound(p: int) -> Value:
    """p/(p-1) times vp: levels strictly above this admit p-th roots."""
    return Value.of(Fraction(p, p - 1))


def _pow(ring, a, n: int):
    out = ring.one()
    for _ in range(n):
        out = ring.mul(out, a)
    return out


def unit_level(u, ring) -> Value:
    b = ring.sub(u, ring.one())
    if ring.is_zero(b):
        raise NotAOneUnit("the element is exactly 1")
    lvl = ring.value(b)
    if not lvl.sign() > 0:
        raise NotAOneUnit(f"level {lvl} is not positive")
    return lvl


def geometric_inverse(b, ring, upto: Value):
    """Inverse of 1 + b as the alternating geometric sum, truncated above
    upto at every step.

    Requires v(b) > 0.  Truncating each partial power keeps the supports
    down to the value lattice below upto, which matters when v(b) sits
    barely above zero and a relative-error iteration would churn.  The
    truncation error surfaces in whatever certified check the caller
    performs on the product.
    """
    if ring.is_zero(b):
        return ring.one()
    if not ring.value(b) > Value.zero():
        raise PositiveValueRequired("geometric inversion needs v(b) > 0")
    out = ring.one()
    term = ring.one()
    mb = ring.neg(b)
    for _ in range(100000):
        term, _ = ring.split_above(ring.mul(term, mb), upto)
        if ring.is_zero(term):
            return out
        out = ring.add(out, term)
    raise RuntimeError("geometric inversion failed to settle")


# ---------------------------------------------------------------------------
# equal characteristic: Frobenius orbit sums
# ---------------------------------------------------------------------------

@dataclass
class RootApprox:
    """chi with chi^p - chi - a = defect, exactly; v(defect) = defect_level."""
    chi: object
    n: int
    defect: object
    defect_level: Value


def as_root_approx(a, alpha: Value, ring) -> RootApprox:
    """Approximate root of X^p - X - a for v(a) > 0, defect above alpha.

    chi = -(a + a^p + ... + a^(p^n)) with the smallest n such that
    p^(n+1) * v(a) > alpha; then chi^p - chi - a = -a^(p^(n+1)) exactly."""
    va = ring.value(a)
    if not va.sign() > 0:
        raise PositiveValueRequired(
            f"orbit sums need v(a) > 0, got {va}")
    p = ring.p
    n = 0
    while not va.scaled(p ** (n + 1)) > alpha:
        n += 1
        if n > 64:
            raise PositiveValueRequired("defect target out of reach")
    theta = a
    power = a
    for _ in range(n):
        power = ring.frobenius(power)
        theta = ring.add(theta, power)
    chi = ring.neg(theta)
    defect = ring.neg(ring.frobenius(power))
    return RootApprox(chi=chi, n=n, defect=defect,
                      defect_level=va.scaled(p ** (n + 1)))


# ---------------------------------------------------------------------------
# mixed characteristic: transformed Hensel iteration
# ---------------------------------------------------------------------------

def _unit_poly(ring, y, rhs):
    """f(y) = y^p + g(y) - y - rhs."""
    p = ring.p
    powers = [ring.one(), y]
    for _ in range(p - 1):
        powers.append(ring.mul(powers[-1], y))
    f = ring.sub(ring.sub(powers[p], y), rhs)
    for i in range(2, p):
        coef = ring.C_power(i - p)
        f = ring.add(f, ring.scale_int(ring.mul(coef, powers[i]), math.comb(p, i)))
    return f


def solve_unit_equation(ring, rhs, y0: int, target: Value = None):
    """Solve y^p + g(y) - y = rhs from the initial residue y0.

    f'(y) = -1 + (p*y^(p-1) + g'(y)) and the parenthesis has positive
    value: every binomial coefficient in g carries a factor p.  So the
    undamped step y <- y + f(y) contracts the error by at least
    1/(p-1) in value per round and no inverses are needed.

    Returns (y, achieved): the certified vanishing level of f(y), or None
    when it vanished exactly.  Stops at the target level or when the
    working precision saturates."""
    y = ring.from_int(y0) if y0 else ring.zero()
    prev = None
    achieved = None
    for _ in range(120):
        f = _unit_poly(ring, y, rhs)
        lvl = ring.certified_zero_level(f)
        if lvl is None:
            return y, None
        achieved = lvl
        if target is not None and ring.is_zero_to(f, target):
            return y, lvl
        if prev is not None and not lvl > prev:
            return y, lvl
        prev = lvl
        y = ring.add(y, f)
    return y, achieved


def pth_root_high_level(u, ring, target: Value = None):
    """p-th root 1 + C*y of a 1-unit of level strictly above p/(p-1).

    Returns (w, achieved): achieved is the certified vanishing level of
    w^p - u, or None when exact."""
    b = ring.sub(u, ring.one())
    if ring.is_zero(b):
        return ring.one(), None
    lvl = ring.value(b)
    hi = high_level_bound(ring.p)
    if not lvl > hi:
        if lvl == hi:
            raise LevelTooLow(
                "level equals p/(p-1); a p-th root need not exist there")
        raise LevelTooLow(f"level {lvl} is below p/(p-1) = {hi}")
    rhs = ring.mul(b, ring.C_power(-ring.p))
    y_target = None if target is None else target - hi
    y, y_achieved = solve_unit_equation(ring, rhs, 0, y_target)
    w = ring.add(ring.one(), ring.mul(ring.C_power(1), y))
    diff = ring.sub(_pow(ring, w, ring.p), u)
    return w, ring.certified_zero_level(diff)


# ---------------------------------------------------------------------------
# rewriting moves
# ---------------------------------------------------------------------------

@dataclass
class UnitRewrite:
    """One licensed move: before ~ after modulo a p-th power.

    Replay formula by rule:
      shift-p-term: before - after * witness^p
      split-product: before - aux["factor"] * after
      truncate-tail, drop-unit: before - after, and the rule is licensed
        exactly when that difference clears p/(p-1); the forgotten unit
        then has a p-th root by the transformed Hensel argument, so no
        witness is stored.
    checked_to None means the relation holds exactly as tracked."""
    rule: str
    before: object
    after: object
    witness: object
    checked_to: object
    aux: dict = field(default_factory=dict)


def rewrite_diff(rw: UnitRewrite, ring):
    """The replay difference of a rewrite, recomputed from its fields."""
    if rw.rule == "split-product":
        return ring.sub(rw.before, ring.mul(rw.aux["factor"], rw.after))
    if rw.witness is None:
        return ring.sub(rw.before, rw.after)
    return ring.sub(rw.before, ring.mul(rw.after, _pow(ring, rw.witness, ring.p)))


def rule_truncate(u, ring):
    """Drop the part of the unit strictly above level p/(p-1)."""
    hi = high_level_bound(ring.p)
    b = ring.sub(u, ring.one())
    keep, drop = ring.split_above(b, hi)
    if ring.is_zero(drop):
        raise RuleNotApplicable("no tail strictly above p/(p-1)")
    after = ring.add(ring.one(), keep)
    rw = UnitRewrite("truncate-tail", u, after, None, None)
    rw.checked_to = ring.certified_zero_level(rewrite_diff(rw, ring))
    return after, rw


def rule_split(u, c, ring, alpha: Value):
    """Factor the summand c out of u = 1 + b: u = (1+c)(1+s) with
    s = (b-c)/(1+c), the product relation certified to alpha."""
    b = ring.sub(u, ring.one())
    one = ring.one()
    factor = ring.add(one, c)
    s = ring.mul(ring.sub(b, c), ring.inv_approx(factor, alpha))
    after = ring.add(one, s)
    rw = UnitRewrite("split-product", u, after, None, None, {"factor": factor})
    rw.checked_to = ring.certified_zero_level(rewrite_diff(rw, ring))
    return factor, after, rw


def rule_drop(u, ring):
    """Replace the whole unit by 1; its level must clear p/(p-1)."""
    hi = high_level_bound(ring.p)
    lvl = ring.certified_zero_level(ring.sub(u, ring.one()))
    if lvl is not None and not lvl > hi:
        raise RuleNotApplicable(f"level {lvl} does not clear p/(p-1) = {hi}")
    rw = UnitRewrite("drop-unit", u, ring.one(), None, None)
    rw.checked_to = lvl
    return ring.one(), rw


def rule_shift(u, c, ring, alpha: Value):
    """Absorb the summand c^p: after = u * (1+c)^(-p), trading c^p for
    -p*c plus cross terms.  The witness 1+c is explicit, so any c of
    positive value is licensed; above 1/(p-1) the traded term -p*c leads,
    below it the trade strictly raises the level at that slot."""
    vc = ring.value(c)
    if not vc > Value.zero():
        raise RuleNotApplicable(f"v(c) = {vc} is not positive")
    w = ring.add(ring.one(), c)
    wp = _pow(ring, w, ring.p)
    after = ring.mul(u, geometric_inverse(ring.sub(wp, ring.one()), ring, alpha))
    rw = UnitRewrite("shift-p-term", u, after, w, None)
    rw.checked_to = ring.certified_zero_level(rewrite_diff(rw, ring))
    return after, rw
