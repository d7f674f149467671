"""Normalization over the Gauss valuation with irrational v(x).

Every nonzero Laurent polynomial then has a unique minimal-value term, and
the engine drives a degree-p generator into a normal form whose minimal
term certifies a value-group extension of index p.

Artin-Schreier (equal characteristic, X^p - X - a):
  * summands of positive value are stripped by exact Frobenius orbit sums,
    leaving a tracked tail above the working level;
  * summands c*x^i of negative value with p | i are peeled exactly through
    c^(1/p) * x^(i/p);
  * the constant summand is reduced by in-depth p-th root shifts.
  Every step is an exact shift by a p-th power minus its root, so the trace
  replays to the input with no error term.

Kummer (mixed characteristic, X^p - a):
  * a = c * x^k * u with u a 1-unit; the x-power contributes k mod p;
  * the unit is rewritten by the licensed moves: tail truncation above
    p/(p-1), absorption of digit summands at p-divisible x-exponents into
    witnessed p-th powers, and extraction of constant factors;
  * each move carries a witness and a certified check level.

Classification attaches a value witness w with w outside the base value
group but p*w inside, or falls back to a constant descent record when the
minimal term is a constant.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from . import laurent
from .coeff import MixedElem
from .errors import (ConfigMismatch, DefectlessError, RuleNotApplicable,
                     ZeroGenerator)
from .laurent import LaurentPoly, LaurentRing
from .units import (as_root_approx, high_level_bound, rule_shift, rule_split,
                    rule_truncate)
from .values import SubgroupSpec, Value


@dataclass
class Classification:
    kind: str
    witness: Value = None
    value_group: SubgroupSpec = None
    residue_witness: object = None
    e: int = 1
    f: int = 1
    note: str = ""
    # the normal-form part the witness is recomputed from: "input",
    # "x_part" or "unit" for value witnesses (v(part)/p), "x_part",
    # "constant", "unit_start" or "unit" for residue slices
    witness_of: str = ""


@dataclass
class ASNormalForm:
    """Result of Artin-Schreier normalization: the input is equivalent to
    x_part + constant + tail modulo exact Weierstrass shifts recorded in
    steps (chi^p - chi for strips, root^p - root for peels)."""
    input_poly: LaurentPoly
    x_part: LaurentPoly
    constant: object
    constant_record: object
    tail: LaurentPoly
    steps: list
    classification: Classification
    strip_level: Value
    cfg: object


@dataclass
class KummerNormalForm:
    """Result of Kummer normalization: the input is ground * x^k * unit
    with every rewrite of the unit witnessed in rewrites.

    ground_start and unit_start are the two factors straight after the
    monomial split, before any rewriting; split_checked is the certified
    level of input - ground_start * x^k * unit_start, None when exact."""
    input_poly: LaurentPoly
    ground: object
    ground_root: object
    x_power: int
    x_residue: int
    unit: LaurentPoly
    rewrites: list
    classification: Classification
    cfg: object
    ground_start: object = None
    unit_start: LaurentPoly = None
    split_checked: Value = None


def _base_value_group(cfg, denom: int) -> SubgroupSpec:
    """The value group of the ground field together with Z * v(x)."""
    return SubgroupSpec.of(Value.of(Fraction(1, denom)), cfg.vx)


def _equal_char_denominator(cfg, polys) -> int:
    """p^dmax covering every coefficient depth appearing in the data."""
    dmax = 0
    for f in polys:
        for c in f.terms.values():
            dmax = max(dmax, c.depth)
    return cfg.p ** dmax


# ---------------------------------------------------------------------------
# Artin-Schreier, equal characteristic
# ---------------------------------------------------------------------------

def normalize_artin_schreier(a: LaurentPoly, cfg, alpha: Value = None) -> ASNormalForm:
    if cfg.mode != "vt":
        raise ConfigMismatch("this normalization runs over the vt valuation")
    model = cfg.model
    if model.characteristic != "equal":
        raise ConfigMismatch(
            "Artin-Schreier generators live in equal characteristic")
    if a.is_zero():
        raise ZeroGenerator("the zero generator defines a trivial extension")
    if alpha is None:
        alpha = Value.of(model.N)
    lring = LaurentRing(cfg)
    p = cfg.p
    zero_v = Value.zero()

    work = a
    tail = LaurentPoly.zero(cfg)
    steps = []
    for _ in range(100000):
        low, pos = laurent.split_above(work, zero_v)
        if not pos.is_zero():
            # positive part: subtract chi^p - chi for the orbit sum chi,
            # which replaces it by an exact defect above alpha
            ra = as_root_approx(pos, alpha, lring)
            shift = laurent.sub(laurent.pth_power(ra.chi), ra.chi)
            work = laurent.sub(work, shift)
            steps.append({"kind": "strip", "chi": ra.chi, "n": ra.n})
            keep, high = laurent.split_above(work, alpha)
            if not high.is_zero():
                tail = laurent.add(tail, high)
                work = keep
            continue
        target = None
        for i in sorted(work.terms):
            if i != 0 and i % p == 0:
                target = i
                break
        if target is None:
            break
        c = work.terms[target]
        root = LaurentPoly.monomial(cfg, model.pth_root(c), target // p)
        shift = laurent.sub(laurent.pth_power(root), root)
        work = laurent.sub(work, shift)
        steps.append({"kind": "peel", "root": root})
    else:
        raise RuntimeError("normalization failed to settle")

    constant = work.coeff(0)
    x_part = LaurentPoly(cfg, {i: c for i, c in work.terms.items() if i != 0})
    from .engine_rt import descend_constant
    record = None
    if not model.is_zero_elem(constant):
        record = descend_constant(constant, model, alpha)
        constant = record.constant

    cls = _classify_as_vt(cfg, x_part, constant, record, tail)
    return ASNormalForm(a, x_part, constant, record, tail, steps, cls,
                        alpha, cfg)


def _classify_as_vt(cfg, x_part, constant, record, tail) -> Classification:
    model = cfg.model
    p = cfg.p
    have_const = not model.is_zero_elem(constant)
    if not x_part.is_zero():
        j, cj = laurent.vt_lead(x_part)
        lead_v = laurent.term_value(cfg, j, cj)
        const_leads = (have_const and record.kind == "negative-lead"
                       and Value.of(model.value_fraction(constant)) < lead_v)
        if not const_leads:
            denom = _equal_char_denominator(
                cfg, [x_part, tail]) * (p ** (constant.depth if have_const else 0))
            group = _base_value_group(cfg, denom)
            return Classification(
                kind="value-witness",
                witness=lead_v.scaled(Fraction(1, p)),
                value_group=group, e=p, f=1,
                note=f"minimal term at exponent {j}",
                witness_of="x_part")
        return Classification(
            kind="mixed-descent",
            note="constant summand dominates the minimal x-term")
    if not have_const or record is None or record.kind == "cleared":
        return Classification(kind="trivial",
                              note="the generator is a Weierstrass image up "
                                   "to the tracked tail")
    if record.kind == "residue-obstruction":
        return Classification(
            kind="sep-residue",
            residue_witness={"slice": {0: model.residue_code(constant)},
                             "level": Fraction(0)},
            e=1, f=p,
            note="constant residue outside the prime-field image",
            witness_of="constant")
    return Classification(kind="constant-descent", note=record.note)


# ---------------------------------------------------------------------------
# Kummer, mixed characteristic
# ---------------------------------------------------------------------------

def _by_value(s, t):
    if s[0] < t[0]:
        return -1
    if t[0] < s[0]:
        return 1
    return 0


def _digit_monomials(cfg, b):
    """(value, exponent, digit-exponent, digit-code) for every tracked digit."""
    out = []
    for i, c in b.terms.items():
        for g, d in c.digits:
            out.append((Value.of(g) + cfg.vx.scaled(i), i, g, d))
    out.sort(key=functools.cmp_to_key(_by_value))
    return out


def normalize_kummer(a: LaurentPoly, cfg, alpha: Value = None) -> KummerNormalForm:
    if cfg.mode != "vt":
        raise ConfigMismatch("this normalization runs over the vt valuation")
    model = cfg.model
    if model.characteristic != "mixed":
        raise ConfigMismatch("Kummer generators live in mixed characteristic")
    if a.is_zero():
        raise ZeroGenerator("the zero generator defines a trivial extension")
    p = cfg.p
    if alpha is None:
        alpha = high_level_bound(p) + Value.of(2)
    lring = LaurentRing(cfg)

    ground, k, u = laurent.monomial_split(a)
    ground_start, unit_start = ground, u
    recombined = laurent.scale(laurent.shift_x(u, k), ground)
    split_checked = lring.certified_zero_level(laurent.sub(a, recombined))
    m = k % p
    u, rewrites = _normalize_unit_vt(u, lring, cfg, alpha)
    for rw in rewrites:
        # constant factors split off the unit rejoin the ground constant
        if rw.rule == "split-product":
            ground = model.mul(ground, rw.aux["factor"].coeff(0))

    try:
        ground_root = model.pth_root(ground)
    except DefectlessError:
        ground_root = None

    cls = _classify_kummer_vt(cfg, ground, ground_root, k, m, u)
    return KummerNormalForm(a, ground, ground_root, k, m, u, rewrites,
                            cls, cfg, ground_start, unit_start,
                            split_checked)


def _normalize_unit_vt(u, lring, cfg, alpha):
    """Drive the 1-unit into a form whose digits sit at x-exponents not
    divisible by p, below level p/(p-1), with no constant part."""
    model = cfg.model
    p = cfg.p
    hi = high_level_bound(p)
    rewrites = []

    def truncate_tail(u):
        try:
            u2, rw = rule_truncate(u, lring)
        except RuleNotApplicable:
            return u
        rewrites.append(rw)
        return u2

    u = truncate_tail(u)
    for _ in range(400):
        b = laurent.sub(u, LaurentPoly.one(cfg))
        if b.is_zero():
            break
        entries = _digit_monomials(cfg, b)
        bad = [(v, i, g, d) for v, i, g, d in entries if i != 0 and i % p == 0]
        if bad:
            v, i, g, d = bad[0]
            root_exp = g / p
            model.request_denominator(root_exp.denominator)
            c_elem = model.monomial(model.gf.pth_root(d), root_exp)
            c_poly = LaurentPoly.monomial(cfg, c_elem, i // p)
            u, rw = rule_shift(u, c_poly, lring, alpha)
            rewrites.append(rw)
            u = truncate_tail(u)
            continue
        c0 = b.coeff(0)
        if c0.digits:
            # factor the tracked constant digits out; any residual
            # uncertainty at the constant slot stays behind in s
            c0_exact = MixedElem(model, c0.digits, None)
            factor, u2, rw = rule_split(
                u, LaurentPoly.const(cfg, c0_exact), lring, alpha)
            rewrites.append(rw)
            u = truncate_tail(u2)
            continue
        break
    else:
        raise RuntimeError("unit normalization failed to settle")
    return u, rewrites


def _classify_kummer_vt(cfg, ground, ground_root, k, m, u) -> Classification:
    model = cfg.model
    p = cfg.p
    group = _base_value_group(cfg, model.denom_cap)
    if m != 0:
        w = (Value.of(model.value_fraction(ground))
             + cfg.vx.scaled(k)).scaled(Fraction(1, p))
        return Classification(kind="value-witness", witness=w,
                              value_group=group, e=p, f=1,
                              note=f"x-power residue {m} mod {p}",
                              witness_of="input")
    b = laurent.sub(u, LaurentPoly.one(cfg))
    lead = None
    for v, i, g, d in _digit_monomials(cfg, b):
        if i != 0:
            lead = (v, i)
            break
    if lead is not None:
        v, j = lead
        cls = Classification(kind="value-witness",
                             witness=v.scaled(Fraction(1, p)),
                             value_group=group, e=p, f=1,
                             note=f"unit lead at exponent {j}",
                             witness_of="unit")
        if ground_root is None:
            cls.note += "; ground constant root pending"
        return cls
    if ground_root is not None:
        return Classification(kind="trivial",
                              note="p-th power times a rooted constant")
    return Classification(kind="constant-root",
                          note="extension reduces to a ground constant root")
