"""Normalization over the Gauss valuation with v(x) = 0.

The residue of x is transcendental over the constant field, so degree-p
extensions reveal themselves through the residue field: a purely
inseparable residue extension generated by a p-th root of the leading
slice, a separable Artin-Schreier residue extension at the boundary
level, or (mixed characteristic) a value-group extension when the level
of the unit part leaves the ground value group.

A slice is the residue data of a Laurent polynomial at one level: the
map from x-exponents to the residue codes of the coefficients whose
value sits exactly there.  Slices live in the residue function field,
where Weierstrass reduction and p-th root extraction are exact.

Artin-Schreier generators are reduced by exact Weierstrass shifts.
Kummer generators are reduced multiplicatively: exact monomial factors
come out directly and the 1-unit part climbs by witnessed (1+c)^(-p)
shifts until its lowest slice is certifiably obstructed.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from . import laurent
from .coeff import CoeffRing
from .engine_vt import Classification, _by_value
from .errors import (ConfigMismatch, RootNotRepresentable, RuleNotApplicable,
                     ZeroGenerator)
from .fields import (artin_schreier_preimage, slice_is_pth_power,
                     weier_reduce_laurent)
from .laurent import LaurentPoly, LaurentRing
from .units import (UnitRewrite, as_root_approx, geometric_inverse,
                    high_level_bound, rewrite_diff, rule_shift, rule_truncate)
from .values import SubgroupSpec, Value


# ---------------------------------------------------------------------------
# slices
# ---------------------------------------------------------------------------

def residue_slice(f: LaurentPoly, level: Fraction) -> dict:
    """x-exponent -> residue code of the coefficients at exactly level."""
    cfg = f.cfg
    model = cfg.model
    out = {}
    for i, c in f.terms.items():
        if model.characteristic == "equal":
            if model.value_fraction(c) == level:
                code = model.residue_code(model.mul(c, model.t_power(-level)))
                if code:
                    out[i] = code
        else:
            if c.digits and c.digits[0][0] == level:
                out[i] = c.digits[0][1]
    return out


def _slice_lift_equal(cfg, sl: dict, level: Fraction) -> LaurentPoly:
    model = cfg.model
    return LaurentPoly.make(cfg, [
        (i, model.monomial(code, level)) for i, code in sl.items()])


# ---------------------------------------------------------------------------
# constant generators, equal characteristic
# ---------------------------------------------------------------------------

@dataclass
class DescentRecord:
    """Canonical form of a constant Artin-Schreier summand.

    The input equals constant + tail plus the exact Weierstrass shifts
    recorded in steps.  kind records why the reduction stopped:
      negative-lead: v(constant) < 0 with numerator prime to p, so every
        further root would leave the current depth;
      residue-obstruction: v = 0 and the residue sits outside the
        prime-field Weierstrass image;
      cleared: nothing at or below the working level remains.
    """
    constant: object
    kind: str
    steps: list
    tail: object
    note: str


def descend_constant(c, model, alpha: Value) -> DescentRecord:
    if model.characteristic != "equal":
        raise ConfigMismatch("constant descent runs in equal characteristic")
    ring = CoeffRing(model)
    p = model.p
    gf = model.gf
    level = alpha.a if alpha.b == 0 else Fraction(model.N)
    steps = []
    work = c
    tail = model.zero()
    kind = "cleared"
    for _ in range(10000):
        if model.is_zero_elem(work):
            break
        v = model.value_fraction(work)
        if v > 0:
            if v <= level:
                ra = as_root_approx(work, Value.of(level), ring)
                shift = model.sub(model.pth_power(ra.chi), ra.chi)
                work = model.sub(work, shift)
                steps.append({"kind": "strip", "chi": ra.chi})
            tail = work
            work = model.zero()
            break
        if v == 0:
            d = model.residue_code(work)
            e = artin_schreier_preimage(gf, d)
            if e is None:
                kind = "residue-obstruction"
                break
            el = model.const(e)
            work = model.sub(work, model.sub(model.pth_power(el), el))
            steps.append({"kind": "residue", "e": e})
            continue
        num = v.numerator
        if num % p:
            kind = "negative-lead"
            break
        lc = model.residue_code(model.mul(work, model.t_power(-v)))
        s = model.monomial(gf.pth_root(lc), v / p)
        work = model.sub(work, model.sub(model.pth_power(s), s))
        steps.append({"kind": "shift", "s": s})
    else:
        raise RuntimeError("constant descent failed to settle")
    notes = {
        "cleared": "constant absorbed into Weierstrass shifts",
        "negative-lead": "canonical negative lead; the divisible hull "
                         "swallows every value this summand could witness",
        "residue-obstruction": "residue outside the prime-field "
                               "Weierstrass image",
    }
    return DescentRecord(work, kind, steps, tail, notes[kind])


# ---------------------------------------------------------------------------
# Artin-Schreier, equal characteristic
# ---------------------------------------------------------------------------

@dataclass
class ASRTNormalForm:
    input_poly: LaurentPoly
    poly: LaurentPoly
    constant_record: object
    tail: LaurentPoly
    steps: list
    classification: Classification
    strip_level: Value
    cfg: object


def normalize_artin_schreier_rt(a: LaurentPoly, cfg,
                                alpha: Value = None) -> ASRTNormalForm:
    if cfg.mode != "rt":
        raise ConfigMismatch("this normalization runs over the rt valuation")
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
            if i != 0 and i % p == 0 and model.value_fraction(work.terms[i]) < 0:
                target = i
                break
        if target is not None:
            c = work.terms[target]
            root = LaurentPoly.monomial(cfg, model.pth_root(c), target // p)
            shift = laurent.sub(laurent.pth_power(root), root)
            work = laurent.sub(work, shift)
            steps.append({"kind": "peel", "root": root})
            continue
        sl = residue_slice(work, Fraction(0))
        g, rem = weier_reduce_laurent(sl, model.gf)
        if g:
            lift = _slice_lift_equal(cfg, g, Fraction(0))
            shift = laurent.sub(laurent.pth_power(lift), lift)
            work = laurent.sub(work, shift)
            steps.append({"kind": "residue-reduce", "lift": lift})
            continue
        break
    else:
        raise RuntimeError("normalization failed to settle")

    record = None
    cls = _classify_as_rt(cfg, work)
    if cls.kind == "constant-descent":
        record = descend_constant(work.coeff(0), model, alpha)
        rest = LaurentPoly(cfg, {i: c for i, c in work.terms.items() if i})
        if record.kind == "residue-obstruction":
            cls = Classification(
                kind="sep-residue",
                residue_witness={"slice": {0: model.residue_code(
                    record.constant)}, "level": Fraction(0)},
                e=1, f=p,
                note="constant residue outside the prime-field image",
                witness_of="constant")
        elif record.kind == "cleared":
            cls = _classify_as_rt(cfg, rest)
        elif not rest.is_zero():
            sub_cls = _classify_as_rt(cfg, rest)
            cls = Classification(
                kind="mixed-descent",
                note=f"constant leads; the x-part alone would classify "
                     f"as {sub_cls.kind}")
        else:
            cls = Classification(kind="constant-descent", note=record.note)
    return ASRTNormalForm(a, work, record, tail, steps, cls, alpha, cfg)


def _classify_as_rt(cfg, work) -> Classification:
    model = cfg.model
    p = cfg.p
    if work.is_zero():
        return Classification(kind="trivial",
                              note="the generator is a Weierstrass image up "
                                   "to the tracked tail")
    gamma = laurent.gauss_value(work).a
    sl = residue_slice(work, gamma)
    if gamma < 0:
        if set(sl) == {0}:
            return Classification(kind="constant-descent",
                                  note="constant term leads")
        return Classification(
            kind="insep-residue",
            residue_witness={"slice": sl, "level": gamma},
            e=1, f=p,
            note="leading slice is not a p-th power",
            witness_of="x_part")
    return Classification(
        kind="sep-residue",
        residue_witness={"slice": sl, "level": Fraction(0)},
        e=1, f=p,
        note="residue outside the Weierstrass image of the residue field",
        witness_of="x_part")


# ---------------------------------------------------------------------------
# Kummer, mixed characteristic
# ---------------------------------------------------------------------------

@dataclass
class KummerRTNormalForm:
    input_poly: LaurentPoly
    scale_exp: Fraction
    absorbed: list
    unit: LaurentPoly
    rewrites: list
    steps: list
    classification: Classification
    cfg: object


def normalize_kummer_rt(a: LaurentPoly, cfg,
                        alpha: Value = None) -> KummerRTNormalForm:
    if cfg.mode != "rt":
        raise ConfigMismatch("this normalization runs over the rt valuation")
    model = cfg.model
    if model.characteristic != "mixed":
        raise ConfigMismatch("Kummer generators live in mixed characteristic")
    if a.is_zero():
        raise ZeroGenerator("the zero generator defines a trivial extension")
    p = cfg.p
    gf = model.gf
    if alpha is None:
        alpha = high_level_bound(p) + Value.of(2)
    lring = LaurentRing(cfg)
    steps = []
    absorbed = []

    def spec():
        return SubgroupSpec.of(Value.of(Fraction(1, model.denom_cap)))

    gamma = laurent.gauss_value(a).a
    try:
        model.request_denominator((gamma / p).denominator)
    except RootNotRepresentable:
        cls = Classification(
            kind="value-witness", witness=Value.of(gamma / p),
            value_group=spec(), e=p, f=1,
            note="the value of the generator resists p-divisibility",
            witness_of="input")
        return KummerRTNormalForm(a, gamma, absorbed, a, [], steps, cls, cfg)
    work = a
    if gamma:
        work = laurent.scale(a, model.monomial(1, -gamma))
        steps.append({"kind": "scale", "exp": gamma})
        absorbed.append(("monomial", 1, gamma, 0))

    sl = residue_slice(work, Fraction(0))
    root = slice_is_pth_power(sl, gf)
    if root is None:
        cls = Classification(
            kind="insep-residue",
            residue_witness={"slice": sl, "level": Fraction(0)},
            e=1, f=p, value_group=spec(),
            note="residue of the scaled generator is not a p-th power",
            witness_of="unit_start")
        return KummerRTNormalForm(a, gamma, absorbed, work, [], steps,
                                  cls, cfg)
    if len(sl) == 1:
        # a monomial residue divides out exactly: a p-th power of a
        # shift in x times a rooted constant
        (i0, d0), = sl.items()
        work = laurent.scale(laurent.shift_x(work, -i0),
                             model.monomial(gf.inv(d0), Fraction(0)))
        steps.append({"kind": "residue-monomial", "code": d0, "exp": i0})
        absorbed.append(("monomial", d0, Fraction(0), i0))
        work, rewrites, cls = _normalize_unit_rt(work, lring, cfg, alpha,
                                                 spec)
        return KummerRTNormalForm(a, gamma, absorbed, work, rewrites,
                                  steps, cls, cfg)
    cls = Classification(
        kind="power-residue",
        residue_witness={"slice": sl, "root": root},
        note="residue is a proper p-th power; dividing by its lift "
             "leaves the Laurent model, so only the factorization "
             "is recorded")
    return KummerRTNormalForm(a, gamma, absorbed, work, [], steps,
                              cls, cfg)


def _unit_entries(cfg, b):
    out = []
    for i, c in b.terms.items():
        for g, d in c.digits:
            out.append((Value.of(g), i, g, d))
    out.sort(key=functools.cmp_to_key(_by_value))
    return out


def _normalize_unit_rt(u, lring, cfg, alpha, spec):
    """Climb the 1-unit by witnessed shifts until its lowest slice is
    certifiably obstructed, then classify the obstruction."""
    model = cfg.model
    p = cfg.p
    gf = model.gf
    hi = high_level_bound(p)
    hi_frac = Fraction(p, p - 1)
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
            return u, rewrites, Classification(
                kind="trivial", note="the unit collapsed to 1; the "
                "generator was a p-th power times absorbed factors")
        entries = _unit_entries(cfg, b)
        if not entries:
            return u, rewrites, Classification(
                kind="trivial", note="only an uncertainty marker remains "
                "above the working level")
        gstar = entries[0][2]
        sl = {i: d for v, i, g, d in entries if g == gstar}
        if gstar == hi_frac:
            cls, u2 = _boundary_case(u, sl, lring, cfg, alpha, rewrites,
                                     spec)
            if cls is not None:
                return u2, rewrites, cls
            u = truncate_tail(u2)
            continue
        try:
            model.request_denominator((gstar / p).denominator)
        except RootNotRepresentable:
            return u, rewrites, Classification(
                kind="value-witness", witness=Value.of(gstar / p),
                value_group=spec(), e=p, f=1,
                note="slice level resists p-divisibility",
                witness_of="unit")
        root = slice_is_pth_power(sl, gf)
        if root is None:
            return u, rewrites, Classification(
                kind="insep-residue",
                residue_witness={"slice": sl, "level": gstar},
                e=1, f=p, value_group=spec(),
                note="lowest slice is not a p-th power",
                witness_of="unit")
        c = LaurentPoly.make(cfg, [
            (i, model.monomial(code, gstar / p)) for i, code in root.items()])
        u, rw = rule_shift(u, c, lring, alpha)
        rewrites.append(rw)
        u = truncate_tail(u)
    raise RuntimeError("unit normalization failed to settle")


def _boundary_case(u, sl, lring, cfg, alpha, rewrites, spec):
    """Level exactly p/(p-1): the residue Artin-Schreier equation of the
    slice scaled by C^(-p) decides between a separable residue extension
    and a further witnessed shift."""
    model = cfg.model
    p = cfg.p
    gf = model.gf
    cp = model.C_power(-p)
    code = cp.digits[0][1]
    scaled = {i: gf.mul(code, d) for i, d in sl.items()}
    g, rem = weier_reduce_laurent(scaled, gf)
    if g:
        lift = LaurentPoly.make(cfg, [
            (i, model.mul(model.C, model.monomial(e, Fraction(0))))
            for i, e in g.items()])
        w = laurent.add(LaurentPoly.one(cfg), lift)
        wp = laurent.int_power(w, p)
        one = LaurentPoly.one(cfg)
        inv = geometric_inverse(laurent.sub(wp, one), lring, alpha)
        after = laurent.mul(u, inv)
        rw = UnitRewrite("shift-p-term", u, after, w, None)
        rw.checked_to = lring.certified_zero_level(rewrite_diff(rw, lring))
        rewrites.append(rw)
        return None, after
    if not rem:
        return None, u
    return Classification(
        kind="sep-residue",
        residue_witness={"slice": rem, "level": Fraction(p, p - 1)},
        e=1, f=p, value_group=spec(),
        note="boundary residue equation has no Weierstrass solution",
        witness_of="unit"), u
