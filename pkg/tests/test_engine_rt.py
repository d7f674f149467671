"""Normalization over the residue-transcendental valuation (v(x) = 0):
constant descent, slice reductions, and the multiplicative climb.
"""

import random
from fractions import Fraction

import pytest

from defectless import laurent
from defectless.certify import (slice_to_ratfunc, verify_residue_witness,
                                verify_value_witness)
from defectless.coeff import EqModel
from defectless.engine_rt import (descend_constant, normalize_artin_schreier_rt,
                                  normalize_kummer_rt, residue_slice)
from defectless.errors import ConfigMismatch
from defectless.fields import GaloisField, artin_schreier_preimage
from defectless.laurent import LaurentPoly, LaurentRing
from defectless.parser import parse_element
from defectless.units import rewrite_diff
from defectless.values import Value

from helpers import (eq_cfg, mx_cfg, nonzero, rand_eq_coeff, rand_eq_laurent,
                     rand_mixed_laurent)


# -- constant descent ----------------------------------------------------

def descent_replay(c, model, rec):
    total = model.add(rec.constant, rec.tail)
    for st in rec.steps:
        el = {"strip": lambda s: s["chi"],
              "shift": lambda s: s["s"],
              "residue": lambda s: model.const(s["e"])}[st["kind"]](st)
        total = model.add(total, model.sub(model.pth_power(el), el))
    return model.sub(c, total).is_zero()


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (2, 2)])
def test_descend_constant_random(p, r):
    rng = random.Random(300 + 10 * p + r)
    model = EqModel(GaloisField(p, r))
    for _ in range(150):
        c = nonzero(rand_eq_coeff, rng, model, -6, 6, 2, 3)
        rec = descend_constant(c, model, Value.of(model.N))
        assert descent_replay(c, model, rec)
        if rec.kind == "cleared":
            assert model.is_zero_elem(rec.constant)
        elif rec.kind == "negative-lead":
            v = model.value_fraction(rec.constant)
            assert v < 0 and v.numerator % p != 0
        elif rec.kind == "residue-obstruction":
            assert model.value_fraction(rec.constant) == 0
            code = model.residue_code(rec.constant)
            assert artin_schreier_preimage(model.gf, code) is None
        else:
            raise AssertionError(rec.kind)


def test_descend_constant_frozen():
    m2 = EqModel(GaloisField(2))
    rec = descend_constant(m2.monomial(1, -1), m2, Value.of(8))
    assert rec.kind == "negative-lead" and not rec.steps
    rec = descend_constant(m2.monomial(1, -2), m2, Value.of(8))
    assert rec.kind == "negative-lead"
    assert [s["kind"] for s in rec.steps] == ["shift"]
    assert m2.value_fraction(rec.constant) == Fraction(-1)
    # over F2 the residue 1 has no Weierstrass preimage
    rec = descend_constant(m2.const(1), m2, Value.of(8))
    assert rec.kind == "residue-obstruction"
    # over F4 it does, so the same constant clears
    m4 = EqModel(GaloisField(2, 2))
    rec = descend_constant(m4.const(1), m4, Value.of(8))
    assert rec.kind == "cleared"
    assert [s["kind"] for s in rec.steps] == ["residue"]
    # positive values strip into the tail
    rec = descend_constant(m2.monomial(1, 3), m2, Value.of(8))
    assert rec.kind == "cleared" and not m2.is_zero_elem(rec.tail)


# -- Artin-Schreier ------------------------------------------------------

def as_rt_replay(nf):
    total = laurent.add(nf.poly, nf.tail)
    key = {"strip": "chi", "peel": "root", "residue-reduce": "lift"}
    for st in nf.steps:
        el = st[key[st["kind"]]]
        total = laurent.add(total, laurent.sub(laurent.pth_power(el), el))
    return laurent.sub(nf.input_poly, total).is_zero()


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (2, 2)])
def test_as_rt_replay_and_classification(p, r):
    rng = random.Random(400 + 10 * p + r)
    cfg = eq_cfg(p, r, mode="rt")
    model = cfg.model
    n = 0
    while n < 120:
        a = nonzero(rand_eq_laurent, rng, cfg)
        nf = normalize_artin_schreier_rt(a, cfg)
        assert as_rt_replay(nf)
        cls = nf.classification
        if cls.kind == "trivial":
            assert nf.poly.is_zero() or nf.constant_record is not None
        elif cls.kind == "insep-residue":
            rw = cls.residue_witness
            assert rw["level"] < 0
            assert residue_slice(nf.poly, rw["level"]) == rw["slice"]
            r_fn = slice_to_ratfunc(rw["slice"], model.gf)
            assert verify_residue_witness("kummer", r_fn)
        elif cls.kind == "sep-residue":
            rw = cls.residue_witness
            assert rw["level"] == 0
            r_fn = slice_to_ratfunc(rw["slice"], model.gf)
            assert verify_residue_witness("artin-schreier", r_fn)
        elif cls.kind in ("mixed-descent", "constant-descent"):
            assert nf.constant_record is not None
        else:
            raise AssertionError(cls.kind)
        # the settled polynomial kept nothing the engine knows how to shift
        for i, c in nf.poly.terms.items():
            if i != 0 and i % p == 0:
                assert not model.value_fraction(c) < 0
        n += 1


def test_as_rt_frozen_kinds():
    cases = [
        ("t^(-1) + x", "mixed-descent", ""),
        ("t^(-1)*x", "insep-residue", "x_part"),
        ("x", "sep-residue", "x_part"),
        ("x^(2)", "sep-residue", "x_part"),
        ("t^(2)", "trivial", ""),
        ("t^(-1)", "constant-descent", ""),
    ]
    cfg = eq_cfg(2, mode="rt")
    for text, kind, src in cases:
        nf = normalize_artin_schreier_rt(parse_element(text, cfg), cfg)
        assert nf.classification.kind == kind, text
        assert nf.classification.witness_of == src, text


def test_as_rt_residue_reduce_step():
    # x^2 trades down to x through one residue reduction
    cfg = eq_cfg(2, mode="rt")
    nf = normalize_artin_schreier_rt(parse_element("x^(2)", cfg), cfg)
    assert [s["kind"] for s in nf.steps] == ["residue-reduce"]
    assert nf.classification.residue_witness["slice"] == {1: 1}


def test_as_rt_mode_guard():
    cfg = eq_cfg(2)
    with pytest.raises(ConfigMismatch):
        normalize_artin_schreier_rt(LaurentPoly.one(cfg), cfg)


# -- Kummer --------------------------------------------------------------

def check_kummer_rt(nf):
    cfg = nf.cfg
    model = cfg.model
    ring = LaurentRing(cfg)

    # absorbed monomial factors fold back onto the input: every tracked
    # digit cancels, only uncertainty markers inherited from the input
    # may survive
    start = nf.rewrites[0].before if nf.rewrites else nf.unit
    work = start
    for kind, code, exp, x in reversed(nf.absorbed):
        assert kind == "monomial"
        work = laurent.scale(laurent.shift_x(work, x),
                             model.monomial(code, Fraction(exp)))
    d = laurent.sub(nf.input_poly, work)
    assert not any(c.digits for c in d.terms.values())

    current = start
    for rw in nf.rewrites:
        assert laurent.to_json(rw.before) == laurent.to_json(current)
        d = rewrite_diff(rw, ring)
        if not d.is_zero():
            lvl = ring.certified_zero_level(d)
            assert rw.checked_to is not None
            assert lvl is not None and lvl >= rw.checked_to
        current = rw.after
    assert laurent.to_json(current) == laurent.to_json(nf.unit)

    cls = nf.classification
    if cls.kind == "value-witness":
        assert verify_value_witness(cls.witness, cls.value_group, cfg.p)
    elif cls.kind == "insep-residue":
        rw = cls.residue_witness
        r_fn = slice_to_ratfunc(rw["slice"], model.gf)
        assert verify_residue_witness("kummer", r_fn)
    elif cls.kind == "sep-residue":
        rw = cls.residue_witness
        assert rw["level"] == Fraction(cfg.p, cfg.p - 1)
        r_fn = slice_to_ratfunc(rw["slice"], model.gf)
        assert verify_residue_witness("artin-schreier", r_fn)
    elif cls.kind == "power-residue":
        rw = cls.residue_witness
        root = rw["root"]
        refold = {}
        for i, code in root.items():
            refold[cfg.p * i] = model.gf.frobenius(code)
        assert refold == {i: c for i, c in rw["slice"].items() if c}


@pytest.mark.parametrize("p", [2, 3])
def test_kummer_rt_random(p):
    rng = random.Random(500 + p)
    n = 0
    while n < 100:
        cfg = mx_cfg(p, mode="rt")
        a = nonzero(rand_mixed_laurent, rng, cfg)
        nf = normalize_kummer_rt(a, cfg)
        check_kummer_rt(nf)
        n += 1


def test_kummer_rt_frozen_kinds():
    cases = [
        ("2^(-1) + x", "insep-residue", "unit"),
        ("2^(-1)*x", "insep-residue", "unit_start"),
        ("1 + 4*x", "sep-residue", "unit"),
        ("1 + x^(2)", "power-residue", ""),
        ("1 + 2*x^(2)", "insep-residue", "unit"),
        ("2^(1/64)", "value-witness", "input"),
    ]
    for text, kind, src in cases:
        cfg = mx_cfg(2, mode="rt")
        nf = normalize_kummer_rt(parse_element(text, cfg), cfg)
        assert nf.classification.kind == kind, text
        assert nf.classification.witness_of == src, text
        check_kummer_rt(nf)


def test_kummer_rt_shift_before_obstruction():
    # 1 + 2*x^2 has a p-th-power lowest slice; one witnessed shift moves
    # the obstruction to an odd exponent
    cfg = mx_cfg(2, mode="rt")
    nf = normalize_kummer_rt(parse_element("1 + 2*x^(2)", cfg), cfg)
    assert any(rw.rule == "shift-p-term" for rw in nf.rewrites)
    sl = nf.classification.residue_witness["slice"]
    assert all(i % 2 for i in sl)


def test_kummer_rt_value_witness_frozen():
    cfg = mx_cfg(2, mode="rt")
    nf = normalize_kummer_rt(parse_element("2^(1/64)", cfg), cfg)
    cls = nf.classification
    assert cls.witness == Value.of(Fraction(1, 128))
    assert verify_value_witness(cls.witness, cls.value_group, 2)
    assert not nf.absorbed and not nf.rewrites


def test_kummer_rt_scale_absorbed():
    cfg = mx_cfg(2, mode="rt")
    nf = normalize_kummer_rt(parse_element("2^(-1)*x", cfg), cfg)
    assert nf.scale_exp == Fraction(-1)
    assert nf.absorbed == [("monomial", 1, Fraction(-1), 0)]
    assert nf.classification.residue_witness["slice"] == {1: 1}
