"""Laurent polynomials under the Gauss valuation, splits, and the
approximate inverse."""

import random
from fractions import Fraction

import pytest

from defectless import laurent
from defectless.coeff import MixedElem
from defectless.errors import (DivisionByZero, InverseNotApproximable,
                               PrecisionExhausted, RTModeError, ZeroHasNoValue)
from defectless.laurent import LaurentPoly, LaurentRing, ValConfig
from defectless.values import Value

from helpers import (eq_cfg, mx_cfg, nonzero, rand_eq_laurent,
                     rand_mixed_laurent)


def test_valconfig_modes():
    cfg = eq_cfg(2)
    assert cfg.vx == Value.of(0, 1)
    rt = eq_cfg(2, mode="rt")
    assert rt.vx.is_zero()
    with pytest.raises(ValueError):
        ValConfig("vt", cfg.model, vx=Value.of(1))  # rational vx
    with pytest.raises(ValueError):
        ValConfig("vt", cfg.model, vx=Value.of(0, -1))
    with pytest.raises(ValueError):
        ValConfig("rt", cfg.model, vx=Value.of(1))
    with pytest.raises(ValueError):
        ValConfig("xx", cfg.model)


def test_make_merges_and_drops_zeros():
    cfg = eq_cfg(2)
    model = cfg.model
    f = LaurentPoly.make(cfg, [(1, model.one()), (1, model.one()), (0, model.one())])
    assert f.support() == [0]  # 1+1 = 0 over F2
    assert LaurentPoly.make(cfg, [(3, model.zero())]).is_zero()


def test_sub_is_exact_for_p2_mixed():
    # regression: coefficient-wise negation would leave complement
    # markers, breaking f - f = 0 for every p = 2 element
    rng = random.Random(41)
    cfg = mx_cfg(2)
    for _ in range(80):
        f = rand_mixed_laurent(rng, cfg)
        assert laurent.sub(f, f).is_zero()
    cfg3 = mx_cfg(3)
    for _ in range(40):
        f = rand_mixed_laurent(rng, cfg3)
        assert laurent.sub(f, f).is_zero()


def test_add_sub_shift_roundtrips():
    rng = random.Random(42)
    for cfg in (eq_cfg(2), eq_cfg(3), mx_cfg(2)):
        gen = rand_eq_laurent if cfg.model.characteristic == "equal" else rand_mixed_laurent
        for _ in range(60):
            f, g = gen(rng, cfg), gen(rng, cfg)
            assert laurent.sub(laurent.add(f, g), g).support() == f.support() \
                or cfg.model.characteristic == "mixed"
            assert laurent.shift_x(laurent.shift_x(f, 3), -3).terms == f.terms
    cfg = eq_cfg(3)
    f = nonzero(rand_eq_laurent, rng, cfg)
    g = nonzero(rand_eq_laurent, rng, cfg)
    assert laurent.sub(laurent.add(f, g), g) == f


def test_gauss_value_frozen():
    cfg = eq_cfg(2)
    model = cfg.model
    f = LaurentPoly.make(cfg, [(-4, model.t_power(-2)), (0, model.t_power(-1))])
    # v = min(-2 - 4*lam, -1); the irrational term wins
    assert laurent.gauss_value(f) == Value.of(-2, -4)
    v, leads = laurent.gauss_data(f)
    assert leads == [-4]
    i, c = laurent.vt_lead(f)
    assert i == -4
    with pytest.raises(ZeroHasNoValue):
        laurent.gauss_value(LaurentPoly.zero(cfg))


def test_gauss_value_rt_ties():
    cfg = eq_cfg(2, mode="rt")
    model = cfg.model
    f = LaurentPoly.make(cfg, [(0, model.t_power(1)), (2, model.t_power(1)),
                               (5, model.t_power(3))])
    v, leads = laurent.gauss_data(f)
    assert v == Value.of(1) and leads == [0, 2]


def test_gauss_value_needs_resolved_minimum():
    cfg = mx_cfg(2, mode="rt")
    model = cfg.model
    marker = MixedElem(model, (), Fraction(1))
    f = LaurentPoly(cfg, {0: model.monomial(1, Fraction(3)), 1: marker})
    # the marker at level >= 1 cannot be placed against the digit at 3
    with pytest.raises(PrecisionExhausted):
        laurent.gauss_value(f)
    ok = LaurentPoly(cfg, {0: model.monomial(1, Fraction(0)), 1: marker})
    assert laurent.gauss_value(ok) == Value.zero()


def test_vt_lead_monomial_uniqueness():
    rng = random.Random(43)
    for cfg in (eq_cfg(2), eq_cfg(3, r=1), mx_cfg(2), mx_cfg(3)):
        gen = rand_eq_laurent if cfg.model.characteristic == "equal" else rand_mixed_laurent
        for _ in range(100):
            f = nonzero(gen, rng, cfg)
            _, leads = laurent.gauss_data(f)
            assert len(leads) == 1


def test_split_recombines_exactly():
    rng = random.Random(44)
    for cfg in (eq_cfg(2), mx_cfg(2), mx_cfg(3)):
        gen = rand_eq_laurent if cfg.model.characteristic == "equal" else rand_mixed_laurent
        for _ in range(80):
            f = gen(rng, cfg)
            alpha = Value.of(rng.randint(-3, 3), rng.randint(-1, 1))
            low, rest = laurent.split_at(f, alpha)
            assert laurent.to_json(laurent.add(low, rest)) == laurent.to_json(f)
            for g in (low,):
                if not g.is_zero():
                    assert not laurent.is_zero_to(g, alpha)
            keep, drop = laurent.split_above(f, alpha)
            assert laurent.to_json(laurent.add(keep, drop)) == laurent.to_json(f)
            if not drop.is_zero():
                assert laurent.is_zero_to(drop, alpha, strict=True)


def test_pth_power_equal_char_is_frobenius():
    rng = random.Random(45)
    cfg = eq_cfg(3)
    for _ in range(40):
        f = rand_eq_laurent(rng, cfg)
        assert laurent.pth_power(f) == laurent.int_power(f, 3)
    cfg2 = mx_cfg(2)
    f = LaurentPoly.make(cfg2, [(0, cfg2.model.one()), (1, cfg2.model.from_int(2))])
    sq = laurent.pth_power(f)
    # (1 + 2x)^2 keeps the cross term in mixed characteristic
    assert sq.support() == [0, 1, 2]


def test_monomial_split():
    rng = random.Random(46)
    for cfg in (eq_cfg(2), mx_cfg(2)):
        gen = rand_eq_laurent if cfg.model.characteristic == "equal" else rand_mixed_laurent
        for _ in range(60):
            f = nonzero(gen, rng, cfg)
            c, k, u = laurent.monomial_split(f)
            assert laurent.gauss_value(u).is_zero()
            assert cfg.model.residue_code(u.coeff(0)) == 1
            back = laurent.scale(laurent.shift_x(u, k), c)
            diff = laurent.sub(f, back)
            lvl = LaurentRing(cfg).certified_zero_level(diff)
            assert diff.is_zero() or lvl > laurent.gauss_value(f) + Value.of(4)


def test_rt_residue_poly():
    cfg = eq_cfg(2, mode="rt")
    model = cfg.model
    f = LaurentPoly.make(cfg, [(0, model.one()), (2, model.t_power(1)),
                               (3, model.const(1))])
    poly = laurent.rt_residue_poly(f)
    assert list(poly.coeffs) == [1, 0, 0, 1]
    with pytest.raises(RTModeError):
        laurent.rt_residue_poly(LaurentPoly.one(eq_cfg(2)))


def test_approx_inverse_contract():
    rng = random.Random(47)
    for cfg in (eq_cfg(2), eq_cfg(3), mx_cfg(2), mx_cfg(3)):
        gen = rand_eq_laurent if cfg.model.characteristic == "equal" else rand_mixed_laurent
        done = 0
        while done < 40:
            f = nonzero(gen, rng, cfg)
            alpha = Value.of(rng.randint(1, 4), rng.choice([0, 0, 1]))
            try:
                ftilde, info = laurent.approx_inverse(f, alpha)
            except (InverseNotApproximable, PrecisionExhausted):
                continue
            resid = laurent.sub(LaurentPoly.one(cfg),
                                laurent.mul(f, ftilde))
            assert laurent.is_zero_to(resid, alpha, strict=True)
            done += 1
    with pytest.raises(DivisionByZero):
        laurent.approx_inverse(LaurentPoly.zero(eq_cfg(2)), Value.of(1))


def test_laurent_json_round_trip():
    rng = random.Random(48)
    for cfg in (eq_cfg(2), eq_cfg(3), mx_cfg(2), mx_cfg(3)):
        gen = rand_eq_laurent if cfg.model.characteristic == "equal" else rand_mixed_laurent
        for _ in range(40):
            f = gen(rng, cfg)
            data = laurent.to_json(f)
            assert laurent.to_json(laurent.from_json(cfg, data)) == data


def test_ring_certified_zero_level():
    cfg = mx_cfg(2)
    ring = LaurentRing(cfg)
    model = cfg.model
    marker = MixedElem(model, (), Fraction(5))
    f = LaurentPoly(cfg, {2: marker})
    assert ring.certified_zero_level(f) == Value.of(5, 2)
    assert ring.certified_zero_level(ring.zero()) is None
    g = LaurentPoly.make(cfg, [(0, model.monomial(1, Fraction(3)))])
    assert ring.certified_zero_level(g) == Value.of(3)
