"""The 1-unit calculus: orbit sums, the transformed Hensel iteration,
and the four licensed rewriting moves.

Every move is checked by replaying its own certificate formula, never by
trusting the rule that produced it.
"""

import random
from fractions import Fraction

import pytest

from defectless import laurent
from defectless.coeff import CoeffRing, MixedModel
from defectless.errors import (LevelTooLow, NotAOneUnit, PositiveValueRequired,
                               RuleNotApplicable)
from defectless.fields import GaloisField
from defectless.laurent import LaurentPoly, LaurentRing
from defectless.units import (as_root_approx, geometric_inverse,
                              high_level_bound, low_level_bound,
                              pth_root_high_level, rewrite_diff, rule_drop,
                              rule_shift, rule_split, rule_truncate,
                              solve_unit_equation, unit_level)
from defectless.values import Value

from helpers import eq_cfg, mx_cfg, nonzero, rand_mixed_coeff, rand_mixed_laurent


def mixed_ring(p, N=8):
    gf = GaloisField(p, 2 if p > 2 else 1)
    return CoeffRing(MixedModel(gf, N))


def laurent_ring(p, N=8, mode="vt"):
    return LaurentRing(mx_cfg(p, mode=mode, N=N))


def rand_unit(rng, ring, glo=1, den=2):
    """1 + b with v(b) > 0 sampled over the ring's own element shape."""
    if ring.is_laurent:
        raw = rand_mixed_laurent(rng, ring.cfg, glo=glo, ghi=6, den=den,
                                 emin=-2, emax=2)
        if raw.is_zero():
            return None
        _, b = laurent.split_above(raw, Value.zero())
    else:
        model = ring.model
        raw = rand_mixed_coeff(rng, model, glo=glo, ghi=6, den=den)
        b = model.from_digits([(g, d) for g, d in raw.digits if g > 0])
    if ring.is_zero(b) or not ring.value(b) > Value.zero():
        return None
    return ring.add(ring.one(), b)


def test_level_bounds():
    assert low_level_bound(2) == Value.of(1)
    assert high_level_bound(2) == Value.of(2)
    assert high_level_bound(3) == Value.of(Fraction(3, 2))


def test_unit_level():
    ring = mixed_ring(2)
    u = ring.add(ring.one(), ring.from_int(4))
    assert unit_level(u, ring) == Value.of(2)
    with pytest.raises(NotAOneUnit):
        unit_level(ring.one(), ring)
    with pytest.raises(NotAOneUnit):
        unit_level(ring.from_int(2), ring)


def test_geometric_inverse_contract():
    rng = random.Random(51)
    for p in (2, 3):
        ring = laurent_ring(p)
        done = 0
        while done < 30:
            u = rand_unit(rng, ring)
            if u is None:
                continue
            b = ring.sub(u, ring.one())
            upto = Value.of(rng.randint(2, 6))
            inv = geometric_inverse(b, ring, upto)
            err = ring.sub(ring.mul(u, inv), ring.one())
            assert ring.is_zero(err) or ring.is_zero_to(err, upto)
            done += 1
    with pytest.raises(PositiveValueRequired):
        geometric_inverse(laurent_ring(2).one(), laurent_ring(2), Value.of(3))


def test_as_root_approx_is_exact():
    rng = random.Random(52)
    cfg = eq_cfg(2)
    ring = LaurentRing(cfg)
    model = cfg.model
    for _ in range(60):
        a = LaurentPoly.make(cfg, [
            (rng.randint(0, 3), model.monomial(1, Fraction(rng.randint(1, 5), 2)))
            for _ in range(rng.randint(1, 3))])
        if a.is_zero():
            continue
        alpha = Value.of(rng.randint(4, 10))
        ra = as_root_approx(a, alpha, ring)
        back = ring.sub(ring.sub(ring.frobenius(ra.chi), ra.chi), a)
        # chi^p - chi - a = defect holds exactly, not just to precision
        assert ring.sub(back, ra.defect).is_zero()
        assert ring.value(ra.defect) == ra.defect_level
        assert ra.defect_level > alpha
    with pytest.raises(PositiveValueRequired):
        as_root_approx(LaurentPoly.one(cfg), Value.of(2), ring)


def test_solve_unit_equation():
    rng = random.Random(53)
    for p in (2, 3):
        ring = mixed_ring(p)
        model = ring.model
        for _ in range(25):
            rhs = rand_mixed_coeff(rng, model, glo=1, ghi=4, den=1)
            y, achieved = solve_unit_equation(ring, rhs, 0)
            from defectless.units import _unit_poly
            f = _unit_poly(ring, y, rhs)
            if achieved is None:
                assert ring.is_zero(f)
            else:
                assert ring.certified_zero_level(f) >= achieved
                assert achieved > Value.of(2)


def test_pth_root_high_level():
    rng = random.Random(54)
    for p in (2, 3):
        ring = mixed_ring(p)
        hi = high_level_bound(p)
        done = 0
        while done < 25:
            u = rand_unit(rng, ring, glo=3, den=1)
            if u is None or not unit_level(u, ring) > hi:
                continue
            w, achieved = pth_root_high_level(u, ring)
            wp = ring.one()
            for _ in range(p):
                wp = ring.mul(wp, w)
            diff = ring.sub(wp, u)
            if achieved is None:
                assert ring.is_zero(diff)
            else:
                assert ring.certified_zero_level(diff) >= achieved
                assert achieved > hi
            done += 1


def test_pth_root_boundary_rejected():
    for p in (2, 3):
        ring = mixed_ring(p, N=12)
        model = ring.model
        hi = high_level_bound(p)
        at_boundary = ring.add(ring.one(),
                               model.monomial(1, Fraction(p, p - 1)))
        with pytest.raises(LevelTooLow):
            pth_root_high_level(at_boundary, ring)
        below = ring.add(ring.one(), model.monomial(1, Fraction(1)))
        if not Value.of(1) > hi:
            with pytest.raises(LevelTooLow):
                pth_root_high_level(below, ring)


def test_rule_truncate():
    rng = random.Random(55)
    ring = laurent_ring(2)
    hi = high_level_bound(2)
    done = 0
    while done < 30:
        u = rand_unit(rng, ring)
        if u is None:
            continue
        try:
            after, rw = rule_truncate(u, ring)
        except RuleNotApplicable:
            continue
        assert rw.rule == "truncate-tail" and rw.witness is None
        diff = rewrite_diff(rw, ring)
        lvl = ring.certified_zero_level(diff)
        assert lvl is None or lvl > hi
        assert rw.checked_to == lvl
        done += 1


def test_rule_drop():
    ring = laurent_ring(2)
    model = ring.cfg.model
    high = ring.add(ring.one(), LaurentPoly.const(ring.cfg, model.monomial(1, Fraction(3))))
    one, rw = rule_drop(high, ring)
    assert ring.is_zero(ring.sub(one, ring.one()))
    assert rw.checked_to == Value.of(3)
    at_hi = ring.add(ring.one(), LaurentPoly.const(ring.cfg, model.monomial(1, Fraction(2))))
    with pytest.raises(RuleNotApplicable):
        rule_drop(at_hi, ring)


def test_rule_split_replay():
    rng = random.Random(56)
    for p in (2, 3):
        ring = laurent_ring(p)
        alpha = high_level_bound(p) + Value.of(2)
        done = 0
        while done < 20:
            u = rand_unit(rng, ring)
            if u is None:
                continue
            b = ring.sub(u, ring.one())
            c0 = b.coeff(0)
            if not c0.digits:
                continue
            factor, after, rw = rule_split(
                u, LaurentPoly.const(ring.cfg, c0), ring, alpha)
            assert rw.aux["factor"] is factor
            diff = rewrite_diff(rw, ring)
            lvl = ring.certified_zero_level(diff)
            assert lvl is None or lvl >= rw.checked_to
            done += 1


def test_rule_shift_replay_and_license():
    rng = random.Random(57)
    for p in (2, 3):
        ring = laurent_ring(p)
        alpha = high_level_bound(p) + Value.of(2)
        done = 0
        while done < 20:
            u = rand_unit(rng, ring)
            if u is None:
                continue
            model = ring.cfg.model
            c = LaurentPoly.monomial(
                ring.cfg, model.monomial(1, Fraction(1, 2)), 1)
            after, rw = rule_shift(u, c, ring, alpha)
            assert rw.witness is not None
            diff = rewrite_diff(rw, ring)
            lvl = ring.certified_zero_level(diff)
            if rw.checked_to is None:
                assert diff.is_zero()
            else:
                assert lvl is not None and lvl >= rw.checked_to
            done += 1
        zero_c = LaurentPoly.const(ring.cfg, ring.cfg.model.monomial(1, Fraction(0)))
        with pytest.raises(RuleNotApplicable):
            rule_shift(ring.one(), zero_c, ring, alpha)
