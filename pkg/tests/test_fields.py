"""Finite fields, polynomials, and the Weierstrass reduction helpers."""

import random

import pytest

from defectless.fields import (GaloisField, Poly, RatFunc,
                               artin_schreier_preimage, factor_monic,
                               is_irreducible, monic_polys, poly_pth_root,
                               ratfunc_pth_root, slice_is_pth_power,
                               weier_reduce, weier_reduce_laurent)

F2 = GaloisField(2)
F3 = GaloisField(3)
F4 = GaloisField(2, 2)
F9 = GaloisField(3, 2)
SMALL = [F2, F3, F4, F9]


@pytest.mark.parametrize("gf", SMALL, ids=repr)
def test_field_laws_exhaustive(gf):
    els = list(gf.elements())
    for a in els:
        assert gf.add(a, 0) == a and gf.mul(a, 1) == a
        assert gf.add(a, gf.neg(a)) == 0
        if a:
            assert gf.mul(a, gf.inv(a)) == 1
        for b in els:
            assert gf.add(a, b) == gf.add(b, a)
            assert gf.mul(a, b) == gf.mul(b, a)
            for c in els:
                assert gf.add(gf.add(a, b), c) == gf.add(a, gf.add(b, c))
                assert gf.mul(gf.mul(a, b), c) == gf.mul(a, gf.mul(b, c))
                assert gf.mul(a, gf.add(b, c)) == gf.add(gf.mul(a, b), gf.mul(a, c))


@pytest.mark.parametrize("gf", SMALL, ids=repr)
def test_frobenius_and_pth_root(gf):
    for a in gf.elements():
        assert gf.pth_root(gf.frobenius(a)) == a
        assert gf.frobenius(gf.pth_root(a)) == a
        for b in gf.elements():
            assert gf.frobenius(gf.add(a, b)) == gf.add(gf.frobenius(a),
                                                        gf.frobenius(b))


@pytest.mark.parametrize("gf", SMALL, ids=repr)
def test_artin_schreier_image(gf):
    image = {gf.sub(gf.frobenius(c), c) for c in gf.elements()}
    assert len(image) == gf.q // gf.p
    for a in gf.elements():
        pre = artin_schreier_preimage(gf, a)
        if a in image:
            assert pre is not None and gf.sub(gf.frobenius(pre), pre) == a
        else:
            assert pre is None
        assert gf.in_artin_schreier_image(a) == (a in image)


def test_modulus_validation():
    with pytest.raises(ValueError):
        GaloisField(4)
    with pytest.raises(ValueError):
        GaloisField(2, 2, modulus=(1, 0, 1))  # y^2+1 = (y+1)^2 over F2
    gf = GaloisField(3, 2, modulus=(1, 0, 1))  # y^2 = -1
    assert gf.mul(gf.generator, gf.generator) == gf.neg(1)


def rand_poly(rng, gf, dmax):
    return Poly.make(gf, [rng.randrange(gf.q) for _ in range(rng.randint(0, dmax + 1))])


def test_poly_divmod_and_gcd():
    rng = random.Random(17)
    for _ in range(300):
        gf = rng.choice(SMALL)
        a = rand_poly(rng, gf, 6)
        b = rand_poly(rng, gf, 4)
        if b.is_zero():
            continue
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.is_zero() or r.degree < b.degree
        g = a.gcd(b)
        if not g.is_zero():
            assert (a % g).is_zero() and (b % g).is_zero()
            assert g.coeffs[-1] == 1


def test_poly_derivative_is_linear():
    rng = random.Random(18)
    for _ in range(100):
        gf = rng.choice(SMALL)
        a, b = rand_poly(rng, gf, 5), rand_poly(rng, gf, 5)
        assert (a + b).derivative() == a.derivative() + b.derivative()
        assert (a * b).derivative() == (a.derivative() * b
                                        + a * b.derivative())


def test_factor_monic_recombines():
    rng = random.Random(19)
    for _ in range(60)[:60]:
        gf = rng.choice([F2, F3, F4])
        f = rand_poly(rng, gf, 4)
        if f.is_zero():
            continue
        unit, factors = factor_monic(f)
        prod = Poly.make(gf, [unit])
        for q, m in factors:
            assert is_irreducible(q)
            prod = prod * q.pow(m)
        assert prod == f


def test_is_irreducible_basics():
    # x^2+x+1 irreducible over F2, x^2+1 = (x+1)^2 is not
    assert is_irreducible(Poly.make(F2, [1, 1, 1]))
    assert not is_irreducible(Poly.make(F2, [1, 0, 1]))
    assert sum(1 for f in monic_polys(F2, 2) if is_irreducible(f)) == 1
    assert sum(1 for f in monic_polys(F3, 2) if is_irreducible(f)) == 3


@pytest.mark.parametrize("gf", [F2, F3, F4], ids=repr)
def test_weier_reduce_postconditions(gf):
    rng = random.Random(21)
    p = gf.p
    for _ in range(120):
        f = rand_poly(rng, gf, 7)
        g, rem = weier_reduce(f)
        assert (g.pow(p) - g) + rem == f
        for d in range(1, rem.degree + 1):
            if d % p == 0:
                assert rem.coeffs[d] == 0
        if rem.coeffs and rem.coeffs[0]:
            assert artin_schreier_preimage(gf, rem.coeffs[0]) is None


def test_poly_pth_root_round_trip():
    rng = random.Random(22)
    for _ in range(120):
        gf = rng.choice(SMALL)
        f = rand_poly(rng, gf, 4)
        assert poly_pth_root(f.pow(gf.p)) == f
    assert poly_pth_root(Poly.make(F2, [1, 1])) is None
    r = RatFunc.make(Poly.make(F2, [1, 1]), Poly.make(F2, [0, 1]))
    assert ratfunc_pth_root(r * r) == r
    assert ratfunc_pth_root(r) is None


@pytest.mark.parametrize("gf", [F2, F3, F9], ids=repr)
def test_weier_reduce_laurent_replay(gf):
    rng = random.Random(23)
    p = gf.p
    for _ in range(150):
        sl = {rng.randint(-6, 6): rng.randrange(gf.q)
              for _ in range(rng.randint(1, 4))}
        g, rem = weier_reduce_laurent(sl, gf)
        # replay: sl must equal rem plus the image of g
        acc = dict(rem)
        for e, c in g.items():
            ip = p * e
            acc[ip] = gf.add(acc.get(ip, 0), gf.frobenius(c))
            acc[e] = gf.sub(acc.get(e, 0), c)
        acc = {i: c for i, c in acc.items() if c}
        assert acc == {i: c for i, c in sl.items() if c}
        for i in rem:
            assert i == 0 or i % p
        if 0 in rem:
            assert artin_schreier_preimage(gf, rem[0]) is None


@pytest.mark.parametrize("gf", [F2, F3, F9], ids=repr)
def test_slice_is_pth_power(gf):
    rng = random.Random(24)
    p = gf.p
    for _ in range(100):
        root = {rng.randint(-3, 3): rng.randrange(1, gf.q)
                for _ in range(rng.randint(1, 3))}
        sl = {p * i: gf.frobenius(c) for i, c in root.items()}
        assert slice_is_pth_power(sl, gf) == root
    assert slice_is_pth_power({1: 1}, gf) is None
