"""Shared fixtures: session configs and seeded random element generators."""

from fractions import Fraction

from defectless.coeff import EqModel, MixedModel
from defectless.fields import GaloisField
from defectless.laurent import LaurentPoly, ValConfig


def eq_cfg(p, r=1, mode="vt", N=8):
    return ValConfig(mode, EqModel(GaloisField(p, r), N))


def mx_cfg(p, mode="vt", N=8):
    gf = GaloisField(p, 2 if p > 2 else 1)
    return ValConfig(mode, MixedModel(gf, N))


def rand_eq_coeff(rng, model, vlo=-5, vhi=5, dmax=1, nparts=2):
    out = model.zero()
    for _ in range(rng.randint(1, nparts)):
        code = rng.randrange(1, model.gf.q)
        den = model.p ** rng.randint(0, dmax)
        out = model.add(out, model.monomial(code, Fraction(rng.randint(vlo, vhi), den)))
    return out


def rand_mixed_coeff(rng, model, glo=-3, ghi=5, den=2, ndigits=2):
    seen = set()
    digs = []
    for _ in range(rng.randint(1, ndigits)):
        g = Fraction(rng.randint(glo * den, ghi * den), den)
        if g in seen:
            continue
        seen.add(g)
        digs.append((g, rng.randrange(1, model.gf.q)))
    return model.from_digits(digs)


def rand_eq_laurent(rng, cfg, nterms=4, emin=-6, emax=6, **kw):
    pairs = [(rng.randint(emin, emax), rand_eq_coeff(rng, cfg.model, **kw))
             for _ in range(rng.randint(1, nterms))]
    return LaurentPoly.make(cfg, pairs)


def rand_mixed_laurent(rng, cfg, nterms=3, emin=-3, emax=3, **kw):
    pairs = [(rng.randint(emin, emax), rand_mixed_coeff(rng, cfg.model, **kw))
             for _ in range(rng.randint(1, nterms))]
    return LaurentPoly.make(cfg, pairs)


def nonzero(gen, *args, **kw):
    for _ in range(100):
        f = gen(*args, **kw)
        if not f.is_zero():
            return f
    raise RuntimeError("generator kept producing zero")
