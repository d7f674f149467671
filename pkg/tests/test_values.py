"""Exact ordering in Q + Q*sqrt(2) and the subgroup lattice machinery.

The ordering oracle is decimal arithmetic at 60 digits, which is
independent of the integer sign test used by Value itself; the Pell
convergents exercise the near-tie region where floats would lie.
"""

import math
import random
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest

from defectless.errors import NotASubgroup
from defectless.values import (Value, SubgroupSpec, check_irrationality_constant,
                               compare, quotient_index, rational_rank,
                               subgroup_membership)

getcontext().prec = 60
SQRT2 = Decimal(2).sqrt()


def dec_sign(v):
    x = (Decimal(v.a.numerator) / Decimal(v.a.denominator)
         + (Decimal(v.b.numerator) / Decimal(v.b.denominator)) * SQRT2)
    if x == 0:
        return 0
    return 1 if x > 0 else -1


def test_sign_against_decimal_oracle():
    rng = random.Random(20260823)
    for _ in range(2000):
        a = Fraction(rng.randint(-50, 50), rng.randint(1, 12))
        b = Fraction(rng.randint(-50, 50), rng.randint(1, 12))
        v = Value(a, b)
        assert v.sign() == dec_sign(v)


# Pell pairs: a^2 - 2 b^2 = +-1, so a/b approximates sqrt(2) to ~1/b^2
PELL = [(3, 2), (7, 5), (17, 12), (41, 29), (99, 70), (239, 169), (577, 408),
        (1393, 985), (3363, 2378), (8119, 5741), (19601, 13860)]


def test_sign_near_ties():
    for a, b in PELL:
        sign = 1 if a * a - 2 * b * b > 0 else -1
        assert Value.of(a, -b).sign() == sign
        assert Value.of(-a, b).sign() == -sign
        assert (Value.of(a, -b) > Value.zero()) == (sign > 0)


def test_ordering_is_total_and_compatible():
    rng = random.Random(3)
    vals = [Value(Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                  Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
            for _ in range(25)]
    for u in vals:
        for v in vals:
            s = compare(u, v)
            assert s == -compare(v, u)
            assert (u < v) == (s < 0) and (u > v) == (s > 0)
            for w in vals:
                if u < v:
                    assert u + w < v + w


def test_scaled_and_str_round_trip():
    v = Value.of(Fraction(7, 3), Fraction(-2, 5))
    assert v.scaled(3) == Value.of(7, Fraction(-6, 5))
    assert Value.from_str(v.to_str()) == v
    assert Value.from_str("(1/2, -3)") == Value.of(Fraction(1, 2), -3)
    with pytest.raises(ValueError):
        Value.from_str("1/2, -3")


def test_irrationality_constant_rejects_squares():
    check_irrationality_constant(2)
    check_irrationality_constant(Fraction(1, 2))
    for bad in (0, -2, 4, Fraction(9, 4), 1):
        with pytest.raises(ValueError):
            check_irrationality_constant(bad)


def test_mixed_constant_mismatch():
    with pytest.raises(ValueError):
        Value.of(1, 0, 2) + Value.of(1, 0, 3)


def test_membership_reconstructs_coefficients():
    rng = random.Random(11)
    for _ in range(300):
        k = rng.randint(1, 4)
        gens = tuple(Value(Fraction(rng.randint(-6, 6), rng.randint(1, 3)),
                           Fraction(rng.randint(-6, 6), rng.randint(1, 3)))
                     for _ in range(k))
        group = SubgroupSpec(gens)
        coeffs = [rng.randint(-7, 7) for _ in range(k)]
        v = Value.zero()
        for n, g in zip(coeffs, gens):
            v = v + g.scaled(n)
        got = subgroup_membership(v, group)
        assert got is not None
        w = Value.zero()
        for n, g in zip(got, gens):
            w = w + g.scaled(n)
        assert w == v


def test_membership_negatives_by_exhaustion():
    # if the routine says no, no small combination may hit the target
    rng = random.Random(12)
    checked = 0
    while checked < 40:
        gens = tuple(Value.of(rng.randint(-3, 3), rng.randint(-3, 3))
                     for _ in range(2))
        group = SubgroupSpec(gens)
        v = Value(Fraction(rng.randint(-9, 9), rng.choice([2, 3, 5])),
                  Fraction(rng.randint(-9, 9), rng.choice([2, 3, 5])))
        if subgroup_membership(v, group) is not None:
            continue
        for n0 in range(-6, 7):
            for n1 in range(-6, 7):
                assert gens[0].scaled(n0) + gens[1].scaled(n1) != v
        checked += 1


def test_membership_trivial_group():
    group = SubgroupSpec.of()
    assert subgroup_membership(Value.zero(), group) == []
    assert subgroup_membership(Value.of(1), group) is None


def test_rational_rank():
    assert rational_rank(SubgroupSpec.of()) == 0
    assert rational_rank(SubgroupSpec.of(Value.zero())) == 0
    assert rational_rank(SubgroupSpec.of(Value.of(2), Value.of(3))) == 1
    assert rational_rank(SubgroupSpec.of(Value.of(1), Value.of(0, 1))) == 2
    assert rational_rank(SubgroupSpec.of(Value.of(1, 1), Value.of(2, 2))) == 1


def test_quotient_index_frozen_cases():
    lam = Value.of(0, 1)
    big = SubgroupSpec.of(Value.of(1), lam)
    assert quotient_index(big, SubgroupSpec.of(Value.of(2), lam.scaled(3))) == 6
    assert quotient_index(big, big) == 1
    assert quotient_index(SubgroupSpec.of(Value.of(Fraction(1, 2)), lam),
                          big) == 2
    # rank drop means infinite index
    assert quotient_index(big, SubgroupSpec.of(Value.of(1))) == math.inf
    # rank-1 nested chains
    assert quotient_index(SubgroupSpec.of(Value.of(Fraction(1, 4))),
                          SubgroupSpec.of(Value.of(Fraction(3, 2)))) == 6


def test_quotient_index_requires_containment():
    big = SubgroupSpec.of(Value.of(2))
    with pytest.raises(NotASubgroup):
        quotient_index(big, SubgroupSpec.of(Value.of(1)))


def test_quotient_index_randomized_scaling():
    rng = random.Random(13)
    lam = Value.of(0, 1)
    for _ in range(120):
        a, b = rng.randint(1, 5), rng.randint(1, 5)
        big = SubgroupSpec.of(Value.of(Fraction(1, a)), lam.scaled(Fraction(1, b)))
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        small = SubgroupSpec.of(Value.of(Fraction(m, a)), lam.scaled(Fraction(n, b)))
        assert quotient_index(big, small) == m * n
