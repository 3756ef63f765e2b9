from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from pcflab.family_search import conjecture13_member
from pcflab.gcd_lab import gcd_series
from pcflab.irrationality import empirical_delta
from pcflab.pcf_core import Pcf, convergents
from pcflab.polyring import Poly, multifactorial, parse_poly
from pcflab.transforms import (RatFunc, RationalCf, ZeroScaler, deflate, inflate, integerize,
                               rational_convergents, scaling_check, sqrt_opportunities)

P = parse_poly
APERY = Pcf(P("34n^3+51n^2+27n+5"), P("-n^6"))
APERY_RAT = RationalCf(RatFunc(P("34n^3+51n^2+27n+5"), P("(n+1)^3")), RatFunc(P("-n^3"), P("(n+1)^3")))
PHI = Pcf(Poly([1]), Poly([1]))
GOLD = Pcf(P("3n+1"), P("9n^2-3n-2"))


def test_inflate_examples():
    assert inflate(APERY_RAT, P("(n+1)^3")).to_pcf() == APERY
    assert inflate(PHI, P("3n+1")).to_pcf() == GOLD
    assert inflate(APERY, Poly([1])).to_pcf() == APERY


def test_zero_scaler():
    with pytest.raises(ZeroScaler):
        inflate(PHI, P("n-2"))
    with pytest.raises(ZeroScaler):
        inflate(PHI, RatFunc(Poly([1]), P("n-1")))
    with pytest.raises(ZeroScaler):
        inflate(PHI, P("n"))
    inflate(PHI, P("n+1"))


def test_deflate_examples():
    d = deflate(GOLD)
    assert d.result == PHI and d.c == P("3n+1")
    res, c = deflate(PHI)
    assert res == PHI and c == Poly([1])
    assert deflate(Pcf(P("3n+6"), P("3n^2+9n"))).sqrt_report == [3]
    assert sqrt_opportunities(Pcf(P("3n+6"), P("3n^2+9n"))) == [3]


def test_scaling_examples():
    assert scaling_check(PHI, P("3n+1"), 200)
    assert scaling_check(APERY_RAT, P("(n+1)^3"), 100)
    assert scaling_check(APERY, Poly([1]), 100)


def test_golden_gcd_is_triple_factorial():
    s = gcd_series(convergents(GOLD, 300))
    assert all(s.gcd[n] == multifactorial(3 * n + 1, 3) for n in range(301))


def test_integerize_examples():
    p, c = integerize(APERY_RAT)
    assert p == APERY and c == P("(n+1)^3")
    p, c = integerize(RationalCf.from_pcf(GOLD))
    assert p == GOLD and c == Poly([1])
    # linear-family member with B = 1, m = 1/2 has half-integer coefficients
    cf = conjecture13_member(P("n+1"), P("n+1"), 1, Fraction(1, 2))
    assert not cf.is_integral
    p, c = integerize(cf)
    assert c.degree == 0 and p.a.is_integral and p.b.is_integral


small_int_poly = st.lists(st.integers(-4, 4), min_size=1, max_size=3).map(Poly).filter(lambda p: not p.is_zero())
scalers = st.lists(st.integers(-3, 3), min_size=1, max_size=3).map(Poly).filter(lambda p: not p.is_zero())


@given(small_int_poly, small_int_poly, scalers)
def test_convergent_invariance(a, b, c):
    cf = RationalCf(RatFunc(a), RatFunc(b))
    try:
        infl = inflate(cf, c)
    except ZeroScaler:
        assume(False)
    p, q = rational_convergents(cf, 25)
    p2, q2 = rational_convergents(infl, 25)
    c0 = c(0)
    for i in range(len(p)):
        assert p2[i] * q[i] == c0 * p[i] * q2[i]
    if c0 == 1:
        assert all(x * y == z * w for x, y, z, w in zip(p2, q, p, q2))


@given(small_int_poly, small_int_poly, st.integers(1, 4), st.integers(1, 5))
def test_deflate_undoes_inflate(a, b, s, t):
    pcf = Pcf(a, b)
    assume(deflate(pcf).c == Poly([1]))
    c = Poly([t, s])  # s n + t has no root at a nonnegative integer
    infl = inflate(pcf, c).to_pcf()
    back = deflate(infl).result
    # equal up to constant content
    ka = pcf.a.lead / back.a.lead
    assert back.a.scale(ka) == pcf.a and back.b.scale(ka * ka) == pcf.b


@pytest.mark.parametrize("orig", [GOLD, Pcf(P("20n-15"), P("125n^2+125n"))])
def test_deflation_keeps_delta(orig):
    small = deflate(orig).result
    deltas = []
    for pcf in (orig, small):
        t = convergents(pcf, 1000)
        deltas.append(empirical_delta(t, gcd_series(t)).delta)
    assert abs(deltas[0] - deltas[1]) < 0.02
