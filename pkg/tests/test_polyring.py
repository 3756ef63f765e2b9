from fractions import Fraction
from itertools import product
from math import gcd

import pytest
from hypothesis import given, strategies as st

from pcflab.polyring import (Poly, UNDECIDABLE, discriminant_is_rational_square, display, divisors,
                             equal_degree_split, eval_at, factor, int_values, lcm_upto,
                             multifactorial, parse_poly, poly_gcd, rational_roots)

small = st.integers(-6, 6)
polys = st.lists(small, min_size=0, max_size=5).map(Poly)
nonzero = polys.filter(lambda p: not p.is_zero())


def P(s):
    return parse_poly(s)


def test_eval_at_examples():
    assert eval_at(P("34n^3+51n^2+27n+5"), 1) == 117
    assert eval_at(Poly(), 7) == 0
    assert eval_at(P("8n^2-2"), 3) == 70


@given(polys, polys, polys)
def test_distributive(p, q, r):
    assert (p + q) * r == p * r + q * r


@given(nonzero, nonzero)
def test_degree_of_product(p, q):
    assert (p * q).degree == p.degree + q.degree


@given(polys, nonzero)
def test_divmod_reconstructs(p, q):
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@given(polys, st.integers(-20, 20))
def test_int_values_match_eval(p, start):
    vals = int_values(p, start, start + 6)
    assert vals == [eval_at(p, n) for n in range(start, start + 6)]


@given(polys, st.integers(-5, 5))
def test_shift(p, k):
    for n in range(-3, 4):
        assert eval_at(p.shift(k), n) == eval_at(p, n + k)


def test_rational_roots_examples():
    assert rational_roots(P("n^2+2n+1")) == {Fraction(-1): 2}
    assert rational_roots(P("n^2+1")) == {}
    assert rational_roots(P("2n^2+3n+1")) == {Fraction(-1): 1, Fraction(-1, 2): 1}


def _scan_roots(p):
    """Brute force over every candidate the rational-root theorem allows."""
    f = p.primitive()
    k = 0
    cs = list(f.coeffs)
    while cs[0] == 0:
        cs.pop(0)
        k += 1
    out = {Fraction(0)} if k else set()
    c0, cl = abs(int(cs[0])), abs(int(cs[-1]))
    for num, den in product(range(1, c0 + 1), range(1, cl + 1)):
        if c0 % num == 0 and cl % den == 0:
            for x in (Fraction(num, den), Fraction(-num, den)):
                if eval_at(p, x) == 0:
                    out.add(x)
    return out


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=5).map(Poly).filter(lambda p: p.degree >= 1))
def test_rational_roots_match_scan(p):
    roots = rational_roots(p)
    assert set(roots) == _scan_roots(p)
    # multiplicities: dividing out each root that many times still leaves an exact quotient
    rest = p
    for x, m in roots.items():
        for _ in range(m):
            rest, r = divmod(rest, Poly([-x, 1]))
            assert r.is_zero()


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=4),
       st.integers(1, 6))
def test_roots_of_constructed_poly(rs, lead):
    p = Poly.from_roots(rs, lead)
    got = rational_roots(p)
    for r in rs:
        assert got[r] == rs.count(r)


def test_split_examples():
    s = equal_degree_split(P("8n^2-2"))
    assert s.scale == 8 and {s.left, s.right} == {P("n+1/2"), P("n-1/2")}
    s = equal_degree_split(P("-n^4"))
    assert s.scale == -1 and s.left == P("n^2") and s.right == P("n^2")
    assert equal_degree_split(P("n^2+1")) is None
    assert equal_degree_split(P("n^3+1")) is None


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3).map(Poly).filter(lambda p: p.degree == 2))
def test_quadratic_split_iff_square_discriminant(b):
    s = equal_degree_split(b)
    assert (s is not None) == discriminant_is_rational_square(b)
    if s:
        assert s.expand() == b


@given(st.lists(small, min_size=5, max_size=5).map(Poly).filter(lambda p: p.degree == 4))
def test_quartic_split_reconstructs(b):
    s = equal_degree_split(b)
    if s is not None and s is not UNDECIDABLE:
        assert s.left.degree == s.right.degree == 2
        assert s.expand() == b


@given(st.lists(small, min_size=2, max_size=4).map(Poly).filter(lambda p: p.degree >= 1),
       st.lists(small, min_size=2, max_size=3).map(Poly).filter(lambda p: p.degree >= 1))
def test_factor_expands(p, q):
    f = p * q
    fz = factor(f)
    if not fz.undecidable:
        assert fz.expand() == f


@given(nonzero, nonzero)
def test_gcd_divides(p, q):
    g = poly_gcd(p, q)
    assert g.divides(p) and g.divides(q)


def test_multifactorial_and_lcm():
    assert multifactorial(7, 3) == 28
    assert multifactorial(5, 1) == 120
    assert multifactorial(0, 2) == 1
    assert lcm_upto(6) == 60


@given(st.integers(1, 60))
def test_lcm_brute_force(n):
    out = 1
    for k in range(1, n + 1):
        out = out * k // gcd(out, k)
    assert lcm_upto(n) == out


@given(st.integers(1, 2000))
def test_divisors(n):
    assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]


@pytest.mark.parametrize("text, coeffs", [
    ("[5, 27, 51, 34]", [5, 27, 51, 34]),
    ("34n^3+51n^2+27n+5", [5, 27, 51, 34]),
    ("-n^6", [0, 0, 0, 0, 0, 0, -1]),
    ("3*(2n+1)", [3, 6]),
    ("-n^2(n+2)(2n-3)", [0, 0, 6, -1, -2]),
    ("2 n ** 2 - 1", [-1, 0, 2]),
    ("1/2n + 3", [3, Fraction(1, 2)]),
    ("[1, 1/2]", [1, Fraction(1, 2)]),
])
def test_parse(text, coeffs):
    assert parse_poly(text) == Poly(coeffs)


@pytest.mark.parametrize("text", ["", "n+", "(n", "n+m", "n^x", "[1, 2", "[1, a]", "3 $ n"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_poly(text)


@given(nonzero)
def test_display_round_trip(p):
    assert parse_poly(display(p)) == p
