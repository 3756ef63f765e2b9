import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from pcflab.gcd_lab import (Degenerate, FrVerdict, GcdForm, PrimePower, check_chain, coprime_prime_count,
                            fit_closed_form, gcd2_equivalence_check, gcd_series, lambda_estimate, legendre,
                            log_profile, parse_form, prime_profile, profile, tail_check)
from pcflab.pcf_core import EqualModulus, ComplexRoots, Kind, Pcf, alpha, classify, convergents
from pcflab.polyring import Poly, lcm_upto, multifactorial, parse_poly


def pcf(a, b):
    return Pcf(parse_poly(a), parse_poly(b))


def series(p, depth):
    return gcd_series(convergents(p, depth))


APERY = pcf("34n^3+51n^2+27n+5", "-n^6")
PHI = pcf("1", "1")
SEC26 = pcf("n", "2n^2+n")
NOFR = pcf("n", "n^2+1")

coef = st.integers(-4, 4)
rand_pcfs = st.builds(lambda a, b: (Poly(a), Poly(b)), st.lists(coef, min_size=1, max_size=3),
                      st.lists(coef, min_size=1, max_size=5)
                      ).filter(lambda ab: not ab[0].is_zero() and not ab[1].is_zero()).map(lambda ab: Pcf(*ab))


def test_fibonacci_gcd_is_one():
    s = series(PHI, 300)
    assert all(g == 1 for g in s.gcd)


def test_sec26_gcd_shape():
    s = series(SEC26, 1000)
    n = 1000
    assert abs((s.log_gcd[n] + n * math.log(2) - math.lgamma(n + 1)) / n) < 0.05


def test_corrupted_table_is_degenerate():
    t = convergents(APERY, 50)
    t.q[20] += 1
    with pytest.raises(Degenerate):
        gcd_series(t)


@given(rand_pcfs, st.integers(5, 80))
def test_gcd2_chain(p, depth):
    try:
        s = gcd_series(convergents(p, depth))
    except Exception:
        assume(False)
    assert check_chain(s.gcd, s.gcd2)
    for n in range(len(s.gcd2) - 1):
        if s.gcd2[n]:
            assert s.gcd2[n + 1] % s.gcd2[n] == 0
            assert s.gcd[n] % s.gcd2[n] == 0


def test_log_profile_matches_series():
    s = series(APERY, 200)
    lg = log_profile(APERY, 200)
    assert max(abs(x - y) for x, y in zip(lg, s.log_gcd)) < 1e-9


@pytest.mark.parametrize("a, b, lam, tol, verdict", [
    ("3n+1", "9n^2-3n-2", 3.0, 0.05, FrVerdict.FR),
    ("20n-15", "125n^2+125n", 0.5370, 0.02, FrVerdict.FR),
    ("3n+2", "4n^2-2n", 0.5413, 0.02, FrVerdict.FR),
])
def test_lambda_examples(a, b, lam, tol, verdict):
    p = pcf(a, b)
    est = lambda_estimate(series(p, 1500), p.d_a)
    assert est.fr_verdict is verdict
    assert abs(est.lam - lam) < tol


def test_no_fr():
    est = lambda_estimate(series(NOFR, 1000), 1)
    assert est.fr_verdict is FrVerdict.NO_FR and est.lam == 0


def test_apery_limsup_proxy():
    est = lambda_estimate(series(APERY, 2000), 3)
    assert est.limsup_proxy >= math.exp(-3) - 0.005


@given(st.integers(1, 6), st.integers(-3, 3), st.integers(-9, 9), st.integers(-3, 3), st.integers(-3, 3))
def test_lambda_below_alpha(A, a0, B, b1, b0):
    p = Pcf(Poly([a0, A]), Poly([b0, b1, B or 1]))
    assume(classify(p).kind is Kind.BALANCED)
    try:
        al = float(abs(alpha(p)))
        s = series(p, 300)
    except (EqualModulus, ComplexRoots, Degenerate):
        assume(False)
    except Exception:
        assume(False)
    est = lambda_estimate(s, 1)
    if est.fr_verdict is FrVerdict.FR:
        assert math.log(est.lam) <= math.log(al) + 0.05


def test_prime_classes_zebra():
    p = pcf("9n+5", "10n^2+7n+1")
    _, classes = prime_profile(series(p, 1000), 13)
    for q in (2, 5, 11):
        assert classes[q].label == "exponentially_coprime"
    assert classes[3].label != "exponentially_coprime"


def test_sec26_two_adic_deficit():
    _, classes = prime_profile(series(SEC26, 1000), 2)
    assert abs(classes[2].deficit_rate + 1) < 0.05


def test_coprime_count_grows_without_fr():
    s = series(NOFR, 800)
    c1, c2 = coprime_prime_count(s, 400), coprime_prime_count(s, 800)
    assert c1 > 20 and 1.5 < c2 / c1 < 2.5


def test_fit_examples():
    p = pcf("3n+2", "4n^2-2n")
    fit = fit_closed_form(series(p, 1500), p)
    assert fit.form is not None and not fit.residual_flag
    # the fitted form and the (2n-1)!! reading differ by a polynomial factor only
    assert tail_check(series(p, 3000), parse_form("(2n-1)!!*2^n/LCM[2n]"))
    p = pcf("3n+1", "9n^2-3n-2")
    fit = fit_closed_form(series(p, 600), p)
    assert fit.form.display() == "(3n+1)!!!"
    p = pcf("9n+5", "10n^2+7n+1")
    fit = fit_closed_form(series(p, 1000), p)
    assert fit.residual_flag


def test_fit_stable_on_deeper_table():
    for a, b, d in (("3n+1", "9n^2-3n-2", 600), ("3n+2", "4n^2-2n", 1500)):
        p = pcf(a, b)
        fit = fit_closed_form(series(p, d), p)
        assert tail_check(series(p, 2 * d), fit.form)


def test_gcd2_equivalence():
    assert gcd2_equivalence_check(series(APERY, 1000))
    assert gcd2_equivalence_check(series(PHI, 300))
    assert gcd2_equivalence_check(series(NOFR, 1000))


@given(st.integers(0, 400), st.sampled_from([2, 3, 5, 7, 11]))
def test_legendre(n, p):
    f = math.factorial(n)
    v = 0
    while f % p == 0:
        f //= p
        v += 1
    assert legendre(n, p) == v


@given(st.integers(0, 40))
def test_form_values_exact(n):
    form = parse_form("(2n-1)!!*2^n/LCM[2n]")
    expect = Fraction(multifactorial(2 * n - 1, 2) * 2**n, lcm_upto(2 * n) if n else 1)
    assert form.value(n) == expect
    form = parse_form("n!*5^n/(2^n*3^⌊n/2⌋*LCM[n])")
    expect = Fraction(math.factorial(n) * 5**n, 2**n * 3 ** (n // 2) * (lcm_upto(n) if n else 1))
    assert form.value(n) == expect


@pytest.mark.parametrize("text", ["n!", "n!/2^n", "(3n+1)!!!", "(2n-1)!!*2^n/LCM[2n]", "(n!/LCM[n])^3",
                                  "n!*5^n/(2^n*3^⌊n/2⌋*LCM[n])", "1"])
def test_parse_form_round_trip(text):
    f = parse_form(text)
    assert parse_form(f.display()) == f


def test_parse_form_rejects():
    for bad in ("n!!/", "foo", "(n!"):
        with pytest.raises(ValueError):
            parse_form(bad)


def test_profile_json():
    p = pcf("3n+1", "9n^2-3n-2")
    prof = profile(p, 600)
    js = prof.to_json()
    assert js["fr_verdict"] == "FR" and js["closed_form"] == "(3n+1)!!!"
    assert prof.gcd2_equivalent


def test_prime_power_exponent():
    pp = PrimePower(3, Fraction(1, 2), sign=-1)
    assert [pp.exponent(n) for n in range(6)] == [0, 0, -1, -1, -2, -2]
    assert GcdForm(None, (pp,), None).value(5) == Fraction(1, 9)
