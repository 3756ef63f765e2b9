"""GCD sequences of convergents, factorial-reduction detection and GCD forms."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _kernels
from .pcf_core import ConvergentTable, Pcf, convergents
from .polyring import multifactorial, primes_upto


class Degenerate(Exception):
    pass


class TooShort(Exception):
    pass


class FrVerdict(str, Enum):
    FR = "FR"
    NO_FR = "NoFR"
    INCONCLUSIVE = "Inconclusive"


# Verdict thresholds on rho, the n ln n coefficient of ln GCD - d_a ln n!.
# FR tables give rho near 0 (<= 0.1 already at depth 200); tables without
# FR give rho around 0.5 (GCD grows like n!^(1/2) or slower).
RHO_FR = 0.15
RHO_NOFR = 0.3
TAIL_TOL = 0.02


@dataclass
class GcdSeries:
    """GCD_n and GCD2_n for n = 0..depth."""

    gcd: list[int]
    gcd2: list[int]
    pcf: Pcf | None = None

    @property
    def depth(self) -> int:
        return len(self.gcd) - 1

    @cached_property
    def log_gcd(self) -> np.ndarray:
        return np.array([math.log(g) for g in self.gcd])

    @cached_property
    def log_gcd2(self) -> np.ndarray:
        return np.array([math.log(g) for g in self.gcd2])


def check_chain(gcd: list[int], gcd2: list[int]) -> bool:
    """GCD2_n | GCD_n and GCD2_n | GCD2_{n+1} for all n."""
    for n in range(len(gcd)):
        if gcd2[n] == 0 or gcd[n] % gcd2[n]:
            return False
        if n + 1 < len(gcd2) and gcd2[n + 1] % gcd2[n]:
            return False
    return True


def gcd_series(table: ConvergentTable, verify: bool = True) -> GcdSeries:
    if table.degenerate:
        raise Degenerate(f"b vanishes at n = {table.truncated_at}; GCD analysis skipped")
    if verify and not table.verify():
        raise Degenerate("convergent table does not satisfy its recursion")
    g, g2 = _kernels.gcd_sequences(table.p, table.q)
    if any(x == 0 for x in g):
        raise Degenerate("p_n = q_n = 0 somewhere in the table")
    if verify and not check_chain(g, g2):
        raise Degenerate("GCD2 divisibility chain broken")
    return GcdSeries(g, g2, table.pcf)


def log_profile(pcf: Pcf, depth: int) -> np.ndarray:
    """ln GCD_n for n = 0..depth, computed without materializing the table."""
    avals, bvals = pcf.values(depth)
    if any(b == 0 for b in bvals[1:]):
        raise Degenerate("b vanishes inside the requested depth")
    lng, _ = _kernels.log_gcd_profile(avals, bvals)
    return np.array(lng)


# ----------------------------------------------------------------- lambda

@dataclass(frozen=True)
class LambdaEstimate:
    lam: float
    fr_verdict: FrVerdict
    slope: float  # tail slope of f(n) = ln GCD_n - d_a ln n!
    mu: float
    rho: float
    limsup_proxy: float  # exp(max f(n)/n) over the final third
    window: tuple[float, float]  # exp(slope) on the two halves of the tail

    def __iter__(self):
        yield self.lam
        yield self.fr_verdict


def _lnfact(ns: np.ndarray) -> np.ndarray:
    return np.array([math.lgamma(n + 1.0) for n in ns])


def lambda_from_logs(log_gcd, d_a: int, window: float = 2 / 3,
                     rho_fr: float = RHO_FR, rho_nofr: float = RHO_NOFR) -> LambdaEstimate:
    """Estimate lambda from ln GCD_n (n = 0..N) using the last `window` of the table.

    lambda is exp of the least-squares slope of f(n) = ln GCD_n - d_a ln n!;
    rho comes from regressing f(n)/n on ln n (f ~ mu n - rho n ln n).
    """
    lg = np.asarray(log_gcd, dtype=float)
    N = len(lg) - 1
    if N < 100:
        raise TooShort(f"need at least 100 terms, got {N}")
    start = max(2, int(round(N * (1 - window))))
    ns = np.arange(start, N + 1, dtype=float)
    f = lg[start:] - d_a * _lnfact(ns)
    slope = float(np.polyfit(ns, f, 1)[0])
    neg_rho, mu = np.polyfit(np.log(ns), f / ns, 1)
    rho = float(-neg_rho)
    third = max(2, (2 * N) // 3)
    proxy = float(np.max(f[third - start:] / ns[third - start:]))
    half = len(ns) // 2
    s1 = float(np.polyfit(ns[:half], f[:half], 1)[0])
    s2 = float(np.polyfit(ns[half:], f[half:], 1)[0])
    if rho < rho_fr:
        verdict = FrVerdict.FR
    elif rho >= rho_nofr:
        verdict = FrVerdict.NO_FR
    else:
        verdict = FrVerdict.INCONCLUSIVE
    lam = 0.0 if verdict is FrVerdict.NO_FR else math.exp(slope)
    return LambdaEstimate(lam, verdict, slope, float(mu), rho, math.exp(proxy),
                          (math.exp(min(s1, s2)), math.exp(max(s1, s2))))


def lambda_estimate(series: GcdSeries, d_a: int, window: float = 2 / 3, **kw) -> LambdaEstimate:
    return lambda_from_logs(series.log_gcd, d_a, window, **kw)


def gcd2_equivalence_check(series: GcdSeries, tol: float = TAIL_TOL) -> bool:
    """Exponential rate of ln(GCD_n / GCD2_n) is below tol.

    The rate is the n-coefficient of a fit on [1, ln n, n] over the last two
    thirds, so polynomial factors between the two do not count.
    """
    N = series.depth
    if N < 100:
        raise TooShort(f"need at least 100 terms, got {N}")
    ns = np.arange(N // 3, N + 1, dtype=float)
    d = (series.log_gcd - series.log_gcd2)[N // 3:]
    X = np.column_stack([np.ones_like(ns), np.log(ns), ns])
    rate = np.linalg.lstsq(X, d, rcond=None)[0][2]
    return bool(abs(rate) < tol)


# ------------------------------------------------------------- primes

def legendre(n: int, p: int) -> int:
    """v_p(n!)."""
    v = 0
    while n:
        n //= p
        v += n
    return v


@dataclass(frozen=True)
class PrimeClass:
    label: str  # exponentially_coprime | floor_pattern | linear_rate | unclassified
    value: float  # k for floor_pattern, rate for linear_rate, raw slope otherwise
    slope: float  # slope of v_p(GCD_n) against n
    deficit_rate: float  # slope of v_p(GCD_n) - d_a v_p(n!)


def _tail_slope(ns, ys) -> float:
    return float(np.polyfit(ns, ys, 1)[0])


def classify_prime(p: int, vs, d_a: int, start: int) -> PrimeClass:
    N = len(vs) - 1
    ns = np.arange(start, N + 1, dtype=float)
    v = np.asarray(vs[start:], dtype=float)
    s = _tail_slope(ns, v)
    leg = np.array([legendre(n, p) for n in range(start, N + 1)], dtype=float)
    deficit = _tail_slope(ns, v - d_a * leg)
    if s < 0.3 / (p - 1) and s < 0.05:
        return PrimeClass("exponentially_coprime", 0.0, s, deficit)
    k = s * (p - 1)
    if round(k) >= 1 and abs(k - round(k)) < 0.15:
        return PrimeClass("floor_pattern", float(round(k)), s, deficit)
    if abs(2 * s - round(2 * s)) < 0.1 and round(2 * s) >= 1:
        return PrimeClass("linear_rate", round(2 * s) / 2, s, deficit)
    return PrimeClass("unclassified", s, s, deficit)


def prime_profile(series: GcdSeries, prime_bound: int = 101, d_a: int | None = None,
                  window: float = 2 / 3) -> tuple[dict[int, list[int]], dict[int, PrimeClass]]:
    """v_p(GCD_n) for primes p <= prime_bound, and a per-prime classification."""
    if d_a is None:
        d_a = series.pcf.d_a if series.pcf is not None else 1
    primes = primes_upto(prime_bound)
    rows = _kernels.valuation_table(series.gcd, primes)
    N = series.depth
    start = max(1, int(round(N * (1 - window))))
    exps = {p: list(r) for p, r in zip(primes, rows)}
    classes = {p: classify_prime(p, exps[p], d_a, start) for p in primes}
    return exps, classes


def coprime_prime_count(series: GcdSeries, n: int) -> int:
    """Number of primes p <= n that do not divide GCD_n."""
    g = series.gcd[n]
    return sum(1 for p in primes_upto(n) if g % p)


# --------------------------------------------------------------- GCD forms

@dataclass(frozen=True)
class PrimePower:
    """p ** (sign * mult * floor(rate * n) ** power)."""

    p: int
    rate: Fraction
    sign: int = 1
    mult: int = 1
    power: int = 1

    def exponent(self, n: int) -> int:
        return self.sign * self.mult * math.floor(self.rate * n) ** self.power

    def text(self) -> str:
        r = self.rate
        if r == 1:
            e = "n"
        elif r.denominator == 1:
            e = f"{r.numerator}n"
        elif r.numerator == 1:
            e = f"⌊n/{r.denominator}⌋"
        else:
            e = f"⌊{r.numerator}n/{r.denominator}⌋"
        if self.power != 1:
            e = f"{e}^{self.power}"
        if self.mult != 1:
            e = f"{self.mult}{e}" if e == "n" else f"{self.mult}·{e}"
        return f"{self.p}^{e}" if len(e) == 1 else f"{self.p}^({e})" if "⌊" not in e or "·" in e or "^" in e else f"{self.p}^{e}"


@dataclass(frozen=True)
class GcdForm:
    """factorial part * prod prime powers / LCM[f n]^e, evaluated exactly."""

    factorial: tuple[int, int, int] | None = (1, 0, 1)  # (u, v, power): ((un+v)!^(u))^power
    primes: tuple[PrimePower, ...] = ()
    lcm: tuple[int, int] | None = None  # (f, e)
    residual: bool = False

    def value(self, n: int) -> Fraction:
        out = Fraction(1)
        if self.factorial is not None:
            u, v, pw = self.factorial
            out *= multifactorial(u * n + v, u) ** pw
        for pp in self.primes:
            e = pp.exponent(n)
            out *= Fraction(pp.p) ** e
        if self.lcm is not None:
            f, e = self.lcm
            out /= _lcm_upto(f * n) ** e
        return out

    def log_values(self, N: int) -> np.ndarray:
        """ln of the form at n = 0..N (floats, incremental)."""
        out = np.zeros(N + 1)
        if self.factorial is not None:
            u, v, pw = self.factorial
            acc = sum(math.log(k) for k in range(v, 0, -u)) if v > 0 else 0.0
            out[0] = pw * acc
            for n in range(1, N + 1):
                acc += math.log(u * n + v)
                out[n] = pw * acc
        for pp in self.primes:
            lp = math.log(pp.p)
            out += np.array([pp.exponent(n) * lp for n in range(N + 1)])
        if self.lcm is not None:
            f, e = self.lcm
            psi = _psi_table(f * N)
            out -= e * np.array([psi[f * n] for n in range(N + 1)])
        return out

    def display(self) -> str:
        num, den = [], []
        if self.factorial is not None:
            u, v, pw = self.factorial
            if u == 1 and v == 0:
                s = "n!"
            else:
                inner = f"{u}n" if u != 1 else "n"
                if v:
                    inner += f"{v:+d}"
                s = f"({inner})" + "!" * u
            if pw != 1:
                s = f"({s})^{pw}"
            num.append(s)
        for pp in self.primes:
            (num if pp.sign > 0 else den).append(pp.text())
        if self.lcm is not None:
            f, e = self.lcm
            s = "LCM[n]" if f == 1 else f"LCM[{f}n]"
            if e != 1:
                s = f"{s}^{e}"
            den.append(s)
        top = "·".join(num) if num else "1"
        if not den:
            return top
        bottom = den[0] if len(den) == 1 else "(" + "·".join(den) + ")"
        return f"{top}/{bottom}"

    def __str__(self):
        return self.display()


def _lcm_upto(m: int) -> int:
    out = 1
    for k in range(2, m + 1):
        out = out // math.gcd(out, k) * k
    return out


def _psi_table(M: int) -> np.ndarray:
    """psi[m] = ln LCM[1..m] for m = 0..M."""
    psi = np.zeros(M + 1)
    add = np.zeros(M + 1)
    for p in primes_upto(M):
        lp = math.log(p)
        pk = p
        while pk <= M:
            add[pk] += lp
            pk *= p
    np.cumsum(add, out=psi)
    return psi


def tail_ratio(series: GcdSeries, form: GcdForm, offset: int = 0) -> np.ndarray:
    """T(n) = (1/n) ln(GCD_n / form(n + offset)) for n = 1..N (index 0 unused)."""
    N = series.depth
    lf = form.log_values(N + offset)[offset:]
    ns = np.arange(N + 1, dtype=float)
    ns[0] = 1.0
    t = (series.log_gcd - lf) / ns
    t[0] = 0.0
    return t


def tail_check(series: GcdSeries, form: GcdForm, tol: float = TAIL_TOL) -> bool:
    """|T(N)| < tol and the tail of |T| is not growing."""
    t = np.abs(tail_ratio(series, form))
    N = series.depth
    mid = t[N // 3: (2 * N) // 3].mean()
    last = t[(2 * N) // 3:].mean()
    return bool(t[N] < tol and last <= mid + 1e-12)


_NUM_RATES = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))
FIT_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


@dataclass
class FitResult:
    form: GcdForm | None
    residual_flag: bool
    reading: str  # how denominator-prime exponents matched: multiplier | power | both | n/a
    tail_value: float | None
    candidates_tried: int
    unexplained_primes: dict[int, float] = field(default_factory=dict)


def _mf_valuations(u: int, v: int, p: int, N: int) -> np.ndarray:
    """v_p((un+v)!^(u)) for n = 0..N, i.e. cumulative valuations of u*i+v."""
    out = np.zeros(N + 1)
    acc = sum(_vp(k, p) for k in range(v, 0, -u)) if v > 0 else 0
    out[0] = acc
    for n in range(1, N + 1):
        acc += _vp(u * n + v, p)
        out[n] = acc
    return out


def _vp(x: int, p: int) -> int:
    c = 0
    while x % p == 0:
        x //= p
        c += 1
    return c


def _quantize(p: int, s: float, d_a: int, ns, resid, start):
    """Map a per-prime deficit slope to a PrimePower (None for zero) or raise."""
    tol = min(0.1, 0.3 / (p - 1))
    if abs(s) < tol:
        return None, "n/a"
    if s > 0:
        for r in _NUM_RATES:
            if abs(s - float(r)) < tol:
                return PrimePower(p, r, 1), "n/a"
        raise ValueError
    # denominator: floor(n/(p-1)) with the degree as multiplier or as power
    for k in range(1, max(1, d_a) + 1):
        if abs(s + k / (p - 1)) < tol:
            mult = PrimePower(p, Fraction(1, p - 1), -1, mult=k)
            if k == 1 and d_a <= 1:
                return mult, "both"
            if k == d_a:
                powered = PrimePower(p, Fraction(1, p - 1), -1, power=d_a)
                e_mult = np.array([mult.exponent(int(n)) for n in ns])
                e_pow = np.array([powered.exponent(int(n)) for n in ns])
                err_m = np.abs(resid - e_mult).mean()
                err_p = np.abs(resid - e_pow).mean()
                return (mult, "multiplier") if err_m <= err_p else (powered, "power")
            return mult, "multiplier"
    for r in _NUM_RATES:
        if abs(s + float(r)) < tol:
            return PrimePower(p, r, -1), "n/a"
    raise ValueError


def fit_closed_form(series: GcdSeries, pcf: Pcf | None = None, tol: float = TAIL_TOL,
                    window: float = 2 / 3) -> FitResult:
    """Search factorial * prime powers / LCM forms for GCD_n.

    Small primes are fitted one at a time from their valuation deficits; the
    LCM part is then chosen by the overall tail criterion.
    """
    pcf = pcf or series.pcf
    d_a = max(1, pcf.d_a) if pcf is not None else 1
    N = series.depth
    start = max(1, int(round(N * (1 - window))))
    ns = np.arange(start, N + 1, dtype=float)
    vals = dict(zip(FIT_PRIMES, _kernels.valuation_table(series.gcd, list(FIT_PRIMES))))
    best = None
    tried = 0
    unexplained_best: dict[int, float] = {}
    lcm_options = [None]
    seen = set()
    for f in (1, 2, 3):
        for e in range(1, d_a + 1):
            if f * e not in seen:  # LCM[fn]^e depends only on f*e up to ≐
                seen.add(f * e)
                lcm_options.append((f, e))
    for u in range(1, 3 * d_a + 1):
        if best is not None:
            break  # prefer the smallest multifactorial order that works
        for v in range(0, u + 1):
            if u == 1 and v == 1:
                continue  # (n+1)! only shifts n! by a polynomial factor
            primes = []
            reading = "n/a"
            unexplained = {}
            for p in FIT_PRIMES:
                resid = np.asarray(vals[p], dtype=float) - d_a * _mf_valuations(u, v, p, N)
                s = _tail_slope(ns, resid[start:])
                try:
                    pp, rd = _quantize(p, s, d_a, ns, resid[start:], start)
                except ValueError:
                    unexplained[p] = s
                    continue
                if pp is not None:
                    primes.append(pp)
                if rd != "n/a":
                    reading = rd
            if unexplained:
                if not unexplained_best or len(unexplained) < len(unexplained_best):
                    unexplained_best = unexplained
                continue
            for lcm in lcm_options:
                tried += 1
                form = GcdForm((u, v, d_a), tuple(primes), lcm)
                t = np.abs(tail_ratio(series, form))
                score = t[N]
                ok = t[N] < tol and t[(2 * N) // 3:].mean() <= t[N // 3:(2 * N) // 3].mean() + 1e-12
                if ok and (best is None or score < best[1] - 1e-12):
                    best = (form, score, reading)
    if best is None:
        return FitResult(None, True, "n/a", None, tried, unexplained_best)
    return FitResult(best[0], False, best[2], float(best[1]), tried, {})


# ------------------------------------------------------------ form parsing

_FACT = re.compile(r"^\(?(?:(\d*)n([+-]\d+)?)\)?(!+)$")


def parse_form(text: str) -> GcdForm:
    """Parse strings like "n!/2^n", "(3n+1)!!!", "n!·5^n/(2^n·3^⌊n/2⌋·LCM[n])",
    "(n!)^3/LCM[n]^3" or "1" into a GcdForm."""
    s = text.replace(" ", "").replace("·", "*").replace("floor(", "⌊").replace("**", "^")
    s = re.sub(r"⌊([^⌋)]*)\)", r"⌊\1⌋", s)
    if not s or not _balanced(s):
        raise ValueError(f"unbalanced brackets in GCD form {text!r}")
    m = re.match(r"^\((.*)\)\^(\d+)$", s)
    if m and _balanced(m.group(1)) and _split_top(m.group(1))[1]:
        return _power_form(parse_form(m.group(1)), int(m.group(2)))
    num_s, den_s = _split_top(s)
    factorial = None
    primes: list[PrimePower] = []
    lcm = None
    for part, sign in [(num_s, 1), (den_s, -1)]:
        if not part or part == "1":
            continue
        if part.startswith("(") and part.endswith(")") and _balanced(part[1:-1]):
            part = part[1:-1]
        for atom in _split_product(part):
            fa, pp, lc = _parse_atom(atom, sign)
            if fa is not None:
                if sign < 0 or factorial is not None:
                    raise ValueError(f"only one factorial in the numerator is supported: {text!r}")
                factorial = fa
            if pp is not None:
                primes.append(pp)
            if lc is not None:
                if sign > 0:
                    raise ValueError(f"LCM must be in the denominator: {text!r}")
                lcm = lc
    return GcdForm(factorial, tuple(primes), lcm)


def _power_form(f: GcdForm, k: int) -> GcdForm:
    fact = None if f.factorial is None else (*f.factorial[:2], f.factorial[2] * k)
    primes = tuple(PrimePower(pp.p, pp.rate, pp.sign, pp.mult * k, pp.power) for pp in f.primes)
    lcm = None if f.lcm is None else (f.lcm[0], f.lcm[1] * k)
    return GcdForm(fact, primes, lcm, f.residual)


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch in "([⌊"
        depth -= ch in ")]⌋"
        if depth < 0:
            return False
    return depth == 0


def _split_top(s: str):
    depth = 0
    for i, ch in enumerate(s):
        if ch in "([⌊":
            depth += 1
        elif ch in ")]⌋":
            depth -= 1
        elif ch == "/" and depth == 0:
            return s[:i], s[i + 1:]
    return s, ""


def _split_product(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch in "([⌊":
            depth += 1
        elif ch in ")]⌋":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [x for x in out if x]


def _parse_atom(atom: str, sign: int):
    power = 1
    m = re.match(r"^\((.*)\)\^(\d+)$", atom)
    if m and _balanced(m.group(1)):
        atom, power = m.group(1), int(m.group(2))
    m = _FACT.match(atom)
    if m:
        coef = int(m.group(1)) if m.group(1) else 1
        v = int(m.group(2)) if m.group(2) else 0
        u = len(m.group(3))
        if coef != u:
            raise ValueError(f"multifactorial {atom!r}: coefficient must equal the order")
        return (u, v, power), None, None
    m = re.match(r"^(?:LCM|lcm)\[(\d*)n\](?:\^(\d+))?$", atom)
    if m:
        f = int(m.group(1)) if m.group(1) else 1
        e = int(m.group(2)) if m.group(2) else power
        return None, None, (f, e)
    m = re.match(r"^(\d+)\^(.+)$", atom)
    if m:
        p = int(m.group(1))
        ex = m.group(2)
        if ex.startswith("(") and ex.endswith(")"):
            ex = ex[1:-1]
        mm = re.match(r"^(\d*)n$", ex)
        if mm:
            return None, PrimePower(p, Fraction(int(mm.group(1)) if mm.group(1) else 1), sign), None
        mm = re.match(r"^⌊(\d*)n/(\d+)⌋(?:\^(\d+))?$", ex)
        if mm:
            r = Fraction(int(mm.group(1)) if mm.group(1) else 1, int(mm.group(2)))
            pw = int(mm.group(3)) if mm.group(3) else 1
            return None, PrimePower(p, r, sign, power=pw), None
        raise ValueError(f"cannot parse exponent in {atom!r}")
    raise ValueError(f"cannot parse GCD form atom {atom!r}")


# --------------------------------------------------------------- profile

@dataclass
class GcdProfile:
    lambda_estimate: float
    lambda_window: tuple[float, float]
    fr_verdict: FrVerdict
    slope_model: tuple[float, float]  # (mu, rho)
    limsup_proxy: float
    prime_exponents: dict[int, list[int]]
    prime_classes: dict[int, PrimeClass]
    closed_form: GcdForm | None
    residual_flag: bool
    form_reading: str
    gcd2_equivalent: bool

    def to_json(self) -> dict:
        return {
            "lambda": self.lambda_estimate,
            "lambda_window": list(self.lambda_window),
            "limsup_proxy": self.limsup_proxy,
            "fr_verdict": self.fr_verdict.value,
            "slope_model": {"mu": self.slope_model[0], "rho": self.slope_model[1]},
            "prime_classes": {
                str(p): {"class": c.label, "value": c.value, "deficit_rate": round(c.deficit_rate, 6)}
                for p, c in self.prime_classes.items()
            },
            "closed_form": self.closed_form.display() if self.closed_form else None,
            "form_reading": self.form_reading,
            "residual_flag": self.residual_flag,
            "gcd2_equivalent": self.gcd2_equivalent,
        }


def profile(pcf: Pcf, depth: int, prime_bound: int = 101, table: ConvergentTable | None = None,
            series: GcdSeries | None = None) -> GcdProfile:
    """Run the whole GCD analysis for one PCF."""
    if series is None:
        table = table or convergents(pcf, depth)
        series = gcd_series(table)
    est = lambda_estimate(series, pcf.d_a)
    exps, classes = prime_profile(series, prime_bound, pcf.d_a)
    from .pcf_core import Kind, classify

    fit = None
    if est.fr_verdict is FrVerdict.FR or classify(pcf).kind is Kind.UNBALANCED_LOW:
        fit = fit_closed_form(series, pcf)
    return GcdProfile(
        lambda_estimate=est.lam,
        lambda_window=est.window,
        fr_verdict=est.fr_verdict,
        slope_model=(est.mu, est.rho),
        limsup_proxy=est.limsup_proxy,
        prime_exponents=exps,
        prime_classes=classes,
        closed_form=fit.form if fit else None,
        residual_flag=fit.residual_flag if fit else False,
        form_reading=fit.reading if fit else "n/a",
        gcd2_equivalent=gcd2_equivalence_check(series),
    )
