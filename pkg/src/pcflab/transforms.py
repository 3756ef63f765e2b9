"""Inflation and deflation of continued fractions, integerization, sqrt(p) reports."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .gcd_lab import gcd_series
from .pcf_core import Pcf, convergents
from .polyring import (Poly, as_poly, display, divisors, eval_at, factor, factor_int,
                       poly_divisors, poly_gcd, rational_roots)


class ZeroScaler(ValueError):
    pass


@dataclass(frozen=True)
class RatFunc:
    """num/den over Q, kept in lowest terms with a monic denominator."""

    num: Poly
    den: Poly = field(default_factory=lambda: Poly([1]))

    def __post_init__(self):
        num, den = as_poly(self.num), as_poly(self.den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den) if not num.is_zero() else den
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den.lead
        num, den = num.scale(1 / lc), den.scale(1 / lc)
        if num.is_zero():
            den = Poly([1])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def of(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, tuple) and len(x) == 2:
            return cls(as_poly(x[0]), as_poly(x[1]))
        return cls(as_poly(x))

    @property
    def is_poly(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> Poly:
        if not self.is_poly:
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def __call__(self, n) -> Fraction:
        d = eval_at(self.den, n)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at n = {n}")
        return Fraction(eval_at(self.num, n)) / Fraction(d)

    def __mul__(self, other):
        o = RatFunc.of(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = RatFunc.of(other)
        except TypeError:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def shift(self, k) -> "RatFunc":
        return RatFunc(self.num.shift(k), self.den.shift(k))

    def display(self) -> str:
        if self.is_poly:
            return display(self.num)
        return f"({display(self.num)})/({display(self.den)})"

    __str__ = display


@dataclass(frozen=True)
class RationalCf:
    """a(0) + b(1)/(a(1) + ...) with rational-function a and b."""

    a: RatFunc
    b: RatFunc
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", RatFunc.of(self.a))
        object.__setattr__(self, "b", RatFunc.of(self.b))

    @classmethod
    def from_pcf(cls, pcf: Pcf) -> "RationalCf":
        return cls(RatFunc(pcf.a), RatFunc(pcf.b), pcf.name)

    @property
    def is_integral(self) -> bool:
        return (self.a.is_poly and self.b.is_poly
                and self.a.num.is_integral and self.b.num.is_integral)

    def to_pcf(self) -> Pcf:
        if not self.is_integral:
            raise ValueError(f"{self} does not have integer polynomial coefficients")
        return Pcf(self.a.num, self.b.num, self.name)

    def label(self) -> str:
        return self.name or f"CF[{self.a.display()}, {self.b.display()}]"

    __str__ = label


def _as_cf(cf) -> RationalCf:
    return RationalCf.from_pcf(cf) if isinstance(cf, Pcf) else cf


def rational_convergents(cf, depth: int) -> tuple[list[Fraction], list[Fraction]]:
    """p, q for n = -1..depth (list position n+1), exact rationals."""
    cf = _as_cf(cf)
    p = [Fraction(1), cf.a(0)]
    q = [Fraction(0), Fraction(1)]
    for n in range(1, depth + 1):
        an, bn = cf.a(n), cf.b(n)
        p.append(an * p[-1] + bn * p[-2])
        q.append(an * q[-1] + bn * q[-2])
    return p, q


def _check_scaler(c: RatFunc):
    for part in (c.num, c.den):
        for r in rational_roots(part):
            if r >= 0 and r.denominator == 1:
                raise ZeroScaler(f"c has a zero or pole at n = {r}")


def inflate(cf, c) -> RationalCf:
    """a'_n = c_n a_n, b'_n = c_n c_(n-1) b_n.

    Convergents satisfy p'_n = c_0 C_n p_n and q'_n = C_n q_n with
    C_n = c_1...c_n, so the limit is multiplied by c(0).
    """
    cf = _as_cf(cf)
    c = RatFunc.of(c)
    if c.num.is_zero():
        raise ZeroScaler("c is identically zero")
    _check_scaler(c)
    return RationalCf(cf.a * c, cf.b * c * c.shift(-1), cf.name and f"{cf.name} inflated")


def limit_scale(c) -> Fraction:
    return RatFunc.of(c)(0)


@dataclass
class Deflation:
    result: Pcf
    c: Poly
    limit_scale: Fraction  # limit(original) = limit_scale * limit(result)
    sqrt_report: list[int]

    def __iter__(self):
        yield self.result
        yield self.c


def _integral_quotient(num: Poly, den: Poly):
    q, r = divmod(num, den)
    if not r.is_zero() or not q.is_integral:
        return None
    return q


def sqrt_opportunities(pcf: Pcf) -> list[int]:
    """Primes p with p | a, p | b and p^2 not dividing b (as polynomials)."""
    ca = math.gcd(*pcf.a.int_coeffs())
    cb = math.gcd(*pcf.b.int_coeffs())
    out = []
    for p in sorted(factor_int(math.gcd(ca, cb))):
        if cb % (p * p):
            out.append(p)
    return out


def deflate(pcf: Pcf) -> Deflation:
    """Largest c (by degree, then content) with c | a and c(n) c(n-1) | b over Z[n]."""
    best = Poly([1])
    best_key = (0, 1)
    for d in poly_divisors(pcf.a):
        if d.degree < 1:
            continue
        prim = d.primitive()
        if prim.lead < 0:
            prim = -prim
        if any(r >= 0 and r.denominator == 1 for r in rational_roots(prim)):
            continue
        for k in sorted(divisors(math.gcd(*pcf.a.int_coeffs())), reverse=True):
            for sgn in (1, -1):
                c = prim * (sgn * k)
                if _integral_quotient(pcf.a, c) is None:
                    continue
                if _integral_quotient(pcf.b, c * c.shift(-1)) is None:
                    continue
                key = (c.degree, k)
                if key > best_key:
                    best, best_key = c, key
                break
    # constant part: largest k with k | a and k^2 | b
    if best.degree < 1:
        ca = math.gcd(*pcf.a.int_coeffs())
        cb = math.gcd(*pcf.b.int_coeffs())
        k = max(k for k in divisors(ca) if cb % (k * k) == 0)
        best = Poly([k])
    a2 = _integral_quotient(pcf.a, best)
    b2 = _integral_quotient(pcf.b, best * best.shift(-1))
    result = Pcf(a2, b2, pcf.name and f"{pcf.name} deflated")
    return Deflation(result, best, Fraction(eval_at(best, 0)), sqrt_opportunities(result))


def scaling_check(pcf, c, depth: int) -> bool:
    """Exact check of p'_n = c_0 C_n p_n, q'_n = C_n q_n and, for integer
    fractions, GCD'_n = C_n GCD_n (c_0 = 1) at every n <= depth."""
    cf = _as_cf(pcf)
    c = RatFunc.of(c)
    infl = inflate(cf, c)
    p, q = rational_convergents(cf, depth)
    p2, q2 = rational_convergents(infl, depth)
    c0 = c(0)
    C = Fraction(1)
    for n in range(-1, depth + 1):
        if n >= 1:
            C *= c(n)
        i = n + 1
        cp = C * c0 if n >= 0 else Fraction(1)
        if p2[i] != cp * p[i] or q2[i] != C * q[i]:
            return False
        if p2[i] * q[i] != c0 * p[i] * q2[i]:
            return False
    if cf.is_integral and infl.is_integral and c0 == 1:
        s1 = gcd_series(convergents(cf.to_pcf(), depth))
        s2 = gcd_series(convergents(infl.to_pcf(), depth))
        C = Fraction(1)
        for n in range(depth + 1):
            if n >= 1:
                C *= c(n)
            if s2.gcd[n] != C * s1.gcd[n]:
                return False
    return True


def _denominator_pool(cf: RationalCf) -> list[tuple[Poly, int]]:
    pool: dict[Poly, int] = {}
    for den, shifts in ((cf.a.den, (0,)), (cf.b.den, (0, 1))):
        if den.degree < 1:
            continue
        for f, m in factor(den).factors + factor(den).undecidable:
            for s in shifts:
                g = f.shift(s).monic()
                pool[g] = max(pool.get(g, 0), m)
    return sorted(pool.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs))


def _min_constant(ca: Poly, cb: Poly) -> int:
    """Smallest k > 0 with k ca and k^2 cb integral."""
    da = 1
    for x in ca.coeffs:
        da = da * x.denominator // math.gcd(da, x.denominator)
    db = 1
    for x in cb.coeffs:
        db = db * x.denominator // math.gcd(db, x.denominator)
    # k^2 must be a multiple of db: take the square-root-ceiling of each prime power
    kb = 1
    for p, e in factor_int(db).items():
        kb *= p ** ((e + 1) // 2)
    return da * kb // math.gcd(da, kb)


def integerize(cf) -> tuple[Pcf, Poly]:
    """Inflate by the c of least degree, then least positive content, that makes
    a and b integer polynomials.  Returns (Pcf, c); the limit scales by c(0)."""
    cf = _as_cf(cf)
    if cf.is_integral:
        return cf.to_pcf(), Poly([1])
    pool = _denominator_pool(cf)
    cands = []
    for exps in product(*[range(m + 1) for _, m in pool]):
        c = Poly([1])
        for (f, _), e in zip(pool, exps):
            c = c * f**e
        cands.append(c)
    cands.sort(key=lambda c: (c.degree, c.coeffs))
    for c in cands:
        if not ((cf.a * c).is_poly and (cf.b * c * c.shift(-1)).is_poly):
            continue
        c = c.primitive()
        if c.lead < 0:
            c = -c
        k = _min_constant((cf.a * c).num, (cf.b * c * c.shift(-1)).num)
        c_full = c.scale(k)
        infl = inflate(cf, c_full)
        if infl.is_integral:
            return infl.to_pcf(), c_full
    raise ValueError(f"no polynomial scaler integerizes {cf}")
