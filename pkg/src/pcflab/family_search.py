"""Searches for a_n with factorial reduction and the conjectured a_n families."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .gcd_lab import (Degenerate, FrVerdict, RHO_FR, RHO_NOFR, TooShort, gcd_series,
                      lambda_from_logs, log_profile)
from .irrationality import delta_formula
from .pcf_core import Pcf, alpha, convergents
from .polyring import (Poly, as_poly, coefficient_box, discriminant_is_rational_square,
                       divisors, equal_degree_split, eval_at, rational_roots)
from .transforms import RationalCf, RatFunc, integerize


class InvalidM(ValueError):
    pass


class NotSplittable(ValueError):
    pass


class FamilyKind(str, Enum):
    CONJECTURE13 = "Conjecture13"
    CONJECTURE14_LINEAR = "Conjecture14_linear"
    CONJECTURE14_SYMMETRIC = "Conjecture14_symmetric"
    PYTHAGOREAN_LINEAR = "PythagoreanLinear"
    AD_HOC = "AdHoc"


@dataclass(frozen=True)
class FamilyDescriptor:
    kind: FamilyKind
    params: tuple  # sorted (name, value) pairs

    def get(self, key, default=None):
        return dict(self.params).get(key, default)

    def a(self, k) -> Poly:
        """The family member with free parameter k."""
        k = Fraction(k)
        p = dict(self.params)
        if self.kind is FamilyKind.CONJECTURE14_LINEAR:
            return Poly([k, p["A"]])
        if self.kind is FamilyKind.CONJECTURE14_SYMMETRIC:
            return Poly([k * (1 - p["x1"] - p["x2"]), 2 * k])
        if self.kind is FamilyKind.PYTHAGOREAN_LINEAR:
            return Poly([k, p["z"]])
        raise ValueError(f"{self.kind.value} has no one-parameter member rule")

    def label(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind.value}({inner})"


def _desc(kind, **params) -> FamilyDescriptor:
    return FamilyDescriptor(kind, tuple(sorted(params.items())))


# ------------------------------------------------------------------ search

@dataclass
class SearchBox:
    """Inclusive coefficient ranges for a, lowest degree first."""

    ranges: list[tuple[int, int]]
    depth: int = 1000
    shallow_depth: int = 200
    rho_loose: float = RHO_NOFR
    rho_fr: float = RHO_FR

    def size(self) -> int:
        return math.prod(hi - lo + 1 for lo, hi in self.ranges)

    def candidates(self):
        for a in coefficient_box(self.ranges):
            if not a.is_zero():
                yield a


@dataclass(frozen=True)
class SearchHit:
    a: Poly
    lam: float
    rho: float
    family: FamilyDescriptor | None

    def row(self) -> dict:
        return {"a": str(self.a), "lambda": round(self.lam, 6), "rho": round(self.rho, 6),
                "family": self.family.label() if self.family else ""}


def fr_test(pcf: Pcf, depth: int, rho_fr: float = RHO_FR, rho_nofr: float = RHO_NOFR):
    """Return the LambdaEstimate of a PCF at `depth`, or None when degenerate."""
    try:
        lg = log_profile(pcf, depth)
    except Degenerate:
        return None
    if not all(math.isfinite(x) for x in lg):
        return None
    try:
        return lambda_from_logs(lg, max(pcf.d_a, 0), rho_fr=rho_fr, rho_nofr=rho_nofr)
    except TooShort:
        return None


def _test_candidate(args):
    a, b, box = args
    pcf = Pcf(a, b)
    est = fr_test(pcf, box.shallow_depth)
    if est is None or est.rho >= box.rho_loose:
        return None
    est = fr_test(pcf, box.depth, box.rho_fr)
    if est is None or est.fr_verdict is not FrVerdict.FR:
        return None
    return a, est.lam, est.rho


def search_a_for_fr(b, box: SearchBox, workers: int = 1) -> list[SearchHit]:
    """Every a in the box for which PCF[a, b] shows FR (two-stage filter)."""
    b = as_poly(b)
    jobs = [(a, b, box) for a in box.candidates()]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_test_candidate, jobs, chunksize=8))
    else:
        results = [_test_candidate(j) for j in jobs]
    hits = [SearchHit(a, lam, rho, match_family(a, b)) for r in results if r for a, lam, rho in [r]]
    hits.sort(key=lambda h: tuple(h.a.coeffs))
    return hits


# -------------------------------------------------------------- families

def conjecture13_member(r, s, B, m, integerize_result: bool = False):
    """b = B r s, a = (B/m) r(n+1) - m s(n)."""
    r, s = as_poly(r), as_poly(s)
    B, m = Fraction(B), Fraction(m)
    if r.degree != s.degree:
        raise ValueError("r and s must have equal degree")
    if m == 0 or m * m == abs(B):
        raise InvalidM(f"m = {m} is excluded (m = 0 or m^2 = |B|)")
    a = r.shift(1) * (B / m) - s * m
    b = r * s * B
    cf = RationalCf(RatFunc(a), RatFunc(b))
    if integerize_result:
        return integerize(cf)
    return cf


def _m_candidates(B: Fraction) -> list[Fraction]:
    nums = divisors(abs(B.numerator) * B.denominator)
    out = set()
    for p in nums:
        for q in nums:
            for sgn in (1, -1):
                m = Fraction(sgn * p, q)
                if m * m != abs(B):
                    out.add(m)
    return sorted(out)


def conjecture14_families(b) -> list[FamilyDescriptor]:
    """Family-1 descriptors (one per distinct A = B/m - m) and the family-2 descriptor."""
    b = as_poly(b)
    if b.degree != 2 or not discriminant_is_rational_square(b):
        raise NotSplittable(f"{b} is not B(n - x1)(n - x2) with rational roots")
    B = b.lead
    roots = []
    for r, k in rational_roots(b).items():
        roots += [r] * k
    x1, x2 = sorted(roots)
    seen = {}
    for m in _m_candidates(B):
        A = B / m - m
        if A not in seen or abs(m) < abs(seen[A]) or (abs(m) == abs(seen[A]) and m > seen[A]):
            seen[A] = m
    out = [_desc(FamilyKind.CONJECTURE14_LINEAR, B=B, m=m, A=A) for A, m in sorted(seen.items())]
    out.append(_desc(FamilyKind.CONJECTURE14_SYMMETRIC, B=B, x1=x1, x2=x2))
    return out


def leading_coefficient_valid(A, B) -> bool:
    """A = B/m - m for rational m iff m^2 + A m - B has a rational root."""
    return bool(rational_roots(Poly([-Fraction(B), Fraction(A), 1])))


def match_family(a, b) -> FamilyDescriptor | None:
    """Identify a known family template containing PCF[a, b]."""
    a, b = as_poly(a), as_poly(b)
    if b.degree == 2 and a.degree == 1 and discriminant_is_rational_square(b):
        B = b.lead
        roots = []
        for r, k in rational_roots(b).items():
            roots += [r] * k
        x1, x2 = sorted(roots)
        k = a.coeffs[1] / 2
        if k != 0 and a == Poly([k * (1 - x1 - x2), 2 * k]):
            return _desc(FamilyKind.CONJECTURE14_SYMMETRIC, B=B, x1=x1, x2=x2, k=k)
        A = a.lead
        for m in rational_roots(Poly([-B, A, 1])):
            if m != 0 and m * m != abs(B):
                return _desc(FamilyKind.CONJECTURE14_LINEAR, B=B, m=m, A=A, k=a.coeffs[0])
    split = equal_degree_split(b)
    if split and a.degree == split.left.degree:
        B = split.scale
        for r, s in ((split.left, split.right), (split.right, split.left)):
            for m in rational_roots(Poly([-B, a.lead, 1])):
                if m == 0 or m * m == abs(B):
                    continue
                if r.shift(1) * (B / m) - s * m == a:
                    return _desc(FamilyKind.CONJECTURE13, B=B, m=m, r=str(r), s=str(s))
    return None


def pythagorean_z(x: int, y_range=(-100, 100)) -> set[int]:
    """All z >= 0 with z^2 = x^2 + y^2 + 6xy for some integer y in y_range."""
    lo, hi = y_range
    out = set()
    for y in range(lo, hi + 1):
        v = x * x + y * y + 6 * x * y
        if v >= 0:
            z = math.isqrt(v)
            if z * z == v:
                out.add(z)
    return out


def pythagorean_report(x: int, bound: int = 100) -> dict[str, set[int]]:
    """z sets with y over all integers and over nonnegative integers in [-bound, bound]."""
    return {"all_y": pythagorean_z(x, (-bound, bound)),
            "nonnegative_y": pythagorean_z(x, (0, bound))}


# ------------------------------------------------------- delta trend in k

@dataclass(frozen=True)
class Theorem3Row:
    k: int
    alpha: float
    lam_measured: float
    delta_measured: float
    lam_bound: float | None
    delta_bound: float | None
    fr: bool


def theorem3_trend(base_a, b, k_list, depth: int = 1000,
                   lam_bound: float | None = None) -> list[Theorem3Row]:
    """delta_k from the formula with measured lambda_k for PCF[k base_a, b].

    `lam_bound` is a proven uniform lower bound on lambda, if one is known; for
    base_a = 2n+1, b = -n^2 it defaults to 1/(2e).
    """
    base_a, b = as_poly(base_a), as_poly(b)
    if lam_bound is None and base_a == Poly([1, 2]) and b == Poly([0, 0, -1]):
        lam_bound = 1 / (2 * math.e)
    rows = []
    for k in k_list:
        pcf = Pcf(base_a * k, b)
        est = fr_test(pcf, depth)
        fr = est is not None and est.fr_verdict is FrVerdict.FR
        al = float(alpha(pcf))
        dm = delta_formula(al, pcf.B, est.lam) if fr else float("nan")
        db = delta_formula(al, pcf.B, lam_bound) if lam_bound else None
        rows.append(Theorem3Row(k, al, est.lam if est else 0.0, float(dm), lam_bound,
                                None if db is None else float(db), fr))
    return rows


# ------------------------------------------------------- symmetric PCFs

@dataclass
class AppendixDVerdict:
    symmetry: bool
    a_antisymmetric: bool  # a(n) + a(-1-n) = 0
    b_even: bool  # b(n) - b(-n) = 0
    b0_zero: bool
    l_max: int
    fixed_l: int | None = None  # smallest l with n!/(2^l LCM[n]) | GCD_n for all n
    rate_l: int | None = None  # smallest l with n!/(2^(l n) LCM[n]) | GCD_n
    odd_part_ok: bool | None = None
    depth: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def reading(self) -> str | None:
        if self.fixed_l is not None and self.fixed_l <= self.l_max:
            return "fixed"
        if self.rate_l is not None and self.rate_l <= self.l_max:
            return "rate"
        return None

    @property
    def passed(self) -> bool:
        return self.symmetry and self.reading is not None


def appendixD_check(a, b, depth: int = 1000, l_max: int | None = None) -> AppendixDVerdict:
    """Symmetry condition, then the divisibility n!/(2^l LCM[n]) | GCD_n.

    Both readings of the power of two are measured: a fixed l, and l per
    index (2^(l n)).
    """
    a, b = as_poly(a), as_poly(b)
    if l_max is None:
        l_max = 2 * max(a.degree, 0) + 2
    anti = (a + a.compose_linear(-1, -1)).is_zero()
    even = (b - b.compose_linear(-1, 0)).is_zero()
    b0 = eval_at(b, 0) == 0
    v = AppendixDVerdict(anti and even and b0, anti, even, b0, l_max)
    if not v.symmetry:
        return v
    pcf = Pcf(a, b)
    series = gcd_series(convergents(pcf, depth))
    fact = 1
    lcm = 1
    worst_fixed = 0
    worst_rate = 0
    odd_ok = True
    for n in range(1, depth + 1):
        fact *= n
        lcm = lcm * n // math.gcd(lcm, n)
        g = series.gcd[n]
        r = fact // math.gcd(fact, g * lcm)  # what is still missing from GCD_n
        if r & (r - 1):
            odd_ok = False
            v.notes.append(f"odd part fails at n = {n}")
            break
        ln = r.bit_length() - 1
        worst_fixed = max(worst_fixed, ln)
        worst_rate = max(worst_rate, -(-ln // n))
    v.depth = depth
    v.odd_part_ok = odd_ok
    if odd_ok:
        v.fixed_l = worst_fixed
        v.rate_l = worst_rate
    return v


# ------------------------------------------------------------------ presets

def table3_universe() -> list[Poly]:
    """All b = c2 n^2 + c1 n + c0 with coefficients in 1..4."""
    return list(coefficient_box([(1, 4), (1, 4), (1, 4)]))


TABLE3_BOX = SearchBox([(1, 5), (1, 5)], depth=1000, shallow_depth=200)
TABLE4_B = Poly([0, 0, 0, 0, -1])
TABLE4_BOX = SearchBox([(0, 15), (0, 3), (1, 3)], depth=1000, shallow_depth=200)


def reproduce_table3(box: SearchBox = TABLE3_BOX, workers: int = 1) -> dict[Poly, list[SearchHit]]:
    return {b: search_a_for_fr(b, box, workers) for b in table3_universe()}


def reproduce_table4(box: SearchBox = TABLE4_BOX, workers: int = 1) -> list[SearchHit]:
    return search_a_for_fr(TABLE4_B, box, workers)


def minus_n4_k(m: int) -> int:
    """k = m^2 - m + 1 for the a = 2n^2 + 2n + k family of b = -n^4."""
    return m * m - m + 1

