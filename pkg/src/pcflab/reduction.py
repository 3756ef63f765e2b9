"""Reduced recursions u'_m = p_m / G(m + offset) and fast evaluation with them."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import _kernels
from .gcd_lab import GcdForm
from .pcf_core import Pcf, TailEstimateUnreliable
from .polyring import Poly, display, eval_at, int_values


class ZeroForm(ValueError):
    pass


class NotVerified(RuntimeError):
    pass


def form_values(form: GcdForm, K: int) -> list[Fraction]:
    """G(0), ..., G(K) exactly, built incrementally."""
    out = []
    fact = Fraction(1)
    if form.factorial is not None:
        u, v, pw = form.factorial
        base = 1
        for k in range(v, 0, -u):
            base *= k
        fact = Fraction(base)
    lcm = 1
    for n in range(K + 1):
        if form.factorial is not None and n > 0:
            u, v, pw = form.factorial
            fact *= u * n + v
        val = fact ** (form.factorial[2] if form.factorial is not None else 1)
        for pp in form.primes:
            val *= Fraction(pp.p) ** pp.exponent(n)
        if form.lcm is not None:
            f, e = form.lcm
            for m in range(f * (n - 1) + 1 if n else 1, f * n + 1):
                lcm = lcm * m // math.gcd(lcm, m)
            val /= lcm**e
        if val == 0:
            raise ZeroForm(f"GCD form vanishes at n = {n}")
        out.append(val)
    return out


def _symbolic_parts(form: GcdForm):
    """(c, F) with G(n+1)/G(n) = c F(n+1) for factorial * c^n forms, else None."""
    if form.lcm is not None:
        return None
    c = Fraction(1)
    for pp in form.primes:
        if pp.power != 1 or pp.rate.denominator != 1:
            return None
        c *= Fraction(pp.p) ** (pp.sign * pp.mult * pp.rate.numerator)
    if form.factorial is None:
        return c, Poly([1])
    u, v, pw = form.factorial
    return c, Poly([v, u]) ** pw


@dataclass
class ReducedRecursion:
    """u'_m = G(m-1+off)/G(m+off) a(m) u'_(m-1) + G(m-2+off)/G(m+off) b(m) u'_(m-2).

    With off = 1 (the default) G(m+1) u'_m reproduces p_m and q_m.  When the
    form is a factorial times c^n the rule is kept as polynomials in the
    shifted form L(n) u'_(n+2) = M1(n) a_(n+1) u'_(n+1) + M2(n) b_(n+1) u'_n.
    """

    source: Pcf
    form: GcdForm
    offset: int = 1
    L: Poly | None = None
    M1: Poly | None = None
    M2: Poly | None = None
    verified: bool = False
    _gvals: list = field(default_factory=list, repr=False)

    @property
    def symbolic(self) -> bool:
        return self.L is not None

    def g(self, k: int) -> Fraction:
        if k >= len(self._gvals):
            self._gvals = form_values(self.form, max(k, 2 * len(self._gvals), 16))
        return self._gvals[k]

    def ratios(self, m: int) -> tuple[Fraction, Fraction]:
        """(r1, r2) multiplying a(m) u'_(m-1) and b(m) u'_(m-2)."""
        off = self.offset
        gm = self.g(m + off)
        return self.g(m - 1 + off) / gm, self.g(m - 2 + off) / gm

    def step_arrays(self, depth: int, start: int = 1):
        """Integer (n1, n2, den) for steps m = start..depth."""
        a = self.source.a
        b = self.source.b
        n1, n2, den = [], [], []
        if self.symbolic:
            av = int_values(a, start, depth + 1)
            bv = int_values(b, start, depth + 1)
            m1 = int_values(self.M1, start - 1, depth)
            m2 = int_values(self.M2, start - 1, depth)
            ls = int_values(self.L, start - 1, depth)
            return ([x * y for x, y in zip(m1, av)], [x * y for x, y in zip(m2, bv)], ls)
        self.g(depth + self.offset)
        for m in range(start, depth + 1):
            r1, r2 = self.ratios(m)
            f1 = r1 * eval_at(a, m)
            f2 = r2 * eval_at(b, m)
            d = f1.denominator * f2.denominator // math.gcd(f1.denominator, f2.denominator)
            n1.append(int(f1 * d))
            n2.append(int(f2 * d))
            den.append(d)
        return n1, n2, den

    def initial(self, branch: str) -> tuple[Fraction, Fraction]:
        """Canonical (u'_-1, u'_0) for the p or q branch."""
        a0 = eval_at(self.source.a, 0)
        off = self.offset
        if branch == "p":
            return Fraction(1) / self.g(off - 1), Fraction(a0) / self.g(off)
        if branch == "q":
            return Fraction(0), Fraction(1) / self.g(off)
        raise ValueError("branch must be 'p' or 'q'")

    def display(self) -> str:
        """Shifted form, e.g. n(n-1)u'_n = 2(n-1)a_(n-1)u'_(n-1) + 4b_(n-1)u'_(n-2)."""
        if not self.symbolic:
            return (f"u'_n = G(n-1+{self.offset})/G(n+{self.offset})·a_n·u'_(n-1) + "
                    f"G(n-2+{self.offset})/G(n+{self.offset})·b_n·u'_(n-2), G = {self.form.display()}")
        L, M1, M2 = (self.L.shift(-2), self.M1.shift(-2), self.M2.shift(-2))
        return f"{_factored(L)}u'_n = {_factored(M1)}a_(n-1)u'_(n-1) + {_factored(M2)}b_(n-1)u'_(n-2)"

    def display_table_form(self) -> str:
        """Form with u'_(n+2) on the left, as in tables of integer-yielding recursions."""
        if not self.symbolic:
            return self.display()
        return (f"{_factored(self.L)}u'_(n+2) = {_factored(self.M1)}a_(n+1)u'_(n+1) + "
                f"{_factored(self.M2)}b_(n+1)u'_n")

    def display_expanded(self) -> str:
        """Shifted form with a and b substituted."""
        if not self.symbolic:
            return self.display()
        a1 = self.source.a.shift(-1)
        b1 = self.source.b.shift(-1)
        L, M1, M2 = (self.L.shift(-2), self.M1.shift(-2), self.M2.shift(-2))
        return f"({display(L)})u'_n = ({display(M1 * a1)})u'_(n-1) + ({display(M2 * b1)})u'_(n-2)"


def _factored(p: Poly) -> str:
    """Integer scale times linear factors, e.g. 2(n-1) or n(n+1); "" for 1."""
    from .polyring import factor

    if p.degree < 1:
        s = display(p)
        return "" if s == "1" else s
    fz = factor(p)
    if fz.undecidable or any(f.degree != 1 or not f.is_integral for f, _ in fz.factors):
        return f"({display(p)})"
    parts = []
    for f, m in sorted(fz.factors, key=lambda fm: fm[0].coeffs[0] != 0):
        s = "n" if f.coeffs[0] == 0 else f"({display(f)})"
        parts.append(s if m == 1 else f"{s}^{m}")
    scale = fz.scale
    lead = "" if scale == 1 else "-" if scale == -1 else str(scale)
    return lead + "".join(parts)


def build_reduced(pcf: Pcf, form: GcdForm, offset: int = 1) -> ReducedRecursion:
    rr = ReducedRecursion(pcf, form, offset)
    rr.g(offset + 8)  # raises ZeroForm early
    parts = _symbolic_parts(form)
    if parts is not None:
        c, F = parts
        cn, cd = c.numerator, c.denominator
        rr.L = F.shift(2) * F.shift(1) * (cn * cn)
        rr.M1 = F.shift(1) * (cn * cd)
        rr.M2 = Poly([cd * cd])
        # drop a common integer factor of the three polynomials
        g = 0
        for P in (rr.L, rr.M1, rr.M2):
            for x in P.coeffs:
                g = math.gcd(g, int(x))
        if g > 1:
            rr.L, rr.M1, rr.M2 = rr.L.scale(Fraction(1, g)), rr.M1.scale(Fraction(1, g)), rr.M2.scale(Fraction(1, g))
    return rr


def literal_recursion(pcf: Pcf, L: Poly, M1: Poly, M2: Poly) -> ReducedRecursion:
    """A reduced recursion with caller-supplied L, M1, M2 (shifted-form index n),
    used to test printed recursions as given."""
    rr = ReducedRecursion(pcf, GcdForm(None), 1)
    rr.L, rr.M1, rr.M2 = L.shift(2), M1.shift(2), M2.shift(2)
    return rr


# -------------------------------------------------------------- integrality

@dataclass(frozen=True)
class IntegralityVerdict:
    passed: bool
    trials: int
    depth: int
    seed: int
    counterexample: tuple | None = None  # (trial, (u_-1, u_0), failing step m)

    def __bool__(self):
        return self.passed


def integrality_test(rr: ReducedRecursion, trials: int = 20, depth: int = 2000, seed: int = 0,
                     bound: int = 10**6) -> IntegralityVerdict:
    """Run the recursion from random integer starts in [-bound, bound]."""
    rng = random.Random(seed)
    n1, n2, den = rr.step_arrays(depth)
    for t in range(trials):
        x0, x1 = rng.randint(-bound, bound), rng.randint(-bound, bound)
        fail, _, _, _ = _kernels.reduced_run(n1, n2, den, x0, x1)
        if fail >= 0:
            return IntegralityVerdict(False, trials, depth, seed, (t, (x0, x1), fail + 1))
    rr.verified = True
    return IntegralityVerdict(True, trials, depth, seed)


def reconstruction_check(rr: ReducedRecursion, depth: int) -> bool:
    """G(m+off) u'_m = p_m and q_m exactly for m = -1..depth."""
    from .pcf_core import convergents

    table = convergents(rr.source, depth)
    for branch, seq in (("p", table.p), ("q", table.q)):
        u0, u1 = rr.initial(branch)
        us = [u0, u1]
        for m in range(1, depth + 1):
            r1, r2 = rr.ratios(m)
            us.append(r1 * eval_at(rr.source.a, m) * us[-1] + r2 * eval_at(rr.source.b, m) * us[-2])
        for m in range(-1, depth + 1):
            if rr.g(m + rr.offset) * us[m + 1] != seq[m + 1]:
                return False
    return True


# ------------------------------------------------------------- fast evaluation

@dataclass
class FastEvalResult:
    lo: mpmath.mpf
    hi: mpmath.mpf
    depth: int
    reduced_bits: int
    naive_bits: int | None
    bits_ratio: float | None
    t_reduced: float
    t_naive: float | None
    exact_match: bool | None

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def benchmark_row(self) -> dict:
        return {"depth": self.depth, "naive_bits": self.naive_bits, "reduced_bits": self.reduced_bits,
                "t_naive": self.t_naive, "t_reduced": self.t_reduced}


def _scaled_initials(rr: ReducedRecursion):
    p0, p1 = rr.initial("p")
    q0, q1 = rr.initial("q")
    k = 1
    for x in (p0, p1, q0, q1):
        k = k * x.denominator // math.gcd(k, x.denominator)
    return [int(x * k) for x in (p0, p1)], [int(x * k) for x in (q0, q1)]


def _ln_abs(x) -> float:
    if isinstance(x, Fraction):
        return math.log(abs(x.numerator)) - math.log(x.denominator)
    return math.log(abs(x))


def fast_eval(rr: ReducedRecursion, depth: int, precision_bits: int = 256, compare_naive: bool = True,
              window: int = 10) -> FastEvalResult:
    """Limit interval from the reduced sequences p', q'."""
    if not rr.verified:
        raise NotVerified("run integrality_test on this recursion first")
    tail = window + 1
    N = depth
    t0 = time.perf_counter()
    n1, n2, den = rr.step_arrays(N + 1)
    (pa, pb), (qa, qb) = _scaled_initials(rr)
    split = max(0, N - tail)
    fp, peak_p, pa, pb = _kernels.reduced_run(n1[:split], n2[:split], den[:split], pa, pb)
    fq, peak_q, qa, qb = _kernels.reduced_run(n1[:split], n2[:split], den[:split], qa, qb)
    if fp >= 0 or fq >= 0:
        raise NotVerified("reduced sequence left the integers")
    ps, qs = [pa, pb], [qa, qb]  # index split-1, split
    for m in range(split + 1, N + 2):
        i = m - 1
        for seq in (ps, qs):
            num = n1[i] * seq[-1] + n2[i] * seq[-2]
            if num % den[i]:
                raise NotVerified(f"reduced sequence left the integers at step {m}")
            seq.append(num // den[i])
    t_red = time.perf_counter() - t0
    peak = max(peak_p, peak_q, *(abs(x).bit_length() for x in ps + qs))
    # error terms t_m = |b(1)..b(m+1)| / |q_m q_(m+1)| with q_m = G(m+off) q'_m
    off = rr.offset
    bvals = [eval_at(rr.source.b, i) for i in range(1, N + 3)]
    lnb = [0.0]
    for bv in bvals:
        lnb.append(lnb[-1] + math.log(abs(bv)))

    def lnq(m):
        return _ln_abs(rr.g(m + off)) + math.log(abs(qs[m - split + 1]))

    def ln_t(m):
        return lnb[m + 1] - lnq(m) - lnq(m + 1)

    ratios = [math.exp(ln_t(m) - ln_t(m - 1)) for m in range(N - window + 1, N + 1)]
    r = max(ratios)
    if not r < 1:
        raise TailEstimateUnreliable(f"error-term ratio {r:.6g} >= 1 at depth {N}")
    ln_eps = ln_t(N) - math.log1p(-r)
    pN, qN = ps[N - split + 1], qs[N - split + 1]
    prec = precision_bits
    while True:
        with mpmath.workprec(prec):
            iv = mpmath.iv
            iv.prec = prec
            center = iv.mpf(pN) / iv.mpf(qN)
            eps = mpmath.exp(mpmath.mpf(ln_eps) + mpmath.mpf("1e-9"))
            if center.delta < eps * mpmath.mpf(2) ** -10:
                enc = center + iv.mpf([-eps, eps])
                lo, hi = mpmath.mpf(enc.a), mpmath.mpf(enc.b)
                break
        prec *= 2
    res = FastEvalResult(lo, hi, N, peak, None, None, t_red, None, None)
    if compare_naive:
        t0 = time.perf_counter()
        avals, bv = rr.source.values(N)
        p, q, _ = _kernels.convergents_raw(avals, bv)
        res.t_naive = time.perf_counter() - t0
        res.naive_bits = max(abs(p[-1]).bit_length(), abs(q[-1]).bit_length())
        res.bits_ratio = peak / res.naive_bits if res.naive_bits else None
        res.exact_match = p[-1] * qN == q[-1] * pN
    return res


# ------------------------------------------------------------ online mode

@dataclass
class OnlineResult:
    p_pair: tuple[int, int]  # (p_(N-1), p_N) / GCD2_N
    q_pair: tuple[int, int]
    ln_gcd2: list[float]
    peak_bits: int


def online_gcd2_eval(pcf: Pcf, depth: int) -> OnlineResult:
    """Keep (p_(n-1), p_n)/GCD2_n and (q_(n-1), q_n)/GCD2_n; each step divides
    by the single ratio GCD2_(n+1)/GCD2_n."""
    avals, bvals = pcf.values(depth)
    P0, P1 = 1, avals[0]
    Q0, Q1 = 0, 1
    g2 = math.gcd(math.gcd(P0, P1), math.gcd(Q0, Q1))
    P0, P1, Q0, Q1 = P0 // g2, P1 // g2, Q0 // g2, Q1 // g2
    lng = [math.log(g2)]
    peak = 1
    for n in range(1, depth + 1):
        X = avals[n] * P1 + bvals[n] * P0
        Y = avals[n] * Q1 + bvals[n] * Q0
        rho = math.gcd(math.gcd(X, Y), math.gcd(P1, Q1))
        P0, P1 = P1 // rho, X // rho
        Q0, Q1 = Q1 // rho, Y // rho
        lng.append(lng[-1] + math.log(rho))
        peak = max(peak, abs(P1).bit_length(), abs(Q1).bit_length())
    return OnlineResult((P0, P1), (Q0, Q1), lng, peak)


def compare_modes(rr: ReducedRecursion, depth: int) -> dict:
    """Online GCD2 mode against the closed-form mode at the same depth."""
    online = online_gcd2_eval(rr.source, depth)
    n1, n2, den = rr.step_arrays(depth)
    (pa, pb), (qa, qb) = _scaled_initials(rr)
    fp, peak_p, _, pN = _kernels.reduced_run(n1, n2, den, pa, pb)
    fq, peak_q, _, qN = _kernels.reduced_run(n1, n2, den, qa, qb)
    same_value = fp < 0 and fq < 0 and online.p_pair[1] * qN == online.q_pair[1] * pN
    ln_form = _ln_abs(rr.g(depth + rr.offset))
    return {
        "depth": depth,
        "same_convergent": bool(same_value),
        "online_peak_bits": online.peak_bits,
        "closed_form_peak_bits": max(peak_p, peak_q),
        "log_ratio_gcd2_to_form_per_n": (online.ln_gcd2[-1] - ln_form) / max(1, depth),
    }
