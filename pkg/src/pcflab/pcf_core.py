"""Polynomial continued fractions: convergents, classification, alpha, limits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import mpmath

from . import _kernels
from .polyring import Poly, as_poly, display, int_values, rational_roots


class PcfError(Exception):
    pass


class DegenerateAtDepth(PcfError):
    def __init__(self, n):
        super().__init__(f"q_n and q_(n-1) both vanish at n = {n}")
        self.n = n


class ComplexRoots(PcfError):
    pass


class EqualModulus(PcfError):
    pass


class NotConvergent(PcfError):
    pass


class TailEstimateUnreliable(PcfError):
    pass


class Kind(str, Enum):
    UNBALANCED_HIGH = "UnbalancedHigh"
    BALANCED = "Balanced"
    UNBALANCED_LOW = "UnbalancedLow"


class Convergence(str, Enum):
    CONVERGES = "Converges"
    MAY_DIVERGE = "MayDiverge"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class PcfClass:
    kind: Kind
    convergence_verdict: Convergence


@dataclass(frozen=True)
class Pcf:
    """PCF[a, b] = a(0) + b(1)/(a(1) + b(2)/(a(2) + ...))."""

    a: Poly
    b: Poly
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", as_poly(self.a))
        object.__setattr__(self, "b", as_poly(self.b))
        if self.a.is_zero() or self.b.is_zero():
            raise ValueError("a and b must be nonzero polynomials")
        if not (self.a.is_integral and self.b.is_integral):
            raise ValueError("Pcf needs integer polynomials; use transforms.RationalCf")

    @property
    def A(self) -> int:
        return int(self.a.lead)

    @property
    def B(self) -> int:
        return int(self.b.lead)

    @property
    def d_a(self) -> int:
        return self.a.degree

    @property
    def d_b(self) -> int:
        return self.b.degree

    def values(self, depth: int) -> tuple[list[int], list[int]]:
        """a(0..depth) and b(0..depth)."""
        return int_values(self.a, 0, depth + 1), int_values(self.b, 0, depth + 1)

    def label(self) -> str:
        return self.name or f"PCF[{display(self.a)}, {display(self.b)}]"

    def __str__(self):
        return self.label()


def classify(pcf: Pcf) -> PcfClass:
    """Kind from deg b versus 2 deg a, convergence from the leading coefficients."""
    A, B = pcf.A, pcf.B
    if pcf.d_b > 2 * pcf.d_a:
        kind = Kind.UNBALANCED_HIGH
        verdict = Convergence.CONVERGES if B > 0 else Convergence.UNKNOWN
    elif pcf.d_b == 2 * pcf.d_a:
        kind = Kind.BALANCED
        disc = A * A + 4 * B  # sign of B + A^2/4
        if disc > 0:
            verdict = Convergence.CONVERGES
        elif disc < 0:
            verdict = Convergence.MAY_DIVERGE
        else:
            verdict = Convergence.UNKNOWN
    else:
        kind = Kind.UNBALANCED_LOW
        verdict = Convergence.CONVERGES
    return PcfClass(kind, verdict)


def default_depth(pcf: Pcf) -> int:
    return 200 if classify(pcf).kind is Kind.UNBALANCED_HIGH else 1000


def alpha(A, B=None, dps: int = 50) -> mpmath.mpf:
    """Larger-modulus root of x^2 = A x + B.  Accepts a Pcf or (A, B)."""
    if isinstance(A, Pcf):
        A, B = A.A, A.B
    disc = A * A + 4 * B
    if disc < 0:
        raise ComplexRoots(f"A^2 + 4B = {disc} < 0")
    if disc == 0 or A == 0:
        raise EqualModulus(f"roots of x^2 = {A}x + {B} have equal modulus")
    with mpmath.workdps(dps + 10):
        s = mpmath.sqrt(disc)
        r = (abs(A) + s) / 2
        if A < 0:
            r = -r
    with mpmath.workdps(dps):
        return +r


@dataclass
class ConvergentTable:
    """p_n, q_n for n = -1..depth (list position n+1) and bprod_n = b(1)...b(n)."""

    pcf: Pcf
    depth: int
    p: list[int]
    q: list[int]
    bprod: list[int]
    truncated_at: int | None = None

    def p_at(self, n: int) -> int:
        return self.p[n + 1]

    def q_at(self, n: int) -> int:
        return self.q[n + 1]

    @property
    def degenerate(self) -> bool:
        return self.truncated_at is not None

    def verify(self) -> bool:
        """Initial conditions and the recursion, exactly."""
        a, b = self.pcf.values(self.depth)
        if (self.p[0], self.p[1], self.q[0], self.q[1]) != (1, a[0], 0, 1):
            return False
        for n in range(1, self.depth + 1):
            if self.p[n + 1] != a[n] * self.p[n] + b[n] * self.p[n - 1]:
                return False
            if self.q[n + 1] != a[n] * self.q[n] + b[n] * self.q[n - 1]:
                return False
        return True


def convergents(pcf: Pcf, depth: int) -> ConvergentTable:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    avals, bvals = pcf.values(depth)
    p, q, bprod = _kernels.convergents_raw(avals, bvals)
    truncated = None
    for n in range(1, depth + 1):
        if bvals[n] == 0:
            truncated = n
            break
    for n in range(1, depth + 1):
        if q[n + 1] == 0 and q[n] == 0:
            raise DegenerateAtDepth(n)
    return ConvergentTable(pcf, depth, p, q, bprod, truncated)


def determinant_check(table: ConvergentTable) -> bool:
    """p_{n+1} q_n - p_n q_{n+1} = (-1)^n b(1)...b(n+1) for every recorded n."""
    p, q, bp = table.p, table.q, table.bprod
    for n in range(0, table.depth):
        lhs = p[n + 2] * q[n + 1] - p[n + 1] * q[n + 2]
        rhs = bp[n + 1] if n % 2 == 0 else -bp[n + 1]
        if lhs != rhs:
            return False
    return True


# ------------------------------------------------------------ limit interval

@dataclass(frozen=True)
class LimitInterval:
    lo: mpmath.mpf
    hi: mpmath.mpf
    depth: int
    precision_bits: int
    tail_ratio: float

    @property
    def mid(self):
        with mpmath.workprec(self.precision_bits):
            return (self.lo + self.hi) / 2

    @property
    def radius(self):
        with mpmath.workprec(self.precision_bits):
            return (self.hi - self.lo) / 2

    def contains(self, x) -> bool:
        with mpmath.workprec(self.precision_bits + 64):
            x = mpmath.mpf(x)
            return self.lo <= x <= self.hi

    def correct_digits(self) -> float:
        """-log10 of the half-width."""
        with mpmath.workprec(self.precision_bits):
            r = self.radius
            return float("inf") if r == 0 else float(-mpmath.log10(r))


def _ln_abs(x: int) -> float:
    return math.log(abs(x))


def limit_estimate(pcf: Pcf, depth: int, precision_bits: int = 256,
                   ratio_window: int = 10) -> LimitInterval:
    """Enclosure of the limit from p_N/q_N and the tail sum of error terms.

    t_m = |b(1)...b(m+1)| / |q_m q_{m+1}| is the step between consecutive
    convergents; with r the largest recent ratio t_m / t_{m-1}, the tail is
    bounded by t_N / (1 - r).
    """
    if classify(pcf).convergence_verdict is not Convergence.CONVERGES:
        raise NotConvergent(f"{pcf} is not known to converge")
    table = convergents(pcf, depth + 1)
    N = depth
    pN, qN = table.p_at(N), table.q_at(N)
    if qN == 0:
        raise DegenerateAtDepth(N)
    if table.degenerate and table.truncated_at <= N:
        ln_eps = None  # the fraction terminated: p_N/q_N is the value
        ratio = 0.0
    else:
        def ln_t(m):
            return _ln_abs(table.bprod[m + 1]) - _ln_abs(table.q_at(m)) - _ln_abs(table.q_at(m + 1))

        lo_m = max(1, N - ratio_window + 1)
        ratios = [math.exp(ln_t(m) - ln_t(m - 1)) for m in range(lo_m, N + 1)]
        ratio = max(ratios) if ratios else 1.0
        if not ratio < 1.0:
            raise TailEstimateUnreliable(f"error-term ratio {ratio:.6g} >= 1 at depth {N}")
        ln_eps = ln_t(N) - math.log1p(-ratio)
    prec = precision_bits
    while True:
        with mpmath.workprec(prec):
            iv = mpmath.iv
            iv.prec = prec
            center = iv.mpf(pN) / iv.mpf(qN)
            width = center.delta
            if ln_eps is None:
                eps = mpmath.mpf(0)
                done = prec >= 4 * precision_bits
            else:
                # small upward pad covers the float log arithmetic above
                eps = mpmath.exp(mpmath.mpf(ln_eps) + mpmath.mpf("1e-9"))
                done = width < eps * mpmath.mpf(2) ** -10
            if done:
                enclosure = center + iv.mpf([-eps, eps])
                lo, hi = mpmath.mpf(enclosure.a), mpmath.mpf(enclosure.b)
                return LimitInterval(lo, hi, N, prec, ratio)
        prec *= 2


# ------------------------------------------------------------ growth check

@dataclass
class GrowthDiagnostic:
    kind: Kind
    model: str
    g: list[float]
    tail_mean: float
    passed: bool


def q_growth_check(pcf: Pcf, table: ConvergentTable, tol: float = 0.05) -> GrowthDiagnostic:
    """g_n = (1/n) (ln|q_n| - model_n) should tend to zero.

    Balanced: model alpha^n n!^d_a; UnbalancedHigh: B^(n/2) n!^(d_b/2);
    UnbalancedLow: A^n n!^d_a.
    """
    kind = classify(pcf).kind
    if kind is Kind.BALANCED:
        lnrate = float(mpmath.log(abs(alpha(pcf))))
        fact = pcf.d_a
        model = f"alpha^n n!^{pcf.d_a}"
    elif kind is Kind.UNBALANCED_HIGH:
        lnrate = 0.5 * math.log(abs(pcf.B))
        fact = pcf.d_b / 2
        model = f"B^(n/2) n!^({pcf.d_b}/2)"
    else:
        lnrate = math.log(abs(pcf.A))
        fact = pcf.d_a
        model = f"A^n n!^{pcf.d_a}"
    g = [0.0]
    for n in range(1, table.depth + 1):
        qn = table.q_at(n)
        if qn == 0:
            g.append(float("nan"))
            continue
        g.append((_ln_abs(qn) - fact * math.lgamma(n + 1) - n * lnrate) / n)
    start = max(1, (2 * table.depth) // 3)
    tail = [abs(x) for x in g[start:] if x == x]
    mid = [abs(x) for x in g[max(1, table.depth // 3):start] if x == x]
    tail_mean = sum(tail) / len(tail) if tail else float("inf")
    mid_mean = sum(mid) / len(mid) if mid else float("inf")
    passed = tail_mean < tol and tail_mean <= mid_mean + 1e-12
    return GrowthDiagnostic(kind, model, g, tail_mean, passed)


def reduced_fraction_check(table: ConvergentTable) -> bool:
    """gcd(p_n/G, q_n/G) = 1 with G = gcd(p_n, q_n), at every depth."""
    for n in range(0, table.depth + 1):
        pn, qn = table.p_at(n), table.q_at(n)
        g = math.gcd(pn, qn)
        if g and math.gcd(pn // g, qn // g) != 1:
            return False
    return True


def has_positive_integer_root(p: Poly) -> bool:
    return any(r > 0 and r.denominator == 1 for r in rational_roots(p))
