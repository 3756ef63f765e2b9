"""Effective irrationality measure delta: formula, empirical estimate, report."""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .constants import ReferenceConstant, eval_constant_expr, reference as load_reference
from .gcd_lab import FrVerdict, GcdSeries, gcd2_equivalence_check, gcd_series, lambda_estimate
from .pcf_core import (ComplexRoots, ConvergentTable, EqualModulus, Kind, Pcf, PcfClass, alpha,
                       classify, convergents, default_depth, limit_estimate)


class DomainError(ValueError):
    pass


class WrongKind(ValueError):
    pass


class InsufficientPrecision(ValueError):
    pass


class Unbounded:
    """delta is not bounded (the limit would be a Liouville number)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __float__(self):
        return math.inf

    def __repr__(self):
        return "Unbounded"

    __str__ = __repr__


UNBOUNDED = Unbounded()
LIOUVILLE_TOL = 1e-9


def delta_formula(alpha_, B: int, lam: float, tol: float = LIOUVILLE_TOL):
    """(ln a - ln|B| + ln lam) / (ln a - ln lam) for a balanced PCF with FR."""
    a = abs(float(alpha_))
    lam = float(lam)
    if a <= 0 or lam <= 0:
        raise DomainError("alpha and lambda must be positive")
    if B == 0:
        raise DomainError("B must be nonzero")
    den = math.log(a) - math.log(lam)
    if abs(den) < tol:
        return UNBOUNDED
    if den < 0:
        raise DomainError(f"lambda = {lam} exceeds alpha = {a}")
    return (math.log(a) - math.log(abs(B)) + math.log(lam)) / den


def delta_formula_mp(alpha_, B: int, lam, dps: int = 50):
    """Multiprecision version of delta_formula (no Unbounded handling)."""
    with mpmath.workdps(dps):
        a = abs(mpmath.mpf(alpha_))
        lam = mpmath.mpf(lam)
        return (mpmath.log(a) - mpmath.log(abs(B)) + mpmath.log(lam)) / (mpmath.log(a) - mpmath.log(lam))


def zero_lambda(alpha_, B: int) -> float:
    """The lambda at which delta_formula vanishes: |B| / alpha."""
    return abs(B) / abs(float(alpha_))


def unbalanced_delta(pcf: Pcf, r: float | None = None):
    """(d_a - d_b + r)/(d_a - r) for deg b < 2 deg a; r is the factorial power of the GCD."""
    if classify(pcf).kind is not Kind.UNBALANCED_LOW:
        raise WrongKind(f"{pcf} is not UnbalancedLow")
    d_a, d_b = pcf.d_a, max(pcf.d_b, 0)
    r = 0 if r is None else r
    if r > d_a + 1e-12:
        raise DomainError(f"reduction power {r} exceeds deg a = {d_a}")
    if abs(d_a - r) < 1e-12:
        return UNBOUNDED
    return (d_a - d_b + r) / (d_a - r)


# ------------------------------------------------------------ empirical delta

@dataclass(frozen=True)
class EmpiricalDelta:
    delta: float  # tail-limit estimate
    drift: float  # raw delta_N minus the estimate
    raw_last: float
    method: str  # "linear" (exponential growth of q/GCD) or "nlogn"
    depth: int
    reference_bits: int

    def __float__(self):
        return self.delta


def _expr_digits(expr: str) -> int:
    names = {n.id for n in ast.walk(ast.parse(expr.replace("^", "**"), mode="eval"))
             if isinstance(n, ast.Name)}
    return min((load_reference(n).ndigits for n in names), default=10**9)


def _fixed_point(ref, bits: int) -> int:
    """floor(L * 2^bits) for a reference given as ReferenceConstant, expression or mpf."""
    need_digits = int(bits * 0.30103) + 20
    if isinstance(ref, ReferenceConstant):
        if ref.ndigits < need_digits - 15:
            raise InsufficientPrecision(
                f"{ref.name} has {ref.ndigits} digits, {need_digits} needed")
        val = ref.value(need_digits)
    elif isinstance(ref, str):
        have = _expr_digits(ref)
        if have < need_digits - 15:
            raise InsufficientPrecision(f"{ref!r}: {have} stored digits, {need_digits} needed")
        val = eval_constant_expr(ref, need_digits)
    else:
        val = mpmath.mpf(ref)  # the caller vouches for a raw mpf's precision
    with mpmath.workprec(bits + 80):
        return int(mpmath.floor(mpmath.ldexp(mpmath.mpf(val), bits)))


def _ln_err_terms(table: ConvergentTable):
    """ln t_m = ln|b(1)..b(m+1)| - ln|q_m q_{m+1}| for m = 0..depth-1."""
    out = []
    for m in range(table.depth):
        qa, qb = table.q_at(m), table.q_at(m + 1)
        if qa == 0 or qb == 0:
            out.append(float("nan"))
            continue
        out.append(math.log(abs(table.bprod[m + 1])) - math.log(abs(qa)) - math.log(abs(qb)))
    return out


def self_reference(pcf: Pcf, depth: int, ln_target: float, table: ConvergentTable | None = None):
    """Limit from a deeper evaluation, accurate to exp(ln_target) - 80 bits."""
    margin = ln_target - 80 * math.log(2)
    M = depth + 16
    table = table if table is not None else convergents(pcf, depth)
    lt = [x for x in _ln_err_terms(table) if x == x]
    if len(lt) >= 4:
        slope = (lt[-1] - lt[len(lt) // 2]) / max(1, len(lt) - 1 - len(lt) // 2)
        if slope < 0:
            M = depth + int((lt[-1] - margin) / -slope) + 16
    for _ in range(12):
        bits = int(-margin / math.log(2)) + 128
        iv = limit_estimate(pcf, M, precision_bits=max(256, bits))
        with mpmath.workprec(iv.precision_bits):
            r = iv.radius
            ok = r == 0 or float(mpmath.log(r)) < margin
        if ok:
            return iv.mid, iv
        M = depth + 2 * (M - depth)
    raise InsufficientPrecision(f"deep evaluation did not reach the target accuracy at depth {M}")


def empirical_delta(table: ConvergentTable, series: GcdSeries | None = None, reference=None,
                    use_gcd2: bool = False, window: float = 2 / 3) -> EmpiricalDelta:
    """Measured delta_n = -ln|p_n/q_n - L| / ln(q_n/GCD_n) - 1 and its tail limit.

    The reference may be a ReferenceConstant, a constant expression such as
    "6/zeta3", an mpf, or None for a deeper evaluation of the same PCF.
    """
    series = series or gcd_series(table)
    N = table.depth
    if N < 30:
        raise ValueError("depth too small for an empirical delta")
    lt = _ln_err_terms(table)
    ln_eN = lt[N - 1] + (lt[N - 1] - lt[N - 2]) if lt[N - 1] == lt[N - 1] else lt[N - 2]
    bits = int(-ln_eN / math.log(2) * 1.02) + 64 + 256
    if reference is None:
        ref_val, _ = self_reference(table.pcf, N, ln_eN - 10, table)
        with mpmath.workprec(bits + 80):
            Lfix = int(mpmath.floor(mpmath.ldexp(ref_val, bits)))
    else:
        Lfix = _fixed_point(reference, bits)
    gs = series.gcd2 if use_gcd2 else series.gcd
    start = max(2, int(round(N * (1 - window))))
    ns, num, den = [], [], []
    ln2P = bits * math.log(2)
    for n in range(start, N + 1):
        pn, qn = table.p_at(n), table.q_at(n)
        if qn == 0:
            continue
        diff = abs(pn * (1 << bits) - Lfix * qn)
        if diff == 0:
            continue
        if diff.bit_length() < abs(qn).bit_length() + 64:
            raise InsufficientPrecision(f"reference needs more than {bits} bits at n = {n}")
        lq = math.log(abs(qn))
        ns.append(n)
        num.append(-(math.log(diff) - ln2P - lq))
        den.append(lq - math.log(gs[n]))
    if len(ns) < 10:
        raise ValueError("too few nonzero errors to estimate delta (rational limit?)")
    ns_a = np.array(ns, dtype=float)
    num_a, den_a = np.array(num), np.array(den)
    raw = num_a / den_a - 1
    # X(n)/n = y + x ln n for both numerator and denominator
    xN, yN = np.polyfit(np.log(ns_a), num_a / ns_a, 1)
    xD, yD = np.polyfit(np.log(ns_a), den_a / ns_a, 1)
    if xD >= 0.15:
        est = xN / xD - 1
        method = "nlogn"
    else:
        est = float(np.polyfit(ns_a, num_a, 1)[0] / np.polyfit(ns_a, den_a, 1)[0]) - 1
        method = "linear"
    return EmpiricalDelta(float(est), float(raw[-1] - est), float(raw[-1]), method, N, bits)


# ------------------------------------------------------------------- report

@dataclass
class DeltaReport:
    name: str
    kind: PcfClass
    alpha: float | None
    B: int
    lam: float | None
    fr_verdict: FrVerdict | None
    delta_formula: object = None  # float, UNBOUNDED or None
    delta_empirical: float | None = None
    drift: float | None = None
    reference: ReferenceConstant | str | None = None
    liouville_flag: bool = False
    used_gcd2: bool = False
    status: str = "ok"
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        def num(x):
            if x is UNBOUNDED:
                return "unbounded"
            return None if x is None else float(x)

        ref = self.reference
        return {
            "name": self.name,
            "kind": self.kind.kind.value,
            "convergence": self.kind.convergence_verdict.value,
            "alpha": num(self.alpha),
            "B": self.B,
            "lambda": num(self.lam),
            "delta_formula": num(self.delta_formula),
            "delta_empirical": num(self.delta_empirical),
            "drift": num(self.drift),
            "liouville_flag": self.liouville_flag,
            "fr_verdict": self.fr_verdict.value if self.fr_verdict else None,
            "used_gcd2": self.used_gcd2,
            "reference": ref.name if isinstance(ref, ReferenceConstant) else ref,
            "status": self.status,
            "notes": self.notes,
        }


def _factorial_power(series: GcdSeries) -> float:
    N = series.depth
    ns = np.arange(max(2, N // 3), N + 1)
    lf = np.array([math.lgamma(n + 1.0) for n in ns])
    r = float(np.polyfit(lf, series.log_gcd[ns], 1)[0])
    if abs(r - round(r)) < 0.05:
        return float(round(r))
    return r


def report(pcf: Pcf, depth: int | None = None, reference=None, use_gcd2: bool = False,
           empirical: bool = True) -> DeltaReport:
    """classify -> convergents -> GCD -> lambda -> delta (formula and/or measured)."""
    cls = classify(pcf)
    depth = depth or default_depth(pcf)
    rep = DeltaReport(pcf.label(), cls, None, pcf.B, None, None, reference=reference)
    if isinstance(reference, str) and reference in ("pi", "e", "zeta2", "zeta3", "catalan", "ln2", "phi", "sqrt2"):
        rep.reference = load_reference(reference)
    table = convergents(pcf, depth)
    series = gcd_series(table)
    est = lambda_estimate(series, max(pcf.d_a, 0))
    rep.lam = est.lam
    rep.fr_verdict = est.fr_verdict
    if use_gcd2:
        if gcd2_equivalence_check(series):
            rep.used_gcd2 = True
        else:
            rep.notes.append("GCD2 not exponentially equivalent to GCD; GCD used")

    if cls.kind is Kind.BALANCED:
        try:
            rep.alpha = float(alpha(pcf))
        except (ComplexRoots, EqualModulus) as exc:
            rep.status = "Unsupported"
            rep.notes.append(f"B <= -A^2/4 is outside the delta formula: {exc}")
        if rep.status == "ok":
            if est.fr_verdict is FrVerdict.FR:
                rep.delta_formula = delta_formula(rep.alpha, pcf.B, est.lam)
                rep.liouville_flag = rep.delta_formula is UNBOUNDED
            elif est.fr_verdict is FrVerdict.NO_FR:
                rep.delta_formula = -1.0  # trivial delta without reduction
                rep.notes.append("no factorial reduction: trivial delta")
            else:
                rep.notes.append("FR verdict inconclusive; formula skipped")
    elif cls.kind is Kind.UNBALANCED_LOW:
        r = _factorial_power(series)
        rep.delta_formula = unbalanced_delta(pcf, r if r > 0 else None)
        rep.liouville_flag = rep.delta_formula is UNBOUNDED
        rep.notes.append(f"measured factorial power of GCD: {r:g}")
    else:
        rep.notes.append("no closed delta formula for deg b > 2 deg a")

    if empirical and cls.convergence_verdict.value == "Converges":
        try:
            emp = empirical_delta(table, series, rep.reference, use_gcd2=rep.used_gcd2)
            rep.delta_empirical = emp.delta
            rep.drift = emp.drift
        except (InsufficientPrecision, ValueError) as exc:
            rep.notes.append(f"empirical delta unavailable: {exc}")
    if isinstance(rep.delta_formula, float) and rep.delta_empirical is not None:
        gap = abs(rep.delta_formula - rep.delta_empirical)
        if gap > 0.05:
            rep.notes.append(f"formula and measured delta differ by {gap:.3f}")
    return rep
