"""Pure-Python hot loops.  `_ckernels` mirrors this API on top of GMP."""
import math
from math import gcd

_LN2 = math.log(2.0)


def convergents_raw(avals, bvals):
    """Run u_n = a_n u_{n-1} + b_n u_{n-2} for p and q.

    avals[n] = a(n) and bvals[n] = b(n) for n = 0..N (bvals[0] unused).
    Returns (p, q, bprod); p and q hold index -1..N at positions 0..N+1 and
    bprod[n] = b(1)...b(n).
    """
    N = len(avals) - 1
    p = [0] * (N + 2)
    q = [0] * (N + 2)
    bprod = [0] * (N + 1)
    p[0], p[1] = 1, avals[0]
    q[0], q[1] = 0, 1
    bprod[0] = 1
    for n in range(1, N + 1):
        a = avals[n]
        b = bvals[n]
        p[n + 1] = a * p[n] + b * p[n - 1]
        q[n + 1] = a * q[n] + b * q[n - 1]
        bprod[n] = bprod[n - 1] * b
    return p, q, bprod


def gcd_sequences(p, q):
    """GCD_n = gcd(p_n, q_n) and GCD2_n = gcd(GCD_n, GCD_{n-1}) for n = 0..N.

    The previous GCD2 divides both p_n and q_n, so it is divided out first to
    shrink the operands of the expensive gcd.
    """
    N = len(p) - 2
    g = [0] * (N + 1)
    g2 = [0] * (N + 1)
    gprev = gcd(p[0], q[0])
    d = 1
    for n in range(N + 1):
        pn, qn = p[n + 1], q[n + 1]
        if d > 1:
            gn = d * gcd(pn // d, qn // d)
        else:
            gn = gcd(pn, qn)
        g[n] = gn
        d = gcd(gn, gprev)
        g2[n] = d
        gprev = gn
    return g, g2


def _ln(x):
    return math.log(x) if x else float("-inf")


def log_gcd_profile(avals, bvals):
    """ln GCD_n and ln|q_n| for n = 0..N without keeping the whole table."""
    N = len(avals) - 1
    p1, p0 = avals[0], 1
    q1, q0 = 1, 0
    lng = [0.0] * (N + 1)
    lnq = [0.0] * (N + 1)
    gprev = 1
    d = 1
    lng[0] = _ln(gcd(p1, q1))
    lnq[0] = 0.0
    for n in range(1, N + 1):
        a = avals[n]
        b = bvals[n]
        p1, p0 = a * p1 + b * p0, p1
        q1, q0 = a * q1 + b * q0, q1
        if d > 1:
            gn = d * gcd(p1 // d, q1 // d)
        else:
            gn = gcd(p1, q1)
        d = gcd(gn, gprev)
        gprev = gn
        lng[n] = _ln(gn)
        lnq[n] = _ln(abs(q1))
    return lng, lnq


def valuation(x, p):
    """p-adic valuation of a nonzero integer (halving search on p^(2^k))."""
    if x == 0:
        raise ValueError("valuation of zero")
    x = abs(x)
    if p == 2:
        return (x & -x).bit_length() - 1
    if x % p:
        return 0
    # powers[k] = p^(2^k), all dividing x; then read off v in binary
    powers = [p]
    while True:
        nxt = powers[-1] * powers[-1]
        if nxt.bit_length() > x.bit_length() or x % nxt:
            break
        powers.append(nxt)
    v = 0
    for k in range(len(powers) - 1, -1, -1):
        if x % powers[k] == 0:
            x //= powers[k]
            v += 1 << k
    return v


def valuation_table(values, primes):
    """v_p(values[n]) for each prime; rows follow `primes`."""
    return [[valuation(x, p) for x in values] for p in primes]


def reduced_run(n1, n2, den, u_a, u_b):
    """Iterate u_k = (n1[k] u_{k-1} + n2[k] u_{k-2}) / den[k] from (u_a, u_b).

    Returns (fail_index, peak_bits, u_prev, u_last); fail_index is -1 when
    every division is exact, else the first step with a remainder.
    """
    x0, x1 = u_a, u_b
    peak = max(abs(x0).bit_length(), abs(x1).bit_length())
    for k in range(len(den)):
        num = n1[k] * x1 + n2[k] * x0
        dk = den[k]
        if dk != 1:
            qk, r = divmod(num, dk)
            if r:
                return k, peak, x0, x1
            num = qk
        x0, x1 = x1, num
        bl = num.bit_length() if num >= 0 else (-num).bit_length()
        if bl > peak:
            peak = bl
    return -1, peak, x0, x1


def bit_lengths(values):
    return [abs(x).bit_length() for x in values]


__all__ = [
    "convergents_raw",
    "gcd_sequences",
    "log_gcd_profile",
    "valuation",
    "valuation_table",
    "reduced_run",
    "bit_lengths",
]
