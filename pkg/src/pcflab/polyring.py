"""Exact univariate polynomials over the rationals.

A single `Poly` class serves both integer and rational polynomials; the
`is_integral` property tells them apart.  Coefficients are stored low to high
as `Fraction` values.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from typing import Iterable, Sequence

# Degree of the zero polynomial.  Never -1, so degree arithmetic and degree
# comparisons stay meaningful (deg(0 * p) = deg 0, and 0 ranks below constants).
ZERO_DEGREE = float("-inf")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not x.is_integer():
            raise TypeError(f"refusing inexact coefficient {x!r}")
        return Fraction(int(x))
    raise TypeError(f"unsupported coefficient {x!r}")


class Poly:
    """Polynomial in n with exact rational coefficients, index i <-> n^i."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def n(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "Poly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    # basic properties
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral:
            raise ValueError(f"{self} has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def __call__(self, x):
        return eval_at(self, x)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"Poly({self.to_list()})"

    def __str__(self):
        return display(self)

    def to_list(self) -> list:
        """Coefficient list low to high using ints where exact, else 'p/q' strings."""
        return [int(c) if c.denominator == 1 else str(c) for c in self.coeffs]

    # ring operations
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([other])

    def __add__(self, other):
        other = self._coerce(other)
        m = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (m - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (m - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quo[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] -= c * y
        return Poly(quo), Poly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        """True if self | other over Q[n]."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    # calculus and substitutions
    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose_linear(self, s, t) -> "Poly":
        """Return p(s*n + t)."""
        lin = Poly([t, s])
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def shift(self, k) -> "Poly":
        """Return p(n + k)."""
        return self.compose_linear(1, k)

    def scale(self, c) -> "Poly":
        c = _frac(c)
        return Poly(c * x for x in self.coeffs)

    # content
    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if self.is_zero():
            return Fraction(0)
        num = reduce(math.gcd, (c.numerator for c in self.coeffs))
        den = reduce(_lcm, (c.denominator for c in self.coeffs))
        return Fraction(abs(num), den)

    def primitive(self) -> "Poly":
        """Integer primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.lead < 0:
            c = -c
        return Poly(x / c for x in self.coeffs)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


IntPoly = Poly
RatPoly = Poly


def as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (list, tuple)):
        return Poly(x)
    if isinstance(x, (int, Fraction)):
        return Poly([x])
    if isinstance(x, str):
        return parse_poly(x)
    raise TypeError(f"cannot interpret {x!r} as a polynomial")


def eval_at(p: Poly, x):
    """Exact Horner evaluation.  Integer polynomial at an integer gives an int."""
    p = as_poly(p)
    acc = Fraction(0)
    x = _frac(x)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    if acc.denominator == 1:
        return int(acc)
    return acc


def int_values(p: Poly, start: int, stop: int) -> list[int]:
    """Values p(start), ..., p(stop - 1) for an integer polynomial, by Horner."""
    cs = [int(c) for c in reversed(p.int_coeffs())]
    out = []
    for n in range(start, stop):
        acc = 0
        for c in cs:
            acc = acc * n + c
        out.append(acc)
    return out


# ----------------------------------------------------------------- text forms

def _fmt_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def display(p: Poly, var: str = "n") -> str:
    """Human form, highest power first, e.g. 34n^3+51n^2+27n+5."""
    p = as_poly(p)
    if p.is_zero():
        return "0"
    parts = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = _fmt_coeff(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag.numerator}{mono}"
            else:
                body = f"({_fmt_coeff(mag)}){mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z])|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    s = text.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"unexpected character {s[pos:].lstrip()[:1]!r} in {text!r} at position {pos}")
        num, var, op = m.groups()
        kind = "num" if num else "var" if var else op
        out.append((kind, num or var or op, m.start(m.lastindex)))
        pos = m.end()
    return out


class _Parser:
    """sum := term (+|- term)*; term := unary (['*'] unary)*;
    unary := [+|-] unary | power; power := atom [^ int]; atom := int[/int] | var | (sum)."""

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.var = None

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        if self.i >= len(self.toks):
            raise ValueError(f"unexpected end of polynomial {self.text!r}")
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind!r} but found {tok[1]!r} in {self.text!r} at position {tok[2]}")
        self.i += 1
        return tok

    def parse(self) -> Poly:
        p = self.sum()
        if self.i < len(self.toks):
            kind, val, pos = self.toks[self.i]
            raise ValueError(f"unexpected {val!r} in {self.text!r} at position {pos}")
        return p

    def sum(self) -> Poly:
        p = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek() in ("*", "num", "var", "("):
            if self.peek() == "*":
                self.take()
            p = p * self.unary()
        return p

    def unary(self) -> Poly:
        if self.peek() in ("+", "-"):
            op = self.take()[0]
            p = self.unary()
            return -p if op == "-" else p
        return self.power()

    def power(self) -> Poly:
        p = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            k = int(self.take("num")[1])
            p = p**k
        return p

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "num":
            c = Fraction(int(val))
            if self.peek() == "/":
                self.take()
                d = int(self.take("num")[1])
                if d == 0:
                    raise ValueError(f"zero denominator in {self.text!r} at position {pos}")
                c /= d
            return Poly([c])
        if kind == "var":
            if self.var is None:
                self.var = val
            elif val != self.var:
                raise ValueError(f"mixed variables {self.var!r} and {val!r} in {self.text!r}")
            return Poly([0, 1])
        if kind == "(":
            p = self.sum()
            self.take(")")
            return p
        raise ValueError(f"unexpected {val!r} in {self.text!r} at position {pos}")


def parse_poly(text: str) -> Poly:
    """Parse either a coefficient list "[5, 27, 51, 34]" or a human form like
    "34n^3+51n^2+27n+5" or "-n^2(n+2)(2n-3)" (also accepts "**", "*", p/q)."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValueError(f"unterminated coefficient list: {text!r}")
        inner = s[1:-1].strip()
        if not inner:
            return Poly()
        try:
            return Poly(_frac(tok.strip().strip("'\"")) for tok in inner.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad coefficient in {text!r}: {exc}") from None
    return _Parser(s).parse()


# ------------------------------------------------------------- number theory

def multifactorial(n: int, u: int = 1) -> int:
    """n * (n-u) * (n-2u) * ... down to a positive term; 1 for n <= 0."""
    if u < 1:
        raise ValueError("order u must be positive")
    out = 1
    while n > 0:
        out *= n
        n -= u
    return out


def lcm_upto(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out = _lcm(out, k)
    return out


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def factor_int(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for polynomial-coefficient sizes."""
    n = abs(n)
    out: dict[int, int] = {}
    if n < 2:
        return out
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Positive divisors of |n| (n != 0), ascending."""
    if n == 0:
        raise ValueError("divisors of 0")
    ds = [1]
    for p, e in factor_int(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


# ------------------------------------------------------------- factorization

def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic square-free pieces with their multiplicities."""
    if p.degree == ZERO_DEGREE or p.degree < 1:
        return []
    f = p.monic()
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if a.degree >= 1:
            out.append((a, i))
        i += 1
    return out


def rational_roots(p: Poly) -> dict[Fraction, int]:
    """Rational roots with multiplicity, via the rational-root theorem."""
    p = as_poly(p)
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    f = p.primitive()
    roots: dict[Fraction, int] = {}
    # strip the root at zero first, the theorem needs a nonzero constant term
    k = 0
    while f.coeffs and f.coeffs[0] == 0:
        f = Poly(f.coeffs[1:])
        k += 1
    if k:
        roots[Fraction(0)] = k
    if f.degree < 1:
        return roots
    c0 = int(f.coeffs[0])
    cl = int(f.lead)
    for num in divisors(c0):
        for den in divisors(cl):
            for s in (1, -1):
                x = Fraction(s * num, den)
                if x in roots:
                    continue
                if f.degree >= 1 and eval_at(f, x) == 0:
                    m = 0
                    lin = Poly([-x, 1])
                    while f.degree >= 1 and eval_at(f, x) == 0:
                        f = f.exact_div(lin)
                        m += 1
                    roots[x] = m
    return roots


def _quadratic_pair_split(f: Poly):
    """Try f = g*h with integer quadratics g, h for a primitive quartic f.

    Returns (g, h) or None.  Raises nothing; purely a bounded search.
    """
    c = [int(x) for x in f.primitive().coeffs]
    c0, c1, c2, c3, c4 = c
    for a2 in divisors(c4):
        b2 = c4 // a2
        for a0abs in divisors(c0):
            for sa in (1, -1):
                a0 = sa * a0abs
                b0 = c0 // a0
                # a2*b1 + a1*b2 = c3 ; a1*b0 + a0*b1 = c1
                det = a2 * b0 - a0 * b2
                cands = []
                if det != 0:
                    n1 = c3 * b0 - c1 * b2
                    n2 = a2 * c1 - a0 * c3
                    if n1 % det == 0 and n2 % det == 0:
                        cands.append((n1 // det, n2 // det))
                else:
                    bound = sum(abs(x) for x in c) + 1
                    for a1 in range(-bound, bound + 1):
                        rest = c3 - a1 * b2
                        if rest % a2 == 0:
                            cands.append((a1, rest // a2))
                for a1, b1 in cands:
                    g = Poly([a0, a1, a2])
                    h = Poly([b0, b1, b2])
                    if g * h == Poly(c):
                        return g, h
    return None


@dataclass(frozen=True)
class Factorization:
    """scale * prod(f**m) with monic factors; `undecidable` marks leftover pieces
    whose irreducibility could not be settled."""

    scale: Fraction
    factors: tuple[tuple[Poly, int], ...]
    undecidable: tuple[tuple[Poly, int], ...] = ()

    def expand(self) -> Poly:
        out = Poly([self.scale])
        for f, m in self.factors + self.undecidable:
            out = out * f**m
        return out


def factor(p: Poly) -> Factorization:
    """Factor over Q: square-free decomposition, rational-root peeling, then a
    quadratic-pair trial split for remaining quartics.  Irreducible pieces of
    degree <= 3 are certain; larger root-free pieces are marked undecidable."""
    p = as_poly(p)
    if p.is_zero():
        raise ValueError("factor of the zero polynomial")
    if p.degree == 0:
        return Factorization(p.lead, ())
    factors: list[tuple[Poly, int]] = []
    undecidable: list[tuple[Poly, int]] = []
    for piece, mult in squarefree_decomposition(p):
        rest = piece
        for r, k in rational_roots(piece).items():
            factors.append((Poly([-r, 1]), mult * k))
            rest = rest.exact_div(Poly([-r, 1]) ** k)
        if rest.degree < 1:
            continue
        if rest.degree <= 3:
            factors.append((rest.monic(), mult))
        elif rest.degree == 4:
            split = _quadratic_pair_split(rest)
            if split is None:
                factors.append((rest.monic(), mult))
            else:
                for g in split:
                    factors.append((g.monic(), mult))
        else:
            undecidable.append((rest.monic(), mult))
    factors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return Factorization(p.lead, tuple(factors), tuple(undecidable))


@dataclass(frozen=True)
class Split:
    """b = scale * left * right with monic, equal-degree left and right."""

    scale: Fraction
    left: Poly
    right: Poly

    def expand(self) -> Poly:
        return self.left * self.right * self.scale


class _Undecidable:
    def __repr__(self):
        return "UNDECIDABLE"

    def __bool__(self):
        return False


UNDECIDABLE = _Undecidable()


def equal_degree_split(b: Poly):
    """Split b into two monic equal-degree rational factors times its leading
    coefficient.  Returns a Split, None when no split exists, or UNDECIDABLE
    when the factorization could not be completed."""
    b = as_poly(b)
    if b.is_zero() or b.degree < 2 or b.degree % 2:
        return None
    fz = factor(b)
    if fz.undecidable:
        return UNDECIDABLE
    pieces: list[Poly] = []
    for f, m in fz.factors:
        pieces.extend([f] * m)
    half = b.degree // 2
    best = None
    idx = range(len(pieces))
    for r in range(1, len(pieces)):
        for chosen in combinations(idx, r):
            if sum(pieces[i].degree for i in chosen) != half:
                continue
            left = reduce(lambda x, y: x * y, (pieces[i] for i in chosen), Poly([1]))
            right = reduce(
                lambda x, y: x * y, (pieces[i] for i in idx if i not in chosen), Poly([1])
            )
            if best is None or left.coeffs < best[0].coeffs:
                best = (left, right)
    if best is None:
        return None
    return Split(fz.scale, best[0], best[1])


def discriminant_is_rational_square(b: Poly) -> bool:
    """For a quadratic b: is its discriminant the square of a rational?"""
    c, bb, a = b.coeffs
    d = bb * bb - 4 * a * c
    if d < 0:
        return False
    return _is_square(d.numerator) and _is_square(d.denominator)


def _is_square(k: int) -> bool:
    return k >= 0 and math.isqrt(k) ** 2 == k


def poly_divisors(p: Poly) -> list[Poly]:
    """Monic divisors of p over Q that are products of its certain factors."""
    fz = factor(p)
    options = [range(m + 1) for _, m in fz.factors]
    out = []
    for exps in product(*options):
        d = Poly([1])
        for (f, _), e in zip(fz.factors, exps):
            d = d * f**e
        out.append(d)
    out.sort(key=lambda d: (d.degree, d.coeffs))
    return out


def coefficient_box(ranges: Sequence[tuple[int, int]]):
    """All integer polynomials with coefficient i in ranges[i] (inclusive)."""
    for cs in product(*(range(lo, hi + 1) for lo, hi in ranges)):
        yield Poly(cs)
