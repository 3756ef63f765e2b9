"""Reference constants from classical series, in integer fixed point.

None of these use continued fractions, so they can serve as independent
limits for PCF checks.  Stored digit files are regenerated and compared by
the test suite.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import mpmath

STORED_DIGITS = 12000
_GUARD = 30

DERIVATIONS = {
    "pi": "Machin: 16 atan(1/5) - 4 atan(1/239)",
    "e": "exponential series sum 1/k!",
    "zeta2": "pi^2/6 with pi from the Machin formula",
    "zeta3": "5/2 sum (-1)^(k+1) / (k^3 C(2k,k))",
    "catalan": "3/8 sum 1/((2k+1)^2 C(2k,k)) + pi/8 ln(2+sqrt3), ln(2+sqrt3) = 2 atanh(1/sqrt3)",
    "ln2": "sum 1/(k 2^k)",
    "phi": "(1 + isqrt(5))/2",
    "sqrt2": "integer square root",
}


def _atan_inv(x: int, one: int) -> int:
    """atan(1/x) scaled by `one`."""
    x2 = x * x
    term = one // x
    total = term
    k = 1
    while term:
        term //= x2
        k += 2
        if k % 4 == 3:
            total -= term // k
        else:
            total += term // k
    return total


def _pi(one: int) -> int:
    return 16 * _atan_inv(5, one) - 4 * _atan_inv(239, one)


def _e(one: int) -> int:
    total = 0
    term = one
    k = 0
    while term:
        total += term
        k += 1
        term //= k
    return total


def _zeta3(one: int) -> int:
    # t_k = 1/(k^3 C(2k,k)); t_k / t_{k-1} = (k-1)^3 / (2 k^2 (2k-1))
    t = one // 2  # k = 1
    total = t
    k = 1
    while t:
        k += 1
        t = t * (k - 1) ** 3 // (2 * k * k * (2 * k - 1))
        total += t if k % 2 else -t
    return total * 5 // 2


def _ln2(one: int) -> int:
    total = 0
    pw = one // 2
    k = 1
    while pw:
        total += pw // k
        k += 1
        pw //= 2
    return total


def _catalan(one: int) -> int:
    # 3/8 sum_{k>=0} 1/((2k+1)^2 C(2k,k))
    s = 0
    c = one  # one / C(2k,k)
    k = 0
    while c:
        s += c // ((2 * k + 1) ** 2)
        k += 1
        c = c * k // (2 * (2 * k - 1))
    # ln(2+sqrt3) = (2/sqrt3) sum 3^-k/(2k+1)
    a = 0
    pw = one
    k = 0
    while pw:
        a += pw // (2 * k + 1)
        k += 1
        pw //= 3
    sqrt3 = math.isqrt(3 * one * one)
    ln23 = 2 * a * one // sqrt3
    return (3 * s + _pi(one) * ln23 // one) // 8


def _scaled(name: str, digits: int) -> int:
    one = 10 ** (digits + _GUARD)
    if name == "pi":
        return _pi(one)
    if name == "e":
        return _e(one)
    if name == "zeta2":
        p = _pi(one)
        return p * p // (6 * one)
    if name == "zeta3":
        return _zeta3(one)
    if name == "catalan":
        return _catalan(one)
    if name == "ln2":
        return _ln2(one)
    if name == "phi":
        return (one + math.isqrt(5 * one * one)) // 2
    if name == "sqrt2":
        return math.isqrt(2 * one * one)
    raise KeyError(f"unknown constant {name!r}; choose from {sorted(DERIVATIONS)}")


def int_to_decimal(v: int) -> str:
    """str(v) without tripping the interpreter's digit-count limit."""
    if v < 0:
        return "-" + int_to_decimal(-v)
    if v < 10**4000:
        return str(v)
    k = int(v.bit_length() * 0.30103) // 2
    hi, lo = divmod(v, 10**k)
    return int_to_decimal(hi) + int_to_decimal(lo).rjust(k, "0")


def decimal_to_int(s: str) -> int:
    """int(s) for long digit strings, in chunks."""
    s = s.strip()
    if s.startswith("-"):
        return -decimal_to_int(s[1:])
    if len(s) <= 4000:
        return int(s)
    k = len(s) // 2
    return decimal_to_int(s[:-k]) * 10**k + decimal_to_int(s[-k:])


def generate(name: str, digits: int) -> str:
    """Decimal string with `digits` digits after the point (truncated)."""
    v = _scaled(name, digits) // 10**_GUARD
    s = int_to_decimal(v)
    return s[:-digits] + "." + s[-digits:]


@dataclass(frozen=True)
class ReferenceConstant:
    name: str
    digits: str
    derivation: str

    @property
    def ndigits(self) -> int:
        return len(self.digits.split(".")[1])

    def value(self, dps: int | None = None) -> mpmath.mpf:
        """The constant as an mpf, rounded to `dps` digits (default: all stored)."""
        whole, frac = self.digits.split(".")
        if dps is not None:
            frac = frac[: dps + 5]
        with mpmath.workdps((dps or self.ndigits) + 10):
            v = mpmath.mpf(decimal_to_int(whole + frac)) / mpmath.mpf(10) ** len(frac)
        with mpmath.workdps(dps or self.ndigits):
            return +v


@lru_cache(maxsize=None)
def reference(name: str) -> ReferenceConstant:
    """Load the stored digits for a named constant."""
    if name not in DERIVATIONS:
        raise KeyError(f"unknown constant {name!r}; choose from {sorted(DERIVATIONS)}")
    path = resources.files("pcflab") / "data" / "constants" / f"{name}.txt"
    try:
        digits = path.read_text().strip()
    except FileNotFoundError:
        digits = generate(name, STORED_DIGITS)
    return ReferenceConstant(name, digits, DERIVATIONS[name])


def write_reference_files(directory, digits: int = STORED_DIGITS):
    import pathlib

    d = pathlib.Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name in DERIVATIONS:
        (d / f"{name}.txt").write_text(generate(name, digits) + "\n")


# ------------------------------------------------------ constant expressions

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def eval_constant_expr(expr: str, dps: int = 60) -> mpmath.mpf:
    """Evaluate expressions such as "4/pi", "6/zeta3" or "(1+e)/(-1+e)".

    Names resolve to the stored reference constants; only arithmetic is allowed.
    """
    tree = ast.parse(expr.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return mpmath.mpf(node.value) if isinstance(node.value, int) else mpmath.mpf(str(node.value))
        if isinstance(node, ast.Name):
            return reference(node.id).value(dps + 10)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise ValueError(f"unsupported element in constant expression {expr!r}")

    with mpmath.workdps(dps + 10):
        v = ev(tree)
    with mpmath.workdps(dps):
        return +v
