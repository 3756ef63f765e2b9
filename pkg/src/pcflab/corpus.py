"""Shipped PCF corpus: named records loaded from data/corpus.json."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import mpmath

from .constants import eval_constant_expr
from .pcf_core import Pcf, limit_estimate
from .polyring import Poly, parse_poly


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    pcf: Pcf
    expected_limit: str | None = None
    tags: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    def to_json(self) -> dict:
        rec = {"name": self.name, "a": poly_to_json(self.pcf.a), "b": poly_to_json(self.pcf.b),
               "expected_limit": self.expected_limit, "tags": list(self.tags)}
        rec.update(self.extra)
        return rec


def poly_to_json(p: Poly) -> list:
    return [int(c) if c.denominator == 1 else str(c) for c in p.coeffs]


def poly_from_json(x) -> Poly:
    if isinstance(x, str):
        return parse_poly(x)
    return parse_poly("[" + ", ".join(str(c) for c in x) + "]")


def entry_from_json(rec: dict) -> CorpusEntry:
    known = {"name", "a", "b", "expected_limit", "tags"}
    pcf = Pcf(poly_from_json(rec["a"]), poly_from_json(rec["b"]), rec["name"])
    extra = {k: v for k, v in rec.items() if k not in known}
    return CorpusEntry(rec["name"], pcf, rec.get("expected_limit"), tuple(rec.get("tags", ())), extra)


def _read(name: str) -> str:
    return resources.files("pcflab").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_corpus() -> tuple[CorpusEntry, ...]:
    return tuple(entry_from_json(r) for r in json.loads(_read("corpus.json")))


@lru_cache(maxsize=None)
def load_tables() -> dict:
    return json.loads(_read("tables.json"))


def get(name: str) -> CorpusEntry:
    for e in load_corpus():
        if e.name == name:
            return e
    raise KeyError(f"no corpus entry named {name!r}")


def by_tag(tag: str) -> list[CorpusEntry]:
    return [e for e in load_corpus() if tag in e.tags]


@dataclass(frozen=True)
class LimitCheck:
    name: str
    contains: bool
    digits: float  # correct digits of the enclosure
    agreement: float  # digits on which midpoint and reference agree


def check_limit(entry: CorpusEntry, depth: int = 1000, precision_bits: int = 256) -> LimitCheck:
    """Enclose the limit and compare against the reference expression at matching precision."""
    if entry.expected_limit is None:
        raise ValueError(f"{entry.name} has no expected limit")
    iv = limit_estimate(entry.pcf, depth, precision_bits)
    digits = iv.correct_digits()
    dps = int(min(digits, 11000)) + 20
    ref = eval_constant_expr(entry.expected_limit, dps)
    with mpmath.workdps(dps):
        diff = abs(iv.mid - ref)
        agree = float("inf") if diff == 0 else float(-mpmath.log10(diff / abs(ref)))
    return LimitCheck(entry.name, iv.contains(ref), digits, agree)
