"""pcflab command line: eval, analyze, search, deflate, reduce, report."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import mpmath

from . import corpus as corpus_mod
from .constants import eval_constant_expr, reference as load_reference
from .family_search import (SearchBox, TABLE3_BOX, TABLE4_B, TABLE4_BOX, search_a_for_fr,
                            table3_universe)
from .gcd_lab import Degenerate, FrVerdict, TooShort, fit_closed_form, gcd_series, parse_form
from .irrationality import report as delta_report
from .pcf_core import PcfError, Pcf, convergents, limit_estimate
from .polyring import discriminant_is_rational_square, display, parse_poly
from .reduction import NotVerified, build_reduced, compare_modes, fast_eval, integrality_test
from .transforms import deflate

REF_NAMES = ("pi", "e", "zeta2", "zeta3", "catalan", "ln2", "phi", "sqrt2")
DEFAULT_PRECISION = 256


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    a: str | None = None
    b: str | None = None
    name: str | None = None
    depth: int | None = None
    precision_bits: int = DEFAULT_PRECISION
    thresholds: dict = field(default_factory=dict)
    output: str | None = None
    fmt: str = "json"
    seed: int = 0
    workers: int = 1
    extra: dict = field(default_factory=dict)


def default_precision() -> int:
    raw = os.environ.get("PCFLAB_PRECISION")
    if not raw:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise UsageError(f"PCFLAB_PRECISION must be an integer number of bits, got {raw!r}") from None
    if bits < 32:
        raise UsageError("PCFLAB_PRECISION must be at least 32 bits")
    return bits


def _poly_arg(text: str, what: str):
    try:
        return parse_poly(text)
    except ValueError as exc:
        raise UsageError(f"--{what}: {exc}") from None


def resolve_pcf(cfg: RunConfig) -> Pcf:
    if cfg.name:
        if cfg.a or cfg.b:
            raise UsageError("give either --name or --a/--b, not both")
        try:
            return corpus_mod.get(cfg.name).pcf
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    if not (cfg.a and cfg.b):
        raise UsageError("both --a and --b are required (or --name for a corpus entry)")
    a, b = _poly_arg(cfg.a, "a"), _poly_arg(cfg.b, "b")
    try:
        return Pcf(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def resolve_reference(pcf: Pcf, ref: str | None, notes: list[str]):
    """Turn --ref into something the empirical delta can use.

    A bare constant name is matched against corpus entries with the same
    polynomials first (so Apery with zeta3 uses 6/zeta3); otherwise the name
    is used directly if it agrees with the limit, else self-reference.
    """
    if ref is None:
        return None
    if ref not in REF_NAMES:
        try:
            eval_constant_expr(ref, 20)
        except ValueError as exc:
            raise UsageError(f"--ref: {exc}") from None
        return ref
    for e in corpus_mod.load_corpus():
        if e.pcf == pcf and e.expected_limit and ref in e.expected_limit:
            if e.expected_limit != ref:
                notes.append(f"reference {ref} resolved to the limit {e.expected_limit}")
            return e.expected_limit
    try:
        iv = limit_estimate(pcf, 300)
        with mpmath.workdps(40):
            if abs(iv.mid - load_reference(ref).value(40)) < mpmath.mpf(10) ** -25:
                return ref
    except PcfError:
        pass
    notes.append(f"limit does not match {ref}; self-reference used instead")
    return None


# ------------------------------------------------------------------ commands

def _directed_str(x, digits: int, up: bool) -> str:
    """x to `digits` significant digits, rounded outward so the printed
    interval still encloses the true one."""
    if x == 0:
        return "0"
    e = int(mpmath.floor(mpmath.log10(abs(x))))
    shift = digits - 1 - e
    scaled = x * mpmath.mpf(10) ** shift
    m = int(mpmath.ceil(scaled) if up else mpmath.floor(scaled))
    sign = "-" if m < 0 else ""
    m = abs(m)
    if shift <= 0:
        return f"{sign}{m * 10 ** -shift}"
    s = str(m).rjust(shift + 1, "0")
    return f"{sign}{s[:-shift]}.{s[-shift:]}"


def cmd_eval(cfg: RunConfig) -> dict:
    pcf = resolve_pcf(cfg)
    depth = cfg.depth or 1000
    iv = limit_estimate(pcf, depth, cfg.precision_bits)
    digits = iv.correct_digits()
    show = int(min(max(digits, 5), 60))
    with mpmath.workprec(iv.precision_bits):
        out = {"pcf": pcf.label(), "a": display(pcf.a), "b": display(pcf.b), "depth": depth,
               "lo": _directed_str(iv.lo, show + 5, up=False),
               "hi": _directed_str(iv.hi, show + 5, up=True),
               "correct_digits": round(digits, 3), "tail_ratio": iv.tail_ratio}
    ref = cfg.extra.get("ref")
    if ref:
        expr = ref
        if ref in REF_NAMES:
            notes: list[str] = []
            expr = resolve_reference(pcf, ref, notes) or ref
        val = eval_constant_expr(expr, int(min(digits, 11000)) + 20)
        out["reference"] = expr
        out["contains_reference"] = iv.contains(val)
    return out


def cmd_analyze(cfg: RunConfig) -> dict:
    pcf = resolve_pcf(cfg)
    notes: list[str] = []
    ref = resolve_reference(pcf, cfg.extra.get("ref"), notes)
    rep = delta_report(pcf, cfg.depth, ref, use_gcd2=cfg.extra.get("gcd2", False),
                       empirical=not cfg.extra.get("no_empirical", False))
    rep.notes[:0] = notes
    out = rep.to_json()
    out["depth"] = cfg.depth
    if cfg.extra.get("fit") and rep.fr_verdict is FrVerdict.FR:
        series = gcd_series(convergents(pcf, cfg.depth or 1000))
        fit = fit_closed_form(series, pcf)
        out["gcd_form"] = fit.form.display() if fit.form else None
        out["residual_flag"] = fit.residual_flag
    return out


def _parse_box(text: str) -> list[tuple[int, int]]:
    """"1:5,1:5" or "[(1,5),(1,5)]", lowest degree first."""
    t = text.strip()
    try:
        if t.startswith("["):
            ranges = [tuple(int(x) for x in r) for r in json.loads(t.replace("(", "[").replace(")", "]"))]
        else:
            ranges = [tuple(int(x) for x in part.split(":")) for part in t.split(",")]
    except (ValueError, json.JSONDecodeError):
        raise UsageError(f"--box: cannot parse {text!r}; use lo:hi per coefficient, e.g. 1:5,1:5") from None
    for r in ranges:
        if len(r) != 2 or r[0] > r[1]:
            raise UsageError(f"--box: bad range {r}; each range is lo:hi with lo <= hi")
    return ranges


def cmd_search(cfg: RunConfig) -> list[dict]:
    rep = cfg.extra.get("reproduce")
    th = cfg.thresholds
    if rep == "table3":
        box = _with_overrides(TABLE3_BOX, cfg)
        rows = []
        for b in table3_universe():
            hits = search_a_for_fr(b, box, cfg.workers)
            rows.append({"b": str(b), "splittable": discriminant_is_rational_square(b),
                         "fr": bool(hits), "hits": len(hits),
                         "a_example": str(hits[0].a) if hits else "none found"})
        return rows
    if rep == "table4":
        return [dict(b=str(TABLE4_B), **h.row())
                for h in search_a_for_fr(TABLE4_B, _with_overrides(TABLE4_BOX, cfg), cfg.workers)]
    if rep:
        raise UsageError(f"--reproduce: unknown table {rep!r} (choose table3 or table4)")
    if not cfg.b or not cfg.extra.get("box"):
        raise UsageError("search needs --b and --box (or --reproduce table3|table4)")
    b = _poly_arg(cfg.b, "b")
    box = SearchBox(_parse_box(cfg.extra["box"]), depth=cfg.depth or 1000,
                    shallow_depth=cfg.extra.get("shallow_depth") or 200,
                    rho_loose=th.get("rho_loose", 0.3), rho_fr=th.get("rho_fr", 0.15))
    return [dict(b=str(b), **h.row()) for h in search_a_for_fr(b, box, cfg.workers)]


def _with_overrides(box: SearchBox, cfg: RunConfig) -> SearchBox:
    return SearchBox(box.ranges, depth=cfg.depth or box.depth,
                     shallow_depth=cfg.extra.get("shallow_depth") or box.shallow_depth,
                     rho_loose=cfg.thresholds.get("rho_loose", box.rho_loose),
                     rho_fr=cfg.thresholds.get("rho_fr", box.rho_fr))


def cmd_deflate(cfg: RunConfig) -> dict:
    pcf = resolve_pcf(cfg)
    d = deflate(pcf)
    return {"pcf": pcf.label(), "deflated_a": display(d.result.a), "deflated_b": display(d.result.b),
            "c": display(d.c), "limit_scale": str(d.limit_scale), "sqrt_report": d.sqrt_report}


def cmd_reduce(cfg: RunConfig) -> list[dict]:
    pcf = resolve_pcf(cfg)
    form_text = cfg.extra.get("form")
    if not form_text:
        raise UsageError("reduce needs --form, e.g. --form 'n!/2^n'")
    try:
        form = parse_form(form_text)
    except ValueError as exc:
        raise UsageError(f"--form: {exc}") from None
    rr = build_reduced(pcf, form)
    depth = cfg.depth or 2000
    verdict = integrality_test(rr, trials=cfg.extra.get("trials", 20), depth=depth, seed=cfg.seed)
    rows = []
    if not verdict.passed:
        rows.append({"recursion": rr.display(), "integral": False,
                     "counterexample": str(verdict.counterexample)})
        return rows
    for d in cfg.extra.get("bench") or [depth]:
        res = fast_eval(rr, d, cfg.precision_bits)
        row = {"recursion": rr.display(), "integral": True, **res.benchmark_row(),
               "bits_ratio": round(res.bits_ratio, 6), "exact_match": res.exact_match}
        if cfg.extra.get("online"):
            cm = compare_modes(rr, d)
            row["online_matches"] = cm["same_convergent"]
        rows.append(row)
    return rows


def _table1_rows(cfg: RunConfig) -> list[dict]:
    depth = cfg.depth or 3000
    rows = []
    for e in corpus_mod.by_tag("table1"):
        rep = delta_report(e.pcf, depth, e.expected_limit)
        row = {"name": e.name, "a": display(e.pcf.a), "b": display(e.pcf.b),
               "fr": rep.fr_verdict.value, "lambda": rep.lam,
               "delta_formula": rep.to_json()["delta_formula"], "delta_empirical": rep.delta_empirical,
               "published_lambda": e.extra["published"]["lambda"], "published_delta": e.extra["published"]["delta"]}
        if rep.fr_verdict is FrVerdict.FR:
            fit = fit_closed_form(gcd_series(convergents(e.pcf, depth)), e.pcf)
            row["gcd_form"] = fit.form.display() if fit.form else None
            row["residual_flag"] = fit.residual_flag
        rows.append(row)
    return rows


def cmd_report(cfg: RunConfig):
    rep = cfg.extra.get("reproduce")
    if rep == "table1":
        return _table1_rows(cfg)
    if rep == "table3":
        return cmd_search(RunConfig(**{**asdict(cfg), "command": "search"}))
    if rep:
        raise UsageError(f"--reproduce: unknown table {rep!r} (choose table1 or table3)")
    tag = cfg.extra.get("tag")
    entries = corpus_mod.by_tag(tag) if tag else [corpus_mod.get(cfg.name)] if cfg.name else None
    if not entries:
        raise UsageError("report needs --reproduce table1|table3, --tag or --name")
    return [delta_report(e.pcf, cfg.depth, e.expected_limit).to_json() for e in entries]


COMMANDS = {"eval": cmd_eval, "analyze": cmd_analyze, "search": cmd_search,
            "deflate": cmd_deflate, "reduce": cmd_reduce, "report": cmd_report}
CSV_DEFAULT = {"search", "reduce"}


# ------------------------------------------------------------------ output

def emit(result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    rows = result if isinstance(result, list) else [result]
    buf = io.StringIO()
    if rows:
        cols = []
        for r in rows:
            cols += [k for k in r if k not in cols]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcflab", description="Polynomial continued fraction laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, pcf=True):
        if pcf:
            sp.add_argument("--a", help='a_n as "[5,27,51,34]" or "34n^3+51n^2+27n+5"')
            sp.add_argument("--b", help="b_n, same syntax as --a")
            sp.add_argument("--name", help="corpus entry name instead of --a/--b")
        sp.add_argument("--depth", type=int)
        sp.add_argument("--precision", type=int, dest="precision_bits", help="working precision in bits")
        sp.add_argument("--format", choices=("json", "csv"), dest="fmt")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("eval", help="enclose the limit")
    common(sp)
    sp.add_argument("--ref", help=f"reference name ({'|'.join(REF_NAMES)}) or expression like 4/pi")

    sp = sub.add_parser("analyze", help="lambda, FR verdict and delta report")
    common(sp)
    sp.add_argument("--ref", help=f"reference name ({'|'.join(REF_NAMES)}) or expression")
    sp.add_argument("--gcd2", action="store_true", help="use GCD2 when equivalent")
    sp.add_argument("--no-empirical", action="store_true")
    sp.add_argument("--fit", action="store_true", help="also fit a closed GCD form")

    sp = sub.add_parser("search", help="find a_n with FR for a given b_n")
    common(sp, pcf=False)
    sp.add_argument("--b")
    sp.add_argument("--box", help="coefficient ranges lowest degree first, e.g. 1:5,1:5")
    sp.add_argument("--shallow-depth", type=int)
    sp.add_argument("--rho-fr", type=float)
    sp.add_argument("--rho-loose", type=float)
    sp.add_argument("--reproduce", help="table3 or table4")

    sp = sub.add_parser("deflate", help="remove a polynomial scaler")
    common(sp)

    sp = sub.add_parser("reduce", help="reduced recursion integrality and benchmark")
    common(sp)
    sp.add_argument("--form", help="conjectured GCD, e.g. 'n!/2^n'")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--bench", type=int, nargs="*", help="depths for the benchmark rows")
    sp.add_argument("--online", action="store_true", help="also run the online GCD2 mode")

    sp = sub.add_parser("report", help="reproduce table rows or report corpus entries")
    common(sp)
    sp.add_argument("--reproduce", help="table1 or table3")
    sp.add_argument("--tag", help="report every corpus entry with this tag")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    cfg = RunConfig(command=d.pop("command"))
    for key in ("a", "b", "name", "depth", "output", "seed", "workers"):
        if key in d:
            setattr(cfg, key, d.pop(key))
    bits = d.pop("precision_bits", None)
    cfg.precision_bits = bits if bits is not None else default_precision()
    fmt = d.pop("fmt", None)
    cfg.fmt = fmt or ("csv" if cfg.command in CSV_DEFAULT or d.get("reproduce") == "table3" else "json")
    for key in ("rho_fr", "rho_loose"):
        v = d.pop(key, None)
        if v is not None:
            cfg.thresholds[key] = v
    cfg.extra = {k: v for k, v in d.items() if v not in (None, False)}
    if cfg.depth is not None and cfg.depth < 10:
        raise UsageError("--depth must be at least 10")
    return cfg


def run(cfg: RunConfig) -> str:
    return emit(COMMANDS[cfg.command](cfg), cfg.fmt)


def _join_negative_values(argv: list[str]) -> list[str]:
    """Let "--b -n^2" through: argparse would read "-n^2" as an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--a", "--b", "--form", "--ref") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(_join_negative_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        cfg = config_from_args(ns)
        text = run(cfg)
    except UsageError as exc:
        print(f"pcflab: usage error: {exc}", file=sys.stderr)
        return 2
    except (PcfError, Degenerate, TooShort, NotVerified, ValueError, ArithmeticError) as exc:
        print(f"pcflab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"pcflab: cannot write {cfg.output}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
