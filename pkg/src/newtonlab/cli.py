"""Command-line driver.

Usage::

    newtonlab <verb> key=value ... [--format=kv|tsv]

Exit status is 0 on success, 1 for invalid input and 2 for an internal
consistency failure or a counterexample.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, Optional, TextIO

from .covers import CoverSpec, Exactness, ds_prank, exactness_class, hodge_lower_bound, parse_branches, rh_genus
from .errors import BaseNotOrdinary, InternalError, NewtonLabError
from .families import (
    FamilyMember,
    construct_theorem4,
    construct_theorem5,
    frequency_report,
    max_admissible_k,
    oort_witness,
)
from .polygon import PARABOLA, format_rational, format_slopes, min_gap, parse_slopes, scaled
from .strata import is_unlikely_polygon, unlikely_family_report
from .zeta import verify_prediction

VERBS = ("predict", "construct", "zeta-verify", "codim", "oort", "sweep", "asymptotics")

Row = dict


class UsageError(NewtonLabError):
    pass


def _bool(value: bool) -> str:
    return "true" if value else "false"


def emit_report(rows: Iterable[Row], fmt: str = "kv", title: str = "report",
                columns: Optional[list[str]] = None, notes: Iterable[str] = ()) -> str:
    """Render rows as ``key=value`` lines or TSV, preceded by one header line.

    Column order is taken from ``columns`` or else from the first row; the
    output depends only on the rows, never on how they were computed.
    """
    rows = list(rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    if fmt == "tsv":
        lines = ["\t".join(columns)]
        lines += ["\t".join(str(row.get(c, "")) for c in columns) for row in rows]
    elif fmt == "kv":
        lines = [f"# {title}"]
        lines += [" ".join(f"{k}={v}" for k, v in row.items()) for row in rows]
    else:
        raise UsageError(f"unknown format {fmt!r}; use kv or tsv")
    lines += [f"# {n}" for n in notes]
    return "\n".join(lines) + "\n"


# -- option parsing -------------------------------------------------------


def _options(tokens: list[str], allowed: dict[str, Optional[str]]) -> dict[str, str]:
    """Parse key=value tokens; ``allowed`` maps keys to defaults (None = required)."""
    out: dict[str, str] = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {tok!r}")
        if key not in allowed:
            raise UsageError(f"unknown option {key!r}; allowed: {', '.join(allowed)}")
        out[key] = value
    for key, default in allowed.items():
        if key not in out:
            if default is None:
                raise UsageError(f"missing required option {key}=...")
            out[key] = default
    return out


def _int(opts: dict, key: str) -> int:
    try:
        return int(opts[key])
    except ValueError:
        raise UsageError(f"{key}={opts[key]!r} is not an integer") from None


def _range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        return range(int(lo), int(hi if sep else lo) + 1)
    except ValueError:
        raise UsageError(f"bad range {text!r}; use a..b or a single integer") from None


def _flag(text: str) -> bool:
    if text.lower() in ("true", "1", "yes"):
        return True
    if text.lower() in ("false", "0", "no"):
        return False
    raise UsageError(f"expected true/false, got {text!r}")


def _pmap(fn: Callable, items: list, workers: int) -> list:
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# -- row builders ---------------------------------------------------------


def member_row(member: FamilyMember) -> Row:
    if member.source == "T4":
        row = {"source": "T4", "p": member.p, "d": member.d, "g": member.g, "k": member.k,
               "delta": member.delta, "i": member.i, "j": member.j}
    else:
        row = {"source": "T5", "p": member.p, "g": member.g, "i": member.i, "u": member.u,
               "v": member.v, "k": member.k, "d": member.d, "case": member.case,
               "branches": ",".join(str(b) for b in member.spec.branches)}
    row["slopes"] = format_slopes(member.predicted)
    row["exact"] = str(member.exactness)
    return row


def _t4(args) -> Optional[FamilyMember]:
    p, d, g, k = args
    if k == "max":
        k = max_admissible_k(p, d, g)
        if k is None:
            return None
    return construct_theorem4(p, d, g, int(k))


def _t5(args) -> FamilyMember:
    return construct_theorem5(*args)


def _asymptotic_row(args) -> Row:
    p, g = args
    member = construct_theorem5(p, g)
    gap = min_gap(scaled(member.predicted), PARABOLA)
    return {"g": g, "d": member.d, "case": member.case, "mingap": format_rational(gap),
            "g_times_gap": format_rational(g * gap), "above_minus_3_over_g": _bool(gap >= Fraction(-3, g))}


# -- verbs ----------------------------------------------------------------


def _exactness_notes(exact: Exactness) -> list[str]:
    return [f"{exact}: {exact.description}"] if exact is Exactness.BOOHER_PRIES else []


def cmd_predict(tokens, fmt):
    o = _options(tokens, {"p": None, "gX": "0", "ordinary": "true", "branches": None})
    spec = CoverSpec(_int(o, "p"), _int(o, "gX"), _flag(o["ordinary"]), parse_branches(o["branches"]))
    try:
        prank = str(ds_prank(spec))
    except BaseNotOrdinary:
        prank = "unknown"
    exact = exactness_class(spec)
    row = {"slopes": format_slopes(hodge_lower_bound(spec)), "exact": str(exact),
           "genus": rh_genus(spec), "prank": prank}
    return [row], _exactness_notes(exact), 0


def cmd_construct(tokens, fmt):
    family = dict(t.partition("=")[::2] for t in tokens if t.startswith("family=")).get("family", "T4")
    if family == "T4":
        o = _options(tokens, {"family": "T4", "p": None, "d": None, "g": None, "k": None})
        member = construct_theorem4(_int(o, "p"), _int(o, "d"), _int(o, "g"), _int(o, "k"))
    elif family == "T5":
        o = _options(tokens, {"family": "T5", "p": None, "g": None})
        member = construct_theorem5(_int(o, "p"), _int(o, "g"))
    else:
        raise UsageError(f"family must be T4 or T5, got {family!r}")
    notes = _exactness_notes(member.exactness)
    if member.case == "II-corrected":
        notes.append("case II uses conductors (d-2, 1) so that the genus is exactly g")
    return [member_row(member)], notes, 0


def cmd_zeta_verify(tokens, fmt):
    o = _options(tokens, {"p": None, "f": None, "workers": "1"})
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = verify_prediction(o["f"], _int(o, "p"), workers=_int(o, "workers"))
    row = {"verdict": report.verdict, "measured": format_slopes(report.measured),
           "predicted": format_slopes(report.predicted), "genus": report.genus,
           "branches": report.branches, "exact": str(report.exactness),
           "prank": report.measured.p_rank, "ds_prank": report.prank_expected,
           "L": str(report.L), "f": str(report.f).replace(" ", "")}
    notes = [str(w.message) for w in caught] + [f"failure: {msg}" for msg in report.failures]
    return [row], notes, 2 if report.failures else 0


def cmd_codim(tokens, fmt):
    o = _options(tokens, {"slopes": None, "g": ""})
    polygon = parse_slopes(o["slopes"])
    if o["g"] and _int(o, "g") != polygon.genus:
        raise UsageError(f"g={o['g']} but the slope list has genus {polygon.genus}")
    rep = is_unlikely_polygon(polygon)
    row = {"omega": rep.omega.count, "exact": _bool(rep.omega.exact_codimension),
           "unlikely": _bool(rep.is_unlikely), "torelli_dim": 3 * polygon.genus - 3,
           "codimT": rep.codim_torelli, "dimA": rep.ambient_dim, "marginal": _bool(rep.marginal)}
    return [row], [], 0


def cmd_oort(tokens, fmt):
    o = _options(tokens, {"p": None, "d": None, "g1": None, "k1": None, "g2": None, "k2": None})
    w = oort_witness(_int(o, "p"), _int(o, "d"), (_int(o, "g1"), _int(o, "k1")), (_int(o, "g2"), _int(o, "k2")))
    row = {"holds": _bool(w.holds), "g": w.combined.g, "k": w.combined.k,
           "slopes": format_slopes(w.amalgam),
           "left": format_slopes(w.first.predicted), "right": format_slopes(w.second.predicted)}
    return [row], [], 0


def cmd_sweep(tokens, fmt):
    o = _options(tokens, {"family": "T4", "p": None, "d": "2", "g": None, "k": "max",
                          "report": "members", "slopes": "", "workers": "1"})
    p, workers = _int(o, "p"), _int(o, "workers")
    gs = list(_range(o["g"]))
    if o["family"] == "T4":
        d = _int(o, "d")
        k = o["k"] if o["k"] == "max" else str(_int(o, "k"))
        members = [m for m in _pmap(_t4, [(p, d, g, k) for g in gs], workers) if m is not None]
    elif o["family"] == "T5":
        members = _pmap(_t5, [(p, g) for g in gs], workers)
    else:
        raise UsageError(f"family must be T4 or T5, got {o['family']!r}")
    if o["report"] == "members":
        return [member_row(m) for m in members], [], 0
    if o["report"] == "strata":
        rep = unlikely_family_report([(m.g, m.predicted) for m in members if m.g >= 2], PARABOLA, workers)
        rows = [{"g": r.g, "omega": r.report.omega.count, "codimT": r.report.codim_torelli,
                 "dimA": r.report.ambient_dim, "unlikely": _bool(r.report.is_unlikely),
                 "mingap": format_rational(r.mingap)} for r in rep.rows]
        return rows, [rep.summary()], 0
    if o["report"] == "frequency":
        if not o["slopes"]:
            raise UsageError("report=frequency needs slopes=<symmetric slope list>")
        try:
            wanted = [Fraction(s) for s in o["slopes"].split(",")]
        except ValueError:
            raise UsageError(f"bad slope list {o['slopes']!r}") from None
        rep = frequency_report(members, wanted)
        return [dict(tok.split("=", 1) for tok in str(r).split()) for r in rep.rows], [rep.summary()], 0
    raise UsageError(f"report must be members, strata or frequency, got {o['report']!r}")


def cmd_asymptotics(tokens, fmt):
    o = _options(tokens, {"p": None, "g": None, "workers": "1"})
    p = _int(o, "p")
    rows = _pmap(_asymptotic_row, [(p, g) for g in _range(o["g"])], _int(o, "workers"))
    worst = min((Fraction(r["g_times_gap"]) for r in rows), default=Fraction(0))
    return rows, [f"min_g_times_gap={format_rational(worst)}"], 0


COMMANDS = {
    "predict": cmd_predict,
    "construct": cmd_construct,
    "zeta-verify": cmd_zeta_verify,
    "codim": cmd_codim,
    "oort": cmd_oort,
    "sweep": cmd_sweep,
    "asymptotics": cmd_asymptotics,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="newtonlab", description=__doc__.splitlines()[0])
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("options", nargs="*", help="key=value options for the verb")
    parser.add_argument("--format", default="kv", choices=("kv", "tsv"))
    return parser


def run(argv: Optional[list[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    try:
        args = _parser().parse_args(argv)
        rows, notes, status = COMMANDS[args.verb](args.options, args.format)
        out.write(emit_report(rows, args.format, args.verb, notes=notes))
        return status
    except InternalError as exc:
        err.write(f"newtonlab: internal check failed: {exc}\n")
        return 2
    except NewtonLabError as exc:
        err.write(f"newtonlab: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
