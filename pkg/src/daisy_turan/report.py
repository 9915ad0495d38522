"""Evidence tables for ex(n, F): exact values, density ratios, closed-form bounds, export.

Ratios are stored as ``Fraction``; the decimal column in exports is for
reading only.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Iterable, Optional, Union

from .constructions import multipartite_count
from .daisy import DaisyPattern
from .errors import BoundViolation, InvalidInputError, ResourceRefusal
from .family import binom
from .products import UniformHypergraph, enumerate_copies, hypergraph_id
from .records import Bound, DensityRecord
from .search import SolverConfig, build_daisy_constraints, relabel_generators, solve_max_avoiding

SCHEMA = "daisy-turan/density-table/v1"
CSV_COLUMNS = ("problem", "n", "value", "is_exact", "ratio", "decimal", "bounds")
MAX_TABLE_ITEMS = 128

Problem = Union[DaisyPattern, UniformHypergraph]


def closed_form_bounds(pattern: DaisyPattern, n: int) -> tuple[Bound, ...]:
    """Averaging upper bounds and the multipartite lower bound that apply to ``pattern`` at ``n``.

    * ``upper_t_eq_s_minus_1``: density <= (s-1)/(r+1) when t = s-1 (each
      (r+1)-set holds at most s-1 members; needs n >= r+1).
    * ``upper_t_eq_1``: count <= binom(n, r-1)(s-1)/r when t = 1.
    * ``lower_multipartite``: the limit r!/r^r for (4,2) daisies, reported only.
    * ``lower_multipartite_count``: the complete r-partite family on [n] is
      daisy-free, so ex(n) is at least its size.
    """
    r, s, t = pattern.r, pattern.s, pattern.t
    out = []
    if t == s - 1 and n >= r + 1:
        out.append(Bound("upper_t_eq_s_minus_1", "upper", Fraction(s - 1, r + 1)))
    if t == 1 and r >= 1:
        out.append(Bound("upper_t_eq_1", "upper", Fraction(binom(n, r - 1) * (s - 1), r), unit="count"))
    if (s, t) == (4, 2):
        out.append(Bound("lower_multipartite", "lower", Fraction(factorial(r), r**r), finite=False))
        if n >= r:
            out.append(Bound("lower_multipartite_count", "lower", Fraction(multipartite_count(n, r)), unit="count"))
    return tuple(out)


def problem_label(problem: Problem) -> str:
    if isinstance(problem, DaisyPattern):
        return problem.label()
    return hypergraph_id(problem)


def _uniformity(problem: Problem) -> int:
    return problem.r if isinstance(problem, DaisyPattern) else problem.u


def nonincreasing_violations(records: Iterable[DensityRecord]) -> list[tuple[int, int]]:
    """Pairs ``(n, n')`` of consecutive exact rows of one problem whose density goes the wrong way.

    ex ratios (sense "max") never increase with n; minimum transversal
    densities (sense "min") never decrease.
    """
    by_problem: dict[str, list[DensityRecord]] = {}
    for rec in records:
        if rec.is_exact and rec.value is not None:
            by_problem.setdefault(rec.problem, []).append(rec)
    bad = []
    for rows in by_problem.values():
        rows.sort(key=lambda rec: rec.n)
        for a, b in zip(rows, rows[1:]):
            if (b.ratio > a.ratio) if a.sense == "max" else (b.ratio < a.ratio):
                bad.append((a.n, b.n))
    return bad


def ex_table(
    problem: Problem,
    n_from: int,
    n_to: int,
    cfg: Optional[SolverConfig] = None,
    check_monotone: bool = True,
) -> list[DensityRecord]:
    """One row ex(n, problem) per n in ``[n_from, n_to]``.

    Daisy patterns use the direct instance generator; any other hypergraph goes
    through copy enumeration.  Oversized rows are kept as skipped.  Raises
    :class:`BoundViolation` if the exact ratios increase with n.
    """
    label = problem_label(problem)
    r = _uniformity(problem)
    rows = []
    for n in range(n_from, n_to + 1):
        if n < r:
            continue
        total = binom(n, r)
        bounds = closed_form_bounds(problem, n) if isinstance(problem, DaisyPattern) else ()
        if total > MAX_TABLE_ITEMS:
            rows.append(DensityRecord(label, n, None, False, total, bounds, note=f"{total} items exceed {MAX_TABLE_ITEMS}"))
            continue
        try:
            if isinstance(problem, DaisyPattern):
                cs = build_daisy_constraints(n, problem)
            else:
                cs = enumerate_copies(problem, n)
        except ResourceRefusal as exc:
            rows.append(DensityRecord(label, n, None, False, total, bounds, note=str(exc)))
            continue
        gens = relabel_generators(n, r) if cfg is not None and cfg.symmetry else None
        res = solve_max_avoiding(cs, cfg, gens)
        rows.append(
            DensityRecord(
                label, n, res.objective, res.is_exact, total, bounds,
                extra={"nodes": res.nodes_explored, "seconds": round(res.wall_time, 4)},
            )
        )
    if check_monotone:
        bad = nonincreasing_violations(rows)
        if bad:
            raise BoundViolation(f"{label}: density increases between n={bad[0][0]} and n={bad[0][1]}")
    return rows


@dataclass(frozen=True)
class BoundCheck:
    problem: str
    n: int
    bound: str
    sense: str
    ratio: Fraction
    limit: Fraction
    ok: bool


@dataclass(frozen=True)
class BoundReport:
    checks: tuple[BoundCheck, ...]

    @property
    def violations(self) -> tuple[BoundCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_bounds(records: Iterable[DensityRecord], raise_on_violation: bool = True) -> BoundReport:
    """Compare every exact row with its finite bounds.

    Upper bounds must hold for the optimum; lower bounds come from explicit
    constructions that are feasible at the same n.  Limit-only bounds are skipped.
    """
    checks = []
    for rec in records:
        if rec.value is None or not rec.is_exact:
            continue
        for b in rec.bounds:
            if not b.finite:
                continue
            limit = b.as_density(rec.total)
            ok = rec.ratio <= limit if b.sense == "upper" else rec.ratio >= limit
            checks.append(BoundCheck(rec.problem, rec.n, b.name, b.sense, rec.ratio, limit, ok))
    report = BoundReport(tuple(checks))
    if raise_on_violation and not report.ok:
        v = report.violations[0]
        raise BoundViolation(f"{v.problem} n={v.n}: ratio {v.ratio} violates {v.sense} bound {v.bound} = {v.limit}")
    return report


# -- serialisation ------------------------------------------------------------------

def decimal_string(x: Fraction, places: int = 6) -> str:
    with localcontext() as ctx:
        ctx.prec = 50
        d = Decimal(x.numerator) / Decimal(x.denominator)
        return str(d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"bad rational {text!r}") from None


def record_to_dict(rec: DensityRecord) -> dict:
    return {
        "problem": rec.problem,
        "n": rec.n,
        "value": rec.value,
        "is_exact": rec.is_exact,
        "ratio": None if rec.ratio is None else _frac(rec.ratio),
        "decimal": None if rec.ratio is None else decimal_string(rec.ratio),
        "bounds": [
            {"name": b.name, "sense": b.sense, "value": _frac(b.value), "unit": b.unit, "finite": b.finite}
            for b in rec.bounds
        ],
        "total": rec.total,
        "sense": rec.sense,
        "note": rec.note,
    }


def record_from_dict(obj: dict) -> DensityRecord:
    try:
        bounds = tuple(
            Bound(b["name"], b["sense"], _parse_frac(b["value"]), b.get("unit", "density"), b.get("finite", True))
            for b in obj.get("bounds", [])
        )
        rec = DensityRecord(
            obj["problem"], int(obj["n"]), obj["value"], bool(obj["is_exact"]), int(obj["total"]),
            bounds, obj.get("sense", "max"), obj.get("note", ""),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad density record: {exc}") from None
    if obj.get("ratio") is not None and _parse_frac(obj["ratio"]) != rec.ratio:
        raise InvalidInputError(f"stored ratio {obj['ratio']} disagrees with value/total")
    return rec


def export(records: Iterable[DensityRecord], fmt: str = "json", path: Optional[Union[str, Path]] = None) -> str:
    """Serialise a table as JSON or CSV; also writes it when ``path`` is given."""
    records = list(records)
    if fmt == "json":
        text = json.dumps({"schema": SCHEMA, "records": [record_to_dict(r) for r in records]}, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            d = record_to_dict(rec)
            bounds = ";".join(f"{b['name']}{'<=' if b['sense'] == 'upper' else '>='}{b['value']}" for b in d["bounds"])
            writer.writerow([
                d["problem"], d["n"], "" if d["value"] is None else d["value"], str(d["is_exact"]).lower(),
                d["ratio"] or "", d["decimal"] or "", bounds,
            ])
        text = buf.getvalue()
    else:
        raise InvalidInputError(f"unknown format {fmt!r}; use json or csv")
    if path is not None:
        Path(path).write_text(text)
    return text


def read_json_records(text: str) -> list[DensityRecord]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"invalid JSON: {exc}") from None
    if obj.get("schema") != SCHEMA:
        raise InvalidInputError(f"unexpected schema {obj.get('schema')!r}")
    return [record_from_dict(r) for r in obj["records"]]


def bracket(records: Iterable[DensityRecord], construction_density: Fraction) -> tuple[Fraction, Optional[Fraction]]:
    """``[best construction density, smallest exact ratio]`` for a table, without interpretation."""
    exact = [r.ratio for r in records if r.is_exact and r.value is not None]
    return construction_density, (min(exact) if exact else None)


def format_table(records: Iterable[DensityRecord]) -> str:
    lines = [f"{'problem':<14} {'n':>3} {'value':>9} {'ratio':>12} {'decimal':>9}"]
    for rec in records:
        ratio = "-" if rec.ratio is None else _frac(rec.ratio)
        dec = "-" if rec.ratio is None else decimal_string(rec.ratio)
        lines.append(f"{rec.problem:<14} {rec.n:>3} {rec.display_value():>9} {ratio:>12} {dec:>9}")
    return "\n".join(lines)
