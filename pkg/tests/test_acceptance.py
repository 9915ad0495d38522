"""Acceptance criteria 1-9, one test per sub-part.

Each test logs a [PASS]/[FAIL] line through ``acceptance_log``; the lines are
repeated in the pytest terminal summary.
"""
import itertools
import json
import time
from fractions import Fraction
from math import comb

import pytest

from daisy_turan.cli import main
from daisy_turan.constructions import fano_complement, iterated_fano, iterated_fano_count
from daisy_turan.daisy import DaisyPattern, instance_count, is_daisy_free
from daisy_turan.errors import BoundViolation
from daisy_turan.hypercube import (
    cube_constraint_system,
    enumerate_subcubes,
    is_transversal,
    layered_transversal,
    max_points_in_some_dcube,
    min_subcube_transversal,
    transversal_daisy_correspondence,
)
from daisy_turan.products import UniformHypergraph, daisy_hypergraph, enumerate_copies
from daisy_turan.report import ex_table, export, read_json_records, verify_bounds
from daisy_turan.search import brute_force_oracle, build_daisy_constraints, solve_max_avoiding

D3 = DaisyPattern.plain(3)


def turan_k4_free(n):
    """Edge count of the complete 3-partite graph with parts as equal as possible."""
    parts = [len(range(i, n, 3)) for i in range(3)]
    return sum(a * b for a, b in itertools.combinations(parts, 2))


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def check(log, name, ok, detail):
    log(name, ok, detail)
    assert ok, f"{name}: {detail}"


# 1 -------------------------------------------------------------------------------

def test_c1_fano_complement(acceptance_log):
    with Timer() as t:
        f = fano_complement()
        free = is_daisy_free(f, D3)
    ratio = Fraction(f.size(), comb(7, 3))
    ok = f.size() == 28 and free and ratio == Fraction(4, 5) and t.seconds < 1
    check(acceptance_log, "C1 fano complement: 28 members, D_3-free, density 4/5", ok,
          f"size={f.size()} free={free} ratio={ratio} {t.seconds:.2f}s")


# 2 -------------------------------------------------------------------------------

def test_c2_iterated_counts(acceptance_log):
    sizes = {k: iterated_fano(k).size() for k in (1, 2)}
    ok = (
        sizes[1] == 28 == iterated_fano_count(1)
        and sizes[2] == 9800 == iterated_fano_count(2) == Fraction(comb(50, 3), 2)
    )
    check(acceptance_log, "C2a iterated fano counts (1-49^-k) 7^3k / 12", ok, f"k=1: {sizes[1]}, k=2: {sizes[2]}")


def test_c2_iterated_scan(acceptance_log):
    with Timer() as t:
        f = iterated_fano(2)
        free = is_daisy_free(f, D3)
    instances = instance_count(49, D3)
    ok = free and instances == 49 * comb(48, 4) and t.seconds < 120
    check(acceptance_log, "C2b iterated fano k=2 passes exhaustive daisy scan", ok,
          f"{instances} instances, free={free}, {t.seconds:.1f}s")


# 3 -------------------------------------------------------------------------------

def test_c3_turan_cross_check(acceptance_log):
    with Timer() as t:
        rows = ex_table(DaisyPattern.plain(2), 4, 9)
    got = [r.value for r in rows]
    want = [turan_k4_free(n) for n in range(4, 10)]
    ratios = [r.ratio for r in rows]
    ok = (
        got == want == [5, 8, 12, 16, 21, 27]
        and all(r.is_exact for r in rows)
        and all(a >= b for a, b in zip(ratios, ratios[1:]))
        and all(x >= Fraction(2, 3) for x in ratios)
        and t.seconds < 60
    )
    check(acceptance_log, "C3 ex(n, D_2) equals Turan K4-free counts, n=4..9", ok,
          f"values={got} last ratio={ratios[-1]} {t.seconds:.2f}s")


# 4 -------------------------------------------------------------------------------

def oracle_systems():
    out = []
    for pattern, ns in [
        (DaisyPattern(2, 4, 2), (4, 5, 6)),
        (DaisyPattern(2, 3, 1), (3, 4, 5, 6)),
        (DaisyPattern(2, 4, 1), (4, 5, 6)),
        (DaisyPattern(3, 4, 2), (5, 6)),
        (DaisyPattern(3, 4, 3), (5, 6)),
        (DaisyPattern(3, 4, 1), (5, 6)),
        (DaisyPattern(3, 3, 2), (4, 5, 6)),
        (DaisyPattern(4, 4, 2), (6,)),
    ]:
        for n in ns:
            out.append((f"{pattern.label()} n={n}", build_daisy_constraints(n, pattern)))
    for n, d in [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]:
        out.append((f"Q{n} d={d}", cube_constraint_system(n, d)[0]))
    for n in (4, 6):
        out.append((f"middle Q{n}", cube_constraint_system(n, 4 if n == 6 else 2, True, True)[0]))
    for n in (5, 6):
        out.append((f"K4 copies n={n}", enumerate_copies(UniformHypergraph.complete(4, 2), n)))
    return out


def test_c4_oracle_equivalence(acceptance_log):
    with Timer() as t:
        systems = oracle_systems()
        mismatches = []
        for name, cs in systems:
            assert cs.item_count <= 20
            a, b = solve_max_avoiding(cs), brute_force_oracle(cs)
            if a.objective != b.objective or not a.is_exact or not cs.is_avoiding(a.witness):
                mismatches.append((name, a.objective, b.objective))
    big = build_daisy_constraints(6, D3)
    ok = not mismatches and (big.item_count, len(big.constraints)) == (20, 30) and t.seconds < 120
    check(acceptance_log, "C4 solver equals brute-force oracle on all systems with <= 20 items", ok,
          f"{len(systems)} systems, mismatches={mismatches}, {t.seconds:.1f}s")


# 5 -------------------------------------------------------------------------------

def test_c5_correspondence_identity(acceptance_log):
    with Timer() as t:
        rep = transversal_daisy_correspondence(6, 4)
        tr = min_subcube_transversal(6, 4, middle_only=True, restrict_to_middle_layer=True)
        ex = solve_max_avoiding(build_daisy_constraints(6, D3))
    ok = (
        rep.cube_count == rep.instance_count == 30
        and rep.slices_match
        and tr.is_exact and ex.is_exact
        and tr.objective + ex.objective == comb(6, 3) == 20
        and rep.ok
        and t.seconds < 60
    )
    check(acceptance_log, "C5 middle 4-cube transversal + ex(6, D_3) = 20, slices equal petals", ok,
          f"{tr.objective} + {ex.objective}, {rep.cube_count} cubes / {rep.instance_count} daisies, {t.seconds:.2f}s")


# 6 -------------------------------------------------------------------------------

def test_c6_edges(acceptance_log):
    values = {n: min_subcube_transversal(n, 1) for n in range(1, 5)}
    ok = all(r.is_exact and r.objective == 2 ** (n - 1) for n, r in values.items())
    check(acceptance_log, "C6a Q_n edge transversals are 2^(n-1), n<=4", ok,
          ", ".join(f"n={n}: {r.objective}" for n, r in values.items()))


def test_c6_d2_monotone(acceptance_log):
    dens = {n: Fraction(min_subcube_transversal(n, 2).objective, 2**n) for n in (4, 5)}
    ok = dens[5] <= dens[4]
    check(acceptance_log, "C6b d=2 transversal densities nonincreasing for n=4,5", ok,
          f"{dens[4]} -> {dens[5]}")


def test_c6_d2_at_least_third(acceptance_log):
    dens = {n: Fraction(min_subcube_transversal(n, 2).objective, 2**n) for n in (4, 5)}
    ok = all(x >= Fraction(1, 3) for x in dens.values())
    check(acceptance_log, "C6c d=2 transversal densities >= 1/3 for n=4,5", ok,
          ", ".join(f"n={n}: {x}" for n, x in dens.items()))


def test_c6_small_cube_row(acceptance_log):
    with Timer() as t:
        res = min_subcube_transversal(6, 4)
    ok = res.is_exact and res.objective >= 2 and t.seconds < 300
    check(acceptance_log, "C6d min transversal of 4-subcubes of Q_6 >= 2", ok,
          f"minimum={res.objective} {t.seconds:.2f}s")


# 7 -------------------------------------------------------------------------------

def test_c7_layered_transversals(acceptance_log):
    bad = []
    with Timer() as t:
        for d in (1, 2, 3):
            for n in range(d, 11):
                cubes = enumerate_subcubes(n, d)
                for offset in range(d + 1):
                    vs = layered_transversal(n, d, offset)
                    expected = sum(comb(n, i) for i in range(offset, n + 1, d + 1))
                    if not is_transversal(vs, cubes) or vs.size() != expected:
                        bad.append((n, d, offset))
    ok = not bad and t.seconds < 120
    check(acceptance_log, "C7a every (d+1)-st layer is a transversal with exact binomial size, n<=10, d<=3", ok,
          f"failures={bad} {t.seconds:.2f}s")


def test_c7_johnson_talbot(acceptance_log):
    bad = []
    for d in (1, 2, 3):
        for n in range(d, 9):
            for offset in range(d + 1):
                best, _ = max_points_in_some_dcube(layered_transversal(n, d, offset), d)
                if best != comb(d, d // 2):
                    bad.append((n, d, offset, best))
    check(acceptance_log, "C7b layered families: max points in a d-cube = binom(d, d//2), d<=3, n<=8", not bad,
          f"(n, d, offset, max) mismatches={bad}")


# 8 -------------------------------------------------------------------------------

BOUND_PATTERNS = [
    DaisyPattern(3, 4, 3), DaisyPattern(3, 4, 1), DaisyPattern(3, 4, 2),
    DaisyPattern(2, 4, 2), DaisyPattern(2, 3, 2), DaisyPattern(2, 4, 1),
    DaisyPattern(2, 3, 1), DaisyPattern(3, 3, 2), DaisyPattern(4, 4, 2),
]


def test_c8_bounds(acceptance_log, tmp_path, capsys):
    with Timer() as t:
        tables = {p.label(): ex_table(p, p.min_ground, 7) for p in BOUND_PATTERNS}
        checks, violations = 0, []
        for label, rows in tables.items():
            rep = verify_bounds(rows, raise_on_violation=False)
            checks += len(rep.checks)
            violations += [(label, v.n, v.bound) for v in rep.violations]
        kinds = {c.bound for rows in tables.values() for c in verify_bounds(rows).checks}
        # the same tables through the CLI: zero violations means exit 0
        codes = []
        for label, rows in tables.items():
            path = tmp_path / f"{len(codes)}.json"
            export(rows, "json", path)
            codes.append(main(["report", "--input", str(path)]))
        capsys.readouterr()
    ok = (
        not violations
        and kinds == {"upper_t_eq_s_minus_1", "upper_t_eq_1", "lower_multipartite_count"}
        and set(codes) == {0}
        and t.seconds < 60
    )
    check(acceptance_log, "C8 closed-form bounds hold on all exact tables", ok,
          f"{checks} checks over {len(tables)} tables, violations={violations}, {t.seconds:.1f}s")


def test_c8_violation_exit_code(acceptance_log, tmp_path, capsys):
    doc = json.loads(export(ex_table(DaisyPattern(3, 4, 3), 5, 6), "json"))
    doc["records"][0]["value"], doc["records"][0]["ratio"] = 8, "4/5"  # above the 3/4 cap
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code = main(["report", "--input", str(path)])
    capsys.readouterr()
    with pytest.raises(BoundViolation):
        verify_bounds(read_json_records(path.read_text()))
    check(acceptance_log, "C8 a violating table exits with code 3", code == 3, f"exit code {code}")


# 9 -------------------------------------------------------------------------------

def test_c9_generator_cross_validation(acceptance_log):
    with Timer() as t:
        a = enumerate_copies(daisy_hypergraph(D3), 6)
        b = build_daisy_constraints(6, D3)
    ok = a.constraint_set() == b.constraint_set() and a.item_count == b.item_count and t.seconds < 30
    check(acceptance_log, "C9 enumerate_copies reproduces the daisy generator at n=6", ok,
          f"{len(a.constraints)} vs {len(b.constraints)} constraints, {t.seconds:.2f}s")
