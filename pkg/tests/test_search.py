import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daisy_turan.daisy import DaisyPattern, enumerate_daisies
from daisy_turan.errors import InvalidInputError, ResourceRefusal
from daisy_turan.family import colex_rank, relabel, SetFamily
from daisy_turan.search import (
    EXACT,
    LOWER_BOUND_ONLY,
    ConstraintSystem,
    SolverConfig,
    brute_force_oracle,
    build_daisy_constraints,
    packing_upper_bound,
    relabel_generators,
    solve_max_avoiding,
    solve_min_transversal,
)

D342 = DaisyPattern(3, 4, 2)
K4 = DaisyPattern(2, 4, 2)


def python_max_avoiding(m, constraints, fixed_in=frozenset(), fixed_out=frozenset()):
    """Plain-Python exhaustive optimum over the undecided items (-1 if infeasible)."""
    free = [i for i in range(m) if i not in fixed_in and i not in fixed_out]
    best = -1
    for k in range(len(free) + 1):
        for extra in itertools.combinations(free, k):
            s = set(fixed_in) | set(extra)
            if not any(set(c) <= s for c in constraints):
                best = max(best, len(s))
    return best


def q3_edges():
    return ConstraintSystem(8, tuple((v, v ^ (1 << i)) for v in range(8) for i in range(3) if not v >> i & 1))


systems = st.integers(1, 10).flatmap(
    lambda m: st.builds(
        ConstraintSystem,
        st.just(m),
        st.lists(st.frozensets(st.integers(0, m - 1), min_size=1, max_size=4), max_size=12).map(tuple),
    )
)


def test_build_daisy_constraints_examples():
    cs = build_daisy_constraints(4, K4)
    assert (cs.item_count, len(cs.constraints)) == (6, 1)
    assert cs.constraints[0] == tuple(range(6))
    cs = build_daisy_constraints(7, D342)
    assert cs.item_count == 35 and len(cs.constraints) == 105
    assert all(len(c) == 6 for c in cs.constraints)
    cs = build_daisy_constraints(5, D342)
    assert (cs.item_count, len(cs.constraints)) == (10, 5)
    assert build_daisy_constraints(3, D342).constraints == ()


def test_daisy_constraints_are_petal_ranks():
    cs = build_daisy_constraints(6, D342)
    expected = {tuple(sorted(colex_rank(p) for p in inst.petals)) for inst in enumerate_daisies(6, D342)}
    assert cs.constraint_set() == expected


def test_constraint_system_validation():
    with pytest.raises(InvalidInputError):
        ConstraintSystem(3, ((),))
    with pytest.raises(InvalidInputError):
        ConstraintSystem(3, ((0, 3),))
    cs = ConstraintSystem(3, ((1, 0), (0, 1), (2,)))
    assert cs.constraints == ((0, 1), (2,))


@pytest.mark.parametrize("n,expected", [(4, 5), (6, 12)])
def test_small_turan_values(n, expected):
    cs = build_daisy_constraints(n, K4)
    assert solve_max_avoiding(cs).objective == expected == brute_force_oracle(cs).objective


def test_no_constraints_takes_everything():
    res = solve_max_avoiding(ConstraintSystem(10, ()))
    assert res.objective == 10 and res.witness == tuple(range(10)) and res.status == EXACT
    assert brute_force_oracle(ConstraintSystem(10, ())).objective == 10


def test_min_transversal_examples():
    assert solve_min_transversal(ConstraintSystem(6, (tuple(range(6)),))).objective == 1
    res = solve_min_transversal(q3_edges())
    assert res.objective == 4
    assert q3_edges().is_transversal(res.witness)


@pytest.mark.parametrize("n,pattern", [(5, D342), (6, D342), (5, K4), (6, K4), (6, DaisyPattern(3, 4, 3))])
def test_solver_matches_oracle_on_daisy_systems(n, pattern):
    cs = build_daisy_constraints(n, pattern)
    assert solve_max_avoiding(cs).objective == brute_force_oracle(cs).objective


@settings(max_examples=150, deadline=None)
@given(systems)
def test_solver_matches_oracle_random(cs):
    res = solve_max_avoiding(cs)
    oracle = brute_force_oracle(cs)
    assert res.objective == oracle.objective == python_max_avoiding(cs.item_count, cs.constraints)
    assert cs.is_avoiding(res.witness) and len(res.witness) == res.objective
    assert cs.is_avoiding(oracle.witness) and len(oracle.witness) == oracle.objective
    tr = solve_min_transversal(cs)
    assert tr.objective + res.objective == cs.item_count
    assert cs.is_transversal(tr.witness)


def test_brute_force_refuses_large_systems():
    with pytest.raises(ResourceRefusal):
        brute_force_oracle(ConstraintSystem(25, ()))


def test_packing_bound_examples():
    cs = ConstraintSystem(8, ())
    assert packing_upper_bound(cs, included=[0, 1], excluded=[2]) == 7
    cs = ConstraintSystem(8, ((3, 4, 5),))
    assert packing_upper_bound(cs, included=[0], excluded=[1]) == 1 + 6 - 1
    with pytest.raises(InvalidInputError):
        packing_upper_bound(cs, included=[0], excluded=[0])


def test_packing_bound_admissible_on_random_systems():
    rng = random.Random(12345)
    for _ in range(1000):
        m = rng.randint(1, 9)
        constraints = tuple(
            tuple(rng.sample(range(m), rng.randint(1, min(4, m)))) for _ in range(rng.randint(0, 8))
        )
        cs = ConstraintSystem(m, constraints)
        order = list(range(m))
        rng.shuffle(order)
        k_in, k_out = rng.randint(0, m), rng.randint(0, m)
        inc = frozenset(order[:k_in][: m // 2])
        exc = frozenset(x for x in order[k_in:][:k_out])
        best = python_max_avoiding(m, cs.constraints, inc, exc)
        assert packing_upper_bound(cs, inc, exc) >= best


def test_determinism_and_worker_independence():
    cs = build_daisy_constraints(7, K4)
    base = solve_max_avoiding(cs)
    again = solve_max_avoiding(cs)
    assert (base.objective, base.witness) == (again.objective, again.witness)
    split1 = solve_max_avoiding(cs, SolverConfig(split_depth=3, workers=1))
    split2 = solve_max_avoiding(cs, SolverConfig(split_depth=3, workers=2))
    assert split1.objective == split2.objective == base.objective == 16
    assert split1.witness == split2.witness


def test_relabel_invariance_of_objective():
    perm = [3, 0, 6, 1, 5, 2, 4]
    cs = build_daisy_constraints(7, D342)
    # relabelling the ground set permutes items; rebuild the system through the relabelled r-sets
    image = {}
    for i, s in enumerate(SetFamily.complete(7, 3).sets()):
        image[i] = colex_rank(sorted(perm[x] for x in s))
    moved = ConstraintSystem(cs.item_count, tuple(tuple(image[i] for i in c) for c in cs.constraints))
    assert moved.constraint_set() == cs.constraint_set()  # daisy systems are S_n-invariant
    shuffled = ConstraintSystem(cs.item_count, tuple(reversed(moved.constraints)))
    assert solve_max_avoiding(shuffled).objective == solve_max_avoiding(cs).objective == 28


def test_symmetry_pruning_keeps_objective():
    for n, pattern in [(6, K4), (7, K4), (7, D342)]:
        cs = build_daisy_constraints(n, pattern)
        plain = solve_max_avoiding(cs)
        sym = solve_max_avoiding(cs, SolverConfig(symmetry=True), relabel_generators(n, pattern.r))
        assert sym.objective == plain.objective
        assert cs.is_avoiding(sym.witness)


def test_symmetry_generators_must_preserve_system():
    cs = ConstraintSystem(3, ((0, 1),))
    with pytest.raises(InvalidInputError):
        solve_max_avoiding(cs, SolverConfig(symmetry=True), [[2, 1, 0]])


def test_node_limit_gives_lower_bound():
    cs = build_daisy_constraints(8, K4)
    res = solve_max_avoiding(cs, SolverConfig(node_limit=5))
    assert res.status == LOWER_BOUND_ONLY and not res.is_exact
    assert res.objective <= 21 and cs.is_avoiding(res.witness)


def test_node_limit_from_environment(monkeypatch):
    monkeypatch.setenv("DAISY_NODE_LIMIT", "3")
    assert SolverConfig().node_limit == 3
    monkeypatch.setenv("DAISY_NODE_LIMIT", "x")
    with pytest.raises(InvalidInputError):
        SolverConfig()
