"""Exact branch-and-bound for maximum constraint-avoiding subsets and minimum transversals.

A ``ConstraintSystem`` has items ``0..m-1`` and constraints (item sets).  A
subset ``S`` *avoids* the system when no constraint lies entirely inside ``S``;
``ex(n, F)`` is the largest avoiding subset of the system whose items are the
r-sets of ``[n]`` and whose constraints are the copies of ``F``.  The
complement of an avoiding set is a transversal (it meets every constraint), so
``max_avoiding + min_transversal = m``.

Search state is a pair of Python-int bitmasks ``(included, excluded)``.  Each
node runs unit propagation (a live constraint with one undecided item and the
rest included forces that item out), bounds the completion with a greedy
packing of live constraints whose undecided parts are pairwise disjoint, and
branches include-first on the undecided item of largest live degree.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .daisy import DaisyPattern, daisy_petal_ranks
from .errors import InvalidInputError, ResourceRefusal
from .family import binom

EXACT = "exact"
LOWER_BOUND_ONLY = "lower_bound_only"

BRUTE_FORCE_MAX_ITEMS = 24
DEFAULT_NODE_LIMIT = 10**9


def default_node_limit() -> int:
    env = os.environ.get("DAISY_NODE_LIMIT")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidInputError(f"DAISY_NODE_LIMIT must be an integer, got {env!r}") from None
    return DEFAULT_NODE_LIMIT


@dataclass(frozen=True)
class ConstraintSystem:
    item_count: int
    constraints: tuple[tuple[int, ...], ...]
    labels: Optional[tuple] = None

    def __post_init__(self):
        m = int(self.item_count)
        if m < 0:
            raise InvalidInputError("item_count must be non-negative")
        seen = {}
        for c in self.constraints:
            key = tuple(sorted(set(int(i) for i in c)))
            if not key:
                raise InvalidInputError("empty constraint")
            if key[0] < 0 or key[-1] >= m:
                raise InvalidInputError(f"constraint {key} has an item outside [0, {m})")
            seen.setdefault(key, None)
        object.__setattr__(self, "item_count", m)
        object.__setattr__(self, "constraints", tuple(seen))
        if self.labels is not None:
            if len(self.labels) != m:
                raise InvalidInputError("labels must have one entry per item")
            object.__setattr__(self, "labels", tuple(self.labels))

    def constraint_set(self) -> frozenset:
        return frozenset(self.constraints)

    def masks(self) -> list[int]:
        return [_mask(c) for c in self.constraints]

    def is_avoiding(self, items: Iterable[int]) -> bool:
        s = set(items)
        return not any(set(c) <= s for c in self.constraints)

    def is_transversal(self, items: Iterable[int]) -> bool:
        s = set(items)
        return all(s.intersection(c) for c in self.constraints)


@dataclass(frozen=True)
class SolverConfig:
    node_limit: int = field(default_factory=default_node_limit)
    workers: int = 1
    split_depth: int = 0
    symmetry: bool = False
    time_limit: Optional[float] = None


@dataclass(frozen=True)
class SearchResult:
    objective: int
    witness: tuple[int, ...]
    nodes_explored: int
    status: str
    wall_time: float

    @property
    def is_exact(self) -> bool:
        return self.status == EXACT


def _mask(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def build_daisy_constraints(n: int, pattern: DaisyPattern) -> ConstraintSystem:
    """Items are the r-sets of ``[n]`` by colex rank; one constraint per daisy instance."""
    if n < pattern.r:
        raise InvalidInputError(f"n={n} is smaller than r={pattern.r}")
    ranks = daisy_petal_ranks(n, pattern)
    return ConstraintSystem(binom(n, pattern.r), tuple(tuple(int(x) for x in row) for row in ranks))


# -- bound ----------------------------------------------------------------------

def _packing(unds: list[int]) -> int:
    used = 0
    count = 0
    for u in sorted(unds, key=int.bit_count):
        if not u & used:
            used |= u
            count += 1
    return count


def packing_upper_bound(cs: ConstraintSystem, included: Iterable[int] = (), excluded: Iterable[int] = ()) -> int:
    """Upper bound on the best avoiding set extending a partial assignment.

    Equals ``included + undecided`` minus the size of a greedy packing of live
    constraints (not yet hit by an excluded item) with pairwise disjoint
    undecided parts: each packed constraint forces a distinct further exclusion.
    Live constraints with no undecided item (an infeasible state) are ignored.
    """
    inc, exc = _mask(included), _mask(excluded)
    if inc & exc:
        raise InvalidInputError("an item is both included and excluded")
    unds = []
    for c in cs.masks():
        if c & exc:
            continue
        u = c & ~inc
        if u:
            unds.append(u)
    return cs.item_count - exc.bit_count() - _packing(unds)


# -- branch and bound -----------------------------------------------------------

class _LimitReached(Exception):
    pass


class _Search:
    def __init__(self, m: int, masks: list[int], node_limit: int, deadline: Optional[float]):
        self.m = m
        self.masks = masks
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0
        self.best_value = -1
        self.best_exc: Optional[int] = None

    def propagate(self, inc: int, exc: int, live: list[int]):
        masks = self.masks
        changed = True
        while changed:
            changed = False
            kept = []
            for ci in live:
                c = masks[ci]
                if c & exc:
                    continue
                u = c & ~inc
                if not u:
                    return None
                if not u & (u - 1):
                    exc |= u
                    changed = True
                    continue
                kept.append(ci)
            live = kept
        return inc, exc, live

    def run(self, inc: int, exc: int, live: list[int]) -> None:
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise _LimitReached
        if self.deadline is not None and self.nodes & 1023 == 0 and time.perf_counter() > self.deadline:
            raise _LimitReached
        state = self.propagate(inc, exc, live)
        if state is None:
            return
        inc, exc, live = state
        if not live:
            value = self.m - exc.bit_count()
            if value > self.best_value:
                self.best_value = value
                self.best_exc = exc
            return
        masks = self.masks
        unds = [masks[ci] & ~inc for ci in live]
        if self.m - exc.bit_count() - _packing(unds) <= self.best_value:
            return
        degree: dict[int, int] = {}
        for u in unds:
            while u:
                low = u & -u
                degree[low] = degree.get(low, 0) + 1
                u ^= low
        top = max(degree.values())
        pick = min(b for b, d in degree.items() if d == top)
        self.run(inc | pick, exc, live)
        self.run(inc, exc | pick, live)


def _greedy_exclusion(m: int, masks: list[int], exc: int = 0) -> int:
    """Exclude the item hitting most live constraints until none is live, then re-admit what fits."""
    live = [c for c in masks if not c & exc]
    while live:
        degree = [0] * m
        for c in live:
            for i in _bits(c):
                degree[i] += 1
        best = max(range(m), key=lambda i: (degree[i], -i))
        exc |= 1 << best
        live = [c for c in live if not c & exc]
    all_items = (1 << m) - 1
    for i in _bits(exc):
        trial = (all_items & ~exc) | (1 << i)
        if not any(c & trial == c for c in masks):
            exc &= ~(1 << i)
    return exc


def _reduce_masks(masks: list[int]) -> list[int]:
    """Drop constraints that contain another constraint; they are implied."""
    uniq = sorted(set(masks), key=lambda c: (c.bit_count(), c))
    kept: list[int] = []
    for c in uniq:
        if not any(k & c == k for k in kept):
            kept.append(c)
    return kept


def _orbit_representatives(m: int, generators: Sequence[Sequence[int]]) -> list[int]:
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for i, j in enumerate(g):
            a, b = find(i), find(int(j))
            if a != b:
                parent[max(a, b)] = min(a, b)
    return sorted({find(i) for i in range(m)})


def _check_generators(cs: ConstraintSystem, generators: Sequence[Sequence[int]]) -> None:
    cset = cs.constraint_set()
    m = cs.item_count
    for g in generators:
        if sorted(int(x) for x in g) != list(range(m)):
            raise InvalidInputError("symmetry generator is not a permutation of the items")
        image = {tuple(sorted(int(g[i]) for i in c)) for c in cset}
        if image != cset:
            raise InvalidInputError("symmetry generator does not preserve the constraint system")


def _solve_subtree(args):
    m, masks, inc, exc, start_value, node_limit, time_limit = args
    deadline = None if time_limit is None else time.perf_counter() + time_limit
    search = _Search(m, masks, node_limit, deadline)
    search.best_value = start_value
    hit_limit = False
    try:
        search.run(inc, exc, list(range(len(masks))))
    except _LimitReached:
        hit_limit = True
    return search.best_value, search.best_exc, search.nodes, hit_limit


def _frontier(search: _Search, roots: list[tuple[int, int]], depth: int) -> list[tuple[int, int]]:
    """Expand each root ``depth`` levels with the solver's branching rule (infeasible nodes dropped)."""
    frontier = roots
    all_live = list(range(len(search.masks)))
    for _ in range(depth):
        nxt = []
        for inc, exc in frontier:
            state = search.propagate(inc, exc, all_live)
            if state is None:
                continue
            inc, exc, live = state
            if not live:
                nxt.append((inc, exc))
                continue
            degree: dict[int, int] = {}
            for ci in live:
                u = search.masks[ci] & ~inc
                while u:
                    low = u & -u
                    degree[low] = degree.get(low, 0) + 1
                    u ^= low
            top = max(degree.values())
            pick = min(b for b, d in degree.items() if d == top)
            nxt += [(inc | pick, exc), (inc, exc | pick)]
        frontier = nxt
    return frontier


def solve_max_avoiding(
    cs: ConstraintSystem,
    cfg: Optional[SolverConfig] = None,
    generators: Optional[Sequence[Sequence[int]]] = None,
) -> SearchResult:
    """Largest item set containing no constraint entirely.

    With ``cfg.symmetry`` and item permutations in ``generators`` (automorphisms
    of the system), the root branches only on excluding one representative per
    orbit.  With ``cfg.split_depth > 0`` the tree is cut at that depth and the
    subtrees are solved independently (in ``cfg.workers`` processes), merged by
    best objective then lexicographically smallest witness; the result does not
    depend on the worker count.
    """
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    m = cs.item_count
    all_items = (1 << m) - 1
    masks = _reduce_masks(cs.masks())
    if not masks:
        return SearchResult(m, tuple(range(m)), 0, EXACT, time.perf_counter() - t0)

    greedy_exc = _greedy_exclusion(m, masks)
    candidates = [(m - greedy_exc.bit_count(), greedy_exc)]

    roots = [(0, 0)]
    if cfg.symmetry and generators:
        _check_generators(cs, generators)
        roots = [(0, 1 << o) for o in _orbit_representatives(m, generators)]
    helper = _Search(m, masks, cfg.node_limit, None)
    frontier = _frontier(helper, roots, max(cfg.split_depth, 0))

    time_limit = cfg.time_limit
    nodes = helper.nodes
    hit_limit = False
    if cfg.split_depth <= 0:
        # single sequential search: later subtrees prune against earlier incumbents
        start = candidates[0][0]
        search = _Search(m, masks, cfg.node_limit, None if time_limit is None else t0 + time_limit)
        search.best_value = start
        try:
            for inc, exc in frontier:
                search.run(inc, exc, list(range(len(masks))))
        except _LimitReached:
            hit_limit = True
        nodes += search.nodes
        if search.best_exc is not None:
            candidates.append((search.best_value, search.best_exc))
    else:
        jobs = [(m, masks, inc, exc, candidates[0][0], cfg.node_limit, time_limit) for inc, exc in frontier]
        if cfg.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(_solve_subtree, jobs))
        else:
            results = [_solve_subtree(j) for j in jobs]
        for value, exc, n_nodes, lim in results:
            nodes += n_nodes
            hit_limit |= lim
            if exc is not None:
                candidates.append((value, exc))

    best_value = max(v for v, _ in candidates)
    witness = min(tuple(_bits(all_items & ~exc)) for v, exc in candidates if v == best_value)
    for c in masks:
        if c & ~_mask(witness) == 0:
            raise AssertionError("solver produced a witness containing a constraint")
    return SearchResult(
        best_value,
        witness,
        nodes,
        LOWER_BOUND_ONLY if hit_limit else EXACT,
        time.perf_counter() - t0,
    )


def solve_min_transversal(
    cs: ConstraintSystem,
    cfg: Optional[SolverConfig] = None,
    generators: Optional[Sequence[Sequence[int]]] = None,
) -> SearchResult:
    """Smallest item set meeting every constraint (complement of a max avoiding set).

    When the search is cut short, ``objective`` is the size of the best
    transversal found, i.e. an upper bound on the minimum.
    """
    res = solve_max_avoiding(cs, cfg, generators)
    chosen = set(res.witness)
    witness = tuple(i for i in range(cs.item_count) if i not in chosen)
    return SearchResult(cs.item_count - res.objective, witness, res.nodes_explored, res.status, res.wall_time)


def brute_force_oracle(cs: ConstraintSystem) -> SearchResult:
    """Exact max avoiding set by enumerating all ``2^m`` subsets (test oracle, m <= 24)."""
    m = cs.item_count
    if m > BRUTE_FORCE_MAX_ITEMS:
        raise ResourceRefusal(f"brute force limited to {BRUTE_FORCE_MAX_ITEMS} items, got {m}")
    t0 = time.perf_counter()
    masks = np.array(cs.masks(), dtype=np.uint32)
    best_value, best_set = -1, 0
    chunk = 1 << 20
    for start in range(0, 1 << m, chunk):
        subsets = np.arange(start, min(start + chunk, 1 << m), dtype=np.uint32)
        ok = np.ones(subsets.shape, dtype=bool)
        for c in masks:
            ok &= (subsets & c) != c
        if not ok.any():
            continue
        sizes = np.where(ok, np.bitwise_count(subsets).astype(np.int16), -1)
        j = int(np.argmax(sizes))
        if sizes[j] > best_value:
            best_value, best_set = int(sizes[j]), int(subsets[j])
    return SearchResult(best_value, tuple(_bits(best_set)), 1 << m, EXACT, time.perf_counter() - t0)


def relabel_generators(n: int, r: int) -> list[list[int]]:
    """Item permutations of the r-sets of ``[n]`` induced by the transposition (0 1) and the n-cycle.

    Together they generate the full relabelling action of S_n; pass them as
    ``generators`` with ``SolverConfig(symmetry=True)`` for daisy systems.
    """
    from .family import colex_combinations, ranks_of

    if n < 2:
        return []
    rows = colex_combinations(n, r)
    swap = np.arange(n)
    swap[[0, 1]] = [1, 0]
    cycle = (np.arange(n) + 1) % n
    return [ranks_of(np.sort(g[rows], axis=1)).tolist() for g in (swap, cycle)]
