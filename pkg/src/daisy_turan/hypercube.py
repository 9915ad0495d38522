"""Vertex-Turán machinery for the hypercube Q_n.

A vertex of Q_n is the characteristic integer of a subset of ``range(n)``
(bit ``i`` set iff element ``i`` is present).  A subcube is a pair of disjoint
masks ``(fixed_ones, free)``; its vertices are ``fixed_ones | s`` for every
submask ``s`` of ``free``.  A *middle* 2d-cube of Q_n (n even) has
``|fixed_ones| = n/2 - d`` and ``|free| = 2d``, so it spans layers
``n/2 - d .. n/2 + d``; its middle-layer slice is exactly the petal set of the
daisy D_{n/2}(2d, d) on the same ``(P, Q)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .daisy import DaisyPattern, daisy_petal_ranks, find_daisy
from .errors import InfeasibleError, InvalidInputError, ResourceRefusal
from .family import SetFamily, binom, colex_combinations, ranks_of
from .records import Bound, DensityRecord
from .search import (
    ConstraintSystem,
    SearchResult,
    SolverConfig,
    build_daisy_constraints,
    solve_max_avoiding,
    solve_min_transversal,
)

MAX_CUBE_N = 20
UNRESTRICTED_MAX_N = 6
MIDDLE_LAYER_MAX_N = 8


def _bit_weights(elements: np.ndarray) -> np.ndarray:
    return np.left_shift(np.int64(1), np.asarray(elements, dtype=np.int64))


def _submask_table(elements: np.ndarray) -> np.ndarray:
    """All submasks of the set ``elements`` (rows of an (k, d) array), shape (k, 2^d)."""
    elements = np.atleast_2d(np.asarray(elements, dtype=np.int64))
    d = elements.shape[1]
    sel = (np.arange(1 << d)[:, None] >> np.arange(d)[None, :]) & 1  # (2^d, d)
    return sel @ _bit_weights(elements).T if d else np.zeros((1, elements.shape[0]), dtype=np.int64)


def popcounts(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


class CubeVertexSet:
    """A subset of the vertices of Q_n as a read-only bitmap of length ``2^n``."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: Optional[np.ndarray] = None):
        if not 0 <= n <= MAX_CUBE_N:
            raise InvalidInputError(f"cube dimension must lie in [0, {MAX_CUBE_N}], got {n}")
        if bits is None:
            arr = np.zeros(1 << n, dtype=bool)
        else:
            arr = np.array(bits, dtype=bool)
            if arr.shape != (1 << n,):
                raise InvalidInputError(f"vertex bitmap must have length 2^{n}")
        arr.setflags(write=False)
        self.n = n
        self.bits = arr

    @classmethod
    def from_vertices(cls, n: int, vertices: Iterable[int]) -> CubeVertexSet:
        arr = np.zeros(1 << n, dtype=bool)
        for v in vertices:
            if not 0 <= v < 1 << n:
                raise InvalidInputError(f"vertex {v} outside Q_{n}")
            arr[v] = True
        return cls(n, arr)

    @classmethod
    def full(cls, n: int) -> CubeVertexSet:
        return cls(n, np.ones(1 << n, dtype=bool))

    @classmethod
    def from_layer_family(cls, f: SetFamily) -> CubeVertexSet:
        """Embed an r-uniform family as a vertex set inside layer r of Q_n."""
        rows = f.as_array()
        vs = np.zeros(1 << f.n, dtype=bool)
        if rows.shape[0]:
            vs[_bit_weights(rows).sum(axis=1)] = True
        return cls(f.n, vs)

    def size(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __len__(self) -> int:
        return self.size()

    def vertices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < 1 << self.n and bool(self.bits[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CubeVertexSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def layer_family(self, r: int) -> SetFamily:
        """Vertices of size ``r`` as an r-uniform SetFamily."""
        layer = colex_combinations(self.n, r)
        return SetFamily(self.n, r, self.bits[_bit_weights(layer).sum(axis=1)])

    def __repr__(self) -> str:
        return f"CubeVertexSet(n={self.n}, size={self.size()})"


def vertex_to_bitstring(v: int, n: int) -> str:
    return "".join("1" if v >> i & 1 else "0" for i in range(n))


def format_vertex_set(vs: CubeVertexSet) -> str:
    lines = [str(vs.n)] + [vertex_to_bitstring(int(v), vs.n) for v in vs.vertices()]
    return "\n".join(lines) + "\n"


def parse_vertex_set(text: str) -> CubeVertexSet:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise InvalidInputError("empty vertex-set file")
    try:
        n = int(rows[0])
    except ValueError:
        raise InvalidInputError("vertex-set file must start with n") from None
    verts = []
    for row in rows[1:]:
        if len(row) != n or set(row) - {"0", "1"}:
            raise InvalidInputError(f"bad vertex line {row!r} for n={n}")
        verts.append(sum(1 << i for i, ch in enumerate(row) if ch == "1"))
    if len(set(verts)) != len(verts):
        raise InvalidInputError("duplicate vertex in vertex-set file")
    return CubeVertexSet.from_vertices(n, verts)


def read_vertex_set(path: str | Path) -> CubeVertexSet:
    return parse_vertex_set(Path(path).read_text())


def write_vertex_set(vs: CubeVertexSet, path: str | Path) -> None:
    Path(path).write_text(format_vertex_set(vs))


@dataclass(frozen=True)
class Subcube:
    n: int
    fixed_ones: int
    free: int

    def __post_init__(self):
        if self.fixed_ones & self.free:
            raise InvalidInputError("fixed part and free part of a subcube intersect")
        if (self.fixed_ones | self.free) >> self.n:
            raise InvalidInputError(f"subcube masks exceed Q_{self.n}")

    @property
    def dimension(self) -> int:
        return self.free.bit_count()

    def free_elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.free >> i & 1)

    def fixed_elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.fixed_ones >> i & 1)

    def vertices(self) -> np.ndarray:
        return self.fixed_ones + _submask_table(np.array([self.free_elements()], dtype=np.int64))[:, 0]

    def __contains__(self, v: int) -> bool:
        return v & ~(self.fixed_ones | self.free) == 0 and v & self.fixed_ones == self.fixed_ones


# -- subcube enumeration ----------------------------------------------------------

def _subcube_arrays(n: int, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(fixed_ones, free, vertices)`` for every d-subcube of Q_n.

    Order: free set in colex order, then fixed part by increasing integer value.
    ``vertices`` has shape ``(count, 2^d)``.
    """
    if not 0 <= d <= n:
        raise InvalidInputError(f"need 0 <= d <= n, got d={d}, n={n}")
    frees = colex_combinations(n, d)
    fixed_list, free_list, vert_list = [], [], []
    for Q in frees:
        rest = np.setdiff1d(np.arange(n), Q)
        fixed = np.sort(_submask_table(rest[None, :])[:, 0])
        sub = _submask_table(Q[None, :])[:, 0]
        fixed_list.append(fixed)
        free_list.append(np.full(fixed.shape, _bit_weights(Q).sum()))
        vert_list.append(fixed[:, None] + sub[None, :])
    return np.concatenate(fixed_list), np.concatenate(free_list), np.concatenate(vert_list)


def _middle_subcube_arrays(n: int, dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    _check_middle(n, dim)
    half, d = n // 2, dim // 2
    sub_idx = colex_combinations(n - (half - d), dim)
    fixed_list, free_list, vert_list = [], [], []
    for P in colex_combinations(n, half - d):
        rest = np.setdiff1d(np.arange(n), P)
        Qs = rest[sub_idx]  # (k, dim)
        p_mask = _bit_weights(P).sum()
        subs = _submask_table(Qs)  # (2^dim, k)
        fixed_list.append(np.full(Qs.shape[0], p_mask))
        free_list.append(_bit_weights(Qs).sum(axis=1))
        vert_list.append(p_mask + subs.T)
    if not fixed_list:
        return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros((0, 1 << dim), np.int64)
    return np.concatenate(fixed_list), np.concatenate(free_list), np.concatenate(vert_list)


def _check_middle(n: int, dim: int) -> None:
    if n % 2 or dim % 2:
        raise InvalidInputError(f"middle cubes need n and dim even, got n={n}, dim={dim}")
    if dim > n:
        raise InvalidInputError(f"dim={dim} exceeds n={n}")


def _to_subcubes(n: int, arrays) -> list[Subcube]:
    fixed, free, _ = arrays
    return [Subcube(n, int(p), int(q)) for p, q in zip(fixed, free)]


def enumerate_subcubes(n: int, d: int) -> list[Subcube]:
    """All ``binom(n, d) * 2^(n-d)`` d-subcubes of Q_n."""
    return _to_subcubes(n, _subcube_arrays(n, d))


def enumerate_middle_subcubes(n: int, dim: int) -> list[Subcube]:
    """Middle dim-cubes, ordered like the instances of D_{n/2}(dim, dim/2)."""
    return _to_subcubes(n, _middle_subcube_arrays(n, dim))


def _vertex_matrix(cubes: Sequence[Subcube]) -> np.ndarray:
    if not cubes:
        return np.zeros((0, 1), dtype=np.int64)
    dims = {c.dimension for c in cubes}
    if len(dims) == 1:
        return np.stack([c.vertices() for c in cubes])
    width = 1 << max(dims)
    out = np.empty((len(cubes), width), dtype=np.int64)
    for i, c in enumerate(cubes):
        v = c.vertices()
        out[i, : v.size] = v
        out[i, v.size:] = v[0]
    return out


def first_missed_subcube(vs: CubeVertexSet, cubes: Sequence[Subcube]) -> Optional[Subcube]:
    """First listed subcube containing no vertex of ``vs``, or None."""
    if any(c.n != vs.n for c in cubes):
        raise InvalidInputError("subcube and vertex set live in different cubes")
    if not cubes:
        return None
    hit = vs.bits[_vertex_matrix(cubes)].any(axis=1)
    missed = np.flatnonzero(~hit)
    return cubes[int(missed[0])] if missed.size else None


def is_transversal(vs: CubeVertexSet, cubes: Sequence[Subcube]) -> bool:
    return first_missed_subcube(vs, cubes) is None


# -- transversal minimisation ---------------------------------------------------

def _permutation_generators(n: int) -> list[np.ndarray]:
    """Coordinate transposition (0 1) and the n-cycle, acting on vertex integers."""
    v = np.arange(1 << n)
    gens = []
    if n >= 2:
        swap = v & ~np.int64(3) | (v & 1) << 1 | (v >> 1) & 1
        gens.append(swap)
        cycle = ((v << 1) | (v >> (n - 1))) & ((1 << n) - 1)
        gens.append(cycle)
    return gens


def cube_constraint_system(
    n: int, d: int, middle_only: bool = False, restrict_to_middle_layer: bool = False
) -> tuple[ConstraintSystem, np.ndarray]:
    """Constraint system whose transversals meet the chosen subcubes.

    Returns the system and ``item_vertices`` mapping item index to vertex
    integer.  Restricted items are the middle-layer vertices in colex order.
    """
    if restrict_to_middle_layer and not middle_only:
        raise InvalidInputError("middle-layer restriction requires middle_only")
    if restrict_to_middle_layer:
        if n > MIDDLE_LAYER_MAX_N:
            raise ResourceRefusal(f"middle-layer instances are capped at n <= {MIDDLE_LAYER_MAX_N} (got n={n}, {binom(n, n // 2)} items)")
    elif n > UNRESTRICTED_MAX_N:
        raise ResourceRefusal(f"unrestricted instances are capped at n <= {UNRESTRICTED_MAX_N} (got n={n}, {1 << n} items)")
    arrays = _middle_subcube_arrays(n, d) if middle_only else _subcube_arrays(n, d)
    verts = arrays[2]
    if restrict_to_middle_layer:
        layer = colex_combinations(n, n // 2)
        item_vertices = _bit_weights(layer).sum(axis=1)
        index = np.full(1 << n, -1, dtype=np.int64)
        index[item_vertices] = np.arange(item_vertices.size)
        mapped = index[verts]
        constraints = []
        for row in mapped:
            items = row[row >= 0]
            if items.size == 0:
                raise InfeasibleError("a subcube has no allowed vertex")
            constraints.append(tuple(int(x) for x in items))
    else:
        item_vertices = np.arange(1 << n)
        constraints = [tuple(int(x) for x in row) for row in verts]
    labels = tuple(int(v) for v in item_vertices)
    return ConstraintSystem(len(labels), tuple(constraints), labels), item_vertices


def cube_symmetry_generators(
    n: int, item_vertices: np.ndarray, middle_only: bool
) -> list[list[int]]:
    """Item permutations induced by coordinate permutations (plus a coordinate flip when unrestricted)."""
    gens = _permutation_generators(n)
    if not middle_only and n >= 1:
        gens.append(np.arange(1 << n) ^ 1)
    index = np.full(1 << n, -1, dtype=np.int64)
    index[item_vertices] = np.arange(item_vertices.size)
    return [index[g[item_vertices]].tolist() for g in gens]


def min_subcube_transversal(
    n: int,
    d: int,
    middle_only: bool = False,
    restrict_to_middle_layer: bool = False,
    cfg: Optional[SolverConfig] = None,
) -> SearchResult:
    """Exact minimum number of vertices meeting every (middle) d-subcube of Q_n.

    The witness is reported as vertex integers.
    """
    cs, item_vertices = cube_constraint_system(n, d, middle_only, restrict_to_middle_layer)
    gens = None
    if cfg is not None and cfg.symmetry:
        gens = cube_symmetry_generators(n, item_vertices, middle_only)
    res = solve_min_transversal(cs, cfg, gens)
    witness = tuple(sorted(int(item_vertices[i]) for i in res.witness))
    return SearchResult(res.objective, witness, res.nodes_explored, res.status, res.wall_time)


# -- links and the daisy correspondence ------------------------------------------

def link(A: SetFamily, R: Iterable[int]) -> SetFamily:
    """``{X - R : X in A, R <= X}`` on ``range(n) - R`` relabelled in order.

    ``A`` must be a middle-layer family (``2 * A.r == A.n``); the result is
    ``(A.r - |R|)``-uniform on ``n - |R|`` points.
    """
    R = sorted(set(int(x) for x in R))
    if 2 * A.r != A.n:
        raise InvalidInputError(f"link expects a middle-layer family, got n={A.n}, r={A.r}")
    if len(R) > A.r or (R and (R[0] < 0 or R[-1] >= A.n)):
        raise InvalidInputError(f"R={R} does not fit a {A.r}-uniform family on {A.n} points")
    rest = np.setdiff1d(np.arange(A.n), R)
    newlabel = np.full(A.n, -1, dtype=np.int64)
    newlabel[rest] = np.arange(rest.size)
    rows = A.as_array()
    keep = np.isin(rows, R).sum(axis=1) == len(R) if rows.size else np.zeros(0, dtype=bool)
    out = SetFamily(A.n - len(R), A.r - len(R))
    if not keep.any():
        return out
    sub = rows[keep]
    reduced = newlabel[sub[~np.isin(sub, R)].reshape(sub.shape[0], A.r - len(R))]
    bits = np.zeros(out.members.shape, dtype=bool)
    bits[ranks_of(reduced)] = True
    return SetFamily(out.n, out.r, bits)


@dataclass(frozen=True)
class CorrespondenceReport:
    n: int
    dim: int
    cube_count: int
    instance_count: int
    slices_match: bool
    families_checked: int
    exhaustive: bool
    equivalence_holds: bool
    min_transversal: int
    ex_value: int
    layer_size: int

    @property
    def identity_holds(self) -> bool:
        return self.min_transversal + self.ex_value == self.layer_size

    @property
    def ok(self) -> bool:
        return self.slices_match and self.equivalence_holds and self.identity_holds


def transversal_daisy_correspondence(
    n: int,
    dim: int = 4,
    samples: int = 10_000,
    seed: int = 0,
    cfg: Optional[SolverConfig] = None,
) -> CorrespondenceReport:
    """Check that middle-layer transversals of middle dim-cubes are complements of D_{n/2}(dim, dim/2)-free families.

    Three checks: each middle cube's middle-layer slice equals the petal set of
    the daisy on the same (P, Q); for sampled (exhaustive when the layer has at
    most 16 points) middle-layer families A, "A meets every middle cube" agrees
    with "layer - A has no daisy"; and the two exact optima sum to the layer size.
    """
    _check_middle(n, dim)
    if n > MIDDLE_LAYER_MAX_N:
        raise ResourceRefusal(f"correspondence check capped at n <= {MIDDLE_LAYER_MAX_N}")
    half = n // 2
    pattern = DaisyPattern(half, dim, dim // 2)
    _, _, cube_verts = _middle_subcube_arrays(n, dim)
    petals = daisy_petal_ranks(n, pattern)

    layer = colex_combinations(n, half)
    layer_masks = _bit_weights(layer).sum(axis=1)
    rank_of_vertex = np.full(1 << n, -1, dtype=np.int64)
    rank_of_vertex[layer_masks] = np.arange(layer_masks.size)
    in_layer = popcounts(n)[cube_verts] == half
    slices = [set(rank_of_vertex[row[keep]].tolist()) for row, keep in zip(cube_verts, in_layer)]
    slices_match = len(slices) == petals.shape[0] and all(
        s == set(p.tolist()) for s, p in zip(slices, petals)
    )

    m = layer_masks.size
    if m <= 16:
        codes = np.arange(1 << m, dtype=np.int64)
        fams = ((codes[:, None] >> np.arange(m)) & 1).astype(bool)
        exhaustive = True
    else:
        fams = np.random.default_rng(seed).random((samples, m)) < 0.5
        exhaustive = False
    # cube side: vertex bitmaps of Q_n, tested against full cube vertex lists
    vs = np.zeros((fams.shape[0], 1 << n), dtype=bool)
    vs[:, layer_masks] = fams
    meets_all = vs[:, cube_verts].any(axis=2).all(axis=1)
    # daisy side: colex-indexed complement family, tested against petal ranks
    comp = ~fams
    has_daisy = comp[:, petals].all(axis=2).any(axis=1)
    equivalence = bool(np.array_equal(meets_all, ~has_daisy))
    # spot-check the public single-family routes on a few samples
    cubes = enumerate_middle_subcubes(n, dim)
    for i in range(min(16, fams.shape[0])):
        free = find_daisy(SetFamily(n, half, comp[i]), pattern) is None
        equivalence &= is_transversal(CubeVertexSet(n, vs[i]), cubes) == free

    mt = min_subcube_transversal(n, dim, middle_only=True, restrict_to_middle_layer=True, cfg=cfg)
    ex = solve_max_avoiding(build_daisy_constraints(n, pattern), cfg)
    return CorrespondenceReport(
        n=n,
        dim=dim,
        cube_count=cube_verts.shape[0],
        instance_count=petals.shape[0],
        slices_match=slices_match,
        families_checked=fams.shape[0],
        exhaustive=exhaustive,
        equivalence_holds=bool(equivalence),
        min_transversal=mt.objective,
        ex_value=ex.objective,
        layer_size=m,
    )


# -- Johnson-Talbot and t_d evidence ---------------------------------------------

def max_points_in_some_dcube(vs: CubeVertexSet, d: int) -> tuple[int, Subcube]:
    """Largest ``|vs ∩ C|`` over d-subcubes ``C``; ties go to the first in enumeration order."""
    fixed, free, verts = _subcube_arrays(vs.n, d)
    counts = vs.bits[verts].sum(axis=1)
    j = int(np.argmax(counts))
    return int(counts[j]), Subcube(vs.n, int(fixed[j]), int(free[j]))


def layered_transversal(n: int, d: int, offset: int) -> CubeVertexSet:
    """Every (d+1)-st layer: all subsets whose size is ``offset`` mod ``d + 1``."""
    if not 0 <= offset <= d:
        raise InvalidInputError(f"offset must lie in [0, {d}], got {offset}")
    return CubeVertexSet(n, popcounts(n) % (d + 1) == offset)


def layered_density(n: int, d: int, offset: int) -> Fraction:
    count = sum(binom(n, k) for k in range(offset, n + 1, d + 1))
    return Fraction(count, 1 << n)


def td_bounds(d: int, n: int) -> list[Bound]:
    """Finite bounds on the minimum density of a transversal of all d-subcubes of Q_n.

    Restricting a transversal of Q_{n+1} to its facets shows the minimum
    density is nondecreasing in n, so every finite value lies below the limit
    t_d and above any smaller cube's value.
    """
    bounds = [Bound("lower_one_direction", "lower", Fraction(1, 1 << d))]
    if d >= 2 and n >= d + 2:
        # Q_{d+2} needs at least ceil(log2 d) points
        bounds.append(Bound("lower_small_cube_averaging", "lower", Fraction(ceil(log2(d)), 1 << (d + 2))))
    known = {1: Fraction(1, 2), 2: Fraction(1, 3)}
    if d in known:
        bounds.append(Bound("upper_known_limit", "upper", known[d]))
    bounds.append(Bound("upper_layered", "upper", min(layered_density(n, d, o) for o in range(d + 1))))
    bounds.append(Bound("upper_layers_limit", "upper", Fraction(1, d + 1)))
    return bounds


def td_evidence_table(
    d: int, n_range: Iterable[int], cfg: Optional[SolverConfig] = None, small_cube_row: bool = True
) -> list[DensityRecord]:
    """Exact minimum transversal densities of all d-subcubes of Q_n, one row per n.

    Rows past the desk bound are kept as skipped.  For ``d >= 2`` an extra row
    gives the exact minimum for Q_{d+2} with the bound ``ceil(log2 d)``.
    """
    problem = f"t_{d}"
    rows = []
    for n in n_range:
        if n < d:
            continue
        total = 1 << n
        try:
            res = min_subcube_transversal(n, d, cfg=cfg)
        except ResourceRefusal as exc:
            rows.append(DensityRecord(problem, n, None, False, total, tuple(td_bounds(d, n)), sense="min", note=str(exc)))
            continue
        rows.append(DensityRecord(problem, n, res.objective, res.is_exact, total, tuple(td_bounds(d, n)), sense="min"))
    if small_cube_row and d >= 2:
        n = d + 2
        bound = Bound("lower_small_cube_points", "lower", Fraction(ceil(log2(d))), unit="count")
        try:
            res = min_subcube_transversal(n, d, cfg=cfg)
            rows.append(DensityRecord(f"small_cube_d{d}", n, res.objective, res.is_exact, 1 << n, (bound,), sense="min"))
        except ResourceRefusal as exc:
            rows.append(DensityRecord(f"small_cube_d{d}", n, None, False, 1 << n, (bound,), sense="min", note=str(exc)))
    return rows
