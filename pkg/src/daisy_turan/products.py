"""Star products of uniform hypergraphs and forbidden-copy constraint generation.

``F * G`` lives on the disjoint union of the two ground sets (G shifted past
F) and its edges are the unions ``A | B`` with ``A`` in F and ``B`` in G.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import perm
from typing import Iterable, Sequence

import numpy as np

from .daisy import DaisyPattern, instantiate
from .errors import InvalidInputError, ResourceRefusal
from .family import SetFamily, binom, colex_rank
from .search import ConstraintSystem

MAX_PATTERN_POINTS = 8
MAX_INJECTIONS = 2 * 10**6


@dataclass(frozen=True)
class UniformHypergraph:
    edges: SetFamily

    @property
    def m(self) -> int:
        return self.edges.n

    @property
    def u(self) -> int:
        return self.edges.r

    @classmethod
    def from_edges(cls, m: int, u: int, edges: Iterable[Sequence[int]]) -> UniformHypergraph:
        return cls(SetFamily.from_sets(m, u, edges))

    @classmethod
    def complete(cls, m: int, u: int) -> UniformHypergraph:
        """``[m]^(u)``, all u-sets of an m-set."""
        return cls(SetFamily.complete(m, u))

    def edge_list(self) -> list[tuple[int, ...]]:
        return list(self.edges.sets())

    def __len__(self) -> int:
        return self.edges.size()


def daisy_hypergraph(pattern: DaisyPattern) -> UniformHypergraph:
    """One abstract copy of D_r(s,t): stem ``0..r-t-1``, free set the next ``s`` points."""
    stem = range(pattern.stem_size)
    free = range(pattern.stem_size, pattern.min_ground)
    inst = instantiate(pattern, stem, free)
    return UniformHypergraph.from_edges(pattern.min_ground, pattern.r, inst.petals)


def star_product(F: UniformHypergraph, G: UniformHypergraph) -> UniformHypergraph:
    shift = F.m
    edges = [a + tuple(x + shift for x in b) for a in F.edge_list() for b in G.edge_list()]
    return UniformHypergraph.from_edges(F.m + G.m, F.u + G.u, edges)


def power(F: UniformHypergraph, d: int) -> UniformHypergraph:
    """d-fold left-associated star product ``((F * F) * F) ...``."""
    if d < 1:
        raise InvalidInputError(f"power needs d >= 1, got {d}")
    out = F
    for _ in range(d - 1):
        out = star_product(out, F)
    return out


def enumerate_copies(H: UniformHypergraph, n: int) -> ConstraintSystem:
    """Constraint system whose avoiding sets are the H-free u-uniform families on ``[n]``.

    Items are the u-sets of ``[n]`` by colex rank.  Each copy of H (the edge
    image of an injection of its vertices into ``[n]``) gives one constraint;
    injections with the same image count once.
    """
    if H.m > MAX_PATTERN_POINTS:
        raise ResourceRefusal(f"patterns are limited to {MAX_PATTERN_POINTS} points, got {H.m}")
    edges = H.edge_list()
    items = binom(n, H.u)
    if n < H.m or not edges:
        return ConstraintSystem(items, ())
    # vertices touched by edges, by decreasing degree; isolated vertices only need room
    degree = {v: sum(v in e for e in edges) for v in range(H.m)}
    order = sorted((v for v in range(H.m) if degree[v]), key=lambda v: (-degree[v], v))
    isolated = H.m - len(order)
    estimate = perm(n, len(order))
    if estimate > MAX_INJECTIONS:
        raise ResourceRefusal(f"about {estimate} injections needed, limit {MAX_INJECTIONS}")
    if n - len(order) < isolated:
        return ConstraintSystem(items, ())

    image = [-1] * H.m
    used = [False] * n
    copies: set[tuple[int, ...]] = set()

    def extend(depth: int) -> None:
        if depth == len(order):
            ranks = sorted(colex_rank(sorted(image[v] for v in e)) for e in edges)
            copies.add(tuple(ranks))
            return
        v = order[depth]
        for x in range(n):
            if not used[x]:
                used[x] = True
                image[v] = x
                extend(depth + 1)
                used[x] = False
        image[v] = -1

    extend(0)
    return ConstraintSystem(items, tuple(sorted(copies)))


def hypergraph_id(H: UniformHypergraph) -> str:
    """Short stable identifier for a forbidden hypergraph (used as a table problem id)."""
    digest = hashlib.sha1(f"{H.m},{H.u}:".encode() + np.packbits(H.edges.members).tobytes()).hexdigest()
    return f"H{H.m}_{H.u}_{len(H)}_{digest[:10]}"
