"""Daisy patterns D_r(s,t): instance enumeration and daisy-freeness checks.

An instance is a stem ``P`` of size ``r - t`` and a disjoint free set ``Q`` of
size ``s``; its petals are the ``binom(s, t)`` r-sets ``P | T`` with ``T`` a
t-subset of ``Q``.  Instances are enumerated with ``P`` in colex order and, for
each stem, ``Q`` in colex order over the remaining elements.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InvalidInputError
from .family import SetFamily, binom, check_rset, colex_combinations, colex_rank, ranks_of


@dataclass(frozen=True)
class DaisyPattern:
    r: int
    s: int
    t: int

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise InvalidInputError(f"r and s must be positive, got {self}")
        if not 1 <= self.t <= min(self.s, self.r):
            raise InvalidInputError(f"need 1 <= t <= min(s, r), got {self}")

    @property
    def stem_size(self) -> int:
        return self.r - self.t

    @property
    def petal_count(self) -> int:
        return binom(self.s, self.t)

    @property
    def min_ground(self) -> int:
        return self.r - self.t + self.s

    @classmethod
    def plain(cls, r: int) -> DaisyPattern:
        """The plain r-daisy, (s, t) = (4, 2)."""
        return cls(r, 4, 2)

    @classmethod
    def parse(cls, text: str) -> DaisyPattern:
        try:
            r, s, t = (int(x) for x in text.split(","))
        except ValueError:
            raise InvalidInputError(f"pattern must look like 'r,s,t', got {text!r}") from None
        return cls(r, s, t)

    def label(self) -> str:
        return f"D_{self.r}({self.s},{self.t})"


@dataclass(frozen=True)
class DaisyInstance:
    P: tuple[int, ...]
    Q: tuple[int, ...]
    petals: tuple[tuple[int, ...], ...]

    def petal_ranks(self) -> tuple[int, ...]:
        return tuple(colex_rank(p) for p in self.petals)


def instantiate(pattern: DaisyPattern, P: Sequence[int], Q: Sequence[int]) -> DaisyInstance:
    P = check_rset(sorted(P), r=pattern.stem_size)
    Q = check_rset(sorted(Q), r=pattern.s)
    if set(P) & set(Q):
        raise InvalidInputError(f"stem {P} and free set {Q} intersect")
    petals = []
    for T in colex_combinations(pattern.s, pattern.t):
        petals.append(tuple(sorted(P + tuple(Q[i] for i in T))))
    return DaisyInstance(P, Q, tuple(petals))


def iter_stem_blocks(n: int, pattern: DaisyPattern) -> Iterator[tuple[tuple[int, ...], np.ndarray, np.ndarray]]:
    """Yield ``(P, Qs, petal_ranks)`` per stem in colex order.

    ``Qs`` has shape ``(k, s)`` (free sets in colex order) and ``petal_ranks``
    shape ``(k, binom(s, t))``.
    """
    if n < pattern.min_ground:
        return
    tsub = colex_combinations(pattern.s, pattern.t)
    qidx = colex_combinations(n - pattern.stem_size, pattern.s)
    for P in colex_combinations(n, pattern.stem_size):
        rest = np.setdiff1d(np.arange(n), P)
        Qs = rest[qidx]
        chosen = Qs[:, tsub]  # (k, petals, t)
        stem = np.broadcast_to(P, chosen.shape[:2] + (len(P),))
        rows = np.sort(np.concatenate([stem, chosen], axis=2), axis=2)
        ranks = ranks_of(rows.reshape(-1, pattern.r)).reshape(chosen.shape[:2])
        yield tuple(int(x) for x in P), Qs, ranks


def instance_count(n: int, pattern: DaisyPattern) -> int:
    if n < pattern.min_ground:
        return 0
    return binom(n, pattern.stem_size) * binom(n - pattern.stem_size, pattern.s)


def enumerate_daisies(n: int, pattern: DaisyPattern) -> list[DaisyInstance]:
    out = []
    for P, Qs, _ in iter_stem_blocks(n, pattern):
        for Q in Qs:
            out.append(instantiate(pattern, P, Q))
    return out


def daisy_petal_ranks(n: int, pattern: DaisyPattern) -> np.ndarray:
    """Petal ranks of every instance, shape ``(instance_count, binom(s, t))``."""
    blocks = [ranks for _, _, ranks in iter_stem_blocks(n, pattern)]
    if not blocks:
        return np.zeros((0, pattern.petal_count), dtype=np.int64)
    return np.concatenate(blocks)


def _check_uniformity(f: SetFamily, pattern: DaisyPattern) -> None:
    if f.r != pattern.r:
        raise InvalidInputError(f"family is {f.r}-uniform but pattern {pattern.label()} is {pattern.r}-uniform")


def find_daisy(f: SetFamily, pattern: DaisyPattern) -> Optional[DaisyInstance]:
    """First instance (in enumeration order) whose petals all lie in ``f``."""
    _check_uniformity(f, pattern)
    for P, Qs, ranks in iter_stem_blocks(f.n, pattern):
        hit = np.flatnonzero(f.members[ranks].all(axis=1))
        if hit.size:
            return instantiate(pattern, P, Qs[hit[0]])
    return None


def is_daisy_free(f: SetFamily, pattern: DaisyPattern) -> bool:
    return find_daisy(f, pattern) is None


def daisy_count(f: SetFamily, pattern: DaisyPattern) -> int:
    _check_uniformity(f, pattern)
    return sum(int(f.members[ranks].all(axis=1).sum()) for _, _, ranks in iter_stem_blocks(f.n, pattern))


@dataclass(frozen=True)
class ContainmentWitness:
    n: int
    small: DaisyInstance
    wider: Optional[DaisyInstance]       # instance of D_r(s+1, t)
    wider_deeper: Optional[DaisyInstance]  # instance of D_r(s+1, t+1)


def _superset_instance(n: int, pattern: DaisyPattern, petals: set) -> Optional[DaisyInstance]:
    target = np.array(sorted(colex_rank(p) for p in petals))
    for P, Qs, ranks in iter_stem_blocks(n, pattern):
        ok = np.isin(target, ranks.ravel())  # cheap stem-level filter
        if not ok.all():
            continue
        for Q, row in zip(Qs, ranks):
            if np.isin(target, row).all():
                return instantiate(pattern, P, Q)
    return None


def containment_check(pattern: DaisyPattern, n: Optional[int] = None) -> ContainmentWitness:
    """Find instances witnessing D_r(s,t) inside D_r(s+1,t) and D_r(s+1,t+1).

    The first instance of ``pattern`` on ``[n]`` is fixed and the larger
    patterns are searched for an instance whose petal set contains its petals.
    A component is ``None`` when the larger pattern is undefined (t = r) or no
    witness exists on ``[n]``.
    """
    if n is None:
        n = pattern.min_ground + 1
    if n < pattern.min_ground:
        raise InvalidInputError(f"n={n} too small for {pattern.label()}")
    small = enumerate_daisies(n, pattern)[0]
    petals = set(small.petals)
    wide = DaisyPattern(pattern.r, pattern.s + 1, pattern.t)
    wider = _superset_instance(n, wide, petals)
    deeper = None
    if pattern.t + 1 <= pattern.r:
        deeper = _superset_instance(n, DaisyPattern(pattern.r, pattern.s + 1, pattern.t + 1), petals)
    return ContainmentWitness(n, small, wider, deeper)
