"""Explicit daisy-free families and the window-count scan.

Complete multipartite families, the Fano plane and its complement, blow-ups
of a base family over a partition, the iterated Fano-complement blow-up on
7^k points, and the parity-constrained family.  The layered hypercube
transversal lives in :mod:`daisy_turan.hypercube` and is re-exported here.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvalidInputError, ResourceRefusal
from .family import SetFamily, binom, colex_combinations, complement_family, ranks_of, unrank_many
from .hypercube import layered_transversal  # noqa: F401  (re-export)

WINDOW_SCAN_LIMIT = 10**7


@dataclass(frozen=True)
class Partition:
    class_of: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 1 or any(not 0 <= c < self.k for c in self.class_of):
            raise InvalidInputError("class indices must lie in [0, k)")

    @property
    def n(self) -> int:
        return len(self.class_of)

    @property
    def sizes(self) -> tuple[int, ...]:
        out = [0] * self.k
        for c in self.class_of:
            out[c] += 1
        return tuple(out)

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for x, c in enumerate(self.class_of):
            out[c].append(x)
        return out


def even_split(n: int, k: int) -> Partition:
    """Contiguous blocks; the first ``n % k`` classes get ``ceil(n/k)`` elements."""
    if k < 1 or n < 0:
        raise InvalidInputError(f"cannot split {n} points into {k} classes")
    q, extra = divmod(n, k)
    labels = []
    for c in range(k):
        labels += [c] * (q + (c < extra))
    return Partition(tuple(labels), k)


def _family_from_rows(n: int, r: int, rows) -> SetFamily:
    arr = np.asarray(rows, dtype=np.int64).reshape(-1, r)
    bits = np.zeros(binom(n, r), dtype=bool)
    if arr.shape[0]:
        bits[ranks_of(np.sort(arr, axis=1))] = True
    return SetFamily(n, r, bits)


def complete_multipartite(n: int, r: int) -> SetFamily:
    """r-sets with exactly one element in each class of the even r-split of [n]."""
    if n < r:
        raise InvalidInputError(f"need n >= r, got n={n}, r={r}")
    classes = even_split(n, r).classes()
    return _family_from_rows(n, r, list(itertools.product(*classes)))


def multipartite_count(n: int, r: int) -> int:
    out = 1
    for size in even_split(n, r).sizes:
        out *= size
    return out


def fano_lines() -> SetFamily:
    return SetFamily.from_sets(7, 3, (sorted({a, (a + 1) % 7, (a + 3) % 7}) for a in range(7)))


def fano_complement() -> SetFamily:
    """The 28 triples of Z_7 that are not Fano lines."""
    return complement_family(fano_lines())


@dataclass(frozen=True)
class BlowupSpec:
    base: SetFamily  # allowed class-tuples, on range(k)
    partition: Optional[Partition] = None


def blowup(spec: BlowupSpec, n: int) -> SetFamily:
    """Sets with one element in each of the classes of some base member.

    Without an explicit partition, ``[n]`` is evenly split into ``base.n`` classes.
    """
    base = spec.base
    part = spec.partition or even_split(n, base.n)
    if part.k != base.n:
        raise InvalidInputError(f"base has {base.n} points but the partition has {part.k} classes")
    if part.n != n:
        raise InvalidInputError(f"partition covers {part.n} points, expected {n}")
    classes = part.classes()
    rows = []
    for member in base.sets():
        rows.extend(itertools.product(*(classes[c] for c in member)))
    return _family_from_rows(n, base.r, rows)


def iterated_fano(k: int) -> SetFamily:
    """Fano-complement blow-up on 7^k points, repeated inside every class.

    Classes are contiguous blocks of 7^(k-1) points.  The member count is
    ``(1 - 49^-k) * 7^(3k) / 12``.
    """
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")
    if k > 2:
        raise ResourceRefusal(f"iterated_fano materialises 7^{k} points; only k <= 2 is supported")
    base_rows = fano_complement().as_array()

    def rows(level: int, offset: int) -> list[np.ndarray]:
        if level == 0:
            return []
        block = 7 ** (level - 1)
        out = []
        for member in base_rows:
            starts = offset + member * block
            grid = np.stack(np.meshgrid(*(np.arange(s, s + block) for s in starts), indexing="ij"), axis=-1)
            out.append(grid.reshape(-1, 3))
        for c in range(7):
            out += rows(level - 1, offset + c * block)
        return out

    return _family_from_rows(7**k, 3, np.concatenate(rows(k, 0)))


def iterated_fano_count(k: int) -> Fraction:
    n = 7**k
    return (1 - Fraction(1, 49**k)) * Fraction(n**3, 12)


def parity_profiles(r: int, k: int, delta: int, sizes: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Class-intersection profiles allowed in :func:`parity_family`."""
    lo, hi = Fraction(r, k) - delta, Fraction(r, k) + delta
    out = []
    for prof in itertools.product(*(range(s + 1) for s in sizes)):
        if sum(prof) != r or any(not lo <= c <= hi for c in prof):
            continue
        want_odd = [False] * k
        if r % 2:
            want_odd[-1] = True  # the last class carries the odd intersection
        if all((c % 2 == 1) == odd for c, odd in zip(prof, want_odd)):
            out.append(prof)
    return out


def parity_family(n: int, k: int, r: int, delta: int) -> SetFamily:
    """r-sets meeting each class of the even k-split in ``r/k ± delta`` points, all even.

    For odd ``r`` the last class takes the single odd intersection.
    """
    if k < 2 or n < r or delta < 1:
        raise InvalidInputError(f"need k >= 2, n >= r, delta >= 1; got n={n}, k={k}, r={r}, delta={delta}")
    part = even_split(n, k)
    classes = [np.array(c, dtype=np.int64) for c in part.classes()]
    blocks = []
    for prof in parity_profiles(r, k, delta, part.sizes):
        pieces = [cls[colex_combinations(len(cls), c)] for cls, c in zip(classes, prof)]
        idx = np.stack(np.meshgrid(*(np.arange(p.shape[0]) for p in pieces), indexing="ij"), axis=-1).reshape(-1, k)
        blocks.append(np.concatenate([p[idx[:, j]] for j, p in enumerate(pieces)], axis=1))
    if not blocks:
        return SetFamily(n, r)
    return _family_from_rows(n, r, np.concatenate(blocks))


def max_members_in_window(f: SetFamily, w: int) -> tuple[int, tuple[int, ...]]:
    """Largest number of members inside a single w-set, with the first maximising w-set in colex order."""
    if w > f.n:
        raise InvalidInputError(f"window size {w} exceeds n={f.n}")
    if w < f.r:
        raise InvalidInputError(f"window size {w} is below the uniformity {f.r}")
    total = binom(f.n, w)
    if total > WINDOW_SCAN_LIMIT:
        raise ResourceRefusal(f"{total} windows exceed the scan limit {WINDOW_SCAN_LIMIT}")
    inner = colex_combinations(w, f.r)
    best, best_idx = -1, 0
    chunk = max(1, 2_000_000 // max(1, inner.shape[0]))
    for start in range(0, total, chunk):
        win = unrank_many(np.arange(start, min(start + chunk, total), dtype=np.int64), w)
        sub = win[:, inner]  # (chunk, binom(w, r), r)
        counts = f.members[ranks_of(sub.reshape(-1, f.r)).reshape(sub.shape[:2])].sum(axis=1)
        j = int(np.argmax(counts))
        if counts[j] > best:
            best, best_idx = int(counts[j]), start + j
    return best, tuple(int(x) for x in unrank_many(np.array([best_idx]), w)[0])
