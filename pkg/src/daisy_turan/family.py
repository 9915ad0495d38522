"""Ground-set arithmetic, colex ranking and the r-uniform ``SetFamily`` container.

Ground elements are 0-based.  An r-set is a strictly increasing tuple of ints.
Its colex rank is ``sum(binom(a_i, i + 1))`` over positions ``i``; colex order
lists {0,1,2}, {0,1,3}, {0,2,3}, {1,2,3}, {0,1,4}, ...
"""
from __future__ import annotations

import json
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidInputError

MAX_N = 64

RSet = tuple[int, ...]

# BINOM[a, k] = binom(a, k) for 0 <= a, k <= MAX_N; binom(64, 32) fits in int64.
BINOM = np.zeros((MAX_N + 1, MAX_N + 1), dtype=np.int64)
for _a in range(MAX_N + 1):
    for _k in range(_a + 1):
        BINOM[_a, _k] = comb(_a, _k)


def binom(n: int, k: int) -> int:
    if n > MAX_N:
        raise InvalidInputError(f"ground size {n} exceeds the supported maximum {MAX_N}")
    if k < 0 or n < 0 or k > n:
        return 0
    return int(BINOM[n, k])


def check_rset(elements: Iterable[int], n: int | None = None, r: int | None = None) -> RSet:
    """Validate and return ``elements`` as an r-set tuple."""
    s = tuple(int(x) for x in elements)
    if any(b <= a for a, b in zip(s, s[1:])):
        raise InvalidInputError(f"{s} is not strictly increasing")
    if s and s[0] < 0:
        raise InvalidInputError(f"{s} has a negative element")
    bound = MAX_N if n is None else n
    if s and s[-1] >= bound:
        raise InvalidInputError(f"{s} has an element outside [0, {bound})")
    if r is not None and len(s) != r:
        raise InvalidInputError(f"{s} has size {len(s)}, expected {r}")
    return s


def colex_rank(s: Sequence[int], n: int | None = None) -> int:
    s = check_rset(s, n)
    return sum(int(BINOM[a, i + 1]) for i, a in enumerate(s))


def colex_unrank(i: int, n: int, r: int) -> RSet:
    if n > MAX_N:
        raise InvalidInputError(f"ground size {n} exceeds the supported maximum {MAX_N}")
    if not 0 <= r <= n:
        raise InvalidInputError(f"need 0 <= r <= n, got r={r}, n={n}")
    if not 0 <= i < binom(n, r):
        raise IndexError(f"rank {i} outside [0, {binom(n, r)})")
    out = []
    a = n - 1
    for pos in range(r, 0, -1):
        while BINOM[a, pos] > i:
            a -= 1
        out.append(a)
        i -= int(BINOM[a, pos])
        a -= 1
    return tuple(reversed(out))


def ranks_of(rows: np.ndarray) -> np.ndarray:
    """Colex ranks of the rows of an integer array (each row sorted ascending)."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim != 2:
        raise InvalidInputError("expected a 2-d array of r-sets")
    out = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(rows.shape[1]):
        out += BINOM[rows[:, i], i + 1]
    return out


def unrank_many(ranks: np.ndarray, r: int) -> np.ndarray:
    """Vectorised inverse of :func:`ranks_of`."""
    rem = np.asarray(ranks, dtype=np.int64).copy()
    out = np.zeros((rem.shape[0], r), dtype=np.int64)
    for pos in range(r, 0, -1):
        col = BINOM[:, pos]  # nondecreasing in a
        a = np.searchsorted(col, rem, side="right") - 1
        out[:, pos - 1] = a
        rem -= col[a]
    return out


@lru_cache(maxsize=256)
def _colex_combinations(m: int, k: int) -> np.ndarray:
    arr = unrank_many(np.arange(binom(m, k), dtype=np.int64), k)
    arr.setflags(write=False)
    return arr


def colex_combinations(m: int, k: int) -> np.ndarray:
    """All k-subsets of ``range(m)`` in colex order, shape ``(binom(m, k), k)``."""
    if k < 0 or m < 0:
        raise InvalidInputError("negative size")
    if k > m:
        return np.zeros((0, k), dtype=np.int64)
    return _colex_combinations(m, k)


class SetFamily:
    """An r-uniform family over ``range(n)`` stored as a bitmap indexed by colex rank.

    Instances are immutable; the bitmap is a read-only numpy bool array.
    """

    __slots__ = ("n", "r", "members")

    def __init__(self, n: int, r: int, members: np.ndarray | None = None):
        if n > MAX_N:
            raise InvalidInputError(f"ground size {n} exceeds the supported maximum {MAX_N}")
        if not 0 <= r <= n:
            raise InvalidInputError(f"need 0 <= r <= n, got r={r}, n={n}")
        size = binom(n, r)
        if members is None:
            bits = np.zeros(size, dtype=bool)
        else:
            bits = np.array(members, dtype=bool)
            if bits.shape != (size,):
                raise InvalidInputError(f"bitmap must have length binom({n},{r}) = {size}")
        bits.setflags(write=False)
        self.n = n
        self.r = r
        self.members = bits

    @classmethod
    def from_sets(cls, n: int, r: int, sets: Iterable[Sequence[int]], *, allow_duplicates: bool = True) -> SetFamily:
        bits = np.zeros(binom(n, r), dtype=bool)
        for s in sets:
            i = colex_rank(check_rset(s, n, r))
            if bits[i] and not allow_duplicates:
                raise InvalidInputError(f"duplicate member {tuple(s)}")
            bits[i] = True
        return cls(n, r, bits)

    @classmethod
    def from_ranks(cls, n: int, r: int, ranks: Iterable[int]) -> SetFamily:
        bits = np.zeros(binom(n, r), dtype=bool)
        idx = np.fromiter((int(i) for i in ranks), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= bits.size):
            raise InvalidInputError("rank out of range")
        bits[idx] = True
        return cls(n, r, bits)

    @classmethod
    def complete(cls, n: int, r: int) -> SetFamily:
        return cls(n, r, np.ones(binom(n, r), dtype=bool))

    def size(self) -> int:
        return int(np.count_nonzero(self.members))

    def __len__(self) -> int:
        return self.size()

    def ranks(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def as_array(self) -> np.ndarray:
        """Members as a ``(size, r)`` int array, rows in colex order."""
        return unrank_many(self.ranks(), self.r)

    def sets(self) -> Iterator[RSet]:
        for row in self.as_array():
            yield tuple(int(x) for x in row)

    def __iter__(self) -> Iterator[RSet]:
        return self.sets()

    def __contains__(self, s: Sequence[int]) -> bool:
        s = check_rset(s, self.n)
        return len(s) == self.r and bool(self.members[colex_rank(s)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.n == other.n and self.r == other.r and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((self.n, self.r, self.members.tobytes()))

    def issubset(self, other: SetFamily) -> bool:
        self._check_compatible(other)
        return not np.any(self.members & ~other.members)

    def union(self, other: SetFamily) -> SetFamily:
        self._check_compatible(other)
        return SetFamily(self.n, self.r, self.members | other.members)

    def _check_compatible(self, other: SetFamily) -> None:
        if (self.n, self.r) != (other.n, other.r):
            raise InvalidInputError(f"families over ({self.n},{self.r}) and ({other.n},{other.r})")

    def __repr__(self) -> str:
        return f"SetFamily(n={self.n}, r={self.r}, size={self.size()})"


def relabel(f: SetFamily, perm: Sequence[int]) -> SetFamily:
    """Image of ``f`` under the ground permutation ``i -> perm[i]``."""
    p = np.asarray(perm, dtype=np.int64)
    if p.shape != (f.n,) or not np.array_equal(np.sort(p), np.arange(f.n)):
        raise InvalidInputError(f"{list(perm)} is not a permutation of range({f.n})")
    rows = np.sort(p[f.as_array()], axis=1)
    bits = np.zeros_like(f.members)
    bits[ranks_of(rows)] = True
    return SetFamily(f.n, f.r, bits)


def complement_family(f: SetFamily) -> SetFamily:
    return SetFamily(f.n, f.r, ~f.members)


# -- family files ---------------------------------------------------------------

def format_family_text(f: SetFamily) -> str:
    lines = [f"{f.n} {f.r}"]
    lines += [" ".join(map(str, s)) for s in f.sets()]
    return "\n".join(lines) + "\n"


def parse_family_text(text: str) -> SetFamily:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise InvalidInputError("family file must start with a line 'n r'")
    try:
        n, r = int(rows[0][0]), int(rows[0][1])
        sets = [[int(x) for x in row] for row in rows[1:]]
    except ValueError as exc:
        raise InvalidInputError(f"non-integer entry in family file: {exc}") from None
    return SetFamily.from_sets(n, r, sets, allow_duplicates=False)


def family_to_json(f: SetFamily) -> dict:
    return {"n": f.n, "r": f.r, "sets": [list(s) for s in f.sets()]}


def family_from_json(obj: dict) -> SetFamily:
    try:
        n, r, sets = int(obj["n"]), int(obj["r"]), obj["sets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad family JSON: {exc}") from None
    return SetFamily.from_sets(n, r, sets, allow_duplicates=False)


def read_family(path: str | Path) -> SetFamily:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return family_from_json(json.loads(text))
    return parse_family_text(text)


def write_family(f: SetFamily, path: str | Path, fmt: str = "text") -> None:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(family_to_json(f)) + "\n")
    else:
        path.write_text(format_family_text(f))
