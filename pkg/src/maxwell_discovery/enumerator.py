"""Enumerate term sets in order of total weight (the q: l,m squeeze).

Level q holds every set whose weights sum to exactly q. Level 1 and every
other singleton level are seeded directly; for q > 1 the level is grown
from unions of level l and level m sets with l + m = q, l marching up from
1 and m down from q - 1. A union of weight below q means the two sets
overlapped and is discarded. Sets are handled internally as bitmasks over
the alphabet.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .theory_lang import Candidate

Prune = Callable[[Candidate], bool]  # True means drop


@dataclass(frozen=True)
class Letter:
    """Abstract weighted symbol, for alphabets that are not field terms."""

    name: str
    weight: int

    @property
    def sort_key(self) -> str:
        return self.name

    def __str__(self) -> str:
        return self.name


def letters(spec: str | Sequence[tuple[str, int]]) -> list[Letter]:
    """``letters("A=1 B=1 C=4")`` or ``letters([("A", 1), ...])``."""
    if isinstance(spec, str):
        spec = [tuple(tok.split("=")) for tok in spec.replace(",", " ").split()]
    return [Letter(name, int(w)) for name, w in spec]


# alphabet listed in the abstract enumeration discussion (note K=4 here)
ABSTRACT_ALPHABET = letters("A=1 B=1 C=4 D=4 E=4 F=4 G=7 H=7 I=7 J=7 K=4 L=7")


@dataclass
class TheoryLevels:
    """Sets of each exact complexity, as sorted bitmask arrays."""

    alphabet: tuple
    by_q: dict[int, np.ndarray] = field(default_factory=dict)
    pairs_checked: int = 0
    # every level 1..built_through has been squeezed
    built_through: int = 0

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        self._weights = np.array([t.weight for t in self.alphabet], dtype=np.int64)

    def candidate(self, mask: int) -> Candidate:
        return Candidate(t for i, t in enumerate(self.alphabet) if mask >> i & 1)

    def candidates(self, q: int) -> list[Candidate]:
        return [self.candidate(int(m)) for m in self.by_q.get(q, ())]

    def weight(self, mask: int) -> int:
        return int(sum(int(w) for i, w in enumerate(self._weights) if mask >> i & 1))

    @property
    def max_q(self) -> int:
        return max(self.by_q, default=0)


def _check_alphabet(alphabet: Sequence) -> None:
    if not alphabet:
        raise ValueError("alphabet is empty")
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("alphabet contains duplicate terms")
    if len(alphabet) > 62:
        raise ValueError("alphabet too large for 64-bit set masks")
    if any(int(t.weight) < 1 for t in alphabet):
        raise ValueError("weights must be positive integers")


def _canonical_sort(levels: TheoryLevels, masks: np.ndarray) -> np.ndarray:
    # order by canonical term tuple, so output order is reproducible
    keyed = sorted((tuple(t.sort_key for t in levels.candidate(int(m)).terms), int(m)) for m in masks)
    return np.array([m for _, m in keyed], dtype=np.int64)


def base_cases(alphabet: Sequence) -> TheoryLevels:
    _check_alphabet(alphabet)
    levels = TheoryLevels(alphabet)
    seeds: dict[int, list[int]] = {}
    for i, t in enumerate(levels.alphabet):
        seeds.setdefault(int(t.weight), []).append(1 << i)
    for q, masks in seeds.items():
        levels.by_q[q] = _canonical_sort(levels, np.array(masks, dtype=np.int64))
    return levels


def squeeze(levels: TheoryLevels, q: int, prune: Prune | None = None) -> list[Candidate]:
    """Build level ``q`` from lower levels and store it; return its candidates.

    Singletons of weight q seeded by ``base_cases`` are kept. Candidates
    for which ``prune`` returns True are removed from the level.
    """
    if q < 1:
        raise ValueError("q must be positive")
    if levels.built_through < q - 1:
        raise ValueError(f"levels below {q} are incomplete (built through {levels.built_through})")

    found = [levels.by_q.get(q, np.empty(0, dtype=np.int64))]
    l, m = 1, q - 1
    while l <= m:
        left = levels.by_q.get(l)
        right = levels.by_q.get(m)
        if left is not None and right is not None and len(left) and len(right):
            levels.pairs_checked += len(left) * len(right)
            disjoint = (left[:, None] & right[None, :]) == 0
            found.append((left[:, None] | right[None, :])[disjoint])
        l, m = l + 1, m - 1

    masks = np.unique(np.concatenate(found))
    if prune is not None:
        masks = np.array([mk for mk in masks if not prune(levels.candidate(int(mk)))], dtype=np.int64)
    masks = _canonical_sort(levels, masks)
    if len(masks):
        levels.by_q[q] = masks
    else:
        levels.by_q.pop(q, None)
    levels.built_through = max(levels.built_through, q)
    return levels.candidates(q)


def march_levels(
    alphabet: Sequence, q_max: int, prune: Prune | None = None
) -> Iterator[tuple[int, list[Candidate]]]:
    """Yield ``(q, level)`` for q = 1 .. q_max; empty levels are skipped.

    Each level is complete before it is yielded, so a consumer sees all of
    level q before any of level q + 1.
    """
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    levels = base_cases(alphabet)
    for q in range(1, q_max + 1):
        level = squeeze(levels, q, prune)
        if level:
            yield q, level


def march(alphabet: Sequence, q_max: int, prune: Prune | None = None) -> Iterator[tuple[int, Candidate]]:
    for q, level in march_levels(alphabet, q_max, prune):
        for c in level:
            yield q, c


def brute_force_enum(alphabet: Sequence, q_max: int) -> list[Candidate]:
    """Every nonempty subset of weight <= q_max, by direct powerset filtering."""
    if len(alphabet) > 20:
        raise ValueError("brute force limited to alphabets of at most 20 terms")
    _check_alphabet(alphabet)
    out = []
    for size in range(1, len(alphabet) + 1):
        for combo in itertools.combinations(alphabet, size):
            if sum(t.weight for t in combo) <= q_max:
                out.append(Candidate(combo))
    return out
