"""Rotation classes of ring words and the vertex partition of the DEC.

Words are handled as base-n integer codes (first state most significant),
so the lexicographic order on words is the numeric order on codes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .ca import RingWord, min_period
from .errors import CapExceededError, ParameterError
from .numtheory import count_aperiodic, divisors

# Raised above the 2e6 suggested for brute force so that sigma=4, n=50
# (6.25e6 words) can be enumerated.
ENUMERATION_CAP = 10_000_000


def canonical_rotation(word: RingWord) -> tuple[RingWord, int]:
    """Least rotation of ``word`` and the smallest left shift producing it."""
    s = word.states
    best, best_shift = s, 0
    for k in range(1, len(s)):
        rot = s[k:] + s[:k]
        if rot < best:
            best, best_shift = rot, k
    return RingWord(best, word.n), best_shift


def shift_order(ell: int, sigma: int) -> int:
    return sigma // gcd(sigma, ell % sigma)


@dataclass(frozen=True)
class ClassId:
    canonical: RingWord
    aperiodic: bool
    id: int


@dataclass(eq=False)
class VertexSet:
    """Partition of all ``n**sigma`` words into DEC vertices.

    Vertex ids: aperiodic classes ``[0, n_aperiodic)`` by ascending canonical
    word, then the grouped periodic vertices, then ``v0`` if present.
    """

    n: int
    sigma: int
    aperiodic_codes: np.ndarray
    periodic_groups: list[np.ndarray]
    v0: np.ndarray | None
    vertex_of: np.ndarray = field(repr=False)
    shift_of: np.ndarray = field(repr=False)

    @property
    def n_aperiodic(self) -> int:
        return len(self.aperiodic_codes)

    @property
    def iota(self) -> int:
        return 0 if self.v0 is None else len(self.v0)

    @property
    def v0_id(self) -> int | None:
        return None if self.v0 is None else self.n_aperiodic + len(self.periodic_groups)

    @property
    def n_total(self) -> int:
        return self.n_aperiodic + len(self.periodic_groups) + (self.v0 is not None)

    def is_aperiodic_vertex(self, vid: int) -> bool:
        return 0 <= vid < self.n_aperiodic

    def class_id(self, i: int) -> ClassId:
        canon = RingWord.from_code(int(self.aperiodic_codes[i]), self.sigma, self.n)
        return ClassId(canon, True, i)

    @property
    def aperiodic_classes(self) -> list[ClassId]:
        return [self.class_id(i) for i in range(self.n_aperiodic)]

    def vertex_words(self, vid: int) -> list[RingWord]:
        """Words belonging to vertex ``vid`` (for inspection; small sets only)."""
        if self.is_aperiodic_vertex(vid):
            w = self.class_id(vid).canonical
            return sorted({w.rotate_left(k) for k in range(self.sigma)}, key=lambda x: x.code)
        k = vid - self.n_aperiodic
        codes = self.periodic_groups[k] if k < len(self.periodic_groups) else self.v0
        return [RingWord.from_code(int(c), self.sigma, self.n) for c in codes]

    def digits(self, codes: np.ndarray) -> np.ndarray:
        """Split codes into a (len, sigma) array of states."""
        codes = np.asarray(codes, dtype=np.int64)
        powers = self.n ** np.arange(self.sigma - 1, -1, -1, dtype=np.int64)
        return (codes[:, None] // powers[None, :]) % self.n


def _rotations(codes: np.ndarray, n: int, sigma: int):
    """Yield (k, code of rotate_left(word, k)) for k = 0..sigma-1."""
    high = n ** (sigma - 1)
    rot = codes.copy()
    yield 0, rot
    for k in range(1, sigma):
        rot = (rot % high) * n + rot // high
        yield k, rot


@lru_cache(maxsize=4)
def build_vertex_set(n: int, sigma: int, grouping_seed: int | None = None) -> VertexSet:
    """Enumerate all words and partition them into DEC vertices.

    Periodic words are grouped by ascending proper period ``p > 1``, in
    lexicographic order (or a seeded random order when ``grouping_seed`` is
    given), ``sigma`` per vertex; an incomplete last group is padded with
    period-1 words. Remaining period-1 words form further groups and the
    final ``iota < sigma`` of them make up ``v0``.
    """
    if n < 1 or sigma < 1:
        raise ParameterError("n and sigma must be >= 1", "n" if n < 1 else "sigma")
    total = n**sigma
    if total > ENUMERATION_CAP:
        raise CapExceededError(
            f"n**sigma = {total} exceeds enumeration cap {ENUMERATION_CAP}", "n")

    codes = np.arange(total, dtype=np.int64)
    canon = codes.copy()
    shift = np.zeros(total, dtype=np.int8)
    period = np.full(total, sigma, dtype=np.int16)
    proper = [d for d in divisors(sigma) if d < sigma]
    for k, rot in _rotations(codes, n, sigma):
        if k == 0:
            continue
        better = rot < canon
        canon[better] = rot[better]
        shift[better] = k
        if k in proper:
            period[(rot == codes) & (period > k)] = k
    # rot == codes for k | sigma means period divides k; smaller divisors
    # are visited first, so `period` holds the minimal one.

    aperiodic = period == sigma
    ap_codes = np.unique(canon[aperiodic])
    vertex_of = np.empty(total, dtype=np.int64)
    vertex_of[aperiodic] = np.searchsorted(ap_codes, canon[aperiodic])
    n_ap = len(ap_codes)
    expected = count_aperiodic(sigma, n)
    assert n_ap * sigma == expected, (n_ap, expected)

    rng = np.random.default_rng(grouping_seed) if grouping_seed is not None else None

    def ordered(mask):
        words = codes[mask]
        if rng is not None:
            words = rng.permutation(words)
        return list(words)

    pool1 = ordered(period == 1) if sigma > 1 else []
    groups: list[np.ndarray] = []
    for p in proper:
        if p == 1:
            continue
        words = ordered(period == p)
        for i in range(0, len(words), sigma):
            g = words[i:i + sigma]
            if len(g) < sigma:
                need = sigma - len(g)
                if need > len(pool1):
                    raise ParameterError(
                        f"not enough period-1 words to pad periodic vertices at n={n}, sigma={sigma}",
                        "n")
                g = g + pool1[:need]
                pool1 = pool1[need:]
            groups.append(np.array(g, dtype=np.int64))
    n_full = len(pool1) // sigma
    for i in range(n_full):
        groups.append(np.array(pool1[i * sigma:(i + 1) * sigma], dtype=np.int64))
    rest = pool1[n_full * sigma:]
    v0 = np.array(rest, dtype=np.int64) if rest else None

    for j, g in enumerate(groups):
        vertex_of[g] = n_ap + j
    if v0 is not None:
        vertex_of[v0] = n_ap + len(groups)

    n_per = total - expected
    assert (0 if v0 is None else len(v0)) == n_per - sigma * (n_per // sigma)
    return VertexSet(n, sigma, ap_codes, groups, v0, vertex_of, shift)


def class_of(word: RingWord, vs: VertexSet) -> int:
    if word.n != vs.n or word.length != vs.sigma:
        raise ParameterError("word does not match the vertex set's (n, sigma)", "word")
    return int(vs.vertex_of[word.code])


def is_aperiodic(word: RingWord) -> bool:
    return min_period(word) == word.length
