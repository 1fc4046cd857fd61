"""Random one-sided rules and their evolution on cyclic configurations.

A rule with ``r`` neighbors maps the window ``(x[i-r+1], ..., x[i])`` to the
new state at site ``i``. Rules are realized lazily from a 64-bit seed, so a
rule over ``n**(n**r)`` possibilities never has to be stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Union

import numpy as np

from ._kernels import prf_states
from .errors import CapExceededError, ParameterError
from .numtheory import divisors

BRUTE_FORCE_CAP = 2_000_000


@dataclass(frozen=True)
class RingWord:
    """One spatial period of a periodic configuration; indices wrap around."""

    states: tuple[int, ...]
    n: int

    def __post_init__(self):
        if len(self.states) < 1:
            raise ParameterError("ring word must have length >= 1", "word")
        if self.n < 1:
            raise ParameterError("alphabet size must be >= 1", "n")
        for s in self.states:
            if not 0 <= s < self.n:
                raise ParameterError(f"state {s} outside [0, {self.n})", "word")

    @classmethod
    def from_str(cls, text: str, n: int) -> "RingWord":
        return cls(tuple(int(c) for c in text), n)

    @classmethod
    def from_code(cls, code: int, sigma: int, n: int) -> "RingWord":
        digits = []
        for _ in range(sigma):
            code, d = divmod(code, n)
            digits.append(d)
        return cls(tuple(reversed(digits)), n)

    @property
    def length(self) -> int:
        return len(self.states)

    @property
    def code(self) -> int:
        """Base-n value with the first state most significant."""
        c = 0
        for s in self.states:
            c = c * self.n + s
        return c

    def rotate_left(self, ell: int) -> "RingWord":
        k = ell % self.length
        return RingWord(self.states[k:] + self.states[:k], self.n)

    def __str__(self) -> str:
        if self.n <= 10:
            return "".join(map(str, self.states))
        return ",".join(map(str, self.states))

    def __len__(self) -> int:
        return self.length


def _rejection_limit(n: int) -> int:
    # 0 encodes 2**64 for the kernel
    return (2**64 - (2**64 % n)) % 2**64


class LazyRule:
    """Uniformly random ``r``-neighbor ``n``-state rule, realized on demand.

    Each window's output is a pure function of ``(seed, window)``; the memo
    in ``realized`` only avoids recomputation. ``pinned`` fixes selected
    windows to given outputs, which is how hand-built example rules are made.
    """

    def __init__(self, n: int, r: int, seed: int,
                 pinned: Mapping[tuple[int, ...], int] | None = None):
        if n < 1:
            raise ParameterError("n must be >= 1", "n")
        if r < 1:
            raise ParameterError("r must be >= 1", "r")
        self.n = int(n)
        self.r = int(r)
        self.seed = int(seed) % 2**64
        self.realized: dict[tuple[int, ...], int] = {}
        self.pinned: dict[tuple[int, ...], int] = {}
        for window, value in (pinned or {}).items():
            window = self._check_window(window)
            if not 0 <= value < self.n:
                raise ParameterError(f"pinned output {value} outside [0, {self.n})", "pinned")
            self.pinned[window] = int(value)
        self._limit = _rejection_limit(self.n)
        self._pinned_codes = np.array(
            [self.window_code(w) for w in self.pinned], dtype=np.int64)
        self._pinned_values = np.array(list(self.pinned.values()), dtype=np.int64)

    def __repr__(self):
        return f"LazyRule(n={self.n}, r={self.r}, seed={self.seed}, pinned={len(self.pinned)})"

    def _check_window(self, window: Iterable[int]) -> tuple[int, ...]:
        window = tuple(int(a) for a in window)
        if len(window) != self.r:
            raise ParameterError(f"window length {len(window)} != r = {self.r}", "window")
        if any(not 0 <= a < self.n for a in window):
            raise ParameterError(f"window {window} has a state outside [0, {self.n})", "window")
        return window

    def window_code(self, window: tuple[int, ...]) -> int:
        c = 0
        for a in window:
            c = c * self.n + a
        return c

    def apply_codes(self, codes: np.ndarray) -> np.ndarray:
        """Vectorized rule evaluation on base-n window codes (any shape)."""
        codes = np.asarray(codes, dtype=np.int64)
        flat = codes.ravel()
        if self.n == 1:
            out = np.zeros(flat.shape, dtype=np.int64)
        else:
            out = prf_states(np.uint64(self.seed), flat, self.n, np.uint64(self._limit))
        if self.pinned:
            hit = np.isin(flat, self._pinned_codes)
            if hit.any():
                order = np.argsort(self._pinned_codes)
                pos = np.searchsorted(self._pinned_codes[order], flat[hit])
                out[hit] = self._pinned_values[order][pos]
        return out.reshape(codes.shape)

    def __call__(self, window: Iterable[int]) -> int:
        return rule_apply(self, window)


def rule_apply(rule: LazyRule, window: Iterable[int]) -> int:
    window = rule._check_window(window)
    if window in rule.pinned:
        return rule.pinned[window]
    value = rule.realized.get(window)
    if value is None:
        value = int(rule.apply_codes(np.array([rule.window_code(window)]))[0])
        rule.realized[window] = value
    return value


def evolve_ring(rule: LazyRule, word: RingWord) -> RingWord:
    if word.n != rule.n:
        raise ParameterError(f"word alphabet {word.n} != rule alphabet {rule.n}", "word")
    s = word.states
    sigma = len(s)
    r = rule.r
    out = tuple(rule_apply(rule, [s[(i - r + 1 + j) % sigma] for j in range(r)])
                for i in range(sigma))
    return RingWord(out, word.n)


def min_period(word: RingWord) -> int:
    s = word.states
    sigma = len(s)
    for d in divisors(sigma):
        if s[d:] + s[:d] == s:
            return d
    return sigma  # unreachable: d = sigma always matches


@dataclass(frozen=True)
class Period:
    tau: int


@dataclass(frozen=True)
class CemeteryHit:
    step: int
    reduced: RingWord


@dataclass(frozen=True)
class Exceeded:
    bound: int


PeriodResult = Union[Period, CemeteryHit, Exceeded]


def temporal_period(rule: LazyRule, start: RingWord,
                    max_steps: int | None = None) -> PeriodResult:
    """Follow ``start`` until it recurs, loses spatial period, or times out.

    The default bound ``n**sigma`` is the pigeonhole limit on distinct rings.
    A start that is transient (the orbit revisits some other ring first) can
    never recur, so it is reported as ``Exceeded`` as soon as that happens.
    """
    if max_steps is None:
        max_steps = start.n ** start.length
    if max_steps < 1:
        raise ParameterError("max_steps must be >= 1", "max_steps")
    p0 = min_period(start)
    w = start
    seen = {start}
    for step in range(1, max_steps + 1):
        w = evolve_ring(rule, w)
        if min_period(w) < p0:
            return CemeteryHit(step, w)
        if w == start:
            return Period(step)
        if w in seen:
            break
        seen.add(w)
    return Exceeded(max_steps)


def all_words(n: int, sigma: int) -> Iterable[RingWord]:
    for states in product(range(n), repeat=sigma):
        yield RingWord(states, n)


def brute_force_longest_period(rule: LazyRule, sigma: int) -> int:
    """Longest temporal period over all aperiodic starts, by direct simulation.

    Returns 0 when no aperiodic start word recurs.
    """
    total = rule.n ** sigma
    if total > BRUTE_FORCE_CAP:
        raise CapExceededError(
            f"n**sigma = {total} exceeds brute-force cap {BRUTE_FORCE_CAP}", "sigma")
    best = 0
    for w in all_words(rule.n, sigma):
        if min_period(w) != sigma:
            continue
        res = temporal_period(rule, w, total)
        if isinstance(res, Period):
            best = max(best, res.tau)
    return best
