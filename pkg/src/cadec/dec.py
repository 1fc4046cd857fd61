"""Digraph on equivalence classes (DEC) of a rule, its cemetery and cycles."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import cemetery_flags, functional_cycles
from .ca import LazyRule
from .errors import ParameterError
from .necklace import VertexSet, build_vertex_set, shift_order


@dataclass(eq=False)
class DecGraph:
    vs: VertexSet
    successor: np.ndarray
    edge_shift: np.ndarray
    cemetery: np.ndarray

    @property
    def sigma(self) -> int:
        return self.vs.sigma

    @property
    def n_noncemetery(self) -> int:
        return int(self.vs.n_aperiodic - self.cemetery.sum())


@dataclass(frozen=True)
class CycleRecord:
    vertices: tuple[int, ...]
    length: int
    net_shift: int
    expanding: int
    period: int


@lru_cache(maxsize=8)
def window_table(n: int, sigma: int, r: int) -> np.ndarray:
    """Window codes read by each site of each canonical aperiodic word.

    Entry ``[c, i]`` is the base-n code of ``(w[i-r+1], ..., w[i])`` with
    indices mod sigma, where ``w`` is the canonical word of class ``c``.
    """
    if n**r >= 2**63:
        raise ParameterError(f"window codes n**r = {n}**{r} overflow int64", "r")
    vs = build_vertex_set(n, sigma)
    digits = vs.digits(vs.aperiodic_codes)
    table = np.zeros((vs.n_aperiodic, sigma), dtype=np.int64)
    for i in range(sigma):
        for j in range(r):
            table[:, i] = table[:, i] * n + digits[:, (i - r + 1 + j) % sigma]
    return table


def build_dec(rule: LazyRule, sigma: int, vs: VertexSet | None = None) -> DecGraph:
    """Evolve every canonical aperiodic word once and record where it lands.

    ``edge_shift[c]`` is the left rotation taking the image of class ``c``'s
    canonical word to the canonical word of its successor.
    """
    if vs is None:
        vs = build_vertex_set(rule.n, sigma)
    elif vs.n != rule.n or vs.sigma != sigma:
        raise ParameterError("vertex set does not match rule alphabet / sigma", "vs")
    if vs.n_aperiodic == 0:
        empty = np.zeros(0, dtype=np.int64)
        return DecGraph(vs, empty, empty.copy(), np.zeros(0, dtype=bool))
    out = rule.apply_codes(window_table(rule.n, sigma, rule.r))
    powers = rule.n ** np.arange(sigma - 1, -1, -1, dtype=np.int64)
    image = out @ powers
    succ = vs.vertex_of[image]
    shift = vs.shift_of[image].astype(np.int64)
    g = DecGraph(vs, succ, shift, np.zeros(vs.n_aperiodic, dtype=bool))
    mark_cemetery(g)
    return g


def mark_cemetery(g: DecGraph) -> tuple[int, int]:
    """Recompute cemetery flags in place; return (non-cemetery count, vertex count)."""
    if g.vs.n_aperiodic:
        g.cemetery = cemetery_flags(g.successor, g.vs.n_aperiodic)
    return g.n_noncemetery, g.vs.n_total


def find_cycles(g: DecGraph) -> list[CycleRecord]:
    if g.vs.n_aperiodic == 0:
        return []
    flat, offsets, nets = functional_cycles(g.successor, g.edge_shift, ~g.cemetery, g.sigma)
    cycles = []
    for k in range(len(nets)):
        verts = tuple(int(v) for v in flat[offsets[k]:offsets[k + 1]])
        d = shift_order(int(nets[k]), g.sigma)
        cycles.append(CycleRecord(verts, len(verts), int(nets[k]), d, len(verts) * d))
    cycles.sort(key=lambda c: (-c.length, min(c.vertices)))
    return cycles


def period_spectrum(g: DecGraph, j: int, cycles: list[CycleRecord] | None = None) -> list[int]:
    """The ``j`` longest temporal periods, descending, zero-padded."""
    if j < 1:
        raise ParameterError("j must be >= 1", "j")
    if cycles is None:
        cycles = find_cycles(g)
    periods = sorted((c.period for c in cycles), reverse=True)[:j]
    return periods + [0] * (j - len(periods))


def longest_period(g: DecGraph, cycles: list[CycleRecord] | None = None) -> int:
    return period_spectrum(g, 1, cycles)[0]
