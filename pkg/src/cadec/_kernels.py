"""Compiled inner loops: the rule PRF and functional-graph walks.

All integer arithmetic in the PRF is carried out in uint64 with explicit
casts; numba promotes mixed int64/uint64 expressions to float64.
"""
import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def mix64(z):
    z = np.uint64(z)
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def prf_states(seed, codes, n, limit):
    """Uniform states in [0, n) keyed by (seed, window code).

    ``limit`` is the largest multiple of n not exceeding 2**64; draws at or
    above it are rejected and redrawn with the next counter, which removes
    modulo bias. ``limit == 0`` stands for 2**64 (n a power of two).
    """
    out = np.empty(codes.shape[0], dtype=np.int64)
    seed = np.uint64(seed)
    nn = np.uint64(n)
    lim = np.uint64(limit)
    key0 = mix64(seed + _GOLDEN)
    for i in range(codes.shape[0]):
        wc = mix64(np.uint64(codes[i]) + _GOLDEN)
        key = key0
        counter = np.uint64(1)
        h = mix64(key ^ wc)
        while lim != np.uint64(0) and h >= lim:
            counter += np.uint64(1)
            key = mix64(seed + _GOLDEN * counter)
            h = mix64(key ^ wc)
        out[i] = np.int64(h % nn)
    return out


@njit(cache=True)
def cemetery_flags(succ, n_aperiodic):
    """Flag every aperiodic vertex whose forward orbit reaches a sink.

    Vertices with id >= n_aperiodic are sinks (periodic-type). Each vertex is
    visited once; states: 0 unresolved, 1 on the current walk, 2 non-cemetery,
    3 cemetery.
    """
    state = np.zeros(n_aperiodic, dtype=np.int8)
    path = np.empty(n_aperiodic, dtype=np.int64)
    for v in range(n_aperiodic):
        if state[v] != 0:
            continue
        depth = 0
        u = v
        while u < n_aperiodic and state[u] == 0:
            state[u] = 1
            path[depth] = u
            depth += 1
            u = succ[u]
        if u >= n_aperiodic:
            mark = 3
        elif state[u] == 1:
            mark = 2
        else:
            mark = state[u]
        for i in range(depth):
            state[path[i]] = mark
    return state == 3


@njit(cache=True)
def functional_cycles(succ, shift, alive, sigma):
    """Cycles of a functional graph restricted to ``alive`` vertices.

    The successor of an alive vertex must be alive. Returns the concatenated
    cycle vertices, offsets into that array (length n_cycles + 1), and the
    net rotation accumulated around each cycle modulo sigma.
    """
    m = succ.shape[0]
    color = np.full(m, -1, dtype=np.int64)
    flat = np.empty(m, dtype=np.int64)
    offsets = np.zeros(m + 1, dtype=np.int64)
    nets = np.zeros(m, dtype=np.int64)
    n_cyc = 0
    pos = 0
    for v in range(m):
        if not alive[v] or color[v] != -1:
            continue
        u = v
        while color[u] == -1:
            color[u] = v
            u = succ[u]
        if color[u] != v:
            continue
        start = u
        net = 0
        while True:
            flat[pos] = u
            pos += 1
            net += shift[u]
            u = succ[u]
            if u == start:
                break
        nets[n_cyc] = net % sigma
        n_cyc += 1
        offsets[n_cyc] = pos
    return flat[:pos], offsets[: n_cyc + 1], nets[:n_cyc]
