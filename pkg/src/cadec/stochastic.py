"""Rule-free samplers and closed-form limit laws.

Every sampler takes an explicit ``numpy.random.Generator`` and touches no
other randomness, so equal generator states give equal outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import functional_cycles
from .errors import ParameterError
from .numtheory import count_aperiodic, divisors, totient


@dataclass
class Algo1Trace:
    """Per-step record of Y (non-cemetery), Z (active cemetery) and passive count."""

    Y: list[int] = field(default_factory=list)
    Z: list[int] = field(default_factory=list)
    passive: list[int] = field(default_factory=list)
    total: int = 0


def dec_counts(n: int, sigma: int) -> tuple[int, int, int]:
    """(aperiodic classes, full periodic vertices, iota) for the DEC at (n, sigma)."""
    t = count_aperiodic(sigma, n)
    per = n**sigma - t
    return t // sigma, per // sigma, per - sigma * (per // sigma)


def sample_c_algorithm1(n: int, sigma: int, rng: np.random.Generator,
                        trace: Algo1Trace | None = None) -> tuple[int, int]:
    """Number of non-cemetery vertices of a random DEC, by sequential construction.

    Only counts are tracked: which active cemetery vertex is processed next
    does not change the law of the binomial draws. Returns ``(C, N)``.
    """
    n_ap, n_per, iota = dec_counts(n, sigma)
    N = n_ap + n_per + (iota > 0)
    y, z, passive = n_ap, n_per, 0
    if trace is not None:
        trace.total = N
    if iota > 0:
        passive = 1
        beta = int(rng.binomial(y, iota / n**sigma))
        y -= beta
        z += beta
    if trace is not None:
        trace.Y.append(y); trace.Z.append(z); trace.passive.append(passive)
    while z > 0:
        # one active vertex becomes passive and absorbs beta preimages
        beta = int(rng.binomial(y, 1.0 / (y + z)))
        passive += 1
        y -= beta
        z += beta - 1
        if trace is not None:
            trace.Y.append(y); trace.Z.append(z); trace.passive.append(passive)
    return y, N


def hitting_start(sigma: int) -> float:
    """Starting height of the limiting bridge: 1/sqrt(sigma) for even sigma, else 0."""
    return 1.0 / math.sqrt(sigma) if sigma % 2 == 0 else 0.0


def simulate_eta_batch(sigma: int, dt: float, size: int,
                       rng: np.random.Generator) -> np.ndarray:
    """Euler-Maruyama for d eta = -eta/(1-t) dt - dB, eta(0) = hitting_start(sigma).

    Returns ``1 - tau`` per path, with ``tau`` the first grid time at which
    eta <= 0. Paths still positive at ``t = 1 - dt`` are assigned
    ``tau = 1 - dt``, i.e. the value ``dt``.
    """
    if not 0 < dt <= 1e-3:
        raise ParameterError(f"dt must be in (0, 1e-3], got {dt}", "dt")
    p = hitting_start(sigma)
    if p <= 0:
        return np.ones(size)
    n_steps = int(round(1.0 / dt)) - 1
    eta = np.full(size, p)
    tau = np.full(size, n_steps * dt)
    alive = np.arange(size)
    sq = math.sqrt(dt)
    for k in range(n_steps):
        t = k * dt
        eta = eta - eta / (1.0 - t) * dt - sq * rng.standard_normal(len(eta))
        hit = eta <= 0
        if hit.any():
            tau[alive[hit]] = (k + 1) * dt
            keep = ~hit
            eta = eta[keep]
            alive = alive[keep]
            if len(alive) == 0:
                break
    return 1.0 - tau


def simulate_eta(sigma: int, dt: float, rng: np.random.Generator) -> float:
    return float(simulate_eta_batch(sigma, dt, 1, rng)[0])


def _check_unit(x):
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) | (x >= 1)):
        raise ParameterError("x must lie in the open interval (0, 1)", "x")
    return x


def density_hitting_time(a: float, x):
    """Density of the time a Brownian bridge from ``a`` to 0 on [0, 1] first hits 0."""
    if a <= 0:
        raise ParameterError("a must be positive", "a")
    x = _check_unit(x)
    log_g = (math.log(a) - 0.5 * np.log(2 * math.pi * x**3 * (1 - x))
             - a * a * (1 - x) / (2 * x))
    out = np.exp(log_g)
    return float(out) if out.ndim == 0 else out


def density_c_limit(sigma: int, x):
    """Limit density of the non-cemetery proportion C/N for even ``sigma``."""
    if sigma < 1 or sigma % 2:
        raise ParameterError(
            f"sigma={sigma} is odd: the non-cemetery proportion tends to 1 in "
            "probability and has no limit density", "sigma")
    x = _check_unit(x)
    out = np.exp(-x / (2 * sigma * (1 - x))) / np.sqrt(2 * sigma * math.pi * x * (1 - x) ** 3)
    return float(out) if out.ndim == 0 else out


def pmf_cyclic_points(N: int, s: int) -> float:
    """P(a uniform random mapping of an N-set has exactly s cyclic points)."""
    if not 1 <= s <= N:
        raise ParameterError(f"s must be in [1, {N}]", "s")
    if N <= 1000:
        p = s / N
        for j in range(1, s):
            p *= 1 - j / N
        return p
    return math.exp(math.log(s / N) + math.fsum(math.log1p(-j / N) for j in range(1, s)))


def _cycle_lengths(succ: np.ndarray) -> list[int]:
    m = len(succ)
    _, offsets, _ = functional_cycles(succ.astype(np.int64), np.zeros(m, dtype=np.int64),
                                      np.ones(m, dtype=np.bool_), 1)
    return sorted(np.diff(offsets).tolist(), reverse=True)


def sample_mapping_cycles(N: int, rng: np.random.Generator) -> list[int]:
    """Cycle lengths (descending) of a uniform random function on {0..N-1}."""
    if N < 1:
        raise ParameterError("N must be >= 1", "N")
    return _cycle_lengths(rng.integers(0, N, size=N))


def sample_permutation_cycles(N: int, rng: np.random.Generator) -> list[int]:
    """Cycle type (descending) of a uniform random permutation of {0..N-1}."""
    if N < 1:
        raise ParameterError("N must be >= 1", "N")
    return _cycle_lengths(rng.permutation(N))


def expanding_weights(sigma: int) -> dict[int, float]:
    return {d: totient(d) / sigma for d in divisors(sigma)}


def sample_expanding(sigma: int, rng: np.random.Generator) -> int:
    w = expanding_weights(sigma)
    ds = list(w)
    return int(ds[rng.choice(len(ds), p=list(w.values()))])


def pmf_K(sigma: int, k: int) -> float:
    """P(first fully expanded cycle has index k): geometric with phi(sigma)/sigma."""
    if k < 1:
        raise ParameterError("k must be >= 1", "k")
    q = totient(sigma) / sigma
    return (1 - q) ** (k - 1) * q


def sample_d_max(N: int, sigma: int, k: int, rng: np.random.Generator) -> int:
    """max(P^(k) * sigma, P^(j) * T'_j for j < k) over a random mapping of size N.

    ``T'_j`` are iid on the proper divisors d of sigma with weight
    phi(d) / (sigma - phi(sigma)); missing cycles count as length 0.
    """
    if k < 1:
        raise ParameterError("k must be >= 1", "k")
    lengths = sample_mapping_cycles(N, rng)
    lengths = lengths[:k] + [0] * max(0, k - len(lengths))
    proper = [d for d in divisors(sigma) if d < sigma]
    best = lengths[k - 1] * sigma
    if k > 1 and proper:
        w = np.array([totient(d) for d in proper], dtype=float)
        t = rng.choice(proper, size=k - 1, p=w / w.sum())
        best = max(best, max(lengths[j] * int(t[j]) for j in range(k - 1)))
    return int(best)
