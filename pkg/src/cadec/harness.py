"""Declarative Monte Carlo experiments and their file outputs.

Randomness for sample ``i`` comes from ``SeedSequence(seed, spawn_key=(tag, n, i))``,
so results do not depend on how samples are split between workers.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, interpolate, stats

from . import plots
from .ca import LazyRule
from .dec import build_dec, find_cycles, longest_period
from .errors import ParameterError
from .necklace import ENUMERATION_CAP
from .stochastic import (density_c_limit, density_hitting_time, expanding_weights,
                         pmf_cyclic_points, sample_c_algorithm1, sample_mapping_cycles,
                         simulate_eta_batch)

KINDS = ("cemetery_histogram", "longest_period_scaling", "algo1_vs_dec",
         "expanding_law", "mapping_stats", "eta_vs_density")
ENUMERATING = {"cemetery_histogram", "longest_period_scaling", "algo1_vs_dec", "expanding_law"}
ETA_CHUNK = 500

# stream tags; distinct sources never share a SeedSequence
_TAG_RULE, _TAG_ALGO1, _TAG_MAP, _TAG_ETA = 0, 1, 2, 3


@dataclass
class ExperimentSpec:
    kind: str
    n_values: list[int]
    sigma: int
    r: int
    samples: int
    seed: int
    workers: int = 1
    output_dir: str | None = None
    bins: int = 50
    dt: float = 1e-4

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ParameterError(f"unknown kind {self.kind!r}; expected one of {KINDS}", "kind")
        if self.samples < 1:
            raise ParameterError("samples must be >= 1", "samples")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1", "workers")
        if self.sigma < 1:
            raise ParameterError("sigma must be >= 1", "sigma")
        if self.r < 1:
            raise ParameterError("r must be >= 1", "r")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ParameterError("n_values must be a nonempty list of positive integers", "n")
        if not 0 <= self.seed < 2**64:
            raise ParameterError("seed must be an unsigned 64-bit integer", "seed")
        if self.bins < 1:
            raise ParameterError("bins must be >= 1", "bins")
        if self.kind in ENUMERATING:
            for n in self.n_values:
                if n**self.sigma > ENUMERATION_CAP:
                    raise ParameterError(
                        f"n**sigma = {n}**{self.sigma} exceeds enumeration cap {ENUMERATION_CAP}", "n")
        if self.kind == "eta_vs_density" and not 0 < self.dt <= 1e-3:
            raise ParameterError("dt must be in (0, 1e-3]", "dt")


@dataclass
class SummaryStats:
    kind: str
    spec: dict
    points: list[dict]
    histogram: dict | None = None
    ks_statistic: float | None = None
    ks_pvalue: float | None = None
    reference: str | None = None
    slope: float | None = None
    intercept: float | None = None
    r_squared: float | None = None
    tests: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("rows")
        return d


# ---------------------------------------------------------------- streams

def sample_stream(seed: int, tag: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(tag, *key))


def sample_rng(seed: int, tag: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(sample_stream(seed, tag, *key))


def rule_seed(seed: int, n: int, index: int) -> int:
    return int(sample_stream(seed, _TAG_RULE, n, index).generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------- statistics

def ks_statistic(samples: Sequence[float], cdf: Callable) -> float:
    """Sup distance between the empirical CDF of ``samples`` and ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float))
    m = len(x)
    if m == 0:
        raise ParameterError("ks_statistic needs at least one sample", "samples")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - f), np.max(f - (i - 1) / m), 0.0))


def loglog_slope(points: Sequence[tuple[float, float]]) -> tuple[float, float, float]:
    """OLS fit of log(mean) on log(n): (slope, intercept, R^2)."""
    if len(points) < 3:
        raise ParameterError("loglog_slope needs at least 3 points", "points")
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ParameterError("loglog_slope needs positive coordinates", "points")
    fit = stats.linregress(np.log(xs), np.log(ys))
    return float(fit.slope), float(fit.intercept), float(fit.rvalue**2)


class ReferenceCDF:
    """CDF of a density on (0, 1) from per-cell adaptive quadrature on a fixed grid.

    Grid points are uniform in ``u = sqrt(x)``, where the CDF is smooth even
    for densities with an inverse square-root singularity at 0; a monotone
    cubic (PCHIP) in ``u`` interpolates between them.
    """

    def __init__(self, density: Callable[[float], float], grid: int = 4096,
                 tol: float = 1e-9):
        us = np.linspace(0.0, 1.0, grid + 1)
        xs = us**2
        cells = [integrate.quad(density, a, b, epsabs=tol * 1e-3, epsrel=1e-12, limit=200)[0]
                 for a, b in zip(xs[:-1], xs[1:])]
        cum = np.concatenate([[0.0], np.cumsum(cells)])
        self.total = float(cum[-1])
        self._interp = interpolate.PchipInterpolator(us, cum)

    def __call__(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return np.clip(self._interp(np.sqrt(x)), 0.0, 1.0)


@lru_cache(maxsize=16)
def reference_cdf(kind: str, param: float) -> ReferenceCDF:
    if kind == "c-limit":
        return ReferenceCDF(lambda x: density_c_limit(int(param), x))
    if kind == "hitting":
        return ReferenceCDF(lambda x: density_hitting_time(param, x))
    raise ParameterError(f"unknown reference {kind!r}", "kind")


def unit_histogram(values: Sequence[float], bins: int) -> dict:
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins, range=(0.0, 1.0))
    total = counts.sum()
    masses = counts / total if total else counts.astype(float)
    widths = np.diff(edges)
    return {"edges": edges.tolist(), "masses": masses.tolist(),
            "densities": (masses / widths).tolist()}


def chi_square(observed: dict[int, int], probs: dict[int, float], min_expected: float = 5.0) -> dict:
    """Pearson chi-square; adjacent categories are pooled until expected >= min_expected."""
    keys = sorted(probs)
    total = sum(observed.values())
    pooled_o, pooled_e = [], []
    acc_o = acc_e = 0.0
    for k in keys:
        acc_o += observed.get(k, 0)
        acc_e += probs[k] * total
        if acc_e >= min_expected:
            pooled_o.append(acc_o)
            pooled_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if pooled_e:
            pooled_o[-1] += acc_o
            pooled_e[-1] += acc_e
        else:
            pooled_o.append(acc_o)
            pooled_e.append(acc_e)
    o = np.array(pooled_o)
    e = np.array(pooled_e)
    e = e * o.sum() / e.sum()
    res = stats.chisquare(o, e)
    return {"statistic": float(res.statistic), "pvalue": float(res.pvalue),
            "categories": len(o), "count": int(total)}


def _point(values: Sequence[float], n: int | None = None) -> dict:
    v = np.asarray(values, dtype=float)
    d = {"count": int(len(v)), "mean": float(v.mean()),
         "variance": float(v.var(ddof=1)) if len(v) > 1 else 0.0}
    if n is not None:
        d = {"n": int(n), **d}
    return d


# ---------------------------------------------------------------- per-sample work

def _dec_for(n, sigma, r, seed, index):
    return build_dec(LazyRule(n, r, rule_seed(seed, n, index)), sigma)


def _task_cn(args):
    n, sigma, r, seed, index = args
    g = _dec_for(n, sigma, r, seed, index)
    return g.n_noncemetery / g.vs.n_total


def _task_x(args):
    n, sigma, r, seed, index = args
    return longest_period(_dec_for(n, sigma, r, seed, index))


def _task_algo1(args):
    n, sigma, seed, index = args
    c, total = sample_c_algorithm1(n, sigma, sample_rng(seed, _TAG_ALGO1, n, index))
    return c / total


def _task_expanding(args):
    n, sigma, r, seed, index = args
    return [c.expanding for c in find_cycles(_dec_for(n, sigma, r, seed, index))]


def _task_mapping(args):
    N, seed, index = args
    lengths = sample_mapping_cycles(N, sample_rng(seed, _TAG_MAP, N, index))
    return sum(lengths), lengths[0]


def _task_eta(args):
    sigma, dt, size, seed, chunk = args
    return simulate_eta_batch(sigma, dt, size, sample_rng(seed, _TAG_ETA, chunk)).tolist()


def _run_tasks(func, tasks: list, workers: int) -> list:
    if workers == 1 or len(tasks) < 2:
        return [func(t) for t in tasks]
    chunk = max(1, len(tasks) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=chunk))


def _generate_rows(spec: ExperimentSpec) -> list[dict]:
    s, r, seed, m = spec.sigma, spec.r, spec.seed, spec.samples
    kind = spec.kind
    if kind == "cemetery_histogram":
        n = spec.n_values[0]
        vals = _run_tasks(_task_cn, [(n, s, r, seed, i) for i in range(m)], spec.workers)
        return [{"sample_index": i, "value": v} for i, v in enumerate(vals)]
    if kind == "longest_period_scaling":
        rows = []
        for n in spec.n_values:
            vals = _run_tasks(_task_x, [(n, s, r, seed, i) for i in range(m)], spec.workers)
            rows += [{"sample_index": i, "value": v, "n": n} for i, v in enumerate(vals)]
        return rows
    if kind == "algo1_vs_dec":
        n = spec.n_values[0]
        a = _run_tasks(_task_algo1, [(n, s, seed, i) for i in range(m)], spec.workers)
        d = _run_tasks(_task_cn, [(n, s, r, seed, i) for i in range(m)], spec.workers)
        return ([{"sample_index": i, "value": v, "source": "algo1"} for i, v in enumerate(a)]
                + [{"sample_index": i, "value": v, "source": "dec"} for i, v in enumerate(d)])
    if kind == "expanding_law":
        n = spec.n_values[0]
        per_rule = _run_tasks(_task_expanding, [(n, s, r, seed, i) for i in range(m)], spec.workers)
        return [{"sample_index": i, "value": d} for i, ds in enumerate(per_rule) for d in ds]
    if kind == "mapping_stats":
        N = spec.n_values[0]
        res = _run_tasks(_task_mapping, [(N, seed, i) for i in range(m)], spec.workers)
        return [{"sample_index": i, "value": cyc, "longest": top}
                for i, (cyc, top) in enumerate(res)]
    if kind == "eta_vs_density":
        tasks = [(s, spec.dt, min(ETA_CHUNK, m - c * ETA_CHUNK), seed, c)
                 for c in range(math.ceil(m / ETA_CHUNK))]
        vals = [v for part in _run_tasks(_task_eta, tasks, spec.workers) for v in part]
        return [{"sample_index": i, "value": v} for i, v in enumerate(vals)]
    raise ParameterError(f"unknown kind {kind!r}", "kind")


# ---------------------------------------------------------------- summaries

def summarize(spec: ExperimentSpec, rows: list[dict]) -> SummaryStats:
    """Aggregate raw rows into SummaryStats (also used to re-derive from CSV)."""
    kind, s, r = spec.kind, spec.sigma, spec.r
    sd = asdict(spec)
    sd.pop("output_dir")
    sd.pop("workers")
    st = SummaryStats(kind=kind, spec=sd, points=[], rows=rows)
    values = [float(row["value"]) for row in rows]

    if kind in ("cemetery_histogram", "eta_vs_density"):
        st.points = [_point(values, spec.n_values[0] if kind == "cemetery_histogram" else None)]
        st.histogram = unit_histogram(values, spec.bins)
        if s % 2 == 0 and (s <= r or kind == "eta_vs_density"):
            st.reference = f"c-limit(sigma={s})"
            st.ks_statistic = ks_statistic(values, reference_cdf("c-limit", s))
        elif s % 2:
            st.notes.append("odd sigma: the non-cemetery proportion tends to 1; no limit density")
        if kind == "cemetery_histogram" and s > r:
            st.notes.append("sigma > r: arcs are not independent; conjectured bimodal limit for "
                            "even sigma, limit 1 for odd sigma (empirical only)")

    elif kind == "longest_period_scaling":
        for n in spec.n_values:
            st.points.append(_point([float(row["value"]) for row in rows if int(row["n"]) == n], n))
        st.notes.append("mean X includes rules with X = 0")
        pts = [(p["n"], p["mean"]) for p in st.points]
        if len(pts) >= 3 and all(m > 0 for _, m in pts):
            st.slope, st.intercept, st.r_squared = loglog_slope(pts)
            st.tests["expected_slope"] = s / 2
        if s > r:
            st.notes.append("sigma > r: n^(sigma/2) scaling is conjectural here")

    elif kind == "algo1_vs_dec":
        a = [float(row["value"]) for row in rows if row["source"] == "algo1"]
        d = [float(row["value"]) for row in rows if row["source"] == "dec"]
        st.points = [{"source": "algo1", **_point(a, spec.n_values[0])},
                     {"source": "dec", **_point(d, spec.n_values[0])}]
        res = stats.ks_2samp(a, d)
        st.ks_statistic, st.ks_pvalue = float(res.statistic), float(res.pvalue)
        st.reference = "two-sample: algo1 vs dec"
        st.histogram = unit_histogram(d, spec.bins)
        st.histogram["overlay_densities"] = unit_histogram(a, spec.bins)["densities"]
        if s > r:
            st.notes.append("sigma > r: Algorithm 1 assumes independent arcs; mismatch is expected")

    elif kind == "expanding_law":
        counts: dict[int, int] = {}
        for v in values:
            counts[int(v)] = counts.get(int(v), 0) + 1
        weights = expanding_weights(s)
        st.points = [_point(values, spec.n_values[0])] if values else []
        st.histogram = {"categories": sorted(weights),
                        "frequencies": [counts.get(d, 0) / max(len(values), 1) for d in sorted(weights)],
                        "expected": [weights[d] for d in sorted(weights)]}
        if values:
            st.tests["chi_square"] = chi_square(counts, weights)
        if s > r:
            st.notes.append("sigma > r: independence of expanding numbers is not guaranteed")

    elif kind == "mapping_stats":
        N = spec.n_values[0]
        counts = {}
        for v in values:
            counts[int(v)] = counts.get(int(v), 0) + 1
        pmf = {k: pmf_cyclic_points(N, k) for k in range(1, N + 1)}
        longest = [float(row["longest"]) for row in rows]
        st.points = [{"statistic": "cyclic_points", **_point(values, N)},
                     {"statistic": "longest_cycle", **_point(longest, N)}]
        st.tests["chi_square"] = chi_square(counts, pmf)
        edges = np.arange(0.5, N + 1.5)
        c, _ = np.histogram(values, bins=edges)
        st.histogram = {"edges": edges.tolist(), "masses": (c / c.sum()).tolist(),
                        "densities": (c / c.sum()).tolist()}
    return st


def run_experiment(spec: ExperimentSpec) -> SummaryStats:
    spec.validate()
    st = summarize(spec, _generate_rows(spec))
    if spec.output_dir is not None:
        emit_outputs(st, spec.output_dir)
    return st


# ---------------------------------------------------------------- outputs

def _fmt(v):
    return repr(float(v)) if isinstance(v, float) else str(v)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        buf.write("sample_index,value\n")
        return buf.getvalue()
    cols = list(rows[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in cols])
    return buf.getvalue()


def read_rows(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def spec_from_summary(summary: dict, output_dir=None) -> ExperimentSpec:
    return ExperimentSpec(**summary["spec"], output_dir=output_dir)


def _plot(st: SummaryStats) -> str:
    kind = st.kind
    spec = st.spec
    title = f"{kind} (sigma={spec['sigma']}, r={spec['r']}, n={spec['n_values'][0] if len(spec['n_values']) == 1 else 'range'})"
    if kind == "longest_period_scaling":
        return plots.loglog_svg([p["n"] for p in st.points], [p["mean"] for p in st.points],
                                st.slope, st.intercept, title=title, ylabel="log mean X")
    if kind == "expanding_law":
        cats = st.histogram["categories"]
        edges = [i + 0.5 for i in range(len(cats) + 1)]
        return plots.histogram_svg(edges, st.histogram["frequencies"], title=title,
                                   xlabel="divisor index (" + ",".join(map(str, cats)) + ")",
                                   ylabel="frequency", overlay=st.histogram["expected"])
    ref = None
    if st.reference and st.reference.startswith("c-limit"):
        s = spec["sigma"]
        ref = lambda x: density_c_limit(s, x)
    if kind == "mapping_stats":
        N = spec["n_values"][0]
        ref = lambda x: pmf_cyclic_points(N, int(round(x))) if 1 <= round(x) <= N else 0.0
        return plots.histogram_svg(st.histogram["edges"], st.histogram["densities"], title=title,
                                   xlabel="cyclic points", ylabel="probability", reference=ref)
    return plots.histogram_svg(st.histogram["edges"], st.histogram["densities"], title=title,
                               xlabel="C/N" if kind != "eta_vs_density" else "1 - tau",
                               reference=ref, overlay=st.histogram.get("overlay_densities"))


def emit_outputs(stats_: SummaryStats, out_dir: str | Path) -> dict[str, Path]:
    """Write raw_samples.csv, summary.json and plot.svg into ``out_dir``."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = {"csv": out / "raw_samples.csv", "json": out / "summary.json",
                 "svg": out / "plot.svg"}
        paths["csv"].write_text(rows_to_csv(stats_.rows), encoding="utf-8", newline="\n")
        paths["json"].write_text(json.dumps(stats_.to_json(), indent=2, sort_keys=True) + "\n",
                                 encoding="utf-8", newline="\n")
        paths["svg"].write_text(_plot(stats_), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write outputs to {out}: {exc}") from exc
    return paths
