"""Cyclic-point counts of random mappings on N = 100 points against the exact law."""
from _common import run

run(__doc__, "results/mapping", kind="mapping_stats", n_values=[100], sigma=1, r=1,
    samples=100_000, seed=11)
