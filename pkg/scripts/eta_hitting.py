"""Hitting times of the reflected SDE (sigma = 2, dt = 1e-4) against the closed-form density."""
from _common import run

run(__doc__, "results/eta", kind="eta_vs_density", n_values=[1], sigma=2, r=2,
    samples=10_000, seed=8, dt=1e-4)
