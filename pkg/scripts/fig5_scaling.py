"""Mean longest period against n on log-log axes (r = 2, n = 5..100)."""
import sys

from _common import run

sigma = int(sys.argv.pop(1)) if len(sys.argv) > 1 and sys.argv[1].isdigit() else 2
run(__doc__, f"results/fig5_sigma{sigma}", kind="longest_period_scaling",
    n_values=list(range(5, 101, 5)), sigma=sigma, r=2, samples=1000, seed=10 + sigma)
