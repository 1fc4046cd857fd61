"""Algorithm 1 samples of C/N against full DECs at n = 30, sigma = r = 2."""
from _common import run

run(__doc__, "results/algo1", kind="algo1_vs_dec", n_values=[30], sigma=2, r=2,
    samples=2000, seed=7)
