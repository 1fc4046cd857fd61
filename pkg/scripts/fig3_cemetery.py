"""Non-cemetery proportion C/N at sigma = r = 2, n = 100, 10^4 rules, with the limit density."""
from _common import run

run(__doc__, "results/fig3", kind="cemetery_histogram", n_values=[100], sigma=2, r=2,
    samples=10_000, seed=3)
