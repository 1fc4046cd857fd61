"""C/N for sigma > r (n = 50, r = 2, 1000 rules), where the limit law is only conjectured."""
import sys

from _common import run

sigma = int(sys.argv.pop(1)) if len(sys.argv) > 1 and sys.argv[1].isdigit() else 4
run(__doc__, f"results/fig4_sigma{sigma}", kind="cemetery_histogram", n_values=[50],
    sigma=sigma, r=2, samples=1000, seed=12)
