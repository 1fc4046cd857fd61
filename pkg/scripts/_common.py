import argparse
import json

from cadec.harness import ExperimentSpec, run_experiment


def run(description, default_out, **spec):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out", default=default_out)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=spec.pop("seed"))
    a = p.parse_args()
    st = run_experiment(ExperimentSpec(seed=a.seed, workers=a.workers, output_dir=a.out, **spec))
    keep = ("points", "ks_statistic", "ks_pvalue", "slope", "r_squared", "tests", "notes")
    print(json.dumps({k: st.to_json()[k] for k in keep}, indent=2, sort_keys=True))
    print(f"outputs written to {a.out}")
