"""Schedule adaptation on the bimodal Gaussian target.

Runs equi-acceptance tuning rounds with a doubling iteration budget and
reports the final schedule, per-pair rejection rates, and barrier estimate.
"""

import argparse
import json

import numpy as np

from ptlab.experiments import bimodal_gcb_estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--chains", type=int, default=13)
    ap.add_argument("--iters", type=int, default=256)
    ap.add_argument("--replicas", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    res = bimodal_gcb_estimate(n=args.chains - 1, n_iters=args.iters,
                               n_replicas=args.replicas, seed=args.seed)
    rej = np.asarray(res["rejection_rates"])
    print(json.dumps({
        "lambda_hat": res["lambda_hat"],
        "schedule": list(res["schedule"]),
        "rejection_rates": list(rej),
        "equi_acceptance_spread": float(rej.max() - rej.min()),
    }, indent=2))


if __name__ == "__main__":
    main()
