"""Finite-chain hitting tails against their continuum limits.

Non-reversible tails at floor(tN) steps converge to the persistent-walk
survival; reversible tails at floor(tN^2) steps converge to the reflected
Brownian series.  Prints the sup-differences per chain count.
"""

import argparse
import json

from ptlab.experiments import finite_vs_infinite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=float, default=4.0)
    ap.add_argument("--n-values", default="10,30,100")
    ap.add_argument("--replicas", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ns = tuple(int(x) for x in args.n_values.split(","))
    res = finite_vs_infinite(lam=args.lam, n_values=ns,
                             n_rep=args.replicas, seed=args.seed)
    out = {k: v for k, v in res.items() if k.endswith(tuple(
        f"N{n}" for n in ns))}
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
