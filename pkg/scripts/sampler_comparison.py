"""Compare the epsilon-exact sampler with the rounding (H1) and rejection (H2) heuristics.

For a few parameters, prints the sample mean and covariance error of each
method against the exact moments, in units of the Monte Carlo standard error.
H1 rounds a continuous normal with the same mean and covariance, so its
error does not shrink with n.

    python scripts/sampler_comparison.py -n 200000
"""

import argparse
import time

import numpy as np

from latgauss import NaturalParam, ordinary_from_natural, sample

CASES = {
    "standard": NaturalParam([0.0], [[0.1591549]]),
    "narrow": NaturalParam([0.35], [[0.9]]),
    "2d": NaturalParam([-0.2, -0.2], np.diag([0.1, 0.2])),
}


def main():
    ap = argparse.ArgumentParser(description="sampler moment errors")
    ap.add_argument("-n", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for name, xi in CASES.items():
        exact = ordinary_from_natural(xi)
        se = np.sqrt(np.diag(exact.sigma) / args.n)
        print(f"{name}: mu={np.round(exact.mu, 5).tolist()} var={np.round(np.diag(exact.sigma), 5).tolist()}")
        for method in ("exact", "h1", "h2"):
            t = time.perf_counter()
            batch = sample(xi, args.n, method, rng=args.seed)
            dt = time.perf_counter() - t
            x = batch.points
            z_mu = np.max(np.abs(x.mean(axis=0) - exact.mu) / se)
            var_err = np.max(np.abs(x.var(axis=0) - np.diag(exact.sigma)))
            print(f"  {method:>5}: mean error {z_mu:6.2f} SE  var error {var_err:.4f}  "
                  f"accept {batch.accept_rate:.3f}  {dt:.2f}s")


if __name__ == "__main__":
    main()
