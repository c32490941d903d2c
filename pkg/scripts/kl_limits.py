"""How fast do the order-indexed divergences approach KL?

For random pairs, prints the relative gap |D - KL| / (1 + KL) of Renyi at
1 - d, gamma at 1 + d and Sharma-Mittal at (1 - d, 1 - d) for several d.
The Sharma-Mittal gap has an intrinsic part d KL^2 / 2, printed alongside.

    python scripts/kl_limits.py --pairs 20 --seed 5
"""

import argparse

import numpy as np

from latgauss import NaturalParam, gamma_divergence, kl_bregman, renyi, sharma_mittal


def random_natural(rng, d, eig=(0.05, 2.0), lin=1.0):
    q, _ = np.linalg.qr(rng.normal(size=(d, d)))
    b = q @ np.diag(rng.uniform(*eig, size=d)) @ q.T
    return NaturalParam(rng.uniform(-lin, lin, size=d), 0.5 * (b + b.T))


def main():
    ap = argparse.ArgumentParser(description="relative gaps of divergence limits to KL")
    ap.add_argument("--pairs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--deltas", type=float, nargs="+", default=[1e-3, 1e-4, 1e-5, 1e-6])
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    pairs = []
    for _ in range(args.pairs):
        d = int(rng.integers(1, 3))
        pairs.append((random_natural(rng, d), random_natural(rng, d)))
    kls = np.array([kl_bregman(a, b) for a, b in pairs])
    print(f"{args.pairs} pairs, KL from {kls.min():.3g} to {kls.max():.3g}")
    print(f"{'delta':>8} {'renyi':>10} {'gamma':>10} {'sharma-m':>10} {'d*KL^2/2':>10}   (worst over pairs)")
    for delta in args.deltas:
        worst = np.zeros(4)
        for (a, b), kl in zip(pairs, kls):
            gaps = [renyi(a, b, 1 - delta), gamma_divergence(a, b, 1 + delta),
                    sharma_mittal(a, b, 1 - delta, 1 - delta)]
            rel = [abs(g - kl) / (1 + kl) for g in gaps] + [delta * kl * kl / 2 / (1 + kl)]
            worst = np.maximum(worst, rel)
        print(f"{delta:8.0e} " + " ".join(f"{w:10.2e}" for w in worst))


if __name__ == "__main__":
    main()
