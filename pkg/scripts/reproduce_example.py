"""Worked two-dimensional example: every divergence between one fixed pair.

    python scripts/reproduce_example.py [--eps 1e-12]
"""

import argparse

import numpy as np

from latgauss import NaturalParam, TruncationSpec, divergences as dv, ordinary_from_natural

XI = NaturalParam([-0.2, -0.2], np.diag([0.1, 0.2]))
XI_PRIME = NaturalParam([0.2, 0.2], np.diag([0.15, 0.25]))
EXPECTED = {"bhattacharyya": 1.6259948590224578, "renyi(0.9999999999)": 7.841371347366552}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, default=1e-12)
    args = ap.parse_args()
    spec = TruncationSpec(eps=args.eps)

    for name, xi in (("p", XI), ("q", XI_PRIME)):
        o = ordinary_from_natural(xi, spec=spec)
        print(f"{name}: mu={np.round(o.mu, 6).tolist()} sigma diag={np.round(np.diag(o.sigma), 6).tolist()}")

    rows = {
        "bhattacharyya": dv.bhattacharyya(XI, XI_PRIME, spec=spec),
        "renyi(0.9999999999)": dv.renyi(XI, XI_PRIME, 0.9999999999, spec=spec),
        "kl (bregman)": dv.kl_bregman(XI, XI_PRIME, spec=spec),
        "kl (mixed)": dv.kl_mixed(XI, XI_PRIME, spec=spec),
        "hellinger^2": dv.hellinger_squared(XI, XI_PRIME, spec=spec),
        "cauchy-schwarz": dv.cauchy_schwarz(XI, XI_PRIME, spec=spec),
        "gamma(1.5)": dv.gamma_divergence(XI, XI_PRIME, 1.5, spec=spec),
        "sharma-mittal(0.7,0.4)": dv.sharma_mittal(XI, XI_PRIME, 0.7, 0.4, spec=spec),
    }
    ch = dv.chernoff(XI, XI_PRIME, spec=spec)
    rows["chernoff"] = ch.value

    width = max(map(len, rows))
    for name, value in rows.items():
        ref = EXPECTED.get(name)
        tail = f"  expected {ref!r}  diff {abs(value - ref):.1e}" if ref is not None else ""
        print(f"{name:<{width}}  {value!r}{tail}")
    print(f"chernoff alpha* = {ch.alpha_star:.10f} after {ch.iterations} bisections")


if __name__ == "__main__":
    main()
