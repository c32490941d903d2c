"""Command-line interface: JSON in, JSON out.

Parameter files are JSON objects with ``dim`` and exactly one of

* a natural block: ``xi1`` (vector) and ``xi2`` (row-major matrix),
* a moment block: ``mu`` (vector) and ``sigma`` (row-major matrix),

plus an optional ``lattice`` object ``{"basis": [[...]], "shift": [...]}``.
Sample data files are CSV with a header row ``x1,...,xd``.

Exit status is 0 on success, 2 for invalid input, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import divergences as dv
from . import family, oracle
from .errors import InvalidInput, NumericalError
from .lattice import Lattice, TruncationSpec
from .params import NaturalParam, OrdinaryParam
from .sampling import sample as draw
from .theta import theta

REF_XI = NaturalParam([-0.2, -0.2], np.diag([0.1, 0.2]))
REF_XI_PRIME = NaturalParam([0.2, 0.2], np.diag([0.15, 0.25]))
REF_BHATTACHARYYA = 1.6259948590224578
REF_KL = 7.841371347366552
REF_KL_ALPHA = 0.9999999999


class UsageError(InvalidInput):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(obj, out):
    out.write(json.dumps(_jsonable(obj), allow_nan=True) + "\n")


class ParamFile:
    """A loaded parameter file; moment blocks are converted on demand."""

    def __init__(self, data: dict, source: str = "<dict>"):
        if not isinstance(data, dict):
            raise InvalidInput(f"{source}: parameter file must hold a JSON object")
        has_nat = "xi1" in data or "xi2" in data
        has_mom = "mu" in data or "sigma" in data
        if has_nat == has_mom:
            raise InvalidInput(f"{source}: give exactly one of the natural (xi1, xi2) "
                               "or moment (mu, sigma) blocks")
        self.source = source
        self.lattice = None
        if "lattice" in data:
            lat = data["lattice"]
            try:
                self.lattice = Lattice(lat["basis"], lat.get("shift", [0.0] * len(lat["basis"])))
            except (KeyError, TypeError) as exc:
                raise InvalidInput(f"{source}: malformed lattice block") from exc
        try:
            if has_nat:
                self.natural = NaturalParam(data["xi1"], data["xi2"])
                self.ordinary = None
            else:
                self.ordinary = OrdinaryParam(data["mu"], data["sigma"])
                self.natural = None
        except KeyError as exc:
            raise InvalidInput(f"{source}: missing field {exc}") from exc
        dim = self.natural.dim if has_nat else self.ordinary.mu.shape[0]
        if "dim" in data and int(data["dim"]) != dim:
            raise InvalidInput(f"{source}: dim={data['dim']} disagrees with the blocks ({dim})")
        if self.lattice is not None and self.lattice.dim != dim:
            raise InvalidInput(f"{source}: lattice dimension disagrees with the blocks")
        self.dim = dim

    @classmethod
    def load(cls, path: str) -> "ParamFile":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InvalidInput(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: invalid JSON: {exc}") from exc
        return cls(data, path)

    def xi(self, spec, tol) -> NaturalParam:
        if self.natural is None:
            self.natural = family.natural_from_moments(self.ordinary.to_moment(), self.lattice,
                                                       spec, tol=tol)
        return self.natural

    def echo(self) -> dict:
        out = {"dim": self.dim}
        if self.natural is not None:
            out.update(xi1=self.natural.xi1, xi2=self.natural.xi2)
        else:
            out.update(mu=self.ordinary.mu, sigma=self.ordinary.sigma)
        if self.lattice is not None:
            out["lattice"] = {"basis": self.lattice.basis, "shift": self.lattice.shift}
        return out


def _natural_block(xi: NaturalParam) -> dict:
    return {"dim": xi.dim, "xi1": xi.xi1, "xi2": xi.xi2}


def _spec(args) -> TruncationSpec:
    return TruncationSpec(eps=args.eps)


def _config(args, **extra) -> dict:
    cfg = {"eps": args.eps, "tol": args.tol}
    cfg.update(extra)
    return cfg


def cmd_theta(args):
    pf = ParamFile.load(args.p)
    spec = _spec(args)
    r = theta(pf.xi(spec, args.tol), pf.lattice, spec)
    return {"command": "theta", "value": r.value, "log_value": r.log_value,
            "tail_bound": r.tail_bound, "points_used": r.points_used,
            "accuracy": {"relative_error_bound": r.tail_bound, "radius": r.radius},
            "config": _config(args, p=pf.echo())}


def _parse_point(text: str, dim: int) -> np.ndarray:
    try:
        pt = np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise InvalidInput(f"cannot parse point {text!r}") from exc
    if pt.shape[0] != dim:
        raise InvalidInput(f"point has {pt.shape[0]} coordinates, expected {dim}")
    return pt


def cmd_pmf(args):
    pf = ParamFile.load(args.p)
    spec = _spec(args)
    xi = pf.xi(spec, args.tol)
    pt = _parse_point(args.point, pf.dim)
    lat = pf.lattice or Lattice.integer(pf.dim)
    if not lat.contains(pt[None, :])[0]:
        raise InvalidInput(f"point {args.point} is not on the lattice")
    r = theta(xi, pf.lattice, spec)
    return {"command": "pmf", "pmf": family.pmf(xi, pt, pf.lattice, spec),
            "unnormalized": family.unnormalized_pmf(xi, pt),
            "accuracy": {"relative_error_bound": r.tail_bound},
            "config": _config(args, p=pf.echo(), point=pt)}


def cmd_divergence(args):
    pf, qf = ParamFile.load(args.p), ParamFile.load(args.q)
    if pf.dim != qf.dim:
        raise InvalidInput("parameter files have different dimensions")
    if (pf.lattice or Lattice.integer(pf.dim)) != (qf.lattice or Lattice.integer(qf.dim)):
        raise InvalidInput("parameter files must share the same lattice")
    spec = _spec(args)
    xi, xp = pf.xi(spec, args.tol), qf.xi(spec, args.tol)
    res = dv.divergence(args.kind, xi, xp, args.alpha, args.beta, args.gamma, pf.lattice, spec)
    out = {"command": "divergence", "kind": res.kind.value, "value": res.value,
           "est_abs_error": res.est_abs_error, "order_params": res.order_params,
           "accuracy": {"est_abs_error": res.est_abs_error, "theta_evals": res.theta_evals},
           "config": _config(args, kind=res.kind.value, alpha=args.alpha, beta=args.beta,
                             gamma=args.gamma, p=pf.echo(), q=qf.echo())}
    if args.oracle:
        if xi.dim > 2:
            raise InvalidInput("--oracle supports d <= 2")
        ov = oracle.oracle_divergence(res.kind, xi, xp, res.order_params, lattice=pf.lattice)
        out["oracle_value"] = ov
        out["accuracy"]["oracle_abs_diff"] = abs(ov - res.value)
    return out


def cmd_convert(args):
    pf = ParamFile.load(args.p)
    spec = _spec(args)
    if args.to == "moment":
        if pf.natural is None:
            raise InvalidInput("--to moment needs a natural parameter file")
        eta = family.moments_from_natural(pf.natural, pf.lattice, spec)
        ordinary = eta.ordinary()
        return {"command": "convert", "to": "moment", "dim": pf.dim,
                "mu": ordinary.mu, "sigma": ordinary.sigma,
                "eta1": eta.eta1, "eta2": eta.eta2, "iterations": 0,
                "accuracy": {"relative_error_bound": theta(pf.natural, pf.lattice, spec).tail_bound},
                "config": _config(args, to="moment", p=pf.echo())}
    if pf.ordinary is None:
        raise InvalidInput("--to natural needs a moment (mu, sigma) parameter file")
    eta = pf.ordinary.to_moment()
    xi, info = family.natural_from_moments(eta, pf.lattice, spec, tol=args.tol, full_output=True)
    return {"command": "convert", "to": "natural", **_natural_block(xi),
            "iterations": info.iterations,
            "accuracy": {"moment_residual": info.residual},
            "config": _config(args, to="natural", p=pf.echo())}


def cmd_sample(args):
    pf = ParamFile.load(args.p)
    spec = _spec(args)
    xi = pf.xi(spec, args.tol)
    mu = sigma = None
    if args.method == "h1" and pf.ordinary is not None:
        mu, sigma = pf.ordinary.mu, pf.ordinary.sigma
    batch = draw(xi, args.n, args.method, args.seed, pf.lattice, spec, mu=mu, sigma=sigma)
    if args.csv:
        return batch
    return {"command": "sample", "method": batch.method.value, "points": batch.points,
            "accept_rate": batch.accept_rate,
            "accuracy": {"tv_bound": args.eps if args.method == "exact" else None},
            "config": _config(args, n=args.n, method=args.method, seed=args.seed, p=pf.echo())}


def read_points_csv(path: str) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InvalidInput(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if header != [f"x{i + 1}" for i in range(len(header))]:
        raise InvalidInput(f"{path}: header must be x1,...,xd")
    try:
        pts = np.array([[int(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise InvalidInput(f"{path}: non-integer field") from exc
    if pts.size == 0 or pts.shape[1] != len(header):
        raise InvalidInput(f"{path}: no data rows or ragged rows")
    return pts


def write_points_csv(points: np.ndarray, out) -> None:
    d = points.shape[1]
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"x{i + 1}" for i in range(d)])
    for row in points:
        w.writerow([int(v) if float(v).is_integer() else repr(float(v)) for v in row])


def cmd_mle(args):
    pts = read_points_csv(args.data)
    spec = _spec(args)
    eta = family.mle(pts, strict=True)
    ordinary = eta.ordinary()
    xi, info = family.natural_from_moments(eta, None, spec, tol=args.tol, full_output=True)
    return {"command": "mle", "n": len(pts),
            "moment": {"dim": eta.dim, "eta1": eta.eta1, "eta2": eta.eta2,
                       "mu": ordinary.mu, "sigma": ordinary.sigma},
            "natural": _natural_block(xi), "iterations": info.iterations,
            "accuracy": {"moment_residual": info.residual},
            "config": _config(args, data=args.data)}


def cmd_chernoff(args):
    pf, qf = ParamFile.load(args.p), ParamFile.load(args.q)
    if pf.dim != qf.dim:
        raise InvalidInput("parameter files have different dimensions")
    spec = _spec(args)
    res = dv.chernoff(pf.xi(spec, args.tol), qf.xi(spec, args.tol), args.bisect_tol,
                      pf.lattice, spec)
    return {"command": "chernoff", "value": res.value, "alpha_star": res.alpha_star,
            "iterations": res.iterations,
            "accuracy": {"kl_gap": res.gap},
            "config": _config(args, bisect_tol=args.bisect_tol, p=pf.echo(), q=qf.echo())}


def reproduce(spec: TruncationSpec = TruncationSpec()) -> dict:
    start = time.perf_counter()
    bhatt = dv.bhattacharyya(REF_XI, REF_XI_PRIME, spec=spec)
    kl_proxy = dv.renyi(REF_XI, REF_XI_PRIME, REF_KL_ALPHA, spec=spec)
    kl_b = dv.kl_bregman(REF_XI, REF_XI_PRIME, spec=spec)
    kl_m = dv.kl_mixed(REF_XI, REF_XI_PRIME, spec=spec)
    elapsed = time.perf_counter() - start
    checks = {
        "bhattacharyya": abs(bhatt - REF_BHATTACHARYYA) <= 1e-6,
        "kl": abs(kl_proxy - REF_KL) <= 1e-4,
        "kl_bregman": abs(kl_b - REF_KL) <= 1e-3,
        "kl_mixed": abs(kl_m - REF_KL) <= 1e-3,
    }
    return {"command": "reproduce", "bhattacharyya": bhatt, "kl": kl_proxy,
            "kl_bregman": kl_b, "kl_mixed": kl_m,
            "expected": {"bhattacharyya": REF_BHATTACHARYYA, "kl": REF_KL},
            "checks": checks, "pass": all(checks.values()), "seconds": elapsed,
            "accuracy": {"bhattacharyya_abs_diff": abs(bhatt - REF_BHATTACHARYYA),
                         "kl_abs_diff": abs(kl_proxy - REF_KL)},
            "config": {"eps": spec.eps, "kl_alpha": REF_KL_ALPHA,
                       "p": _natural_block(REF_XI), "q": _natural_block(REF_XI_PRIME)}}


def cmd_reproduce(args):
    return reproduce(_spec(args))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--eps", type=float, default=1e-12, help="relative truncation error")
    common.add_argument("--tol", type=float, default=1e-10, help="Newton moment tolerance")

    parser = _Parser(prog="latgauss", description="Discrete and lattice normal distributions")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("theta", parents=[common])
    p.add_argument("-p", required=True)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("pmf", parents=[common])
    p.add_argument("-p", required=True)
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("divergence", parents=[common])
    p.add_argument("--kind", required=True, type=_kind_name,
                   help=", ".join(k.value for k in dv.DivergenceKind))
    p.add_argument("-p", required=True)
    p.add_argument("-q", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--oracle", action="store_true", help="also report the brute-force value")
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("convert", parents=[common])
    p.add_argument("--to", required=True, choices=["natural", "moment"])
    p.add_argument("-p", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sample", parents=[common])
    p.add_argument("-p", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--method", choices=["exact", "h1", "h2"], default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("mle", parents=[common])
    p.add_argument("--data", required=True)
    p.set_defaults(func=cmd_mle)

    p = sub.add_parser("chernoff", parents=[common])
    p.add_argument("-p", required=True)
    p.add_argument("-q", required=True)
    p.add_argument("--bisect-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_chernoff)

    p = sub.add_parser("reproduce", parents=[common])
    p.set_defaults(func=cmd_reproduce)
    return parser


def _kind_name(text: str) -> str:
    name = text.strip().lower().replace("-", "_")
    aliases = {"hellinger": "hellinger2", "amari": "amari_alpha", "cs": "cauchy_schwarz",
               "holder": "hoelder", "hölder": "hoelder", "bhatt": "bhattacharyya"}
    name = aliases.get(name, name)
    try:
        return dv.DivergenceKind(name).value
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown divergence kind {text!r}") from None


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
    except InvalidInput as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, out)
        print(f"error: {exc}", file=err)
        return 2
    except NumericalError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, out)
        print(f"numerical error: {exc}", file=err)
        return 3
    if hasattr(result, "points") and not isinstance(result, dict):
        buf = io.StringIO()
        write_points_csv(result.points, buf)
        out.write(buf.getvalue())
        return 0
    _emit(result, out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
