"""Brute-force reference sums over a coordinate box.

Deliberately shares no code with the theta engine or the divergence
formulas: every quantity is a plain sum of normalised pmf values over
``{-h, ..., h}^d`` (mapped through the lattice basis when one is given).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, TailTooFat
from .params import MomentParam, NaturalParam


@dataclass(frozen=True)
class BoxSpec:
    half_width: int = 40
    tail_check: float = 1e-13

    def __post_init__(self):
        if self.half_width < 1:
            raise InvalidInput("half_width must be positive")


def _box_points(d, box, lattice):
    h = box.half_width
    axis = np.arange(-h, h + 1, dtype=float)
    grid = np.array(list(itertools.product(axis, repeat=d))) if d > 1 else axis[:, None]
    on_shell = np.any(np.abs(grid) == h, axis=1)
    if lattice is not None:
        grid = grid @ np.asarray(lattice.basis).T + np.asarray(lattice.shift)
    return grid, on_shell


def _exponents(xi, pts):
    quad = np.sum((pts @ xi.xi2) * pts, axis=1)
    return 2 * np.pi * (-0.5 * quad + pts @ xi.xi1)


def _normalized(xi, box, lattice):
    if xi.dim > 3:
        raise InvalidInput("the oracle supports d <= 3")
    pts, shell = _box_points(xi.dim, box, lattice)
    e = _exponents(xi, pts)
    top = e.max()
    u = np.exp(e - top)
    total = u.sum()
    if u[shell].sum() / total > box.tail_check:
        raise TailTooFat("boundary shell carries too much mass; widen the box")
    return pts, u / total, top + np.log(total)


def oracle_theta(xi: NaturalParam, box: BoxSpec = BoxSpec(), lattice=None) -> float:
    return float(np.exp(oracle_log_theta(xi, box, lattice)))


def oracle_log_theta(xi: NaturalParam, box: BoxSpec = BoxSpec(), lattice=None) -> float:
    return float(_normalized(xi, box, lattice)[2])


def oracle_moments(xi: NaturalParam, box: BoxSpec = BoxSpec(), lattice=None) -> MomentParam:
    pts, p, _ = _normalized(xi, box, lattice)
    t1 = 2 * np.pi * (p @ pts)
    t2 = -np.pi * (pts.T * p) @ pts
    return MomentParam(t1, t2)


def oracle_pmf(xi: NaturalParam, box: BoxSpec = BoxSpec(), lattice=None):
    """Box points and their normalised probabilities."""
    pts, p, _ = _normalized(xi, box, lattice)
    return pts, p


def oracle_entropy(xi: NaturalParam, box: BoxSpec = BoxSpec(), lattice=None) -> float:
    _, p, _ = _normalized(xi, box, lattice)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def oracle_cross_entropy(xi, xi_prime, box: BoxSpec = BoxSpec(), lattice=None) -> float:
    _, p, _ = _normalized(xi, box, lattice)
    pts, _, logz = _normalized(xi_prime, box, lattice)
    log_q = _exponents(xi_prime, pts) - logz
    return float(-np.sum(p * log_q))


def _log_pq(xi, xi_prime, box, lattice):
    pts, _, lz = _normalized(xi, box, lattice)
    _, _, lzp = _normalized(xi_prime, box, lattice)
    return _exponents(xi, pts) - lz, _exponents(xi_prime, pts) - lzp


def _chernoff_max(lp, lq):
    # -log sum p^a q^(1-a) is concave in a; golden-section search for its maximum
    def f(a):
        return -np.log(np.sum(np.exp(a * lp + (1 - a) * lq)))

    lo, hi = 0.0, 1.0
    r = (np.sqrt(5) - 1) / 2
    x1, x2 = hi - r * (hi - lo), lo + r * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > 1e-12:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + r * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - r * (hi - lo)
            f1 = f(x1)
    return float(max(f1, f2))


def oracle_divergence(kind, xi, xi_prime, order_params=None, box: BoxSpec = BoxSpec(),
                      lattice=None) -> float:
    """Divergence of ``kind`` from its defining sum over the box.

    ``order_params`` maps ``alpha``/``beta``/``gamma`` to values as needed.
    """
    kind = getattr(kind, "value", kind)
    op = dict(order_params or {})
    if xi.dim > 2:
        raise InvalidInput("oracle divergences support d <= 2")
    lp, lq = _log_pq(xi, xi_prime, box, lattice)
    p, q = np.exp(lp), np.exp(lq)
    a, b, g = op.get("alpha"), op.get("beta"), op.get("gamma")

    def skew(alpha, beta):
        return np.sum(np.exp(alpha * lp + beta * lq))

    if kind == "kl":
        return float(np.sum(p * (lp - lq)))
    if kind == "renyi":
        return float(np.log(skew(a, 1 - a)) / (a - 1))
    if kind == "bhattacharyya":
        return float(-np.log(np.sum(np.sqrt(p * q))))
    if kind == "bhatt_coefficient":
        return float(np.sum(np.sqrt(p * q)))
    if kind == "skewed_bhatt_coefficient":
        return float(skew(a, 1 - a))
    if kind == "jensen_skew":
        return float(-np.log(skew(a, 1 - a)))
    if kind == "i_alpha_beta":
        return float(skew(a, b))
    if kind == "hellinger2":
        return float(0.5 * np.sum((np.sqrt(p) - np.sqrt(q)) ** 2))
    if kind == "amari_alpha":
        return float((1 - skew(a, 1 - a)) / (a * (1 - a)))
    if kind == "sharma_mittal":
        return float((skew(a, 1 - a) ** ((1 - b) / (1 - a)) - 1) / (b - 1))
    if kind == "gamma":
        num = np.log(np.sum(p**g)) + (g - 1) * np.log(np.sum(q**g))
        den = g * np.log(np.sum(p * q ** (g - 1)))
        return float((num - den) / (g * (g - 1)))
    if kind == "hoelder":
        inner = np.log(np.sum(p ** (g / a) * q ** (g / b)))
        norms = np.log(np.sum(p**g)) / a + np.log(np.sum(q**g)) / b
        return float(abs(inner - norms))
    if kind == "cauchy_schwarz":
        return float(-np.log(np.sum(p * q) / np.sqrt(np.sum(p * p) * np.sum(q * q))))
    if kind == "chernoff":
        return _chernoff_max(lp, lq)
    raise InvalidInput(f"unknown divergence kind {kind!r}")
