"""Real-argument Riemann theta function as the partition function of lattice normals.

    theta(xi) = sum_{l in L Z^d + c} exp(2 pi (-1/2 l' xi2 l + l' xi1))

which equals ``theta_R(-i L'xi1, i L'xi2 L)`` for an unshifted lattice.
The series is truncated to an ellipsoid centred at the mode ``xi2^-1 xi1``
whose radius guarantees a relative error of at most ``spec.eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import (Lattice, TruncationSpec, _mode_geometry, enumerate_z, resolve_lattice,
                      tail_mass_bound, truncation_radius)
from .params import NaturalParam

DEFAULT_SPEC = TruncationSpec()


@dataclass(frozen=True)
class Window:
    """Lattice points of the truncation ellipsoid with their log-summands."""

    points: np.ndarray
    log_terms: np.ndarray
    log_sum: float
    tail_bound: float
    radius: float

    @property
    def weights(self) -> np.ndarray:
        """Probabilities of the window points (sum to one)."""
        return np.exp(self.log_terms - self.log_sum)

    def __len__(self):
        return len(self.log_terms)


@dataclass(frozen=True)
class ThetaResult:
    value: float
    log_value: float
    grad_xi1: np.ndarray
    grad_xi2: np.ndarray
    tail_bound: float
    points_used: int
    radius: float
    grad_log_xi1: np.ndarray
    grad_log_xi2: np.ndarray


def log_terms(xi: NaturalParam, points: np.ndarray) -> np.ndarray:
    quad = np.einsum("ni,ij,nj->n", points, xi.xi2, points)
    return 2 * np.pi * (-0.5 * quad + points @ xi.xi1)


def _logsumexp(x: np.ndarray) -> float:
    m = float(np.max(x))
    return m + math.log(float(np.sum(np.exp(x - m))))


def theta_window(xi: NaturalParam, lattice: Lattice | None = None,
                 spec: TruncationSpec = DEFAULT_SPEC) -> Window:
    lattice = resolve_lattice(lattice, xi.dim)
    radius = truncation_radius(xi.xi2, xi.xi1, spec.eps, lattice, spec.max_radius)
    gram, mode, center_z = _mode_geometry(xi.xi2, xi.xi1, lattice)
    z = enumerate_z(gram, center_z, radius, spec.max_points)
    points = lattice.points(z)
    terms = log_terms(xi, points)
    log_sum = _logsumexp(terms)
    # tail bound is in units of the continuous peak exp(pi m' xi2 m)
    log_peak = math.pi * float(mode @ xi.xi1)
    tail = tail_mass_bound(gram, radius) * math.exp(min(log_peak - log_sum, 700.0))
    return Window(points, terms, log_sum, tail, radius)


def theta(xi: NaturalParam, lattice: Lattice | None = None,
          spec: TruncationSpec = DEFAULT_SPEC) -> ThetaResult:
    w = theta_window(xi, lattice, spec)
    p = w.weights
    g1 = 2 * np.pi * (p @ w.points)
    g2 = -np.pi * np.einsum("n,ni,nj->ij", p, w.points, w.points)
    value = math.exp(w.log_sum) if w.log_sum < 709 else math.inf
    return ThetaResult(
        value=value,
        log_value=w.log_sum,
        grad_xi1=value * g1,
        grad_xi2=value * g2,
        tail_bound=w.tail_bound,
        points_used=len(w),
        radius=w.radius,
        grad_log_xi1=g1,
        grad_log_xi2=g2,
    )


def log_theta(xi: NaturalParam, lattice: Lattice | None = None,
              spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """Cumulant function ``F(xi) = log theta(xi)``."""
    return theta_window(xi, lattice, spec).log_sum
