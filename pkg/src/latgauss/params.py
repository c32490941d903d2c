"""Parameter types for discrete (lattice) normal distributions.

Three coordinate systems are used:

* natural ``xi = (xi1, xi2)`` with pmf proportional to
  ``exp(2*pi*(-x' xi2 x / 2 + x' xi1))``,
* moment ``eta = (eta1, eta2) = E[t(x)]`` with ``t(x) = (2*pi*x, -pi*x x')``,
* ordinary ``(mu, sigma)``, the mean and covariance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidInput

SYM_TOL = 1e-12


def as_vector(x, name="vector") -> np.ndarray:
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise InvalidInput(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInput(f"{name} has non-finite entries")
    return v


def as_matrix(x, name="matrix") -> np.ndarray:
    m = np.asarray(x, dtype=float)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInput(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput(f"{name} has non-finite entries")
    return m


def is_pd(m: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return False
    return bool(np.linalg.eigvalsh(m)[0] > 0)


def check_spd(m: np.ndarray, name: str, tol: float = SYM_TOL) -> np.ndarray:
    if np.max(np.abs(m - m.T)) > tol * max(1.0, np.max(np.abs(m))):
        raise InvalidInput(f"{name} is not symmetric")
    m = 0.5 * (m + m.T)
    if not is_pd(m):
        raise InvalidInput(f"{name} is not positive definite")
    return m


@dataclass(frozen=True)
class NaturalParam:
    xi1: np.ndarray
    xi2: np.ndarray

    def __post_init__(self):
        xi1 = as_vector(self.xi1, "xi1")
        xi2 = as_matrix(self.xi2, "xi2")
        if xi2.shape[0] != xi1.shape[0]:
            raise InvalidInput("xi1 and xi2 dimensions disagree")
        object.__setattr__(self, "xi1", xi1)
        object.__setattr__(self, "xi2", check_spd(xi2, "xi2"))

    @property
    def dim(self) -> int:
        return self.xi1.shape[0]

    def inner(self, other) -> float:
        """Compound inner product ``a'a2 + tr(B2 B)``; ``other`` may be natural or moment."""
        a2, b2 = _pair(other)
        return float(self.xi1 @ a2 + np.sum(self.xi2 * b2))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.xi1, self.xi2[np.triu_indices(self.dim)]])

    @classmethod
    def from_flat(cls, v, dim: int) -> "NaturalParam":
        return cls(v[:dim], unflatten_sym(v[dim:], dim))

    def __eq__(self, other):
        if not isinstance(other, NaturalParam):
            return NotImplemented
        return np.array_equal(self.xi1, other.xi1) and np.array_equal(self.xi2, other.xi2)

    def __hash__(self):
        return hash((self.xi1.tobytes(), self.xi2.tobytes()))


def _pair(p):
    if isinstance(p, NaturalParam):
        return p.xi1, p.xi2
    if isinstance(p, MomentParam):
        return p.eta1, p.eta2
    a, b = p
    return as_vector(a), as_matrix(b)


def unflatten_sym(v, dim: int) -> np.ndarray:
    m = np.zeros((dim, dim))
    m[np.triu_indices(dim)] = v
    return m + np.triu(m, 1).T


def combine(coefs, params) -> NaturalParam:
    """Linear combination ``sum c_i xi_i``; raises DomainError outside the cone."""
    xi1 = sum(c * p.xi1 for c, p in zip(coefs, params))
    xi2 = sum(c * p.xi2 for c, p in zip(coefs, params))
    xi2 = 0.5 * (xi2 + xi2.T)
    if not is_pd(xi2):
        raise DomainError(f"combination {tuple(coefs)} has a non positive-definite xi2")
    return NaturalParam(xi1, xi2)


@dataclass(frozen=True)
class OrdinaryParam:
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        mu = as_vector(self.mu, "mu")
        sigma = as_matrix(self.sigma, "sigma")
        if sigma.shape[0] != mu.shape[0]:
            raise InvalidInput("mu and sigma dimensions disagree")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", check_spd(sigma, "sigma", tol=1e-9))

    def to_moment(self) -> "MomentParam":
        return MomentParam(2 * np.pi * self.mu, -np.pi * (self.sigma + np.outer(self.mu, self.mu)))


@dataclass(frozen=True)
class MomentParam:
    """Expectation of the sufficient statistic.

    Construction does not require the recovered covariance to be positive
    definite, so that degenerate empirical moments can be represented; call
    :meth:`ordinary` to validate.
    """

    eta1: np.ndarray
    eta2: np.ndarray

    def __post_init__(self):
        eta1 = as_vector(self.eta1, "eta1")
        eta2 = as_matrix(self.eta2, "eta2")
        if eta2.shape[0] != eta1.shape[0]:
            raise InvalidInput("eta1 and eta2 dimensions disagree")
        object.__setattr__(self, "eta1", eta1)
        object.__setattr__(self, "eta2", 0.5 * (eta2 + eta2.T))

    @property
    def dim(self) -> int:
        return self.eta1.shape[0]

    @property
    def mean(self) -> np.ndarray:
        return self.eta1 / (2 * np.pi)

    @property
    def covariance(self) -> np.ndarray:
        m = self.mean
        s = -self.eta2 / np.pi - np.outer(m, m)
        return 0.5 * (s + s.T)

    def ordinary(self) -> OrdinaryParam:
        """Return ``(mu, sigma)``; raises InvalidInput if sigma is not PD."""
        return OrdinaryParam(self.mean, self.covariance)

    def flat(self) -> np.ndarray:
        """Moments of the flat statistic paired with :meth:`NaturalParam.flat`."""
        iu = np.triu_indices(self.dim)
        scale = np.where(iu[0] == iu[1], 1.0, 2.0)
        return np.concatenate([self.eta1, scale * self.eta2[iu]])

    def distance(self, other: "MomentParam") -> float:
        return float(max(np.max(np.abs(self.eta1 - other.eta1)),
                         np.max(np.abs(self.eta2 - other.eta2))))


@dataclass(frozen=True)
class SufficientStat:
    t1: np.ndarray
    t2: np.ndarray

    @classmethod
    def of(cls, x) -> "SufficientStat":
        x = as_vector(x, "x")
        return cls(2 * np.pi * x, -np.pi * np.outer(x, x))

    def point(self) -> np.ndarray:
        return self.t1 / (2 * np.pi)


@dataclass(frozen=True)
class AugmentedNatural:
    """``psi = (F(xi), -flat(xi))`` for pmfs written as ``exp(-sum psi_i t_i)``."""

    psi0: float
    psi_rest: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @classmethod
    def from_natural(cls, xi: NaturalParam, log_normalizer: float) -> "AugmentedNatural":
        return cls(float(log_normalizer), -xi.flat())

    def natural(self, dim: int) -> NaturalParam:
        return NaturalParam.from_flat(-np.asarray(self.psi_rest), dim)

    @property
    def size(self) -> int:
        return 1 + len(self.psi_rest)


def flat_dim(d: int) -> int:
    return d * (d + 3) // 2


def flat_stats(points: np.ndarray) -> np.ndarray:
    """Rows of the flat sufficient statistic, dual to ``NaturalParam.flat``."""
    points = np.asarray(points, dtype=float)
    d = points.shape[1]
    iu = np.triu_indices(d)
    scale = np.where(iu[0] == iu[1], -np.pi, -2 * np.pi)
    quad = points[:, iu[0]] * points[:, iu[1]] * scale
    return np.hstack([2 * np.pi * points, quad])


def standard_natural(d: int = 1) -> NaturalParam:
    """Natural parameter with unit variance per coordinate, to about 1e-7."""
    return NaturalParam(np.zeros(d), 0.1591549 * np.eye(d))
