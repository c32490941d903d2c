"""Lattices and enumeration of lattice points inside ellipsoids."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, PointBudgetExceeded, RadiusCapExceeded
from .params import as_matrix, as_vector, check_spd

DEFAULT_EPS = 1e-12
DEFAULT_MAX_RADIUS = 200.0
DEFAULT_MAX_POINTS = 10**8


@dataclass(frozen=True)
class Lattice:
    """The point set ``{basis @ z + shift : z in Z^d}``."""

    basis: np.ndarray
    shift: np.ndarray

    def __post_init__(self):
        basis = as_matrix(self.basis, "basis")
        shift = as_vector(self.shift, "shift")
        if shift.shape[0] != basis.shape[0]:
            raise InvalidInput("basis and shift dimensions disagree")
        if abs(np.linalg.det(basis)) <= 1e-14 * max(1.0, np.max(np.abs(basis))) ** basis.shape[0]:
            raise InvalidInput("lattice basis is singular")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "shift", shift)

    @classmethod
    def integer(cls, d: int) -> "Lattice":
        return cls(np.eye(d), np.zeros(d))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_integer(self) -> bool:
        return bool(np.array_equal(self.basis, np.eye(self.dim)) and not np.any(self.shift))

    def points(self, z) -> np.ndarray:
        return np.asarray(z, dtype=float) @ self.basis.T + self.shift

    def coordinates(self, points) -> np.ndarray:
        """Real preimages ``z`` of ``points`` (not rounded)."""
        return np.linalg.solve(self.basis, (np.asarray(points, dtype=float) - self.shift).T).T

    def contains(self, points, atol: float = 1e-9) -> np.ndarray:
        z = np.atleast_2d(self.coordinates(points))
        return np.all(np.abs(z - np.rint(z)) <= atol, axis=1)

    def __hash__(self):
        return hash((self.basis.tobytes(), self.shift.tobytes()))

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return np.array_equal(self.basis, other.basis) and np.array_equal(self.shift, other.shift)


@dataclass(frozen=True)
class TruncationSpec:
    eps: float = DEFAULT_EPS
    max_radius: float = DEFAULT_MAX_RADIUS
    max_points: int = DEFAULT_MAX_POINTS

    def __post_init__(self):
        if not self.eps > 0:
            raise InvalidInput("eps must be positive")
        if not self.max_radius > 0:
            raise InvalidInput("max_radius must be positive")
        if self.max_points < 1:
            raise InvalidInput("max_points must be at least 1")


def resolve_lattice(lattice, d: int) -> Lattice:
    if lattice is None:
        return Lattice.integer(d)
    if lattice.dim != d:
        raise InvalidInput(f"lattice has dimension {lattice.dim}, parameters have {d}")
    return lattice


def enumerate_z(gram, center_z, radius: float, max_points: int = DEFAULT_MAX_POINTS) -> np.ndarray:
    """Integer vectors ``z`` with ``(z - c)' G (z - c) <= radius**2``.

    Breadth-first Fincke-Pohst enumeration over the upper Cholesky factor,
    last coordinate first. Rows are returned in lexicographic order.
    """
    gram = np.asarray(gram, dtype=float)
    center_z = np.asarray(center_z, dtype=float)
    d = gram.shape[0]
    u = np.linalg.cholesky(gram).T
    r2 = float(radius) ** 2
    slack = 1e-9 * max(1.0, r2)

    partial = np.zeros((1, 0), dtype=np.int64)
    used = np.zeros(1)
    for i in range(d - 1, -1, -1):
        off = (partial - center_z[i + 1:]) @ u[i, i + 1:]
        rem = np.maximum(r2 + slack - used, 0.0)
        half = np.sqrt(rem) / u[i, i]
        mid = center_z[i] - off / u[i, i]
        lo = np.ceil(mid - half).astype(np.int64)
        hi = np.floor(mid + half).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total > max_points:
            raise PointBudgetExceeded(f"enumeration needs more than {max_points} points")
        owner = np.repeat(np.arange(len(counts)), counts)
        starts = np.cumsum(counts) - counts
        zi = lo[owner] + (np.arange(total) - starts[owner])
        used = used[owner] + (u[i, i] * (zi - center_z[i]) + off[owner]) ** 2
        partial = np.column_stack([zi, partial[owner]])

    y = partial - center_z
    q = np.einsum("ni,ij,nj->n", y, gram, y)
    partial = partial[q <= r2 * (1 + 1e-12)]
    order = np.lexsort(partial.T[::-1])
    return partial[order]


def enumerate_ellipsoid(lattice: Lattice, center, xi2, radius: float,
                        max_points: int = DEFAULT_MAX_POINTS) -> np.ndarray:
    """Lattice points ``l`` with ``(l - center)' xi2 (l - center) <= radius**2``.

    Points are ordered lexicographically by their integer coordinates ``z``
    (``l = L z + c``).
    """
    if not radius > 0:
        raise InvalidInput("radius must be positive")
    xi2 = check_spd(as_matrix(xi2, "xi2"), "xi2")
    center = as_vector(center, "center")
    lattice = resolve_lattice(lattice, xi2.shape[0])
    basis = lattice.basis
    gram = basis.T @ xi2 @ basis
    gram = 0.5 * (gram + gram.T)
    center_z = np.linalg.solve(basis, center - lattice.shift)
    z = enumerate_z(gram, center_z, radius, max_points)
    return lattice.points(z)


def _tail_radius_sq(lam_min: float, d: int, log_target: float) -> float:
    # For q(z) > R^2 and t in (0,1): exp(-pi q) <= exp(-pi t q) exp(-pi (1-t) R^2), and
    # sum_z exp(-pi t lam |z - c|^2) <= (1 + 1/sqrt(t lam))^d.
    t = np.linspace(0.01, 0.99, 99)
    r2 = (d * np.log1p(1.0 / np.sqrt(t * lam_min)) - log_target) / (np.pi * (1.0 - t))
    return float(max(np.min(r2), 0.0))


def tail_mass_bound(gram, radius: float) -> float:
    """Upper bound on ``sum exp(-pi q(z))`` over ``z`` outside the radius."""
    gram = np.asarray(gram, dtype=float)
    lam = float(np.linalg.eigvalsh(gram)[0])
    d = gram.shape[0]
    t = np.linspace(0.01, 0.99, 99)
    log_b = d * np.log1p(1.0 / np.sqrt(t * lam)) - np.pi * (1.0 - t) * radius**2
    return float(np.exp(np.min(log_b)))


def _mode_geometry(xi2, xi1, lattice: Lattice):
    basis = lattice.basis
    gram = basis.T @ xi2 @ basis
    gram = 0.5 * (gram + gram.T)
    mode = np.linalg.solve(xi2, xi1)
    center_z = np.linalg.solve(basis, mode - lattice.shift)
    return gram, mode, center_z


def truncation_radius(xi2, xi1, eps: float = DEFAULT_EPS, lattice: Lattice | None = None,
                      max_radius: float = DEFAULT_MAX_RADIUS) -> float:
    """Ellipsoid radius around the mode ``xi2^-1 xi1`` for relative accuracy ``eps``.

    The omitted terms of the theta series sum to at most ``eps`` times the
    term at the lattice point nearest the mode (in ``z`` coordinates), hence
    at most ``eps`` times the full series.
    """
    if not eps > 0:
        raise InvalidInput("eps must be positive")
    xi2 = check_spd(as_matrix(xi2, "xi2"), "xi2")
    xi1 = as_vector(xi1, "xi1")
    lattice = resolve_lattice(lattice, xi2.shape[0])
    gram, _, center_z = _mode_geometry(xi2, xi1, lattice)
    y = np.rint(center_z) - center_z
    q_near = float(y @ gram @ y)
    lam = float(np.linalg.eigvalsh(gram)[0])
    r2 = _tail_radius_sq(lam, gram.shape[0], math.log(eps) - math.pi * q_near)
    radius = math.sqrt(max(r2, q_near, 1e-12))
    if radius > max_radius:
        raise RadiusCapExceeded(f"radius {radius:.3g} exceeds cap {max_radius}")
    return radius
