"""Samplers for lattice normal distributions."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import AcceptanceStall, InvalidInput
from .family import mle, moments_from_natural
from .lattice import Lattice, TruncationSpec
from .params import MomentParam, NaturalParam, as_matrix, as_vector, check_spd
from .theta import DEFAULT_SPEC, theta_window


class SampleMethod(str, enum.Enum):
    EXACT_EPS = "exact"
    H1_ROUND = "h1"
    H2_REJECT = "h2"


@dataclass(frozen=True)
class SampleBatch:
    points: np.ndarray
    method: SampleMethod
    accept_rate: float = 1.0

    def __len__(self):
        return len(self.points)


def make_rng(rng=None) -> np.random.Generator:
    """PCG64 generator from a seed, or pass an existing generator through."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.Generator(np.random.PCG64(0 if rng is None else int(rng)))


def _check_n(n):
    if int(n) < 1:
        raise InvalidInput("n must be at least 1")
    return int(n)


def sample_exact_eps(xi: NaturalParam, n: int, eps: float = 1e-12, rng=None,
                     lattice: Lattice | None = None, max_points: int = 10**8) -> SampleBatch:
    """Categorical sampling on the truncation window holding ``1 - eps`` of the mass."""
    n = _check_n(n)
    spec = TruncationSpec(eps=eps, max_points=max_points)
    w = theta_window(xi, lattice, spec)
    cdf = np.cumsum(w.weights)
    cdf /= cdf[-1]
    u = make_rng(rng).random(n)
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)
    return SampleBatch(w.points[idx], SampleMethod.EXACT_EPS)


def sample_h1(mu, sigma, n: int, rng=None) -> SampleBatch:
    """Round draws of ``N(mu, sigma)`` to the nearest point of ``Z^d``.

    Coordinate-wise rounding is the l1-nearest integer point; halves go to
    the even neighbour.
    """
    n = _check_n(n)
    mu = as_vector(mu, "mu")
    sigma = check_spd(as_matrix(sigma, "sigma"), "sigma", tol=1e-9)
    x = make_rng(rng).multivariate_normal(mu, sigma, size=n, method="cholesky")
    return SampleBatch(round_to_integer_lattice(x), SampleMethod.H1_ROUND)


def round_to_integer_lattice(x) -> np.ndarray:
    return np.rint(np.asarray(x, dtype=float))


def sample_h2(xi: NaturalParam, n: int, rng=None, lattice: Lattice | None = None,
              spec: TruncationSpec = DEFAULT_SPEC, max_proposals_factor: int = 10**4) -> SampleBatch:
    """Acceptance-rejection with uniform proposals on the theta ellipsoid.

    A proposal ``l`` is kept with probability ``p~(l) / max p~`` over the
    window, so accepted points follow the pmf restricted to the window.
    """
    n = _check_n(n)
    gen = make_rng(rng)
    w = theta_window(xi, lattice, spec)
    accept_p = np.exp(w.log_terms - np.max(w.log_terms))
    limit = max_proposals_factor * n
    chunk = max(1024, int(2 * n / max(accept_p.mean(), 1e-6)))
    kept, proposed, accepted = [], 0, 0
    while accepted < n:
        if proposed >= limit:
            raise AcceptanceStall(f"only {accepted} of {n} accepted in {proposed} proposals")
        m = min(chunk, limit - proposed)
        idx = gen.integers(0, len(w), size=m)
        ok = gen.random(m) < accept_p[idx]
        good = idx[ok]
        if accepted + len(good) >= n:
            # count proposals only up to the n-th acceptance
            last = np.flatnonzero(ok)[n - accepted - 1]
            proposed += last + 1
            good = good[: n - accepted]
        else:
            proposed += m
        kept.append(good)
        accepted += len(good)
    idx = np.concatenate(kept)
    return SampleBatch(w.points[idx], SampleMethod.H2_REJECT, accepted / proposed)


def sample(xi: NaturalParam, n: int, method="exact", rng=None, lattice: Lattice | None = None,
           spec: TruncationSpec = DEFAULT_SPEC, mu=None, sigma=None) -> SampleBatch:
    method = SampleMethod(method)
    if method is SampleMethod.EXACT_EPS:
        return sample_exact_eps(xi, n, spec.eps, rng, lattice, spec.max_points)
    if method is SampleMethod.H2_REJECT:
        return sample_h2(xi, n, rng, lattice, spec)
    if lattice is not None and not lattice.is_integer:
        raise InvalidInput("H1 rounding is defined on the integer lattice only")
    if mu is None or sigma is None:
        ordinary = moments_from_natural(xi, lattice, spec).ordinary()
        mu, sigma = ordinary.mu, ordinary.sigma
    return sample_h1(mu, sigma, n, rng)


def empirical_moments(batch: SampleBatch) -> MomentParam:
    """``(1/m) sum t(x_i)`` over the batch."""
    return mle(batch.points)
