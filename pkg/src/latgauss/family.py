"""Discrete normal distributions as an exponential family.

Conversions between natural, moment and ordinary parameters, pmf
evaluation, entropy, cross-entropy, maximum likelihood and the univariate
Fisher information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSample, DomainExit, InvalidInput, NoConvergence, SingularHessian
from .lattice import Lattice, TruncationSpec
from .params import (MomentParam, NaturalParam, OrdinaryParam, as_matrix, as_vector, check_spd,
                     flat_stats, is_pd, unflatten_sym)
from .theta import DEFAULT_SPEC, Window, log_terms, theta_window

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100
MAX_HALVINGS = 30


def unnormalized_pmf(xi: NaturalParam, point) -> float:
    x = np.atleast_2d(as_vector(point, "point"))
    return float(np.exp(log_terms(xi, x))[0])


def log_pmf(xi: NaturalParam, points, lattice: Lattice | None = None,
            spec: TruncationSpec = DEFAULT_SPEC) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return log_terms(xi, pts) - theta_window(xi, lattice, spec).log_sum


def pmf(xi: NaturalParam, point, lattice: Lattice | None = None,
        spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return float(np.exp(log_pmf(xi, point, lattice, spec))[0])


def _moments_of_window(w: Window) -> MomentParam:
    p = w.weights
    eta1 = 2 * np.pi * (p @ w.points)
    eta2 = -np.pi * np.einsum("n,ni,nj->ij", p, w.points, w.points)
    return MomentParam(eta1, eta2)


def moments_from_natural(xi: NaturalParam, lattice: Lattice | None = None,
                         spec: TruncationSpec = DEFAULT_SPEC) -> MomentParam:
    """``eta = E[t(x)]`` by weighted summation over the truncation window."""
    return _moments_of_window(theta_window(xi, lattice, spec))


def ordinary_from_natural(xi: NaturalParam, lattice: Lattice | None = None,
                          spec: TruncationSpec = DEFAULT_SPEC) -> OrdinaryParam:
    return moments_from_natural(xi, lattice, spec).ordinary()


def continuous_natural_from_moments(mu, sigma):
    """Natural parameters ``(sigma^-1 mu, sigma^-1)`` of the continuous normal."""
    mu = as_vector(mu, "mu")
    sigma = check_spd(as_matrix(sigma, "sigma"), "sigma", tol=1e-9)
    prec = np.linalg.inv(sigma)
    prec = 0.5 * (prec + prec.T)
    return prec @ mu, prec


INIT_VAR_FLOOR = 0.15


def _initial_guess(eta: MomentParam) -> NaturalParam:
    # exp(2 pi (-x'Bx/2 + x'a)) matches the continuous density when (a, B) = rho / (2 pi).
    # Very concentrated laws get a wider start so the first window spans the statistics.
    lam, vec = np.linalg.eigh(eta.covariance)
    sigma = (vec * np.maximum(lam, INIT_VAR_FLOOR)) @ vec.T
    rho1, rho2 = continuous_natural_from_moments(eta.mean, 0.5 * (sigma + sigma.T))
    return NaturalParam(rho1 / (2 * np.pi), rho2 / (2 * np.pi))


@dataclass(frozen=True)
class NewtonInfo:
    iterations: int
    residual: float
    log_normalizer: float


def natural_from_moments(eta: MomentParam, lattice: Lattice | None = None,
                         spec: TruncationSpec = DEFAULT_SPEC, tol: float = DEFAULT_TOL,
                         max_iter: int = DEFAULT_MAX_ITER, init: NaturalParam | None = None,
                         full_output: bool = False):
    """Invert the moment map by Newton iteration on the augmented parameter.

    With ``psi = (F(xi), -flat(xi))`` and ``t~ = (1, t)``, each step solves
    ``H delta = (0, eta - K(psi))`` where ``H = -E[t~ t~']``. The first
    coordinate is then re-pinned to ``F`` of the new iterate. Steps that leave
    the positive-definite cone or increase the residual are halved.
    """
    if not tol > 0:
        raise InvalidInput("tol must be positive")
    try:
        eta.ordinary()
    except InvalidInput as exc:
        raise DegenerateSample(f"moment parameter has no valid covariance: {exc}") from exc
    d = eta.dim
    target = eta.flat()
    xi = init if init is not None else _initial_guess(eta)

    def evaluate(candidate):
        w = theta_window(candidate, lattice, spec)
        stats = flat_stats(w.points)
        return w, stats, _moments_of_window(w).distance(eta)

    w, stats, res = evaluate(xi)
    polished = False
    for it in range(max_iter + 1):
        if res <= tol and (polished or it == max_iter):
            info = NewtonInfo(it, res, w.log_sum)
            return (xi, info) if full_output else xi
        if it == max_iter:
            break
        # one extra step after reaching tol; kept only if it lowers the residual
        polished = res <= tol
        p = w.weights
        aug = np.hstack([np.ones((len(p), 1)), stats])
        hess = -(aug.T * p) @ aug
        rhs = np.concatenate([[0.0], target - p @ stats])
        if not np.all(np.isfinite(hess)) or np.linalg.cond(hess) > 1e14:
            if polished:
                return (xi, NewtonInfo(it, res, w.log_sum)) if full_output else xi
            raise SingularHessian("augmented moment matrix is numerically singular")
        delta_psi = np.linalg.solve(hess, rhs)
        step = -delta_psi[1:]
        base = xi.flat()
        accepted = False
        saw_pd = False
        scale = 1.0
        for _ in range(MAX_HALVINGS + 1):
            cand_flat = base + scale * step
            xi2 = unflatten_sym(cand_flat[d:], d)
            if is_pd(xi2):
                saw_pd = True
                cand = NaturalParam(cand_flat[:d], xi2)
                c_w, c_stats, c_res = evaluate(cand)
                if c_res < res:
                    xi, w, stats, res = cand, c_w, c_stats, c_res
                    accepted = True
                    break
            scale *= 0.5
        if not accepted:
            if polished:
                info = NewtonInfo(it, res, w.log_sum)
                return (xi, info) if full_output else xi
            if not saw_pd:
                raise DomainExit("every damped Newton step left the positive-definite cone")
            raise NoConvergence(f"Newton stalled at residual {res:.3e} after {it} iterations")
    raise NoConvergence(f"no convergence in {max_iter} iterations (residual {res:.3e})")


def entropy(xi: NaturalParam, lattice: Lattice | None = None,
            spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """Shannon entropy ``F(xi) - <xi, eta>``."""
    w = theta_window(xi, lattice, spec)
    return w.log_sum - xi.inner(_moments_of_window(w))


def cross_entropy(xi: NaturalParam, xi_prime: NaturalParam, lattice: Lattice | None = None,
                  spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """``H[p_xi : p_xi']  = F(xi') - <xi', eta(xi)>``."""
    eta = moments_from_natural(xi, lattice, spec)
    return theta_window(xi_prime, lattice, spec).log_sum - xi_prime.inner(eta)


def mle(samples, strict: bool = False) -> MomentParam:
    """Moment estimate ``(1/n) sum t(x_i)``.

    With ``strict`` the recovered covariance must be positive definite, as
    required to convert the estimate to natural coordinates.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or len(x) == 0:
        raise InvalidInput("mle needs a non-empty (n, d) sample array")
    eta = MomentParam(2 * np.pi * x.mean(axis=0), -np.pi * (x.T @ x) / len(x))
    if strict:
        try:
            eta.ordinary()
        except InvalidInput as exc:
            raise DegenerateSample("sample covariance is not positive definite") from exc
    return eta


def fisher_info_1d(xi: NaturalParam, lattice: Lattice | None = None,
                   spec: TruncationSpec = DEFAULT_SPEC) -> np.ndarray:
    """Hessian of ``log theta`` in ``(xi1, xi2)`` for a univariate family.

    Uses the term-wise second derivatives ``theta''/theta - (theta'/theta)^2``,
    i.e. the covariance of ``(2 pi x, -pi x^2)``.
    """
    if xi.dim != 1:
        raise InvalidInput("fisher_info_1d needs a univariate parameter")
    w = theta_window(xi, lattice, spec)
    p = w.weights
    x = w.points[:, 0]
    t = np.column_stack([2 * np.pi * x, -np.pi * x * x])
    first = p @ t
    second = (t.T * p) @ t
    info = second - np.outer(first, first)
    return 0.5 * (info + info.T)


def log_likelihood(xi: NaturalParam, samples, lattice: Lattice | None = None,
                   spec: TruncationSpec = DEFAULT_SPEC) -> float:
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    return float(np.sum(log_terms(xi, x)) - len(x) * theta_window(xi, lattice, spec).log_sum)


def duality_gap(xi: NaturalParam, eta: MomentParam, lattice: Lattice | None = None,
                spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """Fenchel-Young gap ``F(xi) + F*(eta) - <xi, eta>`` with ``F*(eta) = -H``.

    Zero exactly when ``eta`` is the moment parameter of ``xi``.
    """
    xi_eta = natural_from_moments(eta, lattice, spec)
    neg_entropy = -entropy(xi_eta, lattice, spec)
    return theta_window(xi, lattice, spec).log_sum + neg_entropy - xi.inner(eta)


