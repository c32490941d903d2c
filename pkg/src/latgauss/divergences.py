"""Closed-form divergences between lattice normal distributions.

Every formula is written in terms of the cumulant ``F = log theta`` evaluated
at combinations of natural parameters, so raw theta values are never
multiplied or divided.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConjugateExponentError, InvalidInput, NoSignChange
from .family import _moments_of_window
from .lattice import Lattice, TruncationSpec
from .params import MomentParam, NaturalParam, combine
from .theta import DEFAULT_SPEC, theta_window


class DivergenceKind(str, enum.Enum):
    RENYI = "renyi"
    KL = "kl"
    BHATTACHARYYA = "bhattacharyya"
    BHATT_COEFFICIENT = "bhatt_coefficient"
    SKEWED_BHATT_COEFFICIENT = "skewed_bhatt_coefficient"
    HELLINGER2 = "hellinger2"
    AMARI_ALPHA = "amari_alpha"
    SHARMA_MITTAL = "sharma_mittal"
    CHERNOFF = "chernoff"
    GAMMA = "gamma"
    HOELDER = "hoelder"
    CAUCHY_SCHWARZ = "cauchy_schwarz"
    JENSEN_SKEW = "jensen_skew"
    I_ALPHA_BETA = "i_alpha_beta"


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    kind: DivergenceKind
    order_params: dict = field(default_factory=dict)
    theta_evals: int = 0
    est_abs_error: float = 0.0


@dataclass(frozen=True)
class ChernoffResult:
    value: float
    alpha_star: float
    iterations: int
    gap: float = 0.0


class _Cumulant:
    """Evaluates ``F`` and accumulates ``sum |coef| * relative tail bound``."""

    def __init__(self, lattice, spec):
        self.lattice = lattice
        self.spec = spec
        self.evals = 0
        self.log_err = 0.0

    def window(self, xi, coef=1.0):
        w = theta_window(xi, self.lattice, self.spec)
        self.evals += 1
        self.log_err += abs(coef) * w.tail_bound
        return w

    def __call__(self, xi, coef=1.0) -> float:
        return self.window(xi, coef).log_sum


def _check_same_dim(xi, xi_prime):
    if xi.dim != xi_prime.dim:
        raise InvalidInput("parameters have different dimensions")


# Each _kind helper returns (value, |d value / d X|) where X is the linear
# combination of cumulants tracked by the _Cumulant instance.

def _jensen(F, xi, xp, alpha):
    mix = combine((alpha, 1 - alpha), (xi, xp))
    j = alpha * F(xi, alpha) + (1 - alpha) * F(xp, 1 - alpha) - F(mix)
    return j, 1.0


def _i_alpha_beta(F, xi, xp, alpha, beta):
    mix = combine((alpha, beta), (xi, xp))
    v = math.exp(F(mix) - alpha * F(xi, alpha) - beta * F(xp, beta))
    return v, v


def _renyi(F, xi, xp, alpha):
    if not alpha > 0 or alpha == 1:
        raise InvalidInput("Renyi order must be positive and different from 1")
    j, _ = _jensen(F, xi, xp, alpha)
    s = 1.0 / abs(1 - alpha)
    return j / (1 - alpha), s


def _bhattacharyya(F, xi, xp):
    return _jensen(F, xi, xp, 0.5)


def _bhatt_coefficient(F, xi, xp, alpha=0.5):
    j, _ = _jensen(F, xi, xp, alpha)
    v = math.exp(-j)
    return v, v


def _hellinger2(F, xi, xp):
    rho, s = _bhatt_coefficient(F, xi, xp)
    return 1.0 - rho, s


def _amari(F, xi, xp, alpha):
    if alpha in (0, 1):
        raise InvalidInput("Amari order must differ from 0 and 1")
    rho, s = _i_alpha_beta(F, xi, xp, alpha, 1 - alpha)
    c = 1.0 / (alpha * (1 - alpha))
    return c * (1.0 - rho), abs(c) * s


def _kl(F, xi, xp):
    w = F.window(xi)
    eta = _moments_of_window(w)
    diff = _inner_diff(xp, xi, eta)
    v = F(xp) - w.log_sum - diff
    # moment error is of the same relative order as the tail bound
    F.log_err += abs(diff) * w.tail_bound
    return v, 1.0


def _inner_diff(a: NaturalParam, b: NaturalParam, eta: MomentParam) -> float:
    return float((a.xi1 - b.xi1) @ eta.eta1 + np.sum((a.xi2 - b.xi2) * eta.eta2))


def _kl_mixed(F, xi, xp):
    w = F.window(xi)
    eta = _moments_of_window(w)
    mu = eta.mean
    second = eta.covariance + np.outer(mu, mu)
    corr = 2 * np.pi * mu @ (xp.xi1 - xi.xi1) - np.pi * np.trace((xp.xi2 - xi.xi2) @ second)
    F.log_err += abs(corr) * w.tail_bound
    return F(xp) - w.log_sum - corr, 1.0


def _sharma_mittal(F, xi, xp, alpha, beta):
    if not alpha > 0 or alpha == 1:
        raise InvalidInput("Sharma-Mittal alpha must be positive and different from 1")
    if beta == 1:
        raise InvalidInput("Sharma-Mittal beta must differ from 1")
    j, _ = _jensen(F, xi, xp, alpha)
    k = (1 - beta) / (1 - alpha)
    v = math.expm1(-k * j) / (beta - 1)
    return v, abs(k * math.exp(-k * j) / (beta - 1))


def _gamma(F, xi, xp, gamma):
    if not gamma > 1:
        raise InvalidInput("gamma must exceed 1")
    g_xi = combine((gamma,), (xi,))
    g_xp = combine((gamma,), (xp,))
    mix = combine((1.0, gamma - 1), (xi, xp))
    x = F(g_xi) + (gamma - 1) * F(g_xp, gamma - 1) - gamma * F(mix, gamma)
    c = 1.0 / (gamma * (gamma - 1))
    return c * x, c


def _hoelder(F, xi, xp, alpha_h, beta_h, gamma_h):
    if not gamma_h > 0:
        raise InvalidInput("Hoelder gamma must be positive")
    if alpha_h == 0 or beta_h == 0 or abs(1 / alpha_h + 1 / beta_h - 1) > 1e-12:
        raise ConjugateExponentError("Hoelder exponents must satisfy 1/alpha + 1/beta = 1")
    g_xi = combine((gamma_h,), (xi,))
    g_xp = combine((gamma_h,), (xp,))
    mix = combine((gamma_h / alpha_h, gamma_h / beta_h), (xi, xp))
    x = F(g_xi, 1 / alpha_h) / alpha_h + F(g_xp, 1 / beta_h) / beta_h - F(mix)
    return abs(x), 1.0


def _cauchy_schwarz(F, xi, xp):
    mix = combine((1.0, 1.0), (xi, xp))
    x = 0.5 * F(combine((2.0,), (xi,)), 0.5) + 0.5 * F(combine((2.0,), (xp,)), 0.5) - F(mix)
    return x, 1.0


def _run(helper, xi, xp, *args, lattice=None, spec=DEFAULT_SPEC):
    _check_same_dim(xi, xp)
    F = _Cumulant(lattice, spec)
    value, slope = helper(F, xi, xp, *args)
    return value, F.evals, slope * F.log_err


def _value(helper, xi, xp, *args, lattice=None, spec=DEFAULT_SPEC) -> float:
    return float(_run(helper, xi, xp, *args, lattice=lattice, spec=spec)[0])


def jensen_skew(xi, xi_prime, alpha, lattice: Lattice | None = None,
                spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """``alpha F(xi) + (1 - alpha) F(xi') - F(alpha xi + (1 - alpha) xi')``."""
    return _value(_jensen, xi, xi_prime, alpha, lattice=lattice, spec=spec)


def i_alpha_beta(xi, xi_prime, alpha, beta, lattice: Lattice | None = None,
                 spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """``sum_x p_xi(x)^alpha p_xi'(x)^beta``."""
    return _value(_i_alpha_beta, xi, xi_prime, alpha, beta, lattice=lattice, spec=spec)


def renyi(xi, xi_prime, alpha, lattice: Lattice | None = None,
          spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return _value(_renyi, xi, xi_prime, alpha, lattice=lattice, spec=spec)


def bhattacharyya(xi, xi_prime, lattice: Lattice | None = None,
                  spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """``-log sum sqrt(p p')``, the Jensen divergence of ``F`` at the midpoint."""
    return _value(_bhattacharyya, xi, xi_prime, lattice=lattice, spec=spec)


def bhatt_coefficient(xi, xi_prime, lattice: Lattice | None = None,
                      spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return _value(_bhatt_coefficient, xi, xi_prime, lattice=lattice, spec=spec)


def skewed_bhatt_coefficient(xi, xi_prime, alpha, lattice: Lattice | None = None,
                             spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return _value(_bhatt_coefficient, xi, xi_prime, alpha, lattice=lattice, spec=spec)


def hellinger_squared(xi, xi_prime, lattice: Lattice | None = None,
                      spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return _value(_hellinger2, xi, xi_prime, lattice=lattice, spec=spec)


def amari_alpha(xi, xi_prime, alpha, lattice: Lattice | None = None,
                spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return _value(_amari, xi, xi_prime, alpha, lattice=lattice, spec=spec)


def kl_bregman(xi, xi_prime, lattice: Lattice | None = None,
               spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """KL divergence as the reverse Bregman divergence ``B_F(xi' : xi)``."""
    return _value(_kl, xi, xi_prime, lattice=lattice, spec=spec)


def kl_mixed(xi, xi_prime, lattice: Lattice | None = None,
             spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """KL divergence from the mean and covariance of ``p_xi``.

    ``log(theta(xi')/theta(xi)) - 2 pi mu'(xi1' - xi1) + pi tr((xi2' - xi2)(Sigma + mu mu'))``
    """
    return _value(_kl_mixed, xi, xi_prime, lattice=lattice, spec=spec)


def sharma_mittal(xi, xi_prime, alpha, beta, lattice: Lattice | None = None,
                  spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return _value(_sharma_mittal, xi, xi_prime, alpha, beta, lattice=lattice, spec=spec)


def gamma_divergence(xi, xi_prime, gamma, lattice: Lattice | None = None,
                     spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return _value(_gamma, xi, xi_prime, gamma, lattice=lattice, spec=spec)


def hoelder(xi, xi_prime, alpha_h, beta_h, gamma_h, lattice: Lattice | None = None,
            spec: TruncationSpec = DEFAULT_SPEC) -> float:
    """Projective Hoelder divergence; ``1/alpha_h + 1/beta_h`` must equal one."""
    return _value(_hoelder, xi, xi_prime, alpha_h, beta_h, gamma_h, lattice=lattice, spec=spec)


def cauchy_schwarz(xi, xi_prime, lattice: Lattice | None = None,
                   spec: TruncationSpec = DEFAULT_SPEC) -> float:
    return _value(_cauchy_schwarz, xi, xi_prime, lattice=lattice, spec=spec)


def chernoff(xi, xi_prime, bisect_tol: float = 1e-9, lattice: Lattice | None = None,
             spec: TruncationSpec = DEFAULT_SPEC, max_iter: int = 200,
             bracket=(1e-6, 1 - 1e-6)) -> ChernoffResult:
    """Chernoff information by bisection along the exponential geodesic.

    ``xi_a = a xi + (1 - a) xi'`` and the root of
    ``g(a) = KL(xi_a : xi) - KL(xi_a : xi') = F(xi) - F(xi') - <xi - xi', eta(xi_a)>``
    is located; ``g`` is decreasing in ``a``.
    """
    _check_same_dim(xi, xi_prime)
    if xi == xi_prime:
        raise InvalidInput("Chernoff information needs two distinct parameters")
    F = _Cumulant(lattice, spec)
    f_xi, f_xp = F(xi), F(xi_prime)

    def at(a):
        mix = combine((a, 1 - a), (xi, xi_prime))
        w = F.window(mix)
        eta = _moments_of_window(w)
        kl_to_xi = f_xi - w.log_sum - _inner_diff(xi, mix, eta)
        kl_to_xp = f_xp - w.log_sum - _inner_diff(xi_prime, mix, eta)
        return kl_to_xi - kl_to_xp, kl_to_xi

    lo, hi = bracket
    g_lo, _ = at(lo)
    g_hi, _ = at(hi)
    if not (g_lo > 0 > g_hi):
        raise NoSignChange(f"no sign change on [{lo}, {hi}]: g = ({g_lo:.3e}, {g_hi:.3e})")
    a, g, value = lo, g_lo, 0.0
    for it in range(1, max_iter + 1):
        a = 0.5 * (lo + hi)
        g, value = at(a)
        if abs(g) <= bisect_tol or hi - lo <= 1e-16:
            return ChernoffResult(value, a, it, abs(g))
        if g > 0:
            lo = a
        else:
            hi = a
    return ChernoffResult(value, a, max_iter, abs(g))


def kl_centroid_left(params) -> NaturalParam:
    """Minimiser of ``sum_i KL(p : p_i)``: the mean of the natural parameters."""
    params = list(params)
    if not params:
        raise InvalidInput("centroid of an empty list")
    return combine([1.0 / len(params)] * len(params), params)


_DISPATCH = {
    DivergenceKind.RENYI: (_renyi, ("alpha",)),
    DivergenceKind.KL: (_kl, ()),
    DivergenceKind.BHATTACHARYYA: (_bhattacharyya, ()),
    DivergenceKind.BHATT_COEFFICIENT: (_bhatt_coefficient, ()),
    DivergenceKind.SKEWED_BHATT_COEFFICIENT: (_bhatt_coefficient, ("alpha",)),
    DivergenceKind.HELLINGER2: (_hellinger2, ()),
    DivergenceKind.AMARI_ALPHA: (_amari, ("alpha",)),
    DivergenceKind.SHARMA_MITTAL: (_sharma_mittal, ("alpha", "beta")),
    DivergenceKind.GAMMA: (_gamma, ("gamma",)),
    DivergenceKind.HOELDER: (_hoelder, ("alpha", "beta", "gamma")),
    DivergenceKind.CAUCHY_SCHWARZ: (_cauchy_schwarz, ()),
    DivergenceKind.JENSEN_SKEW: (_jensen, ("alpha",)),
    DivergenceKind.I_ALPHA_BETA: (_i_alpha_beta, ("alpha", "beta")),
}


def divergence(kind, xi, xi_prime, alpha=None, beta=None, gamma=None,
               lattice: Lattice | None = None, spec: TruncationSpec = DEFAULT_SPEC,
               bisect_tol: float = 1e-9) -> DivergenceResult:
    """Evaluate any divergence kind with instrumentation."""
    kind = DivergenceKind(kind)
    given = {"alpha": alpha, "beta": beta, "gamma": gamma}
    if kind is DivergenceKind.CHERNOFF:
        res = chernoff(xi, xi_prime, bisect_tol, lattice, spec)
        return DivergenceResult(res.value, kind, {"alpha_star": res.alpha_star},
                                4 + res.iterations, res.gap)
    helper, names = _DISPATCH[kind]
    missing = [n for n in names if given[n] is None]
    if missing:
        raise InvalidInput(f"{kind.value} needs order parameter(s) {', '.join(missing)}")
    args = [float(given[n]) for n in names]
    value, evals, err = _run(helper, xi, xi_prime, *args, lattice=lattice, spec=spec)
    return DivergenceResult(value, kind, dict(zip(names, args)), evals, err)
