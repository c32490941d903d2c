import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import box_for, naturals, natural_pairs, random_natural
from latgauss.lattice import Lattice, TruncationSpec
from latgauss.oracle import oracle_log_theta, oracle_theta
from latgauss.params import NaturalParam
from latgauss.theta import log_theta, theta

EPS = 1e-12
THETA_0_1 = 1.0864348112133082  # direct sum over |l| <= 10


def xi_1d(a, b):
    return NaturalParam([a], [[b]])


def test_frozen_value():
    direct = sum(math.exp(-math.pi * l * l) for l in range(-10, 11))
    assert direct == pytest.approx(THETA_0_1, rel=1e-15)
    series = 1 + 2 * math.exp(-math.pi) + 2 * math.exp(-4 * math.pi)
    assert series == pytest.approx(THETA_0_1, abs=1e-11)
    res = theta(xi_1d(0, 1))
    assert res.value == pytest.approx(THETA_0_1, rel=2 * EPS)
    assert res.tail_bound <= EPS


def test_frozen_log_value():
    assert log_theta(xi_1d(0, 1)) == pytest.approx(0.08290152003105485, rel=1e-13)


def test_result_consistency():
    res = theta(NaturalParam([0.3, -0.4], [[0.5, 0.1], [0.1, 0.3]]))
    assert res.value > 0
    assert math.exp(res.log_value) == pytest.approx(res.value, rel=1e-12)
    assert res.points_used > 0 and res.radius > 0
    np.testing.assert_allclose(res.grad_xi2, res.grad_xi2.T)


def test_large_linear_term_stays_finite():
    # theta itself overflows a double here; its logarithm must not
    xi = xi_1d(60.0, 0.5)
    f = log_theta(xi)
    assert np.isfinite(f)
    # the mode 120 is a lattice point, so F = pi a^2 / b + log theta(0, [b])
    centered = math.log(sum(math.exp(-0.5 * math.pi * l * l) for l in range(-20, 21)))
    assert f == pytest.approx(math.pi * 3600 / 0.5 + centered, rel=1e-14)


@given(natural_pairs(eig=(0.05, 2.0)))
def test_log_convex_on_segments(pair):
    a, b = pair
    mid = NaturalParam(0.5 * (a.xi1 + b.xi1), 0.5 * (a.xi2 + b.xi2))
    assert log_theta(mid) <= 0.5 * (log_theta(a) + log_theta(b)) + 1e-12


@given(naturals(eig=(0.05, 2.0)), st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_dominates_every_term(xi, m):
    m = np.array(m[: xi.dim], dtype=float)
    term = 2 * np.pi * (-0.5 * m @ xi.xi2 @ m + m @ xi.xi1)
    assert log_theta(xi) >= term


@given(naturals(eig=(0.05, 2.0)))
def test_agrees_with_box_oracle(xi):
    assert log_theta(xi) == pytest.approx(oracle_log_theta(xi, box_for(xi)), abs=2 * EPS)


def test_agrees_with_box_oracle_3d():
    rng = np.random.default_rng(7)
    for _ in range(3):
        xi = random_natural(rng, 3, eig=(0.2, 2.0))
        assert log_theta(xi) == pytest.approx(oracle_log_theta(xi, box_for(xi)), abs=2 * EPS)


def test_quasiperiodicity_real_argument():
    rng = np.random.default_rng(3)
    for d in (1, 2, 3):
        xi = random_natural(rng, d, eig=(0.1, 1.5), lin=0.5)
        for _ in range(4):
            v = rng.integers(-3, 4, size=d).astype(float)
            shifted = NaturalParam(xi.xi1 + xi.xi2 @ v, xi.xi2)
            factor = 2 * np.pi * (0.5 * v @ xi.xi2 @ v + v @ xi.xi1)
            assert log_theta(shifted) == pytest.approx(log_theta(xi) + factor, abs=2 * EPS)


def test_integer_shift_of_linear_term_is_not_a_period():
    # exp(2 pi l'u) is not 1 for real arguments; theta(1, [1]) = e^pi theta(0, [1])
    assert theta(xi_1d(1.0, 1.0)).value == pytest.approx(math.exp(math.pi) * THETA_0_1, rel=1e-12)
    assert abs(theta(xi_1d(1.3, 0.5)).value - theta(xi_1d(0.3, 0.5)).value) > 1.0


@given(naturals(eig=(0.05, 2.0)))
def test_parity(xi):
    flipped = NaturalParam(-xi.xi1, xi.xi2)
    assert log_theta(flipped) == pytest.approx(log_theta(xi), abs=2 * EPS)


def _central(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


@pytest.mark.parametrize("seed", range(5))
def test_gradient_finite_differences(seed):
    rng = np.random.default_rng(seed)
    xi = random_natural(rng, 2, eig=(0.2, 1.5), lin=0.5)
    res = theta(xi)
    h = 1e-5
    for i in range(2):
        e = np.eye(2)[i]
        fd = _central(lambda t: theta(NaturalParam(xi.xi1 + t * e, xi.xi2)).value, 0.0, h)
        assert res.grad_xi1[i] == pytest.approx(fd, rel=1e-4)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2))
            e[i, j] += 0.5
            e[j, i] += 0.5
            # symmetric perturbation: d/dt theta(xi2 + tE) = <grad, E> = grad_ij for the full-matrix gradient
            fd = _central(lambda t: theta(NaturalParam(xi.xi1, xi.xi2 + t * e)).value, 0.0, h)
            assert res.grad_xi2[i, j] == pytest.approx(fd, rel=1e-4)


def test_tail_bound_within_eps_across_specs():
    xi = NaturalParam([0.2, 0.1], [[0.3, 0.05], [0.05, 0.2]])
    for eps in (1e-6, 1e-9, 1e-12):
        res = theta(xi, spec=TruncationSpec(eps=eps))
        assert res.tail_bound <= eps
        assert res.log_value == pytest.approx(log_theta(xi), abs=2 * eps)


def test_shifted_lattice_characteristics_identity():
    # theta over L Z^d + c equals a prefactor times theta over Z^d at (L'(a - Bc), L'BL)
    basis = np.array([[1.0, 0.5], [0.0, 1.2]])
    shift = np.array([0.3, -0.2])
    xi = NaturalParam([0.4, -0.1], [[0.6, 0.1], [0.1, 0.4]])
    lhs = log_theta(xi, Lattice(basis, shift))
    a, b = xi.xi1, xi.xi2
    pre = 2 * np.pi * (-0.5 * shift @ b @ shift + shift @ a)
    reduced = NaturalParam(basis.T @ (a - b @ shift), basis.T @ b @ basis)
    assert lhs == pytest.approx(pre + log_theta(reduced), abs=1e-11)
    assert lhs == pytest.approx(oracle_log_theta(xi, box_for(reduced), Lattice(basis, shift)), abs=1e-11)


def test_oracle_value_1d():
    assert oracle_theta(xi_1d(0, 1)) == pytest.approx(THETA_0_1, rel=1e-15)
