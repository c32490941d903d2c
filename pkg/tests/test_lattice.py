import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latgauss.errors import InvalidInput, PointBudgetExceeded, RadiusCapExceeded
from latgauss.lattice import (Lattice, TruncationSpec, enumerate_ellipsoid, enumerate_z,
                              tail_mass_bound, truncation_radius)


def test_interval_count():
    pts = enumerate_ellipsoid(Lattice.integer(1), [0.0], [[1.0]], 2.5)
    assert pts[:, 0].tolist() == [-2, -1, 0, 1, 2]


def test_unit_disk():
    pts = enumerate_ellipsoid(Lattice.integer(2), [0.0, 0.0], np.eye(2), 1.0)
    assert [tuple(p) for p in pts] == [(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]


def test_skewed_basis_matches_box_scan():
    # box scan over z in [-5, 5]^2 of |Lz| <= 1.2, in lexicographic z order
    expected = [(-1, 0), (0, 1), (0, 0), (0, -1), (1, 0)]
    lat = Lattice([[1, 1], [0, 1]], [0, 0])
    pts = enumerate_ellipsoid(lat, [0.0, 0.0], np.eye(2), 1.2)
    assert [tuple(p) for p in pts] == expected


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 3), radius=st.floats(0.3, 3.0))
def test_enumeration_equals_box_scan(seed, d, radius):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d, d))
    gram = a @ a.T + 0.3 * np.eye(d)
    center = rng.uniform(-2, 2, size=d)
    got = enumerate_z(gram, center, radius)
    h = int(math.ceil(radius / math.sqrt(np.linalg.eigvalsh(gram)[0]))) + 3
    box = np.array(list(itertools.product(range(-h - 2, h + 3), repeat=d)))
    y = box - center
    inside = box[np.einsum("ni,ij,nj->n", y, gram, y) <= radius**2]
    inside = inside[np.lexsort(inside.T[::-1])]
    np.testing.assert_array_equal(got, inside)


def test_point_budget():
    with pytest.raises(PointBudgetExceeded):
        enumerate_ellipsoid(Lattice.integer(2), [0, 0], 0.01 * np.eye(2), 10.0, max_points=100)


def test_nonpositive_radius_rejected():
    with pytest.raises(InvalidInput):
        enumerate_ellipsoid(Lattice.integer(1), [0.0], [[1.0]], 0.0)


def test_radius_meets_tail_by_direct_summation():
    r = truncation_radius([[1.0]], [0.0], 1e-10)
    omitted = sum(math.exp(-math.pi * l * l) for l in range(-50, 51) if l * l > r * r)
    assert omitted <= 1e-10


def test_flatter_gaussian_needs_wider_window():
    assert truncation_radius([[0.1]], [0.0], 1e-10) > truncation_radius([[1.0]], [0.0], 1e-10)


def test_radius_monotone_in_eps():
    assert truncation_radius(np.eye(2), [0, 0], 1e-6) < truncation_radius(np.eye(2), [0, 0], 1e-12)


def test_radius_cap():
    with pytest.raises(RadiusCapExceeded):
        truncation_radius([[1e-4]], [0.0], 1e-12, max_radius=2.0)


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 2), radius=st.floats(0.5, 2.5))
def test_tail_bound_dominates_omitted_mass(seed, d, radius):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d, d))
    gram = a @ a.T + 0.2 * np.eye(d)
    center = rng.uniform(-1, 1, size=d)
    h = 40
    box = np.array(list(itertools.product(range(-h, h + 1), repeat=d)))
    y = box - center
    q = np.einsum("ni,ij,nj->n", y, gram, y)
    omitted = np.exp(-math.pi * q[q > radius**2]).sum()
    assert omitted <= tail_mass_bound(gram, radius) * (1 + 1e-12)


def test_identity_lattice_is_integers():
    lat = Lattice.integer(3)
    z = np.array([[1, -2, 3], [0, 0, 5]])
    np.testing.assert_array_equal(lat.points(z), z)
    assert lat.is_integer


def test_singular_basis_rejected():
    with pytest.raises(InvalidInput):
        Lattice([[1, 2], [2, 4]], [0, 0])


def test_truncation_spec_validation():
    with pytest.raises(InvalidInput):
        TruncationSpec(eps=0)
    with pytest.raises(InvalidInput):
        TruncationSpec(max_points=0)
