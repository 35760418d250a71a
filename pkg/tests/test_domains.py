import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holodeg.domains import (Ball, ComplexLine, DiscSlice, HermitianEllipsoid, TRANSVERSALITY,
                             boundary_circle_points, canonical_frame, domain_from_json,
                             line_from_json, slice_ball, slice_domain, slice_ellipsoid)
from holodeg.errors import DegenerateSlice, DimensionMismatch, InputError

seeds = st.integers(0, 2**32 - 1)


def random_line(rng, dim=2, spread=0.8):
    base = spread * (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2 * dim)
    return ComplexLine.through(base, rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def brute_slice_radius(domain, line, n=4000):
    # bisection along rays from the reported center: independent of the closed form
    disc = slice_domain(domain, line)
    out = []
    for t in np.linspace(0, 2 * np.pi, 12, endpoint=False):
        lo, hi = 0.0, 10.0
        for _ in range(80):
            mid = (lo + hi) / 2
            z = line.point(disc.center + mid * np.exp(1j * t))
            lo, hi = (mid, hi) if domain.defining(z) < 0 else (lo, mid)
        out.append(lo)
    return np.array(out)


# --- examples --------------------------------------------------------------

def test_slice_through_center():
    d = slice_ball(Ball([0, 0], 1), ComplexLine([0, 0], [1, 0]))
    assert d.center == 0 and d.radius == pytest.approx(1.0, abs=1e-15)


def test_slice_offset_line():
    d = slice_ball(Ball([0, 0], 1), ComplexLine([0, 0.5], [1, 0]))
    assert abs(d.center) < 1e-15
    assert d.radius == pytest.approx(np.sqrt(0.75), abs=1e-14)


def test_slice_missing_line():
    assert slice_ball(Ball([0, 0], 1), ComplexLine([0, 2], [1, 0])) is None


def test_tangent_line_is_empty():
    assert slice_ball(Ball([0, 0], 1), ComplexLine([0, 1], [1, 0])) is None
    # just inside the threshold still counts as tangent
    h = 1 - (TRANSVERSALITY / 2) ** 2
    assert slice_ball(Ball([0, 0], 1), ComplexLine([0, np.sqrt(h)], [1, 0])) is None


def test_ellipsoid_drops_orthogonal_axis():
    ell = HermitianEllipsoid([0, 0], np.diag([1.0, 4.0]))
    d = slice_ellipsoid(ell, ComplexLine([0, 0], [1, 0]))
    assert abs(d.center) < 1e-15 and d.radius == pytest.approx(1.0, abs=1e-14)


def test_ellipsoid_outside_line():
    ell = HermitianEllipsoid([0, 0], np.diag([1.0, 4.0]))
    assert slice_ellipsoid(ell, ComplexLine([0, 0.6], [1, 0])) is None


def test_identity_ellipsoid_matches_ball_on_100_lines():
    rng = np.random.default_rng(1)
    ball, ell = Ball([0, 0], 1), HermitianEllipsoid([0, 0], np.eye(2))
    for _ in range(100):
        line = random_line(rng)
        a, b = slice_ball(ball, line), slice_ellipsoid(ell, line)
        assert (a is None) == (b is None)
        if a is not None:
            assert abs(a.center - b.center) < 1e-12 and abs(a.radius - b.radius) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_scaled_identity_ellipsoid_matches_ball(seed):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    r = rng.uniform(0.3, 3)
    ball, ell = Ball(c, r), HermitianEllipsoid(c, np.eye(2) / r**2)
    line = ComplexLine.through(c + 0.5 * r * (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / 2,
                               rng.standard_normal(2) + 1j * rng.standard_normal(2))
    a, b = slice_ball(ball, line), slice_ellipsoid(ell, line)
    assert (a is None) == (b is None)
    if a is not None:
        assert abs(a.center - b.center) < 1e-12 * max(1, r)
        assert abs(a.radius - b.radius) < 1e-12 * max(1, r)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_ellipsoid_slice_radius_by_bisection(seed):
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    ell = HermitianEllipsoid([0.1, -0.2j], B.conj().T @ B + 0.5 * np.eye(2))
    line = ComplexLine.through(ell.center, rng.standard_normal(2) + 1j * rng.standard_normal(2))
    disc = slice_domain(ell, line)
    assert np.allclose(brute_slice_radius(ell, line), disc.radius, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_slice_circle_lies_on_sphere(seed):
    rng = np.random.default_rng(seed)
    ball = Ball([0.2, -0.1j], 1.5)
    disc = slice_domain(ball, random_line(rng, spread=1.0))
    if disc is None:
        return
    _, pts = boundary_circle_points(disc, 64)
    assert np.max(np.abs(ball.defining(pts))) < 1e-10


def test_ellipsoid_circle_on_boundary():
    rng = np.random.default_rng(4)
    ell = HermitianEllipsoid([0, 0], np.array([[2, 0.5j], [-0.5j, 1]]))
    for _ in range(20):
        disc = slice_domain(ell, random_line(rng, spread=0.5))
        if disc is not None:
            _, pts = boundary_circle_points(disc, 64)
            assert np.max(np.abs(ell.defining(pts))) < 1e-10


def test_circle_points_unit_disc_four():
    zeta, _ = boundary_circle_points(DiscSlice(0, 1), 4)
    assert np.allclose(zeta, [1, 1j, -1, -1j], atol=1e-15)


def test_circle_points_seven():
    zeta, _ = boundary_circle_points(DiscSlice(1, 2), 7)
    assert np.allclose(np.abs(zeta - 1), 2, atol=1e-12)


def test_circle_points_degenerate():
    with pytest.raises(DegenerateSlice):
        boundary_circle_points(DiscSlice(0, 0), 8)
    with pytest.raises(InputError):
        boundary_circle_points(DiscSlice(0, 1), 3)


# --- canonical frame -----------------------------------------------------------

def test_frame_axis_is_identity():
    U, Z = canonical_frame(ComplexLine([0, 0], [1, 0]))
    assert np.allclose(U, np.eye(2), atol=1e-15) and np.allclose(Z, 0)


def test_frame_second_axis_swaps():
    U, _ = canonical_frame(ComplexLine([0, 0], [0, 1]))
    assert np.allclose(U @ np.array([0, 1]), [1, 0], atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 4))
def test_frame_unitary_and_maps_direction(seed, dim):
    line = random_line(np.random.default_rng(seed), dim)
    U, Z = canonical_frame(line)
    assert np.max(np.abs(U.conj().T @ U - np.eye(dim))) < 1e-12
    e1 = np.zeros(dim)
    e1[0] = 1
    assert np.max(np.abs(U @ line.direction - e1)) < 1e-12
    assert np.allclose(Z, line.base)


# --- validation and json ------------------------------------------------------

def test_invalid_domains():
    with pytest.raises(InputError):
        Ball([0, 0], -1)
    with pytest.raises(InputError):
        HermitianEllipsoid([0, 0], np.array([[1, 1j], [1j, 1]]))  # not Hermitian
    with pytest.raises(InputError):
        HermitianEllipsoid([0, 0], np.diag([1.0, -1.0]))
    with pytest.raises(InputError):
        ComplexLine([0, 0], [1, 1])
    with pytest.raises(DimensionMismatch):
        slice_ball(Ball([0, 0], 1), ComplexLine([0, 0, 0], [1, 0, 0]))


def test_domain_json_roundtrip():
    for dom in (Ball([0.5, -1j], 2.0), HermitianEllipsoid([0, 1], np.array([[2, 0.5j], [-0.5j, 1]]))):
        back = domain_from_json(dom.to_json())
        assert type(back) is type(dom)
        assert np.allclose(back.center, dom.center)
        assert back.to_json() == dom.to_json()
    line = ComplexLine.through([0.1, 0.2j], [1, 1j])
    assert np.allclose(line_from_json(line.to_json()).direction, line.direction)


def test_boundary_and_interior_sampling():
    ball = Ball([1, 0], 2.0)
    rng = np.random.default_rng(0)
    b = ball.boundary_points(500, rng)
    assert len(b) >= 500 and np.max(np.abs(np.linalg.norm(b - ball.center, axis=1) - 2)) < 1e-12
    i = ball.interior_points(500, rng)
    assert np.all(ball.contains(i))
