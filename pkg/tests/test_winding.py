import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import fine_winding
from holodeg.errors import InputError, NoConvergence, ZeroOnBoundary
from holodeg.winding import (fourier_coefficients, loop_fourier_coefficients, winding_number,
                             winding_of_samples)
from holodeg.boundary_maps import UnivariateMixed, split_on_circle
from holodeg.domains import DiscSlice

seeds = st.integers(0, 2**32 - 1)


def random_loop_poly(rng, degree=4):
    """Product of linear factors (zeta - r) or conj(zeta - r), roots off the circle."""
    roots, conj = [], []
    for _ in range(rng.integers(1, degree + 1)):
        while True:
            r = complex(*rng.uniform(-1.6, 1.6, 2))
            if abs(abs(r) - 1) > 0.1:
                break
        roots.append(r)
        conj.append(rng.random() < 0.5)

    def f(z):
        out = np.ones_like(z, dtype=complex)
        for r, c in zip(roots, conj):
            out = out * (np.conj(z - r) if c else (z - r))
        return out
    expected = sum((-1 if c else 1) for r, c in zip(roots, conj) if abs(r) < 1)
    return f, expected


@pytest.mark.parametrize("k", range(-8, 9))
def test_monomials(k):
    assert winding_number(lambda z: z**k if k >= 0 else np.conj(z)**(-k)).winding == k


def test_conjugate():
    assert winding_number(np.conj).winding == -1


def test_product_of_opposite_factors():
    f = lambda z: (z - 0.5) * (np.conj(z) - 0.25)
    assert winding_number(f).winding == 0 == fine_winding(f)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_product_rule(seed):
    rng = np.random.default_rng(seed)
    (f, ef), (g, eg) = random_loop_poly(rng), random_loop_poly(rng)
    wf, wg = winding_number(f).winding, winding_number(g).winding
    assert (wf, wg) == (ef, eg)
    assert winding_number(lambda z: f(z) * g(z)).winding == wf + wg


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(1e-3, 1e3))
def test_positive_scaling(seed, t):
    f, _ = random_loop_poly(np.random.default_rng(seed))
    assert winding_number(lambda z: t * f(z)).winding == winding_number(f).winding


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_small_perturbation_keeps_winding(seed):
    rng = np.random.default_rng(seed)
    f, _ = random_loop_poly(rng)
    res = winding_number(f)
    k = rng.integers(-5, 6)
    eps = 0.49 * res.min_modulus * np.exp(1j * rng.uniform(0, 2 * np.pi))
    g = lambda z: f(z) + eps * z**k if k >= 0 else f(z) + eps * np.conj(z)**(-k)
    assert winding_number(g).winding == res.winding


def test_matches_dense_unwrap_on_offcenter_circle():
    f = lambda z: (z - 1.2) ** 3 * np.conj(z - 0.9)
    assert winding_number(f, 1.0, 0.5).winding == fine_winding(f, 1.0, 0.5) == 2


def test_refines_fast_loops():
    res = winding_number(lambda z: z**37)
    assert res.winding == 37 and res.max_angular_step < np.pi / 2 and res.samples_used == 256


def test_known_degree_avoids_aliasing():
    # 8 samples of zeta^200 all equal 1; the degree hint prevents that
    u = UnivariateMixed.from_terms([(1.0, 200, 0)])
    assert winding_number(u, n=8).winding == 200


def test_zero_on_circle():
    with pytest.raises(ZeroOnBoundary):
        winding_number(lambda z: z - 1)


def test_sample_cap():
    with pytest.raises(NoConvergence):
        winding_number(lambda z: z**600, n=1024, cap=1024)


def test_radius_validation():
    with pytest.raises(InputError):
        winding_number(lambda z: z, radius=0)


def test_sampled_loop_winding():
    th = 2 * np.pi * np.arange(64) / 64
    assert winding_of_samples(np.exp(3j * th)).winding == 3
    with pytest.raises(NoConvergence):
        winding_of_samples(np.exp(20j * th))


def test_fourier_of_conjugate():
    c = fourier_coefficients(np.conj, 0, 1, -3, 3)
    assert abs(c[-1] - 1) < 1e-12
    assert all(abs(v) < 1e-12 for k, v in c.items() if k != -1)


def test_fourier_of_holomorphic():
    c = fourier_coefficients(lambda z: z**2 + 3, 0, 1, -3, 3)
    assert abs(c[2] - 1) < 1e-12 and abs(c[0] - 3) < 1e-12
    assert all(abs(v) < 1e-12 for k, v in c.items() if k not in (0, 2))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_fourier_matches_split(seed):
    rng = np.random.default_rng(seed)
    terms = [(complex(*rng.standard_normal(2)), i, j) for i in range(4) for j in range(4 - i)]
    u = UnivariateMixed.from_terms(terms)
    disc = DiscSlice(complex(*rng.standard_normal(2)) * 0.5, rng.uniform(0.3, 2))
    q, s = split_on_circle(u, disc)
    c = fourier_coefficients(u, disc.center, disc.radius, -4, 4)
    r = disc.radius
    for k in range(0, 4):
        qk = q.coeffs[k] if k < q.coeffs.size else 0
        assert abs(c[k] - (qk * r**k + (np.conj(s.coeffs[0]) if k == 0 else 0))) < 1e-10
    for k in range(1, 4):
        sk = s.coeffs[k] if k < s.coeffs.size else 0
        assert abs(c[-k] - np.conj(sk) * r**k) < 1e-10


def test_loop_fourier_direct_sum():
    th = 2 * np.pi * np.arange(32) / 32
    c = loop_fourier_coefficients(th, 2 * np.exp(-2j * th) + np.exp(1j * th), -3, 3)
    assert abs(c[-2] - 2) < 1e-12 and abs(c[1] - 1) < 1e-12 and abs(c[0]) < 1e-12
