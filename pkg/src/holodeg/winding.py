"""Winding numbers of circle maps and Fourier coefficients of loop data."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import InputError, NoConvergence, ZeroOnBoundary

ZERO_TOL = 1e-9
SAMPLE_CAP = 2 ** 20
MAX_STEP = np.pi / 2


@dataclass(frozen=True)
class WindingResult:
    winding: int
    min_modulus: float
    max_angular_step: float
    samples_used: int

    def to_json(self):
        return {"winding": self.winding, "minModulus": self.min_modulus,
                "maxAngularStep": self.max_angular_step, "samplesUsed": self.samples_used}


def _check_modulus(values, zero_tol):
    mod = np.abs(values)
    scale = float(mod.max()) if mod.size else 0.0
    lo = float(mod.min()) if mod.size else 0.0
    if scale == 0.0 or lo < zero_tol * scale:
        k = int(np.argmin(mod))
        raise ZeroOnBoundary(f"|f| = {lo:.3e} at sample {k} (max |f| = {scale:.3e})")
    return lo


def _angular_steps(values):
    nxt = np.roll(values, -1)
    return np.angle(nxt / values)


def winding_of_samples(values, zero_tol: float = ZERO_TOL) -> WindingResult:
    """Winding of an already-sampled closed loop (no refinement possible).

    Raises NoConvergence if some step between consecutive samples turns by
    pi/2 or more, since then the samples cannot certify the winding.
    """
    values = np.asarray(values, dtype=complex)
    if values.size < 4:
        raise InputError("need at least 4 loop samples")
    lo = _check_modulus(values, zero_tol)
    steps = _angular_steps(values)
    big = float(np.max(np.abs(steps)))
    if big >= MAX_STEP:
        raise NoConvergence(f"angular step {big:.3f} rad >= pi/2; sample the loop more finely")
    return _finish(steps, lo, big, values.size)


def _finish(steps, lo, big, n):
    total = float(np.sum(steps)) / (2 * np.pi)
    w = round(total)
    if abs(total - w) >= 0.01:
        raise NoConvergence(f"rounding residual {abs(total - w):.3e} too large")
    return WindingResult(int(w), lo, big, int(n))


def winding_number(f, center: complex = 0.0, radius: float = 1.0, n: int = 64,
                   zero_tol: float = ZERO_TOL, cap: int = SAMPLE_CAP) -> WindingResult:
    """Degree of zeta -> f(zeta) on the circle |zeta - center| = radius.

    ``f`` is vectorized over complex arrays.  The sample count doubles until
    every principal-branch argument increment is below pi/2, at which point
    the discrete sum is the change of argument of the continuous loop.
    A black-box ``f`` must be sampled finely enough from the start (fast
    loops alias); objects with an integer ``degree`` start at 8 (deg + 1).
    """
    if radius <= 0:
        raise InputError("circle radius must be positive")
    n = max(int(n), 8)
    # a known polynomial degree rules out aliasing of the first samples
    deg = getattr(f, "degree", None)
    if isinstance(deg, int):
        n = max(n, 1 << math.ceil(math.log2(8 * (deg + 1))))
    theta = 2 * np.pi * np.arange(n) / n
    values = np.asarray(f(center + radius * np.exp(1j * theta)), dtype=complex)
    while True:
        lo = _check_modulus(values, zero_tol)
        steps = _angular_steps(values)
        big = float(np.max(np.abs(steps)))
        if big < MAX_STEP:
            return _finish(steps, lo, big, n)
        if 2 * n > cap:
            raise NoConvergence(f"winding not certified with {n} samples (step {big:.3f} rad)")
        # only the new midpoints need evaluating
        mid = 2 * np.pi * (np.arange(n) + 0.5) / n
        new = np.asarray(f(center + radius * np.exp(1j * mid)), dtype=complex)
        merged = np.empty(2 * n, dtype=complex)
        merged[0::2], merged[1::2] = values, new
        values, n = merged, 2 * n


def fourier_coefficients(f, center: complex = 0.0, radius: float = 1.0,
                         kmin: int = -8, kmax: int = 8, n: int | None = None) -> dict:
    """c_k with f(center + r e^{i theta}) = sum_k c_k e^{i k theta}.

    Uses n >= 8 * (max|k| + 1) equispaced samples (rounded up to a power of
    two); exact for trigonometric polynomials of degree below n/2.
    """
    if kmin > kmax:
        raise InputError("empty k range")
    need = 8 * (max(abs(kmin), abs(kmax)) + 1)
    n = need if n is None else max(int(n), need)
    n = 1 << math.ceil(math.log2(n))
    theta = 2 * np.pi * np.arange(n) / n
    values = np.asarray(f(center + radius * np.exp(1j * theta)), dtype=complex)
    c = np.fft.fft(values) / n
    return {k: complex(c[k % n]) for k in range(kmin, kmax + 1)}


def loop_fourier_coefficients(theta, values, kmin: int, kmax: int) -> dict:
    """Direct-sum coefficients for an equispaced sampled loop."""
    theta = np.asarray(theta, dtype=float)
    values = np.asarray(values, dtype=complex)
    ks = np.arange(kmin, kmax + 1)
    c = np.exp(-1j * np.outer(ks, theta)) @ values / values.size
    return {int(k): complex(v) for k, v in zip(ks, c)}
