"""Balls and Hermitian ellipsoids in C^N, complex lines and their disc slices."""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DegenerateSlice, DimensionMismatch, InputError
from .serialize import (complex_from_json, complex_to_json, matrix_from_json,
                        matrix_to_json, vector_from_json, vector_to_json)

# slices with radius <= TRANSVERSALITY * (domain scale) count as empty
TRANSVERSALITY = 1e-6
MIN_SAMPLES = 4


def as_point(coords) -> np.ndarray:
    z = np.atleast_1d(np.asarray(coords, dtype=complex)).copy()
    if z.ndim != 1 or z.size < 1:
        raise InputError("a point in C^N needs N >= 1 coordinates")
    if not np.all(np.isfinite(z)):
        raise InputError("point coordinates must be finite")
    z.setflags(write=False)
    return z


def _sphere_points(dim: int, count: int, rng=None) -> np.ndarray:
    """Points on the unit sphere of C^dim.

    For dim == 2 this is a deterministic Hopf-coordinate grid
    (cos t e^{ia}, sin t e^{ib}) that contains the circles t = 0 and
    t = pi/2 exactly; other dimensions use seeded Gaussian directions.
    """
    if dim == 1:
        theta = 2 * np.pi * np.arange(count) / count
        return np.exp(1j * theta)[:, None]
    if dim == 2:
        n_theta = max(8, math.ceil((2 * count) ** (1 / 3)))
        n_eta = max(3, math.ceil(count / n_theta ** 2))
        eta = np.linspace(0.0, np.pi / 2, n_eta)
        theta = 2 * np.pi * np.arange(n_theta) / n_theta
        e, a, b = np.meshgrid(eta, theta, theta, indexing="ij")
        pts = np.stack([np.cos(e) * np.exp(1j * a), np.sin(e) * np.exp(1j * b)], axis=-1)
        return pts.reshape(-1, 2)
    rng = np.random.default_rng(0) if rng is None else rng
    g = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _ball_points(dim: int, count: int, rng) -> np.ndarray:
    """Uniform points in the open unit ball of C^dim = R^{2 dim}."""
    g = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = rng.uniform(size=count) ** (1.0 / (2 * dim))
    return g * rad[:, None]


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise InputError("ball radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def scale(self) -> float:
        return self.radius

    @property
    def diameter(self) -> float:
        return 2 * self.radius

    def defining(self, z) -> np.ndarray:
        """Zero on bD, negative inside: |z-c|^2/r^2 - 1."""
        v = np.asarray(z) - self.center
        return np.sum(np.abs(v) ** 2, axis=-1) / self.radius ** 2 - 1.0

    def contains(self, z) -> np.ndarray:
        return self.defining(z) < 0

    def half_extents(self) -> np.ndarray:
        return np.full(self.dim, self.radius)

    def boundary_points(self, count: int = 4096, rng=None) -> np.ndarray:
        return self.center + self.radius * _sphere_points(self.dim, count, rng)

    def interior_points(self, count: int, rng, shrink: float = 1.0) -> np.ndarray:
        return self.center + shrink * self.radius * _ball_points(self.dim, count, rng)

    def project_to_boundary(self, z) -> np.ndarray:
        v = np.asarray(z) - self.center
        nrm = np.linalg.norm(v, axis=-1, keepdims=True)
        return self.center + self.radius * v / np.where(nrm > 0, nrm, 1.0)

    def transformed(self, U, base) -> "Ball":
        """The same ball in coordinates w = U (z - base), U unitary."""
        return Ball(U @ (self.center - base), self.radius)

    def to_json(self):
        return {"type": "ball", "center": vector_to_json(self.center), "radius": self.radius}


@dataclass(frozen=True, eq=False)
class HermitianEllipsoid:
    """{z : (z-c)^* Q (z-c) < 1} for a positive-definite Hermitian Q."""

    center: np.ndarray
    form: np.ndarray
    _chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        Q = np.array(self.form, dtype=complex)
        n = self.center.size
        if Q.shape != (n, n):
            raise DimensionMismatch(f"form must be {n}x{n}, got {Q.shape}")
        if np.max(np.abs(Q - Q.conj().T)) > 1e-12:
            raise InputError("form is not Hermitian")
        Q = (Q + Q.conj().T) / 2
        if np.linalg.eigvalsh(Q)[0] <= 0:
            raise InputError("form is not positive definite")
        Q.setflags(write=False)
        object.__setattr__(self, "form", Q)
        object.__setattr__(self, "_chol", np.linalg.cholesky(Q))

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def scale(self) -> float:
        # longest semi-axis
        return float(1.0 / math.sqrt(np.linalg.eigvalsh(self.form)[0]))

    @property
    def diameter(self) -> float:
        return 2 * self.scale

    def defining(self, z) -> np.ndarray:
        v = np.asarray(z) - self.center
        return np.real(np.einsum("...i,ij,...j->...", v.conj(), self.form, v)) - 1.0

    def contains(self, z) -> np.ndarray:
        return self.defining(z) < 0

    def half_extents(self) -> np.ndarray:
        return np.sqrt(np.real(np.diag(np.linalg.inv(self.form))))

    def _from_unit(self, u) -> np.ndarray:
        # Q = L L^*, so z = c + L^{-*} u maps the unit sphere onto bD
        return self.center + np.linalg.solve(self._chol.conj().T, u.T).T

    def boundary_points(self, count: int = 4096, rng=None) -> np.ndarray:
        return self._from_unit(_sphere_points(self.dim, count, rng))

    def interior_points(self, count: int, rng, shrink: float = 1.0) -> np.ndarray:
        return self._from_unit(shrink * _ball_points(self.dim, count, rng))

    def project_to_boundary(self, z) -> np.ndarray:
        """Radial projection from the center onto bD."""
        v = np.asarray(z) - self.center
        q = np.real(np.einsum("...i,ij,...j->...", v.conj(), self.form, v))[..., None]
        return self.center + v / np.sqrt(np.where(q > 0, q, 1.0))

    def transformed(self, U, base) -> "HermitianEllipsoid":
        return HermitianEllipsoid(U @ (self.center - base), U @ self.form @ U.conj().T)

    def to_json(self):
        return {"type": "ellipsoid", "center": vector_to_json(self.center),
                "form": matrix_to_json(self.form)}


def domain_from_json(obj):
    kind = obj.get("type")
    if kind == "ball":
        return Ball(vector_from_json(obj["center"]), float(obj["radius"]))
    if kind == "ellipsoid":
        return HermitianEllipsoid(vector_from_json(obj["center"]), matrix_from_json(obj["form"]))
    raise InputError(f"unknown domain type {kind!r}")


@dataclass(frozen=True, eq=False)
class ComplexLine:
    """The affine complex line {base + zeta * direction}, |direction| = 1."""

    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", as_point(self.base))
        object.__setattr__(self, "direction", as_point(self.direction))
        if self.base.size != self.direction.size:
            raise DimensionMismatch("line base and direction differ in dimension")
        if abs(np.linalg.norm(self.direction) - 1.0) > 1e-12:
            raise InputError("line direction must have unit norm")

    @classmethod
    def through(cls, base, direction) -> "ComplexLine":
        """Build a line, normalizing the direction."""
        w = np.asarray(direction, dtype=complex)
        nrm = np.linalg.norm(w)
        if nrm == 0:
            raise InputError("line direction must be nonzero")
        return cls(base, w / nrm)

    @classmethod
    def axis(cls, k: int, dim: int, base=None) -> "ComplexLine":
        e = np.zeros(dim, dtype=complex)
        e[k] = 1.0
        return cls(np.zeros(dim) if base is None else base, e)

    @property
    def dim(self) -> int:
        return self.base.size

    def point(self, zeta) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        return self.base + zeta[..., None] * self.direction

    def to_json(self):
        return {"base": vector_to_json(self.base), "direction": vector_to_json(self.direction)}


def line_from_json(obj) -> ComplexLine:
    return ComplexLine.through(vector_from_json(obj["base"]), vector_from_json(obj["direction"]))


@dataclass(frozen=True, eq=False)
class DiscSlice:
    center: complex
    radius: float
    line: ComplexLine | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius >= 0:
            raise InputError("slice radius must be nonnegative")
        object.__setattr__(self, "radius", float(self.radius))

    def circle(self, n: int) -> np.ndarray:
        theta = 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * theta)

    def to_json(self):
        out = {"center": complex_to_json(self.center), "radius": self.radius}
        if self.line is not None:
            out["line"] = self.line.to_json()
        return out


def disc_from_json(obj) -> DiscSlice:
    return DiscSlice(complex_from_json(obj.get("center", 0.0)), float(obj["radius"]))


def _check_dims(domain, line):
    if domain.dim != line.dim:
        raise DimensionMismatch(f"domain is in C^{domain.dim}, line in C^{line.dim}")


def slice_ball(ball: Ball, line: ComplexLine) -> DiscSlice | None:
    """Disc {zeta : |Z + zeta W - c| < r} or None for missing/tangent lines.

    |v + zeta W|^2 = |zeta + <v,W>|^2 + |v|^2 - |<v,W>|^2 with v = Z - c.
    """
    _check_dims(ball, line)
    v = line.base - ball.center
    proj = np.vdot(line.direction, v)  # <v, W> = sum v_j conj(W_j)
    perp2 = max(float(np.real(np.vdot(v, v))) - abs(proj) ** 2, 0.0)
    rad2 = ball.radius ** 2 - perp2
    if rad2 <= 0:
        return None
    rad = math.sqrt(rad2)
    if rad <= TRANSVERSALITY * ball.scale:
        return None
    return DiscSlice(-proj, rad, line)


def slice_ellipsoid(ell: HermitianEllipsoid, line: ComplexLine) -> DiscSlice | None:
    """Complete the square in (v + zeta W)^* Q (v + zeta W) = 1."""
    _check_dims(ell, line)
    v = line.base - ell.center
    W = line.direction
    QW = ell.form @ W
    alpha = float(np.real(np.vdot(W, QW)))
    beta = np.vdot(QW, v)  # W^* Q v
    gamma = float(np.real(np.vdot(v, ell.form @ v)))
    rad2 = (1.0 - gamma + abs(beta) ** 2 / alpha) / alpha
    if rad2 <= 0:
        return None
    rad = math.sqrt(rad2)
    if rad <= TRANSVERSALITY * ell.scale:
        return None
    return DiscSlice(-beta / alpha, rad, line)


def slice_domain(domain, line: ComplexLine) -> DiscSlice | None:
    if isinstance(domain, Ball):
        return slice_ball(domain, line)
    return slice_ellipsoid(domain, line)


def canonical_frame(line: ComplexLine) -> tuple[np.ndarray, np.ndarray]:
    """Unitary U with U @ W = e_1, and the translation (the line's base).

    Frame coordinates are w = U (z - base); the line becomes the w_1-axis.
    """
    W = line.direction
    n = W.size
    # complete W to a basis, leaving out the unit vector most aligned with it
    drop = int(np.argmax(np.abs(W)))
    cols = [W] + [np.eye(n, dtype=complex)[k] for k in range(n) if k != drop]
    Qm, R = np.linalg.qr(np.stack(cols, axis=1))
    d = np.diag(R)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    Qm = Qm * phases[None, :]  # first column is now exactly W (up to rounding)
    Qm[:, 0] = W
    U = Qm.conj().T
    return U, line.base.copy()


def boundary_circle_points(disc: DiscSlice, n: int):
    """Sample the slice circle; returns (zeta_k, ambient points Z + zeta_k W)."""
    if n < MIN_SAMPLES:
        raise InputError(f"need at least {MIN_SAMPLES} boundary samples")
    if disc.radius <= 0:
        raise DegenerateSlice("degenerate slice (radius 0)")
    zeta = disc.circle(n)
    if disc.line is None:
        return zeta, None
    return zeta, disc.line.point(zeta)
