"""Brouwer degree by signed zero counting, homotopy checks and R-linear maps.

Points of C^N are realified as (x_1, y_1, ..., x_N, y_N), which is what
``z.view(float)`` gives for a contiguous complex array.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging

import numpy as np

from .errors import (InputError, IrregularZero, SingularMap, SuspectMissedZeros,
                     ZeroOnBoundary)

log = logging.getLogger(__name__)

ZERO_TOL = 1e-9
POLISH_TOL = 1e-11      # residual target, relative to max(1, max |G| on bD)
DEDUP = 1e-6            # dedup radius as a fraction of diam(D)
FD_STEP = 1e-5          # finite-difference step as a fraction of diam(D)
DET_TOL = 1e-8
MAX_NEWTON = 60
MAX_HALVINGS = 12
STALL = 5               # iterations with < 10% residual decrease before a start is dropped
REACH = 1.5             # Newton iterates farther than this many diameters are dropped
MAX_DIM = 3


@dataclass(frozen=True)
class Zero:
    location: np.ndarray
    jacobian_sign: int
    residual_norm: float
    det: float

    @property
    def point(self) -> np.ndarray:
        return self.location.view(complex)

    def to_json(self):
        return {"location": self.location.tolist(), "jacobianSign": self.jacobian_sign,
                "residualNorm": self.residual_norm, "det": self.det}


@dataclass
class DegreeCertificate:
    degree: int
    zeros: list = field(default_factory=list)
    boundary_margin: float = 0.0
    method: str = "zero-count"
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {"degree": self.degree, "method": self.method,
                "boundaryMargin": self.boundary_margin,
                "zeros": [z.to_json() for z in self.zeros], "evidence": self.evidence}


@dataclass(frozen=True)
class HomotopyResult:
    ok: bool
    min_modulus: float
    at_lambda: float
    at_point: np.ndarray

    def to_json(self):
        return {"ok": self.ok, "minModulus": self.min_modulus, "lambda": self.at_lambda,
                "point": [[float(v.real), float(v.imag)] for v in np.atleast_1d(self.at_point)]}


# --- real-linear algebra ----------------------------------------------------

def mult_by_i(n: int) -> np.ndarray:
    """J: multiplication by i on C^n = R^{2n}."""
    return np.kron(np.eye(n), np.array([[0.0, -1.0], [1.0, 0.0]]))


def realify(M, K=None) -> np.ndarray:
    """Real 2n x 2n matrix of z -> M z + K conj(z)."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    K = np.zeros_like(M) if K is None else np.atleast_2d(np.asarray(K, dtype=complex))
    p, s = M + K, M - K
    out = np.empty((2 * M.shape[0], 2 * M.shape[1]))
    out[0::2, 0::2] = p.real
    out[0::2, 1::2] = -s.imag
    out[1::2, 0::2] = p.imag
    out[1::2, 1::2] = s.real
    return out


def complex_parts(A) -> tuple[np.ndarray, np.ndarray]:
    """Split a real 2n x 2n map as z -> M z + K conj(z)."""
    A = _real_map(A)
    a, b = A[0::2, 0::2], A[0::2, 1::2]
    c, d = A[1::2, 0::2], A[1::2, 1::2]
    return ((a + d) + 1j * (c - b)) / 2, ((a - d) + 1j * (c + b)) / 2


def _real_map(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise InputError("a real-linear map on C^N must be a 2N x 2N matrix")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix entries must be finite")
    return M


def orientation_sign(M) -> int:
    M = _real_map(M)
    det = np.linalg.det(M)
    if abs(det) <= 1e-12:
        raise SingularMap(f"|det| = {abs(det):.3e}")
    return 1 if det > 0 else -1


def is_complex_linear(M, tol: float = 1e-10) -> bool:
    M = _real_map(M)
    J = mult_by_i(M.shape[0] // 2)
    return bool(np.max(np.abs(M @ J - J @ M)) < tol)


# --- homotopy ---------------------------------------------------------------

def _norms(values):
    values = np.asarray(values)
    return np.abs(values) if values.ndim == 1 else np.linalg.norm(values, axis=-1)


def homotopy_nonvanishing(F, G, points, steps: int = 33,
                          zero_tol: float = ZERO_TOL) -> HomotopyResult:
    """Check (1 - t) F + t G != 0 on the sampled boundary for t on a grid.

    Works for scalar maps (planar loops) and for C^N-valued maps alike.
    """
    steps = max(int(steps), 33)
    points = np.asarray(points)
    Fv, Gv = np.asarray(F(points)), np.asarray(G(points))
    scale = max(float(_norms(Fv).max()), float(_norms(Gv).max()))
    best = (np.inf, 0.0, 0)
    for t in np.linspace(0.0, 1.0, steps):
        mod = _norms((1 - t) * Fv + t * Gv)
        k = int(np.argmin(mod))
        if mod[k] < best[0]:
            best = (float(mod[k]), float(t), k)
    lo, t, k = best
    ok = scale > 0 and lo > zero_tol * scale
    return HomotopyResult(bool(ok), lo, t, points[k])


def refine_boundary_minimum(fun, domain, starts, lam=None, iters: int = 40):
    """Locally minimize |fun| over bD (and over lambda in [0, 1] if given).

    ``fun(z, lam)`` takes complex points (P, N) and lambdas (P,) and returns
    values (P, N) or (P,).  Batched Levenberg-Marquardt on the realified
    coordinates, with points projected radially onto bD.  Sampled minima
    can step over isolated zeros; this finds them from nearby samples.
    Returns (min modulus, point, lambda).
    """
    starts = np.ascontiguousarray(np.atleast_2d(np.asarray(starts, dtype=complex)))
    dim = starts.shape[1]
    with_lam = lam is not None
    lam0 = np.zeros(len(starts)) if lam is None else np.asarray(lam, dtype=float)

    def resid(V):
        Z = domain.project_to_boundary(np.ascontiguousarray(V[:, :2 * dim]).view(complex))
        L = np.clip(V[:, -1], 0.0, 1.0) if with_lam else lam0[: len(V)]
        out = np.asarray(fun(Z, L), dtype=complex).reshape(len(V), -1)
        return np.ascontiguousarray(out).view(float)

    V = starts.view(float)
    if with_lam:
        V = np.concatenate([V, lam0[:, None]], axis=1)
    V = V.copy()
    h = 1e-7 * domain.diameter
    r = resid(V)
    cost = np.sum(r ** 2, axis=1)
    mu = np.full(len(V), 1e-3)
    nv = V.shape[1]
    for _ in range(iters):
        J = np.empty((len(V), r.shape[1], nv))
        for k in range(nv):
            E = np.zeros(nv)
            E[k] = h
            J[:, :, k] = (resid(V + E) - resid(V - E)) / (2 * h)
        JT = np.transpose(J, (0, 2, 1))
        A = JT @ J
        A = A + mu[:, None, None] * (np.eye(nv) * (1 + np.einsum("pii->pi", A))[:, :, None])
        step = np.linalg.solve(A, -(JT @ r[..., None]))[..., 0]
        Vt = V + step
        if with_lam:
            Vt[:, -1] = np.clip(Vt[:, -1], 0.0, 1.0)
        rt = resid(Vt)
        ct = np.sum(rt ** 2, axis=1)
        better = ct < cost
        V[better], r[better], cost[better] = Vt[better], rt[better], ct[better]
        mu = np.where(better, mu / 3, mu * 4)
    k = int(np.argmin(cost))
    z = domain.project_to_boundary(np.ascontiguousarray(V[k:k + 1, :2 * dim]).view(complex))[0]
    lam_k = float(np.clip(V[k, -1], 0, 1)) if with_lam else float(lam0[k])
    return float(np.sqrt(cost[k])), z, lam_k


# --- zero counting ----------------------------------------------------------

def _realified(G, dim):
    def g(X):
        Z = np.ascontiguousarray(X).view(complex)
        V = np.asarray(G(Z), dtype=complex).reshape(Z.shape[:-1] + (dim,))
        return np.ascontiguousarray(V).view(float)
    return g


def _jacobians(g, X, h):
    n = X.shape[-1]
    J = np.empty(X.shape[:-1] + (n, n))
    for k in range(n):
        E = np.zeros(n)
        E[k] = h
        J[..., :, k] = (g(X + E) - g(X - E)) / (2 * h)
    return J


def _forward_jacobians(g, X, F, h):
    # one batched call for all n perturbations, reusing F = g(X)
    n = X.shape[-1]
    shifted = X[:, None, :] + h * np.eye(n)[None]
    Fs = g(shifted.reshape(-1, n)).reshape(len(X), n, n)
    return np.swapaxes(Fs - F[:, None, :], 1, 2) / h


def _solve(J, F):
    try:
        return np.linalg.solve(J, -F[..., None])[..., 0]
    except np.linalg.LinAlgError:
        return -(np.linalg.pinv(J) @ F[..., None])[..., 0]


def _newton(g, X, h, tol, center, reach):
    """Damped Newton on every row of X; returns (X, residual norms).

    Rows that wander farther than ``reach`` from ``center`` are dropped.
    """
    F = g(X)
    res = np.linalg.norm(F, axis=1)
    active = np.ones(len(X), dtype=bool)
    slow = np.zeros(len(X), dtype=int)
    for _ in range(MAX_NEWTON):
        active &= (res >= tol) & (np.linalg.norm(X - center, axis=1) < reach)
        # regular zeros attract quadratically; long stagnation means a nonzero minimum
        active &= slow < STALL
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xa, Fa, ra = X[idx], F[idx], res[idx]
        step = _solve(_forward_jacobians(g, Xa, Fa, h), Fa)
        step[~np.isfinite(step)] = 0.0
        t = np.ones(idx.size)
        pending = np.ones(idx.size, dtype=bool)
        for _half in range(MAX_HALVINGS):
            p = np.flatnonzero(pending)
            if p.size == 0:
                break
            Xt = Xa[p] + t[p, None] * step[p]
            Ft = g(Xt)
            rt = np.linalg.norm(Ft, axis=1)
            good = rt <= (1 - 1e-4 * t[p]) * ra[p]
            gp = p[good]
            Xa[gp], Fa[gp], ra[gp] = Xt[good], Ft[good], rt[good]
            pending[gp] = False
            t[p[~good]] /= 2
        # starts whose line search failed entirely are stuck
        stuck = idx[pending]
        slow[idx] = np.where(ra > 0.9 * res[idx], slow[idx] + 1, 0)
        X[idx], F[idx], res[idx] = Xa, Fa, ra
        active[stuck] = False
    return X, res


def _grid_starts(domain, density):
    """Cell-centered grid over the bounding box with >= density^(2N) interior points."""
    dim = domain.dim
    need = density ** (2 * dim)
    ext = domain.half_extents()
    lo = np.concatenate([[c.real - e, c.imag - e] for c, e in zip(domain.center, ext)])
    width = np.repeat(2 * ext, 2)
    m = density
    while True:
        ticks = (np.arange(m) + 0.5) / m
        mesh = np.stack(np.meshgrid(*([ticks] * (2 * dim)), indexing="ij"), -1).reshape(-1, 2 * dim)
        X = lo + mesh * width
        inside = domain.contains(np.ascontiguousarray(X).view(complex))
        if inside.sum() >= need:
            return X[inside]
        m += 1


def _zero_search(G, domain, density, seed, gscale, dedup=DEDUP):
    dim = domain.dim
    g = _realified(G, dim)
    diam = domain.diameter
    h = FD_STEP * diam
    rng = np.random.default_rng(seed)
    starts = np.concatenate([
        _grid_starts(domain, density),
        np.ascontiguousarray(domain.interior_points(16 * density ** dim, rng)).view(float),
    ])
    center = np.ascontiguousarray(domain.center).view(float)
    X, res = _newton(g, starts.copy(), h, POLISH_TOL * gscale, center, REACH * diam)
    ok = res < POLISH_TOL * gscale
    X, res = X[ok], res[ok]
    inside = domain.contains(np.ascontiguousarray(X).view(complex))
    X, res = X[inside], res[inside]
    kept = []
    for k in np.argsort(res, kind="stable"):
        if all(np.linalg.norm(X[k] - X[j]) > dedup * diam for j in kept):
            kept.append(k)
    zeros = []
    for k in sorted(kept, key=lambda j: tuple(X[j])):
        J = _jacobians(g, X[k][None, :], h)[0]
        det = float(np.linalg.det(J))
        if abs(det) <= DET_TOL:
            raise IrregularZero(f"|det DG| = {abs(det):.3e} at {X[k].round(6).tolist()}; perturb G")
        zeros.append(Zero(X[k].copy(), 1 if det > 0 else -1, float(res[k]), det))
    return zeros


def zero_count_degree(G, domain, grid_density: int = 4, seed: int = 0,
                      zero_tol: float = ZERO_TOL, check_doubling: bool = True,
                      boundary_count: int = 4096, dedup: float = DEDUP,
                      regularize: bool = False) -> DegreeCertificate:
    """Degree of G|bD as the signed count of zeros of G in D.

    ``G`` maps complex points of shape (..., N) to values of shape (..., N).
    Zeros are found by multistart damped Newton (finite-difference
    Jacobians) from a grid with at least grid_density^(2N) interior starts
    plus seeded random ones.  With ``check_doubling`` the search is repeated
    at twice the density and must agree.

    With ``regularize`` a degenerate zero does not stop the count: G is
    shifted by a seeded constant of size at most a quarter of min |G| on bD,
    which leaves the boundary degree unchanged, and the count is redone.
    """
    dim = domain.dim
    if dim > MAX_DIM:
        raise InputError(f"zero counting is limited to N <= {MAX_DIM}")
    if grid_density < 1:
        raise InputError("grid density must be positive")
    bpts = domain.boundary_points(boundary_count)
    bnorm = _norms(np.asarray(G(bpts)).reshape(len(bpts), dim))
    gmax = float(bnorm.max())
    margin = float(bnorm.min())
    if gmax == 0 or margin <= zero_tol * gmax:
        raise ZeroOnBoundary(f"min |G| on bD = {margin:.3e} (max {gmax:.3e})")
    gscale = max(1.0, gmax)
    evidence = {"gridDensity": grid_density, "seed": seed, "boundarySamples": len(bpts)}

    try:
        zeros = _zero_search(G, domain, grid_density, seed, gscale, dedup)
    except IrregularZero:
        if not regularize:
            raise
        c = _regular_shift(dim, margin, seed)
        G0 = G

        def G(z):
            return np.asarray(G0(z)) - c
        evidence["shift"] = [[float(x.real), float(x.imag)] for x in c]
        zeros = _zero_search(G, domain, grid_density, seed, gscale, dedup)
    degree = sum(z.jacobian_sign for z in zeros)
    if check_doubling:
        again = _zero_search(G, domain, 2 * grid_density, seed, gscale, dedup)
        deg2 = sum(z.jacobian_sign for z in again)
        if deg2 != degree or len(again) != len(zeros):
            raise SuspectMissedZeros(
                f"density {grid_density}: degree {degree} from {len(zeros)} zeros; "
                f"density {2 * grid_density}: degree {deg2} from {len(again)} zeros")
        evidence["doubledDensityDegree"] = deg2
    log.debug("zero count: %d zeros, degree %d", len(zeros), degree)
    return DegreeCertificate(degree, zeros, margin, "zero-count", evidence)


def _regular_shift(dim, margin, seed):
    # generic small value; |c| <= margin/4 keeps G - tc zero free on bD
    rng = np.random.default_rng([seed, 7919])
    c = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return 0.25 * margin * c / np.linalg.norm(c)


def boundary_margin(G, domain, count: int = 4096) -> float:
    bpts = domain.boundary_points(count)
    return float(_norms(np.asarray(G(bpts)).reshape(len(bpts), domain.dim)).min())


def jacobian_sign_at(G, point, diam: float = 2.0) -> int:
    """Orientation of DG at a complex point, by central differences."""
    point = np.asarray(point, dtype=complex)
    g = _realified(G, point.size)
    J = _jacobians(g, point.view(float)[None, :], FD_STEP * diam)[0]
    return orientation_sign(J)


__all__ = [
    "DegreeCertificate", "HomotopyResult", "Zero", "boundary_margin", "complex_parts",
    "homotopy_nonvanishing", "is_complex_linear", "jacobian_sign_at", "mult_by_i",
    "orientation_sign", "realify", "refine_boundary_minimum", "zero_count_degree",
]
