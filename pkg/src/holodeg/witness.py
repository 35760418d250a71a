"""Negative-degree witnesses for boundary data that does not extend.

Pipeline for a mixed-polynomial map Phi on a ball or ellipsoid: find a
slicing line where some component fails the disc test, split that
component on the slice circle as q + conj(s), pick b so that conj(s) - b
winds negatively, lift g = -q - b to the ambient space, complete with
T w_j in the remaining frame coordinates, and check the degree twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging

import numpy as np

from .boundary_maps import (HoloPoly, MixedMap, MixedPolynomial, UnivariateMixed,
                            compose_affine, restrict_to_line, split_on_circle)
from .degree_oracle import (DegreeCertificate, complex_parts, homotopy_nonvanishing,
                            is_complex_linear, orientation_sign, realify,
                            refine_boundary_minimum, zero_count_degree)
from .domains import ComplexLine, canonical_frame, slice_domain
from .errors import (DataExtends, HolodegError, IrregularZero, IsComplexLinear, NoValidB,
                     OracleDisagreement, SliceBoundaryZero, TCapExceeded)
from .extension import axis_lines, line_family_extension_test, structured_degree
from .winding import ZERO_TOL, winding_number

log = logging.getLogger(__name__)

B_GRID = 9
B_SPAN = 0.9
B_MARGIN = 1e-6
B_RETRIES = 8           # admissible b values tried before giving up on degenerate zeros
T_CAP = 2.0 ** 40
HOMOTOPY_STEPS = 33
REFINE_STARTS = 32
# choose_T wants homotopy margins of at least this fraction of the slice margin
MARGIN_FRACTION = 1e-3


@dataclass
class Witness1D:
    g: HoloPoly
    b: complex
    winding: int
    q: HoloPoly
    s: HoloPoly
    zeta0: complex
    min_modulus: float


@dataclass
class WitnessReport:
    P: MixedMap
    line: ComplexLine
    component: int
    q: HoloPoly
    s: HoloPoly
    b: complex
    T: float
    slice_winding: int
    ambient_degree: DegreeCertificate
    structured: DegreeCertificate
    homotopy_margins: list = field(default_factory=list)
    disc: object = None

    def to_json(self):
        return {
            "P": self.P.to_json(), "line": self.line.to_json(), "component": self.component,
            "slice": self.disc.to_json() if self.disc is not None else None,
            "split": {"q": self.q.to_json(), "s": self.s.to_json()},
            "b": [self.b.real, self.b.imag], "T": self.T,
            "sliceWinding": self.slice_winding,
            "ambientDegree": self.ambient_degree.to_json(),
            "structuredDegree": self.structured.to_json(),
            "homotopyMargins": self.homotopy_margins,
            "degreeP": self.P.degree,
        }


@dataclass
class LinearWitnessReport:
    H: np.ndarray
    H_complex: np.ndarray
    alpha: complex
    beta: complex
    T: float
    sign: int
    component: int
    direction: np.ndarray

    def to_json(self):
        return {"H": self.H.tolist(),
                "Hcomplex": [[[v.real, v.imag] for v in row] for row in self.H_complex],
                "alpha": [self.alpha.real, self.alpha.imag],
                "beta": [self.beta.real, self.beta.imag], "T": self.T, "sign": self.sign,
                "component": self.component,
                "direction": [[v.real, v.imag] for v in self.direction]}


def _b_candidates(r):
    ticks = np.linspace(-B_SPAN * r, B_SPAN * r, B_GRID)
    pts = [complex(x, y) for x in ticks for y in ticks if abs(complex(x, y)) < r]
    # nearest the center first, ties broken by angle
    return sorted(pts, key=lambda w: (round(abs(w), 12), round(float(np.angle(w)), 12)))


def witness_1d_candidates(u: UnivariateMixed, disc, n_check: int = 256):
    """Every admissible b on the search grid, in order, as Witness1D records.

    Uses u = q(w) + conj(s(w)) on the circle (w = zeta - a): with
    b = conj(s(w0)) for an interior w0, conj(s) - b has a zero inside and
    winds negatively, and g = -q - b leaves exactly that loop.
    """
    a, r = disc.center, disc.radius
    q, s = split_on_circle(u, disc)
    if s.is_constant:
        raise DataExtends("the antiholomorphic part s is constant on this slice")
    snorm = s.norm()
    ds = s.derivative()
    theta = 2 * np.pi * np.arange(n_check) / n_check
    ring = r * np.exp(1j * theta)
    s_ring = np.conj(s(ring))
    for w0 in _b_candidates(r):
        if abs(ds(w0)) <= B_MARGIN * snorm:
            continue
        b = complex(np.conj(s(w0)))
        if np.min(np.abs(s_ring - b)) <= B_MARGIN * snorm:
            continue
        gc = -q.coeffs.copy()
        gc[0] -= b
        g = HoloPoly(gc, a)
        res = winding_number(lambda z: u(z) + g.at(z), a, r)
        if res.winding < 0:
            yield Witness1D(g, b, res.winding, q, s, a + w0, res.min_modulus)


def witness_1d(u: UnivariateMixed, disc, n_check: int = 256) -> Witness1D:
    """Holomorphic g on the disc making zeta -> u + g wind negatively on its boundary.

    Takes the first admissible b = conj(s(w0)), scanning interior grid
    points w0 outward from the center.
    """
    for w1 in witness_1d_candidates(u, disc, n_check):
        return w1
    raise NoValidB("no admissible b on the search grid; enlarge the grid")


def lift_to_ambient(g: HoloPoly, U, base) -> MixedPolynomial:
    """P(z) = g(zeta) with zeta the first frame coordinate (U (z - base))_1."""
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    shift = MixedPolynomial.linear(U[0], -(U[0] @ np.asarray(base)) - g.basepoint)
    out = MixedPolynomial.constant(0.0, n)
    power = MixedPolynomial.constant(1.0, n)
    for c in g.coeffs:
        out = out + c * power
        power = power * shift
    return out


def _frame_axis(dim):
    return ComplexLine.axis(0, dim)


def choose_T(Phi_frame: MixedMap, P1: MixedPolynomial, domain_frame, disc,
             boundary_count: int = 4096, cap: float = T_CAP, winding: int | None = None,
             grid_density: int = 4, seed: int = 0):
    """Smallest T = 2^k for which the split map and the damped map are certified homotopic.

    Everything is in frame coordinates: the slicing line is the w_1-axis
    and component 0 of ``Phi_frame`` is the non-extending one.
      split:  w -> (Phi_1 + P_1, w_2, ..., w_N)
      damped: w -> (Phi_1 + P_1, w_2 + Phi_2 / T, ..., w_N + Phi_N / T)
    A T is accepted when the damped map and the straight-line homotopy stay above
    MARGIN_FRACTION * (min |Phi_1 + P_1| on the slice circle), both on the
    boundary samples and after local minimization from the worst samples.
    If ``winding`` is given, the zero-count degree of the damped map must equal it as
    well; sampled margins alone can miss a thin zero set of the homotopy.
    """
    dim = domain_frame.dim
    head = Phi_frame[0] + P1
    tail = MixedMap(Phi_frame.components[1:])
    zeta = disc.circle(512)
    circle = _frame_axis(dim).point(zeta)
    slice_vals = np.abs(head(circle))
    slice_margin = float(slice_vals.min())
    if slice_margin <= ZERO_TOL * max(float(slice_vals.max()), 1e-300):
        raise SliceBoundaryZero("Phi_1 + P_1 vanishes on the slice circle")
    pts = np.concatenate([domain_frame.boundary_points(boundary_count), circle])
    head_v = head(pts)
    tail_v = tail(pts)
    need = MARGIN_FRACTION * slice_margin

    def homotopy(z, lam, T):
        lam = np.asarray(lam)[:, None]
        return np.concatenate([head(z)[:, None], z[:, 1:] + lam * tail(z) / T], axis=1)

    def damped_map(z):
        flat = np.asarray(z, dtype=complex).reshape(-1, dim)
        return homotopy(flat, np.ones(len(flat)), T).reshape(np.shape(z))

    T = 1.0
    while T <= cap:
        v_damped = np.concatenate([head_v[:, None], pts[:, 1:] + tail_v / T], axis=1)
        n_damped = np.linalg.norm(v_damped, axis=1)
        if n_damped.min() > need:
            worst = np.argsort(n_damped)[:REFINE_STARTS]
            m_damped, _, _ = refine_boundary_minimum(lambda z, lam: homotopy(z, np.ones(len(z)), T),
                                                domain_frame, pts[worst])
            m_damped = min(m_damped, float(n_damped.min()))
            if m_damped > need:
                v_split = np.concatenate([head_v[:, None], pts[:, 1:]], axis=1)
                hom = homotopy_nonvanishing(lambda _: v_split, lambda _: v_damped, pts, HOMOTOPY_STEPS)
                if hom.ok and hom.min_modulus > need:
                    lams = np.linspace(0.0, 1.0, 5)
                    starts = np.repeat(pts[worst], lams.size, axis=0)
                    lam0 = np.tile(lams, len(worst))
                    mh, _, _ = refine_boundary_minimum(lambda z, lam: homotopy(z, lam, T),
                                                       domain_frame, starts, lam0)
                    mh = min(mh, hom.min_modulus)
                    if mh > need and _degree_matches(damped_map, winding, domain_frame,
                                                     grid_density, seed, boundary_count):
                        return T, {"sliceMargin": slice_margin, "dampedMargin": m_damped,
                                   "splitToDamped": mh}
        T *= 2
    raise TCapExceeded(f"no T <= {cap:g} certified the homotopy")


def _degree_matches(F, winding, domain, grid_density, seed, boundary_count):
    if winding is None:
        return True
    try:
        # a single search density; the final ambient check repeats it doubled
        cert = zero_count_degree(F, domain, grid_density, seed, check_doubling=False,
                                 boundary_count=boundary_count)
    except IrregularZero:
        raise  # a larger T will not help; the caller changes b
    except HolodegError:
        return False
    return cert.degree == winding


def _permutation(k, dim):
    return [k] + [j for j in range(dim) if j != k]


def assemble_witness(Phi: MixedMap, domain, seed: int = 0, line_count: int = 200,
                     grid_density: int = 4, boundary_count: int = 4096) -> WitnessReport:
    """Holomorphic polynomial P with deg((Phi + P)|bD) < 0, checked two ways."""
    dim = domain.dim
    verdict = line_family_extension_test(Phi, domain, line_count, seed,
                                         extra_lines=axis_lines(domain))
    if verdict.extends:
        raise DataExtends(f"no failing slice among {verdict.lines_tested} lines")
    line, k = verdict.witness_line, verdict.component
    U, Z = canonical_frame(line)
    Uh = U.conj().T
    perm = _permutation(k, dim)
    Phi_frame = MixedMap([compose_affine(Phi[j], Uh, Z) for j in perm])
    domain_frame = domain.transformed(U, Z)
    axis = _frame_axis(dim)
    disc = slice_domain(domain_frame, axis)
    u = restrict_to_line(Phi_frame[0], axis)
    last = None
    for tried, w1 in enumerate(witness_1d_candidates(u, disc)):
        if tried >= B_RETRIES:
            break
        try:
            return _complete_witness(Phi, domain, line, k, U, Z, perm, Phi_frame, domain_frame,
                                     disc, w1, grid_density, seed, boundary_count)
        except IrregularZero as exc:
            # a degenerate zero of the final map depends on b; move b
            log.info("b = %s gives a degenerate zero, trying the next b", w1.b)
            last = exc
    if last is not None:
        raise last
    raise NoValidB("no admissible b on the search grid; enlarge the grid")


def _complete_witness(Phi, domain, line, k, U, Z, perm, Phi_frame, domain_frame, disc, w1,
                      grid_density, seed, boundary_count):
    dim = domain.dim
    P1_frame = lift_to_ambient(w1.g, np.eye(dim), np.zeros(dim))
    T, margins = choose_T(Phi_frame, P1_frame, domain_frame, disc, boundary_count,
                          winding=w1.winding, grid_density=grid_density, seed=seed)

    # back to ambient coordinates: P_perm[i](z) = P_frame[i](U (z - Z))
    P_frame = [P1_frame] + [T * MixedPolynomial.var(i, dim) for i in range(1, dim)]
    P_amb = [None] * dim
    for i, j in enumerate(perm):
        P_amb[j] = compose_affine(P_frame[i], U, -(U @ Z))
    P = MixedMap(P_amb)

    # scaling step: damped map -> Phi + P in the frame is a positive diagonal rescaling
    pts = domain_frame.boundary_points(boundary_count)
    head = (Phi_frame[0] + P1_frame)(pts)
    rest = np.stack([c(pts) for c in Phi_frame.components[1:]], axis=-1)
    m_damped = np.concatenate([head[:, None], pts[:, 1:] + rest / T], axis=1)
    full = np.concatenate([head[:, None], T * pts[:, 1:] + rest], axis=1)
    hom_scale = homotopy_nonvanishing(lambda _: m_damped, lambda _: full, pts, HOMOTOPY_STEPS)
    margins["dampedToFinal"] = hom_scale.min_modulus

    total = Phi + P
    structured = structured_degree(total[k], domain, line)
    ambient = zero_count_degree(total, domain, grid_density, seed, boundary_count=boundary_count)
    if not (structured.degree == w1.winding == ambient.degree) or not hom_scale.ok:
        raise OracleDisagreement(
            f"slice winding {w1.winding}, structured {structured.degree}, "
            f"zero count {ambient.degree}, scaling homotopy ok={hom_scale.ok}")
    log.info("witness on component %d: degree %d with T=%g", k, ambient.degree, T)
    return WitnessReport(P, line, k, w1.q, w1.s, w1.b, T, w1.winding, ambient, structured,
                         [margins["sliceMargin"], margins["dampedMargin"],
                          margins["splitToDamped"], margins["dampedToFinal"]], disc)


def _antilinear_direction(K, rng):
    """(component j, unit direction W) with (K conj(W))_j != 0."""
    n = K.shape[0]
    for j in range(n):
        for kk in range(n):
            if abs(K[j, kk]) > 1e-10:
                W = np.zeros(n, dtype=complex)
                W[kk] = 1.0
                return j, W
    for _ in range(100):
        W = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        W /= np.linalg.norm(W)
        beta = K @ np.conj(W)
        for j in range(n):
            if abs(beta[j]) > 1e-10:
                return j, W
    raise IsComplexLinear("antilinear part is numerically zero")


def linear_witness(A, seed: int = 0, cap: float = T_CAP, steps: int = 33) -> LinearWitnessReport:
    """Complex-linear H with A + H invertible and orientation-reversing.

    ``A`` is a real 2N x 2N matrix (coordinates x_1, y_1, ..., x_N, y_N)
    that is not complex-linear.
    """
    A = np.asarray(A, dtype=float)
    if is_complex_linear(A):
        raise IsComplexLinear("A commutes with multiplication by i")
    M, K = complex_parts(A)
    n = M.shape[0]
    j, W = _antilinear_direction(K, np.random.default_rng(seed))
    U, _ = canonical_frame(ComplexLine(np.zeros(n), W))
    Pm = np.eye(n)[_permutation(j, n)]
    Mt = Pm @ M @ U.conj().T
    Kt = Pm @ K @ U.T
    alpha, beta = complex(Mt[0, 0]), complex(Kt[0, 0])
    E = np.zeros((n, n))
    E[0, 0] = 1.0
    ts = np.linspace(0.0, 1.0, max(steps, 33))
    T = 1.0
    while T <= cap:
        D = T * (np.eye(n) - E)
        ok = True
        for t in ts:
            # t = 0: (beta conj(w_1), T w_2, ...); t = 1: A~ + H~
            Mtt = D + t * (Mt - alpha * E)
            Ktt = beta * E + t * (Kt - beta * E)
            if np.linalg.svd(realify(Mtt, Ktt), compute_uv=False)[-1] <= 1e-8:
                ok = False
                break
        if ok:
            Hc = Pm.T @ (D - alpha * E) @ U
            H = realify(Hc)
            sign = orientation_sign(A + H)
            if sign == -1 and is_complex_linear(H):
                return LinearWitnessReport(H, Hc, alpha, beta, T, sign, j, W)
        T *= 2
    raise TCapExceeded(f"no T <= {cap:g} made the family invertible")


__all__ = [
    "LinearWitnessReport", "Witness1D", "WitnessReport", "assemble_witness", "choose_T",
    "lift_to_ambient", "linear_witness", "witness_1d", "witness_1d_candidates",
]
