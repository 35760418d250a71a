"""Holomorphic-extendibility tests on disc slices and the slice-degree reductions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundary_maps import (MixedMap, MixedPolynomial, SampledLoop, UnivariateMixed,
                            restrict_to_line, split_on_circle)
from .degree_oracle import (DegreeCertificate, homotopy_nonvanishing, zero_count_degree)
from .domains import ComplexLine, canonical_frame, slice_domain
from .errors import (DegenerateSlice, InputError, NonTransverseLine, OracleDisagreement,
                     ZeroOnBoundary, ZeroOnSliceBoundary)
from .winding import ZERO_TOL, fourier_coefficients, loop_fourier_coefficients, winding_number

FOURIER_TOL = 1e-8
DEFAULT_LINES = 200


@dataclass
class ExtensionVerdict:
    extends: bool
    defect: float
    tolerance: float
    coefficient_table: dict = field(default_factory=dict)
    witness_line: ComplexLine | None = None
    component: int | None = None
    lines_tested: int = 0
    sampled: bool = False

    def to_json(self):
        out = {"extends": self.extends, "defect": self.defect, "tolerance": self.tolerance,
               "coefficientTable": {str(k): v for k, v in sorted(self.coefficient_table.items())},
               "linesTested": self.lines_tested,
               "verdictKind": "sampled" if self.sampled else "exact-disc"}
        if self.witness_line is not None:
            out["witnessLine"] = self.witness_line.to_json()
            out["component"] = self.component
        return out


def disc_extension_test(u, disc=None, fourier_tol: float = FOURIER_TOL) -> ExtensionVerdict:
    """Does u on the circle bD(a, r) extend holomorphically into the disc?

    It does iff every Fourier coefficient c_k with k < 0 vanishes; the
    tolerance is fourier_tol * (1 + max |u| on the circle).
    """
    if isinstance(u, SampledLoop):
        n = u.values.size
        coeffs = loop_fourier_coefficients(u.theta, u.values, -(n // 2) + 1, -1)
        umax = float(np.max(np.abs(u.values)))
    elif isinstance(u, UnivariateMixed):
        if disc is None or not disc.radius > 0:
            raise DegenerateSlice("disc test needs a disc of positive radius")
        m = max(u.degree, 1)
        coeffs = fourier_coefficients(u, disc.center, disc.radius, -m, -1)
        theta = 2 * np.pi * np.arange(8 * (m + 1)) / (8 * (m + 1))
        umax = float(np.max(np.abs(u(disc.center + disc.radius * np.exp(1j * theta)))))
    else:
        raise InputError("disc test takes a UnivariateMixed or a SampledLoop")
    table = {k: abs(c) for k, c in coeffs.items()}
    defect = max(table.values(), default=0.0)
    tol = fourier_tol * (1 + umax)
    return ExtensionVerdict(defect <= tol, defect, tol, table)


def random_line(domain, rng) -> ComplexLine:
    """Basepoint uniform in the concentric half-size domain, direction uniform on the sphere."""
    base = domain.interior_points(1, rng, shrink=0.5)[0]
    w = rng.standard_normal(domain.dim) + 1j * rng.standard_normal(domain.dim)
    return ComplexLine.through(base, w)


def axis_lines(domain) -> list[ComplexLine]:
    """The coordinate axes through the domain's center."""
    return [ComplexLine.axis(k, domain.dim, domain.center) for k in range(domain.dim)]


def line_family_extension_test(Phi: MixedMap, domain, line_count: int = DEFAULT_LINES,
                               seed: int = 0, extra_lines=(),
                               fourier_tol: float = FOURIER_TOL) -> ExtensionVerdict:
    """Run the disc test on every component over a family of slicing lines.

    ``extra_lines`` are tried before the ``line_count`` seeded random lines.
    The first failing line (lowest-index component on that line) is the
    witness.  A passing verdict is only a sampled certificate.
    """
    if Phi.n != domain.dim or len(Phi) != domain.dim:
        raise InputError("map and domain dimensions differ")
    rng = np.random.default_rng(seed)
    lines = list(extra_lines)
    lines += [random_line(domain, rng) for _ in range(line_count)]
    worst = 0.0
    tol = 0.0
    tested = 0
    for line in lines:
        disc = slice_domain(domain, line)
        if disc is None:
            continue
        tested += 1
        for k, comp in enumerate(Phi):
            v = disc_extension_test(restrict_to_line(comp, line), disc, fourier_tol)
            worst, tol = max(worst, v.defect), max(tol, v.tolerance)
            if not v.extends:
                return ExtensionVerdict(False, v.defect, v.tolerance, v.coefficient_table,
                                        line, k, tested, sampled=True)
    return ExtensionVerdict(True, worst, tol, {}, None, None, tested, sampled=True)


def _scalar(phi):
    if isinstance(phi, MixedPolynomial):
        return phi
    if callable(phi):
        return phi
    raise InputError("phi must be a MixedPolynomial or a callable")


def structured_map(phi, line: ComplexLine):
    """Ambient map z -> (phi(z), w_2, ..., w_N) with w = U (z - Z) the line's frame."""
    U, Z = canonical_frame(line)
    phi = _scalar(phi)

    def F(z):
        z = np.asarray(z, dtype=complex)
        w = (z - Z) @ U.T
        return np.concatenate([np.asarray(phi(z))[..., None], w[..., 1:]], axis=-1)
    return F


def structured_degree(phi, domain, line: ComplexLine, n: int = 64,
                      zero_tol: float = ZERO_TOL) -> DegreeCertificate:
    """Degree of z -> (phi(z), w_2, ..., w_N) on bD from the slice winding of phi."""
    disc = slice_domain(domain, line)
    if disc is None:
        raise NonTransverseLine("line misses the domain or is tangent to it")
    phi = _scalar(phi)
    try:
        res = winding_number(lambda zeta: phi(line.point(zeta)), disc.center, disc.radius, n,
                             zero_tol)
    except ZeroOnBoundary as exc:
        raise ZeroOnSliceBoundary(str(exc)) from exc
    return DegreeCertificate(res.winding, [], res.min_modulus, "slice-winding",
                             {"slice": disc.to_json(), "winding": res.to_json()})


def scaled_degree_check(Phi, domain, t, grid_density: int = 4, seed: int = 0,
                        boundary_count: int = 4096, regularize: bool = True):
    """deg(t_1 Phi_1, ..., t_N Phi_N) against deg Phi for positive t_j.

    Both degrees come from the zero-count oracle; the straight-line homotopy
    between the two maps is checked too.  Returns (before, after, homotopy).
    """
    t = np.asarray(t, dtype=float)
    if t.size != domain.dim or np.any(t <= 0):
        raise InputError("need one positive scale factor per component")

    def Psi(z):
        return np.asarray(Phi(z)) * t

    before = zero_count_degree(Phi, domain, grid_density, seed, boundary_count=boundary_count,
                               regularize=regularize)
    after = zero_count_degree(Psi, domain, grid_density, seed, boundary_count=boundary_count,
                              regularize=regularize)
    hom = homotopy_nonvanishing(Phi, Psi, domain.boundary_points(boundary_count))
    if before.degree != after.degree or not hom.ok:
        raise OracleDisagreement(
            f"degree {before.degree} before scaling, {after.degree} after (homotopy ok={hom.ok})")
    return before, after, hom


__all__ = [
    "ExtensionVerdict", "axis_lines", "disc_extension_test", "line_family_extension_test",
    "random_line", "scaled_degree_check", "split_on_circle", "structured_degree",
    "structured_map",
]
