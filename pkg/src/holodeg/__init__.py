"""Degree of boundary maps and holomorphic extension on balls and ellipsoids.

Boundary data Phi on bD (D a ball or Hermitian ellipsoid in C^N) extends
holomorphically into D iff deg((Phi + P)|bD) >= 0 for every holomorphic
polynomial map P.  This package computes those degrees (slice winding and
signed zero counting), tests extendibility slice by slice, and builds
explicit negative-degree witnesses when extension fails.
"""

from .boundary_maps import (HoloPoly, MixedMap, MixedPolynomial, SampledLoop, UnivariateMixed,
                            compose_affine, restrict_to_line, split_on_circle)
from .degree_oracle import (DegreeCertificate, Zero, homotopy_nonvanishing, is_complex_linear,
                            orientation_sign, realify, zero_count_degree)
from .domains import (Ball, ComplexLine, DiscSlice, HermitianEllipsoid, canonical_frame,
                      slice_domain)
from .errors import HolodegError, InputError, NumericalFailure, Verdict
from .extension import (disc_extension_test, line_family_extension_test, scaled_degree_check,
                        structured_degree)
from .winding import fourier_coefficients, winding_number, winding_of_samples
from .witness import assemble_witness, linear_witness, witness_1d

__version__ = "0.1.0"

__all__ = [
    "Ball", "ComplexLine", "DegreeCertificate", "DiscSlice", "HermitianEllipsoid", "HoloPoly",
    "HolodegError", "InputError", "MixedMap", "MixedPolynomial", "NumericalFailure",
    "SampledLoop", "UnivariateMixed", "Verdict", "Zero", "assemble_witness", "canonical_frame",
    "compose_affine", "disc_extension_test", "fourier_coefficients", "homotopy_nonvanishing",
    "is_complex_linear", "line_family_extension_test", "linear_witness", "orientation_sign",
    "realify", "restrict_to_line", "scaled_degree_check", "slice_domain", "split_on_circle",
    "structured_degree", "winding_number", "winding_of_samples", "witness_1d",
    "zero_count_degree",
]
