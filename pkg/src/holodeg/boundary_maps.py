"""Mixed polynomials in z and conj(z), their line restrictions and circle splits.

A mixed polynomial is stored as a dict ``{(alpha, beta): coeff}`` meaning
``coeff * z**alpha * conj(z)**beta`` (multi-index powers).  Univariate
restrictions are dense 2-D arrays ``c[i, j]`` for ``zeta**i * conj(zeta)**j``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import comb
from typing import Iterable

import numpy as np

from .domains import MIN_SAMPLES, ComplexLine, DiscSlice
from .errors import DegenerateSlice, DimensionMismatch, InputError
from .serialize import complex_from_json, complex_to_json

# split coefficients below this fraction of the largest one are dropped
CLEANUP = 1e-12


class MixedPolynomial:
    """Polynomial in z_1..z_n and their conjugates with complex coefficients."""

    __slots__ = ("n", "terms", "_compiled")

    def __init__(self, n: int, terms: dict | None = None):
        if n < 1:
            raise InputError("a mixed polynomial needs n >= 1 variables")
        self.n = int(n)
        clean = {}
        for (alpha, beta), c in (terms or {}).items():
            alpha, beta = tuple(int(a) for a in alpha), tuple(int(b) for b in beta)
            if len(alpha) != n or len(beta) != n:
                raise DimensionMismatch(f"exponent length differs from n={n}")
            if min(alpha + beta) < 0:
                raise InputError("exponents must be nonnegative")
            c = complex(c)
            if c != 0:
                clean[(alpha, beta)] = c
        self.terms = clean
        self._compiled = None

    @classmethod
    def from_terms(cls, n: int, terms: Iterable) -> "MixedPolynomial":
        """Build from ``(coeff, z_exponents, zbar_exponents)`` triples."""
        out = {}
        for coeff, alpha, beta in terms:
            key = (tuple(alpha), tuple(beta))
            if key in out:
                raise InputError(f"duplicate exponent pair {key}")
            out[key] = coeff
        return cls(n, out)

    @classmethod
    def constant(cls, c, n: int) -> "MixedPolynomial":
        return cls(n, {((0,) * n, (0,) * n): c})

    @classmethod
    def var(cls, j: int, n: int, conjugate: bool = False) -> "MixedPolynomial":
        e = tuple(int(k == j) for k in range(n))
        zero = (0,) * n
        return cls(n, {(zero, e) if conjugate else (e, zero): 1.0})

    @classmethod
    def linear(cls, coeffs, const=0.0, conjugate: bool = False) -> "MixedPolynomial":
        """const + sum_j coeffs[j] * z_j (or conj(z_j))."""
        coeffs = np.asarray(coeffs, dtype=complex)
        n = coeffs.size
        p = cls.constant(const, n)
        for j, c in enumerate(coeffs):
            p = p + c * cls.var(j, n, conjugate)
        return p

    # -- structure -------------------------------------------------------
    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(a) + sum(b) for a, b in self.terms)

    @property
    def is_holomorphic(self) -> bool:
        return all(sum(b) == 0 for _, b in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def conj(self) -> "MixedPolynomial":
        return MixedPolynomial(self.n, {(b, a): np.conj(c) for (a, b), c in self.terms.items()})

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MixedPolynomial):
            if other.n != self.n:
                raise DimensionMismatch(f"n={self.n} vs n={other.n}")
            return other
        return MixedPolynomial.constant(other, self.n)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return MixedPolynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return MixedPolynomial(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MixedPolynomial):
            return MixedPolynomial(self.n, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(b1, b2)))
                out[key] = out.get(key, 0) + c1 * c2
        return MixedPolynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MixedPolynomial.constant(1.0, self.n)
        for _ in range(int(k)):
            out = out * self
        return out

    def __repr__(self):
        return f"MixedPolynomial(n={self.n}, terms={self.terms!r})"

    # -- evaluation ------------------------------------------------------
    def _compile(self):
        if self._compiled is None:
            if self.terms:
                keys = list(self.terms)
                A = np.array([k[0] for k in keys], dtype=int)
                B = np.array([k[1] for k in keys], dtype=int)
                C = np.array([self.terms[k] for k in keys], dtype=complex)
            else:
                A = B = np.zeros((0, self.n), dtype=int)
                C = np.zeros(0, dtype=complex)
            self._compiled = (A, B, C)
        return self._compiled

    def __call__(self, z) -> np.ndarray:
        """Evaluate at points ``z`` of shape (..., n)."""
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.n:
            raise DimensionMismatch(f"point has {z.shape[-1]} coordinates, polynomial n={self.n}")
        A, B, C = self._compile()
        if C.size == 0:
            return np.zeros(z.shape[:-1], dtype=complex)
        # table of powers z_j^k, gathered per term
        m = int(max(A.max(), B.max()))
        pw = np.empty(z.shape[:-1] + (m + 1, self.n), dtype=complex)
        pw[..., 0, :] = 1.0
        for k in range(1, m + 1):
            pw[..., k, :] = pw[..., k - 1, :] * z
        cols = np.arange(self.n)
        mono = np.prod(pw[..., A, cols] * np.conj(pw[..., B, cols]), axis=-1)
        return mono @ C

    # -- json ------------------------------------------------------------
    def to_json(self):
        terms = [{"re": c.real, "im": c.imag, "z": list(a), "zbar": list(b)}
                 for (a, b), c in sorted(self.terms.items())]
        return {"n": self.n, "terms": terms}

    @classmethod
    def from_json(cls, obj) -> "MixedPolynomial":
        n = int(obj["n"])
        triples = []
        for t in obj.get("terms", []):
            triples.append((complex(float(t.get("re", 0.0)), float(t.get("im", 0.0))),
                            t.get("z", [0] * n), t.get("zbar", [0] * n)))
        return cls.from_terms(n, triples)


class MixedMap:
    """A map C^N -> C^N with mixed-polynomial components."""

    def __init__(self, components):
        comps = list(components)
        if not comps:
            raise InputError("a map needs at least one component")
        n = comps[0].n
        if any(c.n != n for c in comps):
            raise DimensionMismatch("components disagree on the variable count")
        self.components = comps

    @property
    def n(self) -> int:
        return self.components[0].n

    def __len__(self):
        return len(self.components)

    def __getitem__(self, k):
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "MixedMap") -> "MixedMap":
        return MixedMap([a + b for a, b in zip(self.components, other.components)])

    def __call__(self, z) -> np.ndarray:
        return np.stack([c(z) for c in self.components], axis=-1)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    @property
    def is_holomorphic(self) -> bool:
        return all(c.is_holomorphic for c in self.components)

    def to_json(self):
        return [c.to_json() for c in self.components]

    @classmethod
    def from_json(cls, obj) -> "MixedMap":
        return cls([MixedPolynomial.from_json(c) for c in obj])


def evaluate(p: MixedPolynomial, z) -> complex:
    """Sum of coeff * z^alpha * conj(z)^beta at a single point."""
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1:
        raise DimensionMismatch("evaluate takes a single point; call the polynomial for batches")
    return complex(p(z))


def compose_affine(p: MixedPolynomial, M, v) -> MixedPolynomial:
    """p(v + M w) as a mixed polynomial in w (M is n x m complex)."""
    M = np.asarray(M, dtype=complex)
    v = np.asarray(v, dtype=complex)
    n, m = M.shape
    if n != p.n or v.size != n:
        raise DimensionMismatch("affine map does not match polynomial dimension")
    lin = [MixedPolynomial.linear(M[k], v[k]) for k in range(n)]
    clin = [x.conj() for x in lin]
    cache = {}

    def power(k, e, conj):
        key = (k, e, conj)
        if key not in cache:
            base = clin[k] if conj else lin[k]
            cache[key] = MixedPolynomial.constant(1.0, m) if e == 0 else power(k, e - 1, conj) * base
        return cache[key]

    out = MixedPolynomial(m)
    for (alpha, beta), c in p.terms.items():
        term = MixedPolynomial.constant(c, m)
        for k in range(n):
            if alpha[k]:
                term = term * power(k, alpha[k], False)
            if beta[k]:
                term = term * power(k, beta[k], True)
        out = out + term
    return out


def compose_map_affine(F: MixedMap, M, v) -> MixedMap:
    return MixedMap([compose_affine(c, M, v) for c in F.components])


@dataclass(frozen=True, eq=False)
class UnivariateMixed:
    """sum_{i,j} coef[i, j] * zeta**i * conj(zeta)**j."""

    coef: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coef, dtype=complex))
        if c.ndim != 2:
            raise InputError("univariate coefficient table must be 2-D")
        object.__setattr__(self, "coef", c)

    @classmethod
    def from_terms(cls, terms) -> "UnivariateMixed":
        terms = list(terms)
        size = 1 + max([max(i, j) for _, i, j in terms], default=0)
        c = np.zeros((size, size), dtype=complex)
        for coeff, i, j in terms:
            c[i, j] += coeff
        return cls(c)

    @property
    def degree(self) -> int:
        nz = np.argwhere(self.coef != 0)
        return int(nz.sum(axis=1).max()) if nz.size else 0

    @property
    def terms(self):
        return [(complex(self.coef[i, j]), int(i), int(j)) for i, j in np.argwhere(self.coef != 0)]

    def __call__(self, zeta) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        ni, nj = self.coef.shape
        # Horner in zeta for each power of conj(zeta), then Horner in conj(zeta)
        zb = np.conj(zeta)
        out = np.zeros(zeta.shape, dtype=complex)
        for j in range(nj - 1, -1, -1):
            col = np.zeros(zeta.shape, dtype=complex)
            for i in range(ni - 1, -1, -1):
                col = col * zeta + self.coef[i, j]
            out = out * zb + col
        return out

    def to_json(self):
        return {"terms": [{"re": c.real, "im": c.imag, "i": i, "j": j} for c, i, j in self.terms]}

    @classmethod
    def from_json(cls, obj) -> "UnivariateMixed":
        return cls.from_terms((complex(float(t.get("re", 0.0)), float(t.get("im", 0.0))),
                               int(t["i"]), int(t["j"])) for t in obj["terms"])


@dataclass(frozen=True, eq=False)
class HoloPoly:
    """sum_k coeffs[k] * w**k where w = zeta - basepoint."""

    coeffs: np.ndarray
    basepoint: complex = 0j

    def __post_init__(self):
        c = np.trim_zeros(np.atleast_1d(np.asarray(self.coeffs, dtype=complex)), "b")
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "basepoint", complex(self.basepoint))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_constant(self) -> bool:
        return self.coeffs.size == 1

    def __call__(self, w) -> np.ndarray:
        """Evaluate at the shifted variable w = zeta - basepoint."""
        return np.polyval(self.coeffs[::-1], np.asarray(w, dtype=complex))

    def at(self, zeta) -> np.ndarray:
        return self(np.asarray(zeta, dtype=complex) - self.basepoint)

    def derivative(self) -> "HoloPoly":
        k = np.arange(1, self.coeffs.size)
        return HoloPoly(self.coeffs[1:] * k, self.basepoint)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def to_json(self):
        return {"basepoint": complex_to_json(self.basepoint),
                "coeffs": [complex_to_json(c) for c in self.coeffs]}


@dataclass(frozen=True, eq=False)
class SampledLoop:
    theta: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if th.shape != v.shape or th.ndim != 1:
            raise InputError("loop angles and values must be matching 1-D arrays")
        if th.size < MIN_SAMPLES:
            raise InputError(f"a loop needs at least {MIN_SAMPLES} samples")
        if np.any(np.diff(th) <= 0) or th[0] < 0 or th[-1] >= 2 * np.pi:
            raise InputError("loop angles must increase strictly within [0, 2pi)")
        if not np.all(np.isfinite(v)):
            raise InputError("loop values must be finite")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "values", v)

    @classmethod
    def uniform(cls, values) -> "SampledLoop":
        values = np.asarray(values, dtype=complex)
        return cls(2 * np.pi * np.arange(values.size) / values.size, values)

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "re", "im"])
            for t, v in zip(self.theta, self.values):
                w.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])

    @classmethod
    def read_csv(cls, path) -> "SampledLoop":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and r[0] != "theta"]
        data = np.array(rows, dtype=float)
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2])

    def to_json(self):
        return {"theta": self.theta.tolist(), "values": [complex_to_json(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj) -> "SampledLoop":
        values = [complex_from_json(v) for v in obj["values"]]
        if "theta" in obj:
            return cls(np.asarray(obj["theta"], dtype=float), values)
        return cls.uniform(values)


def _expand_linear_power(const, slope, e):
    """Coefficients of (const + slope*x)**e in increasing powers of x."""
    k = np.arange(e + 1)
    return np.array([comb(e, i) for i in k], dtype=complex) * const ** (e - k) * slope ** k


def restrict_to_line(p: MixedPolynomial, line: ComplexLine) -> UnivariateMixed:
    """Expand p(Z + zeta W) into powers zeta^i conj(zeta)^j (binomial theorem)."""
    if p.n != line.dim:
        raise DimensionMismatch(f"polynomial n={p.n}, line in C^{line.dim}")
    m = p.degree
    out = np.zeros((m + 1, m + 1), dtype=complex)
    Z, W = line.base, line.direction
    for (alpha, beta), c in p.terms.items():
        hol = np.array([1.0 + 0j])
        anti = np.array([1.0 + 0j])
        for k in range(p.n):
            if alpha[k]:
                hol = np.convolve(hol, _expand_linear_power(Z[k], W[k], alpha[k]))
            if beta[k]:
                anti = np.convolve(anti, _expand_linear_power(np.conj(Z[k]), np.conj(W[k]), beta[k]))
        out[:hol.size, :anti.size] += c * np.outer(hol, anti)
    return UnivariateMixed(out)


def _shift_matrix(a, size):
    """B[i, p] = binom(i, p) a^(i-p): coefficients of (a + w)^i in w."""
    B = np.zeros((size, size), dtype=complex)
    for i in range(size):
        B[i, :i + 1] = _expand_linear_power(a, 1.0, i)
    return B


def _disc_params(disc):
    if isinstance(disc, DiscSlice):
        return disc.center, disc.radius
    a, r = disc
    return complex(a), float(r)


def split_on_circle(u: UnivariateMixed, disc) -> tuple[HoloPoly, HoloPoly]:
    """Write u = q(zeta - a) + conj(s(zeta - a)) on the circle |zeta - a| = r.

    On the circle conj(w) = r^2 / w for w = zeta - a, so w^i conj(w)^j equals
    r^(2j) w^(i-j); nonnegative net powers go to q, negative ones to s.
    The constant term is kept in q, so s(0) = 0 always.
    """
    a, r = _disc_params(disc)
    if not r > 0:
        raise DegenerateSlice("cannot split on a circle of radius 0")
    C = u.coef
    size = max(C.shape)
    C = np.pad(C, ((0, size - C.shape[0]), (0, size - C.shape[1])))
    # re-expand around the disc center: D[p, q] multiplies w^p conj(w)^q
    D = _shift_matrix(a, size).T @ C @ _shift_matrix(np.conj(a), size)
    q = np.zeros(size, dtype=complex)
    s = np.zeros(size, dtype=complex)
    for p in range(size):
        for qq in range(size):
            d = D[p, qq]
            if d == 0:
                continue
            k = p - qq
            if k >= 0:
                q[k] += d * r ** (2 * qq)
            else:
                s[-k] += np.conj(d) * r ** (2 * qq + 2 * k)
    big = max(np.max(np.abs(q)), np.max(np.abs(s)))
    if big > 0:
        q[np.abs(q) < CLEANUP * big] = 0
        s[np.abs(s) < CLEANUP * big] = 0
    return HoloPoly(q, a), HoloPoly(s, a)


def sample_component(u: UnivariateMixed, disc, n: int) -> SampledLoop:
    """Values of u at a + r exp(2 pi i k / n), k = 0..n-1."""
    a, r = _disc_params(disc)
    if n < MIN_SAMPLES:
        raise InputError(f"need at least {MIN_SAMPLES} samples")
    theta = 2 * np.pi * np.arange(n) / n
    return SampledLoop(theta, u(a + r * np.exp(1j * theta)))
