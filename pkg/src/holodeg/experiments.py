"""Seeded reproduction experiments behind ``holodeg verify``.

Each experiment returns a record dict with name, expected, observed,
passed and runtime; :func:`run_all` bundles them into a VerifyReport.
All randomness comes from ``numpy.random.default_rng`` (PCG64) seeded
from the single run seed, one child stream per experiment.
"""

from __future__ import annotations

import logging
import time
from itertools import product

import numpy as np

from .boundary_maps import (MixedMap, MixedPolynomial, UnivariateMixed, split_on_circle)
from .degree_oracle import (boundary_margin, orientation_sign, realify, is_complex_linear,
                            zero_count_degree)
from .domains import Ball, ComplexLine, DiscSlice
from .errors import DataExtends, IrregularZero, IsComplexLinear, ZeroOnBoundary
from .extension import scaled_degree_check, structured_degree, structured_map
from .winding import winding_number
from .witness import assemble_witness, linear_witness

log = logging.getLogger(__name__)

UNIT_BALL = Ball([0, 0], 1.0)
MARGIN = 1e-3


# --- random data --------------------------------------------------------------

def monomials(n, degree, holomorphic=False):
    """All (alpha, beta) exponent pairs of total degree <= degree."""
    out = []
    for e in product(range(degree + 1), repeat=2 * n):
        if sum(e) <= degree and not (holomorphic and any(e[n:])):
            out.append((tuple(e[:n]), tuple(e[n:])))
    return sorted(out, key=lambda k: (sum(k[0]) + sum(k[1]), k))


def random_poly(rng, n=2, degree=3, n_terms=5, holomorphic=False, scale=1.0,
                require_conj=False):
    pool = monomials(n, degree, holomorphic)
    while True:
        picks = rng.choice(len(pool), size=min(n_terms, len(pool)), replace=False)
        keys = [pool[i] for i in picks]
        if require_conj and not any(sum(b) for _, b in keys):
            continue
        coeffs = scale * (rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys)))
        return MixedPolynomial(n, dict(zip(keys, coeffs)))


def random_univariate(rng, degree=6):
    c = np.zeros((degree + 1, degree + 1), dtype=complex)
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            c[i, j] = rng.standard_normal() + 1j * rng.standard_normal()
    return UnivariateMixed(c)


def _margin_ok(F, domain=UNIT_BALL, count=4096):
    return boundary_margin(F, domain, count) > MARGIN


def _slice_margin(phi, n=1024):
    zeta = np.exp(2j * np.pi * np.arange(n) / n)
    pts = np.stack([zeta, np.zeros(n)], axis=-1)
    return float(np.abs(phi(pts)).min())


def random_structured_phi(rng, degree=3):
    """Mixed phi with slice-boundary margin > MARGIN on the z_1-axis of the unit ball."""
    while True:
        phi = random_poly(rng, 2, degree, n_terms=int(rng.integers(2, 6)), scale=0.7)
        phi = phi + complex(rng.normal(scale=0.3), rng.normal(scale=0.3))
        if _slice_margin(phi) > MARGIN:
            return phi


def random_holomorphic_map(rng, degree=2):
    """Holomorphic polynomial map of C^2, nonvanishing on the unit sphere."""
    z1, z2 = MixedPolynomial.var(0, 2), MixedPolynomial.var(1, 2)
    while True:
        lead = [z1 ** int(rng.integers(1, degree + 1)), z2 ** int(rng.integers(1, degree + 1))]
        comps = [lead[k] + random_poly(rng, 2, degree, 3, holomorphic=True, scale=0.35)
                 for k in range(2)]
        F = MixedMap(comps)
        if _margin_ok(F):
            return F


def random_nonextendable_map(rng, degree=3):
    """Mixed map on C^2 with a genuine conj(z) term in its first component."""
    z2 = MixedPolynomial.var(1, 2)
    while True:
        p1 = random_poly(rng, 2, degree, n_terms=int(rng.integers(2, 5)), scale=0.8,
                         require_conj=True)
        p2 = z2 + random_poly(rng, 2, degree, 2, scale=0.3)
        yield MixedMap([p1, p2])


def _timed(name, expected, body):
    t0 = time.perf_counter()
    try:
        observed, passed, details = body()
    except Exception as exc:  # recorded as a failed experiment, never swallowed silently
        log.exception("experiment %s failed", name)
        observed, passed, details = f"{type(exc).__name__}: {exc}", False, {}
    return {"name": name, "expected": expected, "observed": observed, "passed": bool(passed),
            "runtime": time.perf_counter() - t0, "details": details}


def _retry_irregular(fn, rng, attempts=5):
    """Call fn(rng); on IrregularZero (a nongeneric draw) redraw."""
    for _ in range(attempts):
        try:
            return fn(rng)
        except IrregularZero:
            continue
    raise IrregularZero("repeated irregular zeros in random draws")


# --- experiments --------------------------------------------------------------

def exp_winding(rng):
    """Monomial windings for |k| <= 8 and the product rule on random loops."""
    def body():
        mono = []
        for k in range(-8, 9):
            w = winding_number(lambda z: z ** k if k >= 0 else np.conj(z) ** (-k)).winding
            mono.append(w == k)
            wc = winding_number(lambda z: np.conj(z) ** k if k >= 0 else z ** (-k)).winding
            mono.append(wc == -k)
        prod_ok = 0
        trials = 0
        while trials < 50:
            f = random_univariate(rng, 3)
            g = random_univariate(rng, 3)
            try:
                wf, wg = winding_number(f).winding, winding_number(g).winding
                wfg = winding_number(lambda z: f(z) * g(z)).winding
            except ZeroOnBoundary:
                continue
            trials += 1
            prod_ok += (wfg == wf + wg)
        ok = all(mono) and prod_ok == 50
        return f"monomials {sum(mono)}/{len(mono)}, product rule {prod_ok}/50", ok, {}
    return body


def exp_slice_degree(rng, cases=25):
    line = ComplexLine.axis(0, 2)

    def body():
        agree = 0
        pairs = []
        for _ in range(cases):
            def one(r):
                phi = random_structured_phi(r)
                s = structured_degree(phi, UNIT_BALL, line).degree
                o = zero_count_degree(structured_map(phi, line), UNIT_BALL, seed=int(r.integers(2**31))).degree
                return s, o
            s, o = _retry_irregular(one, rng)
            pairs.append([s, o])
            agree += s == o
        return f"{agree}/{cases} exact agreements", agree == cases, {"pairs": pairs}
    return body


def _random_scaled_case(rng):
    z2 = MixedPolynomial.var(1, 2)
    while True:
        phi = random_structured_phi(rng, 2)
        Phi = MixedMap([phi, z2 + random_poly(rng, 2, 2, 2, scale=0.25)])
        if _margin_ok(Phi):
            return Phi, rng.uniform(0.1, 10.0, size=2)


def exp_scaling(rng, cases=25):
    def body():
        passed = 0
        pairs = []
        for _ in range(cases):
            def one(r):
                Phi, t = _random_scaled_case(r)
                before, after, _ = scaled_degree_check(Phi, UNIT_BALL, t, seed=int(r.integers(2**31)))
                return before.degree, after.degree
            b, a = _retry_irregular(one, rng)
            pairs.append([b, a])
            passed += a == b
        return f"{passed}/{cases} scaling-invariant", passed == cases, {"pairs": pairs}
    return body


def _holomorphic_degree(F, rng):
    cert = zero_count_degree(F, UNIT_BALL, seed=int(rng.integers(2**31)))
    signs_ok = all(z.jacobian_sign == 1 for z in cert.zeros)
    return cert.degree, len(cert.zeros), signs_ok


def exp_holomorphic_nonneg(rng, cases=25):
    def body():
        good = 0
        degrees = []
        for _ in range(cases):
            deg, count, signs_ok = _retry_irregular(
                lambda r: _holomorphic_degree(random_holomorphic_map(r), r), rng)
            degrees.append(deg)
            good += deg >= 0 and deg == count and signs_ok
        return f"{good}/{cases} nonnegative and equal to zero count", good == cases, \
            {"degrees": degrees}
    return body


def extendable_maps(rng, count=10):
    """Boundary data that extends: holomorphic maps, some written with |z|^2 - 1 factors.

    h + (|z|^2 - 1) k agrees with h on the unit sphere although it is not
    holomorphic as a polynomial.
    """
    rho = (MixedPolynomial.var(0, 2) * MixedPolynomial.var(0, 2, True)
           + MixedPolynomial.var(1, 2) * MixedPolynomial.var(1, 2, True) - 1.0)
    maps = []
    for i in range(count):
        H = random_holomorphic_map(rng)
        if i % 2:
            H = MixedMap([c + rho * random_poly(rng, 2, 1, 2, scale=0.2) for c in H])
        maps.append(H)
    return maps


def exp_only_if(rng, n_maps=10, n_perturb=20):
    def body():
        degrees = []
        total = bad = 0
        extends_ok = 0
        for Phi in extendable_maps(rng, n_maps):
            try:
                assemble_witness(Phi, UNIT_BALL, seed=int(rng.integers(2**31)), line_count=40)
            except DataExtends:
                extends_ok += 1
            done = 0
            while done < n_perturb:
                F = MixedMap([random_poly(rng, 2, 2, 3, holomorphic=True, scale=0.3) for _ in range(2)])
                total_map = Phi + F
                if not _margin_ok(total_map):
                    continue
                try:
                    deg = zero_count_degree(total_map, UNIT_BALL, seed=int(rng.integers(2**31))).degree
                except IrregularZero:
                    continue
                done += 1
                total += 1
                degrees.append(deg)
                bad += deg < 0
        ok = bad == 0 and extends_ok == n_maps
        return (f"{total - bad}/{total} perturbed degrees >= 0; "
                f"{extends_ok}/{n_maps} maps refused a witness"), ok, \
            {"degreeHistogram": _histogram(degrees)}
    return body


def _histogram(values):
    out = {}
    for v in values:
        out[str(v)] = out.get(str(v), 0) + 1
    return dict(sorted(out.items(), key=lambda kv: int(kv[0])))


def exp_witness(rng, cases=20):
    def body():
        c1 = MixedPolynomial.var(0, 2, True)
        z2 = MixedPolynomial.var(1, 2)
        canon = assemble_witness(MixedMap([c1, z2]), UNIT_BALL, seed=int(rng.integers(2**31)))
        canon_ok = canon.ambient_degree.degree == canon.structured.degree == -1
        records = []
        good = 0
        gen = random_nonextendable_map(rng)
        while len(records) < cases:
            Phi = next(gen)
            try:
                rep = assemble_witness(Phi, UNIT_BALL, seed=int(rng.integers(2**31)))
            except (IrregularZero, DataExtends):
                continue
            m = Phi.degree
            ok = (rep.ambient_degree.degree == rep.structured.degree == rep.slice_winding < 0
                  and rep.P.is_holomorphic and rep.P.degree <= max(m, 1)
                  and rep.ambient_degree.boundary_margin > 0)
            good += ok
            records.append({"degree": rep.ambient_degree.degree, "T": rep.T,
                            "component": rep.component, "degP": rep.P.degree, "degPhi": m})
        ok = canon_ok and good == cases
        return (f"canonical degree {canon.ambient_degree.degree}; "
                f"{good}/{cases} certified negative witnesses"), ok, {"witnesses": records}
    return body


def exp_linear(rng, cases=10):
    def body():
        good = 0
        signs = []
        mats = [realify(np.diag([0, 1]), np.diag([1, 0]))]
        while len(mats) < cases:
            A = rng.standard_normal((4, 4))
            if not is_complex_linear(A):
                mats.append(A)
        for A in mats:
            rep = linear_witness(A)
            ok = is_complex_linear(rep.H) and orientation_sign(A + rep.H) == -1 and rep.sign == -1
            signs.append(rep.sign)
            good += ok
        refused = 0
        for _ in range(cases):
            M = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            try:
                linear_witness(realify(M))
            except IsComplexLinear:
                refused += 1
        ok = good == cases and refused == cases
        return f"{good}/{cases} orientation-reversing; {refused}/{cases} complex-linear refused", \
            ok, {"signs": signs}
    return body


def exp_split(rng, cases=200):
    def body():
        worst = 0.0
        good = 0
        theta = 2 * np.pi * np.arange(256) / 256
        for _ in range(cases):
            u = random_univariate(rng, int(rng.integers(0, 7)))
            a = complex(rng.normal(), rng.normal())
            r = float(rng.uniform(0.2, 3.0))
            q, s = split_on_circle(u, DiscSlice(a, r))
            zeta = a + r * np.exp(1j * theta)
            uv = u(zeta)
            err = np.max(np.abs(q(zeta - a) + np.conj(s(zeta - a)) - uv))
            rel = err / (1 + np.max(np.abs(uv)))
            worst = max(worst, rel)
            good += rel < 1e-9 and q.degree <= max(u.degree, 0) and s.degree <= max(u.degree, 0)
        return f"{good}/{cases} within 1e-9 (worst {worst:.2e})", good == cases, {"worst": worst}
    return body


EXPERIMENTS = [
    ("winding", "winding(z^k)=k, winding(conj z^k)=-k, product rule", exp_winding, 5.0),
    ("slice_degree", "slice winding == zero count (25 cases)", exp_slice_degree, 120.0),
    ("scaling", "degree invariant under positive scaling (25 cases)", exp_scaling, 120.0),
    ("holomorphic_nonnegative", "degree >= 0 == zero count (25 cases)", exp_holomorphic_nonneg, 120.0),
    ("only_if", "extendable + holomorphic perturbations: degree >= 0", exp_only_if, 180.0),
    ("witness", "certified negative degree witnesses (20 cases)", exp_witness, 300.0),
    ("linear_witness", "orientation-reversing complex-linear H", exp_linear, 10.0),
    ("split_identity", "q + conj(s) reconstruction within 1e-9", exp_split, 10.0),
]


def run_experiment(name, seed=7):
    for idx, (key, expected, factory, budget) in enumerate(EXPERIMENTS):
        if key == name:
            rng = np.random.default_rng([seed, idx])
            rec = _timed(key, expected, factory(rng))
            rec["budget"] = budget
            rec["passed"] = rec["passed"] and rec["runtime"] < budget
            return rec
    raise KeyError(name)


def run_all(seed=7, only=None):
    records = [run_experiment(key, seed) for key, *_ in EXPERIMENTS if only is None or key in only]
    # oracle stability is enforced inside every zero count (doubling check)
    stable = all("SuspectMissedZeros" not in str(r["observed"]) for r in records)
    records.append({"name": "oracle_stability", "expected": "no SuspectMissedZeros",
                    "observed": "stable" if stable else "unstable", "passed": stable,
                    "runtime": 0.0, "budget": None, "details": {}})
    return {"seed": seed, "records": records, "passed": all(r["passed"] for r in records)}
