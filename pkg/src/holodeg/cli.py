"""Command-line front end: ``holodeg <subcommand> [options]``.

Every subcommand prints one JSON document (stdout, or ``--out``).  Exit
codes: 0 success, 1 mathematical negative verdict (data does not extend,
map is complex-linear), 2 bad input, 3 numerical failure (including a
verify run with a failing experiment).  Errors are JSON objects too, never tracebacks.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
import logging
import os
import sys

import numpy as np

from . import __version__
from .boundary_maps import (MixedMap, MixedPolynomial, SampledLoop, UnivariateMixed,
                            restrict_to_line, sample_component, split_on_circle)
from .degree_oracle import DEDUP, zero_count_degree
from .domains import Ball, DiscSlice, disc_from_json, domain_from_json, line_from_json, slice_domain
from .errors import HolodegError, InputError, NonTransverseLine
from .extension import (DEFAULT_LINES, FOURIER_TOL, disc_extension_test,
                        line_family_extension_test, structured_degree)
from .serialize import complex_from_json, dumps, load_json, matrix_from_json
from .winding import ZERO_TOL, winding_number, winding_of_samples

log = logging.getLogger("holodeg")

# caps on the sample counts a config may ask for
CAPS = {"boundary": 1 << 16, "lines": 10000, "lambdaSteps": 4096, "gridDensity": 16}


@dataclass
class RunConfig:
    seed: int = 0
    zero_tol_scale: float = 1.0
    fourier_tol_scale: float = 1.0
    dedup_scale: float = 1.0
    boundary: int = 4096
    lines: int = DEFAULT_LINES
    lambda_steps: int = 33
    grid_density: int = 4
    output_path: str | None = None

    def validate(self):
        if not 0 <= self.seed < 2 ** 64:
            raise InputError("seed must be a 64-bit unsigned integer")
        for name in ("zero_tol_scale", "fourier_tol_scale", "dedup_scale"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive")
        counts = {"boundary": self.boundary, "lines": self.lines,
                  "lambdaSteps": self.lambda_steps, "gridDensity": self.grid_density}
        for key, val in counts.items():
            if not 1 <= val <= CAPS[key]:
                raise InputError(f"{key}={val} outside [1, {CAPS[key]}]")
        if self.lambda_steps < 33:
            raise InputError("lambdaSteps must be at least 33")
        return self

    @property
    def zero_tol(self):
        return ZERO_TOL * self.zero_tol_scale

    @property
    def fourier_tol(self):
        return FOURIER_TOL * self.fourier_tol_scale

    @property
    def dedup(self):
        return DEDUP * self.dedup_scale

    def to_json(self):
        return {"seed": self.seed,
                "tolerances": {"zeroTol": self.zero_tol_scale, "fourierTol": self.fourier_tol_scale,
                               "dedupRadius": self.dedup_scale},
                "sampleCounts": {"boundary": self.boundary, "lines": self.lines,
                                 "lambdaSteps": self.lambda_steps},
                "gridDensity": self.grid_density, "outputPath": self.output_path}

    @classmethod
    def from_json(cls, obj) -> "RunConfig":
        if not isinstance(obj, dict):
            raise InputError("config must be a JSON object")
        tol = obj.get("tolerances", {})
        counts = obj.get("sampleCounts", {})
        try:
            cfg = cls(seed=int(obj.get("seed", 0)),
                      zero_tol_scale=float(tol.get("zeroTol", 1.0)),
                      fourier_tol_scale=float(tol.get("fourierTol", 1.0)),
                      dedup_scale=float(tol.get("dedupRadius", 1.0)),
                      boundary=int(counts.get("boundary", 4096)),
                      lines=int(counts.get("lines", DEFAULT_LINES)),
                      lambda_steps=int(counts.get("lambdaSteps", 33)),
                      grid_density=int(obj.get("gridDensity", 4)),
                      output_path=obj.get("outputPath"))
        except (TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"bad config: {exc}") from exc
        return cfg.validate()


class _Parser(argparse.ArgumentParser):
    # usage errors become InputError so they come out as JSON with exit 2
    def error(self, message):
        raise InputError(f"usage: {message}")


# --- input readers -------------------------------------------------------------

def _read(path, reader, what):
    obj = load_json(path)
    try:
        return reader(obj)
    except HolodegError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise InputError(f"malformed {what} in {path}: {exc!r}") from exc


def _map_reader(obj):
    if isinstance(obj, dict) and "components" in obj:
        obj = obj["components"]
    if isinstance(obj, dict):
        return MixedMap([MixedPolynomial.from_json(obj)])
    return MixedMap.from_json(obj)


def _load_map(path):
    return _read(path, _map_reader, "map")


def _load_domain(path, dim):
    if path is None:
        return Ball(np.zeros(dim), 1.0)
    dom = _read(path, domain_from_json, "domain")
    if dom.dim != dim:
        raise InputError(f"domain has dimension {dom.dim}, map has {dim}")
    return dom


def _load_line(path):
    return _read(path, line_from_json, "line")


def _load_disc(args):
    if args.disc:
        return _read(args.disc, disc_from_json, "disc")
    return DiscSlice(complex(args.center[0], args.center[1]), float(args.radius))


def _load_loop(args):
    if args.csv:
        try:
            return SampledLoop.read_csv(args.csv)
        except (OSError, ValueError, IndexError) as exc:
            raise InputError(f"cannot read loop CSV {args.csv}: {exc}") from exc

    def reader(obj):
        if isinstance(obj, list):
            return SampledLoop.uniform([complex_from_json(v) for v in obj])
        return SampledLoop.from_json(obj)
    return _read(args.loop, reader, "loop")


def _component(Phi, k):
    if not 0 <= k < len(Phi):
        raise InputError(f"component {k} out of range for a map with {len(Phi)} components")
    return Phi[k]


def _figure(args, name):
    if not args.figures:
        return None
    return os.path.join(args.figures, name)


# --- subcommands ---------------------------------------------------------------

def cmd_wind(args, cfg):
    figures = []
    if args.poly:
        u = _read(args.poly, UnivariateMixed.from_json, "univariate polynomial")
        disc = _load_disc(args)
        res = winding_number(u, disc.center, disc.radius, zero_tol=cfg.zero_tol)
        loop = sample_component(u, disc, max(res.samples_used, 8))
    elif args.loop or args.csv:
        loop = _load_loop(args)
        res = winding_of_samples(loop.values, cfg.zero_tol)
    else:
        raise InputError("wind needs --loop, --csv or --poly")
    if args.export_csv:
        loop.write_csv(args.export_csv)
    path = _figure(args, "loop.png")
    if path:
        from .plotting import plot_loop
        figures.append(plot_loop(loop.values, path, f"winding {res.winding}"))
    out = res.to_json()
    if figures:
        out["figures"] = figures
    return out, 0


def cmd_slice(args, cfg):
    line = _load_line(args.line)
    dom = _load_domain(args.domain, line.dim)
    disc = slice_domain(dom, line)
    return {"transversal": disc is not None, "slice": disc}, 0


def cmd_split(args, cfg):
    if args.map:
        Phi = _load_map(args.map)
        line = _load_line(args.line)
        dom = _load_domain(args.domain, Phi.n)
        disc = slice_domain(dom, line)
        if disc is None:
            raise NonTransverseLine("line misses the domain or is tangent to it")
        u = restrict_to_line(_component(Phi, args.component), line)
    elif args.poly:
        u = _read(args.poly, UnivariateMixed.from_json, "univariate polynomial")
        disc = _load_disc(args)
    else:
        raise InputError("split needs --poly (with --disc or --center/--radius) or --map and --line")
    q, s = split_on_circle(u, disc)
    theta = 2 * np.pi * np.arange(256) / 256
    w = disc.radius * np.exp(1j * theta)
    uv = u(disc.center + w)
    err = float(np.max(np.abs(q(w) + np.conj(s(w)) - uv)))
    out = {"q": q, "s": s, "sIsConstant": s.is_constant, "disc": disc,
           "univariate": u, "maxReconstructionError": err}
    path = _figure(args, "split.png")
    if path:
        from .plotting import plot_loop
        out["figures"] = [plot_loop(uv, path, "restriction to the slice circle", "u",
                                    (q(w), "holomorphic part q"))]
    return out, 0


def cmd_extend_test(args, cfg):
    if args.poly or args.loop or args.csv:
        if args.poly:
            u = _read(args.poly, UnivariateMixed.from_json, "univariate polynomial")
            v = disc_extension_test(u, _load_disc(args), cfg.fourier_tol)
        else:
            v = disc_extension_test(_load_loop(args), fourier_tol=cfg.fourier_tol)
    else:
        if not args.map:
            raise InputError("extend-test needs --map, --poly, --loop or --csv")
        Phi = _load_map(args.map)
        dom = _load_domain(args.domain, Phi.n)
        v = line_family_extension_test(Phi, dom, cfg.lines, cfg.seed, fourier_tol=cfg.fourier_tol)
    return v, 0 if v.extends else 1


def cmd_degree_oracle(args, cfg):
    Phi = _load_map(args.map)
    dom = _load_domain(args.domain, Phi.n)
    if len(Phi) != dom.dim:
        raise InputError("the map must have one component per coordinate")
    cert = zero_count_degree(Phi, dom, cfg.grid_density, cfg.seed, cfg.zero_tol,
                             boundary_count=cfg.boundary, dedup=cfg.dedup,
                             regularize=args.regularize)
    out = cert.to_json()
    path = _figure(args, "zeros.png")
    if path:
        from .plotting import plot_zeros
        out["figures"] = [plot_zeros(cert, path)]
    return out, 0


def cmd_structured_degree(args, cfg):
    Phi = _load_map(args.map)
    phi = _component(Phi, args.component)
    line = _load_line(args.line)
    dom = _load_domain(args.domain, phi.n)
    cert = structured_degree(phi, dom, line, zero_tol=cfg.zero_tol)
    out = cert.to_json()
    path = _figure(args, "slice_loop.png")
    if path:
        from .plotting import plot_loop
        disc = slice_domain(dom, line)
        vals = phi(line.point(disc.circle(512)))
        out["figures"] = [plot_loop(vals, path, f"slice winding {cert.degree}")]
    return out, 0


def cmd_witness(args, cfg):
    from .witness import assemble_witness
    Phi = _load_map(args.map)
    dom = _load_domain(args.domain, Phi.n)
    if len(Phi) != dom.dim:
        raise InputError("the map must have one component per coordinate")
    rep = assemble_witness(Phi, dom, cfg.seed, cfg.lines, cfg.grid_density, cfg.boundary)
    out = rep.to_json()
    path = _figure(args, "witness_slice.png")
    if path:
        from .plotting import plot_loop
        zeta = rep.disc.circle(512)
        pts = rep.line.point(zeta)
        k = rep.component
        before = Phi[k](pts)
        after = before + rep.P[k](pts)
        out["figures"] = [plot_loop(after, path, f"slice winding {rep.slice_winding}",
                                    "with P", (before, "data alone"))]
    return out, 0


def cmd_linear_witness(args, cfg):
    from .witness import linear_witness
    obj = load_json(args.matrix)
    try:
        A = np.array(obj, dtype=float)
    except (TypeError, ValueError):
        A = matrix_from_json(obj)
        if np.any(A.imag != 0):
            raise InputError("linear-witness takes a real 2N x 2N matrix")
        A = A.real
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
        raise InputError(f"need a real 2N x 2N matrix, got shape {A.shape}")
    rep = linear_witness(A, cfg.seed, steps=cfg.lambda_steps)
    return rep, 0


def cmd_verify(args, cfg):
    from .experiments import EXPERIMENTS, run_all
    names = [k for k, *_ in EXPERIMENTS]
    only = None
    if args.only:
        only = [s.strip() for s in args.only.split(",") if s.strip()]
        bad = [s for s in only if s not in names]
        if bad:
            raise InputError(f"unknown experiments {bad}; choose from {names}")
    report = run_all(cfg.seed, only)
    if args.omit_runtime:
        for r in report["records"]:
            r.pop("runtime", None)
    elif args.figures:
        from .plotting import plot_degrees, plot_verify
        report["figures"] = [plot_verify(report, os.path.join(args.figures, "verify.png")),
                             plot_degrees(report, os.path.join(args.figures, "degrees.png"))]
    return report, 0 if report["passed"] else 3


COMMANDS = {
    "wind": cmd_wind, "slice": cmd_slice, "split": cmd_split, "extend-test": cmd_extend_test,
    "degree-oracle": cmd_degree_oracle, "structured-degree": cmd_structured_degree,
    "witness": cmd_witness, "linear-witness": cmd_linear_witness, "verify": cmd_verify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="RunConfig JSON file")
    common.add_argument("--seed", type=int, help="seed for all randomness (default 0, verify 7)")
    common.add_argument("--out", help="write the JSON here instead of stdout")
    common.add_argument("--figures", help="directory for matplotlib figures")
    common.add_argument("--zero-tol", type=float, dest="zero_tol_scale",
                        help="scale factor on the zero tolerances")
    common.add_argument("--fourier-tol", type=float, dest="fourier_tol_scale",
                        help="scale factor on the Fourier tolerance")
    common.add_argument("-v", "--verbose", action="store_true")

    geo = argparse.ArgumentParser(add_help=False)
    geo.add_argument("--domain", help="domain JSON (default: unit ball)")
    geo.add_argument("--map", help="map JSON (list of mixed polynomials)")
    geo.add_argument("--line", help="complex line JSON")
    geo.add_argument("--component", type=int, default=0, help="component index (0-based)")

    circ = argparse.ArgumentParser(add_help=False)
    circ.add_argument("--poly", help="univariate mixed polynomial JSON")
    circ.add_argument("--disc", help="disc JSON {center, radius}")
    circ.add_argument("--center", type=float, nargs=2, default=(0.0, 0.0), metavar=("RE", "IM"))
    circ.add_argument("--radius", type=float, default=1.0)

    loops = argparse.ArgumentParser(add_help=False)
    loops.add_argument("--loop", help="loop JSON: {theta, values} or a list of samples")
    loops.add_argument("--csv", help="loop CSV with columns theta,re,im")

    p = _Parser(prog="holodeg", description="Degrees of boundary maps and holomorphic extension.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sw = sub.add_parser("wind", parents=[common, circ, loops], help="winding number of a loop")
    sw.add_argument("--export-csv", help="write the sampled loop as CSV")
    sub.add_parser("slice", parents=[common, geo], help="disc cut out by a complex line")
    sub.add_parser("split", parents=[common, geo, circ],
                   help="holomorphic/antiholomorphic split on a circle")
    se = sub.add_parser("extend-test", parents=[common, geo, circ, loops],
                        help="does the data extend holomorphically")
    se.add_argument("--lines", type=int, help="number of random slicing lines")
    sd = sub.add_parser("degree-oracle", parents=[common, geo], help="signed zero count")
    sd.add_argument("--grid-density", type=int)
    sd.add_argument("--regularize", action="store_true",
                    help="shift by a small constant past degenerate zeros")
    sub.add_parser("structured-degree", parents=[common, geo],
                   help="degree of (phi, w2, ..., wN) by slice winding")
    sx = sub.add_parser("witness", parents=[common, geo], help="negative-degree witness P")
    sx.add_argument("--lines", type=int)
    sx.add_argument("--grid-density", type=int)
    sl = sub.add_parser("linear-witness", parents=[common],
                        help="orientation-reversing correction of an R-linear map")
    sl.add_argument("--matrix", required=True, help="real 2N x 2N matrix JSON")
    sv = sub.add_parser("verify", parents=[common], help="run the reproduction suite")
    sv.add_argument("--only", help="comma-separated experiment names")
    sv.add_argument("--omit-runtime", action="store_true",
                    help="drop wall-clock fields so the output is byte-identical across runs")
    return p


def _config(args):
    cfg = RunConfig.from_json(load_json(args.config)) if args.config else RunConfig()
    if args.command == "verify" and not args.config:
        cfg.seed = 7
    if args.seed is not None:
        cfg.seed = args.seed
    for name in ("zero_tol_scale", "fourier_tol_scale"):
        if getattr(args, name, None) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "lines", None) is not None:
        cfg.lines = args.lines
    if getattr(args, "grid_density", None) is not None:
        cfg.grid_density = args.grid_density
    if args.out:
        cfg.output_path = args.out
    return cfg.validate()


def _emit(text, path):
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def run_command(argv=None) -> int:
    """Parse ``argv``, run the subcommand, write JSON; returns the exit code."""
    out_path = None
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise InputError("missing subcommand; one of " + ", ".join(COMMANDS))
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        cfg = _config(args)
        out_path = cfg.output_path
        result, code = COMMANDS[args.command](args, cfg)
        _emit(dumps(result), out_path)
        return code
    except HolodegError as exc:
        _emit(dumps(exc.to_json()), out_path)
        return exc.exit_code
    except (np.linalg.LinAlgError, FloatingPointError, OverflowError) as exc:
        _emit(dumps({"error": type(exc).__name__, "message": str(exc)}), out_path)
        return 3


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
