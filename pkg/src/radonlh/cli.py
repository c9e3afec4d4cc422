"""Command-line driver: transforms, inversions and the self-test suite.

Results go to CSV (``--out``, default stdout) with ``%.17g`` numbers; a JSON
manifest (``--manifest``, default ``<out>.json`` when ``--out`` is a file)
echoes the full configuration, library versions and seeds.

Exit codes: 0 success, 1 configuration error, 2 mathematical domain error
(the error class name is printed), 3 self-test failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import platform
import re
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, testlib
from .errors import RadonError
from .geometry import unit

FORMAT_VERSION = 1


class ConfigError(Exception):
    """Invalid command-line configuration (exit code 1)."""


# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------


@dataclass
class JobConfig:
    """Everything a run depends on; echoed verbatim into the manifest."""

    command: str
    n: int = 3
    resolution: int = 32
    radial_nodes: int = 32
    L: int = 8
    samples: int = 100_000
    seed: int = 0
    out: str | None = None
    manifest: str | None = None
    figure: str | None = None
    threads: int | None = None
    options: dict = field(default_factory=dict)

    def validate(self):
        if not 3 <= self.n <= 6:
            raise ConfigError(f"--n must be between 3 and 6, got {self.n}")
        if self.resolution < 4:
            raise ConfigError("--resolution must be at least 4")
        if self.radial_nodes < 8:
            raise ConfigError("--radial-nodes must be at least 8")
        if self.L < 0:
            raise ConfigError("--L must be non-negative")
        if self.samples < 2:
            raise ConfigError("--samples must be at least 2")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("--threads must be positive")


_TERM = re.compile(r"^\s*(-)?\s*(?:([0-9.]+(?:[eE][+-]?[0-9]+)?)\s*\*\s*)?e(\d+)\s*$")


def parse_vector(token: str, n: int) -> np.ndarray:
    """``e2``, ``-e1``, ``0.5*e3``, ``e1+-2*e2`` or colon-separated components ``0:1:0``."""
    token = token.strip()
    if ":" in token:
        try:
            v = np.array([float(x) for x in token.split(":")])
        except ValueError as exc:
            raise ConfigError(f"bad vector {token!r}") from exc
        if v.size != n:
            raise ConfigError(f"vector {token!r} has {v.size} components, expected {n}")
        return v
    v = np.zeros(n)
    for term in token.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ConfigError(f"bad vector {token!r}")
        k = int(m.group(3))
        if not 1 <= k <= n:
            raise ConfigError(f"basis index e{k} outside 1..{n}")
        c = float(m.group(2)) if m.group(2) else 1.0
        v[k - 1] += -c if m.group(1) else c
    return v


def parse_floats(token: str) -> np.ndarray:
    """Comma list ``0.5,1,2`` or a range ``start:stop:count``."""
    try:
        if token.count(":") == 2:
            a, b, k = token.split(":")
            return np.linspace(float(a), float(b), int(k))
        return np.array([float(x) for x in token.split(",")])
    except ValueError as exc:
        raise ConfigError(f"bad number list {token!r}") from exc


# ----------------------------------------------------------------------------
# built-in functions
# ----------------------------------------------------------------------------


def _builtin(spec: str, kind: str, n: int, p: float | None = None):
    """Resolve ``builtin:NAME`` to a line function f0(omega, r) or hyperplane function phi(theta, t)."""
    if not spec.startswith("builtin:"):
        raise ConfigError(f"expected builtin:NAME, got {spec!r}")
    name = spec.split(":", 1)[1]
    line = {"gaussian": testlib.gaussian_line, "omega3sq": testlib.omega3sq_line}
    plane = {
        "gaussian": testlib.gaussian_t,
        "abs_t_theta2": testlib.abs_t_theta2,
        "theta2_t": testlib.theta2_t,
        "kelvin_pair": testlib.kelvin_pair,
    }
    if kind == "line":
        if name not in line:
            raise ConfigError(f"unknown line function {name!r}; choose from {sorted(line)}")
        return line[name]
    if name == "phi_p":
        from .kelvin_route import phi_p

        return phi_p(n, n / (n - 2.0) if p is None else p)
    if name not in plane:
        raise ConfigError(f"unknown hyperplane function {name!r}; choose from {sorted(plane) + ['phi_p']}")
    return plane[name]


def _sphere_builtin(spec: str, n: int):
    """Functions on S^{n-1} for the funk command: ``omega3sq``, ``gaussian`` (exp(-x_1^2)), ``zonal:K``."""
    name = spec.split(":", 1)[1] if spec.startswith("builtin:") else spec
    if name == "omega3sq":
        return lambda x: np.asarray(x)[..., 2] ** 2
    if name == "gaussian":
        return lambda x: np.exp(-np.asarray(x)[..., 0] ** 2)
    if name.startswith("zonal"):
        from scipy.special import eval_gegenbauer

        k = int(name.split(":")[1]) if ":" in name else 2
        return lambda x: eval_gegenbauer(k, (n - 2) / 2.0, np.asarray(x)[..., n - 1])
    raise ConfigError(f"unknown sphere function {name!r}")


def load_hyperplane_csv(path: str, n: int, L: int, decay_rate: float = 50.0):
    """Read samples (theta_1..theta_n, t, value) into a spectral hyperplane function.

    Rows sharing a t value are fitted by least squares in the harmonic basis
    of degree <= L; coefficients are interpolated by a cubic spline in t^2
    and set to zero beyond the largest sampled |t|.
    """
    from scipy.interpolate import CubicSpline

    from ._cheb import HalfLineInterpolant
    from .radon_line import HyperplaneFunction
    from .spherical import harmonic_basis

    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    want = [f"theta_{i + 1}" for i in range(n)] + ["t", "value"]
    if header[: n + 2] != want:
        raise ConfigError(f"{path}: header must start with {','.join(want)}")
    ts = np.unique(np.abs(data[:, n]))
    coeffs = []
    for t in ts:
        rows = data[np.abs(np.abs(data[:, n]) - t) < 1e-12]
        Y = harmonic_basis(rows[:, :n], n, L)
        c, *_ = np.linalg.lstsq(Y, rows[:, n + 1], rcond=None)
        coeffs.append(c)
    if len(ts) < 4:
        raise ConfigError("need samples at four or more distinct t values")
    spline = CubicSpline(ts**2, np.array(coeffs), axis=0)
    tmax = ts[-1]

    def prof(r):
        r = np.asarray(r, dtype=float)
        out = spline(np.clip(r, 0.0, tmax) ** 2)
        return np.where((r <= tmax)[..., None], out, 0.0)

    return HyperplaneFunction(n, L, decay_rate, profile=HalfLineInterpolant(prof, N=96, scale=max(1.0, tmax / 4.0)))


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def _theta_list(args, n):
    if getattr(args, "theta_grid", None):
        from .spherical import sphere_rule

        return sphere_rule(n, args.theta_grid)[0]
    return np.array([unit(parse_vector(tok, n)) for tok in args.theta.split(",")])


def _cols(prefix, n):
    return [f"{prefix}_{i + 1}" for i in range(n)]


def cmd_forward(cfg, args):
    from .radon_line import QuasiRadialFunction, radon_forward_quasiradial

    n = cfg.n
    f = QuasiRadialFunction.from_callable(_builtin(args.f, "line", n), n, L=cfg.L, decay_rate=args.decay)
    thetas = _theta_list(args, n)
    rows = []
    for t in parse_floats(args.t):
        vals = np.atleast_1d(radon_forward_quasiradial(f, thetas, t, resolution=cfg.resolution))
        rows += [[*th, t, v] for th, v in zip(thetas, vals)]
    return _cols("theta", n) + ["t", "value"], rows


def cmd_invert(cfg, args):
    from .radon_line import QuasiRadialFunction, radon_forward, radon_invert

    n = cfg.n
    r = parse_floats(args.r)
    omegas = _theta_list(args, n)
    exact = None
    if args.g:
        g = load_hyperplane_csv(args.g, n, cfg.L, args.decay)
    else:
        f0 = _builtin(args.f, "line", n)
        g = radon_forward(QuasiRadialFunction.from_callable(f0, n, L=cfg.L, decay_rate=args.decay))
        exact = f0
    h = radon_invert(g, r, allow_odd=args.allow_odd)
    rows = []
    for om in omegas:
        vals = h(np.tile(om, (len(r), 1)), r)
        for ri, v in zip(r, vals):
            rows.append([*om, ri, v] + ([float(exact(om, ri))] if exact else []))
    return _cols("omega", n) + ["r", "value"] + (["exact"] if exact else []), rows


def _lines(args, n):
    out = []
    for spec in args.line.split(";"):
        parts = spec.split(",")
        if len(parts) != 2:
            raise ConfigError("--line takes OMEGA,U pairs separated by ';'")
        om, u = unit(parse_vector(parts[0], n)), parse_vector(parts[1], n)
        if abs(om @ u) > 1e-12 * max(1.0, np.linalg.norm(u)):
            raise ConfigError(f"offset {parts[1]} is not orthogonal to the direction {parts[0]}")
        out.append((om, u))
    return out


def cmd_dual(cfg, args):
    from .dual_transform import dual_apply

    n = cfg.n
    phi = _builtin(args.phi, "plane", n, args.p)
    rows = [[*om, *u, dual_apply(phi, om, u, cfg.resolution)] for om, u in _lines(args, n)]
    return _cols("omega", n) + _cols("u", n) + ["value"], rows


def _plane_targets(args, n):
    thetas = _theta_list(args, n)
    return [(th, t) for th in thetas for t in parse_floats(args.t)]


def cmd_invert_even(cfg, args):
    from .dual_transform import dual_function, dual_invert_even

    n = cfg.n
    phi = _builtin(args.phi, "plane", n, args.p)
    g = dual_invert_even(dual_function(phi, cfg.resolution, offset_scale=None), n, L=args.harmonics, radial_nodes=cfg.radial_nodes)
    rows = [[*th, t, float(g(th, t)), float(phi(th, t))] for th, t in _plane_targets(args, n)]
    return _cols("theta", n) + ["t", "value", "exact"], rows


def cmd_invert_kelvin(cfg, args):
    from .dual_transform import dual_function
    from .geometry import Hyperplane
    from .kelvin_route import KelvinInverter, WeightedClassParams, kelvin_invert, kelvin_invert_marchaud

    n = cfg.n
    if args.phi == "builtin:phi_p":
        params = WeightedClassParams(n, "Lp", p=n / (n - 2.0) if args.p is None else args.p)
    elif args.mu is not None:
        params = WeightedClassParams(n, "Cmu", mu=args.mu)
    elif args.lp is not None:
        params = WeightedClassParams(n, "Lp", p=args.lp)
    else:
        params = None
    phi = _builtin(args.phi, "plane", n, args.p)
    inv = KelvinInverter(dual_function(phi, cfg.resolution), n, params, method=args.method, resolution=args.orbit_resolution, samples=cfg.samples, seed=cfg.seed, nodes=cfg.radial_nodes)
    rows = []
    for th, t in _plane_targets(args, n):
        h = Hyperplane(th, t)
        v = kelvin_invert_marchaud(None, h, ell=args.ell, inverter=inv) if args.marchaud else kelvin_invert(None, h, inverter=inv)
        rows.append([*th, t, v, float(phi(th, t))])
    return _cols("theta", n) + ["t", "value", "exact"], rows


def cmd_invert_pointwise(cfg, args):
    from .dual_transform import dual_invert_pointwise, dual_r1_function

    n = cfg.n
    phi = _builtin(args.phi, "plane", n, args.p)
    f_r1 = dual_r1_function(phi, cfg.resolution)
    rows = [[*th, t, dual_invert_pointwise(f_r1, th, t, n=n, L=cfg.L), float(phi(th, t))] for th, t in _plane_targets(args, n)]
    return _cols("theta", n) + ["t", "value", "exact"], rows


def cmd_funk(cfg, args):
    from .spherical import build_grid, funk_forward, funk_inverse_spectral

    n = cfg.n
    f = _sphere_builtin(args.f, n)
    thetas = _theta_list(args, n)
    if args.inverse:
        exp = funk_inverse_spectral(f, cfg.L, grid=build_grid(n, max(cfg.L, cfg.resolution)))
        vals = exp(thetas)
    else:
        vals = np.atleast_1d(funk_forward(f, thetas, cfg.resolution))
    return _cols("theta", n) + ["value"], [[*th, v] for th, v in zip(thetas, vals)]


def cmd_ek(cfg, args):
    from .fracint import FractionalOrder, ek_derivative, ek_integral

    radial = {"gaussian": lambda r: np.exp(-np.asarray(r) ** 2), "r2gaussian": lambda r: np.asarray(r) ** 2 * np.exp(-np.asarray(r) ** 2)}
    name = args.f.split(":", 1)[1] if args.f.startswith("builtin:") else args.f
    if name not in radial:
        raise ConfigError(f"unknown radial function {name!r}; choose from {sorted(radial)}")
    t = parse_floats(args.t)
    if args.derivative:
        vals = ek_derivative(radial[name], cfg.n, args.side, t, decay_rate=args.decay)
    else:
        vals = ek_integral(radial[name], FractionalOrder(args.alpha, args.side), t, decay_rate=args.decay)
    return ["t", "value"], [[ti, v] for ti, v in zip(t, np.atleast_1d(vals))]


def cmd_selftest(cfg, args):
    cases = testlib.analytic_suite(cfg.n)
    results = testlib.run_suite(cases)
    if args.report:
        testlib.report_json(results, args.report)
    rows = [[r.case, r.key, r.provenance, "" if r.error is None else r.error, int(r.passed)] for r in results]
    return ["case", "key", "provenance", "error", "pass"], rows


COMMANDS = {
    "forward": cmd_forward,
    "invert": cmd_invert,
    "dual": cmd_dual,
    "invert-even": cmd_invert_even,
    "invert-kelvin": cmd_invert_kelvin,
    "invert-pointwise": cmd_invert_pointwise,
    "funk": cmd_funk,
    "ek": cmd_ek,
    "selftest": cmd_selftest,
}


# ----------------------------------------------------------------------------
# argument parsing and output
# ----------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="ambient dimension (3..6)")
    common.add_argument("--resolution", type=int, default=None, help="sphere quadrature resolution")
    common.add_argument("--radial-nodes", type=int, default=32)
    common.add_argument("--L", type=int, default=8, help="harmonic degree cutoff")
    common.add_argument("--samples", type=int, default=100_000, help="Monte-Carlo sample count")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="CSV output path (default stdout)")
    common.add_argument("--manifest", help="JSON manifest path (default <out>.json)")
    common.add_argument("--figure", help="also render the table to a PNG")
    common.add_argument("--threads", type=int, default=None, help="cap BLAS threads (fallback: RADON_THREADS)")

    p = _Parser(prog="radonlh", description="Radon transforms on lines and hyperplanes.")
    p.add_argument("--version", action="version", version=f"radonlh {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("forward", "line-Radon transform of a quasi-radial function")
    s.add_argument("--f", default="builtin:gaussian")
    s.add_argument("--theta", default="e1")
    s.add_argument("--theta-grid", type=int, default=None, help="sample theta on a sphere rule of this resolution")
    s.add_argument("--t", default="1.0")
    s.add_argument("--decay", type=float, default=50.0)

    s = add("invert", "recover a quasi-radial function from its Radon transform")
    src = s.add_mutually_exclusive_group()
    src.add_argument("--f", default="builtin:gaussian", help="built-in f0; its transform is computed first")
    src.add_argument("--g", help="CSV samples theta_1..theta_n,t,value of the transform")
    s.add_argument("--theta", default="e1", help="output directions omega")
    s.add_argument("--theta-grid", type=int, default=None)
    s.add_argument("--r", default="0.1:3:30")
    s.add_argument("--decay", type=float, default=50.0)
    s.add_argument("--allow-odd", action="store_true")

    s = add("dual", "dual transform R* phi on lines")
    s.add_argument("--phi", default="builtin:abs_t_theta2")
    s.add_argument("--p", type=float, default=None, help="exponent for builtin:phi_p")
    s.add_argument("--line", default="e1,e2", help="OMEGA,U pairs separated by ';'")

    for name, help_ in (("invert-even", "invert R* for phi even in t"), ("invert-kelvin", "invert R* through the Kelvin map"), ("invert-pointwise", "pointwise inversion of the dual transform")):
        s = add(name, help_)
        s.add_argument("--phi", default="builtin:gaussian")
        s.add_argument("--p", type=float, default=None, help="exponent for builtin:phi_p")
        s.add_argument("--theta", default="e1")
        s.add_argument("--theta-grid", type=int, default=None)
        s.add_argument("--t", default="0.5,1,2")
        if name == "invert-even":
            s.add_argument("--harmonics", type=int, default=2, help="harmonic cutoff of the cluster means")
        if name == "invert-kelvin":
            s.add_argument("--marchaud", action="store_true", help="use the finite-difference formula")
            s.add_argument("--ell", type=int, default=1)
            s.add_argument("--method", choices=("auto", "quadrature", "haar"), default="auto")
            s.add_argument("--orbit-resolution", type=int, default=12)
            s.add_argument("--lp", type=float, default=None, help="declare phi in the weighted L^p class")
            s.add_argument("--mu", type=float, default=None, help="declare phi in the weighted C_mu class")

    s = add("funk", "Funk transform or its spectral inverse on the sphere")
    s.add_argument("--f", default="builtin:omega3sq")
    s.add_argument("--theta", default="e1")
    s.add_argument("--theta-grid", type=int, default=None)
    s.add_argument("--inverse", action="store_true")

    s = add("ek", "Erdelyi-Kober integrals and derivatives")
    s.add_argument("--f", default="builtin:gaussian")
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--side", choices=("minus", "plus"), default="minus")
    s.add_argument("--t", default="0.5,1,2")
    s.add_argument("--derivative", action="store_true", help="apply the left inverse of order n/2-1")
    s.add_argument("--decay", type=float, default=50.0)

    s = add("selftest", "run the analytic test suite")
    s.add_argument("--report", help="write the JSON report here")
    return p


_DEFAULT_RES = {"dual": 64, "invert-pointwise": 32, "invert-kelvin": 32, "invert-even": 12}


def make_config(args) -> JobConfig:
    res = args.resolution if args.resolution is not None else _DEFAULT_RES.get(args.command, 32)
    threads = args.threads
    if threads is None and os.environ.get("RADON_THREADS"):
        try:
            threads = int(os.environ["RADON_THREADS"])
        except ValueError as exc:
            raise ConfigError("RADON_THREADS must be an integer") from exc
    known = {"command", "n", "resolution", "radial_nodes", "L", "samples", "seed", "out", "manifest", "figure", "threads"}
    options = {k: v for k, v in sorted(vars(args).items()) if k not in known}
    cfg = JobConfig(args.command, args.n, res, args.radial_nodes, args.L, args.samples, args.seed, args.out, args.manifest, args.figure, threads, options)
    cfg.validate()
    return cfg


def format_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _versions():
    import scipy

    return {"radonlh": __version__, "numpy": np.__version__, "scipy": scipy.__version__, "python": platform.python_version()}


def manifest(cfg: JobConfig, text: str) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "config": asdict(cfg),
        "versions": _versions(),
        "seeds": {"seed": cfg.seed},
        "csv_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }


def run(cfg: JobConfig, args) -> int:
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=cfg.threads):
        header, rows = COMMANDS[cfg.command](cfg, args)
    text = format_csv(header, rows)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    mpath = cfg.manifest or (cfg.out + ".json" if cfg.out else None)
    if mpath:
        with open(mpath, "w") as fh:
            json.dump(manifest(cfg, text), fh, indent=2, sort_keys=True)
            fh.write("\n")
    if cfg.figure:
        from .plotting import plot_table

        if cfg.command == "selftest":
            raise ConfigError("--figure is not available for selftest")
        plot_table(header, rows, cfg.figure, title=cfg.command)
    if cfg.command == "selftest" and not all(r[-1] for r in rows):
        return 3
    return 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = make_config(args)
        return run(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except RadonError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
