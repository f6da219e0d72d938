"""Command-line front end.

usage: elastodec SUBCOMMAND [CONFIG] [options]

Subcommands:
  solve       solve the ball problem and write the multipole solution
  field       sample the displacement at points (json or csv)
  farfield    sample the far-field patterns on a sphere grid
  residuals   boundary-condition residuals of the solved field
  decouple    decoupling-condition residuals of the solved field
  surface     curvature report and admissibility verdicts for a surface
  compare     far-field distance, Hausdorff distance and stability bound
  expand      plane-wave expansion error against truncation degree

Config file (JSON)::

    {
      "params":    {"lambda": 2.0, "mu": 1.0, "omega": 1.0},
      "incident":  {"d": [0, 0, 1], "dperp": [1, 0, 0],
                    "alpha_p": 1.0, "alpha_s": [1.0, 0.0]},
      "scatterer": {"radius": 1.0, "kind": "IV"},
      "truncation": 30,
      "grids": {"boundary": [32, 64], "farfield": [16, 32],
                "points": [[2, 0, 0], [0, 3, 0]]},
      "output": {"path": "out.json", "format": "json"}
    }

Complex amplitudes are a number or a ``[re, im]`` pair.  ``truncation``,
``grids`` and ``output`` are optional.  The environment variable
``ELASTODEC_OUTPUT_DIR`` replaces the directory of the output path.

Mesh files for ``surface``/``compare`` are Wavefront OBJ: ``v x y z`` and
``f i j k`` records (1-based, polygons fan-triangulated, ``g`` names used as
piece labels).

Exit status: 0 success, 1 domain or precondition error, 2 I/O or config
error, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import decoupling, geometry, metrics
from .ball_solver import (
    FIELD_PARTS,
    BallScatterer,
    MultipoleSolution,
    boundary_residuals,
    eval_field,
    far_field,
    solve_ball,
)
from .errors import ElastodecError
from .harmonics import as_unit, sphere_quadrature
from .wavefuncs import IncidentWave, WaveParams, expand_plane_wave

log = logging.getLogger("elastodec")

OUTPUT_DIR_ENV = "ELASTODEC_OUTPUT_DIR"
EX_OK, EX_DOMAIN, EX_CONFIG, EX_USAGE = 0, 1, 2, 64
SCHEMA = "1"


class ConfigError(Exception):
    """Malformed configuration or input file (exit status 2)."""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


# ----------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    params: WaveParams
    incident: IncidentWave
    scatterer: BallScatterer
    truncation: int | None
    grids: dict
    output_path: str | None
    output_format: str


def _field(data: dict, path: str):
    cur = data
    for key in path.split("."):
        if not isinstance(cur, dict) or key not in cur:
            raise ConfigError(f"config: missing field '{path}'")
        cur = cur[key]
    return cur


def _number(data, path, cast=float):
    val = _field(data, path)
    try:
        if isinstance(val, bool):
            raise TypeError
        return cast(val)
    except (TypeError, ValueError):
        raise ConfigError(f"config: field '{path}' must be a number, got {val!r}") from None


def _complex(data, path):
    val = _field(data, path)
    if isinstance(val, (int, float)) and not isinstance(val, bool):
        return complex(val)
    if isinstance(val, list) and len(val) == 2 and all(isinstance(v, (int, float)) for v in val):
        return complex(val[0], val[1])
    raise ConfigError(f"config: field '{path}' must be a number or [re, im], got {val!r}")


def _vector(data, path):
    val = _field(data, path)
    if not (isinstance(val, list) and len(val) == 3 and all(isinstance(v, (int, float)) for v in val)):
        raise ConfigError(f"config: field '{path}' must be a list of three numbers")
    return np.array(val, dtype=float)


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_config(path) -> RunConfig:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    lam = _number(data, "params.lambda")
    mu = _number(data, "params.mu")
    omega = _number(data, "params.omega")
    d = _vector(data, "incident.d")
    dperp = _vector(data, "incident.dperp")
    inc = data["incident"]
    alpha_p = _complex(data, "incident.alpha_p") if "alpha_p" in inc else 0j
    alpha_s = _complex(data, "incident.alpha_s") if "alpha_s" in inc else 0j
    radius = _number(data, "scatterer.radius")
    kind = str(_field(data, "scatterer.kind"))
    if kind.upper() not in ("III", "IV", "3", "4"):
        raise ConfigError(f"config: field 'scatterer.kind' must be 'III' or 'IV', got {kind!r}")
    truncation = None
    if "truncation" in data and data["truncation"] is not None:
        truncation = _number(data, "truncation", int)
        if truncation < 1:
            raise ConfigError("config: field 'truncation' must be >= 1")
    grids = data.get("grids", {})
    if not isinstance(grids, dict):
        raise ConfigError("config: field 'grids' must be an object")
    out = data.get("output", {})
    fmt = out.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"config: field 'output.format' must be 'json' or 'csv', got {fmt!r}")
    # type invariants (domain errors, exit 1) are checked from here on
    return RunConfig(
        params=WaveParams(lam, mu, omega),
        incident=IncidentWave(d, dperp, alpha_p, alpha_s),
        scatterer=BallScatterer(radius, kind),
        truncation=truncation,
        grids=grids,
        output_path=out.get("path"),
        output_format=fmt,
    )


def _grid(cfg: RunConfig | None, key: str, override, default):
    if override:
        return tuple(override)
    if cfg is not None and key in cfg.grids:
        val = cfg.grids[key]
        if not (isinstance(val, list) and len(val) == 2 and all(isinstance(v, int) and v > 0 for v in val)):
            raise ConfigError(f"config: field 'grids.{key}' must be two positive integers")
        return tuple(val)
    return default


# ----------------------------------------------------------------------------
# output


def _cplx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _cvec(v) -> list:
    return [_cplx(z) for z in v]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _resolve_output(args, cfg: RunConfig | None) -> str | None:
    path = getattr(args, "output", None) or (cfg.output_path if cfg else None)
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        name = Path(path).name if path else f"{args.command}.{_format(args, cfg)}"
        path = str(Path(env_dir) / name)
    return path


def _format(args, cfg) -> str:
    return getattr(args, "format", None) or (cfg.output_format if cfg else "json")


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    log.info("wrote %s", path)


def _fmt(x: float) -> str:
    return "%.17g" % x


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _vector_csv(points, blocks: dict) -> str:
    header = ["x", "y", "z"]
    for name in blocks:
        for comp in "xyz":
            header += [f"{name}{comp}_re", f"{name}{comp}_im"]
    rows = []
    for i, p in enumerate(points):
        row = [float(c) for c in p]
        for vals in blocks.values():
            for z in vals[i]:
                row += [float(z.real), float(z.imag)]
        rows.append(row)
    return _csv_text(header, rows)


# ----------------------------------------------------------------------------
# subcommands


def _solution(args, cfg: RunConfig) -> MultipoleSolution:
    if getattr(args, "solution", None):
        data = _load_json(args.solution)
        try:
            return MultipoleSolution.from_dict(data)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"{args.solution}: malformed solution document ({exc})") from None
    return solve_ball(cfg.params, cfg.incident, cfg.scatterer, cfg.truncation)


def cmd_solve(args, cfg):
    sol = _solution(args, cfg)
    return dumps(sol.to_dict())


def _load_points(path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8")
    try:
        if path.endswith(".json"):
            pts = np.array(json.loads(text), dtype=float)
        elif path.endswith(".obj"):
            pts = geometry.read_obj(path).vertices
        else:
            pts = np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ConfigError(f"{path}: cannot read points ({exc})") from None
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ConfigError(f"{path}: points must be rows of three coordinates")
    return pts


def cmd_field(args, cfg):
    sol = _solution(args, cfg)
    if args.points:
        pts = _load_points(args.points)
    elif "points" in cfg.grids:
        try:
            pts = np.array(cfg.grids["points"], dtype=float).reshape(-1, 3)
        except ValueError:
            raise ConfigError("config: field 'grids.points' must be a list of [x, y, z]") from None
    else:
        raise ConfigError("config: missing field 'grids.points' (or pass --points)")
    vals = eval_field(sol, pts, args.part)
    if _format(args, cfg) == "csv":
        return _vector_csv(pts, {"u": vals})
    return dumps(
        {
            "schema": SCHEMA,
            "part": args.part,
            "points": pts.tolist(),
            "values": [_cvec(v) for v in vals],
        }
    )


def cmd_farfield(args, cfg):
    sol = _solution(args, cfg)
    nt, nph = _grid(cfg, "farfield", args.grid, (16, 32))
    quad = sphere_quadrature(nt, nph)
    up, us, ut = far_field(sol, quad.dirs)
    if _format(args, cfg) == "csv":
        return _vector_csv(quad.dirs, {"up": up, "us": us, "ut": ut})
    return dumps(
        {
            "schema": SCHEMA,
            "grid": [nt, nph],
            "directions": quad.dirs.tolist(),
            "weights": quad.weights.tolist(),
            "Up": [_cvec(v) for v in up],
            "Us": [_cvec(v) for v in us],
            "Ut": [_cvec(v) for v in ut],
        }
    )


def cmd_residuals(args, cfg):
    sol = _solution(args, cfg)
    grid = _grid(cfg, "boundary", args.grid, (32, 64))
    rep = boundary_residuals(sol, grid)
    return dumps({"schema": SCHEMA, "N": sol.N, **rep.to_dict()})


def cmd_decouple(args, cfg):
    sol = _solution(args, cfg)
    grid = _grid(cfg, "boundary", args.grid, (32, 64))
    rep = decoupling.decoupling_residual(sol, grid)
    return dumps({"schema": SCHEMA, "N": sol.N, **rep.to_dict()})


def bundled_mesh(name: str) -> geometry.TriMesh:
    ref = resources.files("elastodec") / "data" / f"{name}.obj"
    with resources.as_file(ref) as path:
        if not Path(path).exists():
            raise ConfigError(f"no bundled mesh named {name!r}")
        return geometry.read_obj(str(path))


def _surface(args):
    if args.mesh:
        if args.mesh.startswith("bundled:"):
            return bundled_mesh(args.mesh.split(":", 1)[1])
        try:
            return geometry.read_obj(args.mesh)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if args.patch == "sphere":
        return geometry.sphere_patch(args.radius)
    if args.patch == "plane":
        return geometry.plane_patch(args.radius)
    if args.patch == "catenoid":
        return geometry.catenoid_patch(args.radius)
    if args.icosphere is not None:
        return geometry.icosphere(args.radius, args.icosphere)
    return bundled_mesh("plane")


def cmd_surface(args, cfg):
    surf = _surface(args)
    rep = geometry.admissibility(surf, args.kind, args.tol, ring=args.ring)
    return dumps(rep.to_dict(with_samples=args.samples))


def _pattern(path, part: str) -> metrics.FarFieldPattern:
    data = _load_json(path)
    key = {"p": "Up", "s": "Us", "t": "Ut"}[part]
    try:
        vals = np.array([[complex(re, im) for re, im in row] for row in data[key]])
        return metrics.FarFieldPattern(np.array(data["directions"]), np.array(data["weights"]), vals, part)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ElastodecError):
            raise
        raise ConfigError(f"{path}: malformed far-field document ({exc})") from None


def cmd_compare(args, cfg):
    out: dict = {"schema": SCHEMA}
    if args.farfield:
        a, b = args.farfield
        out["farfield_distance"] = {
            part: metrics.farfield_distance(_pattern(a, part), _pattern(b, part)) for part in ("p", "s", "t")
        }
    if args.shapes:
        a, b = args.shapes
        out["hausdorff"] = metrics.hausdorff(_load_points(a), _load_points(b))
    if args.epsilon is not None:
        out["stability_bound"] = {
            "epsilon": args.epsilon,
            "s": args.s,
            "C": args.C,
            "alpha": args.alpha,
            "value": metrics.stability_modulus(args.epsilon, args.s, args.C, args.alpha),
        }
    if len(out) == 1:
        raise UsageError("compare needs --farfield, --shapes or --epsilon")
    return dumps(out)


def cmd_expand(args, cfg):
    params = cfg.params
    d = cfg.incident.d
    dperp = cfg.incident.dperp
    rng = np.random.default_rng(args.seed)
    families = ("longitudinal", "transversal") if args.family == "both" else (args.family,)
    rows = []
    for fam in families:
        k = params.kp if fam == "longitudinal" else params.ks
        pol = d if fam == "longitudinal" else dperp
        dirs = as_unit(rng.normal(size=(args.n_points, 3)))
        radii = (args.kr_max / k) * rng.random(args.n_points) ** (1.0 / 3.0)
        pts = dirs * radii[:, None]
        exact = np.exp(1j * k * (pts @ d))[:, None] * pol
        for N in args.orders:
            approx = expand_plane_wave(fam, k, d, dperp, N, pts)
            rows.append({"family": fam, "N": N, "max_error": float(np.max(np.abs(approx - exact)))})
    if _format(args, cfg) == "csv":
        return _csv_text(["family", "N", "max_error"], [[r["family"], r["N"], r["max_error"]] for r in rows])
    return dumps({"schema": SCHEMA, "kr_max": args.kr_max, "seed": args.seed, "rows": rows})


COMMANDS = {
    "solve": cmd_solve,
    "field": cmd_field,
    "farfield": cmd_farfield,
    "residuals": cmd_residuals,
    "decouple": cmd_decouple,
    "surface": cmd_surface,
    "compare": cmd_compare,
    "expand": cmd_expand,
}
NEEDS_CONFIG = {"solve", "field", "farfield", "residuals", "decouple", "expand"}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elastodec", description="Elastic scattering by a ball with third/fourth-kind conditions.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    sub.required = True

    def add(name, help_text, config=True):
        p = sub.add_parser(name, help=help_text)
        if config:
            p.add_argument("config", help="JSON run configuration")
        p.add_argument("-o", "--output", help="output file (default: config output.path or stdout)")
        return p

    add("solve", "solve and write the multipole solution")
    for name, help_text in (
        ("field", "sample the displacement field"),
        ("farfield", "sample far-field patterns"),
        ("residuals", "boundary-condition residuals"),
        ("decouple", "decoupling-condition residuals"),
    ):
        p = add(name, help_text)
        p.add_argument("--solution", help="reuse a solution written by 'solve'")
        if name == "field":
            p.add_argument("--part", choices=FIELD_PARTS, default="total")
            p.add_argument("--points", help="points file (.json, .obj or x,y,z csv)")
        else:
            p.add_argument("--grid", type=int, nargs=2, metavar=("NTHETA", "NPHI"))
        if name in ("field", "farfield"):
            p.add_argument("--format", choices=("json", "csv"))

    p = add("surface", "curvature admissibility report", config=False)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--mesh", help="OBJ mesh file, or bundled:NAME")
    src.add_argument("--patch", choices=("sphere", "plane", "catenoid"))
    src.add_argument("--icosphere", type=int, metavar="SUBDIV")
    p.add_argument("--radius", type=float, default=1.0, help="sphere radius / patch size")
    p.add_argument("--kind", choices=("III", "IV"), default="IV")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--ring", type=int, default=2)
    p.add_argument("--samples", action="store_true", help="include every sample in the report")

    p = add("compare", "far-field and shape metrics", config=False)
    p.add_argument("--farfield", nargs=2, metavar=("A", "B"), help="two 'farfield' outputs")
    p.add_argument("--shapes", nargs=2, metavar=("A", "B"), help="two point sets or meshes")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)

    p = add("expand", "plane-wave expansion error sweep")
    p.add_argument("--family", choices=("longitudinal", "transversal", "both"), default="both")
    p.add_argument("--orders", type=int, nargs="+", default=[5, 10, 20, 30, 40])
    p.add_argument("--n-points", type=int, default=50)
    p.add_argument("--kr-max", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(args.config) if args.command in NEEDS_CONFIG else None
        text = COMMANDS[args.command](args, cfg)
        _emit(text, _resolve_output(args, cfg))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"elastodec: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except ConfigError as exc:
        print(f"elastodec: {exc}", file=sys.stderr)
        return EX_CONFIG
    except OSError as exc:
        print(f"elastodec: {exc}", file=sys.stderr)
        return EX_CONFIG
    except (ElastodecError, ValueError, ArithmeticError) as exc:
        print(f"elastodec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_DOMAIN
    return EX_OK


if __name__ == "__main__":
    sys.exit(main())
