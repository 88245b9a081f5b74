"""Command-line interface and the on-disk output formats.

Subcommands
-----------
coeffs    elastodynamic coefficient report for the configured (nu, V)
grid      level-curve survey of the configured relation  -> grid.csv
sweep     corrugation-root track over crack speeds       -> sweep.csv
vc        critical-speed bisection                       -> vc.json
front     front-motion snapshots from the corrugation root -> front_t<i>.csv
tabulate  sample the configured kernel into a table file

Runs are driven by a single JSON config file; repeated ``--set a.b=value``
flags override file values.  Every CSV starts with '#'-prefixed metadata
lines (including a canonical ``config=`` echo that recreates the run),
then a ``columns=`` line, then data rows with 17-significant-digit
decimals.  Outputs are deterministic functions of the configuration, so a
rerun yields byte-identical files.

Exit codes: 0 ok, 2 config validation, 3 domain error, 4 capability
error, 5 numerical non-convergence.

Environment: CRACKWAVE_ACCEL selects the numba/numpy backend and
CRACKWAVE_THREADS bounds internal parallelism (see crackwave._accel).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .dispersion import RELATIONS, DispersionProblem, d_corrugation
from .elastodyn import (
    LoadState,
    MaterialParams,
    alpha_beta,
    coefficient_functions,
    f_factor_i,
    f_factor_iii,
    f_log_derivative,
    rayleigh_function,
    rayleigh_speed,
)
from .errors import (
    BoundaryContactError,
    CapabilityError,
    ConfigError,
    CrackwaveError,
    DomainError,
    NonConvergenceError,
    ReferenceKernelUnavailable,
    SynthesisError,
)
from .frontsynth import ModalFront, SpatialWindow, modes_from_corrugation_root, synthesize
from .kernels import load_table, make_reference, make_synthetic, tabulate
from .rootfind import SearchRegion, grid_scan
from .survey import GridSurvey, SweepResult, attenuation_sweep, critical_speed_search, level_curve_grid

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_CAPABILITY = 4
EXIT_NONCONVERGENCE = 5


def fmt(x: float) -> str:
    """Decimal text at 17 significant digits (round-trips a double)."""
    return f"{float(x):.17g}"


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    material: MaterialParams
    load: LoadState
    kernel_kind: str
    kernel_params: dict | None
    kernel_table: str | None
    relation: str
    include_m_term: bool
    region: SearchRegion
    sweep_speeds: list
    sweep_tol: float
    vc: dict | None
    front: dict | None
    out_dir: Path
    out_format: str
    raw: dict = field(repr=False, default_factory=dict)

    def echo(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))


def _reject_unknown(section: dict, allowed: set, path: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown field {path}.{key}" if path else f"unknown field {key}")


def _get(section: dict, key: str, path: str, cast, default=None, required=False):
    if key not in section or section[key] is None:
        if required:
            raise ConfigError(f"missing required field {path}.{key}")
        return default
    try:
        return cast(section[key])
    except (TypeError, ValueError):
        raise ConfigError(f"field {path}.{key} has invalid value {section[key]!r}") from None


def _as_bool(v):
    if isinstance(v, bool):
        return v
    raise ValueError(v)


def _float_list(v):
    return [float(x) for x in v]


def validate_config(raw: dict) -> RunConfig:
    """Turn a raw mapping into a RunConfig, rejecting unknown fields."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(raw, {"material", "load", "kernel", "relation", "include_m_term",
                          "region", "sweep", "vc", "front", "output"}, "")

    mat_sec = raw.get("material")
    if not isinstance(mat_sec, dict):
        raise ConfigError("missing required section material")
    _reject_unknown(mat_sec, {"nu", "b", "rho"}, "material")
    try:
        material = MaterialParams(
            nu=_get(mat_sec, "nu", "material", float, required=True),
            b=_get(mat_sec, "b", "material", float, default=1.0),
            rho=_get(mat_sec, "rho", "material", float),
        )
    except DomainError as exc:
        raise ConfigError(f"material: {exc}") from None

    load_sec = raw.get("load")
    if not isinstance(load_sec, dict):
        raise ConfigError("missing required section load")
    _reject_unknown(load_sec, {"V_over_b", "KI0", "KIII0", "A10", "A20", "A30"}, "load")
    v_over_b = _get(load_sec, "V_over_b", "load", float, required=True)
    try:
        load = LoadState(
            V=v_over_b * material.b,
            KI0=_get(load_sec, "KI0", "load", float, default=1.0),
            KIII0=_get(load_sec, "KIII0", "load", float, default=0.0),
            A10=_get(load_sec, "A10", "load", float, default=0.0),
            A20=_get(load_sec, "A20", "load", float, default=0.0),
            A30=_get(load_sec, "A30", "load", float, default=0.0),
        )
    except DomainError as exc:
        raise ConfigError(f"load: {exc}") from None

    kern_sec = raw.get("kernel", {"kind": "synthetic"})
    if not isinstance(kern_sec, dict):
        raise ConfigError("kernel section must be an object")
    _reject_unknown(kern_sec, {"kind", "params", "table"}, "kernel")
    kind = _get(kern_sec, "kind", "kernel", str, default="synthetic")
    if kind not in ("synthetic", "tabulated", "reference"):
        raise ConfigError(f"kernel.kind must be synthetic, tabulated or reference, got {kind!r}")
    kernel_table = _get(kern_sec, "table", "kernel", str)
    if kind == "tabulated":
        if kernel_table is None:
            raise ConfigError("kernel.table is required for kind=tabulated")
        if not Path(kernel_table).exists():
            raise ConfigError(f"kernel.table: file not found: {kernel_table}")
    kernel_params = kern_sec.get("params")
    if kernel_params is not None and not isinstance(kernel_params, dict):
        raise ConfigError("kernel.params must map component names to [c, d, v0]")

    relation = _get(raw, "relation", "", str, default="corrugation")
    if relation not in RELATIONS:
        raise ConfigError(f"relation must be one of {RELATIONS}, got {relation!r}")
    include_m = _get(raw, "include_m_term", "", _as_bool, default=False)

    reg_sec = raw.get("region", {})
    if not isinstance(reg_sec, dict):
        raise ConfigError("region section must be an object")
    _reject_unknown(reg_sec, {"re_min", "re_max", "im_min", "im_max", "nx", "ny"}, "region")
    try:
        region = SearchRegion(
            re_min=_get(reg_sec, "re_min", "region", float, default=0.0),
            re_max=_get(reg_sec, "re_max", "region", float, default=2.0),
            im_min=_get(reg_sec, "im_min", "region", float, default=-1.0),
            im_max=_get(reg_sec, "im_max", "region", float, default=0.25),
            nx=_get(reg_sec, "nx", "region", int, default=201),
            ny=_get(reg_sec, "ny", "region", int, default=121),
        )
    except DomainError as exc:
        raise ConfigError(f"region: {exc}") from None

    sweep_sec = raw.get("sweep", {})
    if not isinstance(sweep_sec, dict):
        raise ConfigError("sweep section must be an object")
    _reject_unknown(sweep_sec, {"speeds", "tol"}, "sweep")
    sweep_speeds = _get(sweep_sec, "speeds", "sweep", _float_list, default=[])
    sweep_tol = _get(sweep_sec, "tol", "sweep", float, default=1e-10)

    vc_sec = raw.get("vc")
    if vc_sec is not None:
        if not isinstance(vc_sec, dict):
            raise ConfigError("vc section must be an object")
        _reject_unknown(vc_sec, {"v_lo_over_b", "v_hi_over_b", "tol_v_over_b",
                                 "im_ratio_max", "residual_tol"}, "vc")
        vc_sec = {
            "v_lo_over_b": _get(vc_sec, "v_lo_over_b", "vc", float, required=True),
            "v_hi_over_b": _get(vc_sec, "v_hi_over_b", "vc", float, required=True),
            "tol_v_over_b": _get(vc_sec, "tol_v_over_b", "vc", float, default=1e-3),
            "im_ratio_max": _get(vc_sec, "im_ratio_max", "vc", float, default=0.25),
            "residual_tol": _get(vc_sec, "residual_tol", "vc", float, default=1e-8),
        }

    front_sec = raw.get("front")
    if front_sec is not None:
        if not isinstance(front_sec, dict):
            raise ConfigError("front section must be an object")
        _reject_unknown(front_sec, {"wavenumbers", "amplitudes", "x_min", "x_max",
                                    "nx", "times"}, "front")
        amps = front_sec.get("amplitudes")
        if not isinstance(amps, list) or not all(
            isinstance(a, list) and len(a) == 2 for a in amps
        ):
            raise ConfigError("front.amplitudes must be a list of [re, im] pairs")
        front_sec = {
            "wavenumbers": _get(front_sec, "wavenumbers", "front", _float_list, required=True),
            "amplitudes": [complex(float(a[0]), float(a[1])) for a in amps],
            "x_min": _get(front_sec, "x_min", "front", float, default=0.0),
            "x_max": _get(front_sec, "x_max", "front", float, default=2.0 * math.pi),
            "nx": _get(front_sec, "nx", "front", int, default=128),
            "times": _get(front_sec, "times", "front", _float_list, required=True),
        }
        if len(front_sec["wavenumbers"]) != len(front_sec["amplitudes"]):
            raise ConfigError("front.wavenumbers and front.amplitudes must have equal length")

    out_sec = raw.get("output", {})
    if not isinstance(out_sec, dict):
        raise ConfigError("output section must be an object")
    _reject_unknown(out_sec, {"directory", "format"}, "output")
    out_format = _get(out_sec, "format", "output", str, default="csv")
    if out_format not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json, got {out_format!r}")

    return RunConfig(
        material=material,
        load=load,
        kernel_kind=kind,
        kernel_params=kernel_params,
        kernel_table=kernel_table,
        relation=relation,
        include_m_term=include_m,
        region=region,
        sweep_speeds=sweep_speeds,
        sweep_tol=sweep_tol,
        vc=vc_sec,
        front=front_sec,
        out_dir=Path(_get(out_sec, "directory", "output", str, default=".")),
        out_format=out_format,
        raw=raw,
    )


def _apply_override(raw: dict, spec: str) -> None:
    if "=" not in spec:
        raise ConfigError(f"--set expects key.path=value, got {spec!r}")
    dotted, text = spec.split("=", 1)
    keys = [k for k in dotted.strip().split(".") if k]
    if not keys:
        raise ConfigError(f"--set expects key.path=value, got {spec!r}")
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    node = raw
    for key in keys[:-1]:
        nxt = node.get(key)
        if not isinstance(nxt, dict):
            nxt = {}
            node[key] = nxt
        node = nxt
    node[keys[-1]] = value


def load_config(path: str, overrides=(), out_dir: str | None = None) -> RunConfig:
    """Read the JSON config file, apply --set overrides, validate."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    for spec in overrides:
        _apply_override(raw, spec)
    if out_dir is not None:
        raw.setdefault("output", {})["directory"] = out_dir
    return validate_config(raw)


# ---------------------------------------------------------------------------
# domain object builders

def build_provider(cfg: RunConfig):
    if cfg.kernel_kind == "synthetic":
        return make_synthetic(cfg.kernel_params or {}, material=cfg.material, V=cfg.load.V)
    if cfg.kernel_kind == "tabulated":
        return load_table(cfg.kernel_table)
    return make_reference(cfg.material, cfg.load.V)


def build_problem(cfg: RunConfig, relation: str | None = None) -> DispersionProblem:
    return DispersionProblem(
        relation=relation or cfg.relation,
        material=cfg.material,
        load=cfg.load,
        provider=build_provider(cfg),
        include_m_term=cfg.include_m_term,
    )


# ---------------------------------------------------------------------------
# writers

def _write_lines(path: Path, lines: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _meta_lines(cfg: RunConfig, extra: dict) -> list:
    lines = [f"# config={cfg.echo()}"]
    for key, val in extra.items():
        lines.append(f"# {key}={val}")
    return lines


def write_grid_csv(survey: GridSurvey, path: Path, cfg: RunConfig) -> None:
    region = survey.region
    meta = dict(survey.metadata)
    meta.pop("timestamp", None)
    meta.update({
        "re_min": fmt(region.re_min), "re_max": fmt(region.re_max),
        "im_min": fmt(region.im_min), "im_max": fmt(region.im_max),
        "nx": region.nx, "ny": region.ny,
    })
    lines = _meta_lines(cfg, meta)
    lines.append("# columns=re,im,value")
    xs = region.re_axis()
    ys = region.im_axis()
    for iy in range(region.ny):
        for ix in range(region.nx):
            lines.append(f"{fmt(xs[ix])},{fmt(ys[iy])},{fmt(survey.values[iy, ix])}")
    _write_lines(path, lines)


def grid_json_payload(survey: GridSurvey, cfg: RunConfig) -> dict:
    region = survey.region
    meta = {k: v for k, v in survey.metadata.items() if k != "timestamp"}
    return {
        "config": cfg.raw,
        "metadata": meta,
        "region": {
            "re_min": region.re_min, "re_max": region.re_max,
            "im_min": region.im_min, "im_max": region.im_max,
            "nx": region.nx, "ny": region.ny,
        },
        "values": [[float(v) for v in row] for row in survey.values],
    }


def write_sweep_csv(result: SweepResult, path: Path, cfg: RunConfig) -> None:
    lines = _meta_lines(cfg, {"relation": "corrugation", "nu": cfg.material.nu})
    lines.append("# columns=V_over_b,re_eta,im_eta,found")
    for v, root in zip(result.speeds, result.roots):
        if root is None:
            lines.append(f"{fmt(v)},nan,nan,0")
        else:
            lines.append(f"{fmt(v)},{fmt(root.real)},{fmt(root.imag)},1")
    _write_lines(path, lines)


def sweep_json_payload(result: SweepResult, cfg: RunConfig) -> dict:
    entries = []
    for v, root, att in zip(result.speeds, result.roots, result.attenuation):
        entries.append({
            "V_over_b": v,
            "found": root is not None,
            "re_eta": None if root is None else root.real,
            "im_eta": None if root is None else root.imag,
            "attenuation": att,
        })
    return {"config": cfg.raw, "sweep": entries}


def write_json(payload: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def write_front_csv(x, values, t, index, path: Path, cfg: RunConfig, root) -> None:
    lines = _meta_lines(cfg, {
        "t": fmt(t), "snapshot": index,
        "root_re_eta": fmt(root.real), "root_im_eta": fmt(root.imag),
    })
    lines.append("# columns=x2,phi")
    for xi, vi in zip(x, values):
        lines.append(f"{fmt(xi)},{fmt(vi)}")
    _write_lines(path, lines)


# ---------------------------------------------------------------------------
# subcommands

def coefficient_report(cfg: RunConfig) -> dict:
    mat, V = cfg.material, cfg.load.V
    alpha, beta = alpha_beta(V, mat)
    coeffs = coefficient_functions(V, mat)
    cr = rayleigh_speed(mat)
    return {
        "nu": mat.nu,
        "b": mat.b,
        "V_over_b": V / mat.b,
        "alpha": alpha,
        "beta": beta,
        "R": rayleigh_function(V, mat),
        "c_R": cr,
        "c_R_over_b": cr / mat.b,
        "f_I": f_factor_i(V, mat),
        "f_III": f_factor_iii(V, mat),
        "flog_I": f_log_derivative("I", V, mat),
        "flog_III": f_log_derivative("III", V, mat),
        "theta13": coeffs.theta13,
        "omega13": coeffs.omega13,
        "omega23": coeffs.omega23,
        "sigma11": coeffs.sigma11,
        "sigma12": coeffs.sigma12,
        "m": cfg.load.m,
        "K0": cfg.load.k0,
    }


def cmd_coeffs(cfg: RunConfig) -> int:
    report = coefficient_report(cfg)
    for key, val in report.items():
        print(f"{key} = {fmt(val)}")
    lines = _meta_lines(cfg, {})
    lines.append("# columns=name,value")
    for key, val in report.items():
        lines.append(f"{key},{fmt(val)}")
    _write_lines(cfg.out_dir / "coeffs.csv", lines)
    if cfg.out_format == "json":
        write_json({"config": cfg.raw, "coefficients": report}, cfg.out_dir / "coeffs.json")
    return EXIT_OK


def cmd_grid(cfg: RunConfig) -> int:
    problem = build_problem(cfg)
    survey = level_curve_grid(problem, cfg.region)
    write_grid_csv(survey, cfg.out_dir / "grid.csv", cfg)
    if cfg.out_format == "json":
        write_json(grid_json_payload(survey, cfg), cfg.out_dir / "grid.json")
    print(f"grid: {cfg.region.nx}x{cfg.region.ny} {cfg.relation} survey -> "
          f"{cfg.out_dir / 'grid.csv'}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    base = build_problem(cfg, relation="corrugation")
    result = attenuation_sweep(base, cfg.sweep_speeds, cfg.region, tol=cfg.sweep_tol)
    write_sweep_csv(result, cfg.out_dir / "sweep.csv", cfg)
    if cfg.out_format == "json":
        write_json(sweep_json_payload(result, cfg), cfg.out_dir / "sweep.json")
    found = sum(1 for r in result.roots if r is not None)
    print(f"sweep: {found}/{len(result.speeds)} speeds with a tracked root -> "
          f"{cfg.out_dir / 'sweep.csv'}")
    return EXIT_OK


def cmd_vc(cfg: RunConfig) -> int:
    if cfg.vc is None:
        raise ConfigError("missing required section vc")
    base = build_problem(cfg, relation="corrugation")
    b = cfg.material.b
    vc = critical_speed_search(
        base,
        cfg.vc["v_lo_over_b"] * b,
        cfg.vc["v_hi_over_b"] * b,
        cfg.vc["tol_v_over_b"] * b,
        cfg.region,
        residual_tol=cfg.vc["residual_tol"],
        im_ratio_max=cfg.vc["im_ratio_max"],
    )
    payload = {
        "config": cfg.raw,
        "found": vc is not None,
        "V_c": vc,
        "V_c_over_b": None if vc is None else vc / b,
    }
    write_json(payload, cfg.out_dir / "vc.json")
    if vc is None:
        print("vc: no qualifying corrugation root in the searched speed range")
    else:
        print(f"vc: critical speed V_c/b = {fmt(vc / b)} -> {cfg.out_dir / 'vc.json'}")
    return EXIT_OK


def cmd_front(cfg: RunConfig) -> int:
    if cfg.front is None:
        raise ConfigError("missing required section front")
    problem = build_problem(cfg, relation="corrugation")
    roots = grid_scan(lambda eta: d_corrugation(problem, eta), cfg.region, tol=1e-10)
    if not roots:
        raise NonConvergenceError("no corrugation root found in the configured region")
    best = min(roots, key=lambda r: (abs(r.location.imag), r.location.real, r.location.imag))
    modes = modes_from_corrugation_root(
        best.location, cfg.front["wavenumbers"], cfg.front["amplitudes"],
        residual=best.residual_modulus,
    )
    window = SpatialWindow(cfg.front["x_min"], cfg.front["x_max"], cfg.front["nx"])
    front = ModalFront(modes=modes, window=window, times=cfg.front["times"])
    fields = synthesize(front)
    x = window.grid()
    for i, t in enumerate(cfg.front["times"]):
        write_front_csv(x, fields[i], t, i, cfg.out_dir / f"front_t{i}.csv", cfg, best.location)
    print(f"front: root eta = {fmt(best.location.real)}{best.location.imag:+.6g}i, "
          f"{len(cfg.front['times'])} snapshots -> {cfg.out_dir}")
    return EXIT_OK


def cmd_tabulate(cfg: RunConfig, n_angles: int, table_out: str) -> int:
    provider = build_provider(cfg)
    table = tabulate(provider, n_angles=n_angles,
                     nu=cfg.material.nu, V_over_b=cfg.load.V / cfg.material.b)
    table.write(table_out)
    print(f"tabulate: {n_angles} angles -> {table_out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crackwave",
        description="Crack-front-wave dispersion analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("coeffs", "print/export the elastodynamic coefficient table"),
        ("grid", "level-curve survey of the configured relation"),
        ("sweep", "track the corrugation root over crack speeds"),
        ("vc", "bisect for the critical crack speed"),
        ("front", "synthesize front-motion snapshots"),
        ("tabulate", "sample the configured kernel into a table file"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--set", action="append", default=[], metavar="KEY.PATH=VALUE",
                       dest="overrides", help="override a config value (repeatable)")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        if name == "tabulate":
            p.add_argument("--angles", type=int, default=2048, help="number of ray angles")
            p.add_argument("--table-out", required=True, help="output table path")
    return parser


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = load_config(args.config, overrides=args.overrides, out_dir=args.out)
    if args.command == "coeffs":
        return cmd_coeffs(cfg)
    if args.command == "grid":
        return cmd_grid(cfg)
    if args.command == "sweep":
        return cmd_sweep(cfg)
    if args.command == "vc":
        return cmd_vc(cfg)
    if args.command == "front":
        return cmd_front(cfg)
    return cmd_tabulate(cfg, args.angles, args.table_out)


def main(argv=None) -> int:
    try:
        return run(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SynthesisError, DomainError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (CapabilityError, ReferenceKernelUnavailable) as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (NonConvergenceError, BoundaryContactError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except CrackwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
