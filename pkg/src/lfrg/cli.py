"""Command line front end.

Subcommands: tadpole, beta, flow, fixed-point, exponents, scan,
potential-flow. Every subcommand accepts --config FILE (a JSON document
with top-level sections background / couplings / solver / output /
command; unknown keys are rejected), with command line flags taking
precedence over config values. Data outputs are deterministic: CSV files
contain only numbers (17 significant digits, LF endings) and run metadata
goes to a sidecar .meta.json. JSON outputs embed the resolved config, so a
previous JSON output can be replayed via --config.

Exit codes: 0 success, 1 usage error, 2 numerical failure (the partial
result plus a termination field is still written), 3 I/O failure.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import flows, potential
from .backgrounds import (DeSitter, MinkowskiVacuum, MuMode, Thermal,
                          resolve_mu2)
from .errors import ConvergenceError, DomainError, LfrgError, UsageError
from .fixedpoints import find_fixed_point, scan_fixed_points, stability_analysis
from .integrate import FlowProblem, integrate
from .tadpoles import (desitter_wick_square, minkowski_vacuum_wick_square,
                       thermal_wick_square)

BACKGROUND_KINDS = ("minkowski-vacuum", "thermal", "thermal-high-t", "de-sitter")
_CONFIG_SECTIONS = ("background", "couplings", "solver", "output", "command")
_COUPLING_NAMES = ("U0", "m2", "lambda")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    """Fully resolved run description; serialized into every JSON output."""

    command: str
    background: dict = field(default_factory=dict)
    couplings: dict = field(default_factory=dict)
    solver: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_dict(self):
        d = {"background": self.background, "couplings": self.couplings,
             "solver": self.solver, "output": self.output,
             "command": {"name": self.command, **self.extras}}
        return d


def _parse_couplings(text):
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"bad coupling assignment {item!r}; expected name=value")
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in _COUPLING_NAMES:
            raise UsageError(f"unknown coupling {name!r}; expected one of "
                             f"{', '.join(_COUPLING_NAMES)}")
        try:
            out[name] = float(value)
        except ValueError:
            raise UsageError(f"coupling {name!r} has non-numeric value {value!r}")
    return out


def _parse_grid(text):
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in _COUPLING_NAMES:
            raise UsageError(f"unknown grid coupling {name!r}")
        parts = value.split(":")
        try:
            if len(parts) == 1:
                out[name] = float(parts[0])
            elif len(parts) == 3:
                out[name] = (float(parts[0]), float(parts[1]), int(parts[2]))
            else:
                raise ValueError
        except ValueError:
            raise UsageError(f"bad grid spec {value!r} for {name!r}; "
                             "expected value or lo:hi:count")
    return out


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    if "config" in doc:  # replay of a previous JSON output
        doc = doc["config"]
    for key in doc:
        if key not in _CONFIG_SECTIONS:
            raise UsageError(f"unknown config key {key!r}; allowed: "
                             f"{', '.join(_CONFIG_SECTIONS)}")
        if not isinstance(doc[key], dict):
            raise UsageError(f"config section {key!r} must be an object")
    return doc


def _pick(flag_value, config_section, key, default=None):
    if flag_value is not None:
        return flag_value
    if key in config_section:
        return config_section[key]
    return default


_BG_KEYS = {"kind", "d", "beta", "H2", "xi", "mu_mode", "mu2", "sign_mode",
            "k2_over_H2"}
_SOLVER_KEYS = {"rel_tol", "abs_tol", "t0", "t1", "Lambda", "max_steps",
                "tol", "max_iter", "fd_step"}
_OUTPUT_KEYS = {"path", "format"}


def _check_section(section, allowed, name):
    for key in section:
        if key not in allowed:
            raise UsageError(f"unknown key {key!r} in config section {name!r}")


def parse_config(argv):
    """argv (without the program name) -> RunConfig."""
    parser = _Parser(prog="lfrg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--background", choices=BACKGROUND_KINDS)
    common.add_argument("--d", type=int)
    common.add_argument("--beta", type=float)
    common.add_argument("--H2", type=float)
    common.add_argument("--xi", type=float)
    common.add_argument("--mu-mode", choices=("fixed", "tied-to-k", "tied-to-h"))
    common.add_argument("--mu2", type=float)
    common.add_argument("--sign-mode", choices=(flows.SIGN_PAPER, flows.SIGN_KERNEL))
    common.add_argument("--k2-over-h2", type=float)

    p = sub.add_parser("tadpole", parents=[common])
    p.add_argument("--M2", type=float)
    p.add_argument("--k", type=float)

    p = sub.add_parser("beta", parents=[common])
    p.add_argument("--couplings")
    p.add_argument("--t", type=float)
    p.add_argument("--dimensionful", action="store_true")
    p.add_argument("--k", type=float)
    p.add_argument("--mode", choices=("transcribed", "kernel-derived"))
    p.add_argument("--fd-step", type=float)

    p = sub.add_parser("flow", parents=[common])
    p.add_argument("--couplings")
    p.add_argument("--t0", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--Lambda", type=float)
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--abs-tol", type=float)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--checkpoints")

    p = sub.add_parser("fixed-point", parents=[common])
    p.add_argument("--guess")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int)

    p = sub.add_parser("exponents", parents=[common])
    p.add_argument("--at")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("scan", parents=[common])
    p.add_argument("--grid")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("potential-flow", parents=[common])
    p.add_argument("--couplings")
    p.add_argument("--t0", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--k0", type=float)
    p.add_argument("--rho-max", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--abs-tol", type=float)
    p.add_argument("--checkpoints")

    args = parser.parse_args(argv)
    doc = _load_config(args.config) if args.config else {}
    bg_sec = doc.get("background", {})
    cp_sec = doc.get("couplings", {})
    sol_sec = doc.get("solver", {})
    out_sec = doc.get("output", {})
    cmd_sec = doc.get("command", {})
    _check_section(bg_sec, _BG_KEYS, "background")
    _check_section(cp_sec, set(_COUPLING_NAMES), "couplings")
    _check_section(sol_sec, _SOLVER_KEYS, "solver")
    _check_section(out_sec, _OUTPUT_KEYS, "output")

    kind = _pick(args.background, bg_sec, "kind")
    if kind is None:
        raise UsageError("a background is required (--background or config)")
    if kind not in BACKGROUND_KINDS:
        raise UsageError(f"unknown background {kind!r}")

    background = {"kind": kind}
    if kind == "minkowski-vacuum":
        background["d"] = int(_pick(args.d, bg_sec, "d", 4))
    elif kind in ("thermal", "thermal-high-t"):
        beta = _pick(args.beta, bg_sec, "beta", None if kind == "thermal" else 1.0)
        if kind == "thermal" and beta is None:
            raise UsageError("the exact thermal background requires --beta")
        background["beta"] = float(beta)
    else:
        H2 = _pick(args.H2, bg_sec, "H2")
        xi = _pick(args.xi, bg_sec, "xi")
        if H2 is None or xi is None:
            raise UsageError("the de Sitter background requires --H2 and --xi")
        background["H2"] = float(H2)
        background["xi"] = float(xi)
        background["sign_mode"] = _pick(args.sign_mode, bg_sec, "sign_mode",
                                        flows.SIGN_KERNEL)
        k2h2 = _pick(args.k2_over_h2, bg_sec, "k2_over_H2")
        if k2h2 is not None:
            background["k2_over_H2"] = float(k2h2)

    default_mu = "tied-to-h" if kind == "de-sitter" else "tied-to-k"
    mu_kind = _pick(args.mu_mode, bg_sec, "mu_mode", default_mu)
    background["mu_mode"] = mu_kind
    if mu_kind == "fixed":
        mu2 = _pick(args.mu2, bg_sec, "mu2")
        if mu2 is None:
            raise UsageError("--mu-mode fixed requires --mu2")
        background["mu2"] = float(mu2)

    couplings = {"U0": 0.0, "m2": 0.0, "lambda": 0.0}
    couplings.update({k: float(v) for k, v in cp_sec.items()})
    for attr in ("couplings", "guess", "at"):
        text = getattr(args, attr, None)
        if text is not None:
            couplings.update(_parse_couplings(text))

    solver = {}
    for key, flag in (("rel_tol", "rel_tol"), ("abs_tol", "abs_tol"),
                      ("t0", "t0"), ("t1", "t1"), ("Lambda", "Lambda"),
                      ("max_steps", "max_steps"), ("tol", "tol"),
                      ("fd_step", "fd_step")):
        val = _pick(getattr(args, flag, None), sol_sec, key)
        if val is not None:
            solver[key] = val
    if getattr(args, "max_iter", None) is not None or "max_iter" in sol_sec:
        solver["max_iter"] = int(_pick(getattr(args, "max_iter", None),
                                       sol_sec, "max_iter"))

    output = {}
    path = _pick(args.out, out_sec, "path")
    if path is not None:
        output["path"] = path
    output["format"] = _pick(args.format, out_sec, "format",
                             "csv" if args.command in ("flow", "potential-flow")
                             else "json")
    if output["format"] not in ("csv", "json"):
        raise UsageError(f"unknown output format {output['format']!r}")

    extras = {"quiet": bool(args.quiet)}
    for name in ("M2", "k", "t", "mode", "checkpoints", "k0", "rho_max", "N",
                 "dimensionful", "grid"):
        flag = getattr(args, name if name != "rho_max" else "rho_max", None)
        val = _pick(flag, cmd_sec, name)
        if val is not None:
            extras[name] = val

    for key in cmd_sec:
        if key not in ("name", "quiet", "M2", "k", "t", "mode", "checkpoints",
                       "k0", "rho_max", "N", "dimensionful", "grid"):
            raise UsageError(f"unknown key {key!r} in config section 'command'")

    return RunConfig(args.command, background, couplings, solver, output, extras)


def _mu_mode(background):
    kind = background["mu_mode"]
    if kind == "fixed":
        return MuMode.fixed(background["mu2"])
    return MuMode(kind)


def _make_background(background):
    # invalid background parameters are configuration mistakes, not
    # numerical failures, hence the usage exit code
    kind = background["kind"]
    try:
        mu = _mu_mode(background)
        if kind == "minkowski-vacuum":
            return MinkowskiVacuum(background["d"], mu)
        if kind in ("thermal", "thermal-high-t"):
            return Thermal(background["beta"], mu)
        return DeSitter(background["H2"], background["xi"], mu)
    except DomainError as exc:
        raise UsageError(f"invalid background: {exc}")


def _make_system(cfg: RunConfig, frozen_default=None):
    bg = cfg.background
    kind = bg["kind"]
    Lambda = float(cfg.solver.get("Lambda", 1.0))
    background = _make_background(bg)
    try:
        if kind == "minkowski-vacuum":
            return flows.MinkowskiVacuumSystem(background.mu, Lambda)
        if kind == "thermal-high-t":
            return flows.ThermalHighTSystem()
        if kind == "thermal":
            return flows.ThermalExactSystem(background, Lambda)
        frozen = bg.get("k2_over_H2", frozen_default)
        return flows.DeSitterSystem(background,
                                    bg.get("sign_mode", flows.SIGN_KERNEL),
                                    Lambda, frozen)
    except DomainError as exc:
        raise UsageError(f"invalid system configuration: {exc}")


def _coupling_vector(cfg, dimensionless=True):
    conv = {"minkowski-vacuum": "minkowski", "thermal-high-t": "thermal-high-t",
            "de-sitter": "de-sitter", "thermal": "dimensionful"}[cfg.background["kind"]]
    if not dimensionless:
        conv = "dimensionful"
    return flows.CouplingVector(cfg.couplings["U0"], cfg.couplings["m2"],
                                cfg.couplings["lambda"],
                                dimensionless=dimensionless, convention=conv)


def _fmt(x):
    return format(float(x), ".17g")


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IoFailure(f"cannot write {path}: {exc}")


class _IoFailure(Exception):
    pass


def _emit_json(cfg, result, quiet):
    doc = {"config": cfg.to_dict(), "result": result}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    path = cfg.output.get("path")
    if path:
        _write_text(path, text)
        if not quiet:
            print(f"wrote {path}")
    else:
        print(text, end="")


def _emit_trajectory(cfg, traj, quiet):
    fmt = cfg.output["format"]
    path = cfg.output.get("path")
    term = {"kind": traj.termination.kind, "t": traj.termination.t,
            "reason": traj.termination.reason}
    if fmt == "csv":
        lines = ["t,k,U0,m2,lambda"]
        for i in range(traj.t.size):
            row = [traj.t[i], traj.k[i], *traj.couplings[i]]
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
        if path:
            _write_text(path, text)
            meta = {"config": cfg.to_dict(), "termination": term,
                    "n_accepted": traj.n_accepted, "n_rejected": traj.n_rejected}
            _write_text(path + ".meta.json",
                        json.dumps(meta, indent=2, sort_keys=True) + "\n")
            if not quiet:
                print(f"wrote {path} ({traj.t.size} rows)")
        else:
            print(text, end="")
    else:
        result = {"t": [float(v) for v in traj.t],
                  "k": [float(v) for v in traj.k],
                  "couplings": [[float(v) for v in row] for row in traj.couplings],
                  "termination": term,
                  "n_accepted": traj.n_accepted, "n_rejected": traj.n_rejected}
        _emit_json(cfg, result, quiet)
    return term


def _report_dict(rep):
    loc = rep.location.to_array() if hasattr(rep.location, "to_array") \
        else np.asarray(rep.location)
    return {
        "location": {"U0": float(loc[0]), "m2": float(loc[1]),
                     "lambda": float(loc[2])},
        "residual_norm": float(rep.residual_norm),
        "stability_matrix": [[float(v) for v in row] for row in rep.stability_matrix],
        "eigenvalues": [{"re": float(e.real), "im": float(e.imag)}
                        for e in rep.eigenvalues],
        "critical_exponents": [{"re": float(e.real), "im": float(e.imag)}
                               for e in rep.exponents],
        "classification": rep.classification,
        "n_relevant": rep.n_relevant,
        "n_irrelevant": rep.n_irrelevant,
        "n_marginal": rep.n_marginal,
    }


def _cmd_tadpole(cfg, quiet):
    bg = _make_background(cfg.background)
    M2 = cfg.extras.get("M2")
    if M2 is None:
        raise UsageError("tadpole requires --M2")
    k = float(cfg.extras.get("k", 0.0))
    if isinstance(bg, MinkowskiVacuum):
        tv = minkowski_vacuum_wick_square(float(M2), resolve_mu2(bg.mu, k=k), bg.d)
    elif isinstance(bg, Thermal):
        tv = thermal_wick_square(float(M2), bg, k)
    else:
        tv = desitter_wick_square(float(M2), bg, k)
    if not quiet:
        print(_fmt(tv.value))
    _result = {"M2": tv.M2, "value": tv.value}
    if cfg.output.get("path"):
        _emit_json(cfg, _result, quiet)
    return 0


def _cmd_beta(cfg, quiet):
    if cfg.extras.get("dimensionful") or cfg.background["kind"] == "thermal":
        k = cfg.extras.get("k")
        if k is None:
            raise UsageError("dimensionful beta evaluation requires --k")
        g = _coupling_vector(cfg, dimensionless=False)
        mode = flows.BetaMode(cfg.extras.get("mode", "transcribed"),
                              float(cfg.solver.get("fd_step", 1e-5)))
        rates = flows.beta_dimensionful(
            g, float(k), _make_background(cfg.background), mode,
            sign_mode=cfg.background.get("sign_mode", flows.SIGN_KERNEL))
    else:
        sysm = _make_system(cfg)
        g = _coupling_vector(cfg)
        t = float(cfg.extras.get("t", 0.0))
        rates = g.like(sysm.rhs(t, g.to_array()))
    result = {"U0": rates.U0, "m2": rates.m2, "lambda": rates.lam}
    if not quiet and not cfg.output.get("path"):
        print(",".join(_fmt(v) for v in (rates.U0, rates.m2, rates.lam)))
    if cfg.output.get("path"):
        _emit_json(cfg, result, quiet)
    return 0


def _cmd_flow(cfg, quiet):
    sysm = _make_system(cfg)
    g = _coupling_vector(cfg, dimensionless=sysm.dimensionless)
    sol = cfg.solver
    if "t0" not in sol or "t1" not in sol:
        raise UsageError("flow requires --t0 and --t1")
    checkpoints = ()
    if "checkpoints" in cfg.extras:
        checkpoints = tuple(float(v) for v in str(cfg.extras["checkpoints"]).split(","))
    problem = FlowProblem(sysm, g, float(sol["t0"]), float(sol["t1"]),
                          Lambda=float(sol.get("Lambda", 1.0)),
                          rel_tol=float(sol.get("rel_tol", 1e-10)),
                          abs_tol=float(sol.get("abs_tol", 1e-12)),
                          max_steps=int(sol.get("max_steps", 10 ** 6)),
                          checkpoints=checkpoints)
    traj = integrate(problem)
    term = _emit_trajectory(cfg, traj, quiet)
    if term["kind"] != "reached-end":
        if not quiet:
            print(f"flow stopped early: {term['kind']} ({term['reason']})",
                  file=sys.stderr)
        return 2
    return 0


def _frozen_system(cfg):
    # Fixed-point machinery treats k^2/H^2 as an exact parameter, default 0.
    return _make_system(cfg, frozen_default=0.0)


def _cmd_fixed_point(cfg, quiet):
    sysm = _frozen_system(cfg)
    g = _coupling_vector(cfg, dimensionless=sysm.dimensionless)
    tol = float(cfg.solver.get("tol", 1e-12))
    max_iter = int(cfg.solver.get("max_iter", 200))
    try:
        rep = find_fixed_point(sysm, g, tol=tol, max_iter=max_iter)
    except ConvergenceError as exc:
        result = {"termination": "non-convergence", "message": str(exc)}
        if exc.last_iterate is not None:
            result["last_iterate"] = [float(v) for v in exc.last_iterate]
            result["residual_norm"] = float(exc.residual)
        _emit_json(cfg, result, quiet)
        return 2
    result = _report_dict(rep)
    result["termination"] = "converged"
    _emit_json(cfg, result, quiet)
    return 0


def _cmd_exponents(cfg, quiet):
    sysm = _frozen_system(cfg)
    g = _coupling_vector(cfg, dimensionless=sysm.dimensionless)
    # Polish the provided point first: printed fixed-point values are
    # typically rounded well above the stability-analysis residual gate.
    try:
        rep = find_fixed_point(sysm, g, tol=1e-12,
                               max_iter=int(cfg.solver.get("max_iter", 200)))
        rep = stability_analysis(sysm, rep.location)
    except ConvergenceError as exc:
        result = {"termination": "non-convergence", "message": str(exc)}
        _emit_json(cfg, result, quiet)
        return 2
    result = _report_dict(rep)
    result["termination"] = "converged"
    _emit_json(cfg, result, quiet)
    return 0


def _cmd_scan(cfg, quiet):
    sysm = _frozen_system(cfg)
    if "grid" not in cfg.extras:
        raise UsageError("scan requires --grid")
    grid = cfg.extras["grid"]
    if isinstance(grid, str):
        grid = _parse_grid(grid)
    roots, diag = scan_fixed_points(sysm, grid,
                                    tol=float(cfg.solver.get("tol", 1e-12)))
    result = {"roots": [_report_dict(r) for r in roots], "diagnostics": diag}
    _emit_json(cfg, result, quiet)
    return 0


def _cmd_potential_flow(cfg, quiet):
    bg = _make_background(cfg.background)
    if cfg.background["kind"] == "thermal-high-t":
        raise UsageError("potential-flow runs on minkowski-vacuum, thermal or "
                         "de-sitter backgrounds")
    sol = cfg.solver
    if "t0" not in sol or "t1" not in sol:
        raise UsageError("potential-flow requires --t0 and --t1")
    k0 = float(cfg.extras.get("k0", 1.0))
    n = int(cfg.extras.get("N", 128))
    lam = cfg.couplings["lambda"]
    m2 = cfg.couplings["m2"]
    if "rho_max" in cfg.extras:
        rho_max = float(cfg.extras["rho_max"])
    else:
        # Heuristic: keep the interesting region (minimum scale) on grid.
        rho_max = 10.0 * max(abs(m2), k0 * k0) / max(abs(lam), 1e-8)
    rho = np.linspace(0.0, rho_max, n)
    grid = potential.PotentialGrid(
        rho_max, potential.quartic_initial_values(rho, cfg.couplings["U0"], m2, lam),
        k0)
    checkpoints = ()
    if "checkpoints" in cfg.extras:
        checkpoints = tuple(float(v) for v in str(cfg.extras["checkpoints"]).split(","))
    res = potential.flow_potential(grid, bg, (float(sol["t0"]), float(sol["t1"])),
                                   rel_tol=float(sol.get("rel_tol", 1e-8)),
                                   abs_tol=float(sol.get("abs_tol", 1e-10)),
                                   checkpoints=checkpoints,
                                   max_steps=int(sol.get("max_steps", 10 ** 6)))
    term = {"kind": res.termination.kind, "t": res.termination.t,
            "reason": res.termination.reason}
    fmt = cfg.output["format"]
    path = cfg.output.get("path")
    if fmt == "csv":
        lines = ["t,k,rho,U"]
        for snap in res.snapshots:
            t_snap = math.log(snap.k / k0) + float(sol["t0"])
            for rho_i, u_i in zip(snap.rho, snap.values):
                lines.append(",".join(_fmt(v) for v in (t_snap, snap.k, rho_i, u_i)))
        text = "\n".join(lines) + "\n"
        if path:
            _write_text(path, text)
            meta = {"config": cfg.to_dict(), "termination": term}
            _write_text(path + ".meta.json",
                        json.dumps(meta, indent=2, sort_keys=True) + "\n")
            if not quiet:
                print(f"wrote {path} ({len(res.snapshots)} snapshots)")
        else:
            print(text, end="")
    else:
        result = {"termination": term, "snapshots": [
            {"t": math.log(s.k / k0) + float(sol["t0"]), "k": s.k,
             "rho": [float(v) for v in s.rho], "U": [float(v) for v in s.values]}
            for s in res.snapshots]}
        _emit_json(cfg, result, quiet)
    if term["kind"] != "reached-end":
        if not quiet:
            print(f"potential flow stopped early: {term['kind']} ({term['reason']})",
                  file=sys.stderr)
        return 2
    return 0


_COMMANDS = {
    "tadpole": _cmd_tadpole,
    "beta": _cmd_beta,
    "flow": _cmd_flow,
    "fixed-point": _cmd_fixed_point,
    "exponents": _cmd_exponents,
    "scan": _cmd_scan,
    "potential-flow": _cmd_potential_flow,
}


def run(cfg: RunConfig) -> int:
    """Dispatch a resolved RunConfig; returns the process exit code."""
    quiet = bool(cfg.extras.get("quiet"))
    try:
        return _COMMANDS[cfg.command](cfg, quiet)
    except _IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UsageError:
        raise
    except (DomainError, ConvergenceError, LfrgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
