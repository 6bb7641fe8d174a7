"""Command-line front end.

Subcommands: simulate (one realization, CSV + SVG), ensemble (per-path
summaries + moment report), verify (default moment suite + diagnostic
reports), converge (exact vs oracle refinement table), plot (re-render a
trajectory CSV as SVG).

Exit codes: 0 success, 1 check failure, 2 usage/config error, 3 numerical
failure.  Output files are written atomically (temp + rename).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path

import numpy as np

from . import verify as V
from .coeffs import Scale
from .config import RunSpec, parse_runspec
from .errors import ConfigError, NumericalError, StabilityError
from .fields import field_from_csv, field_to_csv
from .paths import path_to_csv, sample_brownian
from .processes import LangevinProcess, LinearSDEProcess
from .spde_exact import solve
from .svg import line_plot

__all__ = ["main"]


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_config(ref: str) -> RunSpec:
    """Load a RunSpec from a file path or a named packaged preset."""
    p = Path(ref)
    if p.exists():
        return parse_runspec(p.read_text())
    preset = resources.files("stochkdv").joinpath(f"presets/{ref}.cfg")
    if preset.is_file():
        return parse_runspec(preset.read_text())
    raise ConfigError(f"config {ref!r}: no such file or preset "
                      f"(presets: {', '.join(preset_names())})")


def preset_names():
    root = resources.files("stochkdv").joinpath("presets")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


def _snapshot_svg(traj, n_slices: int = 5) -> str:
    idx = np.linspace(0, traj.tgrid.n_steps, n_slices).round().astype(int)
    t = traj.tgrid.nodes
    z = traj.sgrid.nodes
    series = [(z, traj.values[i]) for i in idx]
    labels = [f"t={t[i]:.3g}" for i in idx]
    return line_plot(series, labels, title="u(t, z) snapshots",
                     xlabel="z", ylabel="u")


def cmd_simulate(args) -> int:
    spec = load_config(args.config)
    seed = spec.seed if args.seed is None else args.seed
    out = Path(args.out)
    path = sample_brownian(spec.tgrid, seed)
    traj = solve(spec.scenario, path, spec.sgrid)
    _atomic_write(out / "trajectory.csv", field_to_csv(traj))
    _atomic_write(out / "path.csv", path_to_csv(path))
    if args.svg:
        _atomic_write(out / "snapshots.svg", _snapshot_svg(traj))
    print(f"simulate: wrote trajectory ({traj.provenance}) to {out}")
    return 0


def _characteristic_process(spec: RunSpec):
    s = spec.scenario
    if s.kind == "advection":
        return LinearSDEProcess(s.alpha, s.sigma, 0.0, 0.0, s.t0)
    if s.kind == "additive":
        from .spde_exact import _r_coeff
        from .coeffs import multiply
        R = _r_coeff(s.gamma, s.t0)
        Rinv = _r_coeff(s.gamma, s.t0, invert=True)
        return LangevinProcess(multiply(s.beta, R), multiply(s.sigma, Rinv),
                               0.0, s.t0)
    return LinearSDEProcess(Scale(0.5, s.sigma.square()), Scale(-1.0, s.sigma),
                            0.0, 0.0, s.t0)


def cmd_ensemble(args) -> int:
    spec = load_config(args.config)
    seed = spec.seed if args.seed is None else args.seed
    out = Path(args.out)
    mid = spec.sgrid.n_points // 2
    lines = ["path,W_T,char_T,u_T_mid"]
    for k in range(args.paths):
        path = sample_brownian(spec.tgrid, seed, path_index=k)
        traj = solve(spec.scenario, path, spec.sgrid)
        proc = _characteristic_process(spec)
        if isinstance(proc, LangevinProcess):
            char = proc.simulate(path)[0][-1]
        else:
            char = proc.simulate(path, 0.0)[-1]
        lines.append(f"{k},{path.values[-1]:.17g},{char:.17g},"
                     f"{traj.values[-1, mid]:.17g}")
    _atomic_write(out / "paths_summary.csv", "\n".join(lines) + "\n")

    n = spec.tgrid.n_steps
    probes = [spec.tgrid.nodes[i] for i in (n // 4, n // 2, n)]
    n_mc = max(args.paths, 10_000)
    reports = V.moment_suite(_characteristic_process(spec), spec.tgrid, probes,
                             n_mc, seed, name=spec.scenario.kind)
    mlines = ["t,quantity,closed_form,mc_estimate,std_err,z_score"]
    for r in reports:
        if not math.isfinite(r.band) or r.band == 0:
            continue
        se = r.band / 3.0
        z = (r.observed - r.expected) / se
        tval = r.quantity.split("@t=")[1].split(",")[0]
        mlines.append(f"{tval},{r.name}.{r.quantity.split('@')[0]},"
                      f"{r.expected:.17g},{r.observed:.17g},{se:.17g},{z:.6g}")
    _atomic_write(out / "moments.csv", "\n".join(mlines) + "\n")
    failed = [r for r in reports if r.verdict == "fail"]
    print(f"ensemble: {args.paths} paths, {len(reports)} moment checks, "
          f"{len(failed)} failed")
    return 1 if failed else 0


def cmd_verify(args) -> int:
    out = Path(args.out)
    reports = V.default_moment_suite(n_paths=args.paths, seed=args.seed)
    _atomic_write(out / "verdicts.csv", V.reports_to_csv(reports))
    _atomic_write(out / "example1_discrepancy.csv",
                  V.reports_to_csv(V.example1_discrepancy_report()))
    _atomic_write(out / "spatial_noise_gap.csv",
                  V.reports_to_csv(V.spatial_noise_report()))
    n_fail = sum(r.verdict == "fail" for r in reports)
    n_inc = sum(r.verdict == "inconclusive" for r in reports)
    print(f"verify: {len(reports)} checks, {n_fail} failed, {n_inc} inconclusive")
    return 1 if n_fail else 0


def cmd_converge(args) -> int:
    spec = load_config(args.config)
    if args.seed is not None:
        spec = RunSpec(spec.scenario, spec.tgrid, spec.sgrid, args.seed,
                       spec.phi_spec)
    levels = [512 * 2 ** i for i in range(args.levels)]
    rows, order = V.convergence_study(spec, levels)
    _atomic_write(Path(args.out) / "convergence.csv",
                  V.convergence_to_csv(rows, order))
    print(f"converge: estimated order {order:.3f} over {len(rows)} levels")
    return 0


def cmd_plot(args) -> int:
    traj = field_from_csv(Path(args.input).read_text())
    _atomic_write(Path(args.out) / "snapshots.svg", _snapshot_svg(traj))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stochkdv",
                                 description="Exact stochastic KdV-Burgers solutions")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="one realization -> CSV (+SVG)")
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--out", required=True)
    sim.add_argument("--svg", action=argparse.BooleanOptionalAction, default=True)
    sim.set_defaults(fn=cmd_simulate)

    ens = sub.add_parser("ensemble", help="many paths -> summaries + moments")
    ens.add_argument("--config", required=True)
    ens.add_argument("--paths", type=int, default=200)
    ens.add_argument("--seed", type=int, default=None)
    ens.add_argument("--out", required=True)
    ens.set_defaults(fn=cmd_ensemble)

    ver = sub.add_parser("verify", help="default moment suite + diagnostics")
    ver.add_argument("--paths", type=int, default=100_000)
    ver.add_argument("--seed", type=int, default=20240817)
    ver.add_argument("--out", required=True)
    ver.set_defaults(fn=cmd_verify)

    con = sub.add_parser("converge", help="exact vs oracle refinement table")
    con.add_argument("--config", required=True)
    con.add_argument("--levels", type=int, default=3)
    con.add_argument("--seed", type=int, default=None)
    con.add_argument("--out", required=True)
    con.set_defaults(fn=cmd_converge)

    plo = sub.add_parser("plot", help="render a trajectory CSV as SVG")
    plo.add_argument("--input", required=True)
    plo.add_argument("--out", required=True)
    plo.set_defaults(fn=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (StabilityError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
