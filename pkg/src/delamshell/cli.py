"""Command-line front end: run benchmarks, emit analytic curves, compare.

Exit codes: 0 on success, 1 on configuration errors, 2 when the solver
fails to converge.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, field

import click
import numpy as np

from . import analytic as ana
from .config import RunConfig, defaults_text, parse_config
from .errors import ConfigError, ConvergenceError, DelamshellError
from .laminate import PlyLayup, effective_rigidities_slb
from .mesh import (boundary_and_load_sets, build_model, default_geometry,
                   parse_slb_layup, precrack_contact)
from .solver import LoadDisplacementCurve, SolverSettings, run_analysis

log = logging.getLogger("delamshell")


def _solver_settings(config: RunConfig) -> SolverSettings:
    return SolverSettings(
        tol_residual=config.tol_residual,
        tol_displacement=config.tol_displacement,
        max_iterations=config.max_iterations,
        max_cuts=config.max_cuts,
        initial_fraction=config.initial_fraction,
        growth=config.growth,
        max_fraction=config.max_fraction,
        elastic_only=config.elastic_only,
    )


def build_benchmark(config: RunConfig):
    """Model plus load specification for a run configuration."""
    config.validate()
    material = config.lookup_materials()[config.resolved_material()]
    geometry = default_geometry(config.case, **config.geometry_overrides())
    model = build_model(geometry, material, config.element_size,
                        slb_layup=config.slb_layup,
                        strip_elements=config.strip_elements,
                        alpha=config.alpha)
    precrack_contact(model, alpha=config.contact_alpha)
    return model, boundary_and_load_sets(model)


def run_benchmark(config: RunConfig) -> LoadDisplacementCurve:
    """Build and run one benchmark, returning the simulated curve."""
    model, loads = build_benchmark(config)
    log.info("model summary:\n%s", model.summary())
    curve = run_analysis(model, loads, config.resolved_ramp(),
                         _solver_settings(config))
    curve.metadata.update({
        "material": config.resolved_material(),
        "element_size_mm": f"{config.element_size:g}",
        "ramp_mm": f"{config.resolved_ramp():g}",
    })
    if config.case == "slb":
        curve.metadata["slb_layup"] = config.slb_layup
    return curve


def analytic_curve(config: RunConfig) -> ana.AnalyticCurve:
    """Reference curve matching a run configuration (same geometry keys)."""
    config.validate()
    material = config.lookup_materials()[config.resolved_material()]
    geometry = default_geometry(config.case, **config.geometry_overrides())
    if config.case == "dcb":
        return ana.dcb_curve(geometry, material)
    if config.case == "enf":
        return ana.enf_curve(geometry, material)
    if config.case == "mmb":
        return ana.mmb_curve(geometry, material)
    top_angles, bot_angles = parse_slb_layup(config.slb_layup)
    t_ply_top = geometry.t_top / len(top_angles)
    t_ply_bot = geometry.t_bot / len(bot_angles)
    cracked = PlyLayup.build([(material, a, t_ply_top) for a in top_angles])
    uncracked = PlyLayup.build(
        [(material, a, t_ply_top) for a in top_angles]
        + [(material, a, t_ply_bot) for a in bot_angles])
    d1, d0, _ = effective_rigidities_slb(cracked, uncracked,
                                         plane_strain=config.plane_strain)
    curve = ana.slb_curve(geometry, d0, d1, material,
                          mode_mix=config.slb_mode_mix)
    curve.metadata["slb_layup"] = config.slb_layup
    return curve


# --- curve comparison ---------------------------------------------------------


@dataclass
class ComparisonReport:
    """Error metrics of a simulated curve against a reference curve, over
    the displacement range both curves share."""

    peak_load_error_pct: float
    stiffness_error_pct: float   # signed: positive = simulation stiffer
    auc_error_pct: float
    runtime_s: float = float("nan")
    mesh: dict = field(default_factory=dict)

    def text(self) -> str:
        lines = [
            f"peak load error      : {self.peak_load_error_pct:+.3f} %",
            f"initial stiffness    : {self.stiffness_error_pct:+.3f} %",
            f"area under curve     : {self.auc_error_pct:+.3f} %",
            f"runtime              : {self.runtime_s:.3f} s",
        ]
        for key, value in self.mesh.items():
            lines.append(f"{key:21}: {value}")
        return "\n".join(lines)


def _common_range(d_sim, d_ana):
    lo = max(d_sim.min(), d_ana.min())
    hi = min(d_sim.max(), d_ana.max())
    if hi <= lo:
        raise ConfigError("curves have disjoint displacement ranges")
    return lo, hi


def _resample(disp, load, grid):
    order = np.argsort(disp, kind="stable")
    return np.interp(grid, disp[order], load[order])


def _fit_stiffness(disp, load, lo, hi):
    grid = np.linspace(lo, hi, 30)
    p = _resample(disp, load, grid)
    denom = float(grid @ grid)
    return float(grid @ p) / denom if denom > 0.0 else 0.0


def compare_curves(sim_disp, sim_load, ana_disp, ana_load,
                   runtime_s=float("nan"), mesh=None) -> ComparisonReport:
    """Peak-load, initial-stiffness and area errors of sim vs reference."""
    sim_disp = np.asarray(sim_disp, dtype=float)
    ana_disp = np.asarray(ana_disp, dtype=float)
    sim_load = np.abs(np.asarray(sim_load, dtype=float))
    ana_load = np.abs(np.asarray(ana_load, dtype=float))
    if sim_disp.size == 0 or ana_disp.size == 0:
        raise ConfigError("cannot compare empty curves")
    lo, hi = _common_range(sim_disp, ana_disp)

    grid = np.linspace(lo, hi, 800)
    p_sim = _resample(sim_disp, sim_load, grid)
    p_ana = _resample(ana_disp, ana_load, grid)
    peak_err = (p_sim.max() - p_ana.max()) / p_ana.max() * 100.0

    d_peak = grid[int(np.argmax(p_ana))]
    fit_hi = lo + 0.2 * (d_peak - lo)
    k_sim = _fit_stiffness(sim_disp, sim_load, lo, fit_hi)
    k_ana = _fit_stiffness(ana_disp, ana_load, lo, fit_hi)
    stiff_err = (k_sim - k_ana) / k_ana * 100.0 if k_ana else float("nan")

    auc_sim = np.trapezoid(p_sim, grid)
    auc_ana = np.trapezoid(p_ana, grid)
    auc_err = (auc_sim - auc_ana) / auc_ana * 100.0 if auc_ana else float("nan")

    return ComparisonReport(peak_load_error_pct=float(peak_err),
                            stiffness_error_pct=float(stiff_err),
                            auc_error_pct=float(auc_err),
                            runtime_s=runtime_s, mesh=mesh or {})


def post_peak_mean_error(sim_disp, sim_load, ana_disp, ana_load) -> float:
    """Mean absolute relative load error beyond the reference peak."""
    sim_disp = np.asarray(sim_disp, dtype=float)
    ana_disp = np.asarray(ana_disp, dtype=float)
    sim_load = np.abs(np.asarray(sim_load, dtype=float))
    ana_load = np.abs(np.asarray(ana_load, dtype=float))
    lo, hi = _common_range(sim_disp, ana_disp)
    grid = np.linspace(lo, hi, 800)
    p_ana = _resample(ana_disp, ana_load, grid)
    start = int(np.argmax(p_ana))
    if start >= grid.size - 2:
        raise ConfigError("no post-peak range shared by both curves")
    grid = grid[start:]
    p_ana = p_ana[start:]
    p_sim = _resample(sim_disp, sim_load, grid)
    return float(np.mean(np.abs(p_sim - p_ana)) / np.mean(p_ana))


# --- click commands -----------------------------------------------------------


def _load_config(config_path, overrides) -> RunConfig:
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            config = parse_config(fh.read())
    else:
        config = RunConfig()
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    return config


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log solver progress.")
def main(verbose):
    """Delamination benchmarks with layered shells and cohesive interfaces."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(message)s", stream=sys.stderr)


_shared_options = [
    click.option("--config", "config_path", type=click.Path(exists=True),
                 default=None, help="Configuration file."),
    click.option("--case", type=click.Choice(["dcb", "enf", "mmb", "slb"]),
                 default=None),
    click.option("--size", "element_size", type=float, default=None,
                 help="Element size in mm."),
    click.option("--material", default=None),
    click.option("--ramp", type=float, default=None,
                 help="Total control displacement in mm."),
    click.option("--a0", type=float, default=None, help="Pre-crack length."),
    click.option("--out", default=None, help="Output CSV path."),
]


def _with_shared(func):
    for option in reversed(_shared_options):
        func = option(func)
    return func


@main.command()
@_with_shared
@click.option("--strip", "strip_elements", type=int, default=None,
              help="Mesh a strip this many elements wide (loads rescaled).")
def run(config_path, **overrides):
    """Run one benchmark and write the load-displacement curve."""
    try:
        config = _load_config(config_path, overrides)
        curve = run_benchmark(config)
    except (ConfigError, DelamshellError) as exc:
        if isinstance(exc, ConvergenceError):
            click.echo(f"solver did not converge: {exc}", err=True)
            sys.exit(2)
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(1)
    out = config.resolved_out()
    curve.to_csv(out)
    click.echo(f"wrote {out} ({len(curve)} increments, "
               f"peak load {np.abs(curve.load).max():.2f} N, "
               f"wall time {curve.metadata['wall_time_s']} s)")


@main.command("analytic")
@_with_shared
def analytic_cmd(config_path, **overrides):
    """Write the analytic reference curve for a configuration."""
    try:
        config = _load_config(config_path, overrides)
        curve = analytic_curve(config)
    except (ConfigError, DelamshellError) as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(1)
    out = config.out or f"{config.case}_analytic.csv"
    curve.to_csv(out)
    click.echo(f"wrote {out} (peak load {curve.peak_load:.2f} N)")


@main.command()
@click.argument("sim_csv", type=click.Path(exists=True))
@click.argument("ana_csv", type=click.Path(exists=True))
def compare(sim_csv, ana_csv):
    """Compare a simulated curve against a reference curve."""
    sim = LoadDisplacementCurve.from_csv(sim_csv)
    ref = LoadDisplacementCurve.from_csv(ana_csv)
    try:
        report = compare_curves(
            sim.displacement, sim.load, ref.displacement, ref.load,
            runtime_s=float(sim.metadata.get("wall_time_s", "nan")),
            mesh={key: sim.metadata[key] for key in
                  ("a0_actual_mm", "nodes", "elements_cohesive")
                  if key in sim.metadata})
    except ConfigError as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(1)
    click.echo(report.text())


@main.command()
def defaults():
    """Print every configuration default, including material tables."""
    click.echo(defaults_text())


if __name__ == "__main__":
    main()
