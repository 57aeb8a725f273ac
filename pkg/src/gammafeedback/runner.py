"""
Subcommand orchestration: compute, write artifacts, record the manifest.

Each run owns a fresh output directory (an existing non-empty directory is
refused, never overwritten), writes its CSV artifacts and an optional SVG,
then a ``config.resolved.cfg`` with every default filled in and a
``manifest.json`` with SHA-256 digests of all outputs. Re-running the
resolved config reproduces the digests exactly.
"""

from __future__ import annotations

import dataclasses
import time
from pathlib import Path

from . import __version__
from .analysis import (
    amplification_grid,
    analyze_fixed_point,
    critical_exposure,
    extract_contour,
    linearized_feedback,
    stability_grid,
)
from .artifacts import (
    RunManifest,
    contour_csv,
    curve_csv,
    grid_csv,
    trajectory_csv,
)
from .config import ConfigError, RunConfig, render_config
from .dynamics import simulate_recursive
from .model import stability_denominator, static_response
from .stochastic import simulate_event_driven, simulate_stochastic
from .svgplot import emit_svg, line_chart_svg

SUBCOMMANDS = (
    "stability-map",
    "amplification-map",
    "static-response",
    "simulate",
    "simulate-stochastic",
    "simulate-events",
    "bifurcation-scan",
    "fixed-point",
)

_REQUIRED_SECTIONS = {
    "stability-map": ("grid",),
    "amplification-map": ("grid",),
    "static-response": ("model",),
    "simulate": ("model", "impact"),
    "simulate-stochastic": ("model", "impact", "stochastic"),
    "simulate-events": ("model", "impact", "events"),
    "bifurcation-scan": ("grid",),
    "fixed-point": ("model", "impact"),
}

_NEEDS_HORIZON = ("simulate", "simulate-stochastic", "simulate-events")


def validate_for_subcommand(name: str, config: RunConfig) -> None:
    if name not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {name!r}")
    missing = [s for s in _REQUIRED_SECTIONS[name] if getattr(config, s) is None]
    if missing:
        raise ConfigError(
            f"subcommand {name} requires section(s): {', '.join(f'[{s}]' for s in missing)}"
        )
    if name in _NEEDS_HORIZON and config.horizon is None:
        raise ConfigError(f"subcommand {name} requires [run] horizon")


def _seeds_for(name: str, config: RunConfig) -> dict[str, int]:
    seeds = {}
    if name == "simulate-stochastic" and config.stochastic is not None:
        seeds["stochastic"] = config.stochastic.seed
    if name == "simulate-events" and config.events is not None:
        seeds["events"] = config.events.seed
    return seeds


def apply_seed_override(config: RunConfig, seed: int) -> RunConfig:
    """Return a copy with both stochastic and event seeds replaced."""
    out = dataclasses.replace(config)
    if out.stochastic is not None:
        out.stochastic = dataclasses.replace(out.stochastic, seed=seed)
    if out.events is not None:
        out.events = dataclasses.replace(out.events, seed=seed)
    return out


def _compute(name: str, config: RunConfig) -> list[tuple[str, str]]:
    """Run the subcommand; returns (filename, content) pairs."""
    files: list[tuple[str, str]] = []

    if name == "stability-map":
        scan = stability_grid(config.grid)
        contour = extract_contour(scan, 0.0)
        files.append(("stability_grid.csv", grid_csv(scan)))
        files.append(("stability_contour.csv", contour_csv(contour)))
        if config.emit_svg:
            svg = emit_svg(scan, contours=[(contour, "#000000", "6,4")],
                           title="Stability denominator")
            files.append(("stability_map.svg", svg))

    elif name == "amplification-map":
        dscan = stability_grid(config.grid)
        ascan = amplification_grid(config.grid)
        amp2 = extract_contour(ascan, 2.0)
        d0 = extract_contour(dscan, 0.0)
        files.append(("amplification_grid.csv", grid_csv(ascan)))
        files.append(("amplification_contour.csv", contour_csv(amp2)))
        files.append(("stability_contour.csv", contour_csv(d0)))
        if config.emit_svg:
            svg = emit_svg(
                ascan,
                contours=[(amp2, "#cc0000", "8,3,2,3"), (d0, "#000000", "6,4")],
                title="Amplification",
            )
            files.append(("amplification_map.svg", svg))

    elif name == "static-response":
        model = config.model
        shock = model.mu0
        d = stability_denominator(model, shock)
        ds = static_response(model, shock, model.s0)
        header = "shock_ratio,s0,stability_denominator,ds,amplification\n"
        row = f"{shock!r},{model.s0!r},{d!r},{ds!r},{1.0 / d!r}\n"
        files.append(("static_response.csv", header + row))

    elif name == "simulate":
        traj = simulate_recursive(config.model, config.impact, config.horizon)
        files.append(("trajectory.csv", trajectory_csv(traj)))
        if config.emit_svg:
            files.append(("trajectory.svg", emit_svg(traj, title="Recursive feedback")))

    elif name == "simulate-stochastic":
        traj = simulate_stochastic(
            config.model, config.impact, config.stochastic, config.horizon
        )
        files.append(("trajectory.csv", trajectory_csv(traj)))
        if config.emit_svg:
            files.append(("trajectory.svg", emit_svg(traj, title="Stochastic exposure")))

    elif name == "simulate-events":
        traj = simulate_event_driven(
            config.model, config.impact, config.events, config.stochastic
        )
        files.append(("trajectory.csv", trajectory_csv(traj)))
        if config.emit_svg:
            files.append(("trajectory.svg", emit_svg(traj, title="Event-driven exposure")))

    elif name == "bifurcation-scan":
        grid = config.grid
        betas = grid.betas()
        roots = [
            critical_exposure(grid.lam, b, grid.shock_ratio, grid.sigma_m, grid.k)
            for b in betas
        ]
        files.append(("bifurcation.csv", curve_csv(betas, roots)))
        if config.emit_svg:
            files.append((
                "bifurcation.svg",
                line_chart_svg(betas, roots, title="Critical exposure",
                               xlabel="beta", ylabel="G*"),
            ))

    elif name == "fixed-point":
        model = config.model
        a = model.mu0 * model.s0
        f = linearized_feedback(model, config.impact)
        report = analyze_fixed_point(a, f)
        fp = report.fixed_point
        header = "a,f,fixed_point,singular,classification\n"
        row = (
            f"{a!r},{f!r},{0.0 if fp is None else fp!r},"
            f"{int(fp is None)},{report.classification.value}\n"
        )
        files.append(("fixed_point.csv", header + row))

    return files


def run_subcommand(name: str, config: RunConfig, out_dir: str | Path) -> RunManifest:
    """Execute a subcommand and write all artifacts plus the manifest."""
    validate_for_subcommand(name, config)
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        raise FileExistsError(f"output directory {out} is not empty; refusing to overwrite")
    out.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    files = _compute(name, config)
    duration = time.perf_counter() - start

    resolved = render_config(config)
    manifest = RunManifest(
        tool="gammafeedback",
        version=__version__,
        subcommand=name,
        config_text=resolved,
        seeds=_seeds_for(name, config),
        duration_seconds=duration,
    )
    for filename, content in [*files, ("config.resolved.cfg", resolved)]:
        path = out / filename
        path.write_text(content, encoding="utf-8")
        manifest.add_output(path, content)
    (out / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest
