"""
Sectioned key=value run configuration: parsing, validation, rendering.

Format: INI-style sections ``[model]``, ``[impact]``, ``[stochastic]``,
``[events]``, ``[grid]``, ``[run]`` with ``key = value`` lines and ``#``
comments. Omitted keys fall back to the model's canonical defaults
(sigma_m = 0.03, k = 2, eta = 2, xi = 5, rho = 0.9, sigma_n = 0.2,
kappa = 8, s0 = 100, impact kind tanh with c = 1). Empty sections are
treated as absent. ``render_config`` writes the fully resolved document
back out; parsing that text reproduces the same RunConfig exactly.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .analysis import GridSpec
from .model import ImpactSpec, ModelParams
from .stochastic import EventSpec, StochasticSpec


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""


SECTIONS = ("model", "impact", "stochastic", "events", "grid", "run")

_MODEL_KEYS = {
    "lambda", "beta", "mu0", "n0", "gamma0",
    "sigma_m", "k", "c", "eta", "xi", "s0",
}
_MODEL_REQUIRED = ("lambda", "beta", "mu0", "n0", "gamma0")
_IMPACT_KEYS = {"kind", "c", "i_max"}
_STOCH_KEYS = {"rho", "sigma_n", "kappa", "seed"}
_EVENT_KEYS = {"n_spikes", "max_fraction", "seed"}
_GRID_KEYS = {
    "beta_min", "beta_max", "g_min", "g_max", "n_beta", "n_g",
    "shock_ratio", "lambda", "sigma_m", "k",
}
_GRID_REQUIRED = ("beta_min", "beta_max", "g_min", "g_max", "n_beta", "n_g",
                  "shock_ratio", "lambda")
_RUN_KEYS = {"horizon", "out", "emit_svg"}


@dataclass
class RunConfig:
    """Fully resolved inputs for one run; sections absent from the config
    stay None."""

    model: ModelParams | None = None
    impact: ImpactSpec | None = None
    stochastic: StochasticSpec | None = None
    events: EventSpec | None = None
    grid: GridSpec | None = None
    horizon: int | None = None
    output_dir: str | None = None
    emit_svg: bool = False


def _check_keys(section: str, present, allowed) -> None:
    unknown = sorted(set(present) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")


def _require(section: str, data: dict, keys) -> None:
    missing = [k for k in keys if k not in data]
    if missing:
        raise ConfigError(f"missing required key(s) in [{section}]: {', '.join(missing)}")


def _float(section: str, data: dict, key: str, default=None) -> float:
    if key not in data:
        return default
    try:
        return float(data[key])
    except ValueError:
        raise ConfigError(f"[{section}] {key} is not a number: {data[key]!r}") from None


def _int(section: str, data: dict, key: str, default=None):
    if key not in data:
        return default
    try:
        return int(data[key])
    except ValueError:
        raise ConfigError(f"[{section}] {key} is not an integer: {data[key]!r}") from None


def _bool(section: str, data: dict, key: str, default: bool) -> bool:
    if key not in data:
        return default
    text = data[key].strip().lower()
    if text in ("true", "1", "yes", "on"):
        return True
    if text in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"[{section}] {key} is not a boolean: {data[key]!r}")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a sectioned key=value document.

    Raises ConfigError with a line reference for syntax problems and with
    the offending field name for validation problems.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None

    sections = {name: dict(parser.items(name)) for name in parser.sections()}
    unknown = sorted(set(sections) - set(SECTIONS))
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")

    config = RunConfig()

    if "run" in sections:
        data = sections["run"]
        _check_keys("run", data, _RUN_KEYS)
        config.horizon = _int("run", data, "horizon")
        if config.horizon is not None and config.horizon < 1:
            raise ConfigError(f"[run] horizon must be >= 1 (got {config.horizon})")
        config.output_dir = data.get("out")
        config.emit_svg = _bool("run", data, "emit_svg", False)

    if "model" in sections:
        data = sections["model"]
        _check_keys("model", data, _MODEL_KEYS)
        _require("model", data, _MODEL_REQUIRED)
        try:
            config.model = ModelParams(
                lam=_float("model", data, "lambda"),
                beta=_float("model", data, "beta"),
                mu0=_float("model", data, "mu0"),
                n0=_float("model", data, "n0"),
                gamma0=_float("model", data, "gamma0"),
                sigma_m=_float("model", data, "sigma_m", 0.03),
                k=_float("model", data, "k", 2.0),
                c=_float("model", data, "c", 1.0),
                eta=_float("model", data, "eta", 2.0),
                xi=_float("model", data, "xi", 5.0),
                s0=_float("model", data, "s0", 100.0),
            )
        except ValueError as exc:
            raise ConfigError(f"[model] {exc}") from None

    if "impact" in sections:
        data = sections["impact"]
        _check_keys("impact", data, _IMPACT_KEYS)
        try:
            config.impact = ImpactSpec(
                kind=data.get("kind", "tanh"),
                c=_float("impact", data, "c", 1.0),
                i_max=_float("impact", data, "i_max", 1.0),
            )
        except ValueError as exc:
            raise ConfigError(f"[impact] {exc}") from None

    if "stochastic" in sections:
        data = sections["stochastic"]
        _check_keys("stochastic", data, _STOCH_KEYS)
        try:
            config.stochastic = StochasticSpec(
                rho=_float("stochastic", data, "rho", 0.9),
                sigma_n=_float("stochastic", data, "sigma_n", 0.2),
                kappa=_float("stochastic", data, "kappa", 8.0),
                seed=_int("stochastic", data, "seed", 0),
            )
        except ValueError as exc:
            raise ConfigError(f"[stochastic] {exc}") from None

    if "events" in sections:
        data = sections["events"]
        _check_keys("events", data, _EVENT_KEYS)
        if config.horizon is None:
            raise ConfigError("[events] requires [run] horizon")
        try:
            config.events = EventSpec(
                horizon=config.horizon,
                n_spikes=_int("events", data, "n_spikes", 70),
                max_fraction=_float("events", data, "max_fraction", 0.3),
                seed=_int("events", data, "seed", 0),
            )
        except ValueError as exc:
            raise ConfigError(f"[events] {exc}") from None

    if "grid" in sections:
        data = sections["grid"]
        _check_keys("grid", data, _GRID_KEYS)
        _require("grid", data, _GRID_REQUIRED)
        try:
            config.grid = GridSpec(
                beta_min=_float("grid", data, "beta_min"),
                beta_max=_float("grid", data, "beta_max"),
                g_min=_float("grid", data, "g_min"),
                g_max=_float("grid", data, "g_max"),
                n_beta=_int("grid", data, "n_beta"),
                n_g=_int("grid", data, "n_g"),
                shock_ratio=_float("grid", data, "shock_ratio"),
                lam=_float("grid", data, "lambda"),
                sigma_m=_float("grid", data, "sigma_m", 0.03),
                k=_float("grid", data, "k", 2.0),
            )
        except ValueError as exc:
            raise ConfigError(f"[grid] {exc}") from None

    return config


def render_config(config: RunConfig) -> str:
    """Serialize a RunConfig as the resolved sectioned document.

    Floats use their shortest round-trip representation, so
    ``parse_config(render_config(c)) == c`` for every valid config.
    """
    lines: list[str] = []

    def emit(section: str, pairs: list[tuple[str, object]]) -> None:
        lines.append(f"[{section}]")
        for key, value in pairs:
            lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
        lines.append("")

    if config.model is not None:
        m = config.model
        emit("model", [
            ("lambda", m.lam), ("beta", m.beta), ("mu0", m.mu0),
            ("n0", m.n0), ("gamma0", m.gamma0), ("sigma_m", m.sigma_m),
            ("k", m.k), ("c", m.c), ("eta", m.eta), ("xi", m.xi), ("s0", m.s0),
        ])
    if config.impact is not None:
        imp = config.impact
        emit("impact", [("kind", imp.kind), ("c", imp.c), ("i_max", imp.i_max)])
    if config.stochastic is not None:
        st = config.stochastic
        emit("stochastic", [
            ("rho", st.rho), ("sigma_n", st.sigma_n),
            ("kappa", st.kappa), ("seed", st.seed),
        ])
    if config.events is not None:
        ev = config.events
        emit("events", [
            ("n_spikes", ev.n_spikes), ("max_fraction", ev.max_fraction),
            ("seed", ev.seed),
        ])
    if config.grid is not None:
        g = config.grid
        emit("grid", [
            ("beta_min", g.beta_min), ("beta_max", g.beta_max),
            ("g_min", g.g_min), ("g_max", g.g_max),
            ("n_beta", g.n_beta), ("n_g", g.n_g),
            ("shock_ratio", g.shock_ratio), ("lambda", g.lam),
            ("sigma_m", g.sigma_m), ("k", g.k),
        ])
    run_pairs: list[tuple[str, object]] = []
    if config.horizon is not None:
        run_pairs.append(("horizon", config.horizon))
    if config.output_dir is not None:
        run_pairs.append(("out", config.output_dir))
    run_pairs.append(("emit_svg", "true" if config.emit_svg else "false"))
    emit("run", run_pairs)
    return "\n".join(lines)
