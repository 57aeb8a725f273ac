"""
Stochastic exposure dynamics: AR(1) option inflow, censoring, and
event-driven spike arrivals, all under a seeded bit-exact generator.

The effective exposure fed to the hedging term is ``n_t + nu_t`` censored
to [0, cap], where ``nu`` follows ``nu' = rho * nu + sigma_n * n_t * eps``
with the deterministic position as the scale, and the cap is the
stationary-dispersion reference level ``n0 * (1 + kappa * sigma_n /
sqrt(1 - rho^2))``. Deterministic decay of the position itself is
unchanged. In event-driven runs the AR process is replaced by a sparse
schedule of uniform spikes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import Trajectory, feedback_step, initial_state
from .model import ImpactSpec, ModelParams
from .rng import Rng


@dataclass(frozen=True)
class StochasticSpec:
    """AR(1) exposure-noise parameters and the run seed."""

    rho: float = 0.9
    sigma_n: float = 0.2
    kappa: float = 8.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not abs(self.rho) < 1:
            raise ValueError(f"rho must satisfy |rho| < 1 (got {self.rho})")
        if self.sigma_n < 0:
            raise ValueError(f"sigma_n must be >= 0 (got {self.sigma_n})")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be > 0 (got {self.kappa})")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError(f"seed must be a 64-bit unsigned integer (got {self.seed})")


@dataclass(frozen=True)
class EventSpec:
    """Sparse option-arrival schedule: spike count, size bound, horizon."""

    horizon: int
    n_spikes: int = 70
    max_fraction: float = 0.3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1 (got {self.horizon})")
        if self.n_spikes < 0:
            raise ValueError(f"n_spikes must be >= 0 (got {self.n_spikes})")
        if self.n_spikes > self.horizon:
            raise ValueError(
                f"n_spikes ({self.n_spikes}) must not exceed horizon ({self.horizon})"
            )
        if self.max_fraction < 0:
            raise ValueError(f"max_fraction must be >= 0 (got {self.max_fraction})")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError(f"seed must be a 64-bit unsigned integer (got {self.seed})")


def ar1_step(nu: float, rho: float, sigma_n: float, n_t: float, epsilon: float) -> float:
    """One AR(1) update: rho * nu + sigma_n * n_t * epsilon."""
    if not abs(rho) < 1:
        raise ValueError(f"rho must satisfy |rho| < 1 (got {rho})")
    return rho * nu + sigma_n * n_t * epsilon


def exposure_cap(n0: float, sigma_n: float, rho: float, kappa: float = 8.0) -> float:
    """Conservative upper bound n0 + kappa * sigma_n * n0 / sqrt(1 - rho^2)."""
    if not abs(rho) < 1:
        raise ValueError(f"rho must satisfy |rho| < 1 (got {rho})")
    return n0 + kappa * sigma_n * n0 / math.sqrt(1.0 - rho * rho)


def censor_exposure(n_bar: float, cap: float) -> float:
    """Clip effective exposure to [0, cap]: no short inventory, capped size."""
    if not cap > 0:
        raise ValueError(f"cap must be > 0 (got {cap})")
    return min(max(n_bar, 0.0), cap)


def simulate_stochastic(
    params: ModelParams,
    impact: ImpactSpec,
    stoch: StochasticSpec,
    horizon: int,
) -> Trajectory:
    """Recursive run with AR(1) exposure deviations.

    Each step draws a normal, advances ``nu`` (scaled by the deterministic
    position), censors ``n_t + nu`` to [0, cap], and feeds the result to
    the hedging term. Bit-identical output for identical inputs.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1 (got {horizon})")
    rng = Rng(stoch.seed)
    cap = exposure_cap(params.n0, stoch.sigma_n, stoch.rho, stoch.kappa)
    nu = 0.0
    states = [initial_state(params, nu0=nu)]
    for _ in range(horizon):
        state = states[-1]
        nu = ar1_step(nu, stoch.rho, stoch.sigma_n, state.n_t, rng.normal())
        n_bar = censor_exposure(state.n_t + nu, cap)
        states.append(
            feedback_step(state, params, impact, exposure_override=n_bar, nu_next=nu)
        )
    return Trajectory(
        params=params,
        impact=impact,
        states=states,
        seed=stoch.seed,
        mode="stochastic",
    )


def generate_event_spikes(spec: EventSpec, n0: float) -> dict[int, float]:
    """Seeded spike schedule: step index -> exposure increment.

    Indices are drawn without replacement from [0, horizon); magnitudes
    are uniform on [0, max_fraction * n0], assigned in draw order.
    """
    rng = Rng(spec.seed)
    indices = rng.sample_indices(spec.horizon, spec.n_spikes)
    bound = spec.max_fraction * n0
    schedule = {idx: rng.uniform() * bound for idx in indices}
    return dict(sorted(schedule.items()))


def simulate_event_driven(
    params: ModelParams,
    impact: ImpactSpec,
    events: EventSpec,
    stoch: StochasticSpec | None = None,
) -> Trajectory:
    """Recursive run with spike arrivals replacing the AR(1) process.

    The spike active at step t (zero off-schedule) is added to the
    deterministic position and censored to [0, cap] before entering the
    hedging term; the trajectory's ``nu`` column carries the schedule.
    ``stoch`` supplies the cap parameters only (defaults when omitted).
    """
    cap_spec = stoch if stoch is not None else StochasticSpec()
    cap = exposure_cap(params.n0, cap_spec.sigma_n, cap_spec.rho, cap_spec.kappa)
    schedule = generate_event_spikes(events, params.n0)
    states = [initial_state(params, nu0=schedule.get(0, 0.0))]
    for t in range(events.horizon):
        state = states[-1]
        n_bar = censor_exposure(state.n_t + state.nu_t, cap)
        states.append(
            feedback_step(
                state,
                params,
                impact,
                exposure_override=n_bar,
                nu_next=schedule.get(t + 1, 0.0),
            )
        )
    return Trajectory(
        params=params,
        impact=impact,
        states=states,
        seed=events.seed,
        mode="event_driven",
    )
