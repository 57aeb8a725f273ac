"""
Deterministic time evolution of the hedging-feedback loop.

One step of the recursion computes, in this order: the next price change
``ds = mu_t * s_t + I(lam * N * gamma0 * (1 + k*x_t)) * ds_t``, then the
new price, then the cumulative relative movement, then the position decay
``N = n0 / (1 + eta * m^xi)``, then the shock decay ``mu = mu0 * N / n0``.
The initiating shock itself carries no feedback because the initial
observed change is zero.

``simulate_one_shot`` instead applies a single round of hedging to the
shock-induced move and then holds the price flat: the rise-then-plateau
response of a one-time delta hedge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    ImpactSpec,
    ModelParams,
    hedging_impact,
    relative_surprise,
    surprise_amplification,
)

# |price| beyond OVERFLOW_FACTOR * s0 aborts a run: only reachable with an
# unbounded (linear) impact response.
OVERFLOW_FACTOR = 1e12

MODES = ("one_shot", "recursive", "stochastic", "event_driven")


class NumericalOverflow(ArithmeticError):
    """Raised when a trajectory diverges past OVERFLOW_FACTOR * s0."""


@dataclass(frozen=True, slots=True)
class SimState:
    """One time step: price, observed change, cumulative movement,
    active position, current shock rate, and exposure deviation."""

    t: int
    s: float
    ds_obs: float
    m_cum: float
    n_t: float
    mu_t: float
    nu_t: float = 0.0


@dataclass
class Trajectory:
    """An ordered simulation path plus everything needed to reproduce it."""

    params: ModelParams
    impact: ImpactSpec
    states: list[SimState] = field(default_factory=list)
    seed: int | None = None
    mode: str = "recursive"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES} (got {self.mode!r})")

    def __len__(self) -> int:
        return len(self.states)

    def column(self, name: str) -> list[float]:
        """One state field across all steps, e.g. column('s')."""
        return [getattr(st, name) for st in self.states]

    @property
    def prices(self) -> list[float]:
        return self.column("s")


def position_decay(n0: float, m_cum: float, eta: float = 2.0, xi: float = 5.0) -> float:
    """Active position n0 / (1 + eta * m_cum^xi); decreasing in movement."""
    if m_cum < 0:
        raise ValueError(f"m_cum must be >= 0 (got {m_cum})")
    return n0 / (1.0 + eta * m_cum**xi)


def shock_decay(mu0: float, n_t: float, n0: float) -> float:
    """Shock rate proportional to remaining exposure: mu0 * n_t / n0."""
    if not n0 > 0:
        raise ValueError(f"n0 must be > 0 (got {n0})")
    if n_t < 0:
        raise ValueError(f"n_t must be >= 0 (got {n_t})")
    return mu0 * n_t / n0


def initial_state(params: ModelParams, nu0: float = 0.0) -> SimState:
    return SimState(
        t=0,
        s=params.s0,
        ds_obs=0.0,
        m_cum=0.0,
        n_t=params.n0,
        mu_t=params.mu0,
        nu_t=nu0,
    )


def feedback_step(
    state: SimState,
    params: ModelParams,
    impact: ImpactSpec,
    exposure_override: float | None = None,
    nu_next: float = 0.0,
) -> SimState:
    """Advance the recursion one step.

    ``exposure_override`` replaces the deterministic position in the
    feedback term only (stochastic and event-driven paths); decay still
    tracks the deterministic position. ``nu_next`` is recorded on the
    returned state.
    """
    x = relative_surprise(state.ds_obs, state.s, params.beta, params.sigma_m)
    n_eff = state.n_t if exposure_override is None else exposure_override
    gain = hedging_impact(
        params.lam * n_eff * params.gamma0 * surprise_amplification(x, params.k),
        impact,
    )
    ds = state.mu_t * state.s + gain * state.ds_obs
    s = state.s + ds
    if not abs(s) <= OVERFLOW_FACTOR * params.s0:
        raise NumericalOverflow(
            f"price {s!r} exceeded {OVERFLOW_FACTOR:g} * s0 at step {state.t + 1}"
        )
    m_cum = state.m_cum + abs(ds / state.s)
    n_t = position_decay(params.n0, m_cum, params.eta, params.xi)
    mu_t = shock_decay(params.mu0, n_t, params.n0)
    return SimState(
        t=state.t + 1,
        s=s,
        ds_obs=ds,
        m_cum=m_cum,
        n_t=n_t,
        mu_t=mu_t,
        nu_t=nu_next,
    )


def simulate_recursive(
    params: ModelParams, impact: ImpactSpec, horizon: int
) -> Trajectory:
    """Full recursive feedback run over ``horizon`` steps (T+1 states)."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1 (got {horizon})")
    states = [initial_state(params)]
    for _ in range(horizon):
        states.append(feedback_step(states[-1], params, impact))
    return Trajectory(params=params, impact=impact, states=states, mode="recursive")


def simulate_one_shot(
    params: ModelParams, impact: ImpactSpec, horizon: int
) -> Trajectory:
    """One-time hedging reaction: a single amplified jump, then a plateau.

    The shock applies only at the first step and the hedging feedback is
    applied once to the shock-induced move; the position never decays.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1 (got {horizon})")
    s0, n0 = params.s0, params.n0
    shock = params.mu0 * s0
    x = relative_surprise(shock, s0, params.beta, params.sigma_m)
    gain = hedging_impact(
        params.lam * n0 * params.gamma0 * surprise_amplification(x, params.k),
        impact,
    )
    ds1 = shock + gain * shock
    s1 = s0 + ds1
    m_cum = abs(ds1 / s0)
    states = [initial_state(params)]
    states.append(SimState(t=1, s=s1, ds_obs=ds1, m_cum=m_cum, n_t=n0, mu_t=0.0))
    for t in range(2, horizon + 1):
        states.append(SimState(t=t, s=s1, ds_obs=0.0, m_cum=m_cum, n_t=n0, mu_t=0.0))
    return Trajectory(params=params, impact=impact, states=states, mode="one_shot")
