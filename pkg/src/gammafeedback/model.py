"""
Closed-form building blocks of the hedging-feedback model.

Everything here is a pure, stateless function of its arguments:

- ``relative_surprise``: how unusual a price move looks once scaled by the
  stock's market sensitivity, x = |dS/S| / (beta * sigma_m).
- ``surprise_amplification``: the hedging-intensity multiplier 1 + k*x.
- ``stability_denominator``: D = 1 - lambda * G * (1 + k*x); D -> 0 marks
  the squeeze threshold.
- ``hedging_impact``: the dealer response function (linear, hard clamp, or
  tanh saturation).
- ``static_response``: the one-period amplified move dS = shock * S / D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Stability denominators at or below this are treated as singular: the
# closed-form response is unbounded there.
EPS_SINGULAR = 1e-9


class SingularDenominator(ValueError):
    """Raised when the stability denominator is at or below EPS_SINGULAR.

    Signals the squeeze regime where the linear closed form is unbounded.
    """


@dataclass(frozen=True)
class ModelParams:
    """Structural parameters of the feedback model, validated on construction.

    ``lam`` is the linear price-impact coefficient, ``beta`` the stock's
    market sensitivity (positive only), ``sigma_m`` the market volatility
    per period, ``n0`` the initial option position, ``gamma0`` the gamma
    per contract, ``mu0`` the initiating shock rate, ``k`` the surprise
    amplification slope, ``c`` the saturation steepness, ``eta``/``xi``
    the position-decay scale and exponent, and ``s0`` the initial price.
    """

    lam: float
    beta: float
    mu0: float
    n0: float = 200.0
    gamma0: float = 1.0
    sigma_m: float = 0.03
    k: float = 2.0
    c: float = 1.0
    eta: float = 2.0
    xi: float = 5.0
    s0: float = 100.0

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0 (got {self.beta})")
        if not self.sigma_m > 0:
            raise ValueError(f"sigma_m must be > 0 (got {self.sigma_m})")
        if not self.n0 > 0:
            raise ValueError(f"n0 must be > 0 (got {self.n0})")
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be > 0 (got {self.gamma0})")
        if not self.s0 > 0:
            raise ValueError(f"s0 must be > 0 (got {self.s0})")
        if not self.c > 0:
            raise ValueError(f"c must be > 0 (got {self.c})")
        # eta = 0 disables position decay entirely; useful for frozen-exposure
        # studies, so only negative values are rejected.
        if self.eta < 0:
            raise ValueError(f"eta must be >= 0 (got {self.eta})")
        if not self.xi > 0:
            raise ValueError(f"xi must be > 0 (got {self.xi})")
        if self.k < 0:
            raise ValueError(f"k must be >= 0 (got {self.k})")

    @property
    def gamma_exposure(self) -> float:
        """Total gamma exposure G = n0 * gamma0."""
        return self.n0 * self.gamma0


@dataclass(frozen=True)
class ImpactSpec:
    """Dealer hedging-impact response: one of linear, clamp, or tanh.

    ``c`` is the tanh steepness; ``i_max`` the clamp bound.
    """

    kind: str = "tanh"
    c: float = 1.0
    i_max: float = 1.0

    KINDS = ("linear", "clamp", "tanh")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"impact kind must be one of {self.KINDS} (got {self.kind!r})")
        if self.kind == "tanh" and not self.c > 0:
            raise ValueError(f"c must be > 0 for tanh impact (got {self.c})")
        if self.kind == "clamp" and not self.i_max > 0:
            raise ValueError(f"i_max must be > 0 for clamp impact (got {self.i_max})")

    @classmethod
    def linear(cls) -> "ImpactSpec":
        return cls(kind="linear")

    @classmethod
    def clamp(cls, i_max: float) -> "ImpactSpec":
        return cls(kind="clamp", i_max=i_max)

    @classmethod
    def tanh(cls, c: float = 1.0) -> "ImpactSpec":
        return cls(kind="tanh", c=c)


def relative_surprise(delta_s: float, s: float, beta: float, sigma_m: float) -> float:
    """Normalized surprise x = |delta_s / s| / (beta * sigma_m).

    Scaling by beta * sigma_m converts an absolute move into a deviation
    relative to the stock's typical volatility regime; always >= 0.
    """
    if not s > 0:
        raise ValueError(f"s must be > 0 (got {s})")
    if not beta > 0:
        raise ValueError(f"beta must be > 0 (got {beta})")
    if not sigma_m > 0:
        raise ValueError(f"sigma_m must be > 0 (got {sigma_m})")
    return abs(delta_s / s) / (beta * sigma_m)


def surprise_amplification(x: float, k: float = 2.0) -> float:
    """Hedging-intensity multiplier 1 + k*x; equals 1 at x = 0."""
    if x < 0:
        raise ValueError(f"x must be >= 0 (got {x})")
    return 1.0 + k * x


def stability_denominator(params: ModelParams, shock_ratio: float) -> float:
    """D = 1 - lam * G * (1 + k*x) with x = shock_ratio / (beta * sigma_m).

    Decreasing in exposure and impact; increasing in beta for a fixed
    shock ratio. D <= 0 marks the squeeze regime.
    """
    if shock_ratio < 0:
        raise ValueError(f"shock_ratio must be >= 0 (got {shock_ratio})")
    x = shock_ratio / (params.beta * params.sigma_m)
    return 1.0 - params.lam * params.gamma_exposure * surprise_amplification(x, params.k)


def hedging_impact(y: float, spec: ImpactSpec) -> float:
    """Apply the dealer response function to hedging pressure y.

    linear: y unchanged; clamp: y clipped to [-i_max, i_max];
    tanh: tanh(c*y), odd and bounded in (-1, 1).
    """
    if spec.kind == "linear":
        return y
    if spec.kind == "clamp":
        return min(spec.i_max, max(-spec.i_max, y))
    return math.tanh(spec.c * y)


def static_response(
    params: ModelParams,
    shock_ratio: float,
    s: float,
    x_shock_ratio: float | None = None,
) -> float:
    """Closed-form one-period response dS = shock_ratio * s / D.

    D is evaluated at ``x_shock_ratio`` when given (the fixed exogenous
    shock convention used by the grid maps), otherwise at ``shock_ratio``
    itself.  Raises SingularDenominator when D <= EPS_SINGULAR.
    """
    d = stability_denominator(
        params, shock_ratio if x_shock_ratio is None else x_shock_ratio
    )
    if d <= EPS_SINGULAR:
        raise SingularDenominator(
            f"stability denominator {d!r} is at or below {EPS_SINGULAR}; "
            "the linear response is unbounded in this regime"
        )
    return shock_ratio * s / d
