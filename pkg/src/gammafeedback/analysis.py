"""
Stability maps and fixed-point analysis of the hedging-feedback loop.

- ``stability_grid`` / ``amplification_grid``: scalar fields D(beta, G) and
  1/D over an inclusive rectangular grid, with the surprise term evaluated
  at a fixed exogenous shock ratio.
- ``extract_contour``: marching-squares iso-lines with linear edge
  interpolation; saddle cells are disambiguated by the sign of the
  cell-center average.
- ``critical_exposure``: the analytic root G*(beta) = 1 / (lam * (1 + k*x)),
  i.e. the exposure at which the denominator crosses zero.
- ``analyze_fixed_point`` / ``linearized_feedback``: the affine one-step map
  d_{t+1} = a + f * d_t, its fixed point a / (1 - f), and the eigenvalue of
  the recursion linearized at zero price change.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import (
    EPS_SINGULAR,
    ImpactSpec,
    ModelParams,
    hedging_impact,
    surprise_amplification,
)

# Absolute tolerance on |f| - 1 when classifying fixed points.
CLASSIFY_TOL = 1e-9

# Value stored in grid cells flagged singular (keeps CSV round-trips and
# comparisons well-defined; consumers must check the flag, not the value).
SINGULAR_VALUE = 0.0


@dataclass(frozen=True)
class GridSpec:
    """Inclusive rectangular grid over (beta, G) plus the fixed scan inputs.

    Node i on the beta axis sits at beta_min + i * (beta_max - beta_min) /
    (n_beta - 1); the G axis is analogous. A degenerate axis (min == max)
    yields repeated nodes.
    """

    beta_min: float
    beta_max: float
    g_min: float
    g_max: float
    n_beta: int
    n_g: int
    shock_ratio: float
    lam: float
    sigma_m: float = 0.03
    k: float = 2.0

    def __post_init__(self) -> None:
        if not self.beta_min > 0:
            raise ValueError(f"beta_min must be > 0 (got {self.beta_min})")
        if self.g_min < 0:
            raise ValueError(f"g_min must be >= 0 (got {self.g_min})")
        if self.beta_max < self.beta_min:
            raise ValueError("beta_max must be >= beta_min")
        if self.g_max < self.g_min:
            raise ValueError("g_max must be >= g_min")
        if self.n_beta < 2 or self.n_g < 2:
            raise ValueError("n_beta and n_g must be >= 2")
        if self.shock_ratio < 0:
            raise ValueError(f"shock_ratio must be >= 0 (got {self.shock_ratio})")
        if not self.sigma_m > 0:
            raise ValueError(f"sigma_m must be > 0 (got {self.sigma_m})")
        if self.k < 0:
            raise ValueError(f"k must be >= 0 (got {self.k})")

    def betas(self) -> np.ndarray:
        return np.linspace(self.beta_min, self.beta_max, self.n_beta)

    def gs(self) -> np.ndarray:
        return np.linspace(self.g_min, self.g_max, self.n_g)

    @property
    def cell_width_g(self) -> float:
        return (self.g_max - self.g_min) / (self.n_g - 1)

    @property
    def cell_width_beta(self) -> float:
        return (self.beta_max - self.beta_min) / (self.n_beta - 1)


@dataclass
class GridScan:
    """A scalar field sampled on a GridSpec.

    ``values`` is row-major (n_beta, n_g); ``singular`` flags cells where
    the field is undefined (their stored value is SINGULAR_VALUE).
    """

    spec: GridSpec
    field_name: str
    values: np.ndarray
    singular: np.ndarray

    def __post_init__(self) -> None:
        expected = (self.spec.n_beta, self.spec.n_g)
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")
        if self.singular.shape != expected:
            raise ValueError(f"singular shape {self.singular.shape} != {expected}")
        if not np.all(np.isfinite(self.values[~self.singular])):
            raise ValueError("non-singular cells must be finite")


@dataclass
class ContourSet:
    """Iso-level polylines in (beta, G) coordinates.

    Each polyline is an (m, 2) array of [beta, G] vertices; closed loops
    repeat their first vertex at the end.
    """

    level: float
    polylines: list = field(default_factory=list)


class FixedPointClass(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    FLIP_BOUNDARY = "flip_boundary"
    BLOWUP_BOUNDARY = "blowup_boundary"


@dataclass(frozen=True)
class FixedPointReport:
    """Fixed point of d_{t+1} = a + f * d_t and its stability class.

    ``fixed_point`` is None when 1 - f is within EPS_SINGULAR of zero.
    """

    a: float
    f: float
    fixed_point: float | None
    classification: FixedPointClass


def stability_grid(spec: GridSpec) -> GridScan:
    """Evaluate D = 1 - lam*G*(1 + k*x) on the grid, x at the fixed shock."""
    betas = spec.betas()
    gs = spec.gs()
    x = spec.shock_ratio / (betas * spec.sigma_m)
    amp = 1.0 + spec.k * x
    values = 1.0 - spec.lam * amp[:, None] * gs[None, :]
    return GridScan(
        spec=spec,
        field_name="stability_denominator",
        values=values,
        singular=np.zeros(values.shape, dtype=bool),
    )


def amplification_grid(spec: GridSpec) -> GridScan:
    """Evaluate 1/D on the grid; cells with D <= EPS_SINGULAR are flagged."""
    d = stability_grid(spec).values
    singular = d <= EPS_SINGULAR
    values = np.full(d.shape, SINGULAR_VALUE)
    np.divide(1.0, d, out=values, where=~singular)
    return GridScan(
        spec=spec,
        field_name="amplification",
        values=values,
        singular=singular,
    )


# Marching squares: corner bits (c0..c3) -> segments as pairs of local edge
# ids. Corners: c0=(i,j), c1=(i,j+1), c2=(i+1,j+1), c3=(i+1,j); edges:
# 0=bottom c0-c1, 1=right c1-c2, 2=top c3-c2, 3=left c0-c3. Cases 6 and 9
# (opposite corners inside) are saddles resolved by the cell-center average.
_MS_TABLE: dict[int, list[tuple[int, int]]] = {
    0: [],
    1: [(0, 3)],
    2: [(0, 1)],
    3: [(1, 3)],
    4: [(1, 2)],
    5: [(0, 3), (1, 2)],  # placeholder; saddle handled explicitly
    6: [(0, 2)],
    7: [(2, 3)],
    8: [(2, 3)],
    9: [(0, 2)],
    10: [(0, 1), (2, 3)],  # placeholder; saddle handled explicitly
    11: [(1, 2)],
    12: [(1, 3)],
    13: [(0, 1)],
    14: [(0, 3)],
    15: [],
}
_SADDLE_CASES = (5, 10)


def _edge_key(local_edge: int, i: int, j: int) -> tuple[str, int, int]:
    """Global identity of a cell's local edge; rows run along G."""
    if local_edge == 0:
        return ("r", i, j)
    if local_edge == 1:
        return ("c", i, j + 1)
    if local_edge == 2:
        return ("r", i + 1, j)
    return ("c", i, j)


def _crossing_point(key, f, betas, gs):
    """Linear-interpolated zero of f along a node edge."""
    kind, i, j = key
    fa = f[i, j]
    if kind == "r":
        fb = f[i, j + 1]
        t = fa / (fa - fb)
        return (betas[i], gs[j] + t * (gs[j + 1] - gs[j]))
    fb = f[i + 1, j]
    t = fa / (fa - fb)
    return (betas[i] + t * (betas[i + 1] - betas[i]), gs[j])


def extract_contour(scan: GridScan, level: float) -> ContourSet:
    """Marching-squares polylines of ``scan`` at ``level``.

    Cells touching a singular or non-finite node contribute nothing.
    Returns an empty set when the level is never crossed.
    """
    f = scan.values - level
    usable = np.isfinite(scan.values) & ~scan.singular
    inside = (f > 0) & usable

    # Case index per cell; restrict to cells whose four corners are usable.
    case = (
        inside[:-1, :-1].astype(np.int8)
        + 2 * inside[:-1, 1:]
        + 4 * inside[1:, 1:]
        + 8 * inside[1:, :-1]
    )
    ok = usable[:-1, :-1] & usable[:-1, 1:] & usable[1:, 1:] & usable[1:, :-1]
    case = np.where(ok, case, 0)

    betas = scan.spec.betas()
    gs = scan.spec.gs()
    links: dict[tuple, list[tuple]] = {}

    def _link(ka, kb):
        links.setdefault(ka, []).append(kb)
        links.setdefault(kb, []).append(ka)

    for i, j in zip(*np.nonzero((case > 0) & (case < 15))):
        c = int(case[i, j])
        if c in _SADDLE_CASES:
            center = 0.25 * (f[i, j] + f[i, j + 1] + f[i + 1, j + 1] + f[i + 1, j])
            # Center inside joins the two inside corners across the cell.
            if c == 5:  # c0 and c2 inside
                segs = [(0, 1), (2, 3)] if center > 0 else [(0, 3), (1, 2)]
            else:  # c1 and c3 inside
                segs = [(0, 3), (1, 2)] if center > 0 else [(0, 1), (2, 3)]
        else:
            segs = _MS_TABLE[c]
        for ea, eb in segs:
            _link(_edge_key(ea, i, j), _edge_key(eb, i, j))

    # Chain segments into polylines: open chains first (from degree-1 edges
    # in sorted order), then remaining closed loops.
    visited: set[tuple] = set()
    polylines = []

    def _walk(start):
        chain = [start]
        visited.add(start)
        current = start
        while True:
            nxt = None
            for cand in links[current]:
                if cand not in visited:
                    nxt = cand
                    break
            if nxt is None:
                # Closed loop: step back to the start if it is a neighbor.
                if len(chain) > 2 and start in links[current]:
                    chain.append(start)
                break
            chain.append(nxt)
            visited.add(nxt)
            current = nxt
        return chain

    endpoints = sorted(k for k, nbrs in links.items() if len(nbrs) == 1)
    for key in endpoints:
        if key not in visited:
            polylines.append(_walk(key))
    for key in sorted(links):
        if key not in visited:
            polylines.append(_walk(key))

    out = ContourSet(level=level)
    for chain in polylines:
        pts = np.array([_crossing_point(k, f, betas, gs) for k in chain])
        out.polylines.append(pts)
    return out


def critical_exposure(
    lam: float,
    beta: float,
    shock_ratio: float,
    sigma_m: float = 0.03,
    k: float = 2.0,
) -> float:
    """Exposure G* = 1 / (lam * (1 + k*x)) at which the denominator is zero."""
    if not lam > 0:
        raise ValueError(f"lam must be > 0 (got {lam})")
    if not beta > 0:
        raise ValueError(f"beta must be > 0 (got {beta})")
    if not sigma_m > 0:
        raise ValueError(f"sigma_m must be > 0 (got {sigma_m})")
    x = shock_ratio / (beta * sigma_m)
    return 1.0 / (lam * surprise_amplification(x, k))


def analyze_fixed_point(a: float, f: float) -> FixedPointReport:
    """Fixed point a / (1 - f) of the affine map and its classification.

    |f| < 1 is stable, |f| > 1 unstable; f within CLASSIFY_TOL of -1 is the
    flip (period-doubling) boundary, of +1 the blow-up boundary.
    """
    if abs(f - 1.0) <= CLASSIFY_TOL:
        cls = FixedPointClass.BLOWUP_BOUNDARY
    elif abs(f + 1.0) <= CLASSIFY_TOL:
        cls = FixedPointClass.FLIP_BOUNDARY
    elif abs(f) < 1.0:
        cls = FixedPointClass.STABLE
    else:
        cls = FixedPointClass.UNSTABLE
    one_minus = 1.0 - f
    fixed_point = a / one_minus if abs(one_minus) > EPS_SINGULAR else None
    return FixedPointReport(a=a, f=f, fixed_point=fixed_point, classification=cls)


def linearized_feedback(params: ModelParams, impact: ImpactSpec) -> float:
    """Eigenvalue of the recursion at zero price change: I(lam * N0 * Gamma0).

    The surprise multiplier is 1 at the origin, so only the raw exposure
    product enters.
    """
    return hedging_impact(params.lam * params.n0 * params.gamma0, impact)
