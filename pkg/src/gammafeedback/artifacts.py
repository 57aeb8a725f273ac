"""
CSV artifact schemas, content digests, and the run manifest.

All numbers serialize with their shortest round-trip representation, so a
written file parses back to bit-identical doubles. Schemas:

- grid:       ``beta,G,value,singular`` row-major over (beta, G) nodes
- contour:    ``polyline_id,beta,G``
- trajectory: ``t,S,dS,m_cum,N,mu,nu``
- curve:      ``beta,g_star`` (critical-exposure scan)

The manifest is a JSON document recording the tool version, subcommand,
resolved configuration text, seeds, wall-clock duration, and a SHA-256
digest per output file; re-running the resolved config reproduces the
digests byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import ContourSet, GridScan
from .dynamics import SimState, Trajectory


def _fmt(value: float) -> str:
    return repr(float(value))


def grid_csv(scan: GridScan) -> str:
    betas = scan.spec.betas()
    gs = scan.spec.gs()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["beta", "G", "value", "singular"])
    for i in range(scan.spec.n_beta):
        for j in range(scan.spec.n_g):
            writer.writerow(
                [
                    _fmt(betas[i]),
                    _fmt(gs[j]),
                    _fmt(scan.values[i, j]),
                    int(scan.singular[i, j]),
                ]
            )
    return buf.getvalue()


def read_grid_csv(text: str) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Parse a grid CSV back into (beta, G, value, singular) column arrays."""
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != ["beta", "G", "value", "singular"]:
        raise ValueError(f"unexpected grid CSV header: {rows[0]}")
    data = np.array([[float(c) for c in row] for row in rows[1:]])
    return data[:, 0], data[:, 1], data[:, 2], data[:, 3].astype(bool)


def contour_csv(contours: ContourSet) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["polyline_id", "beta", "G"])
    for pid, line in enumerate(contours.polylines):
        for beta, g in line:
            writer.writerow([pid, _fmt(beta), _fmt(g)])
    return buf.getvalue()


def read_contour_csv(text: str) -> list[np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != ["polyline_id", "beta", "G"]:
        raise ValueError(f"unexpected contour CSV header: {rows[0]}")
    lines: dict[int, list] = {}
    for pid, beta, g in rows[1:]:
        lines.setdefault(int(pid), []).append((float(beta), float(g)))
    return [np.array(lines[pid]) for pid in sorted(lines)]


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "S", "dS", "m_cum", "N", "mu", "nu"])
    for st in traj.states:
        writer.writerow(
            [
                st.t,
                _fmt(st.s),
                _fmt(st.ds_obs),
                _fmt(st.m_cum),
                _fmt(st.n_t),
                _fmt(st.mu_t),
                _fmt(st.nu_t),
            ]
        )
    return buf.getvalue()


def read_trajectory_csv(text: str) -> list[SimState]:
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != ["t", "S", "dS", "m_cum", "N", "mu", "nu"]:
        raise ValueError(f"unexpected trajectory CSV header: {rows[0]}")
    return [
        SimState(
            t=int(r[0]),
            s=float(r[1]),
            ds_obs=float(r[2]),
            m_cum=float(r[3]),
            n_t=float(r[4]),
            mu_t=float(r[5]),
            nu_t=float(r[6]),
        )
        for r in rows[1:]
    ]


def curve_csv(betas, values, value_name: str = "g_star") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["beta", value_name])
    for beta, value in zip(betas, values):
        writer.writerow([_fmt(beta), _fmt(value)])
    return buf.getvalue()


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


# Identifies the seeded-generator algorithm stack for reproducibility audits.
PRNG_ID = "splitmix64-seeded xoshiro256** + box-muller"


@dataclass
class RunManifest:
    """Reproducibility record written alongside every run's outputs."""

    tool: str
    version: str
    subcommand: str
    config_text: str
    seeds: dict[str, int] = field(default_factory=dict)
    prng: str = PRNG_ID
    duration_seconds: float = 0.0
    outputs: list[dict[str, str]] = field(default_factory=list)

    def add_output(self, path: Path, content: bytes | str) -> None:
        self.outputs.append({"path": path.name, "sha256": sha256_hex(content)})

    def to_json(self) -> str:
        return json.dumps(
            {
                "tool": self.tool,
                "version": self.version,
                "subcommand": self.subcommand,
                "seeds": self.seeds,
                "prng": self.prng,
                "duration_seconds": self.duration_seconds,
                "outputs": self.outputs,
                "config": self.config_text,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        raw = json.loads(text)
        return cls(
            tool=raw["tool"],
            version=raw["version"],
            subcommand=raw["subcommand"],
            config_text=raw["config"],
            seeds={k: int(v) for k, v in raw["seeds"].items()},
            prng=raw["prng"],
            duration_seconds=raw["duration_seconds"],
            outputs=raw["outputs"],
        )
