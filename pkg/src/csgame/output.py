"""Deterministic file output: trajectory CSV/JSON, reports, plot data.

Floats are rendered with ``repr`` (shortest round-trip form) and JSON keys
are sorted, so identical inputs always produce byte-identical files; no
timestamps or environment details ever enter a payload.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .dynamics import Trajectory
from .montecarlo import SCHEMA_VERSION, MonteCarloSummary

__all__ = [
    "fmt_float",
    "write_json",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_trajectory_json",
    "write_summary_json",
    "write_trial_records",
    "emit_plot_data",
]


def fmt_float(x) -> str:
    return repr(float(x))


def write_json(payload: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _state_columns(traj: Trajectory) -> tuple[str, np.ndarray | None]:
    if traj.variant == "classic":
        return "belief", traj.beliefs
    return "q", traj.q_values


def write_trajectory_csv(traj: Trajectory, path) -> Path:
    """Long-format per-step rows: t, player, channel, utility, potential,
    then the player's decision-time state (belief_1..belief_S for the
    classic variant, q_1..q_S for the aggregation variant; column i holds
    channel i-1)."""
    prefix, state = _state_columns(traj)
    n_players = traj.num_players
    n_channels = state.shape[2] if state is not None else int(traj.profiles.max()) + 1
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["t", "player", "channel", "utility", "potential"]
            + [f"{prefix}_{s + 1}" for s in range(n_channels)]
        )
        for t in range(traj.T):
            for k in range(n_players):
                row = [
                    t + 1,
                    k,
                    int(traj.profiles[t, k]),
                    fmt_float(traj.utilities[t, k]),
                    fmt_float(traj.potentials[t]),
                ]
                if state is not None:
                    row += [fmt_float(x) for x in state[t, k]]
                writer.writerow(row)
    return path


def read_trajectory_csv(path) -> Trajectory:
    """Rebuild a trajectory from its CSV form.

    The CSV carries the full per-step record but not the run's bookkeeping
    (tie-break policy, post-run state), so those fields are filled with
    defaults; use the JSON form when full fidelity matters.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    state_cols = [c for c in header if c.startswith(("belief_", "q_"))]
    variant = "classic" if state_cols and state_cols[0].startswith("belief_") else "aggregation"
    n_channels = len(state_cols)
    if not rows:
        empty = np.empty((0, 0))
        return Trajectory(
            variant=variant,
            tie_break="lowest",
            profiles=np.empty((0, 0), dtype=np.int64),
            utilities=empty,
            potentials=np.empty(0),
            beliefs=np.empty((0, 0, n_channels)) if variant == "classic" else None,
            q_values=np.empty((0, 0, n_channels)) if variant == "aggregation" else None,
            initial_state=np.empty((0, n_channels)),
            final_state=np.empty((0, n_channels)),
        )
    n_players = max(int(r[1]) for r in rows) + 1
    T = max(int(r[0]) for r in rows)
    profiles = np.empty((T, n_players), dtype=np.int64)
    utilities = np.empty((T, n_players))
    potentials = np.empty(T)
    state = np.empty((T, n_players, n_channels))
    for r in rows:
        t, k = int(r[0]) - 1, int(r[1])
        profiles[t, k] = int(r[2])
        utilities[t, k] = float(r[3])
        potentials[t] = float(r[4])
        state[t, k] = [float(x) for x in r[5:5 + n_channels]]
    return Trajectory(
        variant=variant,
        tie_break="lowest",
        profiles=profiles,
        utilities=utilities,
        potentials=potentials,
        beliefs=state if variant == "classic" else None,
        q_values=state if variant == "aggregation" else None,
        initial_state=state[0].copy(),
        final_state=state[-1].copy(),
        final_step=T,
    )


def write_trajectory_json(traj: Trajectory, path) -> Path:
    """Full-fidelity JSON form of a run."""
    prefix, state = _state_columns(traj)
    steps = []
    for t in range(traj.T):
        entry = {
            "t": t + 1,
            "profile": [int(c) for c in traj.profiles[t]],
            "utilities": [float(u) for u in traj.utilities[t]],
            "potential": float(traj.potentials[t]),
        }
        if state is not None:
            entry[prefix] = state[t].tolist()
        if traj.gammas is not None:
            entry["gamma"] = traj.gammas[t].tolist()
        steps.append(entry)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "variant": traj.variant,
        "tie_break": traj.tie_break,
        "initial_step": traj.initial_step,
        "initial_state": traj.initial_state.tolist(),
        "final_step": traj.final_step,
        "final_state": traj.final_state.tolist(),
        "steps": steps,
    }
    return write_json(payload, path)


def write_summary_json(summary: MonteCarloSummary, path) -> Path:
    return write_json(summary.to_dict(), path)


def write_trial_records(records: list[dict], directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for rec in records:
        paths.append(write_json(rec, directory / f"trial_{rec['trial']:05d}.json"))
    return paths


def _write_wide_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def emit_plot_data(obj, kind: str, path) -> Path:
    """Write plotting-ready columnar data.

    Supported kinds: ``"beliefs"`` and ``"utilities"`` for a
    :class:`Trajectory` (wide per-step series), ``"regions"`` for a list of
    trial records (gain-ratio scatter with region labels).
    """
    if kind in ("beliefs", "utilities"):
        if not isinstance(obj, Trajectory):
            raise ValueError(f"kind {kind!r} needs a Trajectory")
        if kind == "beliefs":
            prefix, state = _state_columns(obj)
            n_players = state.shape[1] if obj.T else 0
            n_channels = state.shape[2] if obj.T else 0
            header = ["t"] + [
                f"{prefix}_p{k}_c{s}" for k in range(n_players) for s in range(n_channels)
            ]
            rows = (
                [t + 1] + [fmt_float(x) for x in state[t].ravel()] for t in range(obj.T)
            )
            return _write_wide_csv(path, header, rows)
        n_players = obj.profiles.shape[1]
        header = ["t"] + [f"utility_p{k}" for k in range(n_players)] + ["potential"]
        rows = (
            [t + 1]
            + [fmt_float(u) for u in obj.utilities[t]]
            + [fmt_float(obj.potentials[t])]
            for t in range(obj.T)
        )
        return _write_wide_csv(path, header, rows)
    if kind == "regions":
        if isinstance(obj, MonteCarloSummary):
            raise ValueError("region scatter needs the per-trial records, not the summary")
        header = ["trial", "g11", "g12", "g21", "g22", "own_ratio", "cross_ratio", "regions"]
        rows = []
        for rec in obj:
            (g11, g12), (g21, g22) = rec["game"]["gains"]
            regions = rec["regions"] or []
            rows.append([
                rec["trial"],
                fmt_float(g11), fmt_float(g12), fmt_float(g21), fmt_float(g22),
                fmt_float(g11 / g12), fmt_float(g21 / g22),
                "+".join(regions),
            ])
        return _write_wide_csv(path, header, rows)
    raise ValueError(f"unsupported plot-data kind {kind!r}")
