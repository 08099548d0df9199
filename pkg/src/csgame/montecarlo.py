"""Seeded game sampling and the Monte-Carlo experiment driver.

Trials are fully independent: trial i draws from a generator seeded with
``SeedSequence([seed, i])``, so records do not depend on execution order and
the whole sweep is reproducible bit for bit. Classic-variant sweeps over 2x2
games route through the vectorized batch engine; everything else runs the
per-game reference engines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import FADING_LAWS, DynamicsSpec, ExperimentConfig
from .dynamics import (
    Trajectory,
    _smallest_period,
    empirical_frequencies,
    q_from_beliefs,
    run_aggregation_fp,
    run_fp,
    run_fp_batch_2x2,
)
from .equilibrium import EquilibriumReport, analyze_game
from .game import GameSpec, expected_utility, utility_table

__all__ = [
    "SCHEMA_VERSION",
    "trial_rng",
    "sample_gains",
    "snr_db_to_power",
    "generate_game",
    "MonteCarloSummary",
    "run_trial",
    "run_experiment",
]

SCHEMA_VERSION = 1

# Trailing steps examined for exact periodicity when classifying a trial.
CYCLE_WINDOW = 64
# Total-variation radius within which a frequency profile counts as "at" an
# equilibrium point.
CONVERGENCE_TV = 1e-2
# Soft cap on T * trials before the batch engine starts chunking games.
_BATCH_CELL_BUDGET = 50_000_000

OUTCOMES = ("pure", "mixed", "cycling", "undetermined")


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent per-trial generator; order-insensitive by construction."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def sample_gains(rng: np.random.Generator, n_players: int, n_channels: int,
                 fading: str = "exponential") -> np.ndarray:
    """Draw i.i.d. unit-mean power gains.

    Both accepted labels name the same law: a Rayleigh-fading amplitude has
    exponentially distributed power, so "rayleigh" is the amplitude-side name
    for the "exponential" power gains drawn here. The draw path is identical,
    keeping runs reproducible across the two spellings.
    """
    if fading not in FADING_LAWS:
        raise ValueError(f"unknown fading law {fading!r}, expected one of {FADING_LAWS}")
    return rng.exponential(1.0, size=(n_players, n_channels))


def snr_db_to_power(snr_db: float) -> float:
    """Power budget that hits the target SNR over unit noise."""
    return float(10.0 ** (snr_db / 10.0))


def generate_game(rng: np.random.Generator, players: int, channels: int,
                  snr_db: float, fading: str = "exponential") -> GameSpec:
    """Random instance with unit bandwidths and noise, budget set from SNR."""
    return GameSpec.symmetric(
        sample_gains(rng, players, channels, fading),
        p_max=snr_db_to_power(snr_db),
        noise_var=1.0,
    )


@dataclass(frozen=True)
class MonteCarloSummary:
    """Aggregate view of one sweep; histogram masses sum to ``trials``."""

    trials: int
    ne_count_histogram: dict
    region_histogram: dict
    convergence: dict
    payoffs: dict

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "trials": self.trials,
            "ne_count_histogram": {str(k): v for k, v in sorted(self.ne_count_histogram.items())},
            "region_histogram": dict(sorted(self.region_histogram.items())),
            "convergence": {k: self.convergence.get(k, 0) for k in OUTCOMES},
            "payoffs": self.payoffs,
        }


def _tv_to_point(freq: np.ndarray, point: np.ndarray) -> float:
    """Worst per-player total variation between two frequency stacks."""
    return float(np.max(0.5 * np.abs(freq - point).sum(axis=1)))


def _nearest_equilibrium(freq: np.ndarray, report: EquilibriumReport,
                         n_channels: int) -> tuple[str, float]:
    """Closest equilibrium point to an empirical frequency stack."""
    best_kind, best_tv = "none", np.inf
    eye = np.eye(n_channels)
    for profile in report.pure_ne:
        tv = _tv_to_point(freq, eye[list(profile)])
        if tv < best_tv:
            best_kind, best_tv = "pure", tv
    if report.mixed_ne is not None:
        tv = _tv_to_point(freq, report.mixed_ne)
        if tv < best_tv:
            best_kind, best_tv = "mixed", tv
    return best_kind, best_tv


def _cycle_summary(game: GameSpec, tail: np.ndarray) -> dict | None:
    """Exact-period description of the trailing profile window, if periodic."""
    if len(tail) < 2:
        return None
    period = _smallest_period(tail)
    if period is None:
        return None
    table = utility_table(game)
    cycle = [tuple(int(c) for c in row) for row in tail[:period]]
    avg = np.mean([[table[(k, *p)] for k in range(game.K)] for p in cycle], axis=0)
    return {
        "period": period,
        "profiles": [list(p) for p in cycle],
        "time_avg_utility": [float(x) for x in avg],
    }


def _classify_outcome(report: EquilibriumReport, freq: np.ndarray,
                      cycle: dict | None, n_channels: int) -> tuple[str, float]:
    kind, tv = _nearest_equilibrium(freq, report, n_channels)
    if cycle is not None and cycle["period"] == 1:
        profile = tuple(cycle["profiles"][0])
        if profile in report.pure_ne:
            return "pure", tv
        return "undetermined", tv
    if cycle is not None and cycle["period"] >= 2:
        return "cycling", tv
    if tv < CONVERGENCE_TV and kind != "none":
        return kind, tv
    return "undetermined", tv


def _mixed_mean_utility(game: GameSpec, report: EquilibriumReport) -> float | None:
    """Mean per-player expected payoff at the strictly mixed equilibrium."""
    if report.mixed_ne is None:
        return None
    vals = [
        expected_utility(game, k, 0, report.mixed_ne[1 - k])
        for k in range(2)
    ]
    return float(np.mean(vals))


def _record_from_parts(trial: int, game: GameSpec, report: EquilibriumReport,
                       dynamics: DynamicsSpec, freq: np.ndarray,
                       time_avg_utility: np.ndarray, tail: np.ndarray) -> dict:
    cycle = _cycle_summary(game, tail)
    outcome, tv = _classify_outcome(report, freq, cycle, game.S)
    return {
        "schema_version": SCHEMA_VERSION,
        "trial": trial,
        "game": game.to_dict(),
        "ne_count": len(report.pure_ne),
        "pure_ne": [list(p) for p in report.pure_ne],
        "ne_utilities": report.utilities.tolist(),
        "ne_potentials": report.potentials.tolist(),
        "mixed_ne": None if report.mixed_ne is None else report.mixed_ne.tolist(),
        "mixed_ne_mean_utility": _mixed_mean_utility(game, report),
        "regions": None if report.regions is None else sorted(report.regions),
        "dynamics": {
            "variant": dynamics.variant,
            "steps": dynamics.steps,
            "tie_break": dynamics.tie_break,
            "final_frequencies": freq.tolist(),
            "time_avg_utility": [float(x) for x in time_avg_utility],
            "cycle": cycle,
            "outcome": outcome,
            "nearest_ne_tv": tv if np.isfinite(tv) else None,
        },
    }


def simulate_trajectory(game: GameSpec, dynamics: DynamicsSpec) -> Trajectory:
    """One dynamics run as configured (reference engines)."""
    beliefs = dynamics.initial_beliefs_for(game)
    if dynamics.variant == "classic":
        return run_fp(game, beliefs, T=dynamics.steps, tie_break=dynamics.tie_break)
    return run_aggregation_fp(
        game, q_from_beliefs(game, beliefs), T=dynamics.steps, tie_break=dynamics.tie_break
    )


def run_trial(trial: int, game: GameSpec, dynamics: DynamicsSpec) -> dict:
    """Full single-trial record: equilibrium analysis plus one dynamics run."""
    report = analyze_game(game)
    traj = simulate_trajectory(game, dynamics)
    freq = empirical_frequencies(traj)
    window = min(CYCLE_WINDOW, traj.T)
    tail = traj.profiles[traj.T - window:]
    return _record_from_parts(
        trial, game, report, dynamics, freq, traj.utilities.mean(axis=0), tail
    )


def _trial_games(config: ExperimentConfig) -> list[GameSpec]:
    if config.game is not None:
        return [config.game]
    gen = config.generator
    return [
        generate_game(trial_rng(config.seed, i), gen.players, gen.channels,
                      gen.snr_db, gen.fading)
        for i in range(gen.trials)
    ]


def _batch_records(config: ExperimentConfig, games: list[GameSpec]) -> list[dict]:
    """Vectorized classic-2x2 sweep; per-trial content matches run_trial
    (time averages agree up to float summation order)."""
    dynamics = config.dynamics
    T = dynamics.steps
    window = min(CYCLE_WINDOW, T)
    records = []
    chunk = max(1, _BATCH_CELL_BUDGET // max(T, 1))
    for start in range(0, len(games), chunk):
        part = games[start:start + chunk]
        init = np.stack([dynamics.initial_beliefs_for(g).marginals for g in part])
        result = run_fp_batch_2x2(
            part, T=T, tie_break=dynamics.tie_break, init_marginals=init,
            checkpoints=(T,), record_actions=True, utility_sums=True,
        )
        freqs = result.frequencies[T]
        for i, game in enumerate(part):
            trial = start + i
            report = analyze_game(game)
            tail = result.actions[T - window:, i, :].astype(np.int64)
            records.append(_record_from_parts(
                trial, game, report, dynamics, freqs[i],
                result.utility_sums[i] / T, tail,
            ))
    return records


def _summarize(records: list[dict]) -> MonteCarloSummary:
    ne_hist: dict[int, int] = {}
    region_hist: dict[str, int] = {}
    convergence = {k: 0 for k in OUTCOMES}
    realized, best, worst, mixed_vals = [], [], [], []
    for rec in records:
        ne_hist[rec["ne_count"]] = ne_hist.get(rec["ne_count"], 0) + 1
        if rec["regions"] is not None:
            key = "+".join(rec["regions"])
            region_hist[key] = region_hist.get(key, 0) + 1
        convergence[rec["dynamics"]["outcome"]] += 1
        realized.append(float(np.mean(rec["dynamics"]["time_avg_utility"])))
        per_ne = [float(np.mean(u)) for u in rec["ne_utilities"]]
        if per_ne:
            best.append(max(per_ne))
            worst.append(min(per_ne))
        if rec["mixed_ne_mean_utility"] is not None:
            mixed_vals.append(rec["mixed_ne_mean_utility"])
    payoffs = {
        "mean_time_avg_utility": float(np.mean(realized)) if realized else None,
        "mean_best_pure_ne_utility": float(np.mean(best)) if best else None,
        "mean_worst_pure_ne_utility": float(np.mean(worst)) if worst else None,
        "mean_mixed_ne_utility": float(np.mean(mixed_vals)) if mixed_vals else None,
        "trials_with_mixed": len(mixed_vals),
    }
    return MonteCarloSummary(
        trials=len(records),
        ne_count_histogram=ne_hist,
        region_histogram=region_hist,
        convergence=convergence,
        payoffs=payoffs,
    )


def run_experiment(config: ExperimentConfig) -> tuple[MonteCarloSummary, list[dict]]:
    """Run every trial of a configured experiment and aggregate the records.

    Pure computation: writing files is the caller's business (see
    :mod:`csgame.output` and the CLI). Trials are processed in index order
    but each one depends only on (seed, index), so any execution order would
    produce the same records.
    """
    games = _trial_games(config)
    dynamics = config.dynamics
    fast = (
        dynamics.variant == "classic"
        and bool(games)
        and all(g.K == 2 and g.S == 2 for g in games)
    )
    if fast:
        records = _batch_records(config, games)
    else:
        records = [run_trial(i, game, dynamics) for i, game in enumerate(games)]
    return _summarize(records), records
