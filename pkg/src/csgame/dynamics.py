"""Learning dynamics: classic fictitious play and its aggregate-feedback twin.

Both engines move all players simultaneously each round and are fully
deterministic given their inputs.

* :func:`run_fp` is the full-observation engine: every player tracks one
  empirical frequency vector per opponent (initial beliefs act as a single
  pseudo-observation) and best-responds to the product of those marginals.
* :func:`run_aggregation_fp` never reveals actions. After each round the
  receiver broadcasts the per-channel aggregate (noise plus total received
  power); each player strips its own contribution and folds the value of
  every channel it could have used into a running per-channel average, then
  plays argmax of the averages. With two players the two engines generate
  identical action sequences from matched initial state
  (:func:`q_from_beliefs`); with more players the aggregate no longer pins
  down the opponent profile and the trajectories may diverge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import (
    GameSpec,
    MAX_OPPONENT_PROFILES,
    potential,
    potential_table,
    utility_table,
)
from .equilibrium import require_symmetric_2x2

__all__ = [
    "TIE_BREAKS",
    "BeliefState",
    "QState",
    "Trajectory",
    "CycleReport",
    "belief_update",
    "fp_best_response",
    "run_fp",
    "run_aggregation_fp",
    "q_from_beliefs",
    "empirical_frequencies",
    "detect_cycle",
    "cycle_persistence_2x2",
    "BatchFPResult",
    "run_fp_batch_2x2",
]

TIE_BREAKS = ("lowest", "highest")


def _argmax_tie(values: np.ndarray, tie_break: str) -> int:
    if tie_break == "lowest":
        return int(np.argmax(values))
    if tie_break == "highest":
        values = np.asarray(values)
        return int(values.size - 1 - np.argmax(values[::-1]))
    raise ValueError(f"unknown tie_break {tie_break!r}, expected one of {TIE_BREAKS}")


@dataclass(frozen=True)
class BeliefState:
    """Per-player empirical frequency vectors with their observation weight.

    ``marginals[k]`` is the frequency vector over player k's own channels as
    everyone else observes it (all observers see the same actions, so one
    vector per player suffices). ``step`` is the total weight carried by the
    vectors: the initial beliefs count as one pseudo-observation, so after t
    observed rounds from a fresh start, step == 1 + t and each marginal
    equals (prior + counts) / (1 + t).
    """

    step: int
    marginals: np.ndarray

    def __post_init__(self) -> None:
        marginals = np.atleast_2d(np.asarray(self.marginals, dtype=float))
        if int(self.step) < 1:
            raise ValueError("belief step must be >= 1 (priors carry weight 1)")
        if np.any(marginals < 0):
            raise ValueError("belief entries must be non-negative")
        sums = marginals.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-12):
            raise ValueError("each belief marginal must sum to 1 within 1e-12")
        marginals.setflags(write=False)
        object.__setattr__(self, "marginals", marginals)
        object.__setattr__(self, "step", int(self.step))

    @classmethod
    def uniform(cls, n_players: int, n_channels: int) -> "BeliefState":
        return cls(step=1, marginals=np.full((n_players, n_channels), 1.0 / n_channels))

    @classmethod
    def from_xi(cls, xi) -> "BeliefState":
        """Two-channel beliefs (xi/(1+xi), 1/(1+xi)) per player, one xi each.

        With 0 < xi < 1 every player initially thinks its opponents lean
        toward channel 1, which is what sets off the coordination cycle in
        fully symmetric games.
        """
        xi = np.asarray(xi, dtype=float).ravel()
        if np.any(xi <= 0) or np.any(xi >= 1):
            raise ValueError("xi entries must lie strictly between 0 and 1")
        marginals = np.stack([xi / (1.0 + xi), 1.0 / (1.0 + xi)], axis=1)
        return cls(step=1, marginals=marginals)

    @classmethod
    def point_mass(cls, channels, n_channels: int) -> "BeliefState":
        channels = np.asarray(channels, dtype=np.int64).ravel()
        marginals = np.zeros((channels.size, n_channels))
        marginals[np.arange(channels.size), channels] = 1.0
        return cls(step=1, marginals=marginals)


@dataclass(frozen=True)
class QState:
    """Per-player running channel scores for the aggregate-feedback engine.

    ``step`` counts the samples already folded into ``q`` (0 for a cold
    start, so the first update is a plain first-sample average).
    """

    step: int
    q: np.ndarray

    def __post_init__(self) -> None:
        q = np.atleast_2d(np.asarray(self.q, dtype=float))
        if int(self.step) < 0:
            raise ValueError("q step must be >= 0")
        if not np.all(np.isfinite(q)) or np.any(q < 0):
            raise ValueError("q entries must be finite and non-negative")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "step", int(self.step))

    @classmethod
    def zeros(cls, n_players: int, n_channels: int) -> "QState":
        return cls(step=0, q=np.zeros((n_players, n_channels)))


@dataclass
class Trajectory:
    """One simulated run. Arrays are indexed by step 0..T-1 (step t of the
    run is row t-1); ``beliefs`` / ``q_values`` hold the decision-time state
    each round, i.e. what the actions of that row were computed from.
    """

    variant: str
    tie_break: str
    profiles: np.ndarray  # (T, K) int
    utilities: np.ndarray  # (T, K)
    potentials: np.ndarray  # (T,)
    beliefs: np.ndarray | None = None  # (T, K, S), classic variant
    q_values: np.ndarray | None = None  # (T, K, S), aggregation variant
    gammas: np.ndarray | None = None  # (T, S), aggregation variant
    initial_step: int = 1
    initial_state: np.ndarray = field(default=None)  # type: ignore[assignment]
    final_step: int = 1
    final_state: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        T = len(self.profiles)
        for name in ("utilities", "potentials", "beliefs", "q_values", "gammas"):
            arr = getattr(self, name)
            if arr is not None and len(arr) != T:
                raise ValueError(f"trajectory field {name} has length {len(arr)} != {T}")

    @property
    def T(self) -> int:
        return len(self.profiles)

    @property
    def num_players(self) -> int:
        return self.profiles.shape[1]

    @property
    def beliefs_or_q(self) -> np.ndarray:
        state = self.beliefs if self.variant == "classic" else self.q_values
        if state is None:
            raise ValueError("trajectory carries no per-step state snapshots")
        return state


def belief_update(frequencies, observed_channel: int, t: int) -> np.ndarray:
    """Fold one observation into a frequency vector of weight t.

    Returns f + (1/(t+1)) * (indicator(observed) - f): the vector that held
    after t observations (prior included) now holds after t+1. The input must
    already be a probability vector; the output then stays one.
    """
    f = np.asarray(frequencies, dtype=float).ravel()
    if int(t) < 1:
        raise ValueError("observation count t must be >= 1")
    if not 0 <= observed_channel < f.size:
        raise ValueError(f"observed channel {observed_channel} out of range [0, {f.size})")
    if np.any(f < 0) or abs(float(f.sum()) - 1.0) > 1e-9:
        raise ValueError("frequencies must form a probability vector (sum 1 within 1e-9)")
    indicator = np.zeros(f.size)
    indicator[observed_channel] = 1.0
    return f + (1.0 / (int(t) + 1)) * (indicator - f)


def _expected_by_channel(table_k: np.ndarray, marginals: np.ndarray, player: int) -> np.ndarray:
    """Contract one player's utility tensor with all opponent marginals.

    Returns the S-vector of expected utilities per own channel under the
    product of the opponents' frequency vectors.
    """
    res = np.moveaxis(table_k, player, 0)
    for j in reversed([j for j in range(marginals.shape[0]) if j != player]):
        res = np.einsum("...s,s->...", res, marginals[j])
    return res


def fp_best_response(
    game: GameSpec, player: int, beliefs: BeliefState, tie_break: str = "lowest"
) -> int:
    """Channel maximizing expected utility under product-of-marginals beliefs."""
    if beliefs.marginals.shape != (game.K, game.S):
        raise ValueError(
            f"beliefs have shape {beliefs.marginals.shape}, game needs {(game.K, game.S)}"
        )
    if game.S ** (game.K - 1) > MAX_OPPONENT_PROFILES:
        raise ValueError(
            f"S**(K-1) = {game.S ** (game.K - 1)} opponent profiles exceeds the "
            f"enumeration guard of {MAX_OPPONENT_PROFILES}"
        )
    table = utility_table(game)
    expected = _expected_by_channel(table[player], beliefs.marginals, player)
    return _argmax_tie(expected, tie_break)


def run_fp(
    game: GameSpec,
    init_beliefs: BeliefState | None = None,
    T: int = 10_000,
    tie_break: str = "lowest",
) -> Trajectory:
    """Simultaneous-move fictitious play under full action observation.

    Each round every player best-responds to the product of the current
    frequency vectors, all actions are revealed at once, and every vector
    absorbs the new observation with weight 1/(step+1).
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"unknown tie_break {tie_break!r}, expected one of {TIE_BREAKS}")
    beliefs = init_beliefs if init_beliefs is not None else BeliefState.uniform(game.K, game.S)
    if beliefs.marginals.shape != (game.K, game.S):
        raise ValueError(
            f"beliefs have shape {beliefs.marginals.shape}, game needs {(game.K, game.S)}"
        )
    table = utility_table(game)
    phi = potential_table(game)
    n_players, n_channels = game.K, game.S
    f = beliefs.marginals.copy()
    step = beliefs.step
    profiles = np.empty((T, n_players), dtype=np.int64)
    utilities = np.empty((T, n_players))
    potentials = np.empty(T)
    snapshots = np.empty((T, n_players, n_channels))
    eye = np.eye(n_channels)
    for t in range(T):
        snapshots[t] = f
        actions = [
            _argmax_tie(_expected_by_channel(table[k], f, k), tie_break)
            for k in range(n_players)
        ]
        profiles[t] = actions
        idx = tuple(actions)
        utilities[t] = table[(slice(None), *idx)]
        potentials[t] = phi[idx]
        f = f + (1.0 / (step + 1)) * (eye[actions] - f)
        step += 1
    return Trajectory(
        variant="classic",
        tie_break=tie_break,
        profiles=profiles,
        utilities=utilities,
        potentials=potentials,
        beliefs=snapshots,
        initial_step=beliefs.step,
        initial_state=beliefs.marginals.copy(),
        final_step=step,
        final_state=f,
    )


def q_from_beliefs(game: GameSpec, beliefs: BeliefState) -> QState:
    """Channel scores matching classic-play expectations under ``beliefs``.

    Use this to start :func:`run_aggregation_fp` in lockstep with
    :func:`run_fp` from the same initial state.
    """
    table = utility_table(game)
    q = np.stack(
        [_expected_by_channel(table[k], beliefs.marginals, k) for k in range(game.K)]
    )
    return QState(step=beliefs.step, q=q)


def run_aggregation_fp(
    game: GameSpec,
    init_q: QState | None = None,
    T: int = 10_000,
    tie_break: str = "lowest",
) -> Trajectory:
    """Fictitious play driven only by the receiver's per-channel aggregate.

    Players never observe opponent actions. Each round they play argmax of
    their running channel scores; the receiver then broadcasts gamma (noise
    plus total received power per channel); each player removes its own
    actual contribution and scores every channel it could have used against
    the remaining interference, averaging that into its score vector with
    weight 1/(step+1).
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"unknown tie_break {tie_break!r}, expected one of {TIE_BREAKS}")
    state = init_q if init_q is not None else QState.zeros(game.K, game.S)
    if state.q.shape != (game.K, game.S):
        raise ValueError(f"q has shape {state.q.shape}, game needs {(game.K, game.S)}")
    n_players, n_channels = game.K, game.S
    received = game.received_power
    weights = game.weights
    q = state.q.copy()
    step = state.step
    rows = np.arange(n_players)
    profiles = np.empty((T, n_players), dtype=np.int64)
    utilities = np.empty((T, n_players))
    potentials = np.empty(T)
    snapshots = np.empty((T, n_players, n_channels))
    gammas = np.empty((T, n_channels))
    for t in range(T):
        snapshots[t] = q
        actions = [_argmax_tie(q[k], tie_break) for k in range(n_players)]
        profiles[t] = actions
        gamma = game.noise.copy()
        for k in range(n_players):
            gamma[actions[k]] += received[k, actions[k]]
        gammas[t] = gamma
        # Strip own actual contribution; what is left of gamma on channel s is
        # exactly the interference-plus-noise the player would face there.
        own = np.zeros((n_players, n_channels))
        own[rows, actions] = received[rows, actions]
        remainder = gamma[None, :] - own
        if np.any(remainder <= 0):
            raise ValueError("aggregate inconsistent with own received power")
        values = weights[None, :] * np.log2(1.0 + received / remainder)
        utilities[t] = values[rows, actions]
        potentials[t] = float(np.dot(weights, np.log2(gamma)))
        q = q + (1.0 / (step + 1)) * (values - q)
        step += 1
    return Trajectory(
        variant="aggregation",
        tie_break=tie_break,
        profiles=profiles,
        utilities=utilities,
        potentials=potentials,
        q_values=snapshots,
        gammas=gammas,
        initial_step=state.step,
        initial_state=state.q.copy(),
        final_step=step,
        final_state=q,
    )


def empirical_frequencies(traj: Trajectory) -> np.ndarray:
    """Fraction of rounds each player spent on each channel, shape (K, S)."""
    if traj.T == 0:
        raise ValueError("cannot compute frequencies of an empty trajectory")
    n_players = traj.num_players
    n_channels = int(traj.profiles.max()) + 1
    if traj.beliefs is not None or traj.q_values is not None:
        n_channels = traj.beliefs_or_q.shape[2]
    freq = np.zeros((n_players, n_channels))
    for k in range(n_players):
        freq[k] = np.bincount(traj.profiles[:, k], minlength=n_channels) / traj.T
    return freq


@dataclass(frozen=True)
class CycleReport:
    """Exact cycle found in the trailing window of a trajectory.

    ``onset`` is the 1-based step from which the whole remaining run is
    periodic; ``time_avg_utility`` averages each player's payoff over one
    period. Period 1 means the run has settled on a fixed profile.
    """

    period: int
    cycle_profiles: tuple[tuple[int, ...], ...]
    onset: int
    time_avg_utility: np.ndarray


def _smallest_period(tail: np.ndarray) -> int | None:
    """Smallest p <= len(tail)//2 with tail exactly p-periodic, else None."""
    window = len(tail)
    for p in range(1, window // 2 + 1):
        if np.array_equal(tail[p:], tail[:-p]):
            return p
    return None


def detect_cycle(traj: Trajectory, window: int) -> CycleReport | None:
    """Exact-period detection over the trailing ``window`` steps of a run."""
    if not 1 <= window <= traj.T:
        raise ValueError(f"window must lie in [1, {traj.T}]")
    profiles = traj.profiles
    T = traj.T
    tail = profiles[T - window:]
    period = _smallest_period(tail)
    if period is None:
        return None
    start = T - window
    while start > 0 and np.array_equal(profiles[start - 1], profiles[start - 1 + period]):
        start -= 1
    cycle_profiles = tuple(
        tuple(int(c) for c in profiles[i]) for i in range(start, start + period)
    )
    avg = traj.utilities[T - period:].mean(axis=0)
    return CycleReport(
        period=period, cycle_profiles=cycle_profiles, onset=start + 1, time_avg_utility=avg
    )


def cycle_persistence_2x2(game: GameSpec, xi, n: int) -> bool:
    """Whether the two-profile coordination cycle survives through round n.

    ``xi`` holds each player's initial-belief parameter (marginals
    (xi/(1+xi), 1/(1+xi))). The cycle persists while the ratio of the two
    potential drops from the shared profiles stays inside per-player bounds
    that tighten toward 1 as n grows; a ratio of exactly 1 (fully symmetric
    games) keeps the cycle alive forever. Raises when the denominator
    potential difference is zero.
    """
    require_symmetric_2x2(game)
    xi = np.asarray(xi, dtype=float).ravel()
    if xi.shape != (2,):
        raise ValueError("xi must hold one value per player (length 2)")
    if np.any(xi <= 0) or np.any(xi >= 1):
        raise ValueError("xi entries must lie strictly between 0 and 1")
    if int(n) < 1:
        raise ValueError("n must be >= 1")
    n = int(n)
    numerator = potential(game, (1, 0)) - potential(game, (1, 1))
    denominator = potential(game, (0, 1)) - potential(game, (0, 0))
    if denominator == 0.0:
        raise ValueError("degenerate potential differences: denominator is zero")
    ratio = numerator / denominator
    if ratio == 1.0:
        return True
    for x in xi:
        base = n * (x + 1.0)
        low = (base - 1.0) / (base - x)
        high = (base + x) / (base - x)
        if not low <= ratio <= high:
            return False
    return True


@dataclass
class BatchFPResult:
    """Vectorized classic-play results for a batch of 2x2 games.

    ``frequencies[t]`` holds the (G, K, S) empirical action frequencies after
    checkpoint step t. ``actions`` is only present when recording was
    requested (shape (T, G, K)).
    """

    frequencies: dict[int, np.ndarray]
    final_marginals: np.ndarray
    final_step: int
    actions: np.ndarray | None = None
    utility_sums: np.ndarray | None = None  # (G, K) summed payoffs over the run


def run_fp_batch_2x2(
    games: list[GameSpec],
    T: int,
    tie_break: str = "lowest",
    init_marginals: np.ndarray | None = None,
    init_step: int = 1,
    checkpoints: tuple[int, ...] = (),
    record_actions: bool = False,
    utility_sums: bool = False,
) -> BatchFPResult:
    """Run classic fictitious play on many 2x2 games in lockstep.

    Per-game arithmetic matches :func:`run_fp` exactly (same contraction and
    update expressions), which the test suite asserts; this exists so that
    large Monte-Carlo sweeps do not pay the per-step Python cost game by
    game. ``init_marginals`` may be one (2, 2) state shared by all games or a
    (G, 2, 2) stack.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"unknown tie_break {tie_break!r}, expected one of {TIE_BREAKS}")
    n_games = len(games)
    if n_games == 0:
        raise ValueError("need at least one game")
    for g in games:
        if g.K != 2 or g.S != 2:
            raise ValueError("the batch engine only handles 2 players x 2 channels")
    tables = np.stack([utility_table(g) for g in games])  # (G, 2, 2, 2)
    table0 = np.ascontiguousarray(tables[:, 0])  # own axis first already
    table1 = np.ascontiguousarray(np.swapaxes(tables[:, 1], 1, 2))
    if init_marginals is None:
        f = np.full((n_games, 2, 2), 0.5)
    else:
        init_marginals = np.asarray(init_marginals, dtype=float)
        f = np.broadcast_to(init_marginals, (n_games, 2, 2)).copy()
    step = int(init_step)
    counts = np.zeros((n_games, 2, 2), dtype=np.int64)
    rows = np.arange(n_games)
    checkpoint_set = set(int(c) for c in checkpoints)
    frequencies: dict[int, np.ndarray] = {}
    actions_hist = np.empty((T, n_games, 2), dtype=np.int8) if record_actions else None
    usums = np.zeros((n_games, 2)) if utility_sums else None
    for t in range(T):
        e0 = np.einsum("gsc,gc->gs", table0, f[:, 1])
        e1 = np.einsum("gsc,gc->gs", table1, f[:, 0])
        if tie_break == "lowest":
            a0 = np.argmax(e0, axis=1)
            a1 = np.argmax(e1, axis=1)
        else:
            a0 = 1 - np.argmax(e0[:, ::-1], axis=1)
            a1 = 1 - np.argmax(e1[:, ::-1], axis=1)
        if actions_hist is not None:
            actions_hist[t, :, 0] = a0
            actions_hist[t, :, 1] = a1
        if usums is not None:
            usums[:, 0] += tables[rows, 0, a0, a1]
            usums[:, 1] += tables[rows, 1, a0, a1]
        counts[rows, 0, a0] += 1
        counts[rows, 1, a1] += 1
        onehot = np.zeros((n_games, 2, 2))
        onehot[rows, 0, a0] = 1.0
        onehot[rows, 1, a1] = 1.0
        f = f + (1.0 / (step + 1)) * (onehot - f)
        step += 1
        if (t + 1) in checkpoint_set:
            frequencies[t + 1] = counts / float(t + 1)
    return BatchFPResult(
        frequencies=frequencies,
        final_marginals=f,
        final_step=step,
        actions=actions_hist,
        utility_sums=usums,
    )
