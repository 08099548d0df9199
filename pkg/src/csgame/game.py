"""Core model: channel-selection games on parallel multiple-access channels.

K transmitters share S orthogonal channels to a single receiver. Each
transmitter concentrates its whole power budget on exactly one channel, so a
pure action is just a channel index, and its payoff is the bandwidth-weighted
spectral efficiency achieved with single-user decoding (co-channel
transmissions count as noise). The resulting finite game admits an exact
potential: the bandwidth-weighted log of each channel's total received power
plus noise. Payoffs can also be recovered from that receiver-side aggregate
alone, which is what allows learning dynamics that never observe opponent
actions (see :mod:`csgame.dynamics`).

Channels and players are 0-based indices throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_ENUM_PROFILES",
    "MAX_OPPONENT_PROFILES",
    "GameSpec",
    "check_profile",
    "utility",
    "potential",
    "expected_utility",
    "aggregate_message",
    "aggregated_utility",
    "utility_table",
    "potential_table",
]

# Guards for exhaustive enumeration; raise instead of thrashing memory.
MAX_ENUM_PROFILES = 10_000_000  # cap on S**K (full profile space)
MAX_OPPONENT_PROFILES = 1_000_000  # cap on S**(K-1) (one player's opponents)


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Immutable description of one game instance.

    ``gains[k, s]`` is the power gain from transmitter k to the receiver on
    channel s. Total bandwidth is always derived from ``bandwidths``, never
    stored. Arrays are coerced to float64 and frozen at construction.
    """

    bandwidths: np.ndarray
    noise: np.ndarray
    max_power: np.ndarray
    gains: np.ndarray

    def __post_init__(self) -> None:
        gains = np.atleast_2d(np.asarray(self.gains, dtype=float))
        bandwidths = np.asarray(self.bandwidths, dtype=float).ravel()
        noise = np.asarray(self.noise, dtype=float).ravel()
        max_power = np.asarray(self.max_power, dtype=float).ravel()
        if gains.ndim != 2:
            raise ValueError("gains must be a 2-d array of shape (K, S)")
        n_players, n_channels = gains.shape
        if bandwidths.shape != (n_channels,):
            raise ValueError(
                f"bandwidths must have length S={n_channels}, got {bandwidths.shape[0]}"
            )
        if noise.shape != (n_channels,):
            raise ValueError(f"noise must have length S={n_channels}, got {noise.shape[0]}")
        if max_power.shape != (n_players,):
            raise ValueError(
                f"max_power must have length K={n_players}, got {max_power.shape[0]}"
            )
        if not np.all(np.isfinite(bandwidths)) or np.any(bandwidths <= 0):
            raise ValueError("bandwidths must be positive and finite")
        if not np.all(np.isfinite(noise)) or np.any(noise <= 0):
            raise ValueError("noise must be positive")
        if not np.all(np.isfinite(max_power)) or np.any(max_power <= 0):
            raise ValueError("max_power must be positive and finite")
        if not np.all(np.isfinite(gains)) or np.any(gains < 0):
            raise ValueError("gains must be finite and non-negative")
        weights = bandwidths / bandwidths.sum()
        received = max_power[:, None] * gains
        for arr in (bandwidths, noise, max_power, gains, weights, received):
            arr.setflags(write=False)
        object.__setattr__(self, "bandwidths", bandwidths)
        object.__setattr__(self, "noise", noise)
        object.__setattr__(self, "max_power", max_power)
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_received", received)

    @property
    def K(self) -> int:
        return self.gains.shape[0]

    @property
    def S(self) -> int:
        return self.gains.shape[1]

    @property
    def total_bandwidth(self) -> float:
        return float(self.bandwidths.sum())

    @property
    def weights(self) -> np.ndarray:
        """Fractional bandwidth of each channel, B_s / B."""
        return self._weights

    @property
    def received_power(self) -> np.ndarray:
        """(K, S) array: power the receiver sees on s if k transmits there."""
        return self._received

    @classmethod
    def symmetric(cls, gains, p_max: float, noise_var: float = 1.0) -> "GameSpec":
        """Unit bandwidths, one noise level and one power budget for everyone."""
        gains = np.atleast_2d(np.asarray(gains, dtype=float))
        n_players, n_channels = gains.shape
        return cls(
            bandwidths=np.ones(n_channels),
            noise=np.full(n_channels, float(noise_var)),
            max_power=np.full(n_players, float(p_max)),
            gains=gains,
        )

    def to_dict(self) -> dict:
        return {
            "bandwidths": self.bandwidths.tolist(),
            "noise": self.noise.tolist(),
            "max_power": self.max_power.tolist(),
            "gains": self.gains.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameSpec":
        return cls(
            bandwidths=data["bandwidths"],
            noise=data["noise"],
            max_power=data["max_power"],
            gains=data["gains"],
        )


def check_profile(game: GameSpec, profile) -> np.ndarray:
    """Validate a pure profile and return it as an int64 array of channel indices."""
    arr = np.asarray(profile)
    if arr.dtype.kind not in "iu":
        raise ValueError("profile entries must be integer channel indices")
    arr = arr.astype(np.int64, copy=False).ravel()
    if arr.shape != (game.K,):
        raise ValueError(f"profile must list one channel per player (K={game.K})")
    if np.any(arr < 0) or np.any(arr >= game.S):
        raise ValueError(f"channel indices must lie in [0, {game.S})")
    return arr


def _check_player(game: GameSpec, player: int) -> int:
    if not 0 <= player < game.K:
        raise IndexError(f"player index {player} out of range [0, {game.K})")
    return int(player)


def utility(game: GameSpec, profile, player: int) -> float:
    """Spectral efficiency (bits/s/Hz) of one player under a pure profile.

    Only the occupied channel contributes: the payoff is that channel's
    bandwidth fraction times log2(1 + SINR), where every co-channel
    transmitter is counted as interference.
    """
    channels = check_profile(game, profile)
    player = _check_player(game, player)
    s = int(channels[player])
    received = game.received_power
    denom = float(game.noise[s])
    for j in range(game.K):
        if j != player and channels[j] == s:
            denom += received[j, s]
    # np.log2 keeps this bitwise identical to the corresponding entry of
    # utility_table(), which computes the same quantity on whole arrays.
    return float(game.weights[s] * np.log2(1.0 + received[player, s] / denom))


def aggregate_message(game: GameSpec, profile) -> np.ndarray:
    """Receiver-side per-channel aggregate: noise plus total received power.

    This is the single broadcast message the low-feedback dynamics rely on;
    it is also exactly what the exact potential is built from.
    """
    channels = check_profile(game, profile)
    gamma = game.noise.copy()
    received = game.received_power
    for k in range(game.K):
        gamma[channels[k]] += received[k, channels[k]]
    return gamma


def potential(game: GameSpec, profile) -> float:
    """Exact potential of a pure profile.

    Unilateral deviations change this scalar by exactly the deviating
    player's utility change, which is what makes best-response and
    fictitious-play dynamics well behaved here.
    """
    gamma = aggregate_message(game, profile)
    # Accumulate channel by channel in ascending order so the result is
    # bitwise identical to the corresponding entry of potential_table().
    log_gamma = np.log2(gamma)
    total = 0.0
    for s in range(game.S):
        total += float(game.weights[s] * log_gamma[s])
    return total


def aggregated_utility(game: GameSpec, player: int, own_channel: int, gamma) -> float:
    """Utility reconstructed from own parameters and the receiver aggregate.

    For the profile that actually produced ``gamma`` this equals
    :func:`utility`: the player subtracts its own received power from the
    aggregate on its channel and treats the remainder as
    interference-plus-noise. Entries of ``gamma`` for unused channels are
    irrelevant.
    """
    player = _check_player(game, player)
    if not 0 <= own_channel < game.S:
        raise ValueError(f"channel indices must lie in [0, {game.S})")
    gamma = np.asarray(gamma, dtype=float).ravel()
    if gamma.shape != (game.S,):
        raise ValueError(f"gamma must have length S={game.S}")
    own = float(game.received_power[player, own_channel])
    if own == 0.0:
        return 0.0
    denom = float(gamma[own_channel]) - own
    if denom <= 0.0:
        raise ValueError(
            "aggregate is inconsistent: own received power meets or exceeds "
            "the reported channel aggregate"
        )
    return float(game.weights[own_channel] * np.log2(1.0 + own / denom))


def expected_utility(game: GameSpec, player: int, own_channel: int, opponent_dist) -> float:
    """Exact expected utility of a channel against a joint opponent distribution.

    ``opponent_dist`` assigns probability to every pure profile of the K-1
    opponents (players other than ``player`` in ascending order, C-order
    layout, so shape (S,)*(K-1) or anything of that size). Entries must be
    non-negative and sum to 1 within 1e-9. Zero-probability profiles are
    skipped, so a point mass reproduces :func:`utility` exactly.
    """
    player = _check_player(game, player)
    if not 0 <= own_channel < game.S:
        raise ValueError(f"channel indices must lie in [0, {game.S})")
    n_profiles = game.S ** (game.K - 1)
    if n_profiles > MAX_OPPONENT_PROFILES:
        raise ValueError(
            f"S**(K-1) = {n_profiles} opponent profiles exceeds the "
            f"enumeration guard of {MAX_OPPONENT_PROFILES}"
        )
    shape = (game.S,) * (game.K - 1)
    dist = np.asarray(opponent_dist, dtype=float)
    try:
        dist = dist.reshape(shape)
    except ValueError:
        raise ValueError(
            f"opponent distribution needs S**(K-1) = {n_profiles} entries, "
            f"got {dist.size}"
        ) from None
    if np.any(dist < 0):
        raise ValueError("opponent distribution entries must be non-negative")
    if abs(float(dist.sum()) - 1.0) > 1e-9:
        raise ValueError("opponent distribution must sum to 1 within 1e-9")
    opponents = [j for j in range(game.K) if j != player]
    prof = np.empty(game.K, dtype=np.int64)
    prof[player] = own_channel
    total = 0.0
    for idx in np.ndindex(shape):
        p = float(dist[idx])
        if p == 0.0:
            continue
        for j, c in zip(opponents, idx):
            prof[j] = c
        total += p * utility(game, prof, player)
    return total


def _guard_full_enumeration(game: GameSpec) -> tuple[int, int]:
    n_profiles = game.S**game.K
    if n_profiles > MAX_ENUM_PROFILES:
        raise ValueError(
            f"S**K = {n_profiles} profiles exceeds the enumeration guard "
            f"of {MAX_ENUM_PROFILES}"
        )
    return game.K, game.S


def utility_table(game: GameSpec) -> np.ndarray:
    """Utilities of every player at every pure profile.

    Returns shape (K,) + (S,)*K; axis j+1 indexes player j's channel. Guarded
    by :data:`MAX_ENUM_PROFILES`.
    """
    n_players, n_channels = _guard_full_enumeration(game)
    received = game.received_power
    weights = game.weights
    table = np.empty((n_players,) + (n_channels,) * n_players)
    for k in range(n_players):
        opp_axes = [j for j in range(n_players) if j != k]
        reduced = (n_channels,) * (n_players - 1)
        for s in range(n_channels):
            denom = np.full(reduced, float(game.noise[s]))
            for pos, j in enumerate(opp_axes):
                contrib = np.zeros(n_channels)
                contrib[s] = received[j, s]
                denom = denom + contrib.reshape(
                    [n_channels if q == pos else 1 for q in range(n_players - 1)]
                )
            idx: list = [slice(None)] * n_players
            idx[k] = s
            table[k][tuple(idx)] = weights[s] * np.log2(1.0 + received[k, s] / denom)
    return table


def potential_table(game: GameSpec) -> np.ndarray:
    """Exact potential at every pure profile, shape (S,)*K."""
    n_players, n_channels = _guard_full_enumeration(game)
    received = game.received_power
    out = np.zeros((n_channels,) * n_players)
    for s in range(n_channels):
        agg = np.full((n_channels,) * n_players, float(game.noise[s]))
        for k in range(n_players):
            contrib = np.zeros(n_channels)
            contrib[s] = received[k, s]
            agg = agg + contrib.reshape(
                [n_channels if q == k else 1 for q in range(n_players)]
            )
        out += game.weights[s] * np.log2(agg)
    return out
