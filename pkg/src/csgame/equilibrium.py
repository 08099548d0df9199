"""Equilibrium analysis: exhaustive pure search and closed-form 2x2 regions.

The exhaustive search works for any (K, S) within the enumeration guard. The
closed-form pieces target the two-player, two-channel setting with a common
power budget, common noise level and equal bandwidths; there the gain vector
alone decides which pure profiles are equilibria, and when both orthogonal
profiles qualify a strictly mixed equilibrium exists with probabilities given
by potential differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import (
    GameSpec,
    potential,
    utility,
    utility_table,
)

__all__ = [
    "REGION_PROFILES",
    "enumerate_pure_ne",
    "require_symmetric_2x2",
    "classify_region_2x2",
    "region_ne_profiles",
    "boundary_margin_2x2",
    "mixed_ne_2x2",
    "EquilibriumReport",
    "analyze_game",
]

# Pure profile certified by membership in each region (player 0, player 1).
REGION_PROFILES = {
    "H1": (0, 1),
    "H2": (0, 0),
    "H3": (1, 1),
    "H4": (1, 0),
}


def enumerate_pure_ne(game: GameSpec) -> list[tuple[int, ...]]:
    """All pure profiles where no unilateral channel switch strictly helps.

    Ties count: a profile stays in the set when the best deviation merely
    matches the current payoff. Profiles are returned in lexicographic order.
    """
    table = utility_table(game)
    mask = np.ones((game.S,) * game.K, dtype=bool)
    for k in range(game.K):
        best = table[k].max(axis=k, keepdims=True)
        mask &= table[k] >= best
    return [tuple(int(c) for c in row) for row in np.argwhere(mask)]


def require_symmetric_2x2(game: GameSpec) -> float:
    """Check the common-budget 2x2 setting; returns the common SNR.

    Needs K = S = 2, equal bandwidths, one noise level, one power budget and
    strictly positive gains. Raises ValueError otherwise.
    """
    if game.K != 2 or game.S != 2:
        raise ValueError("this analysis needs exactly 2 players and 2 channels")
    if game.bandwidths[0] != game.bandwidths[1]:
        raise ValueError("this analysis needs equal channel bandwidths")
    if game.noise[0] != game.noise[1]:
        raise ValueError("this analysis needs a common noise level")
    if game.max_power[0] != game.max_power[1]:
        raise ValueError("this analysis needs a common power budget")
    if np.any(game.gains <= 0):
        raise ValueError("this analysis needs strictly positive gains")
    return float(game.max_power[0] / game.noise[0])


def _region_comparisons(game: GameSpec) -> tuple[float, float, float, float, float, float]:
    snr = require_symmetric_2x2(game)
    (g11, g12), (g21, g22) = game.gains
    own_ratio = g11 / g12  # player 0's gain ratio, channel 0 over channel 1
    cross_ratio = g21 / g22  # player 1's gain ratio, channel 0 over channel 1
    # The four thresholds the regions are built from.
    low_own = 1.0 / (1.0 + snr * g22)
    high_own = 1.0 + snr * g21
    low_cross = 1.0 / (1.0 + snr * g12)
    high_cross = 1.0 + snr * g11
    return own_ratio, cross_ratio, low_own, high_own, low_cross, high_cross


def classify_region_2x2(game: GameSpec) -> frozenset[str]:
    """Region memberships of the gain vector (weak inequalities, may overlap).

    Each region certifies one pure equilibrium, see :data:`REGION_PROFILES`:

    * H1: player 0 prefers channel 0 when alone there and player 1 tolerates
      channel 1 -> (0, 1) stable.
    * H2: both prefer channel 0 even when shared -> (0, 0) stable.
    * H3: both prefer channel 1 even when shared -> (1, 1) stable.
    * H4: mirror of H1 -> (1, 0) stable. Its first bound compares player 0's
      gain ratio against 1 + SNR * g21: player 0 stays on channel 1 exactly
      when its channel-0 advantage does not beat the interference player 1
      creates there.

    Every strictly positive gain vector belongs to at least one region.
    """
    own_ratio, cross_ratio, low_own, high_own, low_cross, high_cross = _region_comparisons(game)
    labels = set()
    if own_ratio >= low_own and cross_ratio <= high_cross:
        labels.add("H1")
    if own_ratio >= high_own and cross_ratio >= high_cross:
        labels.add("H2")
    if own_ratio <= low_own and cross_ratio <= low_cross:
        labels.add("H3")
    if own_ratio <= high_own and cross_ratio >= low_cross:
        labels.add("H4")
    return frozenset(labels)


def region_ne_profiles(labels) -> list[tuple[int, int]]:
    """Pure equilibria implied by region memberships, lexicographic order."""
    return sorted(REGION_PROFILES[h] for h in labels)


def boundary_margin_2x2(game: GameSpec) -> float:
    """Smallest absolute slack among the four region-defining comparisons.

    Useful for rejection-sampling games away from region boundaries, where
    weak-inequality membership and payoff comparisons become tie-sensitive.
    """
    own_ratio, cross_ratio, low_own, high_own, low_cross, high_cross = _region_comparisons(game)
    return min(
        abs(own_ratio - low_own),
        abs(own_ratio - high_own),
        abs(cross_ratio - low_cross),
        abs(cross_ratio - high_cross),
    )


def mixed_ne_2x2(game: GameSpec) -> np.ndarray:
    """The strictly mixed equilibrium of a 2x2 game with two pure equilibria.

    Requires membership in both H1 and H4 (both orthogonal profiles stable).
    Row k is player k's distribution over channels; each entry is a ratio of
    potential differences, so in a fully symmetric game both rows are exactly
    (0.5, 0.5). Raises when only one region applies, when the potential
    differences degenerate, or when a boundary case fails strict interiority.
    """
    labels = classify_region_2x2(game)
    if not {"H1", "H4"} <= labels:
        raise ValueError(
            "a strictly mixed equilibrium needs both orthogonal profiles "
            f"to be stable (regions found: {sorted(labels)})"
        )
    phi11 = potential(game, (0, 0))
    phi12 = potential(game, (0, 1))
    phi21 = potential(game, (1, 0))
    phi22 = potential(game, (1, 1))
    num00 = phi21 - phi22  # player 0's weight on channel 0
    num01 = phi12 - phi11
    num10 = phi12 - phi22  # player 1's weight on channel 0
    num11 = phi21 - phi11
    denom = num00 + num01
    if abs(denom) <= 1e-12:
        raise ValueError("degenerate potential differences, no unique mixed point")
    mixed = np.array([[num00 / denom, num01 / denom], [num10 / denom, num11 / denom]])
    if np.any(mixed <= 0.0) or np.any(mixed >= 1.0):
        raise ValueError("boundary case: the mixed point is not strictly interior")
    return mixed


@dataclass(frozen=True)
class EquilibriumReport:
    """Everything the pure/mixed analysis of one game produced.

    ``utilities[i]`` and ``potentials[i]`` correspond to ``pure_ne[i]``.
    ``mixed_ne`` and ``regions`` are present only for the common-budget 2x2
    setting (and the former only when strictly mixed play is an equilibrium).
    """

    pure_ne: tuple[tuple[int, ...], ...]
    utilities: np.ndarray
    potentials: np.ndarray
    mixed_ne: np.ndarray | None
    regions: frozenset[str] | None

    def to_dict(self) -> dict:
        return {
            "pure_ne": [list(p) for p in self.pure_ne],
            "utilities": self.utilities.tolist(),
            "potentials": self.potentials.tolist(),
            "mixed_ne": None if self.mixed_ne is None else self.mixed_ne.tolist(),
            "regions": None if self.regions is None else sorted(self.regions),
        }


def _is_symmetric_2x2(game: GameSpec) -> bool:
    try:
        require_symmetric_2x2(game)
    except ValueError:
        return False
    return True


def analyze_game(game: GameSpec) -> EquilibriumReport:
    """Run the full equilibrium analysis one game deserves."""
    pure = enumerate_pure_ne(game)
    utilities = np.array([[utility(game, p, k) for k in range(game.K)] for p in pure])
    utilities = utilities.reshape(len(pure), game.K)
    potentials = np.array([potential(game, p) for p in pure])
    regions: frozenset[str] | None = None
    mixed: np.ndarray | None = None
    if _is_symmetric_2x2(game):
        regions = classify_region_2x2(game)
        if {"H1", "H4"} <= regions and len(pure) == 2:
            try:
                mixed = mixed_ne_2x2(game)
            except ValueError:
                mixed = None
    return EquilibriumReport(
        pure_ne=tuple(pure),
        utilities=utilities,
        potentials=potentials,
        mixed_ne=mixed,
        regions=regions,
    )
