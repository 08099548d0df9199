"""Shared fixtures and random-game helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from csgame import GameSpec


def random_game(rng: np.random.Generator, n_players: int, n_channels: int) -> GameSpec:
    """A generic positive-parameter game; used wherever the exact numbers
    don't matter, only the structural properties."""
    return GameSpec(
        bandwidths=rng.uniform(0.5, 2.0, n_channels),
        noise=rng.uniform(0.1, 2.0, n_channels),
        max_power=rng.uniform(0.5, 5.0, n_players),
        gains=rng.exponential(1.0, (n_players, n_channels)),
    )


def random_symmetric_2x2(rng: np.random.Generator, snr: float = 10.0) -> GameSpec:
    """A symmetric-parameter 2x2 game with exponential fading gains."""
    return GameSpec.symmetric(rng.exponential(1.0, (2, 2)), p_max=snr, noise_var=1.0)


@pytest.fixture
def unit_game() -> GameSpec:
    """Two players, two equal-bandwidth channels, all gains and powers 1.

    Hand-computable payoffs: alone on a channel, u = 0.5*log2(2) = 0.5;
    sharing, u = 0.5*log2(1.5).
    """
    return GameSpec.symmetric([[1.0, 1.0], [1.0, 1.0]], p_max=1.0, noise_var=1.0)


@pytest.fixture
def strong_interference_game() -> GameSpec:
    """Symmetric all-ones gains at SNR 10; both pure NE plus the mixed one."""
    return GameSpec.symmetric([[1.0, 1.0], [1.0, 1.0]], p_max=10.0, noise_var=1.0)


@pytest.fixture
def worked_mixed_game() -> GameSpec:
    """Gains (1, .5)/(.5, 1), p_max 1, noise 0.1; mixed NE has hand-derived
    probabilities 0.28613001.../0.71386999... per row."""
    return GameSpec.symmetric([[1.0, 0.5], [0.5, 1.0]], p_max=1.0, noise_var=0.1)


@pytest.fixture
def unique_ne_game() -> GameSpec:
    """Gains (1, .2)/(.2, 1), p_max 1, noise 0.1; only NE is (0, 1)."""
    return GameSpec.symmetric([[1.0, 0.2], [0.2, 1.0]], p_max=1.0, noise_var=0.1)
