"""Shared generators for randomized states, measurements, and scenarios."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from hardykit import Observable, QuantumState, Scenario

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def random_pure_state(rng: np.random.Generator, d1: int, d2: int) -> QuantumState:
    amps = rng.normal(size=d1 * d2) + 1j * rng.normal(size=d1 * d2)
    amps /= np.linalg.norm(amps)
    return QuantumState.pure(amps, (d1, d2))


def random_density_state(rng: np.random.Generator, d1: int, d2: int) -> QuantumState:
    n = d1 * d2
    factor = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = factor @ factor.conj().T
    rho /= np.trace(rho).real
    return QuantumState.density(rho, (d1, d2))


def random_state(rng: np.random.Generator, d1: int, d2: int) -> QuantumState:
    if rng.random() < 0.5:
        return random_pure_state(rng, d1, d2)
    return random_density_state(rng, d1, d2)


def _rank_split(rng: np.random.Generator, dim: int, outcomes: int) -> list[int]:
    # Even split; zero ranks appear only when there are more labels than dimensions.
    ranks = [dim // outcomes + (1 if i < dim % outcomes else 0) for i in range(outcomes)]
    rng.shuffle(ranks)
    return ranks


def random_observable(
    rng: np.random.Generator,
    dim: int,
    labels: tuple[float, ...],
    ranks: list[int] | None = None,
) -> Observable:
    """Random PVM with the given outcome labels, built from a Haar-ish unitary."""
    gaussian = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    unitary, _ = np.linalg.qr(gaussian)
    if ranks is None:
        ranks = _rank_split(rng, dim, len(labels))
    assert sum(ranks) == dim
    outcomes = []
    start = 0
    for label, rank in zip(labels, ranks):
        columns = unitary[:, start : start + rank]
        outcomes.append((label, columns @ columns.conj().T))
        start += rank
    return Observable(dim, tuple(outcomes))


def random_y_labels(rng: np.random.Generator, dim: int) -> tuple[float, ...]:
    """A spectrum containing +1 plus up to dim-1 other distinct values."""
    count = int(rng.integers(2, dim + 1))
    labels = {1.0}
    while len(labels) < count:
        candidate = round(float(rng.normal() * 3.0), 3)
        if candidate != 1.0:
            labels.add(candidate)
    ordered = [1.0] + sorted(labels - {1.0})
    return tuple(ordered)


def random_scenario(
    rng: np.random.Generator, d1: int = 2, d2: int = 2, trichotomic: bool = False
) -> Scenario:
    x_labels = (-1.0, 0.0, 1.0) if trichotomic else (-1.0, 1.0)
    return Scenario(
        x1=random_observable(rng, d1, x_labels),
        y1=random_observable(rng, d1, random_y_labels(rng, d1)),
        x2=random_observable(rng, d2, x_labels),
        y2=random_observable(rng, d2, random_y_labels(rng, d2)),
    )
