"""Nonlocality witnesses: probability extraction, bound expressions, classification.

A scenario fixes four local observables (two per side). From a state it yields
the probability vector (q1..q4, optionally q5, q6), the combination
q1 + q2 + q3 (+ q5 + q6) - q4 whose value must lie in [0, 1] for any local
deterministic model, and the six-term Clauser-Horne combination, which agrees
with it identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .qcore import (
    BlochDirection,
    Observable,
    QuantumState,
    joint_probability,
    marginal_probability,
    observable_from_dict,
    observable_to_dict,
    spin_observable,
)

DEFAULT_TOLERANCE = 1e-9  # numeric zero for the "vanishing probability" conditions
QVECTOR_ATOL = 1e-10

HARDY_VIOLATION = "HardyViolation"
KUNKRI_VIOLATION = "KunkriViolation"
LOWER_BOUND_VIOLATION = "LowerBoundViolation"
UPPER_BOUND_VIOLATION = "UpperBoundViolation"
NO_VIOLATION = "NoViolation"

CLASSIFICATIONS = (
    HARDY_VIOLATION,
    KUNKRI_VIOLATION,
    LOWER_BOUND_VIOLATION,
    UPPER_BOUND_VIOLATION,
    NO_VIOLATION,
)

_DICHOTOMIC = frozenset((-1.0, 1.0))
_TRICHOTOMIC = frozenset((-1.0, 0.0, 1.0))


def _clamp_component(name: str, value: float) -> float:
    if not -QVECTOR_ATOL <= value <= 1.0 + QVECTOR_ATOL:
        raise ValueError(f"{name} = {value} lies outside [0, 1] beyond tolerance")
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class QVector:
    """Probability vector of the witness scenario, clamped to [0, 1].

    q5 and q6 are present exactly when the x-observables are trichotomic.
    """

    q1: float
    q2: float
    q3: float
    q4: float
    q5: float | None = None
    q6: float | None = None

    def __post_init__(self) -> None:
        if (self.q5 is None) != (self.q6 is None):
            raise ValueError("q5 and q6 must be given together")
        for name in ("q1", "q2", "q3", "q4"):
            object.__setattr__(self, name, _clamp_component(name, float(getattr(self, name))))
        if self.q5 is not None:
            object.__setattr__(self, "q5", _clamp_component("q5", float(self.q5)))
            object.__setattr__(self, "q6", _clamp_component("q6", float(self.q6)))

    @property
    def trichotomic(self) -> bool:
        return self.q5 is not None

    def components(self) -> tuple[float, ...]:
        if self.trichotomic:
            return (self.q1, self.q2, self.q3, self.q4, self.q5, self.q6)
        return (self.q1, self.q2, self.q3, self.q4)


@dataclass(frozen=True)
class Scenario:
    """Four local observables: x1, y1 on side 1 and x2, y2 on side 2.

    The x-observables carry spectrum {-1, +1} or {-1, 0, +1} (both sides
    alike); the y-observables may have any spectrum containing +1.
    """

    x1: Observable
    y1: Observable
    x2: Observable
    y2: Observable

    def __post_init__(self) -> None:
        if self.x1.dim != self.y1.dim or self.x2.dim != self.y2.dim:
            raise ValueError("observables on the same side must share a dimension")
        arity1 = self._x_arity(self.x1, "x1")
        arity2 = self._x_arity(self.x2, "x2")
        if arity1 != arity2:
            raise ValueError("x1 and x2 must both be dichotomic or both trichotomic")
        for name, obs in (("y1", self.y1), ("y2", self.y2)):
            if 1.0 not in obs.labels:
                raise ValueError(f"{name} spectrum must contain +1, got {obs.labels}")

    @staticmethod
    def _x_arity(obs: Observable, name: str) -> int:
        labels = frozenset(obs.labels)
        if labels == _DICHOTOMIC:
            return 2
        if labels == _TRICHOTOMIC:
            return 3
        raise ValueError(f"{name} labels must be exactly {{-1,+1}} or {{-1,0,+1}}, got {obs.labels}")

    @property
    def trichotomic(self) -> bool:
        return frozenset(self.x1.labels) == _TRICHOTOMIC

    @property
    def dims(self) -> tuple[int, int]:
        return (self.x1.dim, self.x2.dim)


@dataclass(frozen=True)
class WitnessReport:
    """Bundle of the probability vector, both expression values, and the verdict."""

    qvec: QVector
    generalized_value: float
    ch_value: float
    classification: str

    def to_dict(self) -> dict:
        return {
            "q": list(self.qvec.components()),
            "generalized": self.generalized_value,
            "ch": self.ch_value,
            "class": self.classification,
        }


def _check_dims(state: QuantumState, scenario: Scenario) -> None:
    if scenario.dims != state.dims:
        raise DimensionMismatch(
            f"scenario dims {scenario.dims} do not match state dims {state.dims}"
        )


def q_vector(state: QuantumState, scenario: Scenario) -> QVector:
    """Extract (q1..q4) and, for trichotomic x-observables, (q5, q6)."""
    _check_dims(state, scenario)
    q1 = joint_probability(state, scenario.x1, 1.0, scenario.x2, 1.0)
    q2 = joint_probability(state, scenario.y1, 1.0, scenario.x2, -1.0)
    q3 = joint_probability(state, scenario.x1, -1.0, scenario.y2, 1.0)
    q4 = joint_probability(state, scenario.y1, 1.0, scenario.y2, 1.0)
    if not scenario.trichotomic:
        return QVector(q1, q2, q3, q4)
    q5 = joint_probability(state, scenario.y1, 1.0, scenario.x2, 0.0)
    q6 = joint_probability(state, scenario.x1, 0.0, scenario.y2, 1.0)
    return QVector(q1, q2, q3, q4, q5, q6)


def generalized_expression(q: QVector) -> float:
    """q1 + q2 + q3 - q4, plus q5 + q6 in the trichotomic case.

    Local deterministic models confine this value to [0, 1]; either bound can
    be violated by entangled states.
    """
    value = q.q1 + q.q2 + q.q3 - q.q4
    if q.trichotomic:
        value += q.q5 + q.q6
    return value


def ch_expression(state: QuantumState, scenario: Scenario) -> float:
    """Clauser-Horne combination of four joint and two single-side probabilities."""
    _check_dims(state, scenario)
    return (
        joint_probability(state, scenario.x1, 1.0, scenario.x2, 1.0)
        - joint_probability(state, scenario.y1, 1.0, scenario.x2, 1.0)
        - joint_probability(state, scenario.x1, 1.0, scenario.y2, 1.0)
        - joint_probability(state, scenario.y1, 1.0, scenario.y2, 1.0)
        + marginal_probability(state, 1, scenario.y1, 1.0)
        + marginal_probability(state, 2, scenario.y2, 1.0)
    )


def classify(q: QVector, gen_value: float, tol: float = DEFAULT_TOLERANCE) -> str:
    """Name the violation pattern of a probability vector.

    Precedence: the all-zeros pattern with q4 > 0, then the relaxed pattern
    with 0 < q1 < q4, then the plain bound labels, then no violation.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    extra_zero = (q.q5 < tol and q.q6 < tol) if q.trichotomic else True
    if q.q2 < tol and q.q3 < tol and extra_zero:
        if q.q1 < tol and q.q4 > tol:
            return HARDY_VIOLATION
        if tol < q.q1 < q.q4 - tol:
            return KUNKRI_VIOLATION
    if gen_value < -tol:
        return LOWER_BOUND_VIOLATION
    if gen_value > 1.0 + tol:
        return UPPER_BOUND_VIOLATION
    return NO_VIOLATION


def witness_report(
    state: QuantumState, scenario: Scenario, tol: float = DEFAULT_TOLERANCE
) -> WitnessReport:
    """Evaluate everything the witness has to say about a state and scenario."""
    q = q_vector(state, scenario)
    gen = generalized_expression(q)
    ch = ch_expression(state, scenario)
    return WitnessReport(q, gen, ch, classify(q, gen, tol))


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "x1": observable_to_dict(scenario.x1),
        "y1": observable_to_dict(scenario.y1),
        "x2": observable_to_dict(scenario.x2),
        "y2": observable_to_dict(scenario.y2),
    }


def scenario_from_dict(payload: dict) -> Scenario:
    return Scenario(
        x1=observable_from_dict(payload["x1"]),
        y1=observable_from_dict(payload["y1"]),
        x2=observable_from_dict(payload["x2"]),
        y2=observable_from_dict(payload["y2"]),
    )


def planar_scenario(
    x1_angle: float,
    y1_angle: float,
    x2_angle: float,
    y2_angle: float,
    plane: str = "xy",
) -> Scenario:
    """Scenario of four spin observables with directions in a common plane.

    Angles are measured within the plane: from the positive x axis for
    ``plane="xy"``, from the positive z axis for ``plane="xz"``.
    """

    def direction(angle: float) -> BlochDirection:
        if plane == "xy":
            vec = (np.cos(angle), np.sin(angle), 0.0)
        elif plane == "xz":
            vec = (np.sin(angle), 0.0, np.cos(angle))
        else:
            raise ValueError(f"plane must be 'xy' or 'xz', got {plane!r}")
        return BlochDirection.from_vector(vec)

    return Scenario(
        x1=spin_observable(direction(x1_angle)),
        y1=spin_observable(direction(y1_angle)),
        x2=spin_observable(direction(x2_angle)),
        y2=spin_observable(direction(y2_angle)),
    )
