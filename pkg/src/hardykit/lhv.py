"""Local deterministic models: set-measure identities and membership in the local polytope.

A local deterministic model assigns one definite outcome per local observable;
mixing such assignments with nonnegative weights spans exactly the probability
vectors a local theory can produce. Membership is decided by a dense phase-1
simplex over the enumerated assignments, so a feasible verdict always comes
with an explicit mixing witness.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import InvalidQVector, MalformedMeasure
from .witness import QVECTOR_ATOL, QVector

FEASIBILITY_TOL = 1e-9
_WEIGHT_SUM_ATOL = 1e-12
_PIVOT_TOL = 1e-12
_COMPARE_SLACK = 1e-12  # absorbs summation-order roundoff in measure comparisons

_X_OUTCOMES_DICHOTOMIC = (-1, 1)
_X_OUTCOMES_TRICHOTOMIC = (-1, 0, 1)
_Y_EVENTS = (False, True)  # ordered (other, +1)


@dataclass(frozen=True)
class FiniteMeasure:
    """Probability weights over finitely many atoms with four marked subsets.

    ``a``, ``b``, ``c``, ``d`` are boolean membership masks over the atoms.
    """

    weights: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size < 1:
            raise MalformedMeasure("weights must be a nonempty 1-d array")
        if np.any(weights < 0.0):
            raise MalformedMeasure("weights must be nonnegative")
        total = float(weights.sum())
        if abs(total - 1.0) > _WEIGHT_SUM_ATOL:
            raise MalformedMeasure(f"weights sum to {total}, not 1 within {_WEIGHT_SUM_ATOL}")
        masks = {}
        for name in ("a", "b", "c", "d"):
            mask = np.asarray(getattr(self, name), dtype=bool)
            if mask.shape != weights.shape:
                raise MalformedMeasure(f"subset {name} has shape {mask.shape}, expected {weights.shape}")
            mask = mask.copy()
            mask.setflags(write=False)
            masks[name] = mask
        weights = weights.copy()
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        for name, mask in masks.items():
            object.__setattr__(self, name, mask)

    def mu(self, mask: np.ndarray) -> float:
        """Measure of the subset given by a boolean mask."""
        return float(self.weights[np.asarray(mask, dtype=bool)].sum())


def set_expression(m: FiniteMeasure) -> float:
    """mu[A&B] + mu[C] - mu[B&C] + mu[D] - mu[A&D] - mu[C&D].

    For any probability measure and any four subsets this combination lies in
    [0, 1]; ``proof_step_inequalities`` checks the two intermediate bounds that
    force it there.
    """
    return (
        m.mu(m.a & m.b)
        + m.mu(m.c)
        - m.mu(m.b & m.c)
        + m.mu(m.d)
        - m.mu(m.a & m.d)
        - m.mu(m.c & m.d)
    )


def proof_step_inequalities(m: FiniteMeasure) -> tuple[bool, bool]:
    """The two intermediate inequalities behind the [0, 1] bound.

    First: mu[A&D] + mu[B&C] <= mu[C|D] + mu[A&B&C&D].
    Second: mu[C|D] <= mu[~A | ~B] + mu[A&D] + mu[B&C].
    Both are theorems; a False entry signals an implementation bug.
    """
    union_cd = m.mu(m.c | m.d)
    lower_lhs = m.mu(m.a & m.d) + m.mu(m.b & m.c)
    lower_rhs = union_cd + m.mu(m.a & m.b & m.c & m.d)
    upper_rhs = m.mu(~m.a | ~m.b) + m.mu(m.a & m.d) + m.mu(m.b & m.c)
    return (
        lower_lhs <= lower_rhs + _COMPARE_SLACK,
        union_cd <= upper_rhs + _COMPARE_SLACK,
    )


@dataclass(frozen=True)
class DeterministicStrategy:
    """One definite outcome per local observable; a vertex of the local polytope.

    ``y1_plus``/``y2_plus`` record whether the y-observables yield +1 or any
    other value; finer detail about "other" never enters the witness.
    """

    x1: int
    x2: int
    y1_plus: bool
    y2_plus: bool

    def __post_init__(self) -> None:
        for name in ("x1", "x2"):
            if getattr(self, name) not in (-1, 0, 1):
                raise ValueError(f"{name} outcome must be -1, 0, or +1")

    def q_components(self, trichotomic: bool = False) -> tuple[int, ...]:
        """Indicator probabilities this assignment induces for the witness."""
        q1 = int(self.x1 == 1 and self.x2 == 1)
        q2 = int(self.y1_plus and self.x2 == -1)
        q3 = int(self.x1 == -1 and self.y2_plus)
        q4 = int(self.y1_plus and self.y2_plus)
        if not trichotomic:
            return (q1, q2, q3, q4)
        q5 = int(self.y1_plus and self.x2 == 0)
        q6 = int(self.x1 == 0 and self.y2_plus)
        return (q1, q2, q3, q4, q5, q6)


def enumerate_strategies(trichotomic: bool = False) -> list[DeterministicStrategy]:
    """All deterministic strategies in canonical order.

    Lexicographic in (x1, x2, y1, y2) with x outcomes ordered (-1, 0, +1) and
    y events ordered (other, +1); 16 strategies dichotomic, 36 trichotomic.
    """
    x_outcomes = _X_OUTCOMES_TRICHOTOMIC if trichotomic else _X_OUTCOMES_DICHOTOMIC
    return [
        DeterministicStrategy(x1, x2, y1, y2)
        for x1, x2, y1, y2 in product(x_outcomes, x_outcomes, _Y_EVENTS, _Y_EVENTS)
    ]


def vertex_expression_value(strategy: DeterministicStrategy) -> int:
    """Witness expression at a vertex, computed in exact integer arithmetic.

    The trichotomic terms vanish automatically for strategies without a zero
    outcome, so one formula covers both arities. Exhaustive enumeration shows
    the value is always 0 or 1, which is what confines every mixture to [0, 1].
    """
    q1, q2, q3, q4, q5, q6 = strategy.q_components(trichotomic=True)
    return q1 + q2 + q3 + q5 + q6 - q4


def strategy_matrix(trichotomic: bool = False) -> np.ndarray:
    """Columns are the indicator q-vectors of the canonical strategy list."""
    strategies = enumerate_strategies(trichotomic)
    rows = 6 if trichotomic else 4
    matrix = np.zeros((rows, len(strategies)))
    for j, strategy in enumerate(strategies):
        matrix[:, j] = strategy.q_components(trichotomic)
    return matrix


def vertex_table(trichotomic: bool = False) -> list[tuple[int, int, str, str, int]]:
    """Rows (x1, x2, y1-event, y2-event, expression value) in canonical order."""
    table = []
    for strategy in enumerate_strategies(trichotomic):
        table.append(
            (
                strategy.x1,
                strategy.x2,
                "+1" if strategy.y1_plus else "other",
                "+1" if strategy.y2_plus else "other",
                vertex_expression_value(strategy),
            )
        )
    return table


def vertex_table_csv(trichotomic: bool = False) -> str:
    """CSV rendering of ``vertex_table`` with a header row and LF line endings."""
    out = io.StringIO()
    out.write("x1,x2,y1,y2,value\n")
    for x1, x2, y1, y2, value in vertex_table(trichotomic):
        out.write(f"{x1},{x2},{y1},{y2},{value}\n")
    return out.getvalue()


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the local-polytope membership test.

    ``witness`` holds mixing weights over the canonical strategy list when
    feasible; ``residual`` is the terminal phase-1 objective either way.
    """

    feasible: bool
    witness: np.ndarray | None
    residual: float

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "witness": None if self.witness is None else [float(w) for w in self.witness],
            "residual": self.residual,
        }


def _coerce_components(q: "QVector | Sequence[float]") -> tuple[float, ...]:
    if isinstance(q, QVector):
        return q.components()
    values = tuple(float(v) for v in q)
    if len(values) not in (4, 6):
        raise InvalidQVector(f"expected 4 or 6 components, got {len(values)}")
    cleaned = []
    for i, value in enumerate(values):
        if not -QVECTOR_ATOL <= value <= 1.0 + QVECTOR_ATOL:
            raise InvalidQVector(f"component q{i + 1} = {value} lies outside [0, 1]")
        cleaned.append(min(max(value, 0.0), 1.0))
    return tuple(cleaned)


def lhv_feasible(q: "QVector | Sequence[float]") -> FeasibilityResult:
    """Decide whether some mixture of deterministic strategies reproduces ``q``.

    Solves the phase-1 feasibility program: nonnegative weights over the
    canonical strategies, summing to one, matching every component of ``q``.
    """
    components = _coerce_components(q)
    trichotomic = len(components) == 6
    vertex_columns = strategy_matrix(trichotomic)
    rows = np.vstack([vertex_columns, np.ones((1, vertex_columns.shape[1]))])
    target = np.append(np.asarray(components, dtype=float), 1.0)
    weights, objective = _phase_one_simplex(rows, target)
    residual = objective if objective > 0.0 else 0.0
    if residual > FEASIBILITY_TOL:
        return FeasibilityResult(False, None, residual)
    weights = np.where(weights < 0.0, 0.0, weights)  # clip pivot roundoff
    return FeasibilityResult(True, weights, residual)


def _phase_one_simplex(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimize the sum of artificials for A x = b, x >= 0 (Bland's rule).

    Returns (x, objective). The objective is zero exactly when the system is
    feasible; Bland's entering/leaving rule guarantees termination on these
    tiny dense tableaus.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    negative = b < 0.0
    A[negative] *= -1.0
    b[negative] *= -1.0

    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = A
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    # Phase-1 cost row, already reduced against the artificial basis.
    tableau[m, :n] = -A.sum(axis=0)
    tableau[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    for _ in range(10_000):
        entering = -1
        for j in range(n + m):
            if tableau[m, j] < -_PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            break
        leaving = -1
        best_ratio = np.inf
        for i in range(m):
            coefficient = tableau[i, entering]
            if coefficient <= _PIVOT_TOL:
                continue
            ratio = tableau[i, -1] / coefficient
            if ratio < best_ratio - _PIVOT_TOL:
                best_ratio, leaving = ratio, i
            elif abs(ratio - best_ratio) <= _PIVOT_TOL and basis[i] < basis[leaving]:
                leaving = i
        if leaving < 0:
            raise RuntimeError("phase-1 objective cannot be unbounded")
        pivot_row = tableau[leaving] / tableau[leaving, entering]
        tableau[leaving] = pivot_row
        for i in range(m + 1):
            if i != leaving and tableau[i, entering] != 0.0:
                tableau[i] -= tableau[i, entering] * pivot_row
        basis[leaving] = entering
    else:
        raise RuntimeError("simplex failed to terminate")

    solution = np.zeros(n + m)
    for i, variable in enumerate(basis):
        solution[variable] = tableau[i, -1]
    return solution[:n], float(-tableau[m, -1])
