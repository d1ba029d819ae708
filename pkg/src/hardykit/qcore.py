"""States, projective observables, and Born-rule probabilities on small bipartite systems.

Everything is dense complex double precision: subsystem dimensions stay in the
single digits, so validation by direct matrix arithmetic is cheap and leaves
ample headroom for the tolerances used here. All types are immutable values
and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, UnknownLabel

# Absolute tolerances. Projector checks are looser than state normalization
# because user-supplied matrices may carry rounding from prior eigensolves.
PROJECTOR_ATOL = 1e-10
STATE_ATOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
PROB_CLAMP_ATOL = 1e-10

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _readonly(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BlochDirection:
    """Unit direction on the Bloch sphere, polar angle theta and azimuth phi."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")

    @classmethod
    def from_vector(cls, direction: Sequence[float]) -> "BlochDirection":
        """Build the direction from any nonzero 3-vector (normalized internally)."""
        vec = np.asarray(direction, dtype=float)
        norm = float(np.linalg.norm(vec))
        if vec.shape != (3,) or norm == 0.0:
            raise ValueError("direction must be a nonzero 3-vector")
        x, y, z = vec / norm
        theta = float(np.arctan2(np.hypot(x, y), z))
        phi = float(np.arctan2(y, x)) % (2.0 * np.pi)
        if phi >= 2.0 * np.pi:
            phi = 0.0
        return cls(min(max(theta, 0.0), float(np.pi)), phi)

    def unit_vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array(
            [st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)]
        )


@dataclass(frozen=True)
class QuantumState:
    """Bipartite state, either a pure amplitude vector or a density operator.

    ``dims`` holds the two subsystem dimensions (each >= 2); ``data`` is the
    amplitude vector (kind ``"pure"``) or the row-major density matrix (kind
    ``"density"``) on the d1*d2-dimensional joint space.
    """

    dims: tuple[int, int]
    kind: str
    data: np.ndarray

    def __post_init__(self) -> None:
        d1, d2 = (int(d) for d in self.dims)
        if d1 < 2 or d2 < 2:
            raise ValueError("subsystem dimensions must be at least 2")
        object.__setattr__(self, "dims", (d1, d2))
        n = d1 * d2
        data = np.asarray(self.data, dtype=complex)
        if self.kind == "pure":
            if data.shape != (n,):
                raise ValueError(f"pure state needs {n} amplitudes, got shape {data.shape}")
            norm_sq = float(np.sum(np.abs(data) ** 2))
            if abs(norm_sq - 1.0) > STATE_ATOL:
                raise ValueError(f"pure state squared norm {norm_sq} is not 1 within {STATE_ATOL}")
        elif self.kind == "density":
            if data.shape != (n, n):
                raise ValueError(f"density matrix must be {n}x{n}, got shape {data.shape}")
            if np.max(np.abs(data - data.conj().T)) > STATE_ATOL:
                raise ValueError("density matrix is not Hermitian within tolerance")
            trace = complex(np.trace(data))
            if abs(trace - 1.0) > STATE_ATOL:
                raise ValueError(f"density matrix trace {trace} is not 1 within {STATE_ATOL}")
            hermitian_part = 0.5 * (data + data.conj().T)
            smallest = float(np.linalg.eigvalsh(hermitian_part)[0])
            if smallest < EIGENVALUE_FLOOR:
                raise ValueError(f"density matrix has eigenvalue {smallest} below {EIGENVALUE_FLOOR}")
        else:
            raise ValueError(f"kind must be 'pure' or 'density', got {self.kind!r}")
        object.__setattr__(self, "data", _readonly(data))

    @classmethod
    def pure(cls, amplitudes: Iterable[complex], dims: tuple[int, int]) -> "QuantumState":
        return cls(tuple(dims), "pure", np.asarray(list(amplitudes), dtype=complex))

    @classmethod
    def density(cls, matrix: np.ndarray, dims: tuple[int, int]) -> "QuantumState":
        return cls(tuple(dims), "density", np.asarray(matrix, dtype=complex))

    def density_matrix(self) -> np.ndarray:
        """Density operator; pure states are lifted to their rank-1 projector."""
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return np.array(self.data)


@dataclass(frozen=True)
class Observable:
    """Projective measurement: labeled real outcomes with orthogonal projectors.

    The projectors must be Hermitian idempotents, mutually orthogonal, and sum
    to the identity (all within ``PROJECTOR_ATOL``); labels must be distinct.
    Zero projectors are permitted, so a spectrum may be embedded in a space of
    any dimension.
    """

    dim: int
    outcomes: tuple[tuple[float, np.ndarray], ...]

    def __post_init__(self) -> None:
        d = int(self.dim)
        if d < 1:
            raise ValueError("dimension must be positive")
        cleaned = []
        for label, projector in self.outcomes:
            proj = np.asarray(projector, dtype=complex)
            if proj.shape != (d, d):
                raise ValueError(f"projector for label {label} must be {d}x{d}")
            if np.max(np.abs(proj - proj.conj().T)) > PROJECTOR_ATOL:
                raise ValueError(f"projector for label {label} is not Hermitian")
            if np.max(np.abs(proj @ proj - proj)) > PROJECTOR_ATOL:
                raise ValueError(f"projector for label {label} is not idempotent")
            cleaned.append((float(label), _readonly(proj)))
        if not cleaned:
            raise ValueError("observable needs at least one outcome")
        labels = [label for label, _ in cleaned]
        if len(set(labels)) != len(labels):
            raise ValueError(f"outcome labels must be distinct, got {labels}")
        for i in range(len(cleaned)):
            for j in range(i + 1, len(cleaned)):
                cross = cleaned[i][1] @ cleaned[j][1]
                if np.max(np.abs(cross)) > PROJECTOR_ATOL:
                    raise ValueError(
                        f"projectors for labels {labels[i]} and {labels[j]} are not orthogonal"
                    )
        total = sum(proj for _, proj in cleaned)
        if np.max(np.abs(total - np.eye(d))) > PROJECTOR_ATOL:
            raise ValueError("projectors do not sum to the identity")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "outcomes", tuple(cleaned))

    @property
    def labels(self) -> tuple[float, ...]:
        return tuple(label for label, _ in self.outcomes)

    def projector(self, label: float) -> np.ndarray:
        target = float(label)
        for known, proj in self.outcomes:
            if known == target:
                return proj
        raise UnknownLabel(f"label {label} not in spectrum {self.labels}")


def spin_observable(direction: BlochDirection) -> Observable:
    """Dichotomic spin observable along ``direction`` with outcomes +1 and -1."""
    nx, ny, nz = direction.unit_vector()
    pauli_component = nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z
    plus = 0.5 * (np.eye(2) + pauli_component)
    minus = 0.5 * (np.eye(2) - pauli_component)
    return Observable(2, ((1.0, plus), (-1.0, minus)))


def bloch_vector(projector: np.ndarray) -> np.ndarray:
    """Bloch vector of a qubit projector, the inverse of ``spin_observable``."""
    proj = np.asarray(projector, dtype=complex)
    return np.array(
        [
            float(np.trace(proj @ PAULI_X).real),
            float(np.trace(proj @ PAULI_Y).real),
            float(np.trace(proj @ PAULI_Z).real),
        ]
    )


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two operators (first factor acts on subsystem 1)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _clamp_probability(p: float) -> float:
    if -PROB_CLAMP_ATOL <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + PROB_CLAMP_ATOL:
        return 1.0
    return p


def _trace_probability(state: QuantumState, operator: np.ndarray) -> float:
    rho = state.density_matrix()
    return _clamp_probability(float(np.einsum("ij,ji->", rho, operator).real))


def joint_probability(
    state: QuantumState,
    obs1: Observable,
    label1: float,
    obs2: Observable,
    label2: float,
) -> float:
    """Probability of observing ``label1`` on side 1 and ``label2`` on side 2."""
    if (obs1.dim, obs2.dim) != state.dims:
        raise DimensionMismatch(
            f"observables act on {(obs1.dim, obs2.dim)}, state has dims {state.dims}"
        )
    op = tensor(obs1.projector(label1), obs2.projector(label2))
    return _trace_probability(state, op)


def marginal_probability(
    state: QuantumState, side: int, obs: Observable, label: float
) -> float:
    """Single-side outcome probability, the other subsystem traced out."""
    if side not in (1, 2):
        raise ValueError(f"side must be 1 or 2, got {side}")
    if obs.dim != state.dims[side - 1]:
        raise DimensionMismatch(
            f"observable dimension {obs.dim} does not match side {side} of dims {state.dims}"
        )
    proj = obs.projector(label)
    if side == 1:
        op = tensor(proj, np.eye(state.dims[1]))
    else:
        op = tensor(np.eye(state.dims[0]), proj)
    return _trace_probability(state, op)


def singlet() -> QuantumState:
    """Two-qubit singlet (|01> - |10>)/sqrt(2)."""
    amps = np.zeros(4, dtype=complex)
    amps[1] = 1.0 / np.sqrt(2.0)
    amps[2] = -1.0 / np.sqrt(2.0)
    return QuantumState.pure(amps, (2, 2))


def maximally_mixed(d1: int, d2: int) -> QuantumState:
    n = d1 * d2
    return QuantumState.density(np.eye(n) / n, (d1, d2))


def werner_state(visibility: float) -> QuantumState:
    """Singlet mixed with white noise: v |psi><psi| + (1 - v) I/4."""
    v = float(visibility)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    pure = singlet().density_matrix()
    return QuantumState.density(v * pure + (1.0 - v) * np.eye(4) / 4.0, (2, 2))


# ---------------------------------------------------------------------------
# JSON wire format. Complex entries are [re, im] pairs; matrices are row-major.

def _pairs_from_complex(values: np.ndarray) -> list[list[float]]:
    flat = np.asarray(values, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def _complex_from_pairs(pairs: Sequence[Sequence[float]]) -> np.ndarray:
    return np.array([complex(float(p[0]), float(p[1])) for p in pairs], dtype=complex)


def state_to_dict(state: QuantumState) -> dict:
    return {
        "dims": [state.dims[0], state.dims[1]],
        "kind": state.kind,
        "data": _pairs_from_complex(state.data),
    }


def state_from_dict(payload: dict) -> QuantumState:
    dims = (int(payload["dims"][0]), int(payload["dims"][1]))
    kind = payload["kind"]
    flat = _complex_from_pairs(payload["data"])
    if kind == "density":
        n = dims[0] * dims[1]
        return QuantumState.density(flat.reshape(n, n), dims)
    return QuantumState.pure(flat, dims)


def observable_to_dict(obs: Observable) -> dict:
    return {
        "dim": obs.dim,
        "outcomes": [
            {"label": label, "projector": _pairs_from_complex(proj)}
            for label, proj in obs.outcomes
        ],
    }


def observable_from_dict(payload: dict) -> Observable:
    if "bloch" in payload:
        angles = payload["bloch"]
        return spin_observable(BlochDirection(float(angles["theta"]), float(angles["phi"])))
    d = int(payload["dim"])
    outcomes = tuple(
        (float(entry["label"]), _complex_from_pairs(entry["projector"]).reshape(d, d))
        for entry in payload["outcomes"]
    )
    return Observable(d, outcomes)
