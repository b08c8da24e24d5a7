"""Dense finite-dimensional quantum mechanics: states, projectors, collapse, evolution."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

STRUCT_TOL = 1e-12
DYN_TOL = 1e-10


class ImpossibleOutcome(ValueError):
    """Collapse requested onto an outcome with zero Born probability."""


def _as_vector(amplitudes) -> np.ndarray:
    a = np.array(amplitudes, dtype=complex).reshape(-1)
    if a.size == 0:
        raise ValueError("state must have positive dimension")
    a.setflags(write=False)
    return a


def _as_square(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"operator must be a non-empty square matrix, got shape {m.shape}")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _as_vector(self.amplitudes))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = STRUCT_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def normalized(self) -> "StateVector":
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n)

    def inner(self, other: "StateVector") -> complex:
        """<self|other>, antilinear in ``self``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def close_to(self, other: "StateVector", tol: float = DYN_TOL) -> bool:
        return self.dim == other.dim and float(np.linalg.norm(self.amplitudes - other.amplitudes)) < tol

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        """Unit vector ``e_index`` with 1-based ``index``."""
        if not 1 <= index <= dim:
            raise ValueError(f"basis index {index} outside 1..{dim}")
        a = np.zeros(dim, dtype=complex)
        a[index - 1] = 1
        return cls(a)

    def to_json(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.amplitudes]

    @classmethod
    def from_json(cls, data) -> "StateVector":
        return cls([complex(re, im) for re, im in data])


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_square(self.matrix))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, psi: StateVector) -> StateVector:
        if psi.dim != self.dim:
            raise ValueError(f"operator of dim {self.dim} applied to state of dim {psi.dim}")
        return StateVector(self.matrix @ psi.amplitudes)

    def to_json(self) -> list:
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]

    @classmethod
    def from_json(cls, data):
        return cls([[complex(re, im) for re, im in row] for row in data])


class HermitianOperator(Operator):
    """Self-adjoint operator; as a Hamiltonian its unit is radians per unit time."""

    def __post_init__(self):
        super().__post_init__()
        if not np.allclose(self.matrix, self.matrix.conj().T, rtol=0, atol=STRUCT_TOL):
            raise ValueError("operator is not Hermitian")

    @cached_property
    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        """Real eigenvalues and a unitary matrix of eigenvectors (columns)."""
        return np.linalg.eigh(self.matrix)

    def unitary(self, t: float) -> np.ndarray:
        w, V = self.eig
        return (V * np.exp(-1j * w * t)) @ V.conj().T


class ProjectorOperator(HermitianOperator):
    def __post_init__(self):
        super().__post_init__()
        if not np.allclose(self.matrix @ self.matrix, self.matrix, rtol=0, atol=STRUCT_TOL):
            raise ValueError("operator is not idempotent")

    def complement(self) -> "ProjectorOperator":
        return ProjectorOperator(np.eye(self.dim) - self.matrix)

    @classmethod
    def diagonal(cls, bits) -> "ProjectorOperator":
        return cls(np.diag(np.asarray(bits, dtype=complex)))


def identity(dim: int) -> ProjectorOperator:
    return ProjectorOperator(np.eye(dim))


def tensor_state(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product; component (i, j) lands at index ``i * b.dim + j``."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def tensor_operator(A, B):
    """Kronecker product, keeping the most specific operator type both factors share."""
    mA = A.matrix if isinstance(A, Operator) else _as_square(A)
    mB = B.matrix if isinstance(B, Operator) else _as_square(B)
    m = np.kron(mA, mB)
    for cls in (ProjectorOperator, HermitianOperator):
        if isinstance(A, cls) and isinstance(B, cls):
            return cls(m)
    return Operator(m)


def born_probability(P: ProjectorOperator, psi: StateVector) -> float:
    """||P psi||^2."""
    v = P.apply(psi).amplitudes
    return float(np.real(np.vdot(v, v)))


def collapse(P: ProjectorOperator, psi: StateVector) -> StateVector:
    """Lüders update P psi / ||P psi||."""
    v = P.apply(psi)
    n = v.norm
    if n ** 2 <= STRUCT_TOL:
        raise ImpossibleOutcome("measurement outcome has zero probability in this state")
    return StateVector(v.amplitudes / n)


def evolve(H: HermitianOperator, t: float, psi: StateVector) -> StateVector:
    """exp(-iHt) psi through the eigendecomposition of H."""
    if psi.dim != H.dim:
        raise ValueError(f"Hamiltonian of dim {H.dim} applied to state of dim {psi.dim}")
    w, V = H.eig
    return StateVector(V @ (np.exp(-1j * w * t) * (V.conj().T @ psi.amplitudes)))
