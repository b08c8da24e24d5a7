"""Quantum models of the two-sentence liar situations.

Variant A is the double liar ("(1) sentence 2 is false / (2) sentence 1 is
true") on C^4 (x) C^4; B (both sentences assert the other true) and C (both
assert the other false) live on C^2 (x) C^2 as the triplet and singlet
states. On C^4 the third basis vector means "true", the fourth "false"; the
first two carry no truth value and are reported as ``LATENT``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .quantum import (
    DYN_TOL,
    HermitianOperator,
    ProjectorOperator,
    StateVector,
    born_probability,
    collapse,
    evolve,
    identity,
    tensor_operator,
    tensor_state,
)


class LiarVariant(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"


class Truth(str, enum.Enum):
    TRUE = "T"
    FALSE = "F"
    LATENT = "L"


@dataclass(frozen=True)
class TruthAssignment:
    sentence1: Truth
    sentence2: Truth

    @property
    def label(self) -> str:
        """``"TF"`` when both are definite, ``"1T"``/``"2F"`` when one is, ``"LL"`` otherwise."""
        s1, s2 = self.sentence1, self.sentence2
        if s1 is not Truth.LATENT and s2 is not Truth.LATENT:
            return s1.value + s2.value
        if s1 is not Truth.LATENT:
            return "1" + s1.value
        if s2 is not Truth.LATENT:
            return "2" + s2.value
        return "LL"

    def to_dict(self) -> dict:
        names = {Truth.TRUE: "true", Truth.FALSE: "false", Truth.LATENT: "latent"}
        return {"sentence1": names[self.sentence1], "sentence2": names[self.sentence2]}


UP = StateVector([1, 0])
DOWN = StateVector([0, 1])
FLIP = np.array([[0, 1], [1, 0]], dtype=complex)


def _e4(k: int) -> StateVector:
    return StateVector.basis(4, k)


# consecutive states of the double liar cycle: 1 true, 2 false, 1 false, 2 true
CYCLE_A = (
    tensor_state(_e4(3), _e4(2)),
    tensor_state(_e4(2), _e4(4)),
    tensor_state(_e4(4), _e4(1)),
    tensor_state(_e4(1), _e4(3)),
)


def _principal_phase(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    a = -((-angle + np.pi) % (2 * np.pi)) + np.pi
    return float(a)


def double_liar_hamiltonian(step_time: float = 1.0) -> HermitianOperator:
    """H with exp(-iH tau) cycling CYCLE_A forward and H = 0 off their span.

    The eigenvectors of the cyclic shift are the Fourier combinations
    v_m = 1/2 sum_k i^(-mk) phi_k with shift eigenvalue i^m. Each gets the
    energy theta_m with theta_m * tau the principal value of -m pi / 2, so the
    uniform superposition (m = 0) has energy exactly zero.
    """
    if step_time <= 0:
        raise ValueError("step_time must be positive")
    phis = np.array([p.amplitudes for p in CYCLE_A]).T  # 16 x 4
    H = np.zeros((16, 16), dtype=complex)
    for m in range(4):
        coeffs = np.array([(1j) ** (-m * k) for k in range(4)]) / 2
        v = phis @ coeffs
        theta = _principal_phase(-m * np.pi / 2) / step_time
        H += theta * np.outer(v, v.conj())
    H = (H + H.conj().T) / 2
    return HermitianOperator(H)


@dataclass(frozen=True, eq=False)
class LiarEntity:
    variant: LiarVariant
    space_dim: int
    psi0: StateVector
    projectors: dict = field(repr=False)  # (sentence, bool) -> ProjectorOperator
    hamiltonian: HermitianOperator = field(repr=False)
    step_time: float = 1.0
    step_operator: np.ndarray | None = field(default=None, repr=False)

    def projector(self, sentence: int, value: bool) -> ProjectorOperator:
        try:
            return self.projectors[(sentence, bool(value))]
        except KeyError:
            raise ValueError(f"no sentence {sentence}; choose 1 or 2") from None


def _two_sentence_projectors(true_proj: ProjectorOperator, false_proj: ProjectorOperator, d: int):
    one = identity(d)
    return {
        (1, True): tensor_operator(true_proj, one),
        (1, False): tensor_operator(false_proj, one),
        (2, True): tensor_operator(one, true_proj),
        (2, False): tensor_operator(one, false_proj),
    }


def build_entity(variant, step_time: float = 1.0) -> LiarEntity:
    variant = LiarVariant(variant)
    if step_time <= 0:
        raise ValueError("step_time must be positive")
    if variant is LiarVariant.A:
        psi0 = StateVector(sum(p.amplitudes for p in CYCLE_A) / 2)
        projectors = _two_sentence_projectors(
            ProjectorOperator.diagonal([0, 0, 1, 0]), ProjectorOperator.diagonal([0, 0, 0, 1]), 4)
        return LiarEntity(variant, 16, psi0, projectors,
                          double_liar_hamiltonian(step_time), step_time)

    projectors = _two_sentence_projectors(
        ProjectorOperator.diagonal([1, 0]), ProjectorOperator.diagonal([0, 1]), 2)
    if variant is LiarVariant.C:
        psi0 = StateVector((tensor_state(UP, DOWN).amplitudes
                            - tensor_state(DOWN, UP).amplitudes) / np.sqrt(2))
        step = np.kron(FLIP, FLIP)
        # exp(-iH tau) = FLIP (x) FLIP: energy pi/tau on its -1 eigenspace
        H = HermitianOperator(np.pi / step_time * (np.eye(4) - step) / 2)
    else:
        psi0 = StateVector((tensor_state(UP, UP).amplitudes
                            + tensor_state(DOWN, DOWN).amplitudes) / np.sqrt(2))
        step = np.eye(4, dtype=complex)
        H = HermitianOperator(np.zeros((4, 4)))
    return LiarEntity(variant, 4, psi0, projectors, H, step_time, step)


def measure(entity: LiarEntity, sentence: int, value: bool,
            state: StateVector | None = None) -> tuple[float, StateVector]:
    """Make ``sentence`` true/false: Born probability and the collapsed state."""
    psi = entity.psi0 if state is None else state
    P = entity.projector(sentence, value)
    return born_probability(P, psi), collapse(P, psi)


def reasoning_step(entity: LiarEntity, state: StateVector) -> StateVector:
    if entity.variant is LiarVariant.A:
        return evolve(entity.hamiltonian, entity.step_time, state)
    return StateVector(entity.step_operator @ state.amplitudes)


def assignment_of(entity: LiarEntity, state: StateVector, tol: float = DYN_TOL) -> TruthAssignment:
    values = []
    for sentence in (1, 2):
        if abs(born_probability(entity.projector(sentence, True), state) - 1) <= tol:
            values.append(Truth.TRUE)
        elif abs(born_probability(entity.projector(sentence, False), state) - 1) <= tol:
            values.append(Truth.FALSE)
        else:
            values.append(Truth.LATENT)
    return TruthAssignment(*values)


@dataclass(frozen=True)
class TraceStep:
    assignment: TruthAssignment
    state: StateVector


def trace(entity: LiarEntity, initial: tuple[int, bool], n_steps: int) -> tuple[float, list[TraceStep]]:
    """Measure ``initial`` on psi0, then run ``n_steps`` reasoning steps.

    Returns the probability of the initial outcome and one step per state,
    the collapsed state first.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    sentence, value = initial
    prob, state = measure(entity, sentence, value)
    steps = [TraceStep(assignment_of(entity, state), state)]
    for _ in range(n_steps):
        state = reasoning_step(entity, state)
        steps.append(TraceStep(assignment_of(entity, state), state))
    return prob, steps


def truth_cycle(entity: LiarEntity, initial: tuple[int, bool], n_steps: int) -> list[TruthAssignment]:
    return [s.assignment for s in trace(entity, initial, n_steps)[1]]


def parse_start(text: str) -> tuple[int, bool]:
    """Parse ``"1:true"`` / ``"2:F"`` into ``(sentence, value)``."""
    try:
        s, v = text.split(":")
        sentence = int(s)
    except ValueError:
        raise ValueError(f"start must look like 1:true, got {text!r}") from None
    v = v.strip().lower()
    if sentence not in (1, 2) or v not in ("true", "false", "t", "f"):
        raise ValueError(f"start must look like 1:true, got {text!r}")
    return sentence, v.startswith("t")
