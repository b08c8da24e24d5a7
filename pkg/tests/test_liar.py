import numpy as np
import pytest

from contextsim.liar import (
    CYCLE_A,
    DOWN,
    UP,
    LiarVariant,
    Truth,
    TruthAssignment,
    assignment_of,
    build_entity,
    double_liar_hamiltonian,
    measure,
    parse_start,
    reasoning_step,
    truth_cycle,
)
from contextsim.quantum import ImpossibleOutcome, StateVector, born_probability, tensor_state

T, F, L = Truth.TRUE, Truth.FALSE, Truth.LATENT
R2 = 1 / np.sqrt(2)


def labels(entity, start, n):
    return [a.label for a in truth_cycle(entity, start, n)]


def test_singlet_amplitudes():
    C = build_entity("C")
    assert np.allclose(C.psi0.amplitudes, [0, R2, -R2, 0], atol=1e-15)
    B = build_entity("B")
    assert np.allclose(B.psi0.amplitudes, [R2, 0, 0, R2], atol=1e-15)


def test_double_liar_psi0_components():
    A = build_entity("A")
    amps = A.psi0.amplitudes
    assert A.space_dim == 16
    assert np.count_nonzero(amps) == 4
    assert np.allclose(amps[amps != 0], 0.5)
    # e3(x)e2, e2(x)e4, e4(x)e1, e1(x)e3 in 0-based Kronecker positions
    assert sorted(np.flatnonzero(amps).tolist()) == sorted([2 * 4 + 1, 1 * 4 + 3, 3 * 4 + 0, 0 * 4 + 2])


def test_hamiltonian_annihilates_psi0():
    A = build_entity("A")
    assert np.abs(A.hamiltonian.matrix @ A.psi0.amplitudes).max() < 1e-12


def test_hamiltonian_spectrum_and_complement():
    H = double_liar_hamiltonian()
    w = np.sort(np.linalg.eigvalsh(H.matrix))
    expected = np.sort([-np.pi / 2, 0, np.pi / 2, np.pi] + [0] * 12)
    assert np.allclose(w, expected, atol=1e-12)
    # zero on the orthogonal complement of the cycle span
    other = StateVector.basis(16, 1)
    assert np.abs(H.matrix @ other.amplitudes).max() < 1e-12


@pytest.mark.parametrize("tau", [0.5, 1.0, 3.0])
def test_step_time_scales_hamiltonian(tau):
    A = build_entity("A", step_time=tau)
    assert A.step_time == tau
    assert reasoning_step(A, CYCLE_A[0]).close_to(CYCLE_A[1])


def test_measure_examples():
    A = build_entity("A")
    p, post = measure(A, 1, True)
    assert p == pytest.approx(0.25, abs=1e-12)
    assert post.close_to(CYCLE_A[0], 1e-12)
    C = build_entity("C")
    p, post = measure(C, 1, True)
    assert p == pytest.approx(0.5, abs=1e-12)
    assert post.close_to(tensor_state(UP, DOWN), 1e-12)
    assert born_probability(C.projector(2, False), post) == pytest.approx(1, abs=1e-12)
    B = build_entity("B")
    _, post = measure(B, 1, True)
    assert post.close_to(tensor_state(UP, UP), 1e-12)
    assert assignment_of(B, post) == TruthAssignment(T, T)


def test_measure_impossible_outcome():
    C = build_entity("C")
    _, post = measure(C, 1, True)
    with pytest.raises(ImpossibleOutcome):
        measure(C, 2, True, state=post)


def test_reasoning_step_examples():
    A = build_entity("A")
    state = CYCLE_A[0]
    for k in range(1, 5):
        state = reasoning_step(A, state)
        assert state.close_to(CYCLE_A[k % 4], 1e-10)
    C = build_entity("C")
    ud, du = tensor_state(UP, DOWN), tensor_state(DOWN, UP)
    assert reasoning_step(C, ud).close_to(du)
    assert reasoning_step(C, reasoning_step(C, ud)).close_to(ud)
    B = build_entity("B")
    uu = tensor_state(UP, UP)
    assert reasoning_step(B, uu).close_to(uu)


@pytest.mark.parametrize("variant", ["B", "C"])
def test_two_qubit_hamiltonian_generates_step(variant):
    from scipy.linalg import expm

    e = build_entity(variant, step_time=2.0)
    U = expm(-1j * e.hamiltonian.matrix * e.step_time)
    assert np.allclose(U, e.step_operator, atol=1e-12)


def test_truth_cycle_examples():
    A = build_entity("A")
    assert labels(A, (1, True), 4) == ["1T", "2F", "1F", "2T", "1T"]
    assert truth_cycle(A, (1, True), 0) == [TruthAssignment(T, L)]
    C = build_entity("C")
    assert truth_cycle(C, (1, True), 2) == [TruthAssignment(T, F), TruthAssignment(F, T), TruthAssignment(T, F)]
    B = build_entity("B")
    assert labels(B, (1, False), 3) == ["FF"] * 4


@pytest.mark.parametrize("start, first", [((1, True), "1T"), ((2, False), "2F"),
                                          ((1, False), "1F"), ((2, True), "2T")])
def test_double_liar_cycle_from_every_start(start, first):
    order = ["1T", "2F", "1F", "2T"]
    got = labels(build_entity("A"), start, 8)
    k = order.index(first)
    assert got == [order[(k + i) % 4] for i in range(9)]


def test_assignment_examples():
    A = build_entity("A")
    assert assignment_of(A, CYCLE_A[1]) == TruthAssignment(L, F)
    assert assignment_of(A, A.psi0) == TruthAssignment(L, L)
    C = build_entity("C")
    assert assignment_of(C, tensor_state(UP, DOWN)) == TruthAssignment(T, F)


def test_cycle_states_orthogonal():
    for i in range(4):
        for j in range(4):
            assert abs(CYCLE_A[i].inner(CYCLE_A[j])) == (1 if i == j else 0)


def test_projectors_commute_across_sentences():
    for variant in "ABC":
        e = build_entity(variant)
        for v in (True, False):
            for w in (True, False):
                P, Q = e.projector(1, v).matrix, e.projector(2, w).matrix
                assert np.allclose(P @ Q, Q @ P, atol=1e-12)


def test_singlet_invariant_as_ray():
    C = build_entity("C")
    assert abs(abs(C.psi0.inner(reasoning_step(C, C.psi0))) - 1) < 1e-12


def test_parse_start():
    assert parse_start("1:true") == (1, True)
    assert parse_start("2:F") == (2, False)
    for bad in ("3:true", "1-true", "1:maybe"):
        with pytest.raises(ValueError):
            parse_start(bad)
    assert LiarVariant("A") is LiarVariant.A
