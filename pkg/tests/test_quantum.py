import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contextsim.liar import build_entity
from contextsim.quantum import (
    HermitianOperator,
    ImpossibleOutcome,
    ProjectorOperator,
    StateVector,
    born_probability,
    collapse,
    evolve,
    identity,
    tensor_operator,
    tensor_state,
)

UP = StateVector([1, 0])
DOWN = StateVector([0, 1])


def test_tensor_state_indexing():
    assert np.array_equal(tensor_state(UP, DOWN).amplitudes, [0, 1, 0, 0])
    assert tensor_state(UP, DOWN).inner(tensor_state(DOWN, UP)) == 0
    e = [StateVector.basis(4, k) for k in (1, 2, 3, 4)]
    assert tensor_state(e[0], e[1]).dim == 16
    # (i, j) -> i * dim(b) + j
    assert np.flatnonzero(tensor_state(e[2], e[1]).amplitudes).tolist() == [2 * 4 + 1]


def test_empty_state_rejected():
    with pytest.raises(ValueError):
        StateVector([])


def test_tensor_operator_examples():
    P_up = ProjectorOperator.diagonal([1, 0])
    P_down = ProjectorOperator.diagonal([0, 1])
    psi = tensor_state(UP, DOWN)
    op = tensor_operator(P_up, identity(2))
    assert isinstance(op, ProjectorOperator)
    assert op.apply(psi).close_to(psi)
    assert tensor_operator(P_down, identity(2)).apply(psi).norm == 0
    P = tensor_operator(ProjectorOperator.diagonal([0, 0, 1, 0]), identity(4))
    psi0 = build_entity("A").psi0
    assert P.apply(psi0).norm ** 2 == pytest.approx(0.25, abs=1e-15)


def test_operator_dimension_mismatch():
    with pytest.raises(ValueError):
        identity(4).apply(UP)


def test_born_probability_examples():
    psi0 = build_entity("A").psi0
    assert born_probability(identity(16), psi0) == pytest.approx(1, abs=1e-12)
    P1T = build_entity("A").projector(1, True)
    assert born_probability(P1T, psi0) == pytest.approx(0.25, abs=1e-12)
    assert born_probability(ProjectorOperator.diagonal([0, 1]), UP) == 0


def test_collapse_examples():
    A = build_entity("A")
    post = collapse(A.projector(1, True), A.psi0)
    expected = tensor_state(StateVector.basis(4, 3), StateVector.basis(4, 2))
    assert post.close_to(expected, 1e-12)
    C = build_entity("C")
    assert collapse(C.projector(1, True), C.psi0).close_to(tensor_state(UP, DOWN), 1e-12)
    with pytest.raises(ImpossibleOutcome):
        collapse(ProjectorOperator.diagonal([0, 1]), UP)


def test_operator_validation():
    with pytest.raises(ValueError, match="Hermitian"):
        HermitianOperator([[0, 1], [0, 0]])
    with pytest.raises(ValueError, match="idempotent"):
        ProjectorOperator([[2, 0], [0, 0]])


def test_evolve_trivial_cases():
    rng = np.random.default_rng(0)
    psi = StateVector(rng.normal(size=3) + 1j * rng.normal(size=3)).normalized()
    H = HermitianOperator(np.diag([1.0, -2.0, 0.5]))
    assert evolve(H, 0.0, psi).close_to(psi, 1e-14)
    Z = HermitianOperator(np.zeros((3, 3)))
    for t in (0.1, 5.0, -3.0):
        assert evolve(Z, t, psi).close_to(psi, 1e-14)


def test_evolve_matches_scipy_expm():
    from scipy.linalg import expm

    rng = np.random.default_rng(1)
    M = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    H = HermitianOperator((M + M.conj().T) / 2)
    psi = StateVector(rng.normal(size=5) + 0j).normalized()
    ref = expm(-1j * H.matrix * 0.7) @ psi.amplitudes
    assert np.allclose(evolve(H, 0.7, psi).amplitudes, ref, atol=1e-12)


def test_evolve_keeps_psi0_fixed():
    A = build_entity("A")
    for t in (0.3, 1, 7.77):
        assert evolve(A.hamiltonian, t, A.psi0).close_to(A.psi0, 1e-10)


def test_state_json_round_trip():
    psi = StateVector([0.6, 0.8j])
    assert np.array_equal(StateVector.from_json(psi.to_json()).amplitudes, psi.amplitudes)
    H = HermitianOperator([[1, 1j], [-1j, 2]])
    assert np.array_equal(HermitianOperator.from_json(H.to_json()).matrix, H.matrix)


# --- properties ---------------------------------------------------------------

def random_hermitian(seed, dim):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator((M + M.conj().T) / 2)


def random_state(seed, dim):
    rng = np.random.default_rng(seed)
    return StateVector(rng.normal(size=dim) + 1j * rng.normal(size=dim)).normalized()


def random_projector(seed, dim, rank):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    Q, _ = np.linalg.qr(M)
    return ProjectorOperator(Q @ Q.conj().T)


seeds = st.integers(0, 2 ** 32 - 1)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 8), st.floats(-50, 50), st.floats(-50, 50))
def test_unitarity_and_group_law(seed, dim, s, t):
    H = random_hermitian(seed, dim)
    psi = random_state(seed + 1, dim)
    out = evolve(H, t, psi)
    assert abs(out.norm - 1) < 1e-10
    assert evolve(H, s, out).close_to(evolve(H, s + t, psi), 1e-10)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 8), st.data())
def test_projector_calculus(seed, dim, data):
    rank = data.draw(st.integers(0, dim))
    P = random_projector(seed, dim, rank) if rank else ProjectorOperator(np.zeros((dim, dim)))
    psi = random_state(seed + 2, dim)
    assert np.allclose(P.matrix @ P.matrix, P.matrix, atol=1e-12)
    assert born_probability(P, psi) + born_probability(P.complement(), psi) == pytest.approx(1, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_tensor_mixed_product(seed, da, db):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(da, da)) + 1j * rng.normal(size=(da, da))
    B = rng.normal(size=(db, db)) + 1j * rng.normal(size=(db, db))
    x = StateVector(rng.normal(size=da) + 0j)
    y = StateVector(rng.normal(size=db) + 0j)
    lhs = tensor_operator(A, B).apply(tensor_state(x, y))
    rhs = tensor_state(StateVector(A @ x.amplitudes), StateVector(B @ y.amplitudes))
    assert np.allclose(lhs.amplitudes, rhs.amplitudes, atol=1e-12)
