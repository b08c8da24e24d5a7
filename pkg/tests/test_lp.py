from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog

from contextsim.lp import Feasible, Infeasible, solve_feasibility, solve_feasibility_batch


def check_certificate(A, b, result, exact=True):
    if isinstance(result, Feasible):
        x = result.x
        assert all(v >= 0 for v in x)
        for row, bi in zip(A, b):
            lhs = sum(a * v for a, v in zip(row, x))
            if exact:
                assert lhs == bi
            else:
                assert abs(lhs - bi) < 1e-9
    else:
        y = result.y
        for j in range(len(A[0])):
            col = sum(y[i] * A[i][j] for i in range(len(A)))
            assert col <= (0 if exact else 1e-9)
        assert sum(yi * bi for yi, bi in zip(y, b)) > 0


def test_simple_feasible():
    A = [[1, 1, 0], [0, 1, 1]]
    b = [F(1), F(1, 2)]
    r = solve_feasibility(A, b)
    assert isinstance(r, Feasible)
    check_certificate(A, b, r)


def test_simple_infeasible_has_farkas_vector():
    A = [[1, 1], [1, 1]]
    b = [F(1), F(2)]
    r = solve_feasibility(A, b)
    assert isinstance(r, Infeasible)
    check_certificate(A, b, r)


def test_negative_rhs_is_handled():
    A = [[-1, 0], [0, 1]]
    b = [F(-1, 3), F(2)]
    r = solve_feasibility(A, b)
    assert r.x == [F(1, 3), F(2)]


def test_redundant_rows():
    A = [[1, 1], [2, 2], [1, 1]]
    b = [F(1), F(2), F(1)]
    r = solve_feasibility(A, b)
    assert isinstance(r, Feasible)
    check_certificate(A, b, r)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        solve_feasibility([[1, 2]], [1, 2])


def test_agrees_with_scipy_on_random_systems():
    rng = np.random.default_rng(11)
    for _ in range(300):
        m, n = rng.integers(1, 5), rng.integers(1, 7)
        A = rng.integers(-3, 4, size=(m, n)).tolist()
        b = rng.integers(-4, 5, size=m).tolist()
        r = solve_feasibility(A, [F(v) for v in b])
        ref = linprog(np.zeros(n), A_eq=A, b_eq=b, bounds=[(0, None)] * n, method="highs")
        assert isinstance(r, Feasible) == (ref.status == 0)
        check_certificate(A, [F(v) for v in b], r)


def test_float_mode_certificates():
    rng = np.random.default_rng(5)
    for _ in range(200):
        A = rng.integers(-2, 3, size=(3, 5)).tolist()
        b = rng.uniform(-1, 1, size=3).tolist()
        r = solve_feasibility(A, b, exact=False)
        ref = linprog(np.zeros(5), A_eq=A, b_eq=b, bounds=[(0, None)] * 5, method="highs")
        assert isinstance(r, Feasible) == (ref.status == 0)
        check_certificate(A, b, r, exact=False)


def test_batch_matches_scalar():
    rng = np.random.default_rng(9)
    A = rng.integers(-2, 3, size=(4, 7)).tolist()
    B = rng.uniform(-1, 1, size=(500, 4))
    feasible, x, y = solve_feasibility_batch(A, B)
    for k in range(len(B)):
        r = solve_feasibility(A, B[k].tolist(), exact=False)
        assert feasible[k] == isinstance(r, Feasible)
        if feasible[k]:
            assert np.allclose(np.array(A) @ x[k], B[k], atol=1e-9)
            assert (x[k] >= 0).all()
        else:
            assert (y[k] @ np.array(A) <= 1e-9).all()
            assert y[k] @ B[k] > 0
