"""Dense phase-one simplex for tiny feasibility problems ``A x = b, x >= 0``.

Works over ``Fraction`` (exact) or ``float`` (tolerance ``eps``). Bland's rule
is used throughout, so the method terminates even on the heavily degenerate
systems produced by behavior tables.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

FLOAT_EPS = 1e-9


@dataclass(frozen=True)
class Feasible:
    x: list


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate: ``y @ A <= 0`` column-wise while ``y @ b > 0``."""

    y: list
    residual: object


def solve_feasibility(A: Sequence[Sequence], b: Sequence, exact: bool = True, eps: float = FLOAT_EPS):
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m or any(len(row) != n for row in A):
        raise ValueError("constraint matrix and right-hand side disagree in shape")
    conv = Fraction if exact else float
    tol = 0 if exact else eps
    zero, one = conv(0), conv(1)

    signs = []
    rows = []  # each row carries its right-hand side in the last slot
    for i in range(m):
        s = -1 if b[i] < 0 else 1
        signs.append(s)
        art = [zero] * m
        art[i] = one
        rows.append([conv(a) * s for a in A[i]] + art + [conv(b[i]) * s])
    width = n + m
    basis = list(range(n, width))
    # reduced costs of the phase-one objective sum(artificials); last slot is -objective
    cost = [-c for c in map(sum, zip(*rows))]
    for j in range(n, width):
        cost[j] = zero

    while True:
        enter = next((j for j in range(width) if cost[j] < -tol), -1)
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > tol:
                ratio = rows[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            # cannot happen: the phase-one objective is bounded below by zero
            raise RuntimeError("phase-one simplex reported unbounded")
        piv = rows[leave][enter]
        prow = [v / piv for v in rows[leave]]
        rows[leave] = prow
        for i in range(m):
            if i != leave:
                f = rows[i][enter]
                if f:
                    rows[i] = [a - f * p for a, p in zip(rows[i], prow)]
        f = cost[enter]
        cost = [a - f * p for a, p in zip(cost, prow)]
        basis[leave] = enter

    obj = sum((rows[i][width] for i in range(m) if basis[i] >= n), zero)
    if obj > tol:
        y = [(one - cost[n + i]) * signs[i] for i in range(m)]
        return Infeasible(y=y, residual=obj)
    x = [zero] * n
    for i, j in enumerate(basis):
        if j < n and rows[i][width] > 0:
            x[j] = rows[i][width]
    return Feasible(x=x)


def solve_feasibility_batch(A: Sequence[Sequence], b: np.ndarray, eps: float = FLOAT_EPS,
                            max_pivots: int = 200):
    """Float phase one for many right-hand sides sharing one constraint matrix.

    Same pivot rule as ``solve_feasibility`` in float mode. Returns ``(feasible, x, y)`` with shapes
    ``(k,)``, ``(k, n)`` and ``(k, m)``; ``x`` rows are meaningful where
    ``feasible``, ``y`` rows (Farkas vectors) where not.
    """
    A = np.asarray(A, dtype=float)
    b = np.atleast_2d(np.asarray(b, dtype=float))
    m, n = A.shape
    k = b.shape[0]
    width = n + m
    signs = np.where(b < 0, -1.0, 1.0)
    T = np.zeros((k, m, width + 1))
    T[:, :, :n] = A[None, :, :] * signs[:, :, None]
    T[:, np.arange(m), n + np.arange(m)] = 1.0
    T[:, :, width] = b * signs
    basis = np.tile(np.arange(n, width), (k, 1))
    cost = -T.sum(axis=1)
    cost[:, n:width] = 0.0

    for _ in range(max_pivots):
        neg = cost[:, :width] < -eps
        active = np.flatnonzero(neg.any(axis=1))
        if active.size == 0:
            break
        enter = neg[active].argmax(axis=1)
        Ta = T[active]
        col = Ta[np.arange(active.size), :, enter]
        ok = col > eps
        ratio = np.where(ok, Ta[:, :, width] / np.where(ok, col, 1.0), np.inf)
        best = ratio.min(axis=1)
        tie_key = np.where(ratio == best[:, None], basis[active], width + 1)
        leave = tie_key.argmin(axis=1)
        rows = np.arange(active.size)
        prow = Ta[rows, leave, :] / col[rows, leave][:, None]
        Ta -= col[:, :, None] * prow[:, None, :]
        Ta[rows, leave, :] = prow
        T[active] = Ta
        cost[active] -= cost[active, enter][:, None] * prow
        basis[active, leave] = enter
    else:
        raise RuntimeError("batched simplex exceeded its pivot budget")

    rhs = T[:, :, width]
    obj = np.where(basis >= n, rhs, 0.0).sum(axis=1)
    feasible = obj <= eps
    x = np.zeros((k, n))
    orig = basis < n
    kk, ii = np.nonzero(orig)
    x[kk, basis[kk, ii]] = np.maximum(rhs[kk, ii], 0.0)
    y = (1.0 - cost[:, n:width]) * signs
    return feasible, x, y
