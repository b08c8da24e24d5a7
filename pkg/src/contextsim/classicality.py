"""Classical (hidden-variable) representability of CHSH statistics.

Two questions are answered by linear feasibility over deterministic atoms:

* ``correlation_membership``: is a correlation vector a convex combination
  of the 8 deterministic correlation vertices?
* ``kolmogorov_feasibility``: is there a distribution over the 16 atoms
  reproducing all four pairwise joint distributions?

The CHSH facet scan in ``chsh_facets`` is kept separate from both and is only
used to name the violated inequality and to cross-check the LP.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import rng
from .lp import Feasible, solve_feasibility, solve_feasibility_batch
from .scenario import (
    FLOAT_TOL,
    PAIRS,
    BehaviorTable,
    CoincidenceDistribution,
    CorrelationVector,
    Number,
    ValidationError,
    is_exact,
    correlation_vector,
    pair_key,
)

OUTCOME_PAIRS = (("up", "up"), ("up", "down"), ("down", "up"), ("down", "down"))


@dataclass(frozen=True, order=True)
class HiddenVariableAtom:
    """A deterministic assignment of +1/-1 to observables 1..4."""

    assignment: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.assignment) != 4 or any(v not in (1, -1) for v in self.assignment):
            raise ValueError(f"atom must assign +1/-1 to 4 observables, got {self.assignment}")

    def value(self, observable: int) -> int:
        return self.assignment[observable - 1]

    def outcome(self, observable: int) -> str:
        return "up" if self.value(observable) == 1 else "down"

    def correlations(self) -> tuple[int, int, int, int]:
        return tuple(self.value(i) * self.value(j) for i, j in PAIRS)

    @property
    def label(self) -> str:
        return sign_label(self.assignment)


def sign_label(signs) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def parse_sign_label(label: str) -> tuple[int, ...]:
    return tuple(1 if ch == "+" else -1 for ch in label)


ATOMS: tuple[HiddenVariableAtom, ...] = tuple(
    HiddenVariableAtom(a) for a in itertools.product((1, -1), repeat=4)
)

# CHSH sign patterns with an odd number of minus signs
FACET_SIGNS: tuple[tuple[int, int, int, int], ...] = tuple(
    s for s in itertools.product((1, -1), repeat=4) if s[0] * s[1] * s[2] * s[3] == -1
)


def _vertex_signs() -> tuple[tuple[int, int, int, int], ...]:
    seen = []
    for atom in ATOMS:
        c = atom.correlations()
        if c not in seen:
            seen.append(c)
    return tuple(seen)


VERTEX_SIGNS = _vertex_signs()
_VERTEX_LABELS = tuple(sign_label(v) for v in VERTEX_SIGNS)
_HULL_ROWS = [[v[k] for v in VERTEX_SIGNS] for k in range(4)] + [[1] * len(VERTEX_SIGNS)]


def deterministic_vertices() -> tuple[CorrelationVector, ...]:
    return tuple(CorrelationVector(*(Fraction(v) for v in c)) for c in VERTEX_SIGNS)


def chsh_facets(E: CorrelationVector) -> list[tuple[tuple[int, int, int, int], Number]]:
    if not isinstance(E, CorrelationVector):
        E = CorrelationVector(*E)
    e = E.as_tuple()
    return [(s, sum(si * ei for si, ei in zip(s, e))) for s in FACET_SIGNS]


def max_chsh(E: CorrelationVector) -> tuple[tuple[int, int, int, int], Number]:
    """The most violated facet; ties go to the first in canonical order."""
    best = None
    for s, v in chsh_facets(E):
        if best is None or v > best[1]:
            best = (s, v)
    return best


@dataclass(frozen=True)
class Witness:
    kind: str  # "chsh_facet" | "separating_functional" | "marginal_inconsistency"
    value: Number
    bound: Number
    signs: tuple[int, ...] | None = None
    detail: Mapping = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "value": self.value, "bound": self.bound}
        if self.signs is not None:
            out["signs"] = list(self.signs)
        out.update(self.detail)
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> "Witness":
        d = dict(d)
        kind = d.pop("kind")
        value = d.pop("value")
        bound = d.pop("bound")
        signs = d.pop("signs", None)
        return cls(kind, value, bound, tuple(signs) if signs is not None else None, d)


@dataclass(frozen=True)
class ClassicalityVerdict:
    """Either a classical certificate (``weights``) or a violation ``witness``.

    ``basis`` says what the weights are over: ``"vertices"`` keys are the
    sign pattern of a correlation vertex, ``"atoms"`` keys are the sign
    pattern of a hidden-variable assignment.
    """

    classical: bool
    weights: Mapping[str, Number] | None = None
    basis: str | None = None
    witness: Witness | None = None

    @property
    def label(self) -> str:
        return "classical" if self.classical else "nonclassical"

    def to_dict(self) -> dict:
        if self.classical:
            return {"verdict": "classical", "basis": self.basis, "weights": dict(self.weights)}
        return {"verdict": "nonclassical", "witness": self.witness.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ClassicalityVerdict":
        if d["verdict"] == "classical":
            return cls(True, weights=dict(d["weights"]), basis=d["basis"])
        return cls(False, witness=Witness.from_dict(d["witness"]))


def _tol(exact: bool):
    return 0 if exact else FLOAT_TOL


def _farkas_witness(y, b, labels) -> Witness:
    value = sum(yi * bi for yi, bi in zip(y, b))
    return Witness("separating_functional", value, 0,
                   detail={"coefficients": dict(zip(labels, y))})


def correlation_membership(E: CorrelationVector) -> ClassicalityVerdict:
    if not isinstance(E, CorrelationVector):
        E = CorrelationVector(*E)
    exact = E.exact
    b = list(E.as_tuple()) + [1]
    result = solve_feasibility(_HULL_ROWS, b, exact=exact)
    if isinstance(result, Feasible):
        weights = dict(zip(_VERTEX_LABELS, result.x))
        return ClassicalityVerdict(True, weights=weights, basis="vertices")
    signs, value = max_chsh(E)
    if value > 2 + _tol(exact):
        return ClassicalityVerdict(False, witness=Witness("chsh_facet", value, 2, signs))
    return ClassicalityVerdict(
        False, witness=_farkas_witness(result.y, b, ["e13", "e14", "e23", "e24", "norm"])
    )


def marginal_inconsistency(table: BehaviorTable) -> Witness | None:
    """Compare each observable's up-probability across the two pairs containing it."""
    tol = _tol(table.exact)
    for obs in (1, 2, 3, 4):
        seen = []
        for pair in PAIRS:
            if obs in pair:
                side = "left" if pair[0] == obs else "right"
                seen.append((pair, table[pair].marginal_up(side)))
        (p1, m1), (p2, m2) = seen
        if abs(m1 - m2) > tol:
            return Witness(
                "marginal_inconsistency", abs(m1 - m2), 0,
                detail={"observable": obs,
                        "pairs": [pair_key(p1), pair_key(p2)],
                        "p_up": [m1, m2]},
            )
    return None


def _atom_constraints():
    rows, labels = [], []
    for pair in PAIRS:
        i, j = pair
        for a, b in OUTCOME_PAIRS:
            rows.append([int(atom.outcome(i) == a and atom.outcome(j) == b) for atom in ATOMS])
            labels.append(f"{pair_key(pair)}:{a[0]}{b[0]}")
    rows.append([1] * len(ATOMS))
    labels.append("norm")
    return rows, labels


_ATOM_ROWS, _ATOM_LABELS = _atom_constraints()


def kolmogorov_feasibility(table: BehaviorTable) -> ClassicalityVerdict:
    exact = table.exact
    witness = marginal_inconsistency(table)
    if witness is not None:
        return ClassicalityVerdict(False, witness=witness)
    b = [table[p].prob(a, c) for p in PAIRS for a, c in OUTCOME_PAIRS] + [1]
    result = solve_feasibility(_ATOM_ROWS, b, exact=exact)
    if isinstance(result, Feasible):
        weights = {atom.label: w for atom, w in zip(ATOMS, result.x)}
        return ClassicalityVerdict(True, weights=weights, basis="atoms")
    farkas = _farkas_witness(result.y, b, _ATOM_LABELS)
    signs, value = max_chsh(correlation_vector(table))
    if value > 2 + _tol(exact):
        return ClassicalityVerdict(False, witness=Witness(
            "chsh_facet", value, 2, signs,
            detail={"separating_functional": farkas.detail["coefficients"]}))
    return ClassicalityVerdict(False, witness=farkas)


# --- certificate reconstruction -------------------------------------------

def correlations_from_weights(weights: Mapping[str, Number]) -> tuple:
    """Correlation vector implied by vertex weights."""
    out = [0, 0, 0, 0]
    for label, w in weights.items():
        signs = parse_sign_label(label)
        for k in range(4):
            out[k] += w * signs[k]
    return tuple(out)


def table_from_atoms(weights: Mapping[str, Number]) -> BehaviorTable:
    """Behavior table induced by a distribution over hidden-variable atoms."""
    exact = all(is_exact(w) for w in weights.values())
    zero = Fraction(0) if exact else 0.0
    dists = {}
    for pair in PAIRS:
        i, j = pair
        probs = {o: zero for o in OUTCOME_PAIRS}
        for label, w in weights.items():
            atom = HiddenVariableAtom(parse_sign_label(label))
            probs[(atom.outcome(i), atom.outcome(j))] += w
        if not exact:
            # float round-off must not trip the sum check
            total = sum(probs.values())
            probs = {k: v / total for k, v in probs.items()}
        dists[pair] = CoincidenceDistribution(*(probs[o] for o in OUTCOME_PAIRS))
    return BehaviorTable(dists)


def reconstruction_error(table: BehaviorTable, verdict: ClassicalityVerdict) -> Number:
    """Largest absolute gap between the table and the one implied by the atom weights."""
    if not verdict.classical or verdict.basis != "atoms":
        raise ValueError("need a classical verdict over atoms")
    rebuilt = table_from_atoms(verdict.weights)
    return max(abs(table[p].prob(a, b) - rebuilt[p].prob(a, b)) for p in PAIRS for a, b in OUTCOME_PAIRS)


# --- LP vs facet cross-check ------------------------------------------------

def membership_batch(vectors) -> np.ndarray:
    """Float hull membership for an ``(k, 4)`` array of correlation vectors."""
    vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
    if np.any(np.abs(vecs) > 1):
        raise ValidationError("correlation components must lie in [-1, 1]")
    b = np.hstack([vecs, np.ones((vecs.shape[0], 1))])
    feasible, _, _ = solve_feasibility_batch(_HULL_ROWS, b)
    return feasible


def facet_batch(vectors) -> np.ndarray:
    """Max over the 8 CHSH facets, row by row."""
    vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
    return (vecs @ np.array(FACET_SIGNS, dtype=float).T).max(axis=1)


def random_vectors(seed: int, start: int, stop: int) -> np.ndarray:
    """Rows ``start:stop`` of the seeded stream of uniform vectors in [-1, 1]^4."""
    key = rng.stream_key(seed, "facet-crosscheck")
    u = rng.uniforms(key, np.arange(4 * start, 4 * stop, dtype=np.uint64))
    return (2.0 * u - 1.0).reshape(stop - start, 4)


def _check_block(seed: int, start: int, stop: int) -> list[int]:
    vecs = random_vectors(seed, start, stop)
    by_lp = membership_batch(vecs)
    by_facets = facet_batch(vecs) <= 2 + FLOAT_TOL
    return [start + int(i) for i in np.flatnonzero(by_lp != by_facets)]


def facet_cross_check(n: int, seed: int = 0, workers: int = 1, block: int = 8192) -> list[int]:
    """Indices of random vectors in [-1, 1]^4 where LP membership and the facet scan disagree."""
    blocks = [(s, min(s + block, n)) for s in range(0, n, block)]
    if workers <= 1:
        parts = [_check_block(seed, a, b) for a, b in blocks]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda ab: _check_block(seed, *ab), blocks))
    return [i for part in parts for i in part]
