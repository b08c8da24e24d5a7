"""The four-observable coincidence scenario, behavior tables and the CHSH functional.

Outcomes are encoded up -> +1, down -> -1. Probabilities may be exact
(``Fraction``/``int``) or ``float``; exact inputs stay exact all the way
through ``expectation`` and ``bell_quantity``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[Fraction, float]

FLOAT_TOL = 1e-9

OBSERVABLES = (1, 2, 3, 4)
PAIRS = ((1, 3), (1, 4), (2, 3), (2, 4))
OUTCOMES = ("up", "down")
SIGN = {"up": 1, "down": -1}


class ValidationError(ValueError):
    """Input breaks a data invariant. ``field`` names the offending entry."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


def is_exact(x) -> bool:
    if type(x) is float:
        return False
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def as_number(x) -> Number:
    """Coerce ints and ``"p/q"`` strings to ``Fraction``; floats stay floats."""
    if type(x) is float or type(x) is Fraction:
        return x
    if isinstance(x, bool):
        raise ValidationError(f"boolean is not a probability: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"not a rational literal: {x!r}") from None
    raise ValidationError(f"unsupported number type {type(x).__name__}")


def pair_key(pair: tuple[int, int]) -> str:
    return f"{pair[0]}{pair[1]}"


def parse_pair(key) -> tuple[int, int]:
    if isinstance(key, tuple):
        pair = tuple(int(k) for k in key)
    else:
        s = str(key).replace(",", "").replace("(", "").replace(")", "").strip()
        if len(s) != 2 or not s.isdigit():
            raise ValidationError(f"bad pair key {key!r}", field=str(key))
        pair = (int(s[0]), int(s[1]))
    if pair not in PAIRS:
        raise ValidationError(f"pair {pair} is not a compatible pair", field=str(key))
    return pair


@dataclass(frozen=True)
class Scenario:
    """The CHSH compatibility structure: left observables 1, 2 and right observables 3, 4."""

    observables: tuple[int, ...] = OBSERVABLES
    compatible_pairs: tuple[tuple[int, int], ...] = PAIRS

    def __post_init__(self):
        if tuple(self.observables) != OBSERVABLES:
            raise ValidationError("scenario must have observables 1..4", field="observables")
        if set(self.compatible_pairs) != set(PAIRS) or len(self.compatible_pairs) != 4:
            raise ValidationError(
                "compatible pairs must be exactly (1,3),(1,4),(2,3),(2,4)",
                field="compatible_pairs",
            )


CHSH = Scenario()


@dataclass(frozen=True)
class CoincidenceDistribution:
    p_uu: Number
    p_ud: Number
    p_du: Number
    p_dd: Number

    def __post_init__(self):
        for name in ("p_uu", "p_ud", "p_du", "p_dd"):
            object.__setattr__(self, name, as_number(getattr(self, name)))
        for name, v in self.items():
            if v < 0:
                raise ValidationError(f"{name} is negative ({v})", field=name)
            if v > 1:
                raise ValidationError(f"{name} exceeds 1 ({v})", field=name)
        total = sum(v for _, v in self.items())
        if self.exact:
            if total != 1:
                raise ValidationError(f"probabilities sum to {total}, not 1", field="sum")
        elif abs(total - 1) > FLOAT_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1", field="sum")

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for _, v in self.items())

    def items(self):
        return (("p_uu", self.p_uu), ("p_ud", self.p_ud), ("p_du", self.p_du), ("p_dd", self.p_dd))

    def prob(self, left: str, right: str) -> Number:
        return getattr(self, f"p_{left[0]}{right[0]}")

    def marginal_up(self, side: str) -> Number:
        if side == "left":
            return self.p_uu + self.p_ud
        return self.p_uu + self.p_du

    @classmethod
    def point(cls, left: str, right: str) -> "CoincidenceDistribution":
        probs = {f"p_{a[0]}{b[0]}": Fraction(int(a == left and b == right))
                 for a in OUTCOMES for b in OUTCOMES}
        return cls(**probs)


@dataclass(frozen=True)
class CorrelationVector:
    e13: Number
    e14: Number
    e23: Number
    e24: Number

    def __post_init__(self):
        for name in ("e13", "e14", "e23", "e24"):
            v = as_number(getattr(self, name))
            if not -1 <= v <= 1:
                raise ValidationError(f"{name}={v} outside [-1, 1]", field=name)
            object.__setattr__(self, name, v)

    def as_tuple(self) -> tuple[Number, Number, Number, Number]:
        return (self.e13, self.e14, self.e23, self.e24)

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.as_tuple())

    def __iter__(self):
        return iter(self.as_tuple())


@dataclass(frozen=True)
class BehaviorTable:
    distributions: Mapping[tuple[int, int], CoincidenceDistribution]
    scenario: Scenario = CHSH
    counts: Mapping[tuple[int, int], Mapping[str, int]] | None = field(default=None, compare=False)

    def __post_init__(self):
        keys = set(self.distributions)
        missing = [p for p in PAIRS if p not in keys]
        if missing:
            raise ValidationError(
                "missing pair(s) " + ", ".join(pair_key(p) for p in missing),
                field=pair_key(missing[0]),
            )
        extra = keys - set(PAIRS)
        if extra:
            raise ValidationError(f"unexpected pair(s) {sorted(extra)}", field=str(sorted(extra)[0]))
        object.__setattr__(self, "distributions", {p: self.distributions[p] for p in PAIRS})

    def __getitem__(self, pair) -> CoincidenceDistribution:
        return self.distributions[pair]

    @property
    def exact(self) -> bool:
        return all(d.exact for d in self.distributions.values())

    @classmethod
    def from_mapping(cls, data: Mapping) -> "BehaviorTable":
        """Build from the JSON shape ``{"pairs": {"13": {"uu":..,"ud":..,"du":..,"dd":..}, ...}}``."""
        if not isinstance(data, Mapping) or "pairs" not in data:
            raise ValidationError('table must be an object with a "pairs" member', field="pairs")
        pairs = data["pairs"]
        if not isinstance(pairs, Mapping):
            raise ValidationError('"pairs" must be an object', field="pairs")
        dists = {}
        for key, entry in pairs.items():
            pair = parse_pair(key)
            if not isinstance(entry, Mapping):
                raise ValidationError(f"pair {key} must be an object", field=str(key))
            try:
                probs = {f"p_{o}": entry[o] for o in ("uu", "ud", "du", "dd")}
            except KeyError as exc:
                raise ValidationError(f"pair {key} lacks entry {exc.args[0]}",
                                      field=f"{key}.{exc.args[0]}") from None
            try:
                dists[pair] = CoincidenceDistribution(**probs)
            except ValidationError as exc:
                raise ValidationError(f"pair {key}: {exc}", field=f"{key}.{exc.field}") from None
        return cls(dists)

    def to_mapping(self) -> dict:
        out = {}
        for pair, d in self.distributions.items():
            out[pair_key(pair)] = {name[2:]: v for name, v in d.items()}
        return {"pairs": out}


def expectation(dist: CoincidenceDistribution) -> Number:
    """E = P(uu) + P(dd) - P(ud) - P(du)."""
    return dist.p_uu + dist.p_dd - dist.p_ud - dist.p_du


def correlation_vector(table: BehaviorTable) -> CorrelationVector:
    return CorrelationVector(*(expectation(table[p]) for p in PAIRS))


def bell_quantity(E: CorrelationVector) -> Number:
    if not isinstance(E, CorrelationVector):
        E = CorrelationVector(*E)
    return abs(E.e13 - E.e14) + abs(E.e23 + E.e24)


@dataclass(frozen=True)
class BellVerdict:
    violated: bool
    value: Number

    @property
    def label(self) -> str:
        return "violated" if self.violated else "satisfied"


def bell_verdict(E: CorrelationVector) -> BellVerdict:
    if not isinstance(E, CorrelationVector):
        E = CorrelationVector(*E)
    value = bell_quantity(E)
    tol = 0 if E.exact else FLOAT_TOL
    return BellVerdict(value > 2 + tol, value)


def empirical_table(samples: Iterable[tuple[tuple[int, int], tuple[str, str]]]) -> BehaviorTable:
    """Aggregate ``(pair, (left, right))`` samples into exact relative frequencies."""
    counts: dict[tuple[int, int], Counter] = {p: Counter() for p in PAIRS}
    for pair, (left, right) in samples:
        pair = tuple(pair)
        if pair not in counts:
            raise ValidationError(f"sample on incompatible pair {pair}", field=str(pair))
        if left not in SIGN or right not in SIGN:
            raise ValidationError(f"bad outcome {(left, right)!r}", field=pair_key(pair))
        counts[pair][left[0] + right[0]] += 1
    return table_from_counts(counts)


def table_from_counts(counts: Mapping[tuple[int, int], Mapping[str, int]]) -> BehaviorTable:
    """Counts are keyed by ``"uu"``, ``"ud"``, ``"du"``, ``"dd"``."""
    uncovered = [p for p in PAIRS if sum(counts.get(p, {}).values()) == 0]
    if uncovered:
        raise ValidationError(
            "uncovered pair " + ", ".join(f"({a},{b})" for a, b in uncovered),
            field=pair_key(uncovered[0]),
        )
    dists = {}
    raw = {}
    for p in PAIRS:
        c = {o: int(counts[p].get(o, 0)) for o in ("uu", "ud", "du", "dd")}
        n = sum(c.values())
        dists[p] = CoincidenceDistribution(*(Fraction(c[o], n) for o in ("uu", "ud", "du", "dd")))
        raw[p] = c
    return BehaviorTable(dists, counts=raw)
