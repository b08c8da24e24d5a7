"""Seeded samplers for the connected-vessels and bribed-soccer-teams entities.

Each trial of each coincidence experiment draws from its own counter-based
stream keyed by ``(seed, entity, pair)``, so results do not depend on
chunking or thread count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import rng
from .classicality import correlation_membership, kolmogorov_feasibility
from .scenario import (
    PAIRS,
    ValidationError,
    bell_verdict,
    correlation_vector,
    pair_key,
    table_from_counts,
)

ENTITIES = ("vessels", "soccer")


@dataclass(frozen=True)
class SplitDistribution:
    """Law of the volume collected on the left when both siphons run.

    ``kind`` is ``"uniform"`` on ``[0, total]``, ``"point"`` (always ``value``)
    or ``"discrete"`` (``values`` with ``weights``).
    """

    kind: str = "uniform"
    value: float | None = None
    values: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()

    def validate(self, total: float) -> None:
        if self.kind == "uniform":
            return
        if self.kind == "point":
            if self.value is None or not 0 <= self.value <= total:
                raise ValidationError(f"point split must lie in [0, {total}]", field="split_distribution.value")
        elif self.kind == "discrete":
            if not self.values or len(self.values) != len(self.weights):
                raise ValidationError("discrete split needs matching values and weights",
                                      field="split_distribution.values")
            if any(not 0 <= v <= total for v in self.values):
                raise ValidationError(f"split values must lie in [0, {total}]", field="split_distribution.values")
            if any(w < 0 for w in self.weights) or sum(self.weights) <= 0:
                raise ValidationError("split weights must be nonnegative with positive sum",
                                      field="split_distribution.weights")
        else:
            raise ValidationError(f"unknown split kind {self.kind!r}", field="split_distribution.kind")

    def draw(self, u: np.ndarray, total: float) -> np.ndarray:
        if self.kind == "uniform":
            return u * total
        if self.kind == "point":
            return np.full(u.shape, float(self.value))
        cdf = np.cumsum(self.weights) / np.sum(self.weights)
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(self.values) - 1)
        return np.asarray(self.values, dtype=float)[idx]

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "point":
            out["value"] = self.value
        elif self.kind == "discrete":
            out["values"] = list(self.values)
            out["weights"] = list(self.weights)
        return out

    @classmethod
    def from_dict(cls, d: Mapping | str) -> "SplitDistribution":
        if isinstance(d, str):
            return cls(kind=d)
        return cls(kind=d.get("kind", "uniform"), value=d.get("value"),
                   values=tuple(d.get("values", ())), weights=tuple(d.get("weights", ())))


@dataclass(frozen=True)
class VesselsConfig:
    """Two connected vessels holding ``total_volume`` liters (default 20)."""

    total_volume: float = 20
    threshold: float = 10
    split_distribution: SplitDistribution = field(default_factory=SplitDistribution)
    transparent: bool = True

    def __post_init__(self):
        if not 0 < self.threshold < self.total_volume:
            raise ValidationError("need 0 < threshold < total_volume", field="threshold")
        self.split_distribution.validate(self.total_volume)

    def to_dict(self) -> dict:
        return {"total_volume": self.total_volume, "threshold": self.threshold,
                "split_distribution": self.split_distribution.to_dict(),
                "transparent": self.transparent}

    @classmethod
    def from_dict(cls, d: Mapping) -> "VesselsConfig":
        d = dict(d)
        unknown = set(d) - {"total_volume", "threshold", "split_distribution", "transparent"}
        if unknown:
            raise ValidationError(f"unknown vessels config field(s) {sorted(unknown)}", field=sorted(unknown)[0])
        if "split_distribution" in d:
            d["split_distribution"] = SplitDistribution.from_dict(d["split_distribution"])
        return cls(**d)


@dataclass(frozen=True)
class Bribe:
    amount: int | float
    player_wealth: int | float

    def __post_init__(self):
        if self.amount < 0 or self.player_wealth < 0:
            raise ValidationError("bribe amount and player wealth must be nonnegative", field="bribe")

    def effectiveness(self) -> Fraction:
        """amount / (wealth + 1), exact."""
        return Fraction(self.amount) / (Fraction(self.player_wealth) + 1)


@dataclass(frozen=True)
class SoccerConfig:
    """Defaults: a billion to a very poor team-A player, 100 000 to a rich team-B player."""

    bribe_A: Bribe = field(default_factory=lambda: Bribe(1_000_000_000, 1_000))
    bribe_B: Bribe = field(default_factory=lambda: Bribe(100_000, 10_000_000))
    referee_bad_character: bool = True

    def to_dict(self) -> dict:
        return {"bribe_A": asdict(self.bribe_A), "bribe_B": asdict(self.bribe_B),
                "referee_bad_character": self.referee_bad_character}

    @classmethod
    def from_dict(cls, d: Mapping) -> "SoccerConfig":
        d = dict(d)
        unknown = set(d) - {"bribe_A", "bribe_B", "referee_bad_character"}
        if unknown:
            raise ValidationError(f"unknown soccer config field(s) {sorted(unknown)}", field=sorted(unknown)[0])
        for k in ("bribe_A", "bribe_B"):
            if k in d:
                try:
                    d[k] = Bribe(**d[k])
                except TypeError as exc:
                    raise ValidationError(f"{k}: {exc}", field=k) from None
        return cls(**d)


def default_config(entity: str):
    return {"vessels": VesselsConfig, "soccer": SoccerConfig}[entity]()


def config_from_dict(entity: str, d: Mapping):
    if not isinstance(d, Mapping):
        raise ValidationError("config must be a JSON object", field="config")
    loader = {"vessels": VesselsConfig.from_dict, "soccer": SoccerConfig.from_dict}.get(entity)
    if loader is None:
        raise ValidationError(f"unknown entity {entity!r}", field="entity")
    try:
        return loader(d)
    except (TypeError, AttributeError) as exc:
        raise ValidationError(f"bad {entity} config: {exc}", field="config") from None


@dataclass(frozen=True)
class OutcomePair:
    pair: tuple[int, int]
    left: str
    right: str

    def __post_init__(self):
        if tuple(self.pair) not in PAIRS:
            raise ValidationError(f"pair {self.pair} is not compatible", field="pair")


@dataclass(frozen=True)
class RunSpec:
    trials: int
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError("trials must be at least 1", field="trials")
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed must be an unsigned 64-bit integer", field="seed")


# --- vectorised outcome logic -------------------------------------------------
# Each block sampler returns boolean arrays (left_up, right_up) for trials
# start..stop-1. "up" is True.

def _uniforms(seed, entity, pair, start, stop):
    return rng.uniform_block(seed, (entity, pair_key(pair)), start, stop)


def vessels_block(config: VesselsConfig, pair, start: int, stop: int, seed: int):
    n = stop - start
    total, thr = config.total_volume, config.threshold
    if pair == (1, 3):
        x = config.split_distribution.draw(_uniforms(seed, "vessels", pair, start, stop), total)
        return x > thr, (total - x) >= thr
    siphon_alone = np.full(n, total > thr)
    spoon = np.full(n, bool(config.transparent))
    if pair == (1, 4):
        return siphon_alone, spoon
    if pair == (2, 3):
        return spoon, np.full(n, total >= thr)
    return spoon, spoon.copy()


def soccer_block(config: SoccerConfig, pair, start: int, stop: int, seed: int):
    n = stop - start
    referee = np.full(n, bool(config.referee_bad_character))
    if pair == (1, 3):
        a, b = config.bribe_A.effectiveness(), config.bribe_B.effectiveness()
        if a > b:
            a_loses = np.ones(n, dtype=bool)
        elif b > a:
            a_loses = np.zeros(n, dtype=bool)
        else:
            a_loses = _uniforms(seed, "soccer", pair, start, stop) < 0.5
        return a_loses, ~a_loses
    bribed_alone = np.ones(n, dtype=bool)
    if pair == (1, 4):
        return bribed_alone, referee
    if pair == (2, 3):
        return referee, bribed_alone
    return referee, referee.copy()


_BLOCKS = {"vessels": vessels_block, "soccer": soccer_block}


def _check_pair(pair):
    pair = tuple(pair)
    if pair not in PAIRS:
        raise ValidationError(f"pair {pair} is not compatible", field="pair")
    return pair


def _single(entity, config, pair, trial_index, seed) -> OutcomePair:
    pair = _check_pair(pair)
    left, right = _BLOCKS[entity](config, pair, trial_index, trial_index + 1, seed)
    return OutcomePair(pair, "up" if left[0] else "down", "up" if right[0] else "down")


def vessels_sample(config: VesselsConfig, pair, trial_index: int, seed: int) -> OutcomePair:
    return _single("vessels", config, pair, trial_index, seed)


def soccer_sample(config: SoccerConfig, pair, trial_index: int, seed: int) -> OutcomePair:
    return _single("soccer", config, pair, trial_index, seed)


def sample_outcomes(entity: str, config, pair, start: int, stop: int, seed: int):
    """Boolean ``(left_up, right_up)`` arrays for trials ``start..stop-1``."""
    return _BLOCKS[entity](config, _check_pair(pair), start, stop, seed)


def count_block(entity: str, config, pair, start: int, stop: int, seed: int) -> dict[str, int]:
    left, right = sample_outcomes(entity, config, pair, start, stop, seed)
    return {
        "uu": int(np.count_nonzero(left & right)),
        "ud": int(np.count_nonzero(left & ~right)),
        "du": int(np.count_nonzero(~left & right)),
        "dd": int(np.count_nonzero(~left & ~right)),
    }


def simulate_counts(entity: str, config, runspec: RunSpec, workers: int = 1,
                    chunk: int = 65536) -> dict[tuple[int, int], dict[str, int]]:
    """Outcome counts for ``runspec.trials`` trials of each coincidence experiment."""
    if entity not in _BLOCKS:
        raise ValidationError(f"unknown entity {entity!r}", field="entity")
    jobs = [(pair, s, min(s + chunk, runspec.trials))
            for pair in PAIRS for s in range(0, runspec.trials, chunk)]

    def run(job):
        pair, a, b = job
        return pair, count_block(entity, config, pair, a, b, runspec.seed)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    counts = {p: {"uu": 0, "ud": 0, "du": 0, "dd": 0} for p in PAIRS}
    for pair, c in results:
        for k, v in c.items():
            counts[pair][k] += v
    return counts


def run_entity(entity: str, config=None, runspec: RunSpec | None = None, workers: int = 1):
    """Sample every coincidence experiment and evaluate the CHSH pipeline."""
    from .report import SimulationReport

    if entity not in _BLOCKS:
        raise ValidationError(f"unknown entity {entity!r}", field="entity")
    config = default_config(entity) if config is None else config
    runspec = RunSpec(trials=10_000) if runspec is None else runspec
    counts = simulate_counts(entity, config, runspec, workers=workers)
    table = table_from_counts(counts)
    E = correlation_vector(table)
    verdict = bell_verdict(E)
    return SimulationReport(
        entity=entity,
        config=config.to_dict(),
        seed=runspec.seed,
        trials=runspec.trials,
        counts=counts,
        correlations=E,
        bell_value=verdict.value,
        bell_violated=verdict.violated,
        classicality=correlation_membership(E),
        kolmogorov=kolmogorov_feasibility(table),
    )
