"""Simulation reports and their JSON / CSV / text renderings."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import __version__, canonical
from .classicality import ClassicalityVerdict
from .scenario import (
    PAIRS,
    BehaviorTable,
    CorrelationVector,
    Number,
    expectation,
    pair_key,
    parse_pair,
    table_from_counts,
)

OUTCOME_KEYS = ("uu", "ud", "du", "dd")


def fmt(x: Number) -> str:
    """Human-readable number: exact rationals as p/q, floats compactly."""
    if isinstance(x, Fraction):
        return str(x)
    return format(x, ".12g")


@dataclass(frozen=True)
class SimulationReport:
    entity: str
    config: Mapping
    seed: int
    trials: int
    counts: Mapping[tuple[int, int], Mapping[str, int]]
    correlations: CorrelationVector
    bell_value: Number
    bell_violated: bool
    classicality: ClassicalityVerdict
    kolmogorov: ClassicalityVerdict
    version: str = __version__

    @property
    def table(self) -> BehaviorTable:
        return table_from_counts(self.counts)

    def to_dict(self) -> dict:
        table = self.table
        pairs = {}
        for p in PAIRS:
            d = table[p]
            pairs[pair_key(p)] = {
                "counts": dict(self.counts[p]),
                "p": {k: d.prob(k[0], k[1]) for k in OUTCOME_KEYS},
                "E": expectation(d),
            }
        E = self.correlations
        return {
            "entity": self.entity,
            "config": dict(self.config),
            "seed": self.seed,
            "trials": self.trials,
            "pairs": pairs,
            "correlations": {"e13": E.e13, "e14": E.e14, "e23": E.e23, "e24": E.e24},
            "bell": {"value": self.bell_value, "verdict": "violated" if self.bell_violated else "satisfied"},
            "classicality": self.classicality.to_dict(),
            "kolmogorov": self.kolmogorov.to_dict(),
            "version": self.version,
        }

    def to_json(self) -> str:
        return canonical.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimulationReport":
        counts = {parse_pair(k): {o: int(v["counts"][o]) for o in OUTCOME_KEYS}
                  for k, v in d["pairs"].items()}
        c = d["correlations"]
        return cls(
            entity=d["entity"],
            config=d["config"],
            seed=int(d["seed"]),
            trials=int(d["trials"]),
            counts=counts,
            correlations=CorrelationVector(c["e13"], c["e14"], c["e23"], c["e24"]),
            bell_value=d["bell"]["value"],
            bell_violated=d["bell"]["verdict"] == "violated",
            classicality=ClassicalityVerdict.from_dict(d["classicality"]),
            kolmogorov=ClassicalityVerdict.from_dict(d["kolmogorov"]),
            version=d["version"],
        )

    @classmethod
    def from_json(cls, text: str) -> "SimulationReport":
        return cls.from_dict(canonical.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pair", "n_uu", "n_ud", "n_du", "n_dd", "p_uu", "p_ud", "p_du", "p_dd", "E"])
        table = self.table
        for p in PAIRS:
            d = table[p]
            w.writerow([pair_key(p), *(self.counts[p][k] for k in OUTCOME_KEYS),
                        *(fmt(d.prob(k[0], k[1])) for k in OUTCOME_KEYS), fmt(expectation(d))])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"entity   {self.entity}", f"seed     {self.seed}", f"trials   {self.trials}", ""]
        lines.append(table_text(self.table, counts=self.counts))
        lines.append("")
        lines.append(f"bell     {fmt(self.bell_value)} ({'violated' if self.bell_violated else 'satisfied'}, bound 2)")
        lines.append(f"hull     {verdict_text(self.classicality)}")
        lines.append(f"joint    {verdict_text(self.kolmogorov)}")
        return "\n".join(lines) + "\n"


def table_csv(table: BehaviorTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pair", "p_uu", "p_ud", "p_du", "p_dd", "E"])
    for p in PAIRS:
        d = table[p]
        w.writerow([pair_key(p), *(fmt(v) for _, v in d.items()), fmt(expectation(d))])
    return buf.getvalue()


def table_text(table: BehaviorTable, counts=None) -> str:
    header = ["pair", "p_uu", "p_ud", "p_du", "p_dd", "E"]
    if counts is not None:
        header.insert(1, "n")
    rows = [header]
    for p in PAIRS:
        d = table[p]
        row = [pair_key(p), *(fmt(v) for _, v in d.items()), fmt(expectation(d))]
        if counts is not None:
            row.insert(1, str(sum(counts[p].values())))
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def verdict_text(v: ClassicalityVerdict) -> str:
    if v.classical:
        support = {k: w for k, w in v.weights.items() if w != 0}
        body = ", ".join(f"{k}:{fmt(w)}" for k, w in support.items())
        return f"classical ({v.basis}: {body})"
    w = v.witness
    if w.kind == "chsh_facet":
        signs = ",".join(f"{s:+d}" for s in w.signs)
        return f"nonclassical (chsh facet [{signs}] = {fmt(w.value)} > {fmt(w.bound)})"
    if w.kind == "marginal_inconsistency":
        return (f"nonclassical (observable {w.detail['observable']} has different marginals "
                f"in pairs {' and '.join(w.detail['pairs'])})")
    return f"nonclassical (separating functional value {fmt(w.value)} > 0)"
