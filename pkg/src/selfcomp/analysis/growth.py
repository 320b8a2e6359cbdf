"""SLOC growth model: per-level totals, log-linear exponential fit, projection."""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Union

from ..errors import InsufficientData, NonPositiveY, ZeroFeatures

CSV_HEADER = ("level", "parents", "children", "refinement_sloc")


@dataclass(frozen=True)
class GrowthRow:
    level: int
    parents: int
    children: int
    refinement_sloc: int

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class FitResult:
    """Coefficients of ``y = a * exp(b * x)``; ``r2`` is measured on ln(y)."""

    a: float
    b: float
    r2: float

    def to_dict(self, levels: Iterable[int] = ()) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "r2": self.r2,
            "projections": [{"level": lv, "value": project(self, lv)} for lv in levels],
        }


@dataclass(frozen=True)
class FeatureCost:
    coordination_sloc: int
    crosscutting_sloc: int
    feature_count: int


def growth_total(row: GrowthRow) -> int:
    return row.parents * row.children * row.refinement_sloc


def growth_points(rows: Iterable[GrowthRow]) -> list[tuple[int, int]]:
    return [(row.level, growth_total(row)) for row in rows]


def fit_exponential(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least-squares line through ``(x, ln y)``."""
    points = list(points)
    if len(points) < 2 or len({x for x, _ in points}) < 2:
        raise InsufficientData("need at least two points with distinct x")
    if any(y <= 0 for _, y in points):
        raise NonPositiveY("every y must be positive to take its logarithm")
    n = len(points)
    xs = [float(x) for x, _ in points]
    ls = [math.log(y) for _, y in points]
    mx = math.fsum(xs) / n
    ml = math.fsum(ls) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    sxl = math.fsum((x - mx) * (v - ml) for x, v in zip(xs, ls))
    b = sxl / sxx
    intercept = ml - b * mx
    ss_tot = math.fsum((v - ml) ** 2 for v in ls)
    ss_res = math.fsum((v - (intercept + b * x)) ** 2 for x, v in zip(xs, ls))
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitResult(math.exp(intercept), b, r2)


def project(fit: FitResult, level: float) -> float:
    return fit.a * math.exp(fit.b * level)


def avg_sloc_per_feature(cost: FeatureCost) -> float:
    if cost.feature_count < 1:
        raise ZeroFeatures("feature_count must be at least 1")
    return cost.crosscutting_sloc / cost.feature_count


def read_growth_csv(path: Union[str, Path]) -> list[GrowthRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}; expected {','.join(CSV_HEADER)}")
        return [GrowthRow(**{k: int(rec[k]) for k in CSV_HEADER}) for rec in reader]
