"""Trust-level classification and scoring.

Aggregated trust values are bucketed into three levels.  The boundaries are
half-open upward: a value exactly on a cut goes to the upper bucket.  Scoring
compares predicted levels against ground-truth levels and reports per-level
precision, recall, and accuracy, their macro averages, and the overall
fraction of correctly classified samples.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class TrustLevel(enum.Enum):
    LOWLY = "lowly"
    MODERATELY = "moderately"
    HIGHLY = "highly"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Thresholds:
    """Cut points separating the three trust levels."""

    low_cut: float = 1.0 / 3.0
    high_cut: float = 2.0 / 3.0

    def __post_init__(self):
        if not 0.0 < self.low_cut < self.high_cut < 1.0:
            raise ValueError(
                f"need 0 < low_cut < high_cut < 1, got ({self.low_cut}, {self.high_cut})"
            )


DEFAULT_THRESHOLDS = Thresholds()


def classify(trust: float, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> TrustLevel:
    """Bucket a trust value in [0, 1] into one of the three levels."""
    if not 0.0 <= trust <= 1.0:
        raise ValueError(f"trust must be in [0, 1], got {trust}")
    if trust < thresholds.low_cut:
        return TrustLevel.LOWLY
    if trust < thresholds.high_cut:
        return TrustLevel.MODERATELY
    return TrustLevel.HIGHLY


@dataclass(frozen=True)
class LevelCounts:
    """Confusion counts for one level: it plays the role of the positive class."""

    correct: int = 0      # predicted this level and it was this level
    detected: int = 0     # predicted this level
    actual: int = 0       # was this level
    correct_not: int = 0  # neither predicted nor was this level


@dataclass(frozen=True)
class ConfusionCounts:
    samples: int
    per_level: dict[TrustLevel, LevelCounts]

    def __post_init__(self):
        for level, c in self.per_level.items():
            if c.correct > c.detected or c.correct > c.actual:
                raise ValueError(f"{level}: correct exceeds detected or actual")
        if sum(c.detected for c in self.per_level.values()) != self.samples:
            raise ValueError("detected counts must sum to the sample count")
        if sum(c.actual for c in self.per_level.values()) != self.samples:
            raise ValueError("actual counts must sum to the sample count")


def confusion(predicted: list[TrustLevel], actual: list[TrustLevel]) -> ConfusionCounts:
    """Tally per-level confusion counts from paired label sequences."""
    if len(predicted) != len(actual):
        raise ValueError(
            f"predicted and actual differ in length: {len(predicted)} vs {len(actual)}"
        )
    if not predicted:
        raise ValueError("need at least one sample to score")
    per_level = {}
    for level in TrustLevel:
        correct = sum(1 for p, a in zip(predicted, actual) if p == a == level)
        detected = sum(1 for p in predicted if p == level)
        actual_n = sum(1 for a in actual if a == level)
        correct_not = sum(1 for p, a in zip(predicted, actual) if p != level and a != level)
        per_level[level] = LevelCounts(correct, detected, actual_n, correct_not)
    return ConfusionCounts(samples=len(predicted), per_level=per_level)


@dataclass(frozen=True)
class LevelMetrics:
    """Precision and recall are None when their denominator is zero."""

    precision: float | None
    recall: float | None
    accuracy: float


@dataclass(frozen=True)
class ExperimentResult:
    """Scored outcome of one experiment arm plus the configuration that produced it."""

    config: dict
    n_samples: int
    counts: ConfusionCounts
    per_level: dict[TrustLevel, LevelMetrics]
    macro_precision: float | None
    macro_recall: float | None
    macro_accuracy: float
    accuracy: float          # overall fraction of correctly classified samples
    stderr_accuracy: float   # binomial standard error of that fraction


def _macro(values: list[float | None]) -> float | None:
    """Unweighted mean over the levels where the metric is defined."""
    defined = [v for v in values if v is not None]
    if not defined:
        return None
    return sum(defined) / len(defined)


def score(
    predicted: list[TrustLevel],
    actual: list[TrustLevel],
    config: dict | None = None,
) -> ExperimentResult:
    """Score predicted against actual trust levels.

    Per-level precision is correct/detected and recall is correct/actual;
    either is undefined (None) when its denominator is zero and is then left
    out of the macro mean.  Per-level accuracy also credits true negatives,
    so it is always defined.
    """
    counts = confusion(predicted, actual)
    n = counts.samples
    per_level = {}
    for level, c in counts.per_level.items():
        precision = c.correct / c.detected if c.detected else None
        recall = c.correct / c.actual if c.actual else None
        accuracy = (c.correct + c.correct_not) / n
        per_level[level] = LevelMetrics(precision, recall, accuracy)

    overall = sum(c.correct for c in counts.per_level.values()) / n
    stderr = math.sqrt(overall * (1.0 - overall) / n)
    return ExperimentResult(
        config=dict(config or {}),
        n_samples=n,
        counts=counts,
        per_level=per_level,
        macro_precision=_macro([m.precision for m in per_level.values()]),
        macro_recall=_macro([m.recall for m in per_level.values()]),
        macro_accuracy=_macro([m.accuracy for m in per_level.values()]),
        accuracy=overall,
        stderr_accuracy=stderr,
    )
