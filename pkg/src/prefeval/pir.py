"""Preference identification: scoring metric configurations against user verdicts.

For every (query, preference rater) pair the engine computes the metric
scores of both result-list variants, turns the score difference into a
thresholded preference, and aggregates agreement with the rater's actual
verdict into the preference identification ratio (PIR):

    PIR = 0.5 + sum(pref(m_a - m_b) * verdict_sign) / (2 * n)

over the n pairs whose verdict states a preference.  0.5 is the guessing
baseline, 1.0 means every stated preference is recognized.  Verdicts of
equal quality stay out of the ratio (the user is no better or worse off
either way) but are tracked in the five-category breakdown.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .config import MetricConfig
from .dataset import EvaluationDataset, Verdict
from .metrics import ExcludedQuery
from .scoring import score_pair

DEFAULT_THRESHOLDS: tuple[float, ...] = tuple(i / 100 for i in range(31))
DEFAULT_CUTOFFS: tuple[int, ...] = tuple(range(1, 11))

CATEGORIES = (
    "correct_pref",
    "correct_equal",
    "false_pref",
    "missed_pref",
    "reversed_pref",
)

ScoredPair = tuple[float, float, Verdict]


def pref(x: float, t: float) -> int:
    """Thresholded sign: +1 if x > t, -1 if x < -t, otherwise 0."""
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    if x > t:
        return 1
    if x < -t:
        return -1
    return 0


@dataclass(frozen=True)
class PirCell:
    """PIR plus the five-way outcome counts at one threshold.

    The counts partition every evaluated (query, rater) pair: stated
    preferences are recognized (correct_pref), inverted (reversed_pref)
    or not seen (missed_pref); stated equality is confirmed
    (correct_equal) or contradicted (false_pref).
    """

    threshold: float
    pir: float
    correct_pref: int
    correct_equal: int
    false_pref: int
    missed_pref: int
    reversed_pref: int

    @property
    def total_pairs(self) -> int:
        return (self.correct_pref + self.correct_equal + self.false_pref
                + self.missed_pref + self.reversed_pref)

    @property
    def n_preferences(self) -> int:
        """Pairs whose verdict states a preference (the PIR denominator)."""
        return self.correct_pref + self.missed_pref + self.reversed_pref

    @property
    def empty_denominator(self) -> bool:
        return self.n_preferences == 0

    def counts(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in CATEGORIES}

    def shares(self) -> dict[str, Fraction]:
        """Exact category shares over all evaluated pairs; they sum to 1."""
        total = self.total_pairs
        if total == 0:
            raise ValueError("no evaluated pairs, shares undefined")
        return {name: Fraction(getattr(self, name), total) for name in CATEGORIES}


def pir(pairs: Sequence[ScoredPair], t: float = 0.0) -> PirCell:
    """Aggregate scored pairs into a PirCell at threshold ``t``.

    Each pair is (score_a, score_b, verdict).  With no preferring pairs
    the PIR is the 0.5 baseline and the cell flags the empty denominator.
    """
    counts = dict.fromkeys(CATEGORIES, 0)
    agreement = 0
    n_pref = 0
    for score_a, score_b, verdict in pairs:
        p = pref(score_a - score_b, t)
        if verdict is Verdict.EQUAL:
            counts["correct_equal" if p == 0 else "false_pref"] += 1
            continue
        n_pref += 1
        u = 1 if verdict is Verdict.A else -1
        product = p * u
        agreement += product
        if product > 0:
            counts["correct_pref"] += 1
        elif product < 0:
            counts["reversed_pref"] += 1
        else:
            counts["missed_pref"] += 1
    value = 0.5 + agreement / (2 * n_pref) if n_pref else 0.5
    return PirCell(threshold=t, pir=value, **counts)


def score_pairs(
    dataset: EvaluationDataset,
    config: MetricConfig,
    lenient: bool = False,
) -> tuple[list[ScoredPair], int]:
    """Metric score pairs for every preference verdict the config can evaluate.

    Returns the pairs in dataset order and the number of (query, rater)
    pairs the configuration had to exclude (e.g. zero ideal gain).
    Queries outside the config's query_filter are skipped silently; they
    are out of scope, not excluded.
    """
    pairs: list[ScoredPair] = []
    excluded = 0
    for p in dataset.preferences:
        if config.query_filter is not None:
            query = dataset.query_by_id[p.query_id]
            if query.query_type not in config.query_filter:
                continue
        try:
            score_a, score_b = score_pair(dataset, config, p.query_id, p.rater_id, lenient)
        except ExcludedQuery:
            excluded += 1
            continue
        pairs.append((score_a, score_b, p.verdict))
    return pairs, excluded


@dataclass(frozen=True)
class PirRow:
    """All threshold cells of one configuration at one cut-off."""

    config: MetricConfig
    thresholds: tuple[float, ...]
    cells: tuple[PirCell, ...]
    excluded_pairs: int

    def best_threshold(self) -> tuple[float, float]:
        """(threshold, PIR) of the maximal cell, ties broken toward the lowest t."""
        best = self.cells[0]
        for cell in self.cells[1:]:
            if cell.pir > best.pir:
                best = cell
        return best.threshold, best.pir


@dataclass(frozen=True)
class PirGrid:
    """PIR cells over (configuration, cut-off, threshold)."""

    configs: tuple[MetricConfig, ...]
    cutoffs: tuple[int, ...]
    thresholds: tuple[float, ...]
    rows: Mapping[tuple[str, int], PirRow]

    def row(self, config: Union[MetricConfig, str], cutoff: int) -> PirRow:
        label = config.label() if isinstance(config, MetricConfig) else config
        return self.rows[(label, cutoff)]

    def cell(self, config: Union[MetricConfig, str], cutoff: int, t: float) -> PirCell:
        row = self.row(config, cutoff)
        for cell in row.cells:
            if cell.threshold == t:
                return cell
        raise KeyError(f"threshold {t} not in grid")


def _check_thresholds(thresholds: Sequence[float]) -> None:
    if not thresholds or thresholds[0] != 0:
        raise ValueError("threshold grid must start at 0")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("threshold grid must be strictly increasing")


def pir_sweep(
    dataset: EvaluationDataset,
    configs: Iterable[MetricConfig],
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    lenient: bool = False,
    jobs: int = 1,
) -> PirGrid:
    """Evaluate every configuration over the full (cut-off, threshold) grid.

    Rows are independent; with ``jobs`` > 1 they are computed in a thread
    pool.  Aggregation is exact integer counting, so the output does not
    depend on evaluation order.
    """
    _check_thresholds(thresholds)
    configs = tuple(configs)
    seen: set[str] = set()
    for config in configs:
        if config.label() in seen:
            raise ValueError(f"duplicate configuration {config.label()!r}")
        seen.add(config.label())
    tasks = [(config, cutoff) for config in configs for cutoff in cutoffs]

    def run(task: tuple[MetricConfig, int]) -> tuple[tuple[str, int], PirRow]:
        config, cutoff = task
        at = config.at_cutoff(cutoff)
        pairs, excluded = score_pairs(dataset, at, lenient)
        cells = tuple(pir(pairs, t) for t in thresholds)
        row = PirRow(config=at, thresholds=tuple(thresholds), cells=cells,
                     excluded_pairs=excluded)
        return (config.label(), cutoff), row

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(task) for task in tasks]
    return PirGrid(
        configs=configs,
        cutoffs=tuple(cutoffs),
        thresholds=tuple(thresholds),
        rows=dict(results),
    )


def best_threshold(
    grid: PirGrid, config: Union[MetricConfig, str], cutoff: int
) -> tuple[float, float]:
    """Best-performing threshold of one grid row; ties go to the lowest t."""
    return grid.row(config, cutoff).best_threshold()


def detailed_breakdown(
    dataset: EvaluationDataset,
    config: MetricConfig,
    t: float,
    lenient: bool = False,
) -> tuple[PirCell, int]:
    """Five-category outcome cell at one threshold, plus the excluded-pair count."""
    pairs, excluded = score_pairs(dataset, config, lenient)
    return pir(pairs, t), excluded


def breakdown_series(
    dataset: EvaluationDataset,
    config: MetricConfig,
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
    lenient: bool = False,
) -> tuple[list[PirCell], int]:
    """Outcome cells across a threshold grid (category evolution by threshold)."""
    _check_thresholds(thresholds)
    pairs, excluded = score_pairs(dataset, config, lenient)
    return [pir(pairs, t) for t in thresholds], excluded
