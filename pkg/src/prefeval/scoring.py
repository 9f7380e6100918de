"""Turns dataset grades into judged relevance lists and metric scores.

This is the substrate both the sweep engine and the reference oracle
build on: per-result unit relevance under a scale and rating source, the
two judged lists of a query truncated to the cut-off, the judged pool for
normalization, and the single-list metric dispatch.
"""

from __future__ import annotations

from typing import Optional, Sequence

from . import metrics
from .config import Metric, MetricConfig, RatingSource
from .dataset import EvaluationDataset
from .metrics import ApNorm
from .scales import RelevanceScale, conflate


class MissingJudgment(Exception):
    """A grade needed under the active rating source does not exist.

    Raised in strict mode; lenient scoring substitutes relevance 0.0
    (the unit value of the worst grade).
    """


def unit_relevance(
    dataset: EvaluationDataset,
    query_id: str,
    result_id: str,
    scale: RelevanceScale,
    source: RatingSource,
    rater_id: str,
    lenient: bool = False,
) -> float:
    """Unit relevance of one result as seen by one preference rater.

    Grades are conflated onto the scale per rater first; OTHER_USERS then
    averages the conflated values of all raters except ``rater_id``.
    """
    grades = dataset.grades.get((query_id, result_id), {})
    if source is RatingSource.SAME_USER:
        grade = grades.get(rater_id)
        if grade is None:
            if lenient:
                return 0.0
            raise MissingJudgment(
                f"rater {rater_id!r} has no judgment for ({query_id!r}, {result_id!r})"
            )
        return conflate(grade, scale)
    others = [conflate(g, scale) for r, g in grades.items() if r != rater_id]
    if not others:
        if lenient:
            return 0.0
        raise MissingJudgment(
            f"no rater besides {rater_id!r} judged ({query_id!r}, {result_id!r})"
        )
    return sum(others) / len(others)


def judged_lists(
    dataset: EvaluationDataset,
    query_id: str,
    rater_id: str,
    config: MetricConfig,
    lenient: bool = False,
) -> tuple[list[float], list[float], list[float]]:
    """Relevance lists of both variants at the configured cut-off, plus the pool.

    The pool holds the unit relevance of every distinct result visible in
    either variant's top ``config.cutoff``; it feeds NDCG normalization
    and the known-relevant count of classical AP.
    """
    pair = dataset.pair_by_query[query_id]
    top_a = pair.variant_a[: config.cutoff]
    top_b = pair.variant_b[: config.cutoff]

    def rel(result_id: str) -> float:
        return unit_relevance(
            dataset, query_id, result_id, config.scale, config.rating_source,
            rater_id, lenient,
        )

    rels_a = [rel(rid) for rid in top_a]
    rels_b = [rel(rid) for rid in top_b]
    pool = [rel(rid) for rid in dict.fromkeys((*top_a, *top_b))]
    return rels_a, rels_b, pool


def metric_score(
    rels: Sequence[float],
    pool: Sequence[float],
    config: MetricConfig,
) -> float:
    """Score one judged list under the configured metric."""
    c = config.cutoff
    m = config.metric
    if m is Metric.PRECISION:
        return metrics.precision_at(rels, c, discount=config.discount)
    if m is Metric.NDCG:
        return metrics.ndcg(rels, pool, c, config.discount)
    if m is Metric.MAP:
        known: Optional[int] = None
        if config.ap_norm is ApNorm.BY_KNOWN_RELEVANT:
            known = sum(1 for v in pool if v > 0)
        return metrics.average_precision(
            rels, c, config.discount, config.ap_norm, known_relevant=known
        )
    if m is Metric.ERR:
        return metrics.err(rels, c, config.discount)
    if m is Metric.MRR:
        return metrics.reciprocal_rank(
            rels, c, config.discount, relevant_threshold=config.rr_threshold
        )
    if m is Metric.ESL:
        assert config.esl_n is not None
        return metrics.esl(rels, c, config.discount, config.esl_n)
    raise ValueError(f"unknown metric {m!r}")


def score_pair(
    dataset: EvaluationDataset,
    config: MetricConfig,
    query_id: str,
    rater_id: str,
    lenient: bool = False,
) -> tuple[float, float]:
    """Metric scores (variant A, variant B) for one (query, preference rater).

    Raises ExcludedQuery when the configuration cannot score the query
    (zero ideal gain, no known relevant result) and MissingJudgment for
    rating-source gaps in strict mode.
    """
    rels_a, rels_b, pool = judged_lists(dataset, query_id, rater_id, config, lenient)
    return metric_score(rels_a, pool, config), metric_score(rels_b, pool, config)


def consensus_lists(
    dataset: EvaluationDataset,
    query_id: str,
    scale: RelevanceScale,
    cutoff: int,
    lenient: bool = False,
) -> tuple[list[float], list[float], list[float]]:
    """Judged lists without a rater context: mean over all raters per result.

    Used by plain metric tables, where no preference rater singles out a
    rating source.
    """
    pair = dataset.pair_by_query[query_id]
    top_a = pair.variant_a[:cutoff]
    top_b = pair.variant_b[:cutoff]

    def rel(result_id: str) -> float:
        grades = dataset.grades.get((query_id, result_id), {})
        values = [conflate(g, scale) for g in grades.values()]
        if not values:
            if lenient:
                return 0.0
            raise MissingJudgment(f"({query_id!r}, {result_id!r}) has no judgment")
        return sum(values) / len(values)

    rels_a = [rel(rid) for rid in top_a]
    rels_b = [rel(rid) for rid in top_b]
    pool = [rel(rid) for rid in dict.fromkeys((*top_a, *top_b))]
    return rels_a, rels_b, pool
