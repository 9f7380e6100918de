"""Shared fixture builders: hand-sized datasets with known scores."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from prefeval.dataset import (
    Click,
    EvaluationDataset,
    GradedJudgment,
    Language,
    PreferenceJudgment,
    Query,
    QueryType,
    RankedListPair,
    Session,
    Variant,
    Verdict,
)

settings.register_profile(
    "suite",
    max_examples=200,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

RATER = "r1"


def make_query(qid: str, query_type: QueryType = QueryType.INFORMATIONAL) -> Query:
    return Query(
        id=qid,
        text=f"query {qid}",
        info_need=f"information need behind {qid}",
        language=Language.EN,
        query_type=query_type,
    )


def binary_pair_dataset(rows, list_len=10, shared_results=False):
    """Dataset from (query_id, ones_a, ones_b, verdict) rows of binary relevance.

    ``ones_x`` is the number of relevant results (grade 1) in the top
    ``list_len`` of the variant, placed first; the rest get grade 6.
    With ``shared_results`` both variants rank the same result ids
    (variant B reversed); otherwise the variants are disjoint.
    """
    queries, pairs, judgments, preferences = [], [], [], []
    for qid, ones_a, ones_b, verdict in rows:
        queries.append(make_query(qid))
        ids_a = tuple(f"{qid}-a{r:02d}" for r in range(1, list_len + 1))
        if shared_results:
            ids_b = tuple(reversed(ids_a))
        else:
            ids_b = tuple(f"{qid}-b{r:02d}" for r in range(1, list_len + 1))
        pairs.append(RankedListPair(query_id=qid, variant_a=ids_a, variant_b=ids_b))
        graded = {}
        for i, rid in enumerate(ids_a):
            graded[rid] = 1 if i < ones_a else 6
        if not shared_results:
            for i, rid in enumerate(ids_b):
                graded[rid] = 1 if i < ones_b else 6
        for rid, grade in graded.items():
            judgments.append(
                GradedJudgment(query_id=qid, result_id=rid, rater_id=RATER, grade=grade)
            )
        if verdict is not None:
            preferences.append(
                PreferenceJudgment(query_id=qid, rater_id=RATER, verdict=verdict)
            )
    return EvaluationDataset(
        queries=tuple(queries),
        judgments=tuple(judgments),
        list_pairs=tuple(pairs),
        preferences=tuple(preferences),
    )


@pytest.fixture
def sample_pir_dataset() -> EvaluationDataset:
    """Five queries whose precision@10 pairs are the classic worked example:

    (0.4, 0.7) pref B; (0.5, 0.4) equal; (0.5, 0.4) pref B;
    (0.8, 0.4) pref A; (0.6, 0.4) pref A.
    """
    return binary_pair_dataset(
        [
            ("q1", 4, 7, Verdict.B),
            ("q2", 5, 4, Verdict.EQUAL),
            ("q3", 5, 4, Verdict.B),
            ("q4", 8, 4, Verdict.A),
            ("q5", 6, 4, Verdict.A),
        ]
    )


@pytest.fixture
def two_query_map_dataset() -> EvaluationDataset:
    """Two queries of five binary-judged results each.

    Variant A carries the patterns [1,1,0,1,0] and [0,0,1,1,1]; variant B
    ranks the same results in reverse order.
    """
    graded = {"qa": (1, 1, 0, 1, 0), "qb": (0, 0, 1, 1, 1)}
    queries, pairs, judgments = [], [], []
    for qid, bits in graded.items():
        queries.append(make_query(qid))
        ids = tuple(f"{qid}-d{r}" for r in range(1, 6))
        pairs.append(
            RankedListPair(query_id=qid, variant_a=ids, variant_b=tuple(reversed(ids)))
        )
        for rid, bit in zip(ids, bits):
            judgments.append(
                GradedJudgment(query_id=qid, result_id=rid, rater_id=RATER,
                               grade=1 if bit else 6)
            )
    return EvaluationDataset(
        queries=tuple(queries),
        judgments=tuple(judgments),
        list_pairs=tuple(pairs),
    )


def make_session(qid="q1", rater=RATER, variant=Variant.A, start=100, end=200,
                 click_ranks_ts=(), satisfied=None) -> Session:
    clicks = tuple(Click(rank=r, ts=ts) for r, ts in click_ranks_ts)
    return Session(query_id=qid, rater_id=rater, variant=variant,
                   start_ts=start, end_ts=end, clicks=clicks, satisfied=satisfied)
