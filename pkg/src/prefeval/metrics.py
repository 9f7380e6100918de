"""Explicit result-list metrics over unit relevance values.

Every function scores one ranked list for one query: ``rels`` holds unit
relevance in [0, 1] by rank (index 0 = rank 1) and ``c`` is the cut-off,
i.e. how many top results take part.  Entries beyond ``c`` are ignored,
so a list may be passed at full length for any cut-off.

Normalization against an ideal ordering (NDCG) takes the query's judged
pool: the unit relevances of all distinct judged results available for
the query, from which the best achievable ranking is formed.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Iterable, Optional, Sequence

from .scales import DiscountFunction

ERR_GRADE_MAX = 5  # exponent span of the satisfaction model: unit rel 1.0 -> 2^5


class ExcludedQuery(Exception):
    """A query this metric configuration cannot score (e.g. zero ideal gain).

    Callers drop the query from the evaluation and report the count.
    """


class ApNorm(str, Enum):
    """Divisor of the average-precision sum.

    BY_KNOWN_RELEVANT divides by the number of results known to be
    relevant (the classical definition, requires a count). BY_EVALUATED_COUNT
    divides by the cut-off, which stays well-defined for graded input.
    """

    BY_KNOWN_RELEVANT = "known-relevant"
    BY_EVALUATED_COUNT = "evaluated-count"


def _check_cutoff(rels: Sequence[float], c: int) -> None:
    if c < 1:
        raise ValueError(f"cut-off must be >= 1, got {c}")
    if c > len(rels):
        raise ValueError(f"cut-off {c} exceeds list length {len(rels)}")


def precision_at(
    rels: Sequence[float],
    c: int,
    discount: Optional[DiscountFunction] = None,
    relevant_threshold: Optional[float] = None,
) -> float:
    """Mean (optionally discounted) relevance of the top ``c`` results.

    With binary input this is the classical fraction of relevant results.
    ``relevant_threshold`` binarizes graded input first: values strictly
    above it count 1, the rest 0.
    """
    _check_cutoff(rels, c)
    terms = []
    for i in range(c):
        rel = rels[i]
        if relevant_threshold is not None:
            rel = 1.0 if rel > relevant_threshold else 0.0
        if discount is not None:
            rel *= discount.weight(i + 1)
        terms.append(rel)
    return math.fsum(terms) / c


def cumulated_gain(rels: Sequence[float], c: int) -> float:
    """Plain sum of relevance over the top ``c`` results.

    Summed exactly (one final rounding), so permutations of the same
    relevance values always cumulate to the identical float.
    """
    _check_cutoff(rels, c)
    return math.fsum(rels[:c])


def dcg(rels: Sequence[float], c: int, discount: DiscountFunction) -> float:
    """Discounted cumulated gain: sum of rel(r) * weight(r) for r 1..c."""
    _check_cutoff(rels, c)
    return math.fsum(rels[i] * discount.weight(i + 1) for i in range(c))


def ideal_ranking(pool: Iterable[float], c: int) -> list[float]:
    """Best achievable top-``c`` relevance sequence from the judged pool."""
    best = sorted(pool, reverse=True)
    return best[:c]


def ndcg(
    rels: Sequence[float],
    pool: Iterable[float],
    c: int,
    discount: DiscountFunction,
) -> float:
    """DCG divided by the DCG of the ideal ranking built from ``pool``.

    Raises ExcludedQuery when the ideal DCG is zero (no relevant results
    are known for the query, so normalization is undefined).
    """
    _check_cutoff(rels, c)
    ideal = ideal_ranking(pool, c)
    ideal_score = dcg(ideal, len(ideal), discount) if ideal else 0.0
    if ideal_score == 0.0:
        raise ExcludedQuery("ideal DCG is zero")
    # the list's gain cannot really exceed the ideal's; cap the last-bit
    # float overshoot that reordered summation can produce
    return min(1.0, dcg(rels, c, discount) / ideal_score)


def average_precision(
    rels: Sequence[float],
    c: int,
    discount: DiscountFunction,
    norm: ApNorm = ApNorm.BY_EVALUATED_COUNT,
    known_relevant: Optional[int] = None,
) -> float:
    """Discount-generalized average precision over the top ``c`` results.

    Each rank contributes rel(r) * (cumulated gain through r) * weight(r);
    with binary input, RANK discount and BY_KNOWN_RELEVANT normalization
    this reduces to classical AP, whose addends divide by the rank.  Note
    that for discounts shallower than the rank the score may exceed 1.
    """
    _check_cutoff(rels, c)
    if norm is ApNorm.BY_KNOWN_RELEVANT:
        if known_relevant is None or known_relevant <= 0:
            raise ExcludedQuery("known-relevant normalization needs a positive count")
        divisor = float(known_relevant)
    else:
        divisor = float(c)
    total = 0.0
    cumulated = 0.0
    for i in range(c):
        cumulated += rels[i]
        if rels[i]:
            total += rels[i] * cumulated * discount.weight(i + 1)
    return total / divisor


def err(rels: Sequence[float], c: int, discount: DiscountFunction) -> float:
    """Expected reciprocal rank with a configurable discount.

    Each rank's gain is damped by the probability that no earlier result
    already satisfied the user; per-result satisfaction probability is
    (2^g - 1) / 2^gmax with g = gmax * rel and gmax = 5.
    """
    _check_cutoff(rels, c)
    total = 0.0
    continue_p = 1.0
    denom = 2.0 ** ERR_GRADE_MAX
    for i in range(c):
        satisfied = (2.0 ** (ERR_GRADE_MAX * rels[i]) - 1.0) / denom
        total += discount.weight(i + 1) * continue_p * satisfied
        continue_p *= 1.0 - satisfied
    return total


def reciprocal_rank(
    rels: Sequence[float],
    c: int,
    discount: DiscountFunction,
    relevant_threshold: float = 0.0,
) -> float:
    """Discount weight of the first relevant rank; 0.0 if none within ``c``.

    A result counts as relevant when its unit relevance strictly exceeds
    ``relevant_threshold`` (default: anything not completely useless).
    """
    _check_cutoff(rels, c)
    for i in range(c):
        if rels[i] > relevant_threshold:
            return discount.weight(i + 1)
    return 0.0


def esl(rels: Sequence[float], c: int, discount: DiscountFunction, n: float) -> float:
    """Normalized search-length score for a cumulative relevance target ``n``.

    Let r_n be the first rank whose cumulated relevance reaches ``n`` (or
    ``c`` when the target is never met).  The score is
    1 - (r_n - sum of discounted relevance through r_n) / c: 1.0 for a
    perfect run of results, 0.0 for a completely non-relevant list.
    """
    _check_cutoff(rels, c)
    if n <= 0:
        raise ValueError(f"cumulative relevance target must be > 0, got {n}")
    reach = c
    cumulated = 0.0
    for i in range(c):
        cumulated += rels[i]
        if cumulated >= n:
            reach = i + 1
            break
    gained = math.fsum(rels[i] * discount.weight(i + 1) for i in range(reach))
    return 1.0 - (reach - gained) / c


def mean_over_queries(scores: Iterable[float]) -> float:
    """Arithmetic mean of per-query scores; rejects an empty collection."""
    values = list(scores)
    if not values:
        raise ValueError("cannot average an empty score collection")
    return sum(values) / len(values)
