"""Metric configuration: which metric, at which parameters, scored from whose grades."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .dataset import QueryType
from .metrics import ApNorm
from .scales import DiscountFunction, RelevanceScale

MIN_CUTOFF = 1
MAX_CUTOFF = 10


class Metric(str, Enum):
    PRECISION = "precision"
    NDCG = "ndcg"
    MAP = "map"
    ERR = "err"
    MRR = "mrr"
    ESL = "esl"


class RatingSource(str, Enum):
    """Whose grades feed a preference rater's metric scores.

    SAME_USER uses the preference rater's own judgments; OTHER_USERS the
    mean unit relevance over every other rater who judged the result
    (leave-one-out), the realistic setting for an operator.
    """

    SAME_USER = "same-user"
    OTHER_USERS = "other-users"


@dataclass(frozen=True)
class MetricConfig:
    metric: Metric
    discount: DiscountFunction
    scale: RelevanceScale = RelevanceScale.SIX_POINT
    cutoff: int = MAX_CUTOFF
    esl_n: Optional[float] = None
    ap_norm: ApNorm = ApNorm.BY_EVALUATED_COUNT
    rating_source: RatingSource = RatingSource.SAME_USER
    rr_threshold: float = 0.0
    query_filter: Optional[frozenset[QueryType]] = field(default=None)

    def __post_init__(self) -> None:
        if not MIN_CUTOFF <= self.cutoff <= MAX_CUTOFF:
            raise ValueError(f"cut-off must be in {MIN_CUTOFF}..{MAX_CUTOFF}, got {self.cutoff}")
        if self.metric is Metric.ESL:
            if self.esl_n is None or self.esl_n <= 0:
                raise ValueError("ESL requires a positive cumulative relevance target esl_n")
        elif self.esl_n is not None:
            raise ValueError(f"esl_n is only meaningful for ESL, not {self.metric.value}")
        if self.rr_threshold < 0:
            raise ValueError(f"rr_threshold must be >= 0, got {self.rr_threshold}")
        if self.query_filter is not None:
            object.__setattr__(self, "query_filter", frozenset(self.query_filter))

    def at_cutoff(self, cutoff: int) -> "MetricConfig":
        return replace(self, cutoff=cutoff)

    def label(self) -> str:
        """Stable identifier of everything but the cut-off, for grid keys and file names."""
        parts = [self.metric.value, self.discount.label(), self.scale.value,
                 self.rating_source.value]
        if self.metric is Metric.ESL:
            parts.append(f"n{self.esl_n:g}")
        if self.metric is Metric.MAP and self.ap_norm is ApNorm.BY_KNOWN_RELEVANT:
            parts.append("knownrel")
        if self.metric is Metric.MRR and self.rr_threshold:
            parts.append(f"t{self.rr_threshold:g}")
        if self.query_filter is not None:
            parts.append("+".join(sorted(t.value for t in self.query_filter)))
        return "_".join(parts)
