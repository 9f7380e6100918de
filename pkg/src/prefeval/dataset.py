"""Dataset schema shared by all evaluation stages, plus its validation rules.

A dataset bundles, per query, the two competing ranked result lists
(variants A and B), six-point relevance judgments for individual results,
per-rater preference verdicts between the variants, and single-list
interaction sessions.  Datasets are treated as immutable once built;
validation is read-only and reports rather than mutates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Mapping, Optional

from .scales import GRADE_BEST, GRADE_WORST

MAX_CUTOFF_DEFAULT = 10


class QueryType(str, Enum):
    INFORMATIONAL = "informational"
    TRANSACTIONAL = "transactional"
    NAVIGATIONAL = "navigational"
    FACTUAL = "factual"
    META = "meta"


class Language(str, Enum):
    DE = "DE"
    EN = "EN"


class Variant(str, Enum):
    A = "A"
    B = "B"


class Verdict(str, Enum):
    A = "A"
    B = "B"
    EQUAL = "EQUAL"


class ValidationMode(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True)
class Query:
    id: str
    text: str
    info_need: str
    language: Language
    query_type: QueryType


@dataclass(frozen=True)
class GradedJudgment:
    """One rater's six-point grade (1 best) for one (query, result) pair."""

    query_id: str
    result_id: str
    rater_id: str
    grade: int
    snippet_relevant: Optional[bool] = None


@dataclass(frozen=True)
class RankedListPair:
    """The two competing ranked result lists for one query."""

    query_id: str
    variant_a: tuple[str, ...]
    variant_b: tuple[str, ...]

    def variant(self, which: Variant) -> tuple[str, ...]:
        return self.variant_a if which is Variant.A else self.variant_b


@dataclass(frozen=True)
class PreferenceJudgment:
    """One rater's verdict for one query: variant A better, B better, or equal."""

    query_id: str
    rater_id: str
    verdict: Verdict


@dataclass(frozen=True)
class Click:
    rank: int
    ts: int


@dataclass(frozen=True)
class Session:
    """One rater's interaction log with a single result-list variant."""

    query_id: str
    rater_id: str
    variant: Variant
    start_ts: int
    end_ts: int
    clicks: tuple[Click, ...] = ()
    satisfied: Optional[bool] = None


@dataclass(frozen=True)
class EvaluationDataset:
    queries: tuple[Query, ...]
    judgments: tuple[GradedJudgment, ...]
    list_pairs: tuple[RankedListPair, ...]
    preferences: tuple[PreferenceJudgment, ...] = ()
    sessions: tuple[Session, ...] = ()

    @cached_property
    def query_by_id(self) -> Mapping[str, Query]:
        return {q.id: q for q in self.queries}

    @cached_property
    def pair_by_query(self) -> Mapping[str, RankedListPair]:
        return {p.query_id: p for p in self.list_pairs}

    @cached_property
    def grades(self) -> Mapping[tuple[str, str], Mapping[str, int]]:
        """(query_id, result_id) -> {rater_id: grade}."""
        index: dict[tuple[str, str], dict[str, int]] = {}
        for j in self.judgments:
            index.setdefault((j.query_id, j.result_id), {})[j.rater_id] = j.grade
        return index

    @cached_property
    def preferences_by_query(self) -> Mapping[str, tuple[PreferenceJudgment, ...]]:
        index: dict[str, list[PreferenceJudgment]] = {}
        for p in self.preferences:
            index.setdefault(p.query_id, []).append(p)
        return {qid: tuple(ps) for qid, ps in index.items()}

    @cached_property
    def sessions_by_query_variant(self) -> Mapping[tuple[str, Variant], tuple[Session, ...]]:
        index: dict[tuple[str, Variant], list[Session]] = {}
        for s in self.sessions:
            index.setdefault((s.query_id, s.variant), []).append(s)
        return {key: tuple(ss) for key, ss in index.items()}


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" | "warning"
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.kind}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    mode: ValidationMode
    issues: tuple[ValidationIssue, ...] = field(default_factory=tuple)

    @property
    def errors(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors


class ValidationError(Exception):
    """Raised when a dataset fails validation in the requested mode."""

    def __init__(self, report: ValidationReport):
        self.report = report
        lines = [str(issue) for issue in report.errors]
        super().__init__("dataset validation failed:\n" + "\n".join(lines))


def validate(
    dataset: EvaluationDataset,
    mode: ValidationMode = ValidationMode.STRICT,
    max_cutoff: int = MAX_CUTOFF_DEFAULT,
) -> ValidationReport:
    """Check every schema invariant and return the full report.

    Malformed records (bad grades, click ranks below 1, inverted
    timestamps, duplicates, dangling references) are errors in both
    modes.  A listed result at rank <= ``max_cutoff`` without any
    judgment is an error in strict mode and a warning in lenient mode,
    where downstream scoring substitutes relevance 0 for it.
    """
    issues: list[ValidationIssue] = []

    def error(kind: str, message: str) -> None:
        issues.append(ValidationIssue("error", kind, message))

    def warning(kind: str, message: str) -> None:
        issues.append(ValidationIssue("warning", kind, message))

    seen_queries: set[str] = set()
    for q in dataset.queries:
        if q.id in seen_queries:
            error("duplicate-query", f"query {q.id!r} defined more than once")
        seen_queries.add(q.id)

    known = dataset.query_by_id
    listed: dict[str, set[str]] = {}

    seen_pairs: set[str] = set()
    for pair in dataset.list_pairs:
        if pair.query_id in seen_pairs:
            error("duplicate-pair", f"query {pair.query_id!r} has more than one list pair")
        seen_pairs.add(pair.query_id)
        if pair.query_id not in known:
            error("dangling-query", f"list pair references unknown query {pair.query_id!r}")
        results: set[str] = set()
        for variant, ranking in (("A", pair.variant_a), ("B", pair.variant_b)):
            if len(set(ranking)) != len(ranking):
                error(
                    "duplicate-result",
                    f"query {pair.query_id!r} variant {variant} lists a result twice",
                )
            if len(ranking) < max_cutoff:
                error(
                    "short-list",
                    f"query {pair.query_id!r} variant {variant} has {len(ranking)} results,"
                    f" fewer than the evaluated cut-off {max_cutoff}",
                )
            results.update(ranking[:max_cutoff])
        listed[pair.query_id] = results

    judged: dict[tuple[str, str], set[str]] = {}
    for j in dataset.judgments:
        if j.query_id not in known:
            error("dangling-query", f"judgment references unknown query {j.query_id!r}")
        elif j.query_id in listed and j.result_id not in set(
            dataset.pair_by_query[j.query_id].variant_a
        ) | set(dataset.pair_by_query[j.query_id].variant_b):
            error(
                "dangling-result",
                f"judgment for query {j.query_id!r} references result {j.result_id!r}"
                " absent from both variants",
            )
        if not GRADE_BEST <= j.grade <= GRADE_WORST or not isinstance(j.grade, int):
            error(
                "grade-range",
                f"judgment ({j.query_id!r}, {j.result_id!r}, {j.rater_id!r})"
                f" has grade {j.grade!r} outside {GRADE_BEST}..{GRADE_WORST}",
            )
        raters = judged.setdefault((j.query_id, j.result_id), set())
        if j.rater_id in raters:
            error(
                "duplicate-judgment",
                f"rater {j.rater_id!r} judged ({j.query_id!r}, {j.result_id!r}) twice",
            )
        raters.add(j.rater_id)

    for qid, results in listed.items():
        for result_id in sorted(results):
            if (qid, result_id) not in judged:
                missing = (
                    f"result {result_id!r} of query {qid!r} appears at rank"
                    f" <= {max_cutoff} but has no judgment"
                )
                if mode is ValidationMode.STRICT:
                    error("missing-judgment", missing)
                else:
                    warning("missing-judgment", missing)

    seen_verdicts: set[tuple[str, str]] = set()
    for p in dataset.preferences:
        if p.query_id not in known:
            error("dangling-query", f"preference references unknown query {p.query_id!r}")
        key = (p.query_id, p.rater_id)
        if key in seen_verdicts:
            error(
                "duplicate-preference",
                f"rater {p.rater_id!r} has more than one verdict for query {p.query_id!r}",
            )
        seen_verdicts.add(key)

    for s in dataset.sessions:
        label = f"session ({s.query_id!r}, {s.rater_id!r}, {s.variant.value})"
        if s.query_id not in known:
            error("dangling-query", f"{label} references an unknown query")
        if s.start_ts > s.end_ts:
            error("time-order", f"{label} starts after it ends")
        for click in s.clicks:
            if click.rank < 1:
                error("click-rank", f"{label} has a click at rank {click.rank}")
            if not s.start_ts <= click.ts <= s.end_ts:
                error("click-time", f"{label} has a click outside the session interval")

    return ValidationReport(mode=mode, issues=tuple(issues))
