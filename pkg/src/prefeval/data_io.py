"""Reading and writing datasets as plain text record files.

A dataset lives in a directory of tab-separated files, one record per
line, each starting with a one-line header naming the schema version and
record kind:

    queries.tsv      id  type  language  text  info_need
    judgments.tsv    query_id  result_id  rater_id  grade  [snippet_relevant]
    lists.tsv        query_id  variant  rank  result_id
    preferences.tsv  query_id  rater_id  verdict
    sessions.tsv     query_id  rater_id  variant  start_ts  end_ts  [satisfied]
    clicks.tsv       query_id  rater_id  variant  rank  ts

Booleans are written ``true``/``false`` with ``-`` for absent optional
values.  Judgment, session and click files are also accepted headerless
with any whitespace as separator, for quick hand-built fixtures.  Files
are written in a canonical sort order, so write -> load -> write is
byte-stable.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Optional, Union

from .dataset import (
    Click,
    EvaluationDataset,
    GradedJudgment,
    Language,
    PreferenceJudgment,
    Query,
    QueryType,
    RankedListPair,
    Session,
    ValidationError,
    ValidationMode,
    Variant,
    Verdict,
    MAX_CUTOFF_DEFAULT,
    validate,
)
from .scales import GRADE_BEST, GRADE_WORST

SCHEMA_VERSION = 1
HEADER_TAG = "#prefeval"

FILE_NAMES = {
    "queries": "queries.tsv",
    "judgments": "judgments.tsv",
    "lists": "lists.tsv",
    "preferences": "preferences.tsv",
    "sessions": "sessions.tsv",
    "clicks": "clicks.tsv",
}


class ParseError(ValueError):
    def __init__(self, path: Union[str, Path], line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def _read_rows(path: Path, kind: str, allow_headerless: bool) -> list[tuple[int, list[str]]]:
    rows: list[tuple[int, list[str]]] = []
    tab_separated = True
    with open(path, "r", encoding="utf-8") as fh:
        first = True
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if first:
                first = False
                if line.startswith(HEADER_TAG):
                    fields = line.split("\t")
                    if len(fields) != 3 or fields[0] != HEADER_TAG:
                        raise ParseError(path, lineno, f"malformed header {line!r}")
                    if fields[1] != str(SCHEMA_VERSION):
                        raise ParseError(path, lineno, f"unsupported schema version {fields[1]!r}")
                    if fields[2] != kind:
                        raise ParseError(
                            path, lineno, f"expected {kind!r} records, file declares {fields[2]!r}"
                        )
                    continue
                if not allow_headerless:
                    raise ParseError(path, lineno, f"missing '{HEADER_TAG}\t{SCHEMA_VERSION}\t{kind}' header")
                tab_separated = False
            if not line.strip():
                continue
            rows.append((lineno, line.split("\t") if tab_separated else line.split()))
    return rows


def _parse_bool(value: str, path: Path, lineno: int, field: str) -> Optional[bool]:
    if value in ("-", ""):
        return None
    if value == "true":
        return True
    if value == "false":
        return False
    raise ParseError(path, lineno, f"{field} must be true/false/-, got {value!r}")


def _parse_int(value: str, path: Path, lineno: int, field: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(path, lineno, f"{field} must be an integer, got {value!r}") from None


def _parse_enum(enum_cls, value: str, path: Path, lineno: int, field: str):
    try:
        return enum_cls(value)
    except ValueError:
        options = "/".join(e.value for e in enum_cls)
        raise ParseError(path, lineno, f"{field} must be one of {options}, got {value!r}") from None


def _expect_fields(fields: list[str], counts: tuple[int, ...], path: Path, lineno: int, kind: str):
    if len(fields) not in counts:
        want = " or ".join(str(c) for c in counts)
        raise ParseError(path, lineno, f"{kind} record needs {want} fields, got {len(fields)}")


def read_queries(path: Path) -> list[Query]:
    out = []
    for lineno, f in _read_rows(path, "queries", allow_headerless=False):
        _expect_fields(f, (5,), path, lineno, "query")
        out.append(
            Query(
                id=f[0],
                query_type=_parse_enum(QueryType, f[1], path, lineno, "query type"),
                language=_parse_enum(Language, f[2], path, lineno, "language"),
                text=f[3],
                info_need=f[4],
            )
        )
    return out


def read_judgments(path: Path) -> list[GradedJudgment]:
    out = []
    for lineno, f in _read_rows(path, "judgments", allow_headerless=True):
        _expect_fields(f, (4, 5), path, lineno, "judgment")
        grade = _parse_int(f[3], path, lineno, "grade")
        if not GRADE_BEST <= grade <= GRADE_WORST:
            raise ParseError(path, lineno, f"grade must be {GRADE_BEST}..{GRADE_WORST}, got {grade}")
        snippet = _parse_bool(f[4], path, lineno, "snippet_relevant") if len(f) == 5 else None
        out.append(
            GradedJudgment(
                query_id=f[0], result_id=f[1], rater_id=f[2], grade=grade,
                snippet_relevant=snippet,
            )
        )
    return out


def read_list_pairs(path: Path) -> list[RankedListPair]:
    rankings: dict[tuple[str, Variant], dict[int, str]] = {}
    order: list[str] = []
    for lineno, f in _read_rows(path, "lists", allow_headerless=True):
        _expect_fields(f, (4,), path, lineno, "list")
        variant = _parse_enum(Variant, f[1], path, lineno, "variant")
        rank = _parse_int(f[2], path, lineno, "rank")
        if rank < 1:
            raise ParseError(path, lineno, f"rank must be >= 1, got {rank}")
        key = (f[0], variant)
        slots = rankings.setdefault(key, {})
        if rank in slots:
            raise ParseError(path, lineno, f"duplicate rank {rank} for query {f[0]!r} variant {variant.value}")
        slots[rank] = f[3]
        if f[0] not in order:
            order.append(f[0])
    pairs = []
    for qid in order:
        lists: dict[Variant, tuple[str, ...]] = {}
        for variant in (Variant.A, Variant.B):
            slots = rankings.get((qid, variant), {})
            expected = set(range(1, len(slots) + 1))
            if set(slots) != expected:
                raise ParseError(
                    path, 0, f"query {qid!r} variant {variant.value} ranks are not contiguous from 1"
                )
            lists[variant] = tuple(slots[r] for r in sorted(slots))
        pairs.append(RankedListPair(query_id=qid, variant_a=lists[Variant.A], variant_b=lists[Variant.B]))
    return pairs


def read_preferences(path: Path) -> list[PreferenceJudgment]:
    out = []
    for lineno, f in _read_rows(path, "preferences", allow_headerless=True):
        _expect_fields(f, (3,), path, lineno, "preference")
        out.append(
            PreferenceJudgment(
                query_id=f[0], rater_id=f[1],
                verdict=_parse_enum(Verdict, f[2], path, lineno, "verdict"),
            )
        )
    return out


def read_sessions(sessions_path: Path, clicks_path: Optional[Path]) -> list[Session]:
    clicks: dict[tuple[str, str, Variant], list[Click]] = {}
    if clicks_path is not None and clicks_path.exists():
        for lineno, f in _read_rows(clicks_path, "clicks", allow_headerless=True):
            _expect_fields(f, (5,), clicks_path, lineno, "click")
            variant = _parse_enum(Variant, f[2], clicks_path, lineno, "variant")
            rank = _parse_int(f[3], clicks_path, lineno, "rank")
            if rank < 1:
                raise ParseError(clicks_path, lineno, f"click rank must be >= 1, got {rank}")
            ts = _parse_int(f[4], clicks_path, lineno, "timestamp")
            clicks.setdefault((f[0], f[1], variant), []).append(Click(rank=rank, ts=ts))

    out = []
    seen = set()
    for lineno, f in _read_rows(sessions_path, "sessions", allow_headerless=True):
        _expect_fields(f, (5, 6), sessions_path, lineno, "session")
        variant = _parse_enum(Variant, f[2], sessions_path, lineno, "variant")
        key = (f[0], f[1], variant)
        if key in seen:
            raise ParseError(sessions_path, lineno, f"duplicate session {key!r}")
        seen.add(key)
        satisfied = _parse_bool(f[5], sessions_path, lineno, "satisfied") if len(f) == 6 else None
        session_clicks = tuple(sorted(clicks.pop(key, []), key=lambda c: (c.ts, c.rank)))
        out.append(
            Session(
                query_id=f[0], rater_id=f[1], variant=variant,
                start_ts=_parse_int(f[3], sessions_path, lineno, "start_ts"),
                end_ts=_parse_int(f[4], sessions_path, lineno, "end_ts"),
                clicks=session_clicks, satisfied=satisfied,
            )
        )
    if clicks:
        key = next(iter(clicks))
        raise ParseError(clicks_path or sessions_path, 0, f"clicks reference unknown session {key!r}")
    return out


def load_dataset(
    root: Union[str, Path, None] = None,
    *,
    queries: Union[str, Path, None] = None,
    judgments: Union[str, Path, None] = None,
    lists: Union[str, Path, None] = None,
    preferences: Union[str, Path, None] = None,
    sessions: Union[str, Path, None] = None,
    clicks: Union[str, Path, None] = None,
    mode: ValidationMode = ValidationMode.STRICT,
    max_cutoff: int = MAX_CUTOFF_DEFAULT,
) -> EvaluationDataset:
    """Load and validate a dataset from a directory or explicit file paths.

    Paths not given explicitly default to the standard names under
    ``root``.  Preference, session and click files may be absent; query,
    judgment and list files must exist.  Raises ParseError for malformed
    files and ValidationError when validation fails in the given mode.
    """

    def resolve(explicit, kind: str, required: bool) -> Optional[Path]:
        if explicit is not None:
            path = Path(explicit)
            if not path.exists():
                raise FileNotFoundError(path)
            return path
        if root is None:
            return None
        path = Path(root) / FILE_NAMES[kind]
        if not path.exists():
            if required:
                raise FileNotFoundError(path)
            return None
        return path

    queries_path = resolve(queries, "queries", required=True)
    judgments_path = resolve(judgments, "judgments", required=True)
    lists_path = resolve(lists, "lists", required=True)
    if queries_path is None or judgments_path is None or lists_path is None:
        raise ValueError("queries, judgments and lists files are required")
    preferences_path = resolve(preferences, "preferences", required=False)
    sessions_path = resolve(sessions, "sessions", required=False)
    clicks_path = resolve(clicks, "clicks", required=False)

    dataset = EvaluationDataset(
        queries=tuple(read_queries(queries_path)),
        judgments=tuple(read_judgments(judgments_path)),
        list_pairs=tuple(read_list_pairs(lists_path)),
        preferences=tuple(read_preferences(preferences_path)) if preferences_path else (),
        sessions=tuple(read_sessions(sessions_path, clicks_path)) if sessions_path else (),
    )
    report = validate(dataset, mode=mode, max_cutoff=max_cutoff)
    if not report.ok:
        raise ValidationError(report)
    return dataset


def _bool_str(value: Optional[bool]) -> str:
    if value is None:
        return "-"
    return "true" if value else "false"


def _write_file(path: Path, kind: str, rows: Iterable[Iterable[object]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{HEADER_TAG}\t{SCHEMA_VERSION}\t{kind}\n")
        for row in rows:
            fh.write("\t".join(str(v) for v in row) + "\n")


def write_dataset(dataset: EvaluationDataset, root: Union[str, Path]) -> None:
    """Write all record files in canonical sort order under ``root``."""
    root = Path(root)
    os.makedirs(root, exist_ok=True)

    _write_file(
        root / FILE_NAMES["queries"], "queries",
        ([q.id, q.query_type.value, q.language.value, q.text, q.info_need]
         for q in sorted(dataset.queries, key=lambda q: q.id)),
    )
    _write_file(
        root / FILE_NAMES["judgments"], "judgments",
        ([j.query_id, j.result_id, j.rater_id, j.grade, _bool_str(j.snippet_relevant)]
         for j in sorted(dataset.judgments, key=lambda j: (j.query_id, j.result_id, j.rater_id))),
    )
    list_rows = []
    for pair in sorted(dataset.list_pairs, key=lambda p: p.query_id):
        for variant in (Variant.A, Variant.B):
            for rank, result_id in enumerate(pair.variant(variant), start=1):
                list_rows.append([pair.query_id, variant.value, rank, result_id])
    _write_file(root / FILE_NAMES["lists"], "lists", list_rows)
    _write_file(
        root / FILE_NAMES["preferences"], "preferences",
        ([p.query_id, p.rater_id, p.verdict.value]
         for p in sorted(dataset.preferences, key=lambda p: (p.query_id, p.rater_id))),
    )
    session_key = lambda s: (s.query_id, s.rater_id, s.variant.value)
    _write_file(
        root / FILE_NAMES["sessions"], "sessions",
        ([s.query_id, s.rater_id, s.variant.value, s.start_ts, s.end_ts, _bool_str(s.satisfied)]
         for s in sorted(dataset.sessions, key=session_key)),
    )
    click_rows = []
    for s in sorted(dataset.sessions, key=session_key):
        for click in s.clicks:
            click_rows.append([s.query_id, s.rater_id, s.variant.value, click.rank, click.ts])
    _write_file(root / FILE_NAMES["clicks"], "clicks", click_rows)
