"""Command-line interface: validate, eval, sweep, breakdown, implicit, stats, synth.

Exit codes: 0 success, 1 validation or data failure, 2 usage error,
3 empty preference denominator (no verdict to compare against; sweeps
report this per cell instead of failing).  All numbers are printed with
four decimals; computation keeps full precision.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import plotsvg
from .config import Metric, MetricConfig, RatingSource
from .data_io import ParseError, load_dataset, write_dataset
from .dataset import QueryType, ValidationError, ValidationMode, Variant, validate
from .implicit import (
    DEFAULT_THRESHOLD_GRIDS,
    Direction,
    ImplicitMeasure,
    SessionEndpoint,
    descriptive_stats,
    implicit_pir,
)
from .metrics import ApNorm, ExcludedQuery, mean_over_queries
from .pir import CATEGORIES, DEFAULT_THRESHOLDS, breakdown_series, pir_sweep
from .scales import DiscountFunction, DiscountKind, RelevanceScale, load_click_weights
from .scoring import consensus_lists, metric_score
from .synth import SynthSpec, generate_synthetic

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_EMPTY_PIR = 3

DEFAULT_DISCOUNTS = {
    Metric.PRECISION: DiscountKind.NONE,
    Metric.NDCG: DiscountKind.LOG2,
    Metric.MAP: DiscountKind.RANK,
    Metric.ERR: DiscountKind.RANK,
    Metric.MRR: DiscountKind.RANK,
    Metric.ESL: DiscountKind.RANK,
}
DEFAULT_ESL_N = 2.5


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _parse_float_grid(text: str) -> tuple[float, ...]:
    """'0:0.3:0.01' (start:stop:step, inclusive) or a comma list '0,0.15,0.35'."""
    if ":" in text:
        start_s, stop_s, step_s = text.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
        if step <= 0:
            raise ValueError("step must be positive")
        count = int(round((stop - start) / step))
        return tuple(start + i * step for i in range(count + 1))
    return tuple(float(v) for v in text.split(","))


def _parse_cutoffs(text: str) -> tuple[int, ...]:
    """'1-10' or a comma list '1,3,5'."""
    if "-" in text:
        lo_s, hi_s = text.split("-")
        return tuple(range(int(lo_s), int(hi_s) + 1))
    return tuple(int(v) for v in text.split(","))


def _parse_weights(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _discount(kind: DiscountKind, click_weights_path: Optional[str]) -> DiscountFunction:
    if kind is DiscountKind.CLICK_BASED:
        if click_weights_path:
            return DiscountFunction.click_based(load_click_weights(click_weights_path))
        return DiscountFunction.click_based()
    return DiscountFunction(kind)


def _add_dataset_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("dataset", help="dataset directory")
    parser.add_argument("--lenient", action="store_true",
                        help="tolerate missing judgments (substituted as non-relevant)")


def _add_config_args(parser: argparse.ArgumentParser, single_metric: bool) -> None:
    metric_names = [m.value for m in Metric]
    if single_metric:
        parser.add_argument("--metric", required=True, choices=metric_names)
        parser.add_argument("--discount", choices=[d.value for d in DiscountKind],
                            help="default: the metric's customary discount")
    else:
        parser.add_argument("--metrics", default=",".join(metric_names),
                            help="comma list of metrics (default: all six)")
        parser.add_argument("--discounts",
                            help="comma list of discounts applied to every metric"
                                 " (default: each metric's customary discount)")
    parser.add_argument("--click-weights", metavar="FILE",
                        help="rank/weight table for the click-based discount")
    parser.add_argument("--scale", default=RelevanceScale.SIX_POINT.value,
                        choices=[s.value for s in RelevanceScale])
    parser.add_argument("--rating-source", default=RatingSource.SAME_USER.value,
                        choices=[r.value for r in RatingSource])
    parser.add_argument("--n", "--esl-n", dest="esl_n", type=float, default=None,
                        help=f"ESL cumulative relevance target (default {DEFAULT_ESL_N})")
    parser.add_argument("--norm", default=ApNorm.BY_EVALUATED_COUNT.value,
                        choices=[n.value for n in ApNorm], help="AP normalization")
    parser.add_argument("--rr-threshold", type=float, default=0.0,
                        help="unit relevance above which MRR counts a result as relevant")
    parser.add_argument("--query-type", action="append", dest="query_types",
                        choices=[t.value for t in QueryType],
                        help="restrict to these query types (repeatable)")


def _build_config(args, metric: Metric, discount: DiscountFunction, cutoff: int) -> MetricConfig:
    query_filter = None
    if args.query_types:
        query_filter = frozenset(QueryType(t) for t in args.query_types)
    esl_n = None
    if metric is Metric.ESL:
        esl_n = args.esl_n if args.esl_n is not None else DEFAULT_ESL_N
    return MetricConfig(
        metric=metric,
        discount=discount,
        scale=RelevanceScale(args.scale),
        cutoff=cutoff,
        esl_n=esl_n,
        ap_norm=ApNorm(args.norm),
        rating_source=RatingSource(args.rating_source),
        rr_threshold=args.rr_threshold,
        query_filter=query_filter,
    )


def _load(args, max_cutoff: int):
    mode = ValidationMode.LENIENT if args.lenient else ValidationMode.STRICT
    return load_dataset(args.dataset, mode=mode, max_cutoff=max_cutoff)


def _write_table(path: Path, header: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(str(v) for v in row) + "\n")


def cmd_validate(args) -> int:
    mode = ValidationMode.LENIENT if args.lenient else ValidationMode.STRICT
    try:
        dataset = load_dataset(args.dataset, mode=ValidationMode.LENIENT,
                               max_cutoff=args.max_cutoff)
    except ParseError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (ValidationError, FileNotFoundError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    report = validate(dataset, mode=mode, max_cutoff=args.max_cutoff)
    for issue in report.issues:
        print(issue, file=sys.stderr)
    print(f"queries={len(dataset.queries)} judgments={len(dataset.judgments)}"
          f" pairs={len(dataset.list_pairs)} preferences={len(dataset.preferences)}"
          f" sessions={len(dataset.sessions)}"
          f" errors={len(report.errors)} warnings={len(report.warnings)}")
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_eval(args) -> int:
    dataset = _load(args, max_cutoff=args.cutoff)
    metric = Metric(args.metric)
    kind = DiscountKind(args.discount) if args.discount else DEFAULT_DISCOUNTS[metric]
    config = _build_config(args, metric, _discount(kind, args.click_weights), args.cutoff)

    rows = []
    per_variant: dict[Variant, list[float]] = {Variant.A: [], Variant.B: []}
    excluded = 0
    for pair in dataset.list_pairs:
        if config.query_filter is not None:
            if dataset.query_by_id[pair.query_id].query_type not in config.query_filter:
                continue
        rels_a, rels_b, pool = consensus_lists(
            dataset, pair.query_id, config.scale, config.cutoff, args.lenient
        )
        try:
            score_a = metric_score(rels_a, pool, config)
            score_b = metric_score(rels_b, pool, config)
        except ExcludedQuery:
            excluded += 1
            continue
        rows.append((pair.query_id, score_a, score_b))
        per_variant[Variant.A].append(score_a)
        per_variant[Variant.B].append(score_b)

    print("query\tA\tB")
    for qid, score_a, score_b in rows:
        print(f"{qid}\t{_fmt(score_a)}\t{_fmt(score_b)}")
    if excluded:
        print(f"excluded queries: {excluded}", file=sys.stderr)
    if not rows:
        print("no evaluable query", file=sys.stderr)
        return EXIT_EMPTY_PIR
    mean_a = mean_over_queries(per_variant[Variant.A])
    mean_b = mean_over_queries(per_variant[Variant.B])
    print(f"mean\t{_fmt(mean_a)}\t{_fmt(mean_b)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    thresholds = _parse_float_grid(args.thresholds) if args.thresholds else DEFAULT_THRESHOLDS
    cutoffs = _parse_cutoffs(args.cutoffs)
    dataset = _load(args, max_cutoff=max(cutoffs))

    metrics = [Metric(name) for name in args.metrics.split(",")]
    configs = []
    for metric in metrics:
        if args.discounts:
            kinds = [DiscountKind(d) for d in args.discounts.split(",")]
        else:
            kinds = [DEFAULT_DISCOUNTS[metric]]
        for kind in kinds:
            configs.append(
                _build_config(args, metric, _discount(kind, args.click_weights), cutoffs[0])
            )

    grid = pir_sweep(dataset, configs, thresholds, cutoffs,
                     lenient=args.lenient, jobs=args.jobs)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    empty_cells = 0
    labels = [config.label() for config in grid.configs]
    for label in labels:
        grid_rows = []
        for ti, t in enumerate(thresholds):
            row = [f"{t:.4f}"]
            for cutoff in cutoffs:
                cell = grid.rows[(label, cutoff)].cells[ti]
                if cell.empty_denominator:
                    empty_cells += 1
                row.append(_fmt(cell.pir))
            grid_rows.append(row)
        _write_table(out / f"grid_{label}.tsv",
                     ["threshold"] + [f"c{c}" for c in cutoffs], grid_rows)

        count_rows = []
        for cutoff in cutoffs:
            pir_row = grid.rows[(label, cutoff)]
            for cell in pir_row.cells:
                count_rows.append(
                    [cutoff, f"{cell.threshold:.4f}", _fmt(cell.pir)]
                    + [getattr(cell, name) for name in CATEGORIES]
                    + [pir_row.excluded_pairs]
                )
        _write_table(
            out / f"counts_{label}.tsv",
            ["cutoff", "threshold", "pir", *CATEGORIES, "excluded_pairs"],
            count_rows,
        )
        if args.plot:
            series = {
                f"c{cutoff}": [
                    (cell.threshold, cell.pir) for cell in grid.rows[(label, cutoff)].cells
                ]
                for cutoff in cutoffs
            }
            plotsvg.write_line_chart(out / f"grid_{label}.svg", label,
                                     "threshold", "PIR", series)

    best_rows, best_value_rows, zero_rows = [], [], []
    for cutoff in cutoffs:
        best_row, value_row, zero_row = [cutoff], [cutoff], [cutoff]
        for label in labels:
            t_star, pir_star = grid.rows[(label, cutoff)].best_threshold()
            best_row.append(_fmt(pir_star))
            value_row.append(f"{t_star:.4f}")
            zero_row.append(_fmt(grid.rows[(label, cutoff)].cells[0].pir))
        best_rows.append(best_row)
        best_value_rows.append(value_row)
        zero_rows.append(zero_row)
    _write_table(out / "best_threshold_pir.tsv", ["cutoff"] + labels, best_rows)
    _write_table(out / "best_threshold_value.tsv", ["cutoff"] + labels, best_value_rows)
    _write_table(out / "zero_threshold_pir.tsv", ["cutoff"] + labels, zero_rows)
    if args.plot:
        for name, rows in (("best_threshold_pir", best_rows), ("zero_threshold_pir", zero_rows)):
            series = {
                label: [(row[0], float(row[i + 1])) for row in rows]
                for i, label in enumerate(labels)
            }
            plotsvg.write_line_chart(out / f"{name}.svg", name.replace("_", " "),
                                     "cutoff", "PIR", series)

    total_excluded = sum(row.excluded_pairs for row in grid.rows.values())
    print(f"wrote {len(labels)} config grids to {out}"
          f" ({len(cutoffs)} cutoffs x {len(thresholds)} thresholds)")
    if empty_cells:
        print(f"cells with empty preference denominator: {empty_cells}", file=sys.stderr)
    if total_excluded:
        print(f"excluded (query, rater) pairs across rows: {total_excluded}", file=sys.stderr)
    return EXIT_OK


def cmd_breakdown(args) -> int:
    dataset = _load(args, max_cutoff=args.cutoff)
    metric = Metric(args.metric)
    kind = DiscountKind(args.discount) if args.discount else DEFAULT_DISCOUNTS[metric]
    config = _build_config(args, metric, _discount(kind, args.click_weights), args.cutoff)

    thresholds = _parse_float_grid(args.thresholds) if args.thresholds else DEFAULT_THRESHOLDS
    if args.threshold not in thresholds:
        thresholds = tuple(sorted({*thresholds, args.threshold}))
    cells, excluded = breakdown_series(dataset, config, thresholds, args.lenient)
    at = next(cell for cell in cells if cell.threshold == args.threshold)
    if at.total_pairs == 0:
        print("no evaluable (query, rater) pair", file=sys.stderr)
        return EXIT_EMPTY_PIR

    print(f"config {config.label()} cutoff {config.cutoff} threshold {args.threshold:.4f}")
    print("category\tcount\tshare")
    for name, share in at.shares().items():
        print(f"{name}\t{getattr(at, name)}\t{_fmt(float(share))}")
    print(f"pir\t{_fmt(at.pir)}")
    if excluded:
        print(f"excluded pairs: {excluded}", file=sys.stderr)
    if args.series:
        rows = [
            [f"{cell.threshold:.4f}"]
            + [_fmt(float(cell.shares()[name])) for name in CATEGORIES]
            + [_fmt(cell.pir)]
            for cell in cells
        ]
        _write_table(Path(args.series), ["threshold", *CATEGORIES, "pir"], rows)
    return EXIT_OK


def cmd_implicit(args) -> int:
    dataset = _load(args, max_cutoff=args.max_cutoff)
    measure = ImplicitMeasure(args.measure)
    thresholds = (_parse_float_grid(args.thresholds) if args.thresholds
                  else DEFAULT_THRESHOLD_GRIDS[measure])
    band = None
    if args.band:
        lo, hi = (float(v) for v in args.band.split(":"))
        if hi < lo:
            raise ValueError(f"band must be LO:HI with LO <= HI, got {args.band}")
        band = (lo, hi)
    series = implicit_pir(
        dataset,
        measure,
        endpoint=SessionEndpoint(args.endpoint),
        direction=Direction(args.direction) if args.direction else None,
        thresholds=thresholds,
        band=band,
    )
    if all(cell.empty_denominator for cell in series.cells):
        print("no preference verdict with usable sessions", file=sys.stderr)
        return EXIT_EMPTY_PIR
    print("threshold\tpir")
    for cell in series.cells:
        print(f"{cell.threshold:.4f}\t{_fmt(cell.pir)}")
    t_star, pir_star = series.best_threshold()
    print(f"best\t{t_star:.4f} -> {_fmt(pir_star)}")
    if series.excluded_queries:
        print(f"excluded queries: {series.excluded_queries}", file=sys.stderr)
    if args.out:
        _write_table(
            Path(args.out), ["threshold", "pir"],
            [[f"{cell.threshold:.4f}", _fmt(cell.pir)] for cell in series.cells],
        )
    return EXIT_OK


def cmd_stats(args) -> int:
    dataset = _load(args, max_cutoff=args.max_cutoff)
    stats = descriptive_stats(dataset)
    for variant, vs in stats.variants.items():
        print(f"variant {variant.value}: sessions={vs.sessions}")
        if vs.zero_click_share is None:
            print("  zero-click share: undefined (no sessions)")
        else:
            print(f"  zero-click share: {_fmt(vs.zero_click_share)}")
        if vs.mean_satisfaction is not None:
            print(f"  mean satisfaction: {_fmt(vs.mean_satisfaction)}")
        if vs.clicks_per_session:
            hist = " ".join(f"{k}:{v}" for k, v in vs.clicks_per_session.items())
            print(f"  clicks per session: {hist}")
        if vs.clicks_by_rank:
            hist = " ".join(f"{k}:{v}" for k, v in vs.clicks_by_rank.items())
            print(f"  clicks by rank: {hist}")
        if vs.mean_relevance_by_rank:
            rel = " ".join(f"{k}:{_fmt(v)}" for k, v in vs.mean_relevance_by_rank.items())
            print(f"  mean relevance by rank: {rel}")
        for rank, counts in vs.grade_counts_by_rank.items():
            dist = " ".join(f"g{g}:{n}" for g, n in counts.items())
            print(f"  grades at rank {rank}: {dist}")
    for qt, qstats in stats.query_types.items():
        print(f"query type {qt}: queries={qstats.queries} mean_terms={_fmt(qstats.mean_terms)}")
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = SynthSpec(
        n_queries=args.queries,
        n_raters=args.raters,
        seed=args.seed,
        list_len=args.list_len,
        n_preferences=args.preferences,
        grade_weights_a=_parse_weights(args.grades_a) if args.grades_a else SynthSpec.grade_weights_a,
        grade_weights_b=_parse_weights(args.grades_b) if args.grades_b else SynthSpec.grade_weights_b,
        order_noise_a=args.order_noise_a,
        order_noise_b=args.order_noise_b,
        overlap=args.overlap,
        equal_margin=args.equal_margin,
        rater_noise=args.rater_noise,
        click_rate=args.click_rate,
    )
    dataset = generate_synthetic(spec)
    write_dataset(dataset, args.out)
    print(f"wrote {len(dataset.queries)} queries, {len(dataset.judgments)} judgments,"
          f" {len(dataset.preferences)} preferences, {len(dataset.sessions)} sessions"
          f" to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefeval",
        description="Score result-list metrics by their ability to identify user preferences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check dataset files and invariants")
    _add_dataset_arg(p)
    p.add_argument("--max-cutoff", type=int, default=10)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("eval", help="per-query metric table for both variants")
    _add_dataset_arg(p)
    _add_config_args(p, single_metric=True)
    p.add_argument("--cutoff", type=int, default=10)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("sweep", help="PIR grid over thresholds and cut-offs")
    _add_dataset_arg(p)
    _add_config_args(p, single_metric=False)
    p.add_argument("--thresholds", default=None,
                   help="start:stop:step or comma list (default 0:0.30:0.01)")
    p.add_argument("--cutoffs", default="1-10", help="lo-hi or comma list (default 1-10)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel row evaluation")
    p.add_argument("--plot", action="store_true", help="also write SVG line charts")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("breakdown", help="five-category outcome table at one threshold")
    _add_dataset_arg(p)
    _add_config_args(p, single_metric=True)
    p.add_argument("--cutoff", type=int, default=10)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--thresholds", default=None,
                   help="grid for the --series evolution file (default 0:0.30:0.01)")
    p.add_argument("--series", metavar="FILE", help="write share evolution by threshold")
    p.set_defaults(handler=cmd_breakdown)

    p = sub.add_parser("implicit", help="PIR of a session-log measure")
    _add_dataset_arg(p)
    p.add_argument("--measure", required=True, choices=[m.value for m in ImplicitMeasure])
    p.add_argument("--endpoint", default=SessionEndpoint.EXPLICIT_END.value,
                   choices=[e.value for e in SessionEndpoint])
    p.add_argument("--direction", choices=[d.value for d in Direction],
                   help="default: lower is better")
    p.add_argument("--thresholds", help="start:stop:step or comma list, in measure units")
    p.add_argument("--band", metavar="LO:HI",
                   help="only use sessions whose measure value lies in [LO, HI]")
    p.add_argument("--max-cutoff", type=int, default=10)
    p.add_argument("--out", metavar="FILE", help="write threshold/PIR series")
    p.set_defaults(handler=cmd_implicit)

    p = sub.add_parser("stats", help="descriptive interaction and relevance report")
    _add_dataset_arg(p)
    p.add_argument("--max-cutoff", type=int, default=10)
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--queries", type=int, required=True)
    p.add_argument("--raters", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--list-len", type=int, default=10)
    p.add_argument("--preferences", type=int, default=None,
                   help="total verdicts (default: one per query)")
    p.add_argument("--grades-a", help="six comma-separated grade weights for variant A")
    p.add_argument("--grades-b", help="six comma-separated grade weights for variant B")
    p.add_argument("--order-noise-a", type=float, default=0.5,
                   help="0 lays variant A out best-first, 1 shuffles it")
    p.add_argument("--order-noise-b", type=float, default=1.0)
    p.add_argument("--overlap", type=float, default=0.0)
    p.add_argument("--equal-margin", type=float, default=0.03)
    p.add_argument("--rater-noise", type=float, default=0.0)
    p.add_argument("--click-rate", type=float, default=0.7)
    p.set_defaults(handler=cmd_synth)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
