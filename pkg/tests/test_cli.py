import dataclasses

import pytest

from conftest import make_session
from prefeval.cli import main
from prefeval.config import Metric, MetricConfig
from prefeval.data_io import FILE_NAMES, load_dataset, write_dataset
from prefeval.dataset import Variant
from prefeval.metrics import esl
from prefeval.scales import DiscountFunction
from prefeval.scoring import consensus_lists


@pytest.fixture
def synth_dir(tmp_path):
    out = tmp_path / "ds"
    assert main(["synth", "--out", str(out), "--queries", "8", "--raters", "3",
                 "--seed", "5", "--preferences", "16"]) == 0
    return out


class TestValidateCommand:
    def test_valid_dataset_exits_zero(self, synth_dir, capsys):
        assert main(["validate", str(synth_dir)]) == 0
        out = capsys.readouterr().out
        assert "errors=0" in out

    def test_grade_out_of_range_exits_one_with_location(self, synth_dir, capsys):
        path = synth_dir / FILE_NAMES["judgments"]
        lines = path.read_text().splitlines()
        lines[3] = lines[3].rsplit("\t", 2)[0] + "\t9\ttrue"
        path.write_text("\n".join(lines) + "\n")
        assert main(["validate", str(synth_dir)]) == 1
        err = capsys.readouterr().err
        assert ":4:" in err and "grade" in err

    def test_missing_judgment_strict_vs_lenient(self, synth_dir, capsys):
        path = synth_dir / FILE_NAMES["judgments"]
        lines = path.read_text().splitlines()
        victim = "\t".join(lines[-1].split("\t")[:2])  # (query_id, result_id)
        kept = [line for line in lines if not line.startswith(victim + "\t")]
        path.write_text("\n".join(kept) + "\n")
        assert main(["validate", str(synth_dir)]) == 1
        assert "missing-judgment" in capsys.readouterr().err
        assert main(["validate", str(synth_dir), "--lenient"]) == 0
        assert "warning" in capsys.readouterr().err

    def test_unknown_command_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestEvalCommand:
    def test_map_worked_example(self, tmp_path, two_query_map_dataset, capsys):
        write_dataset(two_query_map_dataset, tmp_path)
        code = main(["eval", str(tmp_path), "--metric", "map", "--discount", "rank",
                     "--norm", "known-relevant", "--cutoff", "5"])
        assert code == 0
        out = capsys.readouterr().out
        assert "qa\t0.9167" in out
        assert "qb\t0.4778" in out
        assert "mean\t0.6972" in out

    def test_perfectly_ordered_ndcg_is_one(self, tmp_path, two_query_map_dataset, capsys):
        # order each variant A by grade so the actual equals the ideal ranking
        ds = two_query_map_dataset
        pairs = []
        for pair in ds.list_pairs:
            graded = sorted(
                pair.variant_a,
                key=lambda rid: ds.grades[(pair.query_id, rid)]["r1"],
            )
            pairs.append(dataclasses.replace(pair, variant_a=tuple(graded)))
        write_dataset(dataclasses.replace(ds, list_pairs=tuple(pairs)), tmp_path)
        assert main(["eval", str(tmp_path), "--metric", "ndcg", "--cutoff", "5"]) == 0
        out_lines = capsys.readouterr().out.splitlines()
        for line in out_lines[1:3]:
            assert line.split("\t")[1] == "1.0000"

    def test_esl_matches_direct_module_call(self, synth_dir, capsys):
        assert main(["eval", str(synth_dir), "--metric", "esl", "--n", "2.5",
                     "--discount", "rank", "--cutoff", "10"]) == 0
        out = capsys.readouterr().out
        ds = load_dataset(synth_dir)
        first = ds.list_pairs[0]
        rels_a, _, _ = consensus_lists(ds, first.query_id, MetricConfig(
            Metric.ESL, DiscountFunction.rank(), esl_n=2.5).scale, 10)
        want = esl(rels_a, 10, DiscountFunction.rank(), n=2.5)
        got = out.splitlines()[1].split("\t")[1]
        assert got == f"{want:.4f}"  # the CLI prints the module value verbatim

    def test_no_preferences_needed_for_eval(self, tmp_path, two_query_map_dataset, capsys):
        ds = dataclasses.replace(two_query_map_dataset, preferences=())
        write_dataset(ds, tmp_path)
        assert main(["eval", str(tmp_path), "--metric", "precision", "--cutoff", "5"]) == 0


class TestSweepCommand:
    def test_worked_example_grid_values(self, tmp_path, sample_pir_dataset):
        data = tmp_path / "data"
        out = tmp_path / "out"
        write_dataset(sample_pir_dataset, data)
        code = main(["sweep", str(data), "--out", str(out),
                     "--metrics", "precision", "--thresholds", "0,0.15,0.35",
                     "--cutoffs", "10"])
        assert code == 0
        grid_text = (out / "grid_precision_none_six_same-user.tsv").read_text()
        lines = [line.split("\t") for line in grid_text.splitlines()]
        assert lines[0] == ["threshold", "c10"]
        assert [row[1] for row in lines[1:]] == ["0.7500", "0.8750", "0.6250"]
        best = (out / "best_threshold_pir.tsv").read_text().splitlines()
        assert best[1].split("\t") == ["10", "0.8750"]
        best_t = (out / "best_threshold_value.tsv").read_text().splitlines()
        assert best_t[1].split("\t") == ["10", "0.1500"]
        zero = (out / "zero_threshold_pir.tsv").read_text().splitlines()
        assert zero[1].split("\t") == ["10", "0.7500"]

    def test_cutoff_one_identical_top_grades_flat_series(self, tmp_path, sample_pir_dataset):
        # every variant leads with a grade-1 result, so at cut-off 1 all
        # score differences vanish and the series is flat at baseline
        data, out = tmp_path / "d", tmp_path / "o"
        write_dataset(sample_pir_dataset, data)
        assert main(["sweep", str(data), "--out", str(out),
                     "--metrics", "precision", "--cutoffs", "1"]) == 0
        rows = (out / "grid_precision_none_six_same-user.tsv").read_text().splitlines()
        assert {row.split("\t")[1] for row in rows[1:]} == {"0.5000"}

    def test_default_grid_shape_and_counts_files(self, synth_dir, tmp_path):
        out = tmp_path / "sweep"
        assert main(["sweep", str(synth_dir), "--out", str(out)]) == 0
        grids = sorted(out.glob("grid_*.tsv"))
        assert len(grids) == 6
        for path in grids:
            rows = path.read_text().splitlines()
            assert len(rows) == 1 + 31
            assert len(rows[0].split("\t")) == 1 + 10
        counts = sorted(out.glob("counts_*.tsv"))
        assert len(counts) == 6
        body = counts[0].read_text().splitlines()
        assert len(body) == 1 + 10 * 31

    def test_parallel_sweep_is_byte_identical(self, synth_dir, tmp_path):
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        assert main(["sweep", str(synth_dir), "--out", str(serial), "--cutoffs", "1-4"]) == 0
        assert main(["sweep", str(synth_dir), "--out", str(parallel), "--cutoffs", "1-4",
                     "--jobs", "4"]) == 0
        for path in sorted(serial.iterdir()):
            assert path.read_bytes() == (parallel / path.name).read_bytes()

    def test_plot_flag_writes_svg(self, synth_dir, tmp_path):
        out = tmp_path / "sweep"
        assert main(["sweep", str(synth_dir), "--out", str(out), "--metrics", "ndcg",
                     "--cutoffs", "1-3", "--plot"]) == 0
        assert (out / "grid_ndcg_log2_six_same-user.svg").exists()
        assert (out / "best_threshold_pir.svg").read_text().startswith("<svg")

    def test_query_type_filter_flag(self, synth_dir, tmp_path):
        out = tmp_path / "sweep"
        assert main(["sweep", str(synth_dir), "--out", str(out), "--metrics", "precision",
                     "--query-type", "informational", "--cutoffs", "1-2"]) == 0
        assert (out / "grid_precision_none_six_same-user_informational.tsv").exists()

    def test_other_users_rating_source(self, synth_dir, tmp_path):
        out = tmp_path / "sweep"
        assert main(["sweep", str(synth_dir), "--out", str(out), "--metrics", "ndcg",
                     "--rating-source", "other-users", "--cutoffs", "1-3"]) == 0
        assert (out / "grid_ndcg_log2_six_other-users.tsv").exists()

    def test_click_based_discount_from_weight_file(self, synth_dir, tmp_path):
        weights = tmp_path / "weights.txt"
        weights.write_text("".join(f"{r} {1 / r}\n" for r in range(1, 11)))
        out = tmp_path / "sweep"
        assert main(["sweep", str(synth_dir), "--out", str(out), "--metrics", "ndcg",
                     "--discounts", "click", "--click-weights", str(weights),
                     "--cutoffs", "1-3"]) == 0
        assert (out / "grid_ndcg_click_six_same-user.tsv").exists()


class TestBreakdownCommand:
    def test_category_table(self, tmp_path, sample_pir_dataset, capsys):
        write_dataset(sample_pir_dataset, tmp_path)
        code = main(["breakdown", str(tmp_path), "--metric", "precision",
                     "--threshold", "0", "--cutoff", "10"])
        assert code == 0
        out = capsys.readouterr().out
        assert "correct_pref\t3\t0.6000" in out
        assert "reversed_pref\t1\t0.2000" in out
        assert "pir\t0.7500" in out

    def test_series_file(self, tmp_path, sample_pir_dataset):
        data = tmp_path / "d"
        write_dataset(sample_pir_dataset, data)
        series = tmp_path / "series.tsv"
        assert main(["breakdown", str(data), "--metric", "precision",
                     "--threshold", "0.15", "--series", str(series)]) == 0
        rows = series.read_text().splitlines()
        assert rows[0].split("\t")[:2] == ["threshold", "correct_pref"]
        assert len(rows) == 1 + 31

    def test_no_preferences_exits_three(self, tmp_path, two_query_map_dataset):
        ds = dataclasses.replace(two_query_map_dataset, preferences=())
        write_dataset(ds, tmp_path)
        assert main(["breakdown", str(tmp_path), "--metric", "precision",
                     "--threshold", "0", "--cutoff", "5"]) == 3


class TestImplicitCommand:
    def test_series_and_out_file(self, synth_dir, tmp_path, capsys):
        out_file = tmp_path / "implicit.tsv"
        code = main(["implicit", str(synth_dir), "--measure", "mean-click-rank",
                     "--out", str(out_file)])
        assert code == 0
        assert "best" in capsys.readouterr().out
        assert out_file.read_text().startswith("threshold\tpir")

    def test_no_sessions_exits_three(self, tmp_path, sample_pir_dataset):
        write_dataset(sample_pir_dataset, tmp_path)
        assert main(["implicit", str(tmp_path), "--measure", "clicks"]) == 3

    def test_direction_flag(self, synth_dir, capsys):
        assert main(["implicit", str(synth_dir), "--measure", "duration",
                     "--direction", "higher-better", "--thresholds", "0,30"]) == 0

    def test_band_filter(self, synth_dir, capsys):
        code = main(["implicit", str(synth_dir), "--measure", "duration",
                     "--band", "0:45", "--thresholds", "0,10"])
        assert code in (0, 3)  # narrow bands may leave nothing to compare
        assert main(["implicit", str(synth_dir), "--measure", "duration",
                     "--band", "45:0"]) == 2


class TestStatsCommand:
    def test_report_sections(self, synth_dir, capsys):
        assert main(["stats", str(synth_dir)]) == 0
        out = capsys.readouterr().out
        assert "variant A" in out and "variant B" in out
        assert "zero-click share" in out
        assert "query type informational" in out

    def test_sessionless_dataset(self, tmp_path, sample_pir_dataset, capsys):
        write_dataset(sample_pir_dataset, tmp_path)
        assert main(["stats", str(tmp_path)]) == 0
        assert "undefined (no sessions)" in capsys.readouterr().out


class TestSynthCommand:
    def test_written_dataset_loads_strict(self, synth_dir):
        ds = load_dataset(synth_dir)
        assert len(ds.queries) == 8
        assert len(ds.preferences) == 16

    def test_deterministic_across_runs(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["synth", "--out", str(out), "--queries", "4", "--raters", "2",
                         "--seed", "123"]) == 0
        for name in FILE_NAMES.values():
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_infeasible_spec_is_usage_error(self, tmp_path, capsys):
        assert main(["synth", "--out", str(tmp_path / "x"), "--queries", "2",
                     "--raters", "1", "--seed", "1", "--preferences", "4"]) == 2
        assert "usage error" in capsys.readouterr().err


class TestSessionsInCli:
    def test_sessions_round_trip_through_cli_files(self, tmp_path, sample_pir_dataset):
        ds = dataclasses.replace(
            sample_pir_dataset,
            sessions=(
                make_session(qid="q1", variant=Variant.A, start=100, end=160,
                             click_ranks_ts=((1, 110), (2, 130)), satisfied=True),
                make_session(qid="q1", variant=Variant.B, start=100, end=120,
                             satisfied=False),
            ),
        )
        write_dataset(ds, tmp_path)
        assert load_dataset(tmp_path) == ds
