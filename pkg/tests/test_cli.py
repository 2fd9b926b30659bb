import json
import subprocess
import sys

import pytest

from moodcast.cli import main
from moodcast.version import PACKAGE_VERSION


def run_cli(*argv):
    return main(list(argv))


class TestParserBasics:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run_cli("--version")
        assert excinfo.value.code == 0
        assert capsys.readouterr().out.strip() == f"moodcast {PACKAGE_VERSION}"

    def test_no_subcommand_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run_cli()
        assert excinfo.value.code == 2

    def test_unknown_model_rejected_by_parser(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(
                "forecast",
                "--attitude-series", "a.csv",
                "--emotion-series", "e.csv",
                "--model", "kitchen-sink",
                "--out", "m.json",
            )
        assert excinfo.value.code == 2

    def test_console_script_installed(self):
        result = subprocess.run(
            ["moodcast", "--version"], capture_output=True, text=True
        )
        assert result.returncode == 0
        assert result.stdout.strip() == f"moodcast {PACKAGE_VERSION}"


class TestExitCodes:
    def test_missing_input_file_is_2(self, tmp_path, capsys):
        code = run_cli(
            "ingest", "--messages", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path)
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_malformed_lexicon_is_2(self, tmp_path, capsys, pipeline_run):
        out, _ = pipeline_run
        bad = tmp_path / "lexicon.csv"
        bad.write_text("word,valence\nwar,2.08\n", encoding="utf-8")
        code = run_cli(
            "score",
            "--lexicon", str(bad),
            "--buckets", str(out / "buckets.json"),
            "--out", str(tmp_path),
        )
        assert code == 2

    def test_bad_window_is_3(self, tmp_path, capsys, pipeline_run):
        out, _ = pipeline_run
        code = run_cli(
            "smooth",
            "--series", str(out / "attitude_aligned.csv"),
            "--smooth-window", "0",
            "--out", str(tmp_path / "s.csv"),
        )
        assert code == 3

    def test_gap_policy_fail_names_month(self, tmp_path, capsys):
        gappy = tmp_path / "series.csv"
        gappy.write_text(
            "month,rate\n2001-01,1.0\n2001-02,\n2001-03,3.0\n2001-04,4.0\n2001-05,5.0\n",
            encoding="utf-8",
        )
        code = run_cli(
            "smooth", "--series", str(gappy), "--out", str(tmp_path / "s.csv")
        )
        assert code == 3
        err = capsys.readouterr().err
        assert "2001-02" in err
        assert "linear-interpolate" in err

    def test_gap_policy_interpolate_succeeds(self, tmp_path, capsys):
        gappy = tmp_path / "series.csv"
        gappy.write_text(
            "month,rate\n2001-01,1.0\n2001-02,\n2001-03,3.0\n2001-04,4.0\n2001-05,5.0\n",
            encoding="utf-8",
        )
        code = run_cli(
            "smooth",
            "--series", str(gappy),
            "--gap-policy", "linear-interpolate",
            "--out", str(tmp_path / "s.csv"),
        )
        assert code == 0
        assert (tmp_path / "s.csv").exists()

    def test_failed_run_leaves_stage_marker(self, tmp_path, lexicon_path, attitude_path):
        out = tmp_path / "run"
        code = run_cli(
            "run",
            "--lexicon", str(lexicon_path),
            "--messages", str(tmp_path / "missing.jsonl"),
            "--attitude", str(attitude_path),
            "--out", str(out),
            "--surrogates", "2",
        )
        assert code == 2
        marker = (out / "run.failed").read_text(encoding="utf-8")
        assert marker.startswith("load-inputs: ")


class TestComposition:
    """Each subcommand reproduces the matching full-pipeline artifact."""

    def test_ingest_fragment(self, tmp_path, messages_path, pipeline_run, capsys):
        out, _ = pipeline_run
        frag = tmp_path / "ingest"
        assert run_cli(
            "ingest", "--messages", str(messages_path), "--out", str(frag)
        ) == 0
        assert (frag / "buckets.json").read_bytes() == (out / "buckets.json").read_bytes()
        assert (frag / "discussion_counts.csv").read_bytes() == (
            out / "discussion_counts.csv"
        ).read_bytes()
        assert capsys.readouterr().out.count("wrote ") == 2

    def test_score_fragment(self, tmp_path, lexicon_path, pipeline_run):
        out, _ = pipeline_run
        frag = tmp_path / "score"
        assert run_cli(
            "score",
            "--lexicon", str(lexicon_path),
            "--buckets", str(out / "buckets.json"),
            "--out", str(frag),
        ) == 0
        assert (frag / "emotion_series.csv").read_bytes() == (
            out / "emotion_series.csv"
        ).read_bytes()
        assert (frag / "top_words.csv").read_bytes() == (out / "top_words.csv").read_bytes()

    def test_smooth_fragment_emotion(self, tmp_path, pipeline_run):
        out, _ = pipeline_run
        frag = tmp_path / "smoothed.csv"
        assert run_cli(
            "smooth", "--series", str(out / "emotion_series_aligned.csv"), "--out", str(frag)
        ) == 0
        assert frag.read_bytes() == (out / "emotion_series_smoothed.csv").read_bytes()

    def test_smooth_fragment_attitude(self, tmp_path, pipeline_run):
        out, _ = pipeline_run
        frag = tmp_path / "smoothed.csv"
        assert run_cli(
            "smooth", "--series", str(out / "attitude_aligned.csv"), "--out", str(frag)
        ) == 0
        assert frag.read_bytes() == (out / "attitude_smoothed.csv").read_bytes()

    def test_correlate_fragment(self, tmp_path, pipeline_run):
        out, _ = pipeline_run
        frag = tmp_path / "corr.csv"
        assert run_cli(
            "correlate",
            "--series-a", str(out / "emotion_series_smoothed.csv"),
            "--column-a", "valence_mean",
            "--series-b", str(out / "attitude_smoothed.csv"),
            "--out", str(frag),
        ) == 0
        assert frag.read_bytes() == (
            out / "correlations" / "smoothed" / "mean_valence__attitude.csv"
        ).read_bytes()

    def test_suite_fragment(self, tmp_path, pipeline_run):
        out, _ = pipeline_run
        frag = tmp_path / "models.json"
        assert run_cli(
            "suite",
            "--attitude-series", str(out / "attitude_smoothed.csv"),
            "--emotion-series", str(out / "emotion_series_smoothed.csv"),
            "--out", str(frag),
        ) == 0
        assert frag.read_bytes() == (out / "models.json").read_bytes()

    def test_forecast_fragment_single_model(self, tmp_path, pipeline_run):
        out, _ = pipeline_run
        frag = tmp_path / "model.json"
        assert run_cli(
            "forecast",
            "--attitude-series", str(out / "attitude_smoothed.csv"),
            "--emotion-series", str(out / "emotion_series_smoothed.csv"),
            "--model", "both-arousal",
            "--out", str(frag),
        ) == 0
        fragment = json.loads(frag.read_text(encoding="utf-8"))["models"]
        suite = json.loads((out / "models.json").read_text(encoding="utf-8"))["models"]
        expected = next(m for m in suite if m["name"] == "both-arousal")
        assert fragment == [expected]

    def test_surrogate_fragment(self, tmp_path, pipeline_run):
        out, manifest = pipeline_run
        frag = tmp_path / "surrogate.json"
        assert run_cli(
            "surrogate",
            "--attitude-series", str(out / "attitude_smoothed.csv"),
            "--emotion-series", str(out / "emotion_series_smoothed.csv"),
            "--model", manifest["surrogate"]["model"],
            "--surrogates", str(manifest["config"]["surrogates"]),
            "--seed", str(manifest["config"]["seed"]),
            "--out", str(frag),
        ) == 0
        assert frag.read_bytes() == (out / "surrogate.json").read_bytes()


class TestForecastOptions:
    def test_holdout_changes_evaluation_mode(self, tmp_path, pipeline_run):
        out, _ = pipeline_run
        frag = tmp_path / "model.json"
        assert run_cli(
            "forecast",
            "--attitude-series", str(out / "attitude_smoothed.csv"),
            "--emotion-series", str(out / "emotion_series_smoothed.csv"),
            "--model", "both-arousal",
            "--holdout", "12",
            "--out", str(frag),
        ) == 0
        payload = json.loads(frag.read_text(encoding="utf-8"))["models"][0]
        assert payload["evaluation_mode"] == "held-out"
        assert len(payload["errors"]) == 12

    def test_surrogate_full_flag_adds_mae_list(self, tmp_path, pipeline_run):
        out, _ = pipeline_run
        frag = tmp_path / "surrogate.json"
        assert run_cli(
            "surrogate",
            "--attitude-series", str(out / "attitude_smoothed.csv"),
            "--emotion-series", str(out / "emotion_series_smoothed.csv"),
            "--model", "mean-valence",
            "--surrogates", "10",
            "--full",
            "--out", str(frag),
        ) == 0
        payload = json.loads(frag.read_text(encoding="utf-8"))
        assert len(payload["surrogate_maes"]) == 10

    def test_correlate_needs_column_for_emotion_table(self, tmp_path, pipeline_run, capsys):
        out, _ = pipeline_run
        code = run_cli(
            "correlate",
            "--series-a", str(out / "emotion_series_smoothed.csv"),
            "--series-b", str(out / "attitude_smoothed.csv"),
            "--out", str(tmp_path / "corr.csv"),
        )
        assert code == 3
        assert "pick a column" in capsys.readouterr().err


class TestReportCommand:
    def test_writes_default_report(self, pipeline_run, capsys):
        out, _ = pipeline_run
        assert run_cli("report", "--run", str(out)) == 0
        report = out / "report.md"
        assert report.exists()
        assert report.read_text(encoding="utf-8").startswith("# Run report")

    def test_missing_run_dir_is_2(self, tmp_path):
        assert run_cli("report", "--run", str(tmp_path / "absent")) == 2


class TestRunCommand:
    def test_small_run_prints_summary(
        self, tmp_path, lexicon_path, messages_path, attitude_path, capsys
    ):
        out = tmp_path / "run"
        code = run_cli(
            "run",
            "--lexicon", str(lexicon_path),
            "--messages", str(messages_path),
            "--attitude", str(attitude_path),
            "--out", str(out),
            "--surrogates", "3",
        )
        assert code == 0
        stdout = capsys.readouterr().out
        assert "artifacts" in stdout
        assert "p_hat = " in stdout
        assert (out / "run_manifest.json").exists()
        assert not (out / "run.failed").exists()
