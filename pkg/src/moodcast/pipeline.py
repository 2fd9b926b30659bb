"""Full-run orchestration: inputs to plot-ready artifacts in one pass.

``run_pipeline`` executes every stage in order (ingest, score, align, gap
policy, smooth, correlate, forecast, surrogate) and writes all artifacts
plus a manifest of configuration, input digests and artifact digests. The
only timestamp lives in the manifest, so reruns with identical inputs and
configuration reproduce every other artifact byte for byte. A failed stage
leaves a ``run.failed`` marker naming the stage.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .analysis import (
    NumericSeries,
    hamming_smooth,
    linear_interpolate,
    rolling_correlation,
)
from .emotion import (
    assemble_from_components,
    build_series,
    component_series,
    top_lexicon_words,
)
from .forecast import (
    MODEL_EXOGENOUS,
    MODEL_NAMES,
    ArmaSpec,
    model_suite,
    surrogate_test,
)
from .ingest import (
    build_threads,
    filter_threads,
    load_attitude_series,
    monthly_subject_buckets,
    parse_messages,
)
from .lexicon import load_lexicon
from .months import month_ord
from .reports import (
    _write_json,
    sha256_file,
    write_buckets_json,
    write_correlation_csv,
    write_counts_csv,
    write_emotion_csv,
    write_models_json,
    write_series_csv,
    write_surrogate_json,
    write_top_words_csv,
)
from .version import PACKAGE_VERSION

logger = logging.getLogger(__name__)

GAP_POLICIES = ("fail", "linear-interpolate")

# Canonical series order for correlation pair files.
SERIES_ORDER = (
    "mean_valence",
    "mean_arousal",
    "mean_dominance",
    "std_valence",
    "std_arousal",
    "std_dominance",
    "attitude",
)

FAILURE_MARKER = "run.failed"


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a full run needs; defaults are the reference setup."""

    lexicon_path: Path
    messages_path: Path
    attitude_path: Path
    out_dir: Path
    min_messages: int = 3
    smooth_window: int = 4
    corr_window: int = 13
    alpha: float = 0.05
    ar_order: int = 1
    exog_order: int = 3
    n_surrogates: int = 1000
    seed: int = 0
    gap_policy: str = "fail"
    surrogate_model: Optional[str] = None
    surrogate_full: bool = False

    def __post_init__(self) -> None:
        if self.gap_policy not in GAP_POLICIES:
            raise ValueError(
                f"gap_policy must be one of {GAP_POLICIES}, got {self.gap_policy!r}"
            )
        if self.surrogate_model is not None:
            if self.surrogate_model not in MODEL_NAMES or self.surrogate_model == "ar":
                raise ValueError(
                    f"surrogate_model must be an exogenous model name, got {self.surrogate_model!r}"
                )

    def flag_view(self) -> dict:
        """Configuration under its command-line flag names, for the manifest."""
        return {
            "lexicon": str(self.lexicon_path),
            "messages": str(self.messages_path),
            "attitude": str(self.attitude_path),
            "out": str(self.out_dir),
            "min_messages": self.min_messages,
            "smooth_window": self.smooth_window,
            "corr_window": self.corr_window,
            "alpha": self.alpha,
            "p": self.ar_order,
            "q": self.exog_order,
            "surrogates": self.n_surrogates,
            "seed": self.seed,
            "gap_policy": self.gap_policy,
            "surrogate_model": self.surrogate_model,
            "surrogate_full": self.surrogate_full,
        }


def _slice_numeric(series: NumericSeries, first: str, last: str) -> NumericSeries:
    lo = series.months.index(first)
    hi = series.months.index(last)
    return NumericSeries(months=series.months[lo : hi + 1], values=series.values[lo : hi + 1])


def _component_key(name: str) -> str:
    return name.replace("-", "_")


def run_pipeline(config: PipelineConfig) -> dict:
    """Run every stage and return the manifest dictionary.

    Any stage failure writes ``run.failed`` (stage name plus diagnostic)
    into the output directory and re-raises the underlying error.
    """
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    marker = out / FAILURE_MARKER
    if marker.exists():
        marker.unlink()
    artifacts: list[Path] = []
    caught_warnings: list[str] = []
    stage = "load-inputs"
    try:
        logger.info("stage load-inputs")
        lexicon = load_lexicon(config.lexicon_path)
        messages = parse_messages(config.messages_path)
        attitude = load_attitude_series(config.attitude_path)

        stage = "ingest"
        logger.info("stage ingest: %d messages", len(messages))
        threads = build_threads(messages)
        kept = filter_threads(threads, config.min_messages)
        buckets = monthly_subject_buckets(kept)
        if not buckets:
            raise ValueError(
                f"no threads with at least {config.min_messages} messages; nothing to score"
            )
        write_buckets_json(out / "buckets.json", buckets)
        artifacts.append(out / "buckets.json")
        write_counts_csv(out / "discussion_counts.csv", buckets)
        artifacts.append(out / "discussion_counts.csv")

        stage = "score"
        logger.info("stage score: %d monthly buckets", len(buckets))
        raw_emotion = build_series(buckets, lexicon)
        thread_counts = {b.month: b.thread_count for b in buckets}
        write_emotion_csv(out / "emotion_series.csv", raw_emotion, thread_counts)
        artifacts.append(out / "emotion_series.csv")
        per_year: dict[str, list] = {}
        for year in sorted({m[:4] for m in raw_emotion.months}):
            words = top_lexicon_words(buckets, lexicon, period=(f"{year}-01", f"{year}-12"))
            if words:
                per_year[year] = words
        write_top_words_csv(out / "top_words.csv", per_year)
        artifacts.append(out / "top_words.csv")

        stage = "align"
        first = max(raw_emotion.months[0], attitude.months[0], key=month_ord)
        last = min(raw_emotion.months[-1], attitude.months[-1], key=month_ord)
        if month_ord(first) > month_ord(last):
            raise ValueError(
                f"corpus months {raw_emotion.months[0]}..{raw_emotion.months[-1]} and "
                f"attitude months {attitude.months[0]}..{attitude.months[-1]} do not overlap"
            )
        logger.info("stage align: common range %s..%s", first, last)
        components = {
            name: _slice_numeric(series, first, last)
            for name, series in component_series(raw_emotion).items()
        }
        attitude_series = _slice_numeric(
            NumericSeries(months=attitude.months, values=list(attitude.values)),
            first,
            last,
        )

        stage = "gaps"
        interpolated: dict[str, list[str]] = {}
        for name in sorted(components):
            series = components[name]
            gaps = [m for m, v in zip(series.months, series.values) if v is None]
            if not gaps:
                continue
            if config.gap_policy == "fail":
                raise ValueError(
                    f"series {name} has no value for {gaps[0]} "
                    f"({len(gaps)} gap month(s) in {first}..{last}); rerun with "
                    "gap policy linear-interpolate to fill gaps"
                )
            components[name] = linear_interpolate(series)
            interpolated[name] = gaps
        if interpolated:
            logger.info(
                "stage gaps: interpolated %d series", len(interpolated)
            )
        aligned_emotion = assemble_from_components(
            attitude_series.months, components, raw_emotion
        )
        aligned_counts = {m: thread_counts.get(m, 0) for m in attitude_series.months}
        write_emotion_csv(out / "emotion_series_aligned.csv", aligned_emotion, aligned_counts)
        artifacts.append(out / "emotion_series_aligned.csv")
        write_series_csv(out / "attitude_aligned.csv", attitude_series, "rate")
        artifacts.append(out / "attitude_aligned.csv")

        stage = "smooth"
        logger.info("stage smooth: window %d", config.smooth_window)
        smooth_components = {
            name: hamming_smooth(series, config.smooth_window)
            for name, series in components.items()
        }
        smooth_attitude = hamming_smooth(attitude_series, config.smooth_window)
        smoothed_emotion = assemble_from_components(
            attitude_series.months, smooth_components, raw_emotion
        )
        write_emotion_csv(
            out / "emotion_series_smoothed.csv", smoothed_emotion, aligned_counts
        )
        artifacts.append(out / "emotion_series_smoothed.csv")
        write_series_csv(out / "attitude_smoothed.csv", smooth_attitude, "rate")
        artifacts.append(out / "attitude_smoothed.csv")

        stage = "correlate"
        logger.info("stage correlate: window %d, alpha %s", config.corr_window, config.alpha)
        for label, pool in (
            ("raw", {**{_component_key(n): s for n, s in components.items()},
                     "attitude": attitude_series}),
            ("smoothed", {**{_component_key(n): s for n, s in smooth_components.items()},
                          "attitude": smooth_attitude}),
        ):
            pair_dir = out / "correlations" / label
            pair_dir.mkdir(parents=True, exist_ok=True)
            for i, name_a in enumerate(SERIES_ORDER):
                for name_b in SERIES_ORDER[i + 1 :]:
                    track = rolling_correlation(
                        pool[name_a], pool[name_b], config.corr_window, config.alpha
                    )
                    path = pair_dir / f"{name_a}__{name_b}.csv"
                    write_correlation_csv(path, track)
                    artifacts.append(path)

        stage = "forecast"
        logger.info(
            "stage forecast: %d models, lag orders %d/%d",
            len(MODEL_NAMES),
            config.ar_order,
            config.exog_order,
        )
        with warnings.catch_warnings(record=True) as fit_warnings:
            warnings.simplefilter("always")
            entries = model_suite(
                smooth_attitude,
                smooth_components,
                ar_order=config.ar_order,
                exog_order=config.exog_order,
            )
        caught_warnings.extend(str(w.message) for w in fit_warnings)
        write_models_json(out / "models.json", entries)
        artifacts.append(out / "models.json")

        stage = "surrogate"
        if config.surrogate_model is None:
            candidates = [e for e in entries if e.name != "ar"]
            chosen = min(candidates, key=lambda e: (e.report.mae, MODEL_NAMES.index(e.name)))
        else:
            chosen = next(e for e in entries if e.name == config.surrogate_model)
        logger.info(
            "stage surrogate: model %s, %d surrogates", chosen.name, config.n_surrogates
        )
        spec = ArmaSpec(
            ar_order=config.ar_order,
            exog_order=config.exog_order,
            exogenous_names=MODEL_EXOGENOUS[chosen.name],
        )
        exog = {n: smooth_components[n] for n in spec.exogenous_names}
        with warnings.catch_warnings(record=True) as fit_warnings:
            warnings.simplefilter("always")
            surrogate = surrogate_test(
                spec,
                smooth_attitude,
                exog,
                n_surrogates=config.n_surrogates,
                seed=config.seed,
            )
        caught_warnings.extend(str(w.message) for w in fit_warnings)
        write_surrogate_json(
            out / "surrogate.json",
            surrogate,
            model_name=chosen.name,
            ar_order=config.ar_order,
            exog_order=config.exog_order,
            exogenous=list(spec.exogenous_names),
            include_maes=config.surrogate_full,
        )
        artifacts.append(out / "surrogate.json")

        stage = "manifest"
        manifest = {
            "version": PACKAGE_VERSION,
            "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "config": config.flag_view(),
            "inputs": {
                "lexicon": {
                    "path": str(config.lexicon_path),
                    "sha256": sha256_file(config.lexicon_path),
                },
                "messages": {
                    "path": str(config.messages_path),
                    "sha256": sha256_file(config.messages_path),
                },
                "attitude": {
                    "path": str(config.attitude_path),
                    "sha256": sha256_file(config.attitude_path),
                },
            },
            "corpus": {
                "messages": len(messages),
                "threads": len(threads),
                "threads_kept": len(kept),
                "first_month": raw_emotion.months[0],
                "last_month": raw_emotion.months[-1],
            },
            "aligned_months": {"first": first, "last": last},
            "interpolated_months": interpolated,
            "surrogate": {
                "model": chosen.name,
                "p_hat": surrogate.p_hat,
                "empirical_mae": surrogate.empirical_mae,
            },
            "warnings": caught_warnings,
            "artifacts": {
                str(path.relative_to(out)): sha256_file(path)
                for path in sorted(artifacts)
            },
        }
        _write_json(out / "run_manifest.json", manifest)
        logger.info("run complete: %d artifacts in %s", len(artifacts) + 1, out)
        return manifest
    except Exception as exc:
        marker.write_text(f"{stage}: {exc}\n", encoding="utf-8")
        raise


__all__ = [
    "GAP_POLICIES",
    "SERIES_ORDER",
    "FAILURE_MARKER",
    "PipelineConfig",
    "run_pipeline",
]
