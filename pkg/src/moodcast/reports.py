"""Artifact readers and writers.

Every writer is deterministic: fixed column and key order, Unix newlines,
floats serialized with ``repr`` round-trip fidelity, dictionary keys sorted
where insertion order is not meaningful. Missing values become empty CSV
fields and JSON nulls.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import IO, Optional, Union

from .analysis import CorrelationTrack, NumericSeries
from .emotion import DIMENSIONS, EmotionSeries, MonthEmotion, WeightedWord
from .errors import InputFormatError
from .forecast import SuiteEntry, SurrogateReport
from .ingest import MonthlyBucket
from .months import check_month

EMOTION_HEADER = (
    "month",
    "valence_mean",
    "valence_std",
    "arousal_mean",
    "arousal_std",
    "dominance_mean",
    "dominance_std",
    "match_count",
    "thread_count",
)

CORRELATION_HEADER = ("month", "r", "n_window", "p_value", "significant")

COUNTS_HEADER = ("month", "thread_count")

TOP_WORDS_HEADER = ("year", "rank", "word", "occurrences", "display_weight")


def _fmt(value: Optional[float]) -> str:
    """Shortest exact decimal form of a float; empty string for missing."""
    if value is None:
        return ""
    return repr(float(value))


def _writer(stream: IO[str]) -> "csv._writer":
    return csv.writer(stream, lineterminator="\n")


def sha256_file(path: Union[str, Path]) -> str:
    """Hex SHA-256 digest of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_emotion_csv(
    path: Union[str, Path],
    series: EmotionSeries,
    thread_counts: dict[str, int],
) -> None:
    """Write the monthly emotion table, one row per month."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        writer.writerow(EMOTION_HEADER)
        for record in series.records:
            row = [record.month]
            for dim in DIMENSIONS:
                row.append(_fmt(record.mean[dim]))
                row.append(_fmt(record.std[dim]))
            row.append(str(record.match_count))
            row.append(str(thread_counts.get(record.month, 0)))
            writer.writerow(row)


def read_emotion_csv(path: Union[str, Path]) -> tuple[EmotionSeries, dict[str, int]]:
    """Read an emotion table back into a series and thread counts."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise InputFormatError(f"{path}: file has no header") from None
        if header != EMOTION_HEADER:
            raise InputFormatError(
                f"{path}: emotion header must be {','.join(EMOTION_HEADER)!r}"
            )
        months: list[str] = []
        records: list[MonthEmotion] = []
        thread_counts: dict[str, int] = {}
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(EMOTION_HEADER):
                raise InputFormatError(
                    f"{path} row {rownum}: expected {len(EMOTION_HEADER)} fields"
                )
            try:
                month = check_month(row[0])
            except ValueError:
                raise InputFormatError(f"{path} row {rownum}: bad month {row[0]!r}") from None
            mean: dict[str, Optional[float]] = {}
            std: dict[str, Optional[float]] = {}
            for i, dim in enumerate(DIMENSIONS):
                mean[dim] = float(row[1 + 2 * i]) if row[1 + 2 * i] else None
                std[dim] = float(row[2 + 2 * i]) if row[2 + 2 * i] else None
            match_count = int(row[7])
            months.append(month)
            records.append(
                MonthEmotion(
                    month=month,
                    mean=mean,
                    std=std,
                    match_count=match_count,
                    distinct_words=0,
                )
            )
            thread_counts[month] = int(row[8])
    return EmotionSeries(months=months, records=records), thread_counts


def write_series_csv(path: Union[str, Path], series: NumericSeries, value_name: str) -> None:
    """Write a plain two-column monthly series."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        writer.writerow(["month", value_name])
        for month, value in zip(series.months, series.values):
            writer.writerow([month, _fmt(value)])


def read_series_csv(path: Union[str, Path], value_name: Optional[str] = None) -> NumericSeries:
    """Read a two-column monthly series; the value header may be checked."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise InputFormatError(f"{path}: file has no header") from None
        if len(header) != 2 or header[0].strip() != "month":
            raise InputFormatError(f"{path}: expected a month,value header")
        if value_name is not None and header[1].strip() != value_name:
            raise InputFormatError(
                f"{path}: expected value column {value_name!r}, got {header[1]!r}"
            )
        months: list[str] = []
        values: list[Optional[float]] = []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise InputFormatError(f"{path} row {rownum}: expected 2 fields")
            try:
                months.append(check_month(row[0]))
            except ValueError:
                raise InputFormatError(f"{path} row {rownum}: bad month {row[0]!r}") from None
            values.append(float(row[1]) if row[1] else None)
    return NumericSeries(months=months, values=values)


def write_correlation_csv(path: Union[str, Path], track: CorrelationTrack) -> None:
    """Write one rolling-correlation track, one row per month."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        writer.writerow(CORRELATION_HEADER)
        for i, month in enumerate(track.months):
            writer.writerow(
                [
                    month,
                    _fmt(track.r[i]),
                    str(track.n_window[i]),
                    _fmt(track.p_value[i]),
                    "true" if track.significant[i] else "false",
                ]
            )


def read_correlation_csv(
    path: Union[str, Path],
    alpha: float = 0.05,
    window: int = 13,
) -> CorrelationTrack:
    """Read a correlation track; alpha and window are not stored in the file."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise InputFormatError(f"{path}: file has no header") from None
        if header != CORRELATION_HEADER:
            raise InputFormatError(
                f"{path}: correlation header must be {','.join(CORRELATION_HEADER)!r}"
            )
        months: list[str] = []
        r: list[Optional[float]] = []
        n_window: list[int] = []
        p_value: list[Optional[float]] = []
        significant: list[bool] = []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise InputFormatError(f"{path} row {rownum}: expected 5 fields")
            months.append(check_month(row[0]))
            r.append(float(row[1]) if row[1] else None)
            n_window.append(int(row[2]))
            p_value.append(float(row[3]) if row[3] else None)
            if row[4] not in ("true", "false"):
                raise InputFormatError(
                    f"{path} row {rownum}: significant must be true or false"
                )
            significant.append(row[4] == "true")
    return CorrelationTrack(
        months=months,
        r=r,
        n_window=n_window,
        p_value=p_value,
        significant=significant,
        alpha=alpha,
        window=window,
    )


def write_counts_csv(path: Union[str, Path], buckets: list[MonthlyBucket]) -> None:
    """Write monthly surviving-thread counts."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        writer.writerow(COUNTS_HEADER)
        for bucket in buckets:
            writer.writerow([bucket.month, str(bucket.thread_count)])


def write_top_words_csv(
    path: Union[str, Path],
    per_year: dict[str, list[WeightedWord]],
) -> None:
    """Write ranked lexicon words per year, years in ascending order."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        writer.writerow(TOP_WORDS_HEADER)
        for year in sorted(per_year):
            for rank, word in enumerate(per_year[year], start=1):
                writer.writerow(
                    [year, str(rank), word.word, str(word.occurrences), _fmt(word.display_weight)]
                )


def write_buckets_json(path: Union[str, Path], buckets: list[MonthlyBucket]) -> None:
    """Write monthly token buckets; token keys are sorted for stability."""
    payload = {
        "buckets": [
            {
                "month": b.month,
                "thread_count": b.thread_count,
                "token_counts": {k: b.token_counts[k] for k in sorted(b.token_counts)},
            }
            for b in buckets
        ]
    }
    _write_json(path, payload)


def read_buckets_json(path: Union[str, Path]) -> list[MonthlyBucket]:
    """Read monthly token buckets back."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(payload, dict) or "buckets" not in payload:
        raise InputFormatError(f"{path}: expected an object with a buckets list")
    buckets = []
    for item in payload["buckets"]:
        try:
            buckets.append(
                MonthlyBucket(
                    month=check_month(item["month"]),
                    token_counts={str(k): int(v) for k, v in item["token_counts"].items()},
                    thread_count=int(item["thread_count"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputFormatError(f"{path}: malformed bucket entry ({exc})") from None
    return buckets


def suite_entry_payload(entry: SuiteEntry, evaluation_mode: str = "in-sample") -> dict:
    """JSON-ready description of one fitted and evaluated model."""
    report = entry.report
    return {
        "name": entry.name,
        "ar_order": entry.model.spec.ar_order,
        "exog_order": entry.model.spec.exog_order,
        "exogenous": list(entry.model.spec.exogenous_names),
        "evaluation_mode": evaluation_mode,
        "coefficients": {
            "ar": [float(c) for c in entry.model.ar_coeffs],
            "exogenous": [[float(c) for c in row] for row in entry.model.exog_coeffs],
            "intercept": float(entry.model.intercept),
        },
        "sse": float(entry.model.sse),
        "mae": float(report.mae),
        "evaluated_months": {
            "first": report.months[0],
            "last": report.months[-1],
        },
        "errors": [float(e) for e in report.errors],
        "cumulative_mean_abs_error": [float(v) for v in report.cumulative_mean_abs_error],
    }


def write_models_json(
    path: Union[str, Path],
    entries: list[SuiteEntry],
    evaluation_mode: str = "in-sample",
) -> None:
    """Write the model comparison suite in its fixed order."""
    _write_json(path, {"models": [suite_entry_payload(e, evaluation_mode) for e in entries]})


def write_surrogate_json(
    path: Union[str, Path],
    report: SurrogateReport,
    model_name: str,
    ar_order: int,
    exog_order: int,
    exogenous: list[str],
    include_maes: bool = False,
) -> None:
    """Write the permutation-test outcome with summary quantiles."""
    ordered = sorted(report.surrogate_maes)

    def quantile(q: float) -> float:
        # Nearest-rank on the sorted surrogate errors.
        index = min(len(ordered) - 1, max(0, round(q * (len(ordered) - 1))))
        return float(ordered[index])

    payload = {
        "model": model_name,
        "ar_order": ar_order,
        "exog_order": exog_order,
        "exogenous": exogenous,
        "seed": report.seed,
        "n_surrogates": report.n_surrogates,
        "empirical_mae": float(report.empirical_mae),
        "p_hat": float(report.p_hat),
        "surrogate_mae_quantiles": {
            "min": float(ordered[0]),
            "p05": quantile(0.05),
            "p25": quantile(0.25),
            "p50": quantile(0.50),
            "p75": quantile(0.75),
            "p95": quantile(0.95),
            "max": float(ordered[-1]),
        },
    }
    if include_maes:
        payload["surrogate_maes"] = [float(m) for m in report.surrogate_maes]
    _write_json(path, payload)


def _write_json(path: Union[str, Path], payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def _read_json(path: Union[str, Path]) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(payload, dict):
        raise InputFormatError(f"{path}: expected a JSON object")
    return payload


def _md_table(headers: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(headers) + " |"]
    lines.append("|" + "|".join(" --- " for _ in headers) + "|")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def render_run_report(run_dir: Union[str, Path]) -> str:
    """Summarize a completed run directory as a markdown document.

    Reads the manifest, the model and surrogate reports, the smoothed
    emotion series, and the smoothed correlation tracks; renders tables
    only, no figures.
    """
    run_dir = Path(run_dir)
    manifest = _read_json(run_dir / "run_manifest.json")
    models = _read_json(run_dir / "models.json")["models"]
    surrogate = _read_json(run_dir / "surrogate.json")

    lines = ["# Run report", ""]
    lines.append(
        f"Pipeline version {manifest['version']}, run created {manifest['created_utc']}."
    )
    lines.append("")

    corpus = manifest["corpus"]
    aligned = manifest["aligned_months"]
    lines.append("## Corpus")
    lines.append("")
    lines.extend(
        _md_table(
            ["metric", "value"],
            [
                ["messages", str(corpus["messages"])],
                ["threads", str(corpus["threads"])],
                ["threads kept", str(corpus["threads_kept"])],
                ["corpus months", f"{corpus['first_month']} to {corpus['last_month']}"],
                ["aligned months", f"{aligned['first']} to {aligned['last']}"],
            ],
        )
    )
    lines.append("")

    emotion_path = run_dir / "emotion_series_smoothed.csv"
    if emotion_path.exists():
        series, _ = read_emotion_csv(emotion_path)
        lines.append("## Smoothed emotion series")
        lines.append("")
        rows = []
        for stat in ("mean", "std"):
            for dim in DIMENSIONS:
                values = [
                    getattr(rec, stat)[dim]
                    for rec in series.records
                    if getattr(rec, stat)[dim] is not None
                ]
                if not values:
                    rows.append([f"{stat}-{dim}", "-", "-", "-"])
                    continue
                rows.append(
                    [
                        f"{stat}-{dim}",
                        f"{min(values):.4f}",
                        f"{max(values):.4f}",
                        f"{sum(values) / len(values):.4f}",
                    ]
                )
        lines.extend(_md_table(["series", "min", "max", "mean"], rows))
        lines.append("")

    lines.append("## Forecast models")
    lines.append("")
    rows = [
        [
            entry["name"],
            ", ".join(entry["exogenous"]) or "-",
            f"{entry['mae']:.4f}",
            f"{entry['sse']:.4f}",
        ]
        for entry in models
    ]
    lines.extend(_md_table(["model", "exogenous series", "mae", "sse"], rows))
    lines.append("")
    by_name = {entry["name"]: entry for entry in models}
    if "ar" in by_name:
        others = [e for e in models if e["name"] != "ar"]
        if others:
            best = min(others, key=lambda e: e["mae"])
            ar_mae = by_name["ar"]["mae"]
            if ar_mae > 0:
                gain = (ar_mae - best["mae"]) / ar_mae * 100.0
                lines.append(
                    f"Best exogenous model: {best['name']} "
                    f"(mae {best['mae']:.4f}, {gain:.1f}% below the benchmark's "
                    f"{ar_mae:.4f})."
                )
                lines.append("")

    lines.append("## Surrogate test")
    lines.append("")
    quantiles = surrogate["surrogate_mae_quantiles"]
    lines.extend(
        _md_table(
            ["metric", "value"],
            [
                ["model", surrogate["model"]],
                ["surrogates", str(surrogate["n_surrogates"])],
                ["seed", str(surrogate["seed"])],
                ["empirical mae", f"{surrogate['empirical_mae']:.4f}"],
                ["p_hat", f"{surrogate['p_hat']:.4f}"],
                ["surrogate mae min", f"{quantiles['min']:.4f}"],
                ["surrogate mae median", f"{quantiles['p50']:.4f}"],
                ["surrogate mae max", f"{quantiles['max']:.4f}"],
            ],
        )
    )
    lines.append("")

    corr_dir = run_dir / "correlations" / "smoothed"
    if corr_dir.is_dir():
        lines.append("## Correlations (smoothed series)")
        lines.append("")
        rows = []
        for path in sorted(corr_dir.glob("*.csv")):
            track = read_correlation_csv(path)
            pair = path.stem.replace("__", " vs ")
            total = len(track.months)
            hits = sum(1 for flag in track.significant if flag)
            present = [r for r in track.r if r is not None]
            mean_r = f"{sum(present) / len(present):.3f}" if present else "-"
            rows.append([pair, f"{hits}/{total}", mean_r])
        lines.extend(_md_table(["pair", "significant months", "mean r"], rows))
        lines.append("")

    if manifest.get("warnings"):
        lines.append("## Warnings")
        lines.append("")
        for message in manifest["warnings"]:
            lines.append(f"- {message}")
        lines.append("")

    return "\n".join(lines)


__all__ = [
    "EMOTION_HEADER",
    "CORRELATION_HEADER",
    "COUNTS_HEADER",
    "TOP_WORDS_HEADER",
    "sha256_file",
    "write_emotion_csv",
    "read_emotion_csv",
    "write_series_csv",
    "read_series_csv",
    "write_correlation_csv",
    "read_correlation_csv",
    "write_counts_csv",
    "write_top_words_csv",
    "write_buckets_json",
    "read_buckets_json",
    "suite_entry_payload",
    "write_models_json",
    "write_surrogate_json",
    "render_run_report",
]
