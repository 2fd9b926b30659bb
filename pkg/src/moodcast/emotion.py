"""Monthly emotion scoring against an affective lexicon.

Turns monthly token buckets into per-dimension mean and standard deviation
series. Scoring is frequency weighted: a token that appears five times in a
month's subjects counts five times in that month's population statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, Optional

from .ingest import MonthlyBucket
from .lexicon import Lexicon
from .months import check_contiguous

if TYPE_CHECKING:
    from .analysis import NumericSeries

DIMENSIONS = ("valence", "arousal", "dominance")


@dataclass(frozen=True)
class MonthEmotion:
    """Emotion statistics for one month.

    ``mean`` and ``std`` map dimension name to the frequency-weighted
    population statistic, or to None when no token matched the lexicon.
    """

    month: str
    mean: dict[str, Optional[float]]
    std: dict[str, Optional[float]]
    match_count: int
    distinct_words: int


@dataclass(frozen=True)
class EmotionSeries:
    """Month-indexed emotion records on a contiguous axis."""

    months: list[str]
    records: list[MonthEmotion]

    def __post_init__(self) -> None:
        if len(self.months) != len(self.records):
            raise ValueError("months and records must have equal length")
        check_contiguous(self.months, what="emotion series")


def score_month(bucket: MonthlyBucket, lexicon: Lexicon) -> MonthEmotion:
    """Score one month's token counts against the lexicon.

    Returns frequency-weighted population mean and std per dimension over
    the matched tokens. A month with no matches gets None statistics.
    """
    matched: list[tuple[int, dict[str, float]]] = []
    for token, count in bucket.token_counts.items():
        entry = lexicon.lookup(token)
        if entry is not None:
            scores = {dim: entry.score(dim) for dim in DIMENSIONS}
            matched.append((count, scores))
    match_count = sum(count for count, _ in matched)
    if match_count == 0:
        none_stats: dict[str, Optional[float]] = {dim: None for dim in DIMENSIONS}
        return MonthEmotion(
            month=bucket.month,
            mean=dict(none_stats),
            std=dict(none_stats),
            match_count=0,
            distinct_words=0,
        )
    mean: dict[str, Optional[float]] = {}
    std: dict[str, Optional[float]] = {}
    for dim in DIMENSIONS:
        values = {scores[dim] for _, scores in matched}
        if len(values) == 1:
            # All matched tokens share one score: the statistics are exact.
            only = values.pop()
            mean[dim] = only
            std[dim] = 0.0
            continue
        total = math.fsum(count * scores[dim] for count, scores in matched)
        mu = total / match_count
        var = math.fsum(count * (scores[dim] - mu) ** 2 for count, scores in matched) / match_count
        lo = min(scores[dim] for _, scores in matched)
        hi = max(scores[dim] for _, scores in matched)
        mean[dim] = min(max(mu, lo), hi)
        std[dim] = math.sqrt(max(var, 0.0))
    return MonthEmotion(
        month=bucket.month,
        mean=mean,
        std=std,
        match_count=match_count,
        distinct_words=len(matched),
    )


def build_series(buckets: list[MonthlyBucket], lexicon: Lexicon) -> EmotionSeries:
    """Score every bucket; the bucket axis must be contiguous and nonempty."""
    if not buckets:
        raise ValueError("cannot build an emotion series from zero monthly buckets")
    months = [b.month for b in buckets]
    check_contiguous(months, what="monthly buckets")
    return EmotionSeries(months=months, records=[score_month(b, lexicon) for b in buckets])


def component_series(series: EmotionSeries) -> dict[str, "NumericSeries"]:
    """Split an emotion series into its six named numeric components.

    Keys are ``mean-valence`` .. ``std-dominance``; unmatched months carry
    None values.
    """
    from .analysis import NumericSeries

    out: dict[str, NumericSeries] = {}
    for stat in ("mean", "std"):
        for dim in DIMENSIONS:
            values = [getattr(rec, stat)[dim] for rec in series.records]
            out[f"{stat}-{dim}"] = NumericSeries(months=list(series.months), values=values)
    return out


def assemble_from_components(
    months: list[str],
    components: "Mapping[str, NumericSeries]",
    template: EmotionSeries,
) -> EmotionSeries:
    """Rebuild an emotion series from named component values.

    ``components`` holds the six series keyed ``mean-valence`` ..
    ``std-dominance`` on the ``months`` axis; ``template`` supplies the
    match and distinct-word counts per month (its axis must cover
    ``months``). Used to carry counts through smoothing and interpolation.
    """
    by_month = {rec.month: rec for rec in template.records}
    records = []
    for i, month in enumerate(months):
        mean = {dim: components[f"mean-{dim}"].values[i] for dim in DIMENSIONS}
        std = {dim: components[f"std-{dim}"].values[i] for dim in DIMENSIONS}
        source = by_month[month]
        records.append(
            MonthEmotion(
                month=month,
                mean=mean,
                std=std,
                match_count=source.match_count,
                distinct_words=source.distinct_words,
            )
        )
    return EmotionSeries(months=list(months), records=records)


@dataclass(frozen=True)
class WeightedWord:
    """A ranked word with its count and square-root display weight."""

    word: str
    occurrences: int
    display_weight: float


def top_lexicon_words(
    buckets: list[MonthlyBucket],
    lexicon: Lexicon,
    period: Optional[tuple[str, str]] = None,
    k: int = 20,
) -> list[WeightedWord]:
    """Rank the most frequent lexicon-matched words over a month period.

    ``period`` is an inclusive (first, last) month pair; None covers all
    buckets. Ties break alphabetically. ``display_weight`` is the square
    root of the count, for size-proportional rendering downstream.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    totals: dict[str, int] = {}
    for bucket in buckets:
        if period is not None and not period[0] <= bucket.month <= period[1]:
            continue
        for token, count in bucket.token_counts.items():
            if token in lexicon:
                totals[token] = totals.get(token, 0) + count
    ranked = sorted(totals.items(), key=lambda item: (-item[1], item[0]))[:k]
    return [
        WeightedWord(word=w, occurrences=c, display_weight=math.sqrt(c))
        for w, c in ranked
    ]


__all__ = [
    "DIMENSIONS",
    "MonthEmotion",
    "EmotionSeries",
    "WeightedWord",
    "score_month",
    "build_series",
    "component_series",
    "assemble_from_components",
    "top_lexicon_words",
]
