"""Corpus and attitude-series ingestion.

Parses message archives (JSONL), groups messages into discussion threads,
applies the minimum-thread-size spam filter, buckets canonical thread
subjects by calendar month, and loads the external monthly attitude series
(CSV). All outputs are plain immutable records on a YYYY-MM month axis.
"""

from __future__ import annotations

import csv
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Callable, Iterable, Union

from .errors import InputFormatError
from .lexicon import tokenize
from .months import check_month, month_of, month_ord, month_range

MESSAGE_KEYS = ("message_id", "thread_id", "group", "timestamp", "subject")

ATTITUDE_HEADER = ("month", "rate")

# Repeated leading reply markers: "re:" in any case, optional whitespace.
_REPLY_RE = re.compile(r"\s*re\s*:", re.IGNORECASE)


@dataclass(frozen=True)
class MessageRecord:
    """One archived message; ``timestamp`` is timezone-aware UTC."""

    message_id: str
    thread_id: str
    group: str
    timestamp: datetime
    subject: str


@dataclass(frozen=True)
class ThreadSummary:
    """Per-thread rollup used by the monthly aggregation.

    ``subject`` is the canonical subject: the earliest message's subject
    line with repeated leading reply markers stripped. ``participant_count``
    is informational; the message wire format carries no author field, so
    threads built from JSONL always report 0.
    """

    thread_id: str
    subject: str
    message_count: int
    first_month: str
    participant_count: int = 0


@dataclass(frozen=True)
class MonthlyBucket:
    """Token counts over canonical subjects of threads starting in a month."""

    month: str
    token_counts: dict[str, int] = field(default_factory=dict)
    thread_count: int = 0


@dataclass(frozen=True)
class AttitudeSeries:
    """External monthly attitude rates in percent, gap-free and sorted."""

    months: list[str]
    values: list[float]


def _parse_timestamp(raw: str) -> datetime:
    """Parse an ISO-8601 instant; naive values are taken as UTC."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    moment = datetime.fromisoformat(text)
    if moment.tzinfo is None:
        return moment.replace(tzinfo=timezone.utc)
    return moment.astimezone(timezone.utc)


def parse_messages(source: Union[str, Path, IO[str]]) -> list[MessageRecord]:
    """Parse a message JSONL stream into records, order preserved.

    Each non-blank line must be a JSON object with exactly the keys
    ``message_id, thread_id, group, timestamp, subject`` (all strings;
    timestamp ISO-8601). Rejects malformed lines with their line number and
    duplicate message ids by name.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            return _parse_message_lines(handle)
    return _parse_message_lines(source)


def _parse_message_lines(lines: Iterable[str]) -> list[MessageRecord]:
    records: list[MessageRecord] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"messages line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise InputFormatError(f"messages line {lineno}: expected a JSON object")
        missing = [k for k in MESSAGE_KEYS if k not in obj]
        extra = [k for k in obj if k not in MESSAGE_KEYS]
        if missing or extra:
            detail = []
            if missing:
                detail.append(f"missing {missing}")
            if extra:
                detail.append(f"unexpected {extra}")
            raise InputFormatError(f"messages line {lineno}: {', '.join(detail)}")
        for key in MESSAGE_KEYS:
            if not isinstance(obj[key], str):
                raise InputFormatError(f"messages line {lineno}: {key} must be a string")
        try:
            timestamp = _parse_timestamp(obj["timestamp"])
        except ValueError:
            raise InputFormatError(
                f"messages line {lineno}: bad timestamp {obj['timestamp']!r}"
            ) from None
        if obj["message_id"] in seen_ids:
            raise InputFormatError(f"duplicate message_id: {obj['message_id']!r}")
        seen_ids.add(obj["message_id"])
        records.append(
            MessageRecord(
                message_id=obj["message_id"],
                thread_id=obj["thread_id"],
                group=obj["group"],
                timestamp=timestamp,
                subject=obj["subject"],
            )
        )
    return records


def strip_reply_markers(subject: str) -> str:
    """Drop repeated leading "re:" markers (any case) and leading space."""
    text = subject
    while True:
        match = _REPLY_RE.match(text)
        if match is None:
            break
        text = text[match.end():]
    return text.lstrip()


def build_threads(messages: list[MessageRecord]) -> list[ThreadSummary]:
    """Roll messages up into one summary per thread.

    The canonical subject comes from the thread's earliest message
    (timestamp ties broken by input order); ``first_month`` is that
    message's UTC calendar month. Output follows first appearance order of
    thread ids.
    """
    earliest: dict[str, tuple[datetime, int, MessageRecord]] = {}
    counts: Counter[str] = Counter()
    for index, message in enumerate(messages):
        counts[message.thread_id] += 1
        key = (message.timestamp, index, message)
        if message.thread_id not in earliest or key < earliest[message.thread_id]:
            earliest[message.thread_id] = key
    summaries = []
    for thread_id, (timestamp, _, first) in earliest.items():
        summaries.append(
            ThreadSummary(
                thread_id=thread_id,
                subject=strip_reply_markers(first.subject),
                message_count=counts[thread_id],
                first_month=month_of(timestamp),
                participant_count=0,
            )
        )
    return summaries


def filter_threads(threads: list[ThreadSummary], min_messages: int = 3) -> list[ThreadSummary]:
    """Keep threads with at least ``min_messages`` messages, order preserved."""
    if min_messages < 1:
        raise ValueError(f"min_messages must be >= 1, got {min_messages}")
    return [t for t in threads if t.message_count >= min_messages]


def monthly_subject_buckets(
    threads: list[ThreadSummary],
    tokenizer: Callable[[str], list[str]] = tokenize,
) -> list[MonthlyBucket]:
    """Bucket canonical-subject tokens by thread first-month.

    The axis runs contiguously from the earliest to the latest first-month;
    months with no threads appear with ``thread_count`` 0 and empty counts.
    Each thread contributes its canonical subject's tokens exactly once.
    """
    if not threads:
        return []
    months = month_range(
        min(threads, key=lambda t: month_ord(t.first_month)).first_month,
        max(threads, key=lambda t: month_ord(t.first_month)).first_month,
    )
    counters: dict[str, Counter[str]] = {m: Counter() for m in months}
    thread_counts: dict[str, int] = {m: 0 for m in months}
    for thread in threads:
        counters[thread.first_month].update(tokenizer(thread.subject))
        thread_counts[thread.first_month] += 1
    return [
        MonthlyBucket(
            month=m,
            token_counts=dict(counters[m]),
            thread_count=thread_counts[m],
        )
        for m in months
    ]


def load_attitude_series(source: Union[str, Path, IO[str]]) -> AttitudeSeries:
    """Load the attitude CSV (header ``month,rate``) as a sorted series.

    Months must form a contiguous range once sorted; rates must lie in
    [0, 100]. Gaps, duplicate months and out-of-range rates are rejected by
    month name.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return _load_attitude_stream(handle)
    return _load_attitude_stream(source)


def _load_attitude_stream(stream: IO[str]) -> AttitudeSeries:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise InputFormatError("attitude series: file has no header") from None
    if tuple(cell.strip() for cell in header) != ATTITUDE_HEADER:
        raise InputFormatError(
            f"attitude header must be {','.join(ATTITUDE_HEADER)!r}, got {','.join(header)!r}"
        )
    rows: dict[str, float] = {}
    for rownum, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise InputFormatError(f"attitude row {rownum}: expected 2 fields, got {len(row)}")
        try:
            month = check_month(row[0].strip())
        except ValueError:
            raise InputFormatError(f"attitude row {rownum}: bad month {row[0]!r}") from None
        if month in rows:
            raise InputFormatError(f"attitude series: duplicate month {month}")
        try:
            rate = float(row[1])
        except ValueError:
            raise InputFormatError(f"attitude row {rownum}: rate is not a number: {row[1]!r}") from None
        if not 0.0 <= rate <= 100.0:
            raise InputFormatError(f"attitude series: rate {rate} outside [0, 100] at {month}")
        rows[month] = rate
    if not rows:
        raise InputFormatError("attitude series: no data rows")
    months = sorted(rows, key=month_ord)
    expected = month_range(months[0], months[-1])
    if months != expected:
        gap = next(m for m in expected if m not in rows)
        raise InputFormatError(f"attitude series: missing month {gap}")
    return AttitudeSeries(months=months, values=[rows[m] for m in months])


__all__ = [
    "MESSAGE_KEYS",
    "ATTITUDE_HEADER",
    "MessageRecord",
    "ThreadSummary",
    "MonthlyBucket",
    "AttitudeSeries",
    "parse_messages",
    "strip_reply_markers",
    "build_threads",
    "filter_threads",
    "monthly_subject_buckets",
    "load_attitude_series",
]
