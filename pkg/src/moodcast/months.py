"""Calendar-month axis helpers.

Months are passed around as ``YYYY-MM`` strings everywhere; these helpers
centralize validation, ordering and range arithmetic so every module agrees
on what a contiguous month axis means.
"""

from __future__ import annotations

import re
from datetime import datetime, timezone

_MONTH_RE = re.compile(r"^(\d{4})-(0[1-9]|1[0-2])$")


def check_month(month: str) -> str:
    """Validate a YYYY-MM string and return it unchanged."""
    if not isinstance(month, str) or not _MONTH_RE.match(month):
        raise ValueError(f"not a valid YYYY-MM month: {month!r}")
    return month


def month_ord(month: str) -> int:
    """Map YYYY-MM to a monotone integer (months since 0000-01)."""
    check_month(month)
    year, mon = month.split("-")
    return int(year) * 12 + int(mon) - 1


def ord_month(ordinal: int) -> str:
    """Inverse of :func:`month_ord`."""
    year, mon = divmod(ordinal, 12)
    return f"{year:04d}-{mon + 1:02d}"


def month_range(first: str, last: str) -> list[str]:
    """All months from ``first`` to ``last`` inclusive."""
    lo, hi = month_ord(first), month_ord(last)
    if hi < lo:
        raise ValueError(f"month range is reversed: {first} > {last}")
    return [ord_month(i) for i in range(lo, hi + 1)]


def month_of(instant: datetime) -> str:
    """Calendar month of a timestamp, evaluated in UTC."""
    if instant.tzinfo is not None:
        instant = instant.astimezone(timezone.utc)
    return f"{instant.year:04d}-{instant.month:02d}"


def check_contiguous(months: list[str], what: str = "series") -> list[str]:
    """Require a non-empty, strictly increasing, gap-free month list."""
    if not months:
        raise ValueError(f"{what}: month axis is empty")
    ords = [month_ord(m) for m in months]
    for prev, cur, m in zip(ords, ords[1:], months[1:]):
        if cur != prev + 1:
            raise ValueError(
                f"{what}: month axis not contiguous near {m} "
                f"(expected {ord_month(prev + 1)})"
            )
    return months
