#!/usr/bin/env python3
"""Regenerate the synthetic test fixtures under tests/data/.

Writes a small affective lexicon, a 66-month message corpus (2000-01
through 2005-06) and a matching monthly attitude series. Output is fully
deterministic for a fixed seed, so the files can be checked in and the
pipeline's determinism tests can rely on them byte for byte.

The lexicon scores are invented for testing; they are plausible values on
the 1-9 scales, not published norms.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

SEED = 20260825

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

FIRST_YEAR, FIRST_MONTH = 2000, 1
N_MONTHS = 66

LEXICON = [
    # word, valence, arousal, dominance
    ("war", 2.08, 7.49, 6.38),
    ("love", 8.72, 6.44, 6.93),
    ("peace", 8.10, 3.20, 6.50),
    ("fear", 2.50, 6.90, 3.10),
    ("anger", 2.30, 7.30, 5.60),
    ("hope", 7.90, 5.40, 6.10),
    ("tax", 3.90, 4.90, 5.20),
    ("money", 7.60, 6.80, 7.00),
    ("win", 8.30, 7.20, 7.50),
    ("loss", 2.60, 5.10, 3.40),
    ("fight", 3.10, 7.10, 6.20),
    ("calm", 7.80, 2.40, 6.40),
    ("storm", 3.60, 6.30, 4.10),
    ("victory", 8.50, 6.90, 7.30),
    ("defeat", 2.40, 5.80, 3.20),
    ("freedom", 8.20, 6.60, 7.10),
    ("danger", 2.70, 7.40, 3.90),
    ("safety", 7.70, 3.50, 6.60),
    ("crisis", 2.20, 6.70, 3.60),
    ("growth", 7.40, 5.20, 6.30),
    ("debt", 2.90, 5.50, 3.80),
    ("jobs", 7.10, 5.00, 6.00),
    ("health", 7.50, 4.60, 6.20),
    ("sick", 2.10, 4.80, 3.00),
    ("strong", 7.90, 6.10, 7.40),
    ("weak", 2.80, 4.20, 2.90),
    ("trust", 8.00, 4.90, 6.70),
    ("doubt", 3.30, 4.40, 3.70),
    ("pride", 7.80, 6.00, 7.00),
    ("shame", 2.50, 5.70, 3.30),
]

FILLER = [
    "the", "and", "on", "about", "over", "for", "with", "plan",
    "vote", "city", "council", "budget", "debate", "2004",
]

GROUPS = ["talk.politics.local", "alt.discussion.civic", "soc.issues.forum"]


def month_axis() -> list[tuple[int, int]]:
    axis = []
    year, month = FIRST_YEAR, FIRST_MONTH
    for _ in range(N_MONTHS):
        axis.append((year, month))
        month += 1
        if month > 12:
            year, month = year + 1, 1
    return axis


def write_lexicon(path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["word", "valence", "arousal", "dominance"])
        for word, v, a, d in LEXICON:
            writer.writerow([word, f"{v:.2f}", f"{a:.2f}", f"{d:.2f}"])


def make_subject(rng: np.random.Generator) -> str:
    lex_words = [w for w, _, _, _ in LEXICON]
    n_lex = int(rng.integers(1, 3))
    n_fill = int(rng.integers(1, 4))
    words = [str(rng.choice(lex_words)) for _ in range(n_lex)]
    words += [str(rng.choice(FILLER)) for _ in range(n_fill)]
    order = rng.permutation(len(words))
    chosen = [words[i] for i in order]
    # Mixed capitalization; scoring lowercases everything.
    styled = []
    for word in chosen:
        style = rng.integers(0, 4)
        if style == 0:
            styled.append(word.upper())
        elif style == 1:
            styled.append(word.capitalize())
        else:
            styled.append(word)
    return " ".join(styled)


def write_messages(path: Path, rng: np.random.Generator) -> None:
    message_no = 0
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for year, month in month_axis():
            n_threads = int(rng.integers(3, 8))
            n_spam = int(rng.integers(0, 3))
            for i in range(n_threads + n_spam):
                thread_id = f"t-{year:04d}{month:02d}-{i}"
                group = str(rng.choice(GROUPS))
                subject = make_subject(rng)
                spam = i >= n_threads
                n_messages = int(rng.integers(1, 3)) if spam else int(rng.integers(3, 7))
                day = int(rng.integers(1, 21))
                hour = int(rng.integers(0, 24))
                minute = int(rng.integers(0, 60))
                base = day * 1440 + hour * 60 + minute
                for j in range(n_messages):
                    if j == 0:
                        line_subject = subject
                        offset = 0
                    else:
                        marker = "Re: " if rng.integers(0, 3) else "RE: Re: "
                        line_subject = marker + subject
                        offset = int(rng.integers(30, 2880)) * j
                    # Keep every message inside its thread's month (28-day cap
                    # stays valid in February).
                    stamp = min(base + offset, 28 * 1440 + 1439)
                    d, rem = divmod(stamp, 1440)
                    h, m = divmod(rem, 60)
                    timestamp = f"{year:04d}-{month:02d}-{d:02d}T{h:02d}:{m:02d}:00Z"
                    record = {
                        "message_id": f"m-{message_no:06d}",
                        "thread_id": thread_id,
                        "group": group,
                        "timestamp": timestamp,
                        "subject": line_subject,
                    }
                    handle.write(json.dumps(record) + "\n")
                    message_no += 1


def write_attitude(path: Path, rng: np.random.Generator) -> None:
    level = 55.0
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["month", "rate"])
        for year, month in month_axis():
            level = 55.0 + 0.8 * (level - 55.0) + float(rng.normal(0.0, 2.0))
            level = min(80.0, max(30.0, level))
            writer.writerow([f"{year:04d}-{month:02d}", f"{level:.1f}"])


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    write_lexicon(DATA_DIR / "lexicon.csv")
    write_messages(DATA_DIR / "messages.jsonl", rng)
    write_attitude(DATA_DIR / "approval.csv", rng)
    print(f"fixtures written to {DATA_DIR}")


if __name__ == "__main__":
    main()
