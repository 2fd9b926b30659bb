"""Shared fixtures: the shipped synthetic corpus and one completed run."""

from pathlib import Path

import pytest

from moodcast.ingest import (
    build_threads,
    filter_threads,
    load_attitude_series,
    monthly_subject_buckets,
    parse_messages,
)
from moodcast.lexicon import load_lexicon
from moodcast.pipeline import PipelineConfig, run_pipeline

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def lexicon_path() -> Path:
    return DATA_DIR / "lexicon.csv"


@pytest.fixture(scope="session")
def messages_path() -> Path:
    return DATA_DIR / "messages.jsonl"


@pytest.fixture(scope="session")
def attitude_path() -> Path:
    return DATA_DIR / "approval.csv"


@pytest.fixture(scope="session")
def lexicon(lexicon_path):
    return load_lexicon(lexicon_path)


@pytest.fixture(scope="session")
def corpus_messages(messages_path):
    return parse_messages(messages_path)


@pytest.fixture(scope="session")
def corpus_buckets(corpus_messages):
    threads = filter_threads(build_threads(corpus_messages), 3)
    return monthly_subject_buckets(threads)


@pytest.fixture(scope="session")
def attitude(attitude_path):
    return load_attitude_series(attitude_path)


@pytest.fixture(scope="session")
def pipeline_run(tmp_path_factory, lexicon_path, messages_path, attitude_path):
    """One completed full run (small surrogate count for speed)."""
    out = tmp_path_factory.mktemp("run")
    config = PipelineConfig(
        lexicon_path=lexicon_path,
        messages_path=messages_path,
        attitude_path=attitude_path,
        out_dir=out,
        n_surrogates=50,
    )
    manifest = run_pipeline(config)
    return out, manifest
