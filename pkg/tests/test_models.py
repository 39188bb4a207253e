import datetime as dt
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hansardqa.models import (
    Chunk,
    Enrichment,
    FeedbackEvent,
    SearchFilter,
    SessionDocument,
    SpeakerTurn,
    format_rfc3339,
    parse_rfc3339,
)

printable = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"),
    max_size=40,
)
dates = st.dates(min_value=dt.date(1900, 1, 1), max_value=dt.date(2100, 1, 1))
timestamps = st.datetimes(
    min_value=dt.datetime(1970, 1, 1),
    max_value=dt.datetime(2100, 1, 1),
    timezones=st.just(dt.timezone.utc),
)


def roundtrip(record):
    # through JSON text, exactly as the stores do it
    encoded = json.loads(json.dumps(record.to_dict(), ensure_ascii=False))
    return type(record).from_dict(encoded)


@given(
    doc_id=printable.filter(bool),
    session_date=dates,
    session_type=st.sampled_from(["plenary", "committee"]),
    language=printable,
    source_url=printable,
    turn_count=st.integers(min_value=0, max_value=10_000),
)
@settings(max_examples=50, deadline=None)
def test_document_roundtrip(**kwargs):
    record = SessionDocument(**kwargs)
    assert roundtrip(record) == record


@given(
    turn_id=printable.filter(bool),
    doc_id=printable.filter(bool),
    sequence=st.integers(min_value=0, max_value=10_000),
    speaker=printable.filter(bool),
    party=printable,
    text=printable.filter(bool),
)
@settings(max_examples=50, deadline=None)
def test_turn_roundtrip(**kwargs):
    record = SpeakerTurn(**kwargs)
    assert roundtrip(record) == record


@given(
    chunk_id=printable.filter(bool),
    turn_id=printable.filter(bool),
    seq=st.integers(min_value=0, max_value=100),
    text=printable.filter(bool),
    char_start=st.integers(min_value=0, max_value=1000),
    char_end=st.integers(min_value=1, max_value=2000),
)
@settings(max_examples=50, deadline=None)
def test_chunk_roundtrip(**kwargs):
    record = Chunk(**kwargs)
    assert roundtrip(record) == record


@given(
    chunk_id=printable.filter(bool),
    full_summary=printable.filter(bool),
    short_summary=printable.filter(bool),
    politician=printable,
    party=printable,
    topic=printable,
    backend_model=printable,
    created_at=timestamps,
    prompt_version=printable.filter(bool),
)
@settings(max_examples=50, deadline=None)
def test_enrichment_roundtrip(**kwargs):
    record = Enrichment(**kwargs)
    assert roundtrip(record) == record


@given(
    event_id=printable.filter(bool),
    query=printable.filter(bool),
    chunk_id=printable.filter(bool),
    stage=st.sampled_from(["retrieval", "generation"]),
    rating=st.sampled_from(["positive", "negative"]),
    created_at=timestamps,
)
@settings(max_examples=50, deadline=None)
def test_feedback_roundtrip(**kwargs):
    record = FeedbackEvent(**kwargs)
    assert roundtrip(record) == record


def test_rfc3339_helpers():
    ts = dt.datetime(2024, 5, 1, 12, 30, 45, tzinfo=dt.timezone.utc)
    assert parse_rfc3339(format_rfc3339(ts)) == ts
    assert parse_rfc3339("2024-05-01T12:30:45Z") == ts


def test_search_filter_date_order_enforced():
    with pytest.raises(ValueError):
        SearchFilter(date_from=dt.date(2024, 5, 2), date_to=dt.date(2024, 5, 1))


def test_search_filter_is_empty():
    assert SearchFilter().is_empty()
    assert not SearchFilter(party="Unity").is_empty()
