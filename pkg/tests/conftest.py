import json
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hansardqa.backends import build_embedding_backend, build_generation_backend
from hansardqa.config import AppConfig, BackendConfig
from hansardqa.enrich import enrich_corpus
from hansardqa.index import index_corpus
from hansardqa.ingest import chunk_turn, parse_corpus
from hansardqa.models import BackendDescriptor
from hansardqa.prompts import PROMPT_VERSION
from hansardqa.storage import DataDirectory

SCHEMAS_DIR = Path(__file__).parent.parent / "schemas"


def load_schema(name: str) -> dict:
    with open(SCHEMAS_DIR / f"{name}.schema.json") as fh:
        return json.load(fh)


def corpus_line(
    doc_id: str,
    sequence: int,
    text: str,
    speaker: str = "Alice Example",
    party: str = "Unity",
    session_date: str = "2024-03-14",
    session_type: str = "plenary",
    language: str = "en",
    source_url: str = "",
    **overrides,
) -> str:
    record = {
        "doc_id": doc_id,
        "session_date": session_date,
        "session_type": session_type,
        "language": language,
        "source_url": source_url,
        "sequence": sequence,
        "speaker": speaker,
        "party": party,
        "text": text,
    }
    record.update(overrides)
    return json.dumps(record, ensure_ascii=False)


def write_corpus(path: Path, lines: list[str]) -> Path:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


FILLER_WORDS = [
    "budget", "housing", "transport", "schools", "farming", "tariff",
    "pension", "council", "harbour", "railway", "clinic", "permit",
    "drought", "export", "border", "treaty", "payroll", "audit",
]


def synthetic_sentence(rng: random.Random, words: int) -> str:
    tokens = [rng.choice(FILLER_WORDS) for _ in range(words)]
    sentence = " ".join(tokens)
    return sentence[0].upper() + sentence[1:] + rng.choice(".!?")


def synthetic_turn_text(rng: random.Random, sentences: int) -> str:
    return " ".join(synthetic_sentence(rng, rng.randint(3, 12)) for _ in range(sentences))


def mock_config(dim: int = 32, **retrieval_overrides) -> AppConfig:
    from hansardqa.config import RetrievalConfig, ServerConfig

    base = AppConfig()
    return AppConfig(
        chunking=base.chunking,
        retrieval=RetrievalConfig(**{**base.retrieval.__dict__, **retrieval_overrides}),
        server=ServerConfig(rate_limit_per_min=0),
        suggestions=("Who opposed the harbour levy?", "What was said about rail funding?"),
        backends={
            "generation": BackendConfig(
                kind="mock-template",
                descriptor=BackendDescriptor(base_url="", model="mock-template", api_key_env=""),
            ),
            "embedding": BackendConfig(
                kind="mock-hash",
                descriptor=BackendDescriptor(base_url="", model=f"mock-hash-{dim}", api_key_env=""),
                dim=dim,
            ),
        },
    )


def build_pipeline(data_dir: Path, corpus_path: Path, config: AppConfig) -> DataDirectory:
    """Run ingest -> enrich -> index with the configured mock backends."""
    documents, turns = parse_corpus(corpus_path)
    chunks = []
    for turn in turns:
        chunks.extend(chunk_turn(turn, config.chunking.max_chunk_chars))
    dd = DataDirectory(data_dir)
    dd.init()
    dd.save_documents(documents)
    dd.save_turns(turns)
    dd.save_chunks(chunks)
    dd.write_manifest(prompt_version=PROMPT_VERSION, config_fingerprint=config.fingerprint())

    generation = build_generation_backend(config.backend("generation"))
    enrich_corpus(
        chunks,
        {t.turn_id: t for t in turns},
        generation,
        store_append=dd.append_enrichment,
        existing=set(),
        documents={d.doc_id: d for d in documents},
        concurrency_limit=2,
        max_chunk_chars=config.chunking.max_chunk_chars,
    )
    embedding = build_embedding_backend(config.backend("embedding"))
    index_corpus(dd, embedding, embed_source=config.retrieval.embed_source)
    return dd


@pytest.fixture
def small_corpus(tmp_path: Path) -> Path:
    lines = [
        corpus_line("2024-03-14-p1", 0, "The harbour levy is overdue. We must fund the dredging works now. Delay costs us trade."),
        corpus_line("2024-03-14-p1", 1, "I oppose the levy. Port fees already strain small hauliers.",
                    speaker="Bram Visser", party="Forward"),
        corpus_line("2024-03-14-p1", 2, "Rail freight could relieve the port. A spur line to the terminal pays for itself.",
                    speaker="Carla Jans", party="Unity"),
        corpus_line("2024-04-02-c7", 0, "The committee reviewed the school meal pilot. Uptake doubled in spring.",
                    speaker="Dieter Maes", party="Forward",
                    session_date="2024-04-02", session_type="committee"),
        corpus_line("2024-04-02-c7", 1, "Funding the pilot nationwide needs a payroll levy or new excise.",
                    speaker="Alice Example", party="Unity",
                    session_date="2024-04-02", session_type="committee"),
    ]
    return write_corpus(tmp_path / "corpus.jsonl", lines)


@pytest.fixture
def built_data_dir(tmp_path: Path, small_corpus: Path) -> DataDirectory:
    config = mock_config()
    return build_pipeline(tmp_path / "data", small_corpus, config)


# -- acceptance reporting ---------------------------------------------------

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" in str(report.nodeid):
        _ACCEPTANCE_RESULTS.append((report.nodeid.split("::")[-1], report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{outcome:<6} {name}")
