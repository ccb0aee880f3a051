"""Shared fixtures: toy documents, a synthetic bilingual pair, corpus files."""

from __future__ import annotations

import os
import random
from pathlib import Path

import pytest

from lexlattice import Document, TopicConfig

DATA_ENV = "LEXLATTICE_DATA"

EN_KEYWORDS = ("sword", "hand", "arm", "helmet", "shield")
ES_KEYWORDS = ("espada", "mano", "brazo", "yelmo", "adarga")
KEYWORD_ALIGNMENT = dict(zip(EN_KEYWORDS, ES_KEYWORDS))


def data_dir() -> Path:
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent.parent / "data"


def quixote_file(lang: str) -> Path | None:
    path = data_dir() / f"quixote_{lang}.txt"
    return path if path.exists() else None


def require_quixote(lang: str) -> Path:
    path = quixote_file(lang)
    if path is None:
        pytest.skip(
            f"corpus file quixote_{lang}.txt not found under {data_dir()} "
            f"(or ${DATA_ENV}); see README 'Corpus data' for how to supply it"
        )
    return path


@pytest.fixture
def d1() -> Document:
    return Document("d1", ["a", "b", "c", "a", "d"])


@pytest.fixture
def d6() -> Document:
    return Document("d6", ["x", "a", "x", "x", "b", "x"])


def _flatten(slots: list[list[str]], spacer: str) -> list[str]:
    tokens: list[str] = []
    for i, slot in enumerate(slots):
        if i:
            tokens.append(spacer)
        tokens.extend(slot)
    return tokens


def synthetic_bilingual() -> tuple[Document, Document, TopicConfig, dict[str, str]]:
    """A parallel pair with a planted keyword relation and divergent fillers.

    In both languages the second keyword always sits next to the first, and
    the first is three times as frequent, so exactly one directed relation
    survives the threshold.  Language 1 additionally carries the same pattern
    on a filler pair; language 2's fillers are scattered, so frequency-matched
    null draws always compare a one-edge lattice against an empty one.
    """
    rng = random.Random(1109)
    slots1 = (
        [["k1", "k2"]] * 20
        + [["k1"]] * 40
        + [["f1", "f2"]] * 20
        + [["f1"]] * 40
        + [[f"z{i}"] for i in range(5)]
    )
    rng.shuffle(slots1)
    doc1 = Document("syn1", _flatten(slots1, "s"), language="l1")
    slots2 = (
        [["q1", "q2"]] * 20
        + [["q1"]] * 40
        + [["g1"]] * 60
        + [["g2"]] * 20
        + [[f"w{i}"] for i in range(5)]
    )
    rng.shuffle(slots2)
    doc2 = Document("syn2", _flatten(slots2, "t"), language="l2")
    config = TopicConfig(keywords=("k1", "k2"), topic_width=2, max_width=1, threshold=0.5, mu=1.0)
    alignment = {"k1": "q1", "k2": "q2"}
    return doc1, doc2, config, alignment


@pytest.fixture(scope="session")
def bilingual_pair():
    return synthetic_bilingual()
