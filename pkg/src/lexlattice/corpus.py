"""Text ingestion and collection statistics.

Documents are immutable, position-indexed token sequences with a per-document
vocabulary mapping term strings to integer ids.  ``Corpus`` couples documents
with nonnegative weights, and ``CorpusAverages`` memoizes collection-level
mean norms of eraser chains, the quantity that stands in for an "average
document" in smoothing.
"""

from __future__ import annotations

import re
import threading
import unicodedata
from collections import Counter
from dataclasses import dataclass
from types import MappingProxyType
from typing import TYPE_CHECKING, Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .errors import EmptyDocumentError

if TYPE_CHECKING:
    from .eraser import ChainCache, EraserChain

GUTENBERG_START_MARKER = "*** START OF"
GUTENBERG_END_MARKER = "*** END OF"

# Unicode letters and digits; underscore is a separator like any other punctuation.
DEFAULT_TOKEN_PATTERN = r"[^\W_]+"


def strip_gutenberg(raw: str) -> tuple[str, bool]:
    """Cut a Project Gutenberg e-text down to its body.

    Returns ``(body, markers_found)``.  The body is the text strictly between
    the first line containing the start marker and the first subsequent line
    containing the end marker.  Without a start marker the input is returned
    unchanged; with a start marker but no end marker the body runs to the end
    of the text.  ``markers_found`` is True only when both markers were seen.
    """
    lines = raw.splitlines(keepends=True)
    start = next((i for i, line in enumerate(lines) if GUTENBERG_START_MARKER in line), None)
    if start is None:
        return raw, False
    end = next(
        (i for i in range(start + 1, len(lines)) if GUTENBERG_END_MARKER in lines[i]),
        None,
    )
    if end is None:
        return "".join(lines[start + 1 :]), False
    return "".join(lines[start + 1 : end]), True


@dataclass(frozen=True)
class TokenizerConfig:
    """Tokenization switches.

    The defaults lowercase the text, keep diacritics, and split on any run of
    characters that is not a Unicode letter or digit.
    """

    lowercase: bool = True
    token_pattern: str = DEFAULT_TOKEN_PATTERN
    keep_diacritics: bool = True
    min_token_length: int = 1

    def __post_init__(self):
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be >= 1")
        re.compile(self.token_pattern)


def _strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    return unicodedata.normalize(
        "NFC", "".join(c for c in decomposed if not unicodedata.combining(c))
    )


class Document:
    """An immutable, position-indexed token sequence.

    Token identity is stored as integer term ids; ``vocabulary`` is the
    bijection between distinct term strings and those ids.  Positions always
    refer to indices in the original sequence (0-based, contiguous).
    """

    __slots__ = ("id", "language", "tokens", "_vocabulary", "_term_strings", "_positions", "_frequencies")

    def __init__(self, doc_id: str, terms: Iterable[str], language: str = "und"):
        terms = list(terms)
        if not terms:
            raise EmptyDocumentError("empty document")
        vocabulary: dict[str, int] = {}
        tokens = []
        for term in terms:
            tokens.append(vocabulary.setdefault(term, len(vocabulary)))
        self.id = doc_id
        self.language = language
        self.tokens = tuple(tokens)
        self._vocabulary = vocabulary
        self._term_strings = tuple(vocabulary)  # index == term id
        self._positions: dict[int, tuple[int, ...]] | None = None
        self._frequencies: dict[str, int] | None = None

    @property
    def vocabulary(self):
        """Read-only view of the term-string to term-id mapping."""
        return MappingProxyType(self._vocabulary)

    @property
    def token_count(self) -> int:
        return len(self.tokens)

    @property
    def term_count(self) -> int:
        return len(self._vocabulary)

    def term_string(self, term_id: int) -> str:
        return self._term_strings[term_id]

    def positions(self, term: str) -> tuple[int, ...]:
        """All positions holding `term`, ascending; empty if the term is absent."""
        if self._positions is None:
            index: dict[int, list[int]] = {}
            for pos, tid in enumerate(self.tokens):
                index.setdefault(tid, []).append(pos)
            self._positions = {tid: tuple(ps) for tid, ps in index.items()}
        tid = self._vocabulary.get(term)
        if tid is None:
            return ()
        return self._positions.get(tid, ())

    def term_frequencies(self) -> dict[str, int]:
        """Occurrence count per term string."""
        if self._frequencies is None:
            counts = Counter(self.tokens)
            self._frequencies = {self._term_strings[tid]: n for tid, n in counts.items()}
        return dict(self._frequencies)

    def __len__(self) -> int:
        return len(self.tokens)

    def __repr__(self) -> str:
        return f"Document(id={self.id!r}, language={self.language!r}, tokens={self.token_count}, terms={self.term_count})"

    def to_summary(self, include_tokens: bool = False) -> dict:
        summary = {
            "id": self.id,
            "language": self.language,
            "token_count": self.token_count,
            "term_count": self.term_count,
        }
        if include_tokens:
            summary["tokens"] = [self._term_strings[tid] for tid in self.tokens]
        return summary


def tokenize(
    raw: str,
    config: TokenizerConfig | None = None,
    *,
    doc_id: str = "doc",
    language: str = "und",
) -> Document:
    """Split raw text into a `Document` according to `config`.

    Deterministic: the same input and configuration always produce an
    identical document.  Raises `EmptyDocumentError` when nothing survives
    tokenization.
    """
    cfg = config or TokenizerConfig()
    text = raw.lower() if cfg.lowercase else raw
    if not cfg.keep_diacritics:
        text = _strip_diacritics(text)
    terms = re.findall(cfg.token_pattern, text)
    if cfg.min_token_length > 1:
        terms = [t for t in terms if len(t) >= cfg.min_token_length]
    if not terms:
        raise EmptyDocumentError("empty document")
    return Document(doc_id, terms, language=language)


class CorpusTokenizer(BaseEstimator, TransformerMixin):
    """Stateless transformer from raw texts to `Document` objects.

    Mirrors `TokenizerConfig`; `fit` is a no-op kept for pipeline
    compatibility.
    """

    def __init__(
        self,
        lowercase: bool = True,
        token_pattern: str = DEFAULT_TOKEN_PATTERN,
        keep_diacritics: bool = True,
        min_token_length: int = 1,
        language: str = "und",
    ):
        self.lowercase = lowercase
        self.token_pattern = token_pattern
        self.keep_diacritics = keep_diacritics
        self.min_token_length = min_token_length
        self.language = language

    def _config(self) -> TokenizerConfig:
        return TokenizerConfig(
            lowercase=self.lowercase,
            token_pattern=self.token_pattern,
            keep_diacritics=self.keep_diacritics,
            min_token_length=self.min_token_length,
        )

    def fit(self, X=None, y=None):
        self._config()  # validate parameters
        return self

    def transform(self, X: Sequence[str]) -> list[Document]:
        cfg = self._config()
        return [
            tokenize(raw, cfg, doc_id=f"doc{i}", language=self.language)
            for i, raw in enumerate(X)
        ]

    def tokenize_one(self, raw: str, doc_id: str = "doc", language: str | None = None) -> Document:
        return tokenize(
            raw,
            self._config(),
            doc_id=doc_id,
            language=self.language if language is None else language,
        )


class Corpus:
    """A sequence of documents with nonnegative weights (uniform by default)."""

    __slots__ = ("documents", "weights")

    def __init__(self, documents: Iterable[Document], weights: Iterable[float] | None = None):
        docs = tuple(documents)
        if not docs:
            raise ValueError("corpus must contain at least one document")
        if weights is None:
            w = (1.0 / len(docs),) * len(docs)
        else:
            w = tuple(float(x) for x in weights)
            if len(w) != len(docs):
                raise ValueError("one weight per document required")
            if any(x < 0 for x in w):
                raise ValueError("weights must be nonnegative")
        self.documents = docs
        self.weights = w

    def weights_sum_to_one(self, tol: float = 1e-9) -> bool:
        return abs(sum(self.weights) - 1.0) <= tol

    def items(self):
        return zip(self.weights, self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def __repr__(self) -> str:
        return f"Corpus({len(self.documents)} documents)"


class CorpusAverages:
    """Weighted mean chain norms over a corpus, memoized by chain key.

    A cached value always equals the from-scratch weighted sum
    sum_i w_i * |chain(D_i)|.  Reads may run concurrently; writes are
    serialized.  Intermediate masks are shared per document, so repeated
    queries over a width grid stay cheap.
    """

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self._means: dict[str, float] = {}
        self._chain_caches: dict[int, "ChainCache"] = {}
        self._lock = threading.Lock()

    def chain_cache(self, document: Document) -> "ChainCache":
        """The shared per-document mask cache (created on first use)."""
        from .eraser import ChainCache

        key = id(document)
        cache = self._chain_caches.get(key)
        if cache is None:
            with self._lock:
                cache = self._chain_caches.setdefault(key, ChainCache(document))
        return cache

    def average_norm(self, chain: "EraserChain") -> float:
        """Weighted mean of |chain(D_i)| over the corpus."""
        key = chain.key()
        cached = self._means.get(key)
        if cached is not None:
            return cached
        total = sum(
            weight * self.chain_cache(doc).mask(chain).norm
            for weight, doc in self.corpus.items()
        )
        with self._lock:
            return self._means.setdefault(key, total)

    def clear_cache(self) -> None:
        with self._lock:
            self._means.clear()
            self._chain_caches.clear()
