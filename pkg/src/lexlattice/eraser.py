"""Selective erasers: windowed preservation masks over documents.

An eraser ``E(t, w)`` keeps token identity only within ``w`` positions of an
occurrence of term ``t`` and erases the identity of everything else.  Erased
tokens keep their position, so all distances refer to the original sequence,
and an erased token can never act as an anchor for a later eraser.

Masks are stored as sorted, disjoint half-open intervals; applying an eraser
costs O(occurrences + intervals).  ``naive_apply_oracle`` is the reference
implementation (a doubly nested position scan) kept deliberately free of the
interval machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .errors import EmptyDocumentError

if TYPE_CHECKING:
    from .corpus import Corpus, Document

Interval = tuple[int, int]

CHAIN_SEPARATOR = "∘"  # "∘"


@dataclass(frozen=True, order=True)
class SelectiveEraser:
    """The transformation E(term, width)."""

    term: str
    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("eraser width must be >= 0")

    def key(self) -> str:
        return f"E({self.term},{self.width})"

    def __str__(self) -> str:
        return self.key()


@dataclass(frozen=True)
class EraserChain:
    """A finite composition of erasers; the last listed is applied first."""

    erasers: tuple[SelectiveEraser, ...]

    def __post_init__(self):
        object.__setattr__(self, "erasers", tuple(self.erasers))
        if not self.erasers:
            raise ValueError("eraser chain must not be empty")

    @classmethod
    def of(cls, *erasers: SelectiveEraser) -> "EraserChain":
        return cls(erasers)

    def key(self) -> str:
        """Canonical order-sensitive serialization, rightmost applied first."""
        return CHAIN_SEPARATOR.join(e.key() for e in self.erasers)

    def __iter__(self):
        return iter(self.erasers)

    def __len__(self) -> int:
        return len(self.erasers)

    def __str__(self) -> str:
        return self.key()


def _intersect_intervals(a: tuple[Interval, ...], b: tuple[Interval, ...]) -> tuple[Interval, ...]:
    out: list[Interval] = []
    i = j = 0
    while i < len(a) and j < len(b):
        start = max(a[i][0], b[j][0])
        stop = min(a[i][1], b[j][1])
        if start < stop:
            out.append((start, stop))
        if a[i][1] <= b[j][1]:
            i += 1
        else:
            j += 1
    return tuple(out)


def _union_intervals(a: tuple[Interval, ...], b: tuple[Interval, ...]) -> tuple[Interval, ...]:
    out: list[Interval] = []
    i = j = 0
    while i < len(a) or j < len(b):
        if j >= len(b) or (i < len(a) and a[i][0] <= b[j][0]):
            nxt = a[i]
            i += 1
        else:
            nxt = b[j]
            j += 1
        if out and nxt[0] <= out[-1][1]:
            if nxt[1] > out[-1][1]:
                out[-1] = (out[-1][0], nxt[1])
        else:
            out.append(nxt)
    return tuple(out)


def _window_cover(anchors: Iterable[int], width: int, length: int) -> tuple[Interval, ...]:
    """Merged coverage of [p - width, p + width] for ascending anchors, clipped."""
    out: list[Interval] = []
    for p in anchors:
        start = p - width
        if start < 0:
            start = 0
        stop = p + width + 1
        if stop > length:
            stop = length
        if out and start <= out[-1][1]:
            if stop > out[-1][1]:
                out[-1] = (out[-1][0], stop)
        else:
            out.append((start, stop))
    return tuple(out)


def _positions_within(occurrences: tuple[int, ...], intervals: tuple[Interval, ...]) -> list[int]:
    """Members of the ascending position list that fall inside the intervals."""
    out: list[int] = []
    j = 0
    for p in occurrences:
        while j < len(intervals) and intervals[j][1] <= p:
            j += 1
        if j == len(intervals):
            break
        if intervals[j][0] <= p:
            out.append(p)
    return out


class MaskedDocument:
    """A document together with the set of positions an eraser chain preserved.

    The mask is canonical: sorted, disjoint, non-adjacent half-open intervals
    within [0, len(base)).  The norm counts preserved positions.
    """

    __slots__ = ("base", "intervals")

    def __init__(self, base: "Document", intervals: tuple[Interval, ...]):
        self.base = base
        self.intervals = intervals

    @classmethod
    def full(cls, base: "Document") -> "MaskedDocument":
        return cls(base, ((0, len(base)),) if len(base) else ())

    @classmethod
    def empty(cls, base: "Document") -> "MaskedDocument":
        return cls(base, ())

    @classmethod
    def from_positions(cls, base: "Document", positions: Iterable[int]) -> "MaskedDocument":
        ordered = sorted(set(positions))
        if ordered and (ordered[0] < 0 or ordered[-1] >= len(base)):
            raise ValueError("mask positions out of document bounds")
        intervals: list[Interval] = []
        for p in ordered:
            if intervals and p == intervals[-1][1]:
                intervals[-1] = (intervals[-1][0], p + 1)
            else:
                intervals.append((p, p + 1))
        return cls(base, tuple(intervals))

    @property
    def norm(self) -> int:
        return sum(stop - start for start, stop in self.intervals)

    def positions(self) -> list[int]:
        return [p for start, stop in self.intervals for p in range(start, stop)]

    def __contains__(self, position: int) -> bool:
        for start, stop in self.intervals:
            if start <= position < stop:
                return True
            if position < start:
                return False
        return False

    def __eq__(self, other) -> bool:
        if not isinstance(other, MaskedDocument):
            return NotImplemented
        return self.base is other.base and self.intervals == other.intervals

    def __repr__(self) -> str:
        return f"MaskedDocument({self.base.id!r}, norm={self.norm})"


def apply(eraser: SelectiveEraser, masked: MaskedDocument) -> MaskedDocument:
    """Apply an eraser to a masked document.

    Anchors are the *surviving* occurrences of the eraser's term; the result
    keeps exactly the already-preserved positions within ``width`` of an
    anchor.  No anchors means an empty mask.
    """
    occurrences = masked.base.positions(eraser.term)
    if not occurrences or not masked.intervals:
        return MaskedDocument(masked.base, ())
    anchors = _positions_within(occurrences, masked.intervals)
    if not anchors:
        return MaskedDocument(masked.base, ())
    cover = _window_cover(anchors, eraser.width, len(masked.base))
    return MaskedDocument(masked.base, _intersect_intervals(cover, masked.intervals))


def naive_apply_oracle(eraser: SelectiveEraser, masked: MaskedDocument) -> MaskedDocument:
    """Reference implementation of `apply`: a doubly nested position scan."""
    kept = masked.positions()
    term_id = masked.base.vocabulary.get(eraser.term)
    anchors = [p for p in kept if masked.base.tokens[p] == term_id]
    preserved = [q for q in kept if any(abs(q - p) <= eraser.width for p in anchors)]
    return MaskedDocument.from_positions(masked.base, preserved)


def apply_chain(chain: EraserChain, document: "Document") -> MaskedDocument:
    """Fold `apply` right-to-left over a full initial mask."""
    masked = MaskedDocument.full(document)
    for eraser in reversed(chain.erasers):
        masked = apply(eraser, masked)
    return masked


def norm(masked: MaskedDocument) -> int:
    """Number of preserved (defined) tokens."""
    return masked.norm


class ChainCache:
    """Memoized suffix masks of eraser chains over a single document.

    Chains applied right-to-left share suffixes, so a width-grid scan that
    varies the outer erasers reuses every inner mask.  Pure memoization:
    results are independent of query order.
    """

    def __init__(self, document: "Document"):
        self.document = document
        self._masks: dict[str, MaskedDocument] = {}

    def mask(self, chain: EraserChain) -> MaskedDocument:
        key = chain.key()
        hit = self._masks.get(key)
        if hit is not None:
            return hit
        suffix = chain.erasers[1:]
        inner = self.mask(EraserChain(suffix)) if suffix else MaskedDocument.full(self.document)
        result = apply(chain.erasers[0], inner)
        self._masks[key] = result
        return result

    def clear(self) -> None:
        self._masks.clear()


def order_holds(e1: SelectiveEraser, e2: SelectiveEraser, corpus: "Corpus") -> bool:
    """True iff applying `e1` after `e2` changes nothing on any document.

    This is the order relation "e1 is above e2" relative to the corpus.
    """
    for doc in corpus.documents:
        lower = apply(e2, MaskedDocument.full(doc))
        if apply(e1, lower) != lower:
            return False
    return True


def weighted_valuation(corpus: "Corpus", eraser: SelectiveEraser) -> float:
    """Weighted preserved fraction sum_i w_i |E D_i| / |D_i|; weights must sum to 1."""
    if not corpus.weights_sum_to_one():
        raise ValueError("corpus weights must sum to 1 for a probability measure")
    total = 0.0
    for weight, doc in corpus.items():
        if len(doc) == 0:
            raise EmptyDocumentError("zero-length document in corpus")
        total += weight * apply(eraser, MaskedDocument.full(doc)).norm / len(doc)
    return total


def _require_same_base(m1: MaskedDocument, m2: MaskedDocument) -> None:
    if m1.base is not m2.base:
        raise ValueError("masks have different base documents")


def mask_join(m1: MaskedDocument, m2: MaskedDocument) -> MaskedDocument:
    """Union of two masks over the same document."""
    _require_same_base(m1, m2)
    return MaskedDocument(m1.base, _union_intervals(m1.intervals, m2.intervals))


def mask_meet(m1: MaskedDocument, m2: MaskedDocument) -> MaskedDocument:
    """Intersection of two masks over the same document."""
    _require_same_base(m1, m2)
    return MaskedDocument(m1.base, _intersect_intervals(m1.intervals, m2.intervals))
