"""Comparison of topic lattices built from two language versions of a text.

Measured relations are projected to (antecedent term, consequent term) pairs,
the second lattice's terms are mapped through a keyword alignment, and the
overlap is summarized as a Jaccard similarity with per-edge width deltas.  A
seeded null model rebuilds the comparison with frequency-matched random
keyword sets to show how much of the similarity is specific to the aligned
keywords.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping, Sequence

from .corpus import Document
from .errors import AlignmentError
from .topic_lattice import TopicConfig, TopicLattice, build_lattice, resolve

TermPair = tuple[str, str]


@dataclass(frozen=True)
class KeywordAlignment:
    """A bijection between first-language and second-language terms."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((a, b) for a, b in self.pairs))
        left = [a for a, _ in self.pairs]
        right = [b for _, b in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("alignment must be a bijection")

    @classmethod
    def from_dict(cls, mapping: Mapping[str, str]) -> "KeywordAlignment":
        return cls(tuple(sorted(mapping.items())))

    def to_l1(self, term: str) -> str:
        for a, b in self.pairs:
            if b == term:
                return a
        raise AlignmentError(f"alignment does not cover second-language term {term!r}")

    def to_l2(self, term: str) -> str:
        for a, b in self.pairs:
            if a == term:
                return b
        raise AlignmentError(f"alignment does not cover first-language term {term!r}")

    def inverse(self) -> "KeywordAlignment":
        return KeywordAlignment(tuple((b, a) for a, b in self.pairs))

    def to_json(self) -> dict:
        return {a: b for a, b in self.pairs}


@dataclass(frozen=True)
class LatticeDiff:
    """Term-level overlap between two lattices, expressed in first-language terms."""

    shared: tuple[TermPair, ...]
    only_l1: tuple[TermPair, ...]
    only_l2: tuple[TermPair, ...]
    width_deltas: tuple[dict, ...]
    similarity: float

    def to_json(self) -> dict:
        return {
            "similarity": self.similarity,
            "shared": [list(p) for p in self.shared],
            "only_l1": [list(p) for p in self.only_l1],
            "only_l2": [list(p) for p in self.only_l2],
            "width_deltas": list(self.width_deltas),
        }


def _require_resolved(lattice: TopicLattice, label: str) -> None:
    if not lattice.is_resolved:
        raise ValueError(f"{label} lattice is not resolved; call resolve() first")


def _term_edges(lattice: TopicLattice) -> dict[TermPair, tuple[int, int, float]]:
    """Measured edges at term granularity; the strongest edge wins duplicates."""
    out: dict[TermPair, tuple[int, int, float]] = {}
    for edge in lattice.measured_edges():
        pair = (edge.antecedent.term, edge.consequent.term)
        entry = (edge.antecedent.width, edge.consequent.width, edge.probability)
        if pair not in out or entry[2] > out[pair][2]:
            out[pair] = entry
    return out


def align_compare(l1: TopicLattice, l2: TopicLattice, alignment: KeywordAlignment) -> LatticeDiff:
    """Shared and language-specific relations plus Jaccard similarity.

    Second-language terms are mapped into the first language through the
    alignment, so all reported pairs read in first-language terms.  Requires
    both lattices to be resolved.
    """
    _require_resolved(l1, "first")
    _require_resolved(l2, "second")
    edges1 = _term_edges(l1)
    edges2_raw = _term_edges(l2)
    edges2 = {
        (alignment.to_l1(a), alignment.to_l1(b)): entry for (a, b), entry in edges2_raw.items()
    }
    shared = tuple(sorted(set(edges1) & set(edges2)))
    only_l1 = tuple(sorted(set(edges1) - set(edges2)))
    only_l2 = tuple(sorted(set(edges2) - set(edges1)))
    union = len(shared) + len(only_l1) + len(only_l2)
    similarity = len(shared) / union if union else 1.0
    deltas = tuple(
        {
            "pair": list(pair),
            "delta_wa": edges1[pair][0] - edges2[pair][0],
            "delta_wb": edges1[pair][1] - edges2[pair][1],
            "delta_p": edges1[pair][2] - edges2[pair][2],
        }
        for pair in shared
    )
    return LatticeDiff(
        shared=shared,
        only_l1=only_l1,
        only_l2=only_l2,
        width_deltas=deltas,
        similarity=similarity,
    )


@dataclass(frozen=True)
class MorphismReport:
    """Whether the alignment-induced node map preserves the first lattice's order."""

    holds: bool
    violations: tuple[TermPair, ...]

    def to_json(self) -> dict:
        return {"holds": self.holds, "violations": [list(p) for p in self.violations]}


def _transitive_closure(edges: Iterable[TermPair]) -> set[TermPair]:
    closure = set(edges)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def morphism_check(
    l1: TopicLattice, l2: TopicLattice, alignment: KeywordAlignment
) -> MorphismReport:
    """Monotone-map check at term granularity.

    Every measured term-level relation of the first lattice must appear in
    the transitive closure of the second lattice's relations (after mapping
    terms through the alignment); violations list the missing relations in
    first-language terms.
    """
    _require_resolved(l1, "first")
    _require_resolved(l2, "second")
    edges1 = set(_term_edges(l1))
    closure2 = _transitive_closure(
        (alignment.to_l1(a), alignment.to_l1(b)) for (a, b) in _term_edges(l2)
    )
    violations = tuple(sorted(edges1 - closure2))
    return MorphismReport(holds=not violations, violations=violations)


def frequency_matched_keywords(
    rng: random.Random, document: Document, keywords: Sequence[str]
) -> tuple[str, ...]:
    """Random terms with frequencies comparable to the given keywords.

    For each keyword a term with frequency within a factor of two is drawn
    (falling back to the nearest frequency); keywords themselves and already
    drawn terms are excluded.  Raises when the vocabulary is too small.
    """
    frequencies = document.term_frequencies()
    forbidden = set(keywords)
    if len(frequencies) < 2 * len(keywords):
        raise ValueError("vocabulary too small to sample")
    picked: list[str] = []
    for keyword in keywords:
        target = max(frequencies.get(keyword, 1), 1)
        pool = sorted(
            t for t in frequencies if t not in forbidden and t not in picked
        )
        if not pool:
            raise ValueError("vocabulary too small to sample")
        close = [t for t in pool if target / 2 <= frequencies[t] <= target * 2]
        if close:
            picked.append(rng.choice(close))
        else:
            picked.append(min(pool, key=lambda t: (abs(frequencies[t] - target), t)))
    return tuple(picked)


@dataclass(frozen=True)
class BaselineSimilarity:
    """Aligned-keyword similarity against a random-keyword null distribution."""

    true_similarity: float
    null_similarities: tuple[float, ...]

    @property
    def null_mean(self) -> float:
        return sum(self.null_similarities) / len(self.null_similarities)

    @property
    def null_min(self) -> float:
        return min(self.null_similarities)

    @property
    def null_max(self) -> float:
        return max(self.null_similarities)

    def to_json(self) -> dict:
        return {
            "true_similarity": self.true_similarity,
            "null": list(self.null_similarities),
            "null_mean": self.null_mean,
            "null_min": self.null_min,
            "null_max": self.null_max,
        }


def _resolved_lattice(document: Document, config: TopicConfig, strategy: str) -> TopicLattice:
    return resolve(build_lattice(document, config), strategy)


def baseline_similarity(
    doc1: Document,
    doc2: Document,
    config: TopicConfig,
    alignment: KeywordAlignment,
    trials: int,
    seed: int,
    strategy: str = "prune-min",
    sampler: Callable[[random.Random, Document, Sequence[str]], Sequence[str]] | None = None,
) -> BaselineSimilarity:
    """Compare the aligned-keyword similarity against a seeded null model.

    Each trial draws frequency-matched keyword sets in both documents (with
    per-trial derived seeds, so trials are independent and the whole run is
    reproducible), aligns them positionally, and measures the resulting
    lattice similarity.
    """
    if trials < 1:
        raise ValueError("at least one trial is required")
    draw = sampler or frequency_matched_keywords
    keywords2 = tuple(alignment.to_l2(k) for k in config.keywords)
    true_diff = align_compare(
        _resolved_lattice(doc1, config, strategy),
        _resolved_lattice(doc2, replace(config, keywords=keywords2), strategy),
        alignment,
    )
    nulls = []
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        sample1 = tuple(draw(rng, doc1, config.keywords))
        sample2 = tuple(draw(rng, doc2, keywords2))
        trial_alignment = KeywordAlignment(tuple(zip(sample1, sample2)))
        diff = align_compare(
            _resolved_lattice(doc1, replace(config, keywords=sample1), strategy),
            _resolved_lattice(doc2, replace(config, keywords=sample2), strategy),
            trial_alignment,
        )
        nulls.append(diff.similarity)
    return BaselineSimilarity(
        true_similarity=true_diff.similarity, null_similarities=tuple(nulls)
    )
