"""Conditional probabilities between selective erasers.

Four measures are provided: material implication via the single-document
mask algebra, the subjunctive (Ramsey-test style) conditional, its smoothed
form backed by collection averages, and the topic-restricted forms that
evaluate a conditional only inside the text preserved by a wide
topic-defining eraser.

Two composition conventions exist because the operator-string reading
("written": rightmost eraser applied first) and the restrict-then-apply
reading ("ramsey") disagree on the numerator order.  Both are implemented;
``written`` is the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .corpus import CorpusAverages, Document
from .eraser import ChainCache, EraserChain, MaskedDocument, SelectiveEraser, apply, mask_meet
from .errors import EmptyDocumentError



class Convention(str, Enum):
    """How antecedent and consequent compose in the numerator."""

    WRITTEN = "written"
    RAMSEY = "ramsey"


@dataclass(frozen=True)
class SmoothingConfig:
    """Pseudo-count interpolation with collection-average norms.

    ``mu`` is the smoothing weight; ``averages`` supplies the mean chain
    norms.  A positive ``mu`` requires averages.
    """

    mu: float = 1.0
    averages: CorpusAverages | None = None

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError("smoothing weight mu must be >= 0")
        if self.mu > 0 and self.averages is None:
            raise ValueError("a positive smoothing weight requires corpus averages")


@dataclass(frozen=True)
class ConditionalResult:
    """Outcome of a conditional computation.

    ``value`` is None exactly when the full denominator is zero, the
    "undetermined" case.  Numerator and denominator are kept for diagnostics.
    """

    value: float | None
    numerator: float
    denominator: float
    convention: str
    mu: float

    def __post_init__(self):
        if (self.value is None) == (self.denominator > 0):
            raise ValueError("value must be present exactly when the denominator is positive")

    @property
    def undetermined(self) -> bool:
        return self.value is None

    def to_json(self) -> dict:
        return {
            "value": "undetermined" if self.value is None else self.value,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "convention": self.convention,
            "mu": self.mu,
        }


def _as_convention(convention: Convention | str) -> Convention:
    return convention if isinstance(convention, Convention) else Convention(convention)


def _numerator_chain(
    ea: SelectiveEraser,
    eb: SelectiveEraser,
    convention: Convention,
    topic: SelectiveEraser | None = None,
) -> EraserChain:
    inner = (topic,) if topic is not None else ()
    if convention is Convention.WRITTEN:
        return EraserChain((ea, eb) + inner)
    return EraserChain((eb, ea) + inner)


def _evaluate(
    d: Document,
    num_chain: EraserChain,
    den_chain: EraserChain,
    smoothing: SmoothingConfig | None,
    convention: Convention,
    cache: ChainCache | None,
) -> ConditionalResult:
    applier = cache if cache is not None else ChainCache(d)
    numerator = float(applier.mask(num_chain).norm)
    denominator = float(applier.mask(den_chain).norm)
    mu = smoothing.mu if smoothing is not None else 0.0
    if mu > 0:
        numerator += mu * smoothing.averages.average_norm(num_chain)
        denominator += mu * smoothing.averages.average_norm(den_chain)
    value = numerator / denominator if denominator > 0 else None
    return ConditionalResult(
        value=value,
        numerator=numerator,
        denominator=denominator,
        convention=convention.value,
        mu=mu,
    )


def material_implication(d: Document, ea: SelectiveEraser, eb: SelectiveEraser) -> float:
    """Material implication 1 - V(A) + V(A and B) inside a single document.

    The conjunction is realized as the mask intersection, the exact extremum
    within one document.  Equals 1 whenever the antecedent term is absent,
    the well-known pathology of material implication.
    """
    if len(d) == 0:
        raise EmptyDocumentError("empty document")
    total = len(d)
    mask_a = apply(ea, MaskedDocument.full(d))
    mask_b = apply(eb, MaskedDocument.full(d))
    both = mask_meet(mask_a, mask_b)
    return 1.0 - mask_a.norm / total + both.norm / total


def subjunctive(
    d: Document,
    ea: SelectiveEraser,
    eb: SelectiveEraser,
    convention: Convention | str = Convention.WRITTEN,
    cache: ChainCache | None = None,
) -> ConditionalResult:
    """Unsmoothed subjunctive conditional P(ea -> eb) on one document.

    The denominator is the antecedent-preserved norm; a zero denominator
    yields the "undetermined" result rather than an error.
    """
    conv = _as_convention(convention)
    num_chain = _numerator_chain(ea, eb, conv)
    return _evaluate(d, num_chain, EraserChain((ea,)), None, conv, cache)


def smoothed_subjunctive(
    d: Document,
    ea: SelectiveEraser,
    eb: SelectiveEraser,
    smoothing: SmoothingConfig,
    convention: Convention | str = Convention.WRITTEN,
    cache: ChainCache | None = None,
) -> ConditionalResult:
    """Subjunctive conditional with pseudo-count interpolation.

    Both numerator and denominator gain ``mu`` times the collection-average
    norm of their chain; the result is undetermined only when the smoothed
    denominator is still zero.
    """
    conv = _as_convention(convention)
    num_chain = _numerator_chain(ea, eb, conv)
    return _evaluate(d, num_chain, EraserChain((ea,)), smoothing, conv, cache)


def _check_topic_width(ea: SelectiveEraser, topic_width: int) -> None:
    if ea.width >= topic_width:
        raise ValueError("antecedent wider than topic")


def topic_subjunctive(
    d: Document,
    ea: SelectiveEraser,
    eb: SelectiveEraser,
    topic_width: int,
    smoothing: SmoothingConfig | None = None,
    convention: Convention | str = Convention.WRITTEN,
    cache: ChainCache | None = None,
) -> ConditionalResult:
    """Subjunctive conditional restricted to the antecedent's topic text.

    The topic eraser E(ea.term, topic_width) is applied first in the
    numerator; the denominator stays the plain antecedent norm.  Requires
    ``ea.width < topic_width``; for topic widths at or beyond the document
    length the result coincides exactly with the unrestricted conditional.
    """
    conv = _as_convention(convention)
    _check_topic_width(ea, topic_width)
    topic = SelectiveEraser(ea.term, topic_width)
    num_chain = _numerator_chain(ea, eb, conv, topic=topic)
    return _evaluate(d, num_chain, EraserChain((ea,)), smoothing, conv, cache)


def topic_subjunctive_general(
    d: Document,
    keywords: Iterable[str],
    ea: SelectiveEraser,
    eb: SelectiveEraser,
    topic_width: int,
    smoothing: SmoothingConfig | None = None,
    convention: Convention | str = Convention.WRITTEN,
    cache: ChainCache | None = None,
) -> ConditionalResult:
    """Topic conditional over a keyword set.

    Each keyword contributes a candidate value with its own topic eraser
    composed into both sides (denominator |E(a,wa) E(k,wt) D|, so a keyword
    absent from the text contributes "undetermined"); the best defined
    candidate wins.  When the antecedent term is itself a keyword the
    computation reduces to `topic_subjunctive`, which is applied directly.
    """
    kws = tuple(sorted(set(keywords)))
    if not kws:
        raise ValueError("keywords must not be empty")
    conv = _as_convention(convention)
    _check_topic_width(ea, topic_width)
    if ea.term in kws:
        return topic_subjunctive(d, ea, eb, topic_width, smoothing, conv, cache)
    candidates = []
    for k in kws:
        topic = SelectiveEraser(k, topic_width)
        num_chain = _numerator_chain(ea, eb, conv, topic=topic)
        den_chain = EraserChain((ea, topic))
        candidates.append(_evaluate(d, num_chain, den_chain, smoothing, conv, cache))
    defined = [r for r in candidates if r.value is not None]
    if not defined:
        return candidates[0]
    return max(defined, key=lambda r: r.value)
