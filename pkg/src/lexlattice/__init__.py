"""Selective-eraser lexical measurements, uncertain conditionals, and topic lattices."""

from .conditional import (
    ConditionalResult,
    Convention,
    SmoothingConfig,
    material_implication,
    smoothed_subjunctive,
    subjunctive,
    topic_subjunctive,
    topic_subjunctive_general,
)
from .corpus import (
    Corpus,
    CorpusAverages,
    CorpusTokenizer,
    Document,
    TokenizerConfig,
    strip_gutenberg,
    tokenize,
)
from .crosslingual import (
    BaselineSimilarity,
    KeywordAlignment,
    LatticeDiff,
    MorphismReport,
    align_compare,
    baseline_similarity,
    frequency_matched_keywords,
    morphism_check,
)
from .eraser import (
    ChainCache,
    EraserChain,
    MaskedDocument,
    SelectiveEraser,
    apply,
    apply_chain,
    mask_join,
    mask_meet,
    naive_apply_oracle,
    norm,
    order_holds,
    weighted_valuation,
)
from .errors import AlignmentError, CoverageError, EmptyDocumentError
from .order_core import (
    FinitePoset,
    Projector,
    ThreeValued,
    Valuation,
    WeightedOrthogonalSet,
    build_polarisation_lattice,
    check_valuation_monotone,
    is_complement_order,
    is_complement_valuation,
    projector_valuation,
    run_reference_checks,
    three_valued_of,
)
from .topic_lattice import (
    Anomaly,
    RelationEdge,
    TopicConfig,
    TopicLattice,
    TopicLatticeBuilder,
    build_lattice,
    detect_anomalies,
    export_dot,
    export_json,
    import_json,
    render_table,
    resolve,
    scan_pair,
    topological_order,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "Anomaly",
    "BaselineSimilarity",
    "ChainCache",
    "ConditionalResult",
    "Convention",
    "Corpus",
    "CorpusAverages",
    "CorpusTokenizer",
    "CoverageError",
    "Document",
    "EmptyDocumentError",
    "EraserChain",
    "FinitePoset",
    "KeywordAlignment",
    "LatticeDiff",
    "MaskedDocument",
    "MorphismReport",
    "Projector",
    "RelationEdge",
    "SelectiveEraser",
    "SmoothingConfig",
    "ThreeValued",
    "TokenizerConfig",
    "TopicConfig",
    "TopicLattice",
    "TopicLatticeBuilder",
    "Valuation",
    "WeightedOrthogonalSet",
    "align_compare",
    "apply",
    "apply_chain",
    "baseline_similarity",
    "build_lattice",
    "build_polarisation_lattice",
    "check_valuation_monotone",
    "detect_anomalies",
    "export_dot",
    "export_json",
    "frequency_matched_keywords",
    "import_json",
    "is_complement_order",
    "is_complement_valuation",
    "mask_join",
    "mask_meet",
    "material_implication",
    "morphism_check",
    "naive_apply_oracle",
    "norm",
    "order_holds",
    "projector_valuation",
    "render_table",
    "resolve",
    "run_reference_checks",
    "scan_pair",
    "smoothed_subjunctive",
    "strip_gutenberg",
    "subjunctive",
    "three_valued_of",
    "tokenize",
    "topic_subjunctive",
    "topic_subjunctive_general",
    "topological_order",
    "weighted_valuation",
]
