"""Detection of discourse-old (anaphoric) mentions for coreference resolution.

The package parses CoNLL-2012 coreference corpora, derives gold
anaphoricity labels from chain membership, extracts surface features, and
trains two classifiers: a kernel SVM over pruned sparse indicators and a
bidirectional LSTM over generalized mention contexts.  Evaluation covers
per-class and per-mention-type recall/precision/F1.
"""

from .corpus import (
    Anaphoricity,
    Document,
    Mention,
    MentionSpan,
    MentionType,
    ParseError,
    Token,
    derive_labels,
    load_corpus,
    parse_conll,
    write_conll,
)
from .evaluation import EvalReport, score, score_by_type
from .features import (
    ContextInstance,
    build_context_sequence,
    extract_surface20,
    extract_svm_features,
    lstm_instances,
    match_flags,
    svm_instances,
)
from .neural import (
    EmbeddingTable,
    LstmAnaphoricityModel,
    extend_vocabulary,
    load_embeddings,
)
from .svm import FeatureDictionary, SvmAnaphoricityModel, SvmModel, build_dictionary

__version__ = "0.1.0"

__all__ = [
    "Anaphoricity",
    "ContextInstance",
    "Document",
    "EmbeddingTable",
    "EvalReport",
    "FeatureDictionary",
    "LstmAnaphoricityModel",
    "Mention",
    "MentionSpan",
    "MentionType",
    "ParseError",
    "SvmAnaphoricityModel",
    "SvmModel",
    "Token",
    "build_context_sequence",
    "build_dictionary",
    "derive_labels",
    "extend_vocabulary",
    "extract_surface20",
    "extract_svm_features",
    "load_corpus",
    "load_embeddings",
    "lstm_instances",
    "match_flags",
    "parse_conll",
    "score",
    "score_by_type",
    "svm_instances",
    "write_conll",
    "__version__",
]
