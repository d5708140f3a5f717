"""Surface feature extraction for anaphoricity classification.

Two feature views are produced per mention: a sparse string-keyed binary
vector for the kernel SVM (lemmas, POS tags, mention string/length/type and
pairwise match flags) and a dense 20-component binary vector plus a
generalized context token sequence for the recurrent model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .corpus import Anaphoricity, Document, Mention, MentionType, iter_labeled_mentions

__all__ = [
    "CONTEXT_WINDOW",
    "INVENTORY_PRONOUNS",
    "MENTION_PLACEHOLDER",
    "SEP_HEAD",
    "SEP_MENTION",
    "SURFACE_DIM",
    "ContextInstance",
    "MatchFlags",
    "build_context_sequence",
    "extract_surface20",
    "extract_svm_features",
    "lstm_instances",
    "match_flags",
    "surface_type_slot",
    "svm_instances",
    "write_feature_lines",
]

MENTION_PLACEHOLDER = "<MENTION>"
SEP_MENTION = "<SEP_MENTION>"
SEP_HEAD = "<SEP_HEAD>"

CONTEXT_WINDOW = 10
SURFACE_DIM = 20
MENTION_LENGTH_CAP = 20

# One-hot slots 3..9 of the surface vector, in fixed order.
INVENTORY_PRONOUNS = ("he", "i", "it", "she", "they", "we", "you")


@dataclass(frozen=True)
class MatchFlags:
    """Pairwise string/head/containment relations of a mention against the
    other mentions of its document.

    The ``*_prev`` variants restrict the comparison to mentions occurring
    earlier in document order (span.start strictly smaller, ties broken by
    span.end).  All string comparisons are over lowercased surfaces.
    """

    string_match_text: bool
    string_match_prev: bool
    head_match_text: bool
    head_match_prev: bool
    contains_other: bool
    contains_prev: bool
    contained_in_other: bool
    contained_in_prev: bool
    embedded_in_other: bool

    def in_listed_order(self) -> tuple[bool, ...]:
        """The nine flags in surface-vector slot order (slots 11..19)."""
        return (
            self.string_match_text,
            self.string_match_prev,
            self.head_match_text,
            self.head_match_prev,
            self.contains_other,
            self.contains_prev,
            self.contained_in_other,
            self.contained_in_prev,
            self.embedded_in_other,
        )


def _is_sublist(needle: Sequence[str], haystack: Sequence[str]) -> bool:
    n, h = len(needle), len(haystack)
    if n > h:
        return False
    return any(tuple(haystack[i : i + n]) == tuple(needle) for i in range(h - n + 1))


def _mention_words(doc: Document, m: Mention) -> tuple[str, ...]:
    return tuple(t.surface.lower() for t in doc.span_tokens(m.span))


def match_flags(m: Mention, doc: Document) -> MatchFlags:
    words = _mention_words(doc, m)
    head = doc.head_token(m.span).surface.lower()

    string_text = string_prev = head_text = head_prev = False
    contains = contains_prev = contained = contained_prev = embedded = False

    for other in doc.mentions:
        if other is m:
            continue
        prev = other.span.start < m.span.start or (
            other.span.start == m.span.start and other.span.end < m.span.end
        )
        other_words = _mention_words(doc, other)
        if other_words == words:
            string_text = True
            string_prev = string_prev or prev
        if doc.head_token(other.span).surface.lower() == head:
            head_text = True
            head_prev = head_prev or prev
        if _is_sublist(other_words, words):
            contains = True
            contains_prev = contains_prev or prev
        if _is_sublist(words, other_words):
            contained = True
            contained_prev = contained_prev or prev
        if (
            other.span.sentence_index == m.span.sentence_index
            and other.span.start <= m.span.start
            and m.span.end <= other.span.end
            and (other.span.start, other.span.end) != (m.span.start, m.span.end)
        ):
            embedded = True

    return MatchFlags(
        string_match_text=string_text,
        string_match_prev=string_prev,
        head_match_text=head_text,
        head_match_prev=head_prev,
        contains_other=contains,
        contains_prev=contains_prev,
        contained_in_other=contained,
        contained_in_prev=contained_prev,
        embedded_in_other=embedded,
    )


# ---------------------------------------------------------------------------
# SVM sparse features
# ---------------------------------------------------------------------------

_COARSE_TYPE = {
    MentionType.PROPER: "proper",
    MentionType.NOMINAL_DEFINITE: "nominal",
    MentionType.NOMINAL_INDEFINITE: "nominal",
    MentionType.PRONOUN: "pronoun",
    MentionType.LIST: "list",
    MentionType.OTHER: "nominal",
}

# Bare binary flag names, in MatchFlags listed order minus the embedded flag.
_SVM_FLAG_NAMES = (
    "string_match_text",
    "string_match_prev",
    "head_match_text",
    "head_match_prev",
    "contains_other",
    "contains_prev",
    "contained_in_other",
    "contained_in_prev",
)


def extract_svm_features(m: Mention, doc: Document) -> set[str]:
    """String-keyed binary indicators for one mention.

    Mention-token lemmas/POS collapse duplicates (set semantics); the two
    previous/following context positions use document-level adjacency and
    are omitted at document boundaries.
    """
    feats: set[str] = set()
    for tok in doc.span_tokens(m.span):
        feats.add(f"m_lem={tok.lemma}")
        feats.add(f"m_pos={tok.pos}")
    for offset, name in ((1, "prev1"), (2, "prev2")):
        idx = m.span.start - offset
        if idx >= 0:
            feats.add(f"{name}_lem={doc.tokens[idx].lemma}")
            feats.add(f"{name}_pos={doc.tokens[idx].pos}")
    for offset, name in ((0, "next1"), (1, "next2")):
        idx = m.span.end + offset
        if idx < len(doc.tokens):
            feats.add(f"{name}_lem={doc.tokens[idx].lemma}")
            feats.add(f"{name}_pos={doc.tokens[idx].pos}")
    feats.add(f"m_str={doc.span_text(m.span)}")
    length = m.span.end - m.span.start
    feats.add(
        f"m_len={length}" if length <= MENTION_LENGTH_CAP else f"m_len={MENTION_LENGTH_CAP}+"
    )
    feats.add(f"m_type={_COARSE_TYPE[m.mention_type]}")
    flags = match_flags(m, doc)
    flag_values = flags.in_listed_order()[: len(_SVM_FLAG_NAMES)]
    feats.update(
        name for name, value in zip(_SVM_FLAG_NAMES, flag_values) if value
    )
    return feats


# ---------------------------------------------------------------------------
# Dense 20-component surface vector
# ---------------------------------------------------------------------------


def surface_type_slot(m: Mention) -> int:
    """One-hot slot (0..10) of the mention-type block."""
    if m.mention_type is MentionType.PROPER:
        return 0
    if m.mention_type is MentionType.NOMINAL_DEFINITE:
        return 1
    if m.mention_type is MentionType.NOMINAL_INDEFINITE:
        return 2
    if m.mention_type is MentionType.PRONOUN and m.pronoun in INVENTORY_PRONOUNS:
        return 3 + INVENTORY_PRONOUNS.index(m.pronoun)
    return 10


def extract_surface20(m: Mention, doc: Document) -> np.ndarray:
    vec = np.zeros(SURFACE_DIM, dtype=np.float64)
    vec[surface_type_slot(m)] = 1.0
    for slot, value in enumerate(match_flags(m, doc).in_listed_order(), start=11):
        vec[slot] = float(value)
    return vec


# ---------------------------------------------------------------------------
# Generalized context sequence
# ---------------------------------------------------------------------------


def build_context_sequence(
    m: Mention, doc: Document, window: int = CONTEXT_WINDOW
) -> list[str]:
    """Context tokens with the mention replaced by a placeholder, followed by
    the mention tokens and the head token behind separator symbols:

        [<=window before] <MENTION> [<=window after] <SEP_MENTION>
        [mention tokens] <SEP_HEAD> [head token]

    Window tokens cross sentence boundaries but truncate at document edges.
    """
    before = [
        t.surface.lower() for t in doc.tokens[max(0, m.span.start - window) : m.span.start]
    ]
    after = [t.surface.lower() for t in doc.tokens[m.span.end : m.span.end + window]]
    mention = [t.surface.lower() for t in doc.span_tokens(m.span)]
    head = doc.head_token(m.span).surface.lower()
    return (
        before
        + [MENTION_PLACEHOLDER]
        + after
        + [SEP_MENTION]
        + mention
        + [SEP_HEAD, head]
    )


# ---------------------------------------------------------------------------
# Corpus-level instance builders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContextInstance:
    """One recurrent-model input: context symbols plus the surface vector."""

    tokens: tuple[str, ...]
    surface: np.ndarray


def svm_instances(docs: Iterable[Document]) -> tuple[list[set[str]], np.ndarray]:
    vectors: list[set[str]] = []
    labels: list[int] = []
    for doc, m in iter_labeled_mentions(docs):
        vectors.append(extract_svm_features(m, doc))
        labels.append(int(m.gold_label))
    return vectors, np.asarray(labels, dtype=np.int64)


def lstm_instances(
    docs: Iterable[Document], window: int = CONTEXT_WINDOW
) -> tuple[list[ContextInstance], np.ndarray]:
    instances: list[ContextInstance] = []
    labels: list[int] = []
    for doc, m in iter_labeled_mentions(docs):
        instances.append(
            ContextInstance(
                tokens=tuple(build_context_sequence(m, doc, window)),
                surface=extract_surface20(m, doc),
            )
        )
        labels.append(int(m.gold_label))
    return instances, np.asarray(labels, dtype=np.int64)


def write_feature_lines(
    vectors: Iterable[set[str]],
    labels: Iterable[int | Anaphoricity],
    out: TextIO,
) -> None:
    """Line format for offline inspection: label<TAB>feat1<TAB>feat2..."""
    for feats, label in zip(vectors, labels):
        tag = Anaphoricity(int(label)).tag
        out.write("\t".join([tag, *sorted(feats)]) + "\n")
