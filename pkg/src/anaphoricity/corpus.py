"""CoNLL-2012 corpus handling: tokens, mentions, coreference chains, labels.

Documents are parsed from the CoNLL-2012 column format.  Coreference
bracket spans become candidate mentions, a head token is assigned with a
nominal-head heuristic (or taken from a sidecar mention file), mention
types are classified from surface and POS evidence, and gold anaphoricity
labels are derived from chain membership: a mention is discourse-old
(anaphoric) exactly when it is a non-first member of its coreference
chain.  Singletons and chain-first mentions are discourse-new.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum, IntEnum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Anaphoricity",
    "Document",
    "Mention",
    "MentionType",
    "MentionSpan",
    "ParseError",
    "SidecarMention",
    "Token",
    "assign_head",
    "attach_candidate_mentions",
    "classify_mention_type",
    "derive_labels",
    "iter_labeled_mentions",
    "load_corpus",
    "parse_conll",
    "read_mention_sidecar",
    "write_conll",
]

# Closed inventory of English pronoun surface forms used for mention typing.
PRONOUN_WORDS = frozenset(
    """he i it she they we you him her his hers its their them theirs us our
    ours my mine your yours himself herself itself themselves ourselves
    myself yourself""".split()
)

DEFINITE_FIRST_WORDS = frozenset({"the", "this", "that", "these", "those"})

_OPEN_BRACKETS = {"(", "-LRB-", "[", "-LSB-"}
_CLOSE_BRACKETS = {")", "-RRB-", "]", "-RSB-"}


class ParseError(ValueError):
    """Malformed CoNLL stream or sidecar mention file."""


class Anaphoricity(IntEnum):
    """Binary anaphoricity status of a mention."""

    NON_ANAPHORIC = 0
    ANAPHORIC = 1

    @property
    def tag(self) -> str:
        return "anaphoric" if self is Anaphoricity.ANAPHORIC else "non-anaphoric"

    @classmethod
    def from_tag(cls, tag: str) -> "Anaphoricity":
        try:
            return {"anaphoric": cls.ANAPHORIC, "non-anaphoric": cls.NON_ANAPHORIC}[tag]
        except KeyError:
            raise ValueError(f"unknown anaphoricity tag {tag!r}") from None


class MentionType(Enum):
    PROPER = "proper"
    NOMINAL_DEFINITE = "nominal_definite"
    NOMINAL_INDEFINITE = "nominal_indefinite"
    PRONOUN = "pronoun"
    LIST = "list"
    OTHER = "other"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    sentence_index: int
    index_in_sentence: int
    doc_index: int


@dataclass(frozen=True)
class MentionSpan:
    """Token span of a mention: [start, end) in document token indices."""

    sentence_index: int
    start: int
    end: int
    head: int


@dataclass(frozen=True)
class Mention:
    span: MentionSpan
    chain_id: int | None = None
    mention_type: MentionType = MentionType.OTHER
    pronoun: str | None = None  # lowercased surface, set only for PRONOUN
    gold_label: Anaphoricity = Anaphoricity.NON_ANAPHORIC


@dataclass
class Document:
    """An immutable-by-convention parsed document.

    ``mentions`` is sorted by (span.start, span.end); ``chains`` maps a
    chain id to the document-order indices of its member mentions.
    """

    doc_id: str
    part: str
    tokens: list[Token]
    mentions: list[Mention]
    chains: dict[int, list[int]]

    def span_tokens(self, span: MentionSpan) -> list[Token]:
        return self.tokens[span.start : span.end]

    def span_text(self, span: MentionSpan) -> str:
        """Lowercased space-joined surface string of a span."""
        return " ".join(t.surface.lower() for t in self.span_tokens(span))

    def head_token(self, span: MentionSpan) -> Token:
        return self.tokens[span.head]


def _is_nominal(pos: str) -> bool:
    return pos.startswith("NN") or pos in ("PRP", "PRP$")


def assign_head(tokens: Sequence[Token] | Document, start: int, end: int) -> int:
    """Heuristic head for the span [start, end): rightmost nominal token
    before the first IN/TO token when one exists, else the rightmost
    nominal in the span, else the last token."""
    if isinstance(tokens, Document):
        tokens = tokens.tokens
    span = tokens[start:end]
    cut = len(span)
    for offset, tok in enumerate(span):
        if tok.pos in ("IN", "TO"):
            cut = offset
            break
    for segment in (span[:cut], span):
        for offset in range(len(segment) - 1, -1, -1):
            if _is_nominal(segment[offset].pos):
                return start + offset
    return end - 1


def classify_mention_type(
    span: MentionSpan, doc: Document
) -> tuple[MentionType, str | None]:
    """Surface mention type, plus the pronoun word for pronominal mentions.

    Precedence: pronoun > proper > list > nominal-definite >
    nominal-indefinite > other.
    """
    tokens = doc.span_tokens(span)
    first = tokens[0]
    head = doc.head_token(span)

    if len(tokens) == 1 and (
        first.surface.lower() in PRONOUN_WORDS or first.pos in ("PRP", "PRP$")
    ):
        return MentionType.PRONOUN, first.surface.lower()
    if head.pos in ("NNP", "NNPS"):
        return MentionType.PROPER, None
    if _has_top_level_coordination(tokens):
        return MentionType.LIST, None
    if first.surface.lower() in DEFINITE_FIRST_WORDS or first.pos in ("PRP$", "POS"):
        return MentionType.NOMINAL_DEFINITE, None
    if head.pos in ("NN", "NNS"):
        return MentionType.NOMINAL_INDEFINITE, None
    return MentionType.OTHER, None


def _has_top_level_coordination(tokens: Sequence[Token]) -> bool:
    # A CC token or a bracket-depth-0 comma flanked by nominal tokens.
    depth = 0
    for offset, tok in enumerate(tokens):
        if tok.surface in _OPEN_BRACKETS or tok.pos == "-LRB-":
            depth += 1
        elif tok.surface in _CLOSE_BRACKETS or tok.pos == "-RRB-":
            depth = max(0, depth - 1)
        elif (tok.pos == "CC" or (tok.surface == "," and depth == 0)) and (
            any(_is_nominal(t.pos) for t in tokens[:offset])
            and any(_is_nominal(t.pos) for t in tokens[offset + 1 :])
        ):
            return True
    return False


def derive_labels(doc: Document) -> Document:
    """Assign gold labels: anaphoric iff a non-first member of a chain.

    Chain order is document order: ascending span.start, ties broken by
    ascending span.end.  Total and idempotent.
    """
    anaphoric: set[int] = set()
    for members in doc.chains.values():
        ordered = sorted(
            members, key=lambda i: (doc.mentions[i].span.start, doc.mentions[i].span.end)
        )
        anaphoric.update(ordered[1:])
    mentions = [
        replace(
            m,
            gold_label=Anaphoricity.ANAPHORIC
            if i in anaphoric
            else Anaphoricity.NON_ANAPHORIC,
        )
        for i, m in enumerate(doc.mentions)
    ]
    return Document(doc.doc_id, doc.part, doc.tokens, mentions, dict(doc.chains))


def iter_labeled_mentions(
    docs: Iterable[Document],
) -> Iterator[tuple[Document, Mention]]:
    for doc in docs:
        for mention in doc.mentions:
            yield doc, mention


# ---------------------------------------------------------------------------
# CoNLL-2012 parsing
# ---------------------------------------------------------------------------

_BEGIN_RE = re.compile(r"#begin document \((?P<doc_id>.*?)\)(?:; part (?P<part>\S+))?\s*$")
_COREF_PART_RE = re.compile(r"^(\()?([^()|]+?)(\))?$")


def _normalize_part(part: str) -> str:
    return str(int(part)) if part.isdigit() else part


class _DocumentBuilder:
    def __init__(self, doc_id: str, part: str, begin_line: int) -> None:
        self.doc_id = doc_id
        self.part = part
        self.begin_line = begin_line
        self.tokens: list[Token] = []
        self.sentence_index = 0
        self.index_in_sentence = 0
        self.open_spans: dict[int, list[int]] = {}  # chain id -> stack of start indices
        self.raw_spans: list[tuple[int, int, int, int]] = []  # chain, sent, start, end

    def _context(self) -> str:
        return f"document {self.doc_id!r} part {self.part}, sentence {self.sentence_index}"

    def add_token(self, cols: list[str], lineno: int) -> None:
        surface = cols[3]
        pos = cols[4]
        lemma = cols[6] if len(cols) >= 8 and cols[6] not in ("-", "_") else surface.lower()
        tok = Token(
            surface=surface,
            lemma=lemma,
            pos=pos,
            sentence_index=self.sentence_index,
            index_in_sentence=self.index_in_sentence,
            doc_index=len(self.tokens),
        )
        self.tokens.append(tok)
        self.index_in_sentence += 1
        self._apply_coref(cols[-1], tok.doc_index, lineno)

    def _apply_coref(self, field: str, doc_index: int, lineno: int) -> None:
        if field in ("-", "_", ""):
            return
        for piece in field.split("|"):
            match = _COREF_PART_RE.match(piece)
            if match is None:
                raise ParseError(
                    f"malformed coreference field {piece!r} in {self._context()} (line {lineno})"
                )
            opens, cid_text, closes = match.groups()
            if not cid_text.isdigit():
                raise ParseError(
                    f"non-numeric chain id {cid_text!r} in {self._context()} (line {lineno})"
                )
            cid = int(cid_text)
            if opens:
                self.open_spans.setdefault(cid, []).append(doc_index)
            if closes:
                stack = self.open_spans.get(cid)
                if not stack:
                    raise ParseError(
                        f"unbalanced coreference bracket: chain {cid} closed without "
                        f"an open bracket in {self._context()} (line {lineno})"
                    )
                start = stack.pop()
                if not stack:
                    del self.open_spans[cid]
                self.raw_spans.append((cid, self.sentence_index, start, doc_index + 1))

    def end_sentence(self, lineno: int) -> None:
        if self.index_in_sentence == 0:
            return
        if self.open_spans:
            cid = min(self.open_spans)
            raise ParseError(
                f"unbalanced coreference bracket: chain {cid} left open at the end "
                f"of {self._context()} (line {lineno})"
            )
        self.sentence_index += 1
        self.index_in_sentence = 0

    def finish(self, lineno: int) -> Document:
        self.end_sentence(lineno)
        return _build_document(self.doc_id, self.part, self.tokens, self.raw_spans)


def _build_document(
    doc_id: str,
    part: str,
    tokens: list[Token],
    raw_spans: Sequence[tuple[int, int, int, int]],
    extra_spans: Sequence["SidecarMention"] = (),
) -> Document:
    head_overrides = {
        (s.start, s.end): s.head for s in extra_spans if s.head is not None
    }
    gold_keys = {(start, end) for _, _, start, end in raw_spans}

    prototypes: list[tuple[int | None, int, int, int]] = [
        (cid, sent, start, end) for cid, sent, start, end in raw_spans
    ]
    for extra in extra_spans:
        if (extra.start, extra.end) not in gold_keys:
            prototypes.append((None, extra.sentence_index, extra.start, extra.end))

    mentions: list[Mention] = []
    for cid, sent, start, end in prototypes:
        if not (0 <= start < end <= len(tokens)):
            raise ParseError(
                f"mention span [{start}, {end}) out of range in document {doc_id!r} part {part}"
            )
        span_sents = {t.sentence_index for t in tokens[start:end]}
        if span_sents != {sent}:
            raise ParseError(
                f"mention span [{start}, {end}) crosses sentence boundaries in "
                f"document {doc_id!r} part {part}"
            )
        head = head_overrides.get((start, end))
        if head is None:
            head = assign_head(tokens, start, end)
        elif not (start <= head < end):
            raise ParseError(
                f"head index {head} outside mention span [{start}, {end}) in "
                f"document {doc_id!r} part {part}"
            )
        mentions.append(Mention(MentionSpan(sent, start, end, head), chain_id=cid))

    mentions.sort(
        key=lambda m: (
            m.span.start,
            m.span.end,
            m.chain_id is None,
            m.chain_id if m.chain_id is not None else 0,
        )
    )
    chains: dict[int, list[int]] = {}
    for i, m in enumerate(mentions):
        if m.chain_id is not None:
            chains.setdefault(m.chain_id, []).append(i)

    doc = Document(doc_id, part, tokens, mentions, chains)
    doc.mentions = [
        replace(m, mention_type=t, pronoun=p)
        for m, (t, p) in (
            (m, classify_mention_type(m.span, doc)) for m in doc.mentions
        )
    ]
    return derive_labels(doc)


def parse_conll(stream: str | Iterable[str]) -> list[Document]:
    """Parse a CoNLL-2012 character stream into documents.

    Expects ``#begin document (id); part N`` / ``#end document`` delimiters,
    one token per line, blank line between sentences, with the word form in
    column 3, POS in column 4, and the coreference field in the last column.
    Column 6 is treated as a lemma column when present; otherwise the lemma
    falls back to the lowercased surface.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()
    docs: list[Document] = []
    builder: _DocumentBuilder | None = None
    lineno = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        stripped = line.strip()
        if stripped.startswith("#begin document"):
            if builder is not None:
                raise ParseError(
                    f"nested '#begin document' for {builder.doc_id!r} (line {lineno})"
                )
            match = _BEGIN_RE.match(stripped)
            if match is None:
                raise ParseError(f"malformed document header (line {lineno}): {line!r}")
            part = _normalize_part(match.group("part") or "0")
            builder = _DocumentBuilder(match.group("doc_id"), part, lineno)
        elif stripped == "#end document":
            if builder is None:
                raise ParseError(f"'#end document' outside a document (line {lineno})")
            docs.append(builder.finish(lineno))
            builder = None
        elif not stripped:
            if builder is not None:
                builder.end_sentence(lineno)
        elif stripped.startswith("#"):
            continue
        else:
            if builder is None:
                raise ParseError(f"token line outside a document (line {lineno})")
            cols = line.split()
            if len(cols) < 6:
                raise ParseError(
                    f"expected at least 6 columns, got {len(cols)} in document "
                    f"{builder.doc_id!r} (line {lineno})"
                )
            builder.add_token(cols, lineno)
    if builder is not None:
        raise ParseError(
            f"truncated document {builder.doc_id!r}: missing '#end document' "
            f"(begun at line {builder.begin_line})"
        )
    return docs


# ---------------------------------------------------------------------------
# CoNLL-2012 writing
# ---------------------------------------------------------------------------


def _coref_fields(doc: Document) -> list[str]:
    opens: dict[int, list[Mention]] = {}
    closes: dict[int, list[Mention]] = {}
    singles: dict[int, list[Mention]] = {}
    for m in doc.mentions:
        if m.chain_id is None:
            continue
        if m.span.end - m.span.start == 1:
            singles.setdefault(m.span.start, []).append(m)
        else:
            opens.setdefault(m.span.start, []).append(m)
            closes.setdefault(m.span.end - 1, []).append(m)
    fields = []
    for i in range(len(doc.tokens)):
        parts: list[str] = []
        # Outermost spans open first; innermost close first.
        for m in sorted(opens.get(i, ()), key=lambda m: (-m.span.end, m.chain_id)):
            parts.append(f"({m.chain_id}")
        for m in sorted(singles.get(i, ()), key=lambda m: m.chain_id):
            parts.append(f"({m.chain_id})")
        for m in sorted(closes.get(i, ()), key=lambda m: (-m.span.start, m.chain_id)):
            parts.append(f"{m.chain_id})")
        fields.append("|".join(parts) if parts else "-")
    return fields


def write_conll(docs: Iterable[Document] | Document) -> str:
    """Serialize documents back to CoNLL-2012 columns (chains only;
    chainless candidate mentions live in the sidecar format)."""
    if isinstance(docs, Document):
        docs = [docs]
    out: list[str] = []
    for doc in docs:
        out.append(f"#begin document ({doc.doc_id}); part {doc.part}")
        coref = _coref_fields(doc)
        last_sentence = -1
        for tok in doc.tokens:
            if tok.sentence_index != last_sentence and last_sentence >= 0:
                out.append("")
            last_sentence = tok.sentence_index
            out.append(
                "\t".join(
                    [
                        doc.doc_id,
                        doc.part,
                        str(tok.index_in_sentence),
                        tok.surface,
                        tok.pos,
                        "*",
                        tok.lemma,
                        "-",
                        "-",
                        "-",
                        "*",
                        coref[tok.doc_index],
                    ]
                )
            )
        out.append("")
        out.append("#end document")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Sidecar candidate-mention files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SidecarMention:
    sentence_index: int
    start: int
    end: int
    head: int | None = None


def read_mention_sidecar(
    stream: str | Iterable[str],
) -> dict[tuple[str, str], list[SidecarMention]]:
    """Read a candidate-mention TSV: doc_id, part, sentence_index, start,
    end, head (document token indices).  ``#`` starts a comment; the head
    field may be ``-`` to request the heuristic head."""
    if isinstance(stream, str):
        stream = stream.splitlines()
    spans: dict[tuple[str, str], list[SidecarMention]] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cols = line.split("\t") if "\t" in line else line.split()
        if len(cols) != 6:
            raise ParseError(
                f"sidecar line {lineno}: expected 6 fields, got {len(cols)}"
            )
        doc_id, part, sent, start, end, head = cols
        try:
            mention = SidecarMention(
                sentence_index=int(sent),
                start=int(start),
                end=int(end),
                head=None if head in ("-", "") else int(head),
            )
        except ValueError:
            raise ParseError(f"sidecar line {lineno}: non-numeric span field") from None
        if mention.start >= mention.end:
            raise ParseError(
                f"sidecar line {lineno}: empty span [{mention.start}, {mention.end})"
            )
        spans.setdefault((doc_id, _normalize_part(part)), []).append(mention)
    return spans


def attach_candidate_mentions(
    doc: Document, spans: Sequence[SidecarMention]
) -> Document:
    """Merge extra candidate spans into a document.

    A sidecar span matching a gold span only overrides the head; new spans
    become chainless (non-anaphoric) candidate mentions.
    """
    for s in spans:
        if not (0 <= s.start < s.end <= len(doc.tokens)):
            raise ParseError(
                f"sidecar span [{s.start}, {s.end}) out of range for document "
                f"{doc.doc_id!r} part {doc.part}"
            )
        actual_sents = {t.sentence_index for t in doc.tokens[s.start : s.end]}
        if actual_sents != {s.sentence_index}:
            raise ParseError(
                f"sidecar span [{s.start}, {s.end}) does not lie in sentence "
                f"{s.sentence_index} of document {doc.doc_id!r} part {doc.part}"
            )
    raw_spans = [
        (m.chain_id, m.span.sentence_index, m.span.start, m.span.end)
        for m in doc.mentions
        if m.chain_id is not None
    ]
    return _build_document(doc.doc_id, doc.part, doc.tokens, raw_spans, spans)


def load_corpus(
    paths: Sequence[str | Path] | str | Path,
    sidecar_path: str | Path | None = None,
) -> list[Document]:
    """Parse one or more CoNLL files, attaching sidecar mentions if given."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    docs: list[Document] = []
    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        try:
            docs.extend(parse_conll(text))
        except ParseError as err:
            raise ParseError(f"{path}: {err}") from None
    if sidecar_path is not None:
        sidecar = read_mention_sidecar(Path(sidecar_path).read_text(encoding="utf-8"))
        docs = [
            attach_candidate_mentions(doc, sidecar.get((doc.doc_id, doc.part), ()))
            for doc in docs
        ]
    return docs
