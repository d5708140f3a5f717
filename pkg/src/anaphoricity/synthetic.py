"""Deterministic synthetic corpus for demos and end-to-end checks.

Every entity in a generated document has a surface string that is unique
within the document, and every later chain member repeats that string
exactly.  A mention is therefore anaphoric precisely when an earlier
mention with the same lowercased surface exists, i.e. the gold label
coincides with the string-match-in-previous-context surface feature.
Repeat occurrences are spaced so the antecedent falls outside the 10-token
context window.
"""

from __future__ import annotations

import numpy as np

from .corpus import Document, parse_conll

__all__ = ["generate_conll", "generate_corpus", "generate_embedding_text"]

_SYLLABLES = (
    "ba re vo ta lin dor mek sa tri plo gan ve ze ran kel mor fi lu na bri "
    "tol da pex rin cha vul om ster quil"
).split()

_NOUNS = (
    "mill garden treaty ledger harbor signal engine council archive market "
    "bridge canal statue tower orchard furnace quarry beacon parlor granary "
    "terrace cistern foundry atelier bastion causeway"
).split()

_VERBS = (
    "walked turned paused spoke nodded listened waited wandered sighed "
    "hurried lingered gathered murmured vanished stumbled recited drifted "
    "signaled hesitated obliged"
).split()

_ADVERBS = (
    "quietly slowly often rarely later soon again always once twice "
    "meanwhile afterwards suddenly calmly gladly barely nearly mostly"
).split()

_PRONOUNS = "he she it they we you i him her them".split()

# Minimum token distance between two occurrences of the same chain; keeps
# the antecedent outside the recurrent model's context window.
_MIN_GAP = 12


def _make_name(rng: np.random.Generator, syllable_count: int) -> str:
    word = "".join(rng.choice(_SYLLABLES) for _ in range(syllable_count))
    return word.capitalize()


def _sample_entity(rng: np.random.Generator) -> list[tuple[str, str]]:
    """Tokens of a fresh entity mention as (surface, pos) pairs."""
    kind = rng.choice(
        ["proper1", "proper2", "definite", "definite_pp", "indefinite", "pronoun", "list", "nested"],
        p=[0.22, 0.13, 0.2, 0.08, 0.14, 0.1, 0.05, 0.08],
    )
    if kind == "proper1":
        return [(_make_name(rng, 2), "NNP")]
    if kind == "proper2":
        return [(_make_name(rng, 2), "NNP"), (_make_name(rng, 2), "NNP")]
    if kind == "definite":
        return [("the", "DT"), (rng.choice(_NOUNS), "NN")]
    if kind == "definite_pp":
        return [
            ("the", "DT"),
            (rng.choice(_NOUNS), "NN"),
            ("of", "IN"),
            ("the", "DT"),
            (rng.choice(_NOUNS), "NN"),
        ]
    if kind == "indefinite":
        noun = rng.choice(_NOUNS)
        article = "an" if noun[0] in "aeiou" else "a"
        return [(article, "DT"), (noun, "NN")]
    if kind == "pronoun":
        return [(rng.choice(_PRONOUNS), "PRP")]
    if kind == "list":
        return [
            (_make_name(rng, 2), "NNP"),
            ("and", "CC"),
            (_make_name(rng, 2), "NNP"),
        ]
    # nested: a definite mention carrying an embedded proper-name mention
    return [("the", "DT"), (_make_name(rng, 2), "NNP"), (rng.choice(_NOUNS), "NN")]


def _filler(rng: np.random.Generator) -> tuple[str, str]:
    if rng.random() < 0.55:
        return str(rng.choice(_VERBS)), "VBD"
    return str(rng.choice(_ADVERBS)), "RB"


class _DocPlan:
    def __init__(self, rng: np.random.Generator, doc_index: int) -> None:
        self.rng = rng
        self.doc_id = f"synthetic/doc_{doc_index:04d}"
        used: set[str] = set()
        self.entities: list[list[tuple[str, str]]] = []
        self.nested: list[bool] = []
        self.remaining: list[int] = []
        n_chains = int(rng.integers(5, 10))
        for _ in range(n_chains):
            for _ in range(50):
                tokens = _sample_entity(rng)
                surface = " ".join(s.lower() for s, _ in tokens)
                if surface not in used and not any(
                    s.lower() in used for s, p in tokens if p == "NNP"
                ):
                    break
            else:
                continue
            used.add(surface)
            # Reserve embedded proper names so they stay document-unique too.
            is_nested = len(tokens) == 3 and tokens[1][1] == "NNP" and tokens[0][0] == "the"
            if is_nested:
                used.add(tokens[1][0].lower())
            self.entities.append(tokens)
            self.nested.append(is_nested)
            size = 1 if rng.random() < 0.35 else int(rng.integers(2, 5))
            self.remaining.append(size)
        self.last_end = [-(10**9)] * len(self.entities)
        self.first_done = [False] * len(self.entities)


def _generate_document_lines(doc_index: int, seed: int) -> list[str]:
    rng = np.random.default_rng([seed, doc_index])
    plan = _DocPlan(rng, doc_index)

    tokens: list[tuple[str, str]] = []  # (surface, pos)
    spans: list[tuple[int, int, int]] = []  # (chain, start, end)
    sentence_breaks: list[int] = []  # doc index starting each new sentence

    def eligible() -> list[int]:
        return [
            i
            for i, left in enumerate(plan.remaining)
            if left > 0
            and (not plan.first_done[i] or len(tokens) - plan.last_end[i] >= _MIN_GAP)
        ]

    next_chain_id = 1
    chain_ids = [next_chain_id + i for i in range(len(plan.entities))]

    while any(left > 0 for left in plan.remaining):
        sentence_breaks.append(len(tokens))
        n_fill = int(rng.integers(5, 11))
        fillers = [_filler(rng) for _ in range(n_fill)]
        choices = eligible()
        rng.shuffle(choices)
        chosen = choices[: int(rng.integers(1, 3))] if choices else []
        # Distinct insertion points keep span offsets well defined.
        insert_at = sorted(
            rng.choice(n_fill + 1, size=len(chosen), replace=False).tolist(),
            reverse=True,
        )
        sentence: list[tuple[str, str]] = list(fillers)
        placements: list[tuple[int, int]] = []  # (entity index, position in sentence)
        for entity_idx, pos in zip(chosen, insert_at):
            sentence[pos:pos] = plan.entities[entity_idx]
            placements.append((entity_idx, pos))
        # Earlier insertions shifted later ones; recompute offsets left to right.
        offset_shift = 0
        for entity_idx, pos in sorted(placements, key=lambda t: t[1]):
            start = len(tokens) + pos + offset_shift
            width = len(plan.entities[entity_idx])
            spans.append((chain_ids[entity_idx], start, start + width))
            if plan.nested[entity_idx] and not plan.first_done[entity_idx]:
                # Embedded proper-name singleton inside the first occurrence.
                spans.append((max(chain_ids) + 1 + entity_idx, start + 1, start + 2))
            plan.remaining[entity_idx] -= 1
            plan.first_done[entity_idx] = True
            plan.last_end[entity_idx] = start + width
            offset_shift += width
        sentence.append((".", "."))
        tokens.extend(sentence)

    # Bracket fields per token.
    opens: dict[int, list[tuple[int, int, int]]] = {}
    closes: dict[int, list[tuple[int, int, int]]] = {}
    singles: dict[int, list[tuple[int, int, int]]] = {}
    for cid, start, end in spans:
        if end - start == 1:
            singles.setdefault(start, []).append((cid, start, end))
        else:
            opens.setdefault(start, []).append((cid, start, end))
            closes.setdefault(end - 1, []).append((cid, start, end))
    fields = []
    for i in range(len(tokens)):
        parts = [f"({cid}" for cid, _, end in sorted(opens.get(i, ()), key=lambda s: -s[2])]
        parts += [f"({cid})" for cid, _, _ in singles.get(i, ())]
        parts += [f"{cid})" for cid, start, _ in sorted(closes.get(i, ()), key=lambda s: -s[1])]
        fields.append("|".join(parts) if parts else "-")

    lines = [f"#begin document ({plan.doc_id}); part 0"]
    breaks = set(sentence_breaks[1:])
    in_sentence = 0
    for i, (surface, pos) in enumerate(tokens):
        if i in breaks:
            lines.append("")
            in_sentence = 0
        lines.append(
            "\t".join(
                [plan.doc_id, "0", str(in_sentence), surface, pos, "*", "-", "-", "-", "-", "*", fields[i]]
            )
        )
        in_sentence += 1
    lines.append("")
    lines.append("#end document")
    return lines


def generate_conll(n_docs: int = 200, seed: int = 13) -> str:
    lines: list[str] = []
    for doc_index in range(n_docs):
        lines.extend(_generate_document_lines(doc_index, seed))
    return "\n".join(lines) + "\n"


def generate_corpus(n_docs: int = 200, seed: int = 13) -> list[Document]:
    return parse_conll(generate_conll(n_docs, seed))


def generate_embedding_text(
    docs: list[Document], dim: int = 50, seed: int = 7, coverage: float = 0.7
) -> str:
    """Fake pretrained-embedding text covering a random subset of the corpus
    vocabulary (lowercased surfaces)."""
    vocab = sorted({t.surface.lower() for doc in docs for t in doc.tokens})
    rng = np.random.default_rng(seed)
    lines = []
    for word in vocab:
        if rng.random() <= coverage:
            vec = rng.uniform(-0.5, 0.5, size=dim)
            lines.append(word + " " + " ".join(f"{v:.5f}" for v in vec))
    return "\n".join(lines) + "\n"
