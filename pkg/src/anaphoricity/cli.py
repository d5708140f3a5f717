"""Command-line workflows: train a model, predict mentions, evaluate a TSV.

All subcommands are reproducible: identical inputs and seeds yield
byte-identical model files, prediction TSVs, and reports.  Training writes
a JSON-lines log next to the model (per-batch loss for the LSTM, per-sweep
KKT-violator counts for the SVM).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import evaluation, features, neural, svm
from .corpus import Anaphoricity, Document, MentionType, load_corpus
from .evaluation import format_report, report_tsv, score_buckets
from .features import ContextInstance, lstm_instances, svm_instances

__all__ = ["main", "RunConfig", "cmd_train", "cmd_predict", "cmd_evaluate"]

PREDICTION_COLUMNS = (
    "doc_id",
    "part",
    "sentence_index",
    "start",
    "end",
    "gold",
    "predicted",
    "score",
    "mention_type",
)


class CliError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    corpus: list[str]
    mentions: str | None = None
    embeddings: str | None = None
    model: str | None = None
    out: str | None = None
    predictions: str | None = None
    log: str | None = None
    model_kind: str = "svm"
    C: float = 1.0
    min_count: int = 10
    tol: float = 1e-3
    max_passes: int = 10
    anaphoric_weight: float | None = None
    hidden: int = 128
    embedding_dim: int = 300
    batch_size: int = 50
    dropout: float = 0.3
    lr: float = 0.001
    epochs: int = 1
    seed: int = 0


def _log_path(cfg: RunConfig) -> Path:
    return Path(cfg.log) if cfg.log else Path(str(cfg.model) + ".log.jsonl")


def cmd_train(cfg: RunConfig) -> None:
    docs = load_corpus(cfg.corpus, cfg.mentions)
    if not docs:
        raise CliError("training corpus contains no documents")
    log_lines: list[str] = []
    if cfg.model_kind == "svm":
        X, y = svm_instances(docs)

        def on_sweep(sweep: int, violations: int, changed: int) -> None:
            log_lines.append(
                json.dumps(
                    {"sweep": sweep, "kkt_violations": violations, "changed": changed},
                    separators=(",", ":"),
                )
            )

        weight = {1: cfg.anaphoric_weight} if cfg.anaphoric_weight else None
        estimator = svm.SvmAnaphoricityModel(
            C=cfg.C,
            min_count=cfg.min_count,
            tol=cfg.tol,
            max_passes=cfg.max_passes,
            class_weight=weight,
            seed=cfg.seed,
        )
        estimator.fit(X, y, on_sweep=on_sweep)
        svm.save_model(estimator.model_, cfg.model)
    elif cfg.model_kind == "lstm":
        instances, y = lstm_instances(docs)
        vocabulary = {s for inst in instances for s in inst.tokens}
        if cfg.embeddings:
            table = neural.load_embeddings(
                Path(cfg.embeddings).read_text(encoding="utf-8"),
                restriction=vocabulary,
                dim=cfg.embedding_dim,
                seed=cfg.seed,
            )
        else:
            table = neural.random_embeddings(vocabulary, cfg.embedding_dim, cfg.seed)

        def on_batch(epoch: int, batch: int, loss: float) -> None:
            log_lines.append(
                json.dumps(
                    {"epoch": epoch, "batch": batch, "loss": loss},
                    separators=(",", ":"),
                )
            )

        estimator = neural.LstmAnaphoricityModel(
            hidden_size=cfg.hidden,
            embedding_dim=cfg.embedding_dim,
            batch_size=cfg.batch_size,
            dropout=cfg.dropout,
            learning_rate=cfg.lr,
            epochs=cfg.epochs,
            seed=cfg.seed,
        )
        estimator.fit(instances, y, embeddings=table, on_batch=on_batch)
        neural.save_checkpoint(cfg.model, estimator.params_, estimator.table_, estimator.config_)
    else:
        raise CliError(f"unknown model kind {cfg.model_kind!r}")
    _log_path(cfg).write_text(
        "".join(line + "\n" for line in log_lines), encoding="utf-8"
    )


def _sniff_model_kind(path: str) -> str:
    with open(path, "rb") as fh:
        head = fh.read(64)
    if head.startswith(neural.CHECKPOINT_MAGIC.encode("ascii")):
        return "lstm"
    if head.lstrip().startswith(b"{"):
        return "svm"
    raise CliError(f"{path}: unrecognized model file")


def _prediction_rows(docs: list[Document], kind: str, model_path: str) -> list[str]:
    rows = []
    if kind == "svm":
        model = svm.load_model(model_path)
        for doc in docs:
            vectors = [features.extract_svm_features(m, doc) for m in doc.mentions]
            for m, vec in zip(doc.mentions, vectors):
                label, margin = svm.predict(model, vec)
                rows.append(_format_row(doc, m, label, margin))
    else:
        params, table, _ = neural.load_checkpoint(model_path)
        for doc in docs:
            for m in doc.mentions:
                inst = ContextInstance(
                    tokens=tuple(features.build_context_sequence(m, doc)),
                    surface=features.extract_surface20(m, doc),
                )
                probs, _ = neural.forward(params, table, inst.tokens, inst.surface)
                label = (
                    Anaphoricity.ANAPHORIC
                    if probs[1] > probs[0]
                    else Anaphoricity.NON_ANAPHORIC
                )
                rows.append(_format_row(doc, m, label, float(probs[1])))
    return rows


def _format_row(doc: Document, m, label: Anaphoricity, value: float) -> str:
    return "\t".join(
        [
            doc.doc_id,
            doc.part,
            str(m.span.sentence_index),
            str(m.span.start),
            str(m.span.end),
            m.gold_label.tag,
            label.tag,
            repr(value),
            m.mention_type.value,
        ]
    )


def cmd_predict(cfg: RunConfig) -> None:
    docs = load_corpus(cfg.corpus, cfg.mentions)
    kind = _sniff_model_kind(cfg.model)
    rows = _prediction_rows(docs, kind, cfg.model)
    text = "\n".join(["\t".join(PREDICTION_COLUMNS), *rows]) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_evaluate(cfg: RunConfig) -> None:
    text = Path(cfg.predictions).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line]
    if not lines:
        raise CliError(f"{cfg.predictions}: empty predictions file")
    header = lines[0].split("\t")
    for required in ("gold", "predicted", "mention_type"):
        if required not in header:
            raise CliError(f"{cfg.predictions}: missing column {required!r}")
    gold_col = header.index("gold")
    pred_col = header.index("predicted")
    type_col = header.index("mention_type")
    gold, predicted, buckets = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        cols = line.split("\t")
        if len(cols) != len(header):
            raise CliError(f"{cfg.predictions}: line {lineno}: wrong column count")
        gold.append(int(Anaphoricity.from_tag(cols[gold_col])))
        predicted.append(int(Anaphoricity.from_tag(cols[pred_col])))
        buckets.append(evaluation.bucket_of_type(MentionType(cols[type_col])))
    report = score_buckets(gold, predicted, buckets)
    sys.stdout.write(format_report(report))
    if cfg.out:
        Path(cfg.out).write_text(report_tsv(report), encoding="utf-8")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anaphoricity",
        description="Detect discourse-old (anaphoric) mentions in coreference corpora.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    train = sub.add_parser("train", help="train an anaphoricity model")
    train.add_argument("--model-kind", choices=("svm", "lstm"), default="svm")
    train.add_argument("--corpus", action="append", required=True, help="CoNLL file (repeatable)")
    train.add_argument("--mentions", help="sidecar candidate-mention TSV")
    train.add_argument("--embeddings", help="pretrained embedding text file (lstm)")
    train.add_argument("--model", required=True, help="output model path")
    train.add_argument("--log", help="JSON-lines training log path (default: <model>.log.jsonl)")
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--C", type=float, default=1.0, help="SVM regularization")
    train.add_argument("--min-count", type=int, default=10, help="feature pruning threshold")
    train.add_argument("--tol", type=float, default=1e-3, help="SMO KKT tolerance")
    train.add_argument("--max-passes", type=int, default=10)
    train.add_argument(
        "--anaphoric-weight",
        type=float,
        help="optional cost multiplier on the anaphoric class box constraint",
    )
    train.add_argument("--hidden", type=int, default=128, help="LSTM hidden size")
    train.add_argument("--embedding-dim", type=int, default=300)
    train.add_argument("--batch-size", type=int, default=50)
    train.add_argument("--dropout", type=float, default=0.3)
    train.add_argument("--lr", type=float, default=0.001)
    train.add_argument("--epochs", type=int, default=1)

    predict = sub.add_parser("predict", help="predict anaphoricity for corpus mentions")
    predict.add_argument("--corpus", action="append", required=True)
    predict.add_argument("--mentions")
    predict.add_argument("--model", required=True)
    predict.add_argument("--out", help="predictions TSV path (default: stdout)")

    evaluate = sub.add_parser("evaluate", help="score a predictions TSV")
    evaluate.add_argument("--predictions", required=True)
    evaluate.add_argument("--out", help="report TSV path")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None}
    fields.setdefault("corpus", [])
    return RunConfig(**fields)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    try:
        if cfg.subcommand == "train":
            cmd_train(cfg)
        elif cfg.subcommand == "predict":
            cmd_predict(cfg)
        else:
            cmd_evaluate(cfg)
    except (ValueError, OSError, ArithmeticError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
