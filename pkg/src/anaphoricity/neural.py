"""Bidirectional-LSTM anaphoricity classifier, implemented from scratch.

The generalized context sequence of a mention is embedded, encoded by a
forward and a backward LSTM pass, and the two final hidden states are
concatenated with the 20-component surface vector before a single affine
layer with softmax output.  Training minimizes mean cross-entropy with
minibatch Adam; gradients are computed by backpropagation through time and
the embedding table is fine-tuned together with the network weights.

All math runs in 64-bit floating point.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np
from scipy.special import expit as sigmoid
from sklearn.base import BaseEstimator, ClassifierMixin

from .corpus import Anaphoricity
from .features import (
    MENTION_PLACEHOLDER,
    SEP_HEAD,
    SEP_MENTION,
    SURFACE_DIM,
    ContextInstance,
)
from .validation import check_binary_labels, check_context_instances

__all__ = [
    "CHECKPOINT_MAGIC",
    "OOV_SYMBOL",
    "SPECIAL_SYMBOLS",
    "EmbeddingFormatError",
    "EmbeddingTable",
    "LstmAnaphoricityModel",
    "LstmParams",
    "TrainConfig",
    "TrainingDivergedError",
    "batch_gradients",
    "extend_vocabulary",
    "forward",
    "init_params",
    "load_checkpoint",
    "load_embeddings",
    "predict_neural",
    "random_embeddings",
    "save_checkpoint",
    "train",
]

OOV_SYMBOL = "<OOV>"
SPECIAL_SYMBOLS = (MENTION_PLACEHOLDER, SEP_MENTION, SEP_HEAD, OOV_SYMBOL)

DEFAULT_EMBEDDING_DIM = 300
DEFAULT_HIDDEN_SIZE = 128

CHECKPOINT_MAGIC = "anaphoricity-lstm 1"


class EmbeddingFormatError(ValueError):
    """Malformed embedding text stream."""


class TrainingDivergedError(ArithmeticError):
    """Loss became non-finite during training."""


# ---------------------------------------------------------------------------
# Embedding table
# ---------------------------------------------------------------------------


@dataclass
class EmbeddingTable:
    """Symbol-to-row embedding lookup; unseen symbols map to ``<OOV>``."""

    vocab: dict[str, int]
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def ids(self, symbols: Iterable[str]) -> np.ndarray:
        oov = self.vocab[OOV_SYMBOL]
        return np.array([self.vocab.get(s, oov) for s in symbols], dtype=np.int64)

    def symbols(self) -> list[str]:
        out = [""] * len(self.vocab)
        for sym, i in self.vocab.items():
            out[i] = sym
        return out


def _random_row(rng: np.random.Generator, dim: int) -> np.ndarray:
    bound = 0.5 / dim
    return rng.uniform(-bound, bound, size=dim)


def _parse_embedding_stream(
    stream: str | Iterable[str], dim: int, wanted: set[str] | None
) -> dict[str, np.ndarray]:
    if isinstance(stream, str):
        stream = stream.splitlines()
    rows: dict[str, np.ndarray] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split(" ")
        word = parts[0]
        if len(parts) - 1 != dim:
            raise EmbeddingFormatError(
                f"line {lineno}: expected {dim} vector components, got {len(parts) - 1}"
            )
        if wanted is not None and word not in wanted:
            continue
        rows[word] = np.array(parts[1:], dtype=np.float64)
    return rows


def load_embeddings(
    stream: str | Iterable[str],
    restriction: set[str] | None = None,
    dim: int = DEFAULT_EMBEDDING_DIM,
    seed: int = 0,
) -> EmbeddingTable:
    """Build an embedding table from a ``word v1 ... vN`` text stream.

    With a vocabulary restriction, rows are loaded only for the requested
    symbols; restricted words absent from the stream, and the placeholder /
    separator / OOV symbols, receive uniform random rows in
    [-0.5/dim, 0.5/dim].  Without a restriction every word of the stream is
    kept.
    """
    wanted = set(restriction) if restriction is not None else None
    pretrained = _parse_embedding_stream(stream, dim, wanted)
    if restriction is not None:
        ordered = [s for s in sorted(wanted - set(SPECIAL_SYMBOLS))]
        if not pretrained and wanted:
            warnings.warn(
                "no pretrained vectors matched the vocabulary restriction; "
                "all embedding rows are randomly initialized",
                stacklevel=2,
            )
    else:
        ordered = [s for s in pretrained if s not in SPECIAL_SYMBOLS]
    symbols = list(SPECIAL_SYMBOLS) + ordered
    rng = np.random.default_rng(seed)
    matrix = np.empty((len(symbols), dim), dtype=np.float64)
    for i, sym in enumerate(symbols):
        row = pretrained.get(sym)
        matrix[i] = row if row is not None else _random_row(rng, dim)
    return EmbeddingTable({s: i for i, s in enumerate(symbols)}, matrix)


def random_embeddings(
    symbols: Iterable[str], dim: int, seed: int = 0
) -> EmbeddingTable:
    """All-random table over the given symbols plus the special symbols."""
    return load_embeddings([], restriction=set(symbols) | set(SPECIAL_SYMBOLS), dim=dim, seed=seed)


def extend_vocabulary(
    table: EmbeddingTable,
    new_symbols: Iterable[str],
    stream: str | Iterable[str],
    seed: int = 0,
) -> EmbeddingTable:
    """Append rows for unseen symbols, pretrained where the stream has them,
    random otherwise.  Existing rows are copied unchanged."""
    fresh = sorted(set(new_symbols) - set(table.vocab))
    pretrained = _parse_embedding_stream(stream, table.dim, set(fresh))
    rng = np.random.default_rng(seed)
    rows = [
        pretrained[s] if s in pretrained else _random_row(rng, table.dim)
        for s in fresh
    ]
    vocab = dict(table.vocab)
    for s in fresh:
        vocab[s] = len(vocab)
    matrix = (
        np.vstack([table.matrix, np.asarray(rows)]) if rows else table.matrix.copy()
    )
    return EmbeddingTable(vocab, matrix)


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

_GATES = ("i", "f", "o", "g")


@dataclass
class DirectionParams:
    """Gate parameters of one LSTM direction (input, forget, output, cell)."""

    w: dict[str, np.ndarray]  # gate -> (hidden, input)
    u: dict[str, np.ndarray]  # gate -> (hidden, hidden)
    b: dict[str, np.ndarray]  # gate -> (hidden,)

    @property
    def hidden_size(self) -> int:
        return self.w["i"].shape[0]


@dataclass
class LstmParams:
    forward_dir: DirectionParams
    backward_dir: DirectionParams
    w_out: np.ndarray  # (2, 2*hidden + SURFACE_DIM)
    b_out: np.ndarray  # (2,)

    @property
    def hidden_size(self) -> int:
        return self.forward_dir.hidden_size

    @property
    def input_dim(self) -> int:
        return self.forward_dir.w["i"].shape[1]

    def blocks(self) -> dict[str, np.ndarray]:
        """Named views of every parameter block, in a fixed order."""
        out: dict[str, np.ndarray] = {}
        for tag, direction in (("fwd", self.forward_dir), ("bwd", self.backward_dir)):
            for gate in _GATES:
                out[f"{tag}.w_{gate}"] = direction.w[gate]
                out[f"{tag}.u_{gate}"] = direction.u[gate]
                out[f"{tag}.b_{gate}"] = direction.b[gate]
        out["out.w"] = self.w_out
        out["out.b"] = self.b_out
        return out


def init_params(
    hidden_size: int = DEFAULT_HIDDEN_SIZE,
    input_dim: int = DEFAULT_EMBEDDING_DIM,
    seed: int = 0,
    surface_dim: int = SURFACE_DIM,
) -> LstmParams:
    """Uniform [-0.08, 0.08] weights, zero biases except forget-gate bias 1."""
    rng = np.random.default_rng([seed, 0])

    def direction() -> DirectionParams:
        w = {g: rng.uniform(-0.08, 0.08, size=(hidden_size, input_dim)) for g in _GATES}
        u = {g: rng.uniform(-0.08, 0.08, size=(hidden_size, hidden_size)) for g in _GATES}
        b = {g: np.zeros(hidden_size) for g in _GATES}
        b["f"] = np.ones(hidden_size)
        return DirectionParams(w, u, b)

    fwd = direction()
    bwd = direction()
    w_out = rng.uniform(-0.08, 0.08, size=(2, 2 * hidden_size + surface_dim))
    b_out = np.zeros(2)
    return LstmParams(fwd, bwd, w_out, b_out)


# ---------------------------------------------------------------------------
# Forward / backward
# ---------------------------------------------------------------------------


@dataclass
class _DirectionCache:
    x: np.ndarray  # (T, input)
    gates: dict[str, np.ndarray]  # gate -> (T, hidden) post-activation
    c: np.ndarray  # (T, hidden)
    tc: np.ndarray  # tanh(c), (T, hidden)
    h: np.ndarray  # (T, hidden)


def _run_direction(params: DirectionParams, x: np.ndarray) -> _DirectionCache:
    steps, _ = x.shape
    hidden = params.hidden_size
    gates = {g: np.empty((steps, hidden)) for g in _GATES}
    c = np.empty((steps, hidden))
    tc = np.empty((steps, hidden))
    h = np.empty((steps, hidden))
    h_prev = np.zeros(hidden)
    c_prev = np.zeros(hidden)
    for t in range(steps):
        pre = {
            g: params.w[g] @ x[t] + params.u[g] @ h_prev + params.b[g] for g in _GATES
        }
        gates["i"][t] = sigmoid(pre["i"])
        gates["f"][t] = sigmoid(pre["f"])
        gates["o"][t] = sigmoid(pre["o"])
        gates["g"][t] = np.tanh(pre["g"])
        c[t] = gates["f"][t] * c_prev + gates["i"][t] * gates["g"][t]
        tc[t] = np.tanh(c[t])
        h[t] = gates["o"][t] * tc[t]
        h_prev, c_prev = h[t], c[t]
    return _DirectionCache(x, gates, c, tc, h)


def _direction_backward(
    params: DirectionParams, cache: _DirectionCache, dh_last: np.ndarray
) -> tuple[dict[str, np.ndarray], np.ndarray]:
    steps = cache.x.shape[0]
    grads = {
        **{f"w_{g}": np.zeros_like(params.w[g]) for g in _GATES},
        **{f"u_{g}": np.zeros_like(params.u[g]) for g in _GATES},
        **{f"b_{g}": np.zeros_like(params.b[g]) for g in _GATES},
    }
    dx = np.zeros_like(cache.x)
    dh = dh_last.copy()
    dc = np.zeros_like(dh_last)
    for t in range(steps - 1, -1, -1):
        i, f, o, g = (cache.gates[k][t] for k in _GATES)
        do = dh * cache.tc[t]
        dc = dc + dh * o * (1.0 - cache.tc[t] ** 2)
        di = dc * g
        dg = dc * i
        c_prev = cache.c[t - 1] if t > 0 else np.zeros_like(dc)
        h_prev = cache.h[t - 1] if t > 0 else np.zeros_like(dh)
        df = dc * c_prev
        pre = {
            "i": di * i * (1.0 - i),
            "f": df * f * (1.0 - f),
            "o": do * o * (1.0 - o),
            "g": dg * (1.0 - g**2),
        }
        dh = np.zeros_like(dh)
        for k in _GATES:
            grads[f"w_{k}"] += np.outer(pre[k], cache.x[t])
            grads[f"u_{k}"] += np.outer(pre[k], h_prev)
            grads[f"b_{k}"] += pre[k]
            dx[t] += params.w[k].T @ pre[k]
            dh += params.u[k].T @ pre[k]
        dc = dc * f
    return grads, dx


def forward(
    params: LstmParams,
    table: EmbeddingTable,
    symbols: Sequence[str],
    surface: np.ndarray,
    dropout_rate: float = 0.0,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, dict]:
    """Class probabilities (non-anaphoric, anaphoric) for one instance.

    Dropout (inverted scaling) is applied to the concatenated LSTM
    representation only when ``dropout_rate > 0``; ``rng`` is then required.
    """
    if not symbols:
        raise ValueError("context sequence must be nonempty")
    ids = table.ids(symbols)
    x = table.matrix[ids]
    fwd = _run_direction(params.forward_dir, x)
    bwd = _run_direction(params.backward_dir, x[::-1])
    rep = np.concatenate([fwd.h[-1], bwd.h[-1]])
    if dropout_rate > 0.0:
        if rng is None:
            raise ValueError("dropout requires a random generator")
        mask = (rng.random(rep.shape[0]) >= dropout_rate) / (1.0 - dropout_rate)
    else:
        mask = None
    dropped = rep * mask if mask is not None else rep
    zin = np.concatenate([dropped, np.asarray(surface, dtype=np.float64)])
    logits = params.w_out @ zin + params.b_out
    shifted = logits - logits.max()
    logz = np.log(np.sum(np.exp(shifted)))
    probs = np.exp(shifted - logz)
    cache = {
        "ids": ids,
        "fwd": fwd,
        "bwd": bwd,
        "mask": mask,
        "zin": zin,
        "logits": logits,
        "probs": probs,
    }
    return probs, cache


def _instance_backward(
    params: LstmParams, cache: dict, label: int
) -> dict[str, np.ndarray]:
    """Gradients of the cross-entropy loss for one cached forward pass.

    The embedding contribution is returned as ("emb_ids", "emb_rows"):
    per-position gradients to scatter-add into the embedding matrix.
    """
    hidden = params.hidden_size
    probs = cache["probs"]
    dlogits = probs.copy()
    dlogits[label] -= 1.0
    grads: dict[str, np.ndarray] = {
        "out.w": np.outer(dlogits, cache["zin"]),
        "out.b": dlogits,
    }
    dzin = params.w_out.T @ dlogits
    drep = dzin[: 2 * hidden]
    if cache["mask"] is not None:
        drep = drep * cache["mask"]
    fwd_grads, dx_fwd = _direction_backward(params.forward_dir, cache["fwd"], drep[:hidden])
    bwd_grads, dx_bwd_rev = _direction_backward(
        params.backward_dir, cache["bwd"], drep[hidden:]
    )
    for name, value in fwd_grads.items():
        grads[f"fwd.{name}"] = value
    for name, value in bwd_grads.items():
        grads[f"bwd.{name}"] = value
    grads["emb_ids"] = cache["ids"]
    grads["emb_rows"] = dx_fwd + dx_bwd_rev[::-1]
    return grads


def batch_gradients(
    params: LstmParams,
    table: EmbeddingTable,
    instances: Sequence[ContextInstance],
    labels: Sequence[int],
    dropout_rate: float = 0.0,
    rng: np.random.Generator | None = None,
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy loss and mean gradients over a batch.

    The embedding gradient is dense ("embeddings", shaped like the table
    matrix); all other keys match ``LstmParams.blocks()``.
    """
    total: dict[str, np.ndarray] = {
        name: np.zeros_like(arr) for name, arr in params.blocks().items()
    }
    total["embeddings"] = np.zeros_like(table.matrix)
    loss = 0.0
    for inst, label in zip(instances, labels):
        probs, cache = forward(
            params, table, inst.tokens, inst.surface, dropout_rate, rng
        )
        shifted = cache["logits"] - cache["logits"].max()
        loss += float(np.log(np.sum(np.exp(shifted))) - shifted[int(label)])
        grads = _instance_backward(params, cache, int(label))
        emb_ids = grads.pop("emb_ids")
        emb_rows = grads.pop("emb_rows")
        np.add.at(total["embeddings"], emb_ids, emb_rows)
        for name, value in grads.items():
            total[name] += value
    scale = 1.0 / len(instances)
    for name in total:
        total[name] *= scale
    return loss * scale, total


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 50
    dropout_rate: float = 0.3
    epochs: int = 1
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


class Adam:
    """Standard Adam over a dict of parameter arrays, updated in place."""

    def __init__(self, params: dict[str, np.ndarray], cfg: TrainConfig) -> None:
        self.cfg = cfg
        self.m = {name: np.zeros_like(p) for name, p in params.items()}
        self.v = {name: np.zeros_like(p) for name, p in params.items()}
        self.t = 0

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        cfg = self.cfg
        self.t += 1
        bc1 = 1.0 - cfg.beta1**self.t
        bc2 = 1.0 - cfg.beta2**self.t
        for name, p in params.items():
            g = grads[name]
            self.m[name] = cfg.beta1 * self.m[name] + (1.0 - cfg.beta1) * g
            self.v[name] = cfg.beta2 * self.v[name] + (1.0 - cfg.beta2) * g * g
            p -= cfg.learning_rate * (self.m[name] / bc1) / (
                np.sqrt(self.v[name] / bc2) + cfg.eps
            )


def train(
    instances: Sequence[ContextInstance],
    labels: Sequence[int],
    cfg: TrainConfig,
    table: EmbeddingTable,
    hidden_size: int = DEFAULT_HIDDEN_SIZE,
    params: LstmParams | None = None,
    on_batch: Callable[[int, int, float], None] | None = None,
) -> tuple[LstmParams, EmbeddingTable]:
    """Minibatch Adam over seeded-shuffled instances; fine-tunes embeddings.

    Returns the trained parameters and the updated embedding table (the
    input table is left untouched).
    """
    if not len(instances):
        raise ValueError("no training instances")
    labels = np.asarray(labels, dtype=np.int64)
    if params is None:
        params = init_params(hidden_size, table.dim, seed=cfg.seed)
    table = EmbeddingTable(dict(table.vocab), table.matrix.copy())
    trainable = dict(params.blocks())
    trainable["embeddings"] = table.matrix
    optimizer = Adam(trainable, cfg)
    shuffle_rng = np.random.default_rng([cfg.seed, 1])
    dropout_rng = np.random.default_rng([cfg.seed, 2])
    n = len(instances)
    for epoch in range(cfg.epochs):
        order = shuffle_rng.permutation(n)
        for batch_index, lo in enumerate(range(0, n, cfg.batch_size)):
            chosen = order[lo : lo + cfg.batch_size]
            loss, grads = batch_gradients(
                params,
                table,
                [instances[i] for i in chosen],
                labels[chosen],
                dropout_rate=cfg.dropout_rate,
                rng=dropout_rng,
            )
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite loss at epoch {epoch}, batch {batch_index}"
                )
            optimizer.step(trainable, grads)
            if on_batch is not None:
                on_batch(epoch, batch_index, loss)
    return params, table


def predict_neural(
    params: LstmParams, table: EmbeddingTable, instance: ContextInstance
) -> tuple[Anaphoricity, float]:
    """Label and its probability, dropout off; exact ties resolve
    non-anaphoric."""
    probs, _ = forward(params, table, instance.tokens, instance.surface)
    if probs[1] > probs[0]:
        return Anaphoricity.ANAPHORIC, float(probs[1])
    return Anaphoricity.NON_ANAPHORIC, float(probs[0])


# ---------------------------------------------------------------------------
# Checkpoint format
# ---------------------------------------------------------------------------


def save_checkpoint(
    path: str | Path,
    params: LstmParams,
    table: EmbeddingTable,
    cfg: TrainConfig,
) -> None:
    """Versioned binary container: magic line, JSON metadata line, then raw
    float64 array bytes in manifest order."""
    blocks = params.blocks()
    manifest = [["embeddings", list(table.matrix.shape)]] + [
        [name, list(arr.shape)] for name, arr in blocks.items()
    ]
    meta = {
        "vocab": table.symbols(),
        "embedding_dim": table.dim,
        "hidden_size": params.hidden_size,
        "surface_dim": int(params.w_out.shape[1] - 2 * params.hidden_size),
        "config": {
            "batch_size": cfg.batch_size,
            "dropout_rate": cfg.dropout_rate,
            "epochs": cfg.epochs,
            "learning_rate": cfg.learning_rate,
            "beta1": cfg.beta1,
            "beta2": cfg.beta2,
            "eps": cfg.eps,
            "seed": cfg.seed,
        },
        "arrays": manifest,
    }
    with open(path, "wb") as fh:
        fh.write((CHECKPOINT_MAGIC + "\n").encode("ascii"))
        fh.write((json.dumps(meta, ensure_ascii=True, separators=(",", ":")) + "\n").encode("ascii"))
        fh.write(np.ascontiguousarray(table.matrix, dtype=np.float64).tobytes())
        for arr in blocks.values():
            fh.write(np.ascontiguousarray(arr, dtype=np.float64).tobytes())


def load_checkpoint(
    path: str | Path,
) -> tuple[LstmParams, EmbeddingTable, TrainConfig]:
    with open(path, "rb") as fh:
        magic = fh.readline().decode("ascii").rstrip("\n")
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"{path}: not a {CHECKPOINT_MAGIC!r} checkpoint")
        meta = json.loads(fh.readline().decode("ascii"))
        arrays: dict[str, np.ndarray] = {}
        for name, shape in meta["arrays"]:
            count = int(np.prod(shape))
            buf = fh.read(count * 8)
            if len(buf) != count * 8:
                raise ValueError(f"{path}: truncated checkpoint at array {name!r}")
            arrays[name] = np.frombuffer(buf, dtype=np.float64).reshape(shape).copy()
    vocab = {s: i for i, s in enumerate(meta["vocab"])}
    table = EmbeddingTable(vocab, arrays["embeddings"])

    def direction(tag: str) -> DirectionParams:
        return DirectionParams(
            w={g: arrays[f"{tag}.w_{g}"] for g in _GATES},
            u={g: arrays[f"{tag}.u_{g}"] for g in _GATES},
            b={g: arrays[f"{tag}.b_{g}"] for g in _GATES},
        )

    params = LstmParams(
        forward_dir=direction("fwd"),
        backward_dir=direction("bwd"),
        w_out=arrays["out.w"],
        b_out=arrays["out.b"],
    )
    cfg = TrainConfig(**meta["config"])
    return params, table, cfg


# ---------------------------------------------------------------------------
# Estimator wrapper
# ---------------------------------------------------------------------------


class LstmAnaphoricityModel(BaseEstimator, ClassifierMixin):
    """Anaphoricity classifier over context sequences + surface vectors.

    ``fit`` consumes ContextInstance inputs and binary labels (1 =
    anaphoric).  Pass a pretrained ``EmbeddingTable`` via ``fit``'s
    ``embeddings`` argument; without one, a random table over the training
    vocabulary is created.
    """

    def __init__(
        self,
        hidden_size: int = DEFAULT_HIDDEN_SIZE,
        embedding_dim: int = DEFAULT_EMBEDDING_DIM,
        batch_size: int = 50,
        dropout: float = 0.3,
        learning_rate: float = 0.001,
        epochs: int = 1,
        seed: int = 0,
    ) -> None:
        self.hidden_size = hidden_size
        self.embedding_dim = embedding_dim
        self.batch_size = batch_size
        self.dropout = dropout
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed

    def _config(self) -> TrainConfig:
        return TrainConfig(
            batch_size=self.batch_size,
            dropout_rate=self.dropout,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            seed=self.seed,
        )

    def fit(self, X, y, embeddings: EmbeddingTable | None = None, on_batch=None):
        X = check_context_instances(X)
        y = check_binary_labels(y, len(X))
        if embeddings is None:
            vocab = {s for inst in X for s in inst.tokens}
            embeddings = random_embeddings(vocab, self.embedding_dim, self.seed)
        self.config_ = self._config()
        self.params_, self.table_ = train(
            X, y, self.config_, embeddings, hidden_size=self.hidden_size, on_batch=on_batch
        )
        self.classes_ = np.array([0, 1])
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = check_context_instances(X)
        out = np.empty((len(X), 2))
        for i, inst in enumerate(X):
            out[i], _ = forward(self.params_, self.table_, inst.tokens, inst.surface)
        return out

    def predict(self, X) -> np.ndarray:
        proba = self.predict_proba(X)
        return (proba[:, 1] > proba[:, 0]).astype(np.int64)
