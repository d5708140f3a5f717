"""Soft-margin SVM with an anchored degree-2 polynomial kernel, trained by
sequential minimal optimization over pruned sparse binary features.

The kernel is the inhomogeneous polynomial K(x, z) = (x . z + 1)^2; for
binary indicator vectors the dot product is the intersection size of the
active-index sets, and the +1 anchor supplies the lower-order terms.
Rare feature values (fewer than ``min_count`` training occurrences) are
pruned before training.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin

from .corpus import Anaphoricity
from .validation import check_binary_labels, check_feature_sets

__all__ = [
    "EmptyDictionaryError",
    "FeatureDictionary",
    "SvmAnaphoricityModel",
    "SvmModel",
    "build_dictionary",
    "dual_objective",
    "encode",
    "kernel",
    "load_model",
    "margin",
    "predict",
    "save_model",
    "train_smo",
]

MODEL_FORMAT = "anaphoricity-svm"
MODEL_VERSION = 1

SV_ALPHA_EPS = 1e-12


class EmptyDictionaryError(ValueError):
    """All features were pruned while building the dictionary."""


class DegenerateTrainingSetError(ValueError):
    """Training data does not contain both classes."""


@dataclass(frozen=True)
class FeatureDictionary:
    """Dense indexing of retained feature strings with occurrence counts.

    ``entries`` lists (feature, count) pairs in index order; every retained
    feature occurred at least ``min_count`` times in the training set.
    """

    entries: tuple[tuple[str, int], ...]
    min_count: int
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_index", {feat: i for i, (feat, _) in enumerate(self.entries)}
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, feature: str) -> bool:
        return feature in self._index

    def index_of(self, feature: str) -> int:
        return self._index[feature]

    def count_of(self, feature: str) -> int:
        return self.entries[self._index[feature]][1]


def build_dictionary(
    vectors: Sequence[Iterable[str]], min_count: int = 10
) -> FeatureDictionary:
    """Count each feature once per instance and retain those occurring at
    least ``min_count`` times.  Indices follow first-occurrence order with
    features iterated lexicographically within an instance (sets carry no
    stable order of their own)."""
    if not vectors:
        raise ValueError("cannot build a dictionary from an empty training set")
    counts: dict[str, int] = {}
    order: list[str] = []
    for vec in vectors:
        for feat in sorted(set(vec)):
            if feat not in counts:
                counts[feat] = 0
                order.append(feat)
            counts[feat] += 1
    entries = tuple(
        (feat, counts[feat]) for feat in order if counts[feat] >= min_count
    )
    if not entries:
        raise EmptyDictionaryError(
            f"empty dictionary: no feature occurred at least min_count={min_count} times"
        )
    return FeatureDictionary(entries, min_count)


def encode(vector: Iterable[str], dictionary: FeatureDictionary) -> np.ndarray:
    """Sorted unique indices of the retained features; unknown features are
    silently dropped."""
    idx = {dictionary.index_of(f) for f in vector if f in dictionary}
    return np.fromiter(sorted(idx), dtype=np.int64, count=len(idx))


def kernel(x: np.ndarray, z: np.ndarray) -> float:
    """Anchored degree-2 kernel on sorted index vectors: (|x & z| + 1)^2."""
    shared = np.intersect1d(x, z, assume_unique=True).size
    return float((shared + 1) ** 2)


def _index_matrix(vectors: Sequence[np.ndarray], n_features: int) -> sp.csr_matrix:
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        indptr[i + 1] = indptr[i] + len(v)
    indices = np.concatenate(vectors) if vectors else np.zeros(0, dtype=np.int64)
    data = np.ones(len(indices), dtype=np.float64)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), n_features))


@dataclass
class SvmModel:
    """A trained kernel SVM over a pruned feature dictionary.

    ``signed_alphas[i]`` is alpha_i * y_i with y in {+1 anaphoric,
    -1 non-anaphoric}; only vectors with nonzero alpha are stored.
    """

    support_vectors: list[np.ndarray]
    signed_alphas: np.ndarray
    bias: float
    C: float
    dictionary: FeatureDictionary
    _sv_matrix: sp.csr_matrix | None = field(default=None, repr=False, compare=False)

    def sv_matrix(self) -> sp.csr_matrix:
        if self._sv_matrix is None:
            self._sv_matrix = _index_matrix(self.support_vectors, len(self.dictionary))
        return self._sv_matrix

    def margins_encoded(self, x_matrix: sp.csr_matrix) -> np.ndarray:
        dots = np.asarray((self.sv_matrix() @ x_matrix.T).todense())
        k = (dots + 1.0) ** 2
        return self.signed_alphas @ k + self.bias


def margin(model: SvmModel, vector: Iterable[str]) -> float:
    x = encode(vector, model.dictionary)
    k = np.array([kernel(sv, x) for sv in model.support_vectors])
    return float(model.signed_alphas @ k + model.bias)


def predict(model: SvmModel, vector: Iterable[str]) -> tuple[Anaphoricity, float]:
    """Label and margin; a margin of exactly zero resolves non-anaphoric."""
    m = margin(model, vector)
    label = Anaphoricity.ANAPHORIC if m > 0 else Anaphoricity.NON_ANAPHORIC
    return label, m


def dual_objective(
    signed_alphas: np.ndarray, gram: np.ndarray
) -> float:
    """Value of the SVM dual: sum alpha - 1/2 s^T K s with s = alpha*y."""
    return float(np.sum(np.abs(signed_alphas)) - 0.5 * signed_alphas @ gram @ signed_alphas)


class _GramCache:
    """Kernel rows over the training set, fully materialized when the Gram
    matrix fits the cap, row-cached otherwise."""

    def __init__(self, x: sp.csr_matrix, cap_bytes: int = 512 * 1024 * 1024) -> None:
        self.x = x
        n = x.shape[0]
        self.n = n
        if n * n * 8 <= cap_bytes:
            dots = np.asarray((x @ x.T).todense())
            self.full: np.ndarray | None = (dots + 1.0) ** 2
        else:
            self.full = None
            self._rows: dict[int, np.ndarray] = {}
            self._cap_rows = max(2, cap_bytes // (8 * n))

    def row(self, i: int) -> np.ndarray:
        if self.full is not None:
            return self.full[i]
        cached = self._rows.get(i)
        if cached is None:
            dots = np.asarray((self.x @ self.x[i].T).todense()).ravel()
            cached = (dots + 1.0) ** 2
            if len(self._rows) >= self._cap_rows:
                self._rows.pop(next(iter(self._rows)))
            self._rows[i] = cached
        return cached

    def entry(self, i: int, j: int) -> float:
        return float(self.row(i)[j])


class _SmoSolver:
    """Platt-style SMO over a cached kernel: first choice sweeps KKT
    violators, second choice maximizes |E_i - E_j| with seeded random
    fallbacks; shrinking disabled."""

    def __init__(
        self,
        gram: _GramCache,
        y: np.ndarray,
        c_bounds: np.ndarray,
        tol: float,
        seed: int,
    ) -> None:
        self.gram = gram
        self.y = y.astype(np.float64)
        self.c = c_bounds
        self.tol = tol
        self.step_eps = max(1e-15, tol * 1e-2)
        self.rng = np.random.default_rng(seed)
        n = len(y)
        self.alpha = np.zeros(n)
        self.b = 0.0
        # f(x_i) with alpha = 0 is the zero function, so E_i = -y_i.
        self.errors = -self.y.copy()

    def _take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1, a2 = self.alpha[i1], self.alpha[i2]
        y1, y2 = self.y[i1], self.y[i2]
        e1, e2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        c1, c2 = self.c[i1], self.c[i2]
        if s > 0:
            lo = max(0.0, a1 + a2 - c1)
            hi = min(c2, a1 + a2)
        else:
            lo = max(0.0, a2 - a1)
            hi = min(c2, c1 + a2 - a1)
        if lo >= hi:
            return False
        k11 = self.gram.entry(i1, i1)
        k12 = self.gram.entry(i1, i2)
        k22 = self.gram.entry(i2, i2)
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(hi, max(lo, a2_new))
        else:
            # Flat or concave direction: evaluate the objective at both ends.
            f1 = y1 * (e1 + self.b) - a1 * k11 - s * a2 * k12
            f2 = y2 * (e2 + self.b) - s * a1 * k12 - a2 * k22
            lo1 = a1 + s * (a2 - lo)
            hi1 = a1 + s * (a2 - hi)
            obj_lo = (
                lo1 * f1
                + lo * f2
                + 0.5 * lo1 * lo1 * k11
                + 0.5 * lo * lo * k22
                + s * lo * lo1 * k12
            )
            obj_hi = (
                hi1 * f1
                + hi * f2
                + 0.5 * hi1 * hi1 * k11
                + 0.5 * hi * hi * k22
                + s * hi * hi1 * k12
            )
            if obj_lo < obj_hi - self.step_eps:
                a2_new = lo
            elif obj_lo > obj_hi + self.step_eps:
                a2_new = hi
            else:
                a2_new = a2
        if abs(a2_new - a2) < self.step_eps * (a2_new + a2 + self.step_eps):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        if a1_new < 0.0:
            a2_new += s * a1_new
            a1_new = 0.0
        elif a1_new > c1:
            a2_new += s * (a1_new - c1)
            a1_new = c1

        d1 = a1_new - a1
        d2 = a2_new - a2
        b1 = self.b - e1 - y1 * d1 * k11 - y2 * d2 * k12
        b2 = self.b - e2 - y1 * d1 * k12 - y2 * d2 * k22
        if 0.0 < a1_new < c1:
            b_new = b1
        elif 0.0 < a2_new < c2:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)

        self.errors += (
            y1 * d1 * self.gram.row(i1) + y2 * d2 * self.gram.row(i2) + (b_new - self.b)
        )
        self.alpha[i1] = a1_new
        self.alpha[i2] = a2_new
        self.b = b_new
        return True

    def _violates_kkt(self, i: int) -> bool:
        r = self.errors[i] * self.y[i]
        return (r < -self.tol and self.alpha[i] < self.c[i]) or (
            r > self.tol and self.alpha[i] > 0.0
        )

    def _examine(self, i2: int) -> bool:
        if not self._violates_kkt(i2):
            return False
        e2 = self.errors[i2]
        unbound = np.flatnonzero((self.alpha > 0.0) & (self.alpha < self.c))
        if len(unbound) > 1:
            i1 = int(unbound[np.argmax(np.abs(self.errors[unbound] - e2))])
            if self._take_step(i1, i2):
                return True
        if len(unbound):
            start = int(self.rng.integers(len(unbound)))
            for offset in range(len(unbound)):
                i1 = int(unbound[(start + offset) % len(unbound)])
                if self._take_step(i1, i2):
                    return True
        start = int(self.rng.integers(self.gram.n))
        for offset in range(self.gram.n):
            i1 = (start + offset) % self.gram.n
            if self._take_step(i1, i2):
                return True
        return False

    def solve(
        self,
        max_passes: int,
        on_sweep: Callable[[int, int, int], None] | None = None,
    ) -> None:
        clean_sweeps = 0
        sweep = 0
        while clean_sweeps < max_passes:
            changed = 0
            violations = 0
            for i in range(self.gram.n):
                if self._violates_kkt(i):
                    violations += 1
                    if self._examine(i):
                        changed += 1
            if on_sweep is not None:
                on_sweep(sweep, violations, changed)
            sweep += 1
            clean_sweeps = clean_sweeps + 1 if changed == 0 else 0
            if changed == 0 and violations == 0:
                break  # further sweeps are identical no-ops

    def final_bias(self) -> float:
        unbound = np.flatnonzero((self.alpha > SV_ALPHA_EPS) & (self.alpha < self.c - SV_ALPHA_EPS))
        if len(unbound) == 0:
            return self.b
        vals = []
        signed = self.alpha * self.y
        for i in unbound:
            vals.append(self.y[i] - float(signed @ self.gram.row(i)))
        return float(np.mean(vals))


def train_smo(
    instances: Sequence[tuple[np.ndarray, int]],
    C: float = 1.0,
    tol: float = 1e-3,
    max_passes: int = 10,
    seed: int = 0,
    dictionary: FeatureDictionary | None = None,
    class_weight: dict[int, float] | None = None,
    on_sweep: Callable[[int, int, int], None] | None = None,
) -> SvmModel:
    """Maximize the SVM dual over encoded binary instances by SMO.

    ``instances`` pairs sorted index vectors with labels in {+1, -1}.
    Terminates after ``max_passes`` consecutive full sweeps without a KKT
    violation beyond ``tol``.  ``class_weight`` scales the box constraint C
    per label.
    """
    if len(instances) < 2:
        raise DegenerateTrainingSetError("need at least 2 training instances")
    vectors = [np.asarray(v, dtype=np.int64) for v, _ in instances]
    y = np.array([label for _, label in instances], dtype=np.int64)
    if not (np.any(y == 1) and np.any(y == -1)):
        raise DegenerateTrainingSetError(
            "degenerate training set: both classes must be present"
        )
    if dictionary is not None:
        n_features = len(dictionary)
    else:
        n_features = int(max((int(v[-1]) for v in vectors if len(v)), default=-1)) + 1
    weights = class_weight or {}
    c_bounds = np.array([C * weights.get(int(label), 1.0) for label in y])
    gram = _GramCache(_index_matrix(vectors, n_features))
    solver = _SmoSolver(gram, y, c_bounds, tol, seed)
    solver.solve(max_passes, on_sweep)
    bias = solver.final_bias()
    if not np.all(np.isfinite(solver.alpha)) or not np.isfinite(bias):
        raise ArithmeticError("non-finite value during SMO optimization")

    keep = np.flatnonzero(solver.alpha > SV_ALPHA_EPS)
    return SvmModel(
        support_vectors=[vectors[i] for i in keep],
        signed_alphas=(solver.alpha * solver.y)[keep],
        bias=bias,
        C=C,
        dictionary=dictionary
        if dictionary is not None
        else FeatureDictionary(
            tuple((f"f{i}", 0) for i in range(n_features)), min_count=0
        ),
    )


# ---------------------------------------------------------------------------
# Model file format
# ---------------------------------------------------------------------------


def save_model(model: SvmModel, path: str | Path) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "C": model.C,
        "bias": model.bias,
        "min_count": model.dictionary.min_count,
        "dictionary": [[feat, count] for feat, count in model.dictionary.entries],
        "signed_alphas": [float(a) for a in model.signed_alphas],
        "support_vectors": [[int(i) for i in sv] for sv in model.support_vectors],
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def load_model(path: str | Path) -> SvmModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not an {MODEL_FORMAT} model file")
    if payload.get("version") != MODEL_VERSION:
        raise ValueError(
            f"{path}: unsupported model version {payload.get('version')!r}"
        )
    dictionary = FeatureDictionary(
        tuple((feat, int(count)) for feat, count in payload["dictionary"]),
        min_count=int(payload["min_count"]),
    )
    return SvmModel(
        support_vectors=[np.asarray(sv, dtype=np.int64) for sv in payload["support_vectors"]],
        signed_alphas=np.asarray(payload["signed_alphas"], dtype=np.float64),
        bias=float(payload["bias"]),
        C=float(payload["C"]),
        dictionary=dictionary,
    )


# ---------------------------------------------------------------------------
# Estimator wrapper
# ---------------------------------------------------------------------------


class SvmAnaphoricityModel(BaseEstimator, ClassifierMixin):
    """Anaphoricity classifier over sparse string features.

    ``fit`` consumes a sequence of feature-string sets and binary labels
    (1 = anaphoric); rare features are pruned at ``min_count`` before the
    kernelized SMO solve.
    """

    def __init__(
        self,
        C: float = 1.0,
        min_count: int = 10,
        tol: float = 1e-3,
        max_passes: int = 10,
        class_weight: dict[int, float] | None = None,
        seed: int = 0,
    ) -> None:
        self.C = C
        self.min_count = min_count
        self.tol = tol
        self.max_passes = max_passes
        self.class_weight = class_weight
        self.seed = seed

    def fit(self, X, y, on_sweep=None):
        X = check_feature_sets(X)
        y = check_binary_labels(y, len(X))
        self.dictionary_ = build_dictionary(X, self.min_count)
        signed = np.where(y == 1, 1, -1)
        weight = None
        if self.class_weight:
            weight = {
                (1 if int(k) == 1 else -1): float(v)
                for k, v in self.class_weight.items()
            }
        self.model_ = train_smo(
            [(encode(v, self.dictionary_), int(s)) for v, s in zip(X, signed)],
            C=self.C,
            tol=self.tol,
            max_passes=self.max_passes,
            seed=self.seed,
            dictionary=self.dictionary_,
            class_weight=weight,
            on_sweep=on_sweep,
        )
        self.classes_ = np.array([0, 1])
        return self

    def decision_function(self, X) -> np.ndarray:
        X = check_feature_sets(X)
        encoded = [encode(v, self.model_.dictionary) for v in X]
        x_matrix = _index_matrix(encoded, len(self.model_.dictionary))
        return self.model_.margins_encoded(x_matrix)

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)
