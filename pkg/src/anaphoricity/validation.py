"""Input validation helpers shared by the estimator classes."""

from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = ["check_binary_labels", "check_feature_sets", "check_context_instances"]


def check_feature_sets(X) -> list[set[str]]:
    if isinstance(X, (str, bytes)) or not hasattr(X, "__iter__"):
        raise TypeError("X must be a sequence of feature-string collections")
    out: list[set[str]] = []
    for i, vec in enumerate(X):
        if isinstance(vec, (str, bytes)):
            raise TypeError(f"X[{i}] is a string; expected a collection of feature strings")
        feats = set(vec)
        if not all(isinstance(f, str) for f in feats):
            raise TypeError(f"X[{i}] contains non-string features")
        out.append(feats)
    if not out:
        raise ValueError("X is empty")
    return out


def check_binary_labels(y, n: int) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1 or len(y) != n:
        raise ValueError(f"y must be a 1-d array of length {n}, got shape {y.shape}")
    y = y.astype(np.int64)
    if not np.all(np.isin(y, (0, 1))):
        raise ValueError("y must contain only 0 (non-anaphoric) and 1 (anaphoric)")
    return y


def check_context_instances(X) -> list:
    from .features import ContextInstance, SURFACE_DIM

    if not hasattr(X, "__len__"):
        X = list(X)
    if not X:
        raise ValueError("X is empty")
    for i, inst in enumerate(X):
        if not isinstance(inst, ContextInstance):
            raise TypeError(f"X[{i}] must be a ContextInstance")
        if inst.surface.shape != (SURFACE_DIM,):
            raise ValueError(
                f"X[{i}].surface must have shape ({SURFACE_DIM},), got {inst.surface.shape}"
            )
        if not inst.tokens:
            raise ValueError(f"X[{i}].tokens is empty")
    return list(X)
