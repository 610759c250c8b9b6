"""Input validation helpers used by the estimator-style classes.

Scorers and decision rules accept plain numpy arrays plus label sets;
these helpers centralize the shape/finiteness/normalization checks so
every public ``fit``/``predict_proba`` entry point behaves the same way.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import EmbeddingError, ScorerError

NORM_ATOL = 1e-4


def as_float_matrix(X, *, name: str = "X", dtype=np.float32) -> np.ndarray:
    """Coerce to a 2-D contiguous float matrix, rejecting NaN/Inf."""
    arr = np.ascontiguousarray(X, dtype=dtype)
    if arr.ndim != 2:
        raise EmbeddingError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise EmbeddingError(f"{name} contains NaN or Inf values")
    return arr


def check_normalized(X: np.ndarray, *, name: str = "X") -> None:
    norms = np.linalg.norm(np.asarray(X, dtype=np.float64), axis=1)
    bad = np.where(np.abs(norms - 1.0) > NORM_ATOL)[0]
    if bad.size:
        raise EmbeddingError(
            f"{name} row {int(bad[0])} is not L2-normalized (norm={norms[bad[0]]:.6f})"
        )


def check_same_dim(d_query: int, d_index: int) -> None:
    if d_query != d_index:
        raise EmbeddingError(f"dimension mismatch: {d_query} vs {d_index}")


def as_label_sets(labels: Iterable, n_classes: int) -> list[frozenset[int]]:
    """Normalize per-row labels to frozensets and range-check the ids."""
    out = []
    for i, row in enumerate(labels):
        s = frozenset(int(v) for v in row)
        for v in s:
            if not 0 <= v < n_classes:
                raise ScorerError(f"label {v} out of range [0, {n_classes}) at row {i}")
        out.append(s)
    return out


def label_indicator(labels: Sequence[frozenset[int]], n_classes: int) -> np.ndarray:
    """Binary (n, C) indicator matrix for per-row label sets."""
    Y = np.zeros((len(labels), n_classes), dtype=np.float64)
    for i, s in enumerate(labels):
        for v in s:
            Y[i, v] = 1.0
    return Y


def check_no_oos_rows(labels: Sequence[frozenset[int]]) -> None:
    for i, s in enumerate(labels):
        if not s:
            raise ScorerError(f"row {i} has an empty label set; exclude OOS rows before fitting")


def check_score_matrix(S: np.ndarray, task_kind, *, atol: float = 1e-6) -> None:
    """Assert the per-task score-matrix contract (simplex rows vs [0,1] cells)."""
    from .data import TaskKind

    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2:
        raise ScorerError(f"score matrix must be 2-D, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise ScorerError("score matrix contains NaN or Inf")
    if np.any(S < -atol) or np.any(S > 1.0 + atol):
        raise ScorerError("score matrix has entries outside [0, 1]")
    if TaskKind(task_kind) is TaskKind.SINGLE_LABEL and S.shape[0]:
        sums = S.sum(axis=1)
        if np.max(np.abs(sums - 1.0)) > atol:
            raise ScorerError("single-label score rows must sum to 1")
