"""Labeled text datasets: loading, validation, splits, folds, few-shot subsampling.

A sample's label set may be empty, which marks it out-of-scope (OOS).
Single-label datasets therefore carry exactly one label on every
in-domain sample and an empty set on OOS ones.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DatasetError

logger = logging.getLogger(__name__)


class TaskKind(str, Enum):
    SINGLE_LABEL = "single_label"
    MULTI_LABEL = "multi_label"


@dataclass(frozen=True)
class ClassInfo:
    id: int
    name: str
    description: str | None = None


@dataclass(frozen=True)
class Sample:
    text: str
    labels: frozenset[int]


@dataclass(frozen=True)
class Dataset:
    classes: tuple[ClassInfo, ...]
    samples: tuple[Sample, ...]
    task_kind: TaskKind

    def __post_init__(self):
        _validate_dataset(self)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    @property
    def has_oos(self) -> bool:
        return any(not s.labels for s in self.samples)

    @property
    def has_descriptions(self) -> bool:
        return all(c.description is not None and c.description.strip() for c in self.classes)

    def texts(self) -> list[str]:
        return [s.text for s in self.samples]

    def label_sets(self) -> list[frozenset[int]]:
        return [s.labels for s in self.samples]


@dataclass(frozen=True)
class FoldAssignment:
    """Per-sample fold ids in ``[0, k)``; every sample (OOS included) gets one fold."""

    k: int
    fold_of: np.ndarray

    def rows_in(self, fold: int) -> np.ndarray:
        return np.where(self.fold_of == fold)[0]

    def rows_out(self, fold: int) -> np.ndarray:
        return np.where(self.fold_of != fold)[0]


def _validate_dataset(ds: Dataset) -> None:
    if len(ds.classes) < 2:
        raise DatasetError("dataset needs at least 2 classes")
    ids = [c.id for c in ds.classes]
    if ids != list(range(len(ds.classes))):
        raise DatasetError("class ids must be dense 0..C-1 and listed in order")
    names = [c.name for c in ds.classes]
    if any(not n or not n.strip() for n in names):
        raise DatasetError("class names must be non-empty")
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})[0]
        raise DatasetError(f"duplicate class name: {dup!r}")
    C = len(ds.classes)
    for i, s in enumerate(ds.samples):
        if not s.text.strip():
            raise DatasetError(f"sample {i} has empty text")
        for lab in s.labels:
            if not 0 <= lab < C:
                raise DatasetError(f"label {lab} out of range [0, {C}) at sample {i}")
        if ds.task_kind is TaskKind.SINGLE_LABEL and len(s.labels) > 1:
            raise DatasetError(f"sample {i} has {len(s.labels)} labels in a single-label dataset")


def make_dataset(classes, samples, *, multilabel: bool | None = None) -> Dataset:
    """Build a validated Dataset, inferring the task kind unless forced."""
    classes = tuple(classes)
    samples = tuple(samples)
    if multilabel is None:
        multilabel = any(len(s.labels) > 1 for s in samples)
    kind = TaskKind.MULTI_LABEL if multilabel else TaskKind.SINGLE_LABEL
    return Dataset(classes=classes, samples=samples, task_kind=kind)


def dataset_from_dict(obj: dict) -> Dataset:
    if not isinstance(obj, dict):
        raise DatasetError("dataset file must contain a JSON object")
    raw_classes = obj.get("classes")
    if not isinstance(raw_classes, list) or not raw_classes:
        raise DatasetError("dataset has an empty or missing class list")
    classes = []
    for entry in raw_classes:
        try:
            classes.append(
                ClassInfo(
                    id=int(entry["id"]),
                    name=str(entry["name"]),
                    description=entry.get("description"),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetError(f"malformed class entry {entry!r}: {exc}") from exc
    classes.sort(key=lambda c: c.id)
    samples = []
    for entry in obj.get("samples", []):
        try:
            samples.append(
                Sample(text=str(entry["text"]), labels=frozenset(int(v) for v in entry["labels"]))
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetError(f"malformed sample entry {entry!r}: {exc}") from exc
    return make_dataset(classes, samples, multilabel=obj.get("multilabel"))


def dataset_to_dict(ds: Dataset) -> dict:
    out: dict = {
        "classes": [
            {"id": c.id, "name": c.name}
            | ({"description": c.description} if c.description is not None else {})
            for c in ds.classes
        ],
        "samples": [{"text": s.text, "labels": sorted(s.labels)} for s in ds.samples],
    }
    if ds.task_kind is TaskKind.MULTI_LABEL:
        out["multilabel"] = True
    return out


def load_dataset(path) -> Dataset:
    """Load and validate a dataset JSON file."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DatasetError(f"cannot parse {path}: {exc}") from exc
    return dataset_from_dict(obj)


def save_dataset(ds: Dataset, path) -> None:
    Path(path).write_text(
        json.dumps(dataset_to_dict(ds), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def _class_counts(label_sets: list[frozenset[int]], C: int) -> np.ndarray:
    counts = np.zeros(C, dtype=np.int64)
    for s in label_sets:
        for lab in s:
            counts[lab] += 1
    return counts


def _assign_stratified(
    label_sets: list[frozenset[int]],
    rows: np.ndarray,
    proportions: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Greedy iterative stratification of ``rows`` into ``len(proportions)`` parts.

    Labels are processed rarest-first; each sample is placed in the part with
    the greatest remaining demand for the current label. Exact per-label
    balance is not always feasible for correlated multi-label data; the
    heuristic keeps the spread at <= 1 whenever the instance admits it.
    """
    n_parts = len(proportions)
    C = 1 + max((max(s) for s in (label_sets[r] for r in rows) if s), default=0)
    counts = np.zeros(C, dtype=np.float64)
    members: dict[int, list[int]] = {c: [] for c in range(C)}
    for r in rows:
        for lab in label_sets[r]:
            counts[lab] += 1
            members[lab].append(int(r))
    desire = counts[:, None] * proportions[None, :]  # remaining per (label, part)
    total_desire = len(rows) * proportions.copy()

    part_of = {int(r): -1 for r in rows}
    label_order = sorted(range(C), key=lambda c: (counts[c] if counts[c] > 0 else np.inf, c))
    for lab in label_order:
        if counts[lab] == 0:
            continue
        pending = [r for r in members[lab] if part_of[r] < 0]
        if not pending:
            continue
        pending = [pending[i] for i in rng.permutation(len(pending))]
        for r in pending:
            # best part: most demand for this label, then most total capacity, then index
            best = 0
            for p in range(1, n_parts):
                if desire[lab, p] > desire[lab, best] + 1e-12 or (
                    abs(desire[lab, p] - desire[lab, best]) <= 1e-12
                    and total_desire[p] > total_desire[best] + 1e-12
                ):
                    best = p
            part_of[r] = best
            total_desire[best] -= 1.0
            for other in label_sets[r]:
                desire[other, best] -= 1.0
    return np.array([part_of[int(r)] for r in rows], dtype=np.int64)


def _split_oos(n_oos: int, proportions: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Round-robin OOS rows over parts, weighted by the target proportions."""
    order = rng.permutation(n_oos)
    targets = np.floor(proportions * n_oos + 0.5).astype(int)
    while targets.sum() < n_oos:
        targets[int(np.argmax(proportions))] += 1
    while targets.sum() > n_oos:
        targets[int(np.argmax(targets))] -= 1
    parts = np.repeat(np.arange(len(proportions)), targets)
    out = np.empty(n_oos, dtype=np.int64)
    out[order] = parts[:n_oos]
    return out


def stratified_split(ds: Dataset, ratio: float, seed: int) -> tuple[Dataset, Dataset]:
    """Split into two datasets preserving per-class proportions within +-1 sample."""
    if not 0.0 < ratio < 1.0:
        raise DatasetError(f"split ratio must be in (0, 1), got {ratio}")
    label_sets = ds.label_sets()
    counts = _class_counts(label_sets, ds.n_classes)
    small = np.where(counts < 2)[0]
    if small.size:
        raise DatasetError(
            f"class {ds.classes[int(small[0])].name!r} has {int(counts[small[0]])} "
            "samples; need at least 2 to split"
        )
    rng = np.random.default_rng(seed)
    in_rows = np.array([i for i, s in enumerate(label_sets) if s], dtype=np.int64)
    oos_rows = np.array([i for i, s in enumerate(label_sets) if not s], dtype=np.int64)
    proportions = np.array([ratio, 1.0 - ratio])

    part = np.empty(ds.n_samples, dtype=np.int64)
    if in_rows.size:
        part[in_rows] = _assign_stratified(label_sets, in_rows, proportions, rng)
    if oos_rows.size:
        part[oos_rows] = _split_oos(oos_rows.size, proportions, rng)

    def _subset(which: int) -> Dataset:
        kept = tuple(ds.samples[i] for i in range(ds.n_samples) if part[i] == which)
        return Dataset(classes=ds.classes, samples=kept, task_kind=ds.task_kind)

    return _subset(0), _subset(1)


def stratified_kfold(ds: Dataset, k: int, seed: int) -> FoldAssignment:
    """Assign every sample to one of k folds, stratified per class.

    OOS rows are dealt round-robin over a shuffled order so each fold
    carries OOS examples for decision fitting.
    """
    if k < 2:
        raise DatasetError(f"fold count must be >= 2, got {k}")
    label_sets = ds.label_sets()
    counts = _class_counts(label_sets, ds.n_classes)
    small = np.where(counts < k)[0]
    if small.size:
        raise DatasetError(
            f"class {ds.classes[int(small[0])].name!r} has {int(counts[small[0]])} "
            f"samples; need at least k={k} to fold"
        )
    rng = np.random.default_rng(seed)
    in_rows = np.array([i for i, s in enumerate(label_sets) if s], dtype=np.int64)
    oos_rows = np.array([i for i, s in enumerate(label_sets) if not s], dtype=np.int64)
    proportions = np.full(k, 1.0 / k)

    fold_of = np.empty(ds.n_samples, dtype=np.int64)
    if in_rows.size:
        fold_of[in_rows] = _assign_stratified(label_sets, in_rows, proportions, rng)
    if oos_rows.size:
        order = rng.permutation(oos_rows.size)
        fold_of[oos_rows[order]] = np.arange(oos_rows.size) % k
    return FoldAssignment(k=k, fold_of=fold_of)


def few_shot_subsample(ds: Dataset, n_shots: int, seed: int) -> Dataset:
    """Keep at most ``n_shots`` samples per class, chosen uniformly at random.

    OOS samples and the class list are kept unchanged. Classes smaller than
    ``n_shots`` keep everything and only produce a warning.
    """
    if n_shots < 1:
        raise DatasetError(f"n_shots must be >= 1, got {n_shots}")
    rng = np.random.default_rng(seed)
    label_sets = ds.label_sets()
    keep: set[int] = {i for i, s in enumerate(label_sets) if not s}
    for c in range(ds.n_classes):
        rows = [i for i, s in enumerate(label_sets) if c in s]
        if len(rows) < n_shots:
            logger.warning(
                "class %r has only %d samples (< %d shots); keeping all",
                ds.classes[c].name,
                len(rows),
                n_shots,
            )
            keep.update(rows)
        else:
            chosen = rng.choice(len(rows), size=n_shots, replace=False)
            keep.update(rows[j] for j in chosen)
    kept = tuple(ds.samples[i] for i in range(ds.n_samples) if i in keep)
    return Dataset(classes=ds.classes, samples=kept, task_kind=ds.task_kind)
