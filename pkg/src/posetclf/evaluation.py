"""Stratified cross-validation of the voting classifiers."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .classifier import ABSTAIN, TrainingSet, classify_many, train
from .errors import TooFewObjectsPerClass, ValidationError


@dataclass
class FoldResult:
    fold: int
    n_test: int
    correct: int
    abstained: int
    classifiers: int
    train_seconds: float
    predict_seconds: float

    @property
    def accuracy(self) -> float:
        return self.correct / self.n_test


@dataclass
class EvalReport:
    method: str
    folds: int
    seed: int
    duplicate: bool
    max_rank: int | None
    order_fingerprint: str | None
    fold_results: list[FoldResult] = field(default_factory=list)

    @property
    def n_objects(self) -> int:
        return sum(f.n_test for f in self.fold_results)

    @property
    def accuracy(self) -> float:
        """Fraction of correctly classified objects; abstentions count as errors."""
        return sum(f.correct for f in self.fold_results) / self.n_objects

    @property
    def abstain_fraction(self) -> float:
        return sum(f.abstained for f in self.fold_results) / self.n_objects

    @property
    def fold_accuracies(self) -> list[float]:
        return [f.accuracy for f in self.fold_results]

    @property
    def seconds(self) -> float:
        return sum(f.train_seconds + f.predict_seconds for f in self.fold_results)

    def to_dict(self, timing: bool = True) -> dict:
        folds = [asdict(f) for f in self.fold_results]
        if not timing:
            for f in folds:
                del f["train_seconds"], f["predict_seconds"]
        out = {
            "method": self.method,
            "folds": self.folds,
            "seed": self.seed,
            "duplicate": self.duplicate,
            "max_rank": self.max_rank,
            "order_fingerprint": self.order_fingerprint,
            "accuracy": self.accuracy,
            "abstain_fraction": self.abstain_fraction,
            "fold_accuracies": self.fold_accuracies,
            "fold_results": folds,
        }
        if timing:
            out["seconds"] = self.seconds
        return out


def stratified_folds(labels, folds: int, seed: int) -> list[list[int]]:
    """Split object indices into ``folds`` parts with near-equal class shares.

    Each class is shuffled with a generator seeded by ``seed`` and dealt
    round-robin; the starting fold rotates between classes so fold sizes
    stay balanced.
    """
    if folds < 2:
        raise ValidationError("need at least 2 folds")
    rng = random.Random(seed)
    by_class: dict[int, list[int]] = {}
    for i, c in enumerate(labels):
        by_class.setdefault(c, []).append(i)
    parts: list[list[int]] = [[] for _ in range(folds)]
    offset = 0
    for c in sorted(by_class):
        idx = by_class[c]
        if len(idx) < folds:
            raise TooFewObjectsPerClass(f"class {c} has {len(idx)} objects, fewer than {folds} folds")
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            parts[(pos + offset) % folds].append(i)
        offset += len(idx)
    return [sorted(p) for p in parts]


def _run_fold(args):
    ts, test_idx, fold, method, max_rank, duplicate, tie, fingerprint = args
    test = set(test_idx)
    train_set = ts.subset([i for i in range(len(ts.objects)) if i not in test])
    t0 = time.perf_counter()
    model = train(train_set, method, max_rank, duplicate, fingerprint)
    t1 = time.perf_counter()
    pred = classify_many(model, [ts.objects[i] for i in test_idx], tie)
    t2 = time.perf_counter()
    truth = [ts.labels[i] for i in test_idx]
    return FoldResult(
        fold,
        len(test_idx),
        sum(p == y for p, y in zip(pred, truth)),
        sum(p is ABSTAIN for p in pred),
        model.size(),
        t1 - t0,
        t2 - t1,
    )


def evaluate(ts: TrainingSet, method: str = "representative", folds: int = 3, seed: int = 0,
             max_rank: int | None = None, duplicate: bool = False, tie: str = "abstain",
             order_fingerprint: str | None = None, jobs: int = 1) -> EvalReport:
    parts = stratified_folds(ts.labels, folds, seed)
    tasks = [(ts, p, i, method, max_rank, duplicate, tie, order_fingerprint) for i, p in enumerate(parts)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_fold, tasks))
    else:
        results = [_run_fold(t) for t in tasks]
    return EvalReport(method, folds, seed, duplicate, max_rank, order_fingerprint, results)
