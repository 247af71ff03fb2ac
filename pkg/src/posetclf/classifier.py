"""Elementary classifiers over partially ordered feature domains.

An elementary classifier ``(sigma, H)`` prescribes one value per selected
feature.  An object generates it when each of its values on ``H``
precedes the prescribed one.  Training reduces to dualization: irredundant
coverings of a class are the maximal elements independent of the class,
and irredundant representative classifiers are the maximal elements
independent of the rest of the data that still dominate some object of
the class.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .dualization import CoveringMatrix, SigmaCovering, covering_to_element, element_to_covering, enumerate_coverings
from .errors import OverlappingClasses, SpaceMismatch, ValidationError
from .poset import complete, strip_top
from .product import Element, ProductSpace

METHODS = ("representative", "covering")
TIE_POLICIES = ("abstain", "lowest")
ABSTAIN = None
REVERSED_SUFFIX = "~rev"


class ElementaryClassifier(NamedTuple):
    features: tuple[int, ...]
    sigma: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.features)


@dataclass(frozen=True)
class TrainingSet:
    space: ProductSpace
    objects: tuple[Element, ...]
    labels: tuple[int, ...]
    class_names: tuple[str, ...]
    feature_names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.space.check(o) for o in self.objects))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.objects) != len(self.labels):
            raise ValidationError("objects and labels differ in length")
        if any(not 0 <= c < len(self.class_names) for c in self.labels):
            raise ValidationError("class label out of range")
        if not self.feature_names:
            object.__setattr__(self, "feature_names", tuple(f"x{i + 1}" for i in range(self.space.n)))

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def members(self, k: int) -> list[Element]:
        return [o for o, c in zip(self.objects, self.labels) if c == k]

    def others(self, k: int) -> list[Element]:
        return [o for o, c in zip(self.objects, self.labels) if c != k]

    def subset(self, indices) -> "TrainingSet":
        return TrainingSet(
            self.space,
            tuple(self.objects[i] for i in indices),
            tuple(self.labels[i] for i in indices),
            self.class_names,
            self.feature_names,
        )


def training_set(raw, spec) -> TrainingSet:
    """Build a training set from a parsed dataset and its order spec."""
    from .dataio import complete_greatest, encode_rows

    space = complete_greatest(spec)
    names = tuple(sorted(set(raw.classes)))
    return TrainingSet(space, tuple(encode_rows(spec, raw.rows, space)),
                       tuple(names.index(c) for c in raw.classes), names, tuple(spec.names))


# -- proximity and predicates -------------------------------------------------

def proximity_ordered(ec: ElementaryClassifier, s: Sequence[int], space: ProductSpace) -> int:
    f = space.factors
    return int(all(f[j].leq(s[j], v) for j, v in zip(ec.features, ec.sigma)))


def proximity_classical(ec: ElementaryClassifier, s: Sequence[int]) -> int:
    return int(all(s[j] == v for j, v in zip(ec.features, ec.sigma)))


def is_correct(ec, ts: TrainingSet, k: int) -> bool:
    own = any(proximity_ordered(ec, s, ts.space) for s in ts.members(k))
    other = any(proximity_ordered(ec, s, ts.space) for s in ts.others(k))
    return not (own and other)


def is_representative(ec, ts: TrainingSet, k: int) -> bool:
    return is_correct(ec, ts, k) and any(proximity_ordered(ec, s, ts.space) for s in ts.members(k))


def is_covering(ec, ts: TrainingSet, k: int) -> bool:
    return not any(proximity_ordered(ec, s, ts.space) for s in ts.members(k))


def is_test(h: Sequence[int], ts: TrainingSet) -> bool:
    """True when every training object generates a representative classifier on ``h``.

    The object's own values are the most specific prescription it
    generates, and correctness only gets harder for larger prescriptions,
    so it suffices to check ``sigma = S restricted to h``.
    """
    h = tuple(sorted(h))
    if not h:
        raise ValidationError("a test needs at least one feature")
    for s, k in zip(ts.objects, ts.labels):
        ec = ElementaryClassifier(h, tuple(s[j] for j in h))
        if not is_correct(ec, ts, k):
            return False
    return True


def embed(ec: ElementaryClassifier, space: ProductSpace) -> Element:
    return covering_to_element(space, SigmaCovering(ec.features, ec.sigma))


def classifier_of(space: ProductSpace, x: Sequence[int]) -> ElementaryClassifier:
    c = element_to_covering(space, x)
    return ElementaryClassifier(c.columns, c.sigma)


# -- vectorized proximity -----------------------------------------------------

def _leq_arrays(space: ProductSpace):
    return [np.array(p.leq_table, dtype=bool) for p in space.factors]


def generation_matrix(space: ProductSpace, objects, elements, leq=None) -> np.ndarray:
    """Boolean matrix ``G[i, e]``: object ``i`` precedes element ``e``."""
    objects = np.asarray(objects, dtype=np.intp).reshape(-1, space.n)
    elements = np.asarray(elements, dtype=np.intp).reshape(-1, space.n)
    leq = leq or _leq_arrays(space)
    g = np.ones((len(objects), len(elements)), dtype=bool)
    for t, table in enumerate(leq):
        g &= table[objects[:, t][:, None], elements[:, t][None, :]]
    return g


# -- training -----------------------------------------------------------------

def train_coverings(ts: TrainingSet, k: int, max_rank: int | None = None):
    """Irredundant coverings of class ``k``, each with weight 1."""
    m = CoveringMatrix(ts.space, tuple(ts.members(k)))
    sols = sorted(covering_to_element(ts.space, c) for c in enumerate_coverings(m, max_rank))
    return [(classifier_of(ts.space, x), 1) for x in sols]


def train_representatives(ts: TrainingSet, k: int, max_rank: int | None = None):
    """Irredundant representative classifiers of class ``k`` against all other classes.

    The weight of a classifier is the number of class members generating it.
    An empty list means the class has no representative classifier.
    """
    own = ts.members(k)
    m = CoveringMatrix(ts.space, tuple(ts.others(k)))
    sols = sorted(covering_to_element(ts.space, c) for c in enumerate_coverings(m, max_rank))
    if not sols or not own:
        return []
    weights = generation_matrix(ts.space, own, sols).sum(axis=0)
    return [(classifier_of(ts.space, x), int(w)) for x, w in zip(sols, weights) if w > 0]


def reversed_factor(p):
    """Reverse a feature order, completing the result with a greatest element if needed."""
    return complete(strip_top(p).reversed())


def duplicate_space(space: ProductSpace) -> ProductSpace:
    return ProductSpace(space.factors + tuple(reversed_factor(p) for p in space.factors))


def duplicate_object(s: Sequence[int], space: ProductSpace, dup: ProductSpace) -> Element:
    """Map an object into the duplicated space (labels are kept, indices re-resolved)."""
    n = space.n
    tail = tuple(dup.factors[n + j].index(space.factors[j].elements[v]) for j, v in enumerate(s))
    return tuple(s) + tail


def duplicate_features(ts: TrainingSet) -> TrainingSet:
    """Append a reversed-order copy of every feature.

    Raises OverlappingClasses when one description occurs in two classes,
    since no correct classifier can then separate them.
    """
    seen: dict[Element, int] = {}
    for s, k in zip(ts.objects, ts.labels):
        if seen.setdefault(s, k) != k:
            raise OverlappingClasses(
                f"description {ts.space.labels(s)} occurs in classes "
                f"{ts.class_names[seen[s]]!r} and {ts.class_names[k]!r}")
    dup = duplicate_space(ts.space)
    return TrainingSet(
        dup,
        tuple(duplicate_object(s, ts.space, dup) for s in ts.objects),
        ts.labels,
        ts.class_names,
        ts.feature_names + tuple(n + REVERSED_SUFFIX for n in ts.feature_names),
    )


@dataclass(frozen=True)
class TrainedModel:
    method: str
    space: ProductSpace
    class_names: tuple[str, ...]
    feature_names: tuple[str, ...]
    classifiers: tuple[tuple[tuple[ElementaryClassifier, int], ...], ...]
    duplicated: bool = False
    order_fingerprint: str | None = None
    max_rank: int | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def input_dim(self) -> int:
        return self.space.n // 2 if self.duplicated else self.space.n

    def size(self) -> int:
        return sum(len(c) for c in self.classifiers)

    def prepare(self, objects) -> np.ndarray:
        """Validate raw objects (indices in the non-duplicated space) and apply duplication."""
        out = []
        base = self.space.factors[: self.input_dim]
        for s in objects:
            s = tuple(s)
            if len(s) != self.input_dim:
                raise SpaceMismatch(f"object has {len(s)} features, model expects {self.input_dim}")
            if any(not 0 <= v < len(p) for v, p in zip(s, base)):
                raise SpaceMismatch(f"object {s} has values outside the model's domains")
            if self.duplicated:
                s = duplicate_object(s, ProductSpace(base), self.space)
            out.append(s)
        return np.asarray(out, dtype=np.intp).reshape(-1, self.space.n)

    def _tables(self):
        if "tables" not in self._cache:
            embedded, weights = [], []
            for cls in self.classifiers:
                embedded.append(np.array([embed(ec, self.space) for ec, _ in cls], dtype=np.intp).reshape(-1, self.space.n))
                weights.append(np.array([w for _, w in cls], dtype=float))
            self._cache["tables"] = (embedded, weights, _leq_arrays(self.space))
        return self._cache["tables"]


def _train_class(args):
    ts, k, method, max_rank = args
    if not ts.members(k):
        return ()
    fn = train_representatives if method == "representative" else train_coverings
    return tuple(fn(ts, k, max_rank))


def train(ts: TrainingSet, method: str = "representative", max_rank: int | None = None,
          duplicate: bool = False, order_fingerprint: str | None = None, jobs: int = 1) -> TrainedModel:
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}")
    work = duplicate_features(ts) if duplicate else ts
    tasks = [(work, k, method, max_rank) for k in range(ts.n_classes)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            per_class = tuple(ex.map(_train_class, tasks))
    else:
        per_class = tuple(map(_train_class, tasks))
    return TrainedModel(method, work.space, ts.class_names, work.feature_names, per_class,
                        duplicate, order_fingerprint, max_rank)


# -- voting -------------------------------------------------------------------

class Scores(NamedTuple):
    raw: np.ndarray         # objects x classes, unnormalized vote sums
    normalized: np.ndarray  # raw divided by total class weight (or classifier count)


def estimate_many(model: TrainedModel, objects) -> Scores:
    x = model.prepare(objects)
    embedded, weights, leq = model._tables()
    raw = np.zeros((len(x), len(model.class_names)))
    norm = np.zeros_like(raw)
    for k, (e, w) in enumerate(zip(embedded, weights)):
        if len(e) == 0:
            continue
        g = generation_matrix(model.space, x, e, leq)
        if model.method == "representative":
            raw[:, k] = g.astype(float) @ w
            norm[:, k] = raw[:, k] / w.sum()
        else:
            raw[:, k] = (~g).sum(axis=1)
            norm[:, k] = raw[:, k] / len(e)
    return Scores(raw, norm)


def estimate(model: TrainedModel, s: Sequence[int]) -> Scores:
    sc = estimate_many(model, [s])
    return Scores(sc.raw[0], sc.normalized[0])


def decide(normalized: np.ndarray, model: TrainedModel, tie: str = "abstain"):
    """Pick the class with the highest normalized score for each row."""
    if tie not in TIE_POLICIES:
        raise ValidationError(f"unknown tie policy {tie!r}")
    empty = all(len(c) == 0 for c in model.classifiers)
    out = []
    for row in np.atleast_2d(normalized):
        if empty:
            out.append(ABSTAIN)
            continue
        best = row.max()
        winners = np.flatnonzero(row == best)
        if len(winners) > 1 and tie == "abstain":
            out.append(ABSTAIN)
        else:
            out.append(int(winners[0]))
    return out


def classify_many(model: TrainedModel, objects, tie: str = "abstain"):
    return decide(estimate_many(model, objects).normalized, model, tie)


def classify(model: TrainedModel, s: Sequence[int], tie: str = "abstain"):
    return classify_many(model, [s], tie)[0]


# -- serialization ------------------------------------------------------------

def model_to_dict(model: TrainedModel) -> dict:
    sp = model.space
    classes = []
    for name, cls in zip(model.class_names, model.classifiers):
        classes.append({
            "name": name,
            "classifiers": [
                {"features": [model.feature_names[j] for j in ec.features],
                 "values": [sp.factors[j].elements[v] for j, v in zip(ec.features, ec.sigma)],
                 "weight": w}
                for ec, w in cls
            ],
        })
    return {
        "format": "posetclf-model",
        "version": 1,
        "method": model.method,
        "order_fingerprint": model.order_fingerprint,
        "duplicated": model.duplicated,
        "max_rank": model.max_rank,
        "features": list(model.feature_names),
        "classes": classes,
    }


def dumps_model(model: TrainedModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


_MODEL_KEYS = {"format", "version", "method", "order_fingerprint", "duplicated", "max_rank", "features", "classes"}


def model_from_dict(d: dict, spec) -> TrainedModel:
    """Rebuild a model; ``spec`` must be the order spec it was trained with."""
    from .dataio import complete_greatest

    if set(d) != _MODEL_KEYS or d.get("format") != "posetclf-model" or d.get("version") != 1:
        raise ValidationError(f"not a posetclf model document (keys {sorted(d)})")
    if d["method"] not in METHODS:
        raise ValidationError(f"unknown method {d['method']!r}")
    if d["order_fingerprint"] is not None and d["order_fingerprint"] != spec.fingerprint:
        raise SpaceMismatch("model was trained with a different order specification")
    space = complete_greatest(spec)
    names = tuple(spec.names)
    if d["duplicated"]:
        space = duplicate_space(space)
        names = names + tuple(n + REVERSED_SUFFIX for n in names)
    if tuple(d["features"]) != names:
        raise SpaceMismatch("model features do not match the order specification")
    pos = {n: i for i, n in enumerate(names)}
    per_class = []
    for c in d["classes"]:
        if set(c) != {"name", "classifiers"}:
            raise ValidationError(f"unexpected class entry keys {sorted(c)}")
        items = []
        for e in c["classifiers"]:
            if set(e) != {"features", "values", "weight"}:
                raise ValidationError(f"unexpected classifier keys {sorted(e)}")
            feats = [pos[f] for f in e["features"]]
            sigma = [space.factors[j].index(v) for j, v in zip(feats, e["values"])]
            items.append((ElementaryClassifier(tuple(feats), tuple(sigma)), int(e["weight"])))
        per_class.append(tuple(items))
    return TrainedModel(d["method"], space, tuple(c["name"] for c in d["classes"]), names,
                        tuple(per_class), bool(d["duplicated"]), d["order_fingerprint"], d["max_rank"])


def loads_model(text: str, spec) -> TrainedModel:
    return model_from_dict(json.loads(text), spec)
