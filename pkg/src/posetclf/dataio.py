"""Order specifications, datasets and instance files.

All text formats share one line-oriented grammar.  Blank lines and lines
starting with ``#`` are ignored; every other line is a directive::

    feature <name> chain <low> ... <high>
    feature <name> chain_auto <label> ...      # numeric labels, sorted ascending
    feature <name> antichain <label> ...
    feature <name> poset <label> ...
    cover <name> <lower> <upper>               # Hasse edge of a poset feature
    duplicate_reversed <true|false>

A dataset file may carry its order specification inline: the directives
are followed by a line ``data`` and then comma-separated rows with a
header.  A dualization instance is the same directives followed by a line
``rows`` and one element per line (labels separated by whitespace or
commas).
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ReservedLabelCollision, UnknownValue, ValidationError
from .poset import TOP, Poset, build_poset, complete, make_antichain, make_chain
from .product import ProductSpace

KINDS = ("chain", "chain_auto", "antichain", "poset")


@dataclass(frozen=True)
class FeatureOrder:
    name: str
    kind: str
    labels: tuple[str, ...]
    covers: tuple[tuple[str, str], ...] = ()

    def poset(self) -> Poset:
        if self.kind == "chain":
            return make_chain(self.labels)
        if self.kind == "antichain":
            return make_antichain(self.labels)
        idx = {lab: i for i, lab in enumerate(self.labels)}
        return build_poset(self.labels, [(idx[a], idx[b]) for a, b in self.covers])


@dataclass(frozen=True)
class OrderSpec:
    features: tuple[FeatureOrder, ...]
    duplicate_reversed: bool = False

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def posets(self) -> tuple[Poset, ...]:
        return tuple(f.poset() for f in self.features)

    def dumps(self) -> str:
        return serialize_order_spec(self)

    @property
    def fingerprint(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]

    def with_kinds(self, kinds: dict[str, str]) -> "OrderSpec":
        """Copy with some features switched between chain and antichain."""
        feats = []
        for f in self.features:
            kind = kinds.get(f.name, f.kind)
            if kind != f.kind and (f.kind == "poset" or kind not in ("chain", "antichain")):
                raise ValidationError(f"cannot change feature {f.name!r} from {f.kind} to {kind}")
            feats.append(FeatureOrder(f.name, kind, f.labels, f.covers))
        return OrderSpec(tuple(feats), self.duplicate_reversed)


@dataclass
class RawDataset:
    feature_names: tuple[str, ...]
    rows: list[tuple[str, ...]]
    classes: list[str]
    class_column: str = "class"
    lines: list[int] = field(default_factory=list)


def _err(msg, line):
    return ValidationError(f"line {line}: {msg}" if line is not None else msg)


def _numeric_key(label):
    try:
        return (0, float(label), label)
    except ValueError:
        raise ValidationError(f"chain_auto label {label!r} is not numeric") from None


def parse_order_lines(lines, first_line=1) -> OrderSpec:
    feats: dict[str, list] = {}
    order = []
    duplicate = False
    for no, raw in enumerate(lines, first_line):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        if head == "feature":
            if len(tok) < 4:
                raise _err("feature needs a name, a kind and at least one label", no)
            name, kind, labels = tok[1], tok[2], tok[3:]
            if kind not in KINDS:
                raise _err(f"unknown kind {kind!r}", no)
            if name in feats:
                raise _err(f"duplicate feature name {name!r}", no)
            if len(set(labels)) != len(labels):
                raise _err(f"duplicate label in feature {name!r}", no)
            if TOP in labels:
                raise ReservedLabelCollision(f"line {no}: label {TOP!r} is reserved")
            if kind == "chain_auto":
                labels = sorted(labels, key=_numeric_key)
                kind = "chain"
            feats[name] = [kind, tuple(labels), []]
            order.append(name)
        elif head == "cover":
            if len(tok) != 4:
                raise _err("cover needs a feature name and two labels", no)
            name, lo, hi = tok[1:]
            if name not in feats:
                raise _err(f"cover refers to undeclared feature {name!r}", no)
            if feats[name][0] != "poset":
                raise _err(f"cover given for non-poset feature {name!r}", no)
            for lab in (lo, hi):
                if lab not in feats[name][1]:
                    raise _err(f"unknown label {lab!r} in cover of {name!r}", no)
            feats[name][2].append((lo, hi))
        elif head == "duplicate_reversed":
            if len(tok) != 2 or tok[1] not in ("true", "false"):
                raise _err("duplicate_reversed takes true or false", no)
            duplicate = tok[1] == "true"
        else:
            raise _err(f"unknown directive {head!r}", no)
    if not order:
        raise ValidationError("order specification declares no features")
    spec = OrderSpec(
        tuple(FeatureOrder(n, feats[n][0], feats[n][1], tuple(sorted(feats[n][2]))) for n in order),
        duplicate,
    )
    for f in spec.features:
        f.poset()  # validate poset structure
    return spec


def parse_order_spec(text: str) -> OrderSpec:
    return parse_order_lines(text.splitlines())


def serialize_order_spec(spec: OrderSpec) -> str:
    out = []
    for f in spec.features:
        out.append(" ".join(["feature", f.name, f.kind, *f.labels]))
        for lo, hi in f.covers:
            out.append(f"cover {f.name} {lo} {hi}")
    out.append(f"duplicate_reversed {'true' if spec.duplicate_reversed else 'false'}")
    return "\n".join(out) + "\n"


def complete_greatest(spec) -> ProductSpace:
    """Product of the feature posets, each completed with a greatest element.

    Accepts an :class:`OrderSpec` or an already built :class:`ProductSpace`;
    completing twice changes nothing.
    """
    if isinstance(spec, ProductSpace):
        return ProductSpace(tuple(complete(p) for p in spec.factors))
    for f in spec.features:
        if TOP in f.labels:
            raise ReservedLabelCollision(f"label {TOP!r} is reserved (feature {f.name!r})")
    return ProductSpace(tuple(complete(p) for p in spec.posets()))


def _split_sections(text: str, marker: str):
    lines = text.splitlines()
    for i, raw in enumerate(lines):
        if raw.strip() == marker:
            return lines[:i], lines[i + 1:], i + 2
    return None, lines, 1


def parse_dataset(text: str, spec: OrderSpec, class_column: str | None = None, first_line: int = 1) -> RawDataset:
    """Parse comma-separated rows with a header line.

    The class column is ``class_column`` if given, else a column named
    ``class``, else the last column.  A header listing exactly the features
    of ``spec`` means the rows are unlabeled (``classes`` stays empty).
    Header features may appear in any order.
    """
    reader = csv.reader(io.StringIO(text))
    rows = [(no, r) for no, r in enumerate(reader, first_line) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValidationError("dataset has no header")
    hno, header = rows[0]
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        raise _err("duplicate column names in header", hno)
    if class_column is None:
        if set(header) == set(spec.names):
            class_column = ""
        else:
            class_column = "class" if "class" in header else header[-1]
    elif class_column not in header:
        raise _err(f"class column {class_column!r} not in header", hno)
    cpos = header.index(class_column) if class_column else None
    feat_cols = [h for h in header if h != class_column]
    if set(feat_cols) != set(spec.names):
        missing = set(spec.names) - set(feat_cols)
        extra = set(feat_cols) - set(spec.names)
        raise _err(f"header does not match order spec (missing {sorted(missing)}, extra {sorted(extra)})", hno)
    pos = [header.index(n) for n in spec.names]
    allowed = {f.name: set(f.labels) for f in spec.features}
    out, classes, lines = [], [], []
    for no, r in rows[1:]:
        r = [v.strip() for v in r]
        if len(r) != len(header):
            raise _err(f"expected {len(header)} fields, got {len(r)}", no)
        if any(v == "" for v in r):
            raise _err("blank value (missing values are not supported)", no)
        vals = tuple(r[p] for p in pos)
        for name, v in zip(spec.names, vals):
            if v not in allowed[name]:
                raise UnknownValue(name, v, no)
        out.append(vals)
        if cpos is not None:
            classes.append(r[cpos])
        lines.append(no)
    return RawDataset(spec.names, out, classes, class_column, lines)


def parse_dataset_file(text: str, spec: OrderSpec | None = None, class_column: str | None = None):
    """Parse a dataset that is either plain CSV (``spec`` required) or carries its spec inline."""
    head, body, first = _split_sections(text, "data")
    if head is not None:
        if spec is not None:
            raise ValidationError("dataset carries an inline order spec; do not pass another")
        spec = parse_order_lines(head)
    elif spec is None:
        raise ValidationError("no order specification given for a plain CSV dataset")
    return spec, parse_dataset("\n".join(body), spec, class_column, first)


def encode_rows(spec: OrderSpec, rows: Sequence[Sequence[str]], space: ProductSpace | None = None):
    space = space or complete_greatest(spec)
    out = []
    for r in rows:
        try:
            out.append(tuple(p.index(v) for p, v in zip(space.factors, r)))
        except KeyError:
            bad = next((n, v) for n, p, v in zip(spec.names, space.factors, r) if v not in p.elements)
            raise UnknownValue(*bad) from None
    return out


def parse_instance(text: str):
    """Parse a dualization instance; returns (spec, space, rows as element tuples)."""
    head, body, first = _split_sections(text, "rows")
    if head is None:
        raise ValidationError("instance file needs a 'rows' line after the order directives")
    spec = parse_order_lines(head)
    space = complete_greatest(spec)
    rows = []
    for no, raw in enumerate(body, first):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        labels = line.replace(",", " ").split()
        if len(labels) != len(spec.features):
            raise _err(f"row has {len(labels)} values, expected {len(spec.features)}", no)
        try:
            rows.extend(encode_rows(spec, [labels], space))
        except UnknownValue as e:
            raise UnknownValue(e.feature, e.value, no) from None
    return spec, space, rows
