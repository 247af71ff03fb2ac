import hashlib
import random

import pytest
from hypothesis import given, strategies as st

from posetclf.classifier import training_set
from posetclf.dataio import (
    complete_greatest,
    encode_rows,
    parse_dataset,
    parse_dataset_file,
    parse_instance,
    parse_order_spec,
    serialize_order_spec,
)
from posetclf.errors import CycleDetected, NonImmediateCover, ReservedLabelCollision, UnknownValue, ValidationError
from posetclf.poset import TOP

SIZE = "feature size chain small med large\n"


def test_chain_encoding():
    spec = parse_order_spec(SIZE)
    sp = complete_greatest(spec)
    assert encode_rows(spec, [("med",)], sp) == [(1,)]
    assert sp.factors[0].greatest == 2  # a chain already has a greatest element
    with pytest.raises(UnknownValue):
        encode_rows(spec, [("purple",)], sp)


def test_unknown_value_reports_line():
    spec = parse_order_spec(SIZE)
    with pytest.raises(UnknownValue) as e:
        parse_dataset("size,class\nsmall,a\npurple,b\n", spec)
    assert e.value.line == 3 and e.value.value == "purple" and e.value.feature == "size"


def test_car_dataset(data_dir):
    text = (data_dir / "car.csv").read_bytes()
    assert hashlib.sha256(text).hexdigest().startswith("0023b86e")
    spec = parse_order_spec((data_dir / "car_antichain.orders").read_text())
    _, raw = parse_dataset_file(text.decode(), spec)
    ts = training_set(raw, spec)
    assert len(ts.objects) == 1728
    assert ts.space.n == 6
    assert ts.n_classes == 4
    assert max(len(f.labels) for f in spec.features) == 4
    assert ts.class_names == ("acc", "good", "unacc", "vgood")


def test_all_car_orders_parse(data_dir):
    specs = {p.stem: parse_order_spec(p.read_text()) for p in data_dir.glob("car*.orders")}
    assert set(specs) == {"car_antichain", "car_chains", "car_chains_dup", "car_mixed"}
    assert specs["car_chains_dup"].duplicate_reversed
    assert not specs["car_chains"].duplicate_reversed
    assert [f.kind for f in specs["car_mixed"].features].count("chain") == 1
    assert len({s.fingerprint for s in specs.values()}) == 4


def test_complete_greatest():
    spec = parse_order_spec("feature c antichain r g b\nfeature n chain 1 2 3\n")
    sp = complete_greatest(spec)
    assert [len(p) for p in sp.factors] == [4, 3]
    assert sp.factors[0].elements[sp.factors[0].greatest] == TOP
    assert complete_greatest(sp) == sp


def test_poset_with_greatest_not_completed():
    spec = parse_order_spec("feature d poset bot a b top\ncover d bot a\ncover d bot b\ncover d a top\ncover d b top\n")
    assert len(complete_greatest(spec).factors[0]) == 4


def test_reserved_label():
    with pytest.raises(ReservedLabelCollision):
        parse_order_spec(f"feature c antichain r {TOP}\n")


def test_poset_errors():
    with pytest.raises(CycleDetected):
        parse_order_spec("feature p poset a b\ncover p a b\ncover p b a\n")
    with pytest.raises(NonImmediateCover):
        parse_order_spec("feature p poset a b c\ncover p a b\ncover p b c\ncover p a c\n")


@pytest.mark.parametrize("text", [
    "",
    "feature x\n",
    "feature x weird a b\n",
    "feature x chain a a\n",
    "feature x chain a\nfeature x chain b\n",
    "feature x chain a b\ncover x a b\n",
    "feature x poset a b\ncover x a z\n",
    "feature x chain a\nduplicate_reversed maybe\n",
    "feature x chain a\nbogus directive\n",
    "feature x chain_auto 1 two\n",
])
def test_invalid_specs(text):
    with pytest.raises(ValidationError):
        parse_order_spec(text)


def test_chain_auto_sorts_numerically():
    spec = parse_order_spec("feature n chain_auto 10 2 1.5\n")
    assert spec.features[0].kind == "chain"
    assert spec.features[0].labels == ("1.5", "2", "10")


def test_comments_and_blank_lines():
    spec = parse_order_spec("# header\n\nfeature x chain a b  # trailing\n")
    assert spec.features[0].labels == ("a", "b")


def test_fingerprint_tracks_content():
    a = parse_order_spec("feature x chain a b\n")
    b = parse_order_spec("feature x antichain a b\n")
    c = parse_order_spec("feature x chain a b\nduplicate_reversed true\n")
    assert len({a.fingerprint, b.fingerprint, c.fingerprint}) == 3
    assert a.fingerprint == parse_order_spec("# comment\nfeature x chain a b\n").fingerprint



@given(st.integers(0, 2**32 - 1))
def test_spec_roundtrip(seed):
    rng = random.Random(seed)
    lines = []
    for i in range(rng.randint(1, 4)):
        labels = rng.sample(["a", "b", "c", "d", "5more"], rng.randint(1, 5))
        kind = rng.choice(["chain", "antichain", "poset"])
        lines.append(f"feature f{i} {kind} {' '.join(labels)}")
        if kind == "poset":
            for lo, hi in zip(labels, labels[1:]):
                if rng.random() < 0.5:
                    lines.append(f"cover f{i} {lo} {hi}")
    if rng.random() < 0.5:
        lines.append("duplicate_reversed true")
    spec = parse_order_spec("\n".join(lines))
    text = serialize_order_spec(spec)
    again = parse_order_spec(text)
    assert again == spec
    assert serialize_order_spec(again) == text


def test_dataset_rejects_blank_and_short_rows():
    spec = parse_order_spec(SIZE)
    with pytest.raises(ValidationError):
        parse_dataset("size,class\n,a\n", spec)
    with pytest.raises(ValidationError):
        parse_dataset("size,class\nsmall\n", spec)
    with pytest.raises(ValidationError):
        parse_dataset("colour,class\nsmall,a\n", spec)


def test_dataset_class_column_choice():
    spec = parse_order_spec(SIZE)
    raw = parse_dataset("label,size\nyes,small\n", spec, class_column="label")
    assert raw.rows == [("small",)] and raw.classes == ["yes"]
    raw = parse_dataset("size\nsmall\n", spec)
    assert raw.classes == []


def test_inline_spec(data_dir):
    spec, raw = parse_dataset_file((data_dir / "toy_c3.data").read_text())
    assert spec.names == ("x1", "x2")
    assert raw.rows == [("0", "0"), ("2", "2")]
    assert raw.classes == ["K1", "K2"]
    with pytest.raises(ValidationError):
        parse_dataset_file((data_dir / "toy_c3.data").read_text(), spec)
    with pytest.raises(ValidationError):
        parse_dataset_file("x1,x2,class\n0,0,K\n")


def test_instance(data_dir):
    _, sp, rows = parse_instance((data_dir / "toy_c3.dual").read_text())
    assert sp.n == 2 and rows == [(1, 1)]
    with pytest.raises(ValidationError):
        parse_instance("feature x chain a b\nrows\na b\n")
    with pytest.raises(UnknownValue):
        parse_instance("feature x chain a b\nrows\nz\n")
    with pytest.raises(ValidationError):
        parse_instance("feature x chain a b\n")
