"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 enumerator/oracle mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from pathlib import Path

from . import classifier as clf
from .dataio import complete_greatest, encode_rows, parse_dataset_file, parse_instance, parse_order_spec
from .dualization import (
    CoveringMatrix,
    covering_to_element,
    enumerate_coverings,
    enumerate_coverings_partitioned,
    max_independent,
)
from .errors import PosetError
from .evaluation import evaluate
from .generators import random_instance
from .product import brute_force_max_independent

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH = 0, 2, 3


class CliError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_data(args):
    """Return (spec, raw dataset) from --data and optional --orders."""
    spec = parse_order_spec(_read(args.orders)) if args.orders else None
    try:
        return parse_dataset_file(_read(args.data), spec, args.class_column)
    except PosetError as e:
        raise CliError(f"{args.data}: {e}") from None


def cmd_train(args):
    spec, raw = _load_data(args)
    ts = clf.training_set(raw, spec)
    model = clf.train(ts, args.method, args.max_rank, args.duplicate or spec.duplicate_reversed,
                      spec.fingerprint, args.jobs)
    _write(args.out, clf.dumps_model(model))
    sizes = ", ".join(f"{n}: {len(c)}" for n, c in zip(model.class_names, model.classifiers))
    print(f"trained {model.method} model ({sizes})", file=sys.stderr)


def cmd_predict(args):
    spec, raw = _load_data(args)
    try:
        model = clf.loads_model(_read(args.model), spec)
    except (PosetError, json.JSONDecodeError, KeyError) as e:
        raise CliError(f"{args.model}: {e}") from None
    objects = encode_rows(spec, raw.rows)
    scores = clf.estimate_many(model, objects)
    pred = clf.decide(scores.normalized, model, args.tie)
    out = [["row", "predicted", *(f"score_{c}" for c in model.class_names)]]
    for i, (p, row) in enumerate(zip(pred, scores.normalized)):
        out.append([i + 1, "?" if p is None else model.class_names[p], *(f"{v:.6g}" for v in row)])
    text = "".join(",".join(map(str, r)) + "\n" for r in out)
    if raw.classes:
        correct = sum(p is not None and model.class_names[p] == c for p, c in zip(pred, raw.classes))
        print(f"accuracy {correct / len(pred):.4f} on {len(pred)} labeled objects", file=sys.stderr)
    _write(args.out, text)


def cmd_evaluate(args):
    spec, raw = _load_data(args)
    ts = clf.training_set(raw, spec)
    dup = args.duplicate or spec.duplicate_reversed
    reports = [
        evaluate(ts, args.method, args.folds, seed, args.max_rank, dup, args.tie, spec.fingerprint, args.jobs)
        for seed in range(args.seed, args.seed + args.repeats)
    ]
    mean = sum(r.accuracy for r in reports) / len(reports)
    doc = {
        "format": "posetclf-report",
        "version": 1,
        "dataset": {"objects": len(ts.objects), "features": ts.space.n, "classes": ts.n_classes,
                    "max_values": max(len(f.labels) for f in spec.features)},
        "mean_accuracy": mean,
        "runs": [r.to_dict(timing=not args.no_timing) for r in reports],
    }
    _write(args.out, json.dumps(doc, indent=2) + "\n")
    print(f"mean accuracy {mean:.4f} over {len(reports)} run(s)", file=sys.stderr)


def _format_solution(space, c):
    x = covering_to_element(space, c)
    cols = ",".join(str(j + 1) for j in c.columns)
    sigma = ",".join(str(space.factors[j].elements[v]) for j, v in zip(c.columns, c.sigma))
    elem = ",".join(str(l) for l in space.labels(x))
    return f"H=({cols}) sigma=({sigma}) x=({elem})\n"


def cmd_dualize(args):
    try:
        _, space, rows = parse_instance(_read(args.instance))
    except PosetError as e:
        raise CliError(f"{args.instance}: {e}") from None
    m = CoveringMatrix(space, tuple(rows))
    if args.jobs > 1:
        sols = enumerate_coverings_partitioned(m, args.max_rank, args.jobs)
    else:
        sols = enumerate_coverings(m, args.max_rank, canonical=not args.unsorted)
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w")
    try:
        for c in sols:
            out.write(_format_solution(space, c))
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_oracle_check(args):
    if args.instance:
        try:
            _, space, rows = parse_instance(_read(args.instance))
        except PosetError as e:
            raise CliError(f"{args.instance}: {e}") from None
        cases = [(space, rows)]
    else:
        rng = random.Random(args.seed)
        cases = [random_instance(rng, args.max_factors, args.max_size, args.max_rows) for _ in range(args.random)]
    bad = 0
    for i, (space, rows) in enumerate(cases):
        got = max_independent(CoveringMatrix(space, tuple(rows)))
        want = brute_force_max_independent(space, rows)
        if got != want:
            bad += 1
            print(f"mismatch on case {i}: enumerator {got}, brute force {want}", file=sys.stderr)
    print(f"{len(cases) - bad}/{len(cases)} instances agree", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


def _rank(v):
    if v in ("none", "inf"):
        return None
    n = int(v)
    if n < 0:
        raise argparse.ArgumentTypeError("rank must be non-negative")
    return n


def build_parser():
    p = argparse.ArgumentParser(prog="posetclf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def data_args(sp):
        sp.add_argument("--data", required=True, help="CSV dataset, or dataset with inline order spec")
        sp.add_argument("--orders", help="order specification file (omit for inline specs)")
        sp.add_argument("--class-column", help="name of the class column (default: 'class' or last)")

    def model_args(sp):
        sp.add_argument("--method", choices=clf.METHODS, default="representative")
        sp.add_argument("--max-rank", type=_rank, default=None)
        sp.add_argument("--duplicate", action="store_true", help="append reversed copies of all features")
        sp.add_argument("--jobs", type=int, default=1)

    t = sub.add_parser("train", help="train a model and write it as JSON")
    data_args(t)
    model_args(t)
    t.add_argument("--out", default="-")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="classify objects with a trained model")
    data_args(pr)
    pr.add_argument("--model", required=True)
    pr.add_argument("--tie", choices=clf.TIE_POLICIES, default="abstain")
    pr.add_argument("--out", default="-")
    pr.set_defaults(func=cmd_predict)

    ev = sub.add_parser("evaluate", help="stratified cross-validation")
    data_args(ev)
    model_args(ev)
    ev.add_argument("--folds", type=int, default=3)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--repeats", type=int, default=1, help="number of consecutive seeds to run")
    ev.add_argument("--tie", choices=clf.TIE_POLICIES, default="abstain")
    ev.add_argument("--no-timing", action="store_true", help="omit timings for byte-stable reports")
    ev.add_argument("--out", default="-")
    ev.set_defaults(func=cmd_evaluate)

    d = sub.add_parser("dualize", help="enumerate maximal independent elements of an instance")
    d.add_argument("instance")
    d.add_argument("--max-rank", type=_rank, default=None)
    d.add_argument("--unsorted", action="store_true", help="stream solutions in discovery order")
    d.add_argument("--jobs", type=int, default=1)
    d.add_argument("--out", default="-")
    d.set_defaults(func=cmd_dualize)

    oc = sub.add_parser("oracle-check", help="compare the enumerator with brute force")
    src = oc.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance")
    src.add_argument("--random", type=int, metavar="N", help="check N seeded random instances")
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument("--max-factors", type=int, default=4)
    oc.add_argument("--max-size", type=int, default=4)
    oc.add_argument("--max-rows", type=int, default=12)
    oc.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except (CliError, PosetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
