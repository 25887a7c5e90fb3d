"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or model error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from .corpus import DatasetError, load_dataset, load_texts
from .detector import EMPTY_DOC, score
from .metrics import compute_metrics, confusion
from .model_store import ModelBundle, ModelFormatError, load_model, make_metadata, save_model
from .pipeline import EmptyClusterError, classify_texts, fit_pipeline, vectorize
from .sweep import (
    DEFAULT_GRID,
    METHODS,
    comparison_to_csv,
    comparison_to_long_csv,
    compare_methods,
    parse_grid,
    read_sweep_csv,
    select_best,
    sweep_scored,
    table_to_csv,
    table_to_text,
)
from .textprep import DEFAULT_KEYWORDS, PreprocessConfig, resolve_stopwords

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _coeff(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > -1:
        raise argparse.ArgumentTypeError("coefficient must be > -1")
    return v


def _grid(text: str):
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _keywords(text: str) -> frozenset[str]:
    return frozenset(w.strip().lower() for w in text.split(",") if w.strip())


def _add_prep_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stopwords", help="stopword file, one word per line (default: built-in list)")
    p.add_argument("--keywords", type=_keywords, help="comma-separated topic keywords to drop")
    p.add_argument("--fit-on-all", action="store_true", help="fit TF-IDF on the whole training set, not only the relevant documents")
    p.add_argument("--smooth-idf", action="store_true", help="use ln((1+N)/(1+df)) instead of ln(N/df)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relevance-sentinel", description="Classify short texts as relevant or irrelevant with single-cluster anomaly detectors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit a detector and save the model")
    p.add_argument("--train", required=True)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--coeff", type=_coeff, default=0.0, help="threshold coefficient (alpha for knn, beta for cblof)")
    p.add_argument("--out", required=True, help="model file to write")
    _add_prep_options(p)

    p = sub.add_parser("sweep", help="evaluate a detector over a grid of coefficients")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID, help="comma-separated coefficients")
    p.add_argument("--out", required=True, help="CSV file; a .txt table is written alongside")
    _add_prep_options(p)

    p = sub.add_parser("evaluate", help="score a labeled test set with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("classify", help="label unlabeled documents with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="compare the best rows of a knn and a cblof sweep")
    p.add_argument("--knn", required=True, help="knn sweep CSV")
    p.add_argument("--cblof", required=True, help="cblof sweep CSV")
    p.add_argument("--out", required=True, help="comparison CSV; a _long.csv is written alongside")
    return parser


def _prep_config(args) -> PreprocessConfig:
    return PreprocessConfig(
        stopwords=resolve_stopwords(args.stopwords),
        removed_keywords=args.keywords if args.keywords is not None else DEFAULT_KEYWORDS,
    )


def _write(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def cmd_fit(args) -> int:
    train = load_dataset(args.train)
    fitted = fit_pipeline(train, args.method, args.coeff, _prep_config(args), args.fit_on_all, args.smooth_idf)
    det = fitted.detector
    bundle = ModelBundle(fitted.preprocess, fitted.tfidf, det, make_metadata(args.train))
    save_model(bundle, args.out)
    n_rel, n_irr = train.counts
    n_empty = sum(1 for v in fitted.cluster if v.is_empty)
    print(f"method: {args.method}")
    print(f"training documents: {len(train)} ({n_rel} relevant, {n_irr} irrelevant)")
    print(f"cluster size: {len(fitted.cluster)} ({n_empty} empty after preprocessing)")
    print(f"vocabulary size: {fitted.tfidf.dim}")
    print(f"max training score: {_fmt(det.max_score)}")
    print(f"coefficient: {args.coeff}")
    print(f"threshold: {_fmt(det.threshold)}")
    if det.threshold == 0:
        print("warning: threshold is 0; every input with a nonzero score will be flagged", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    train = load_dataset(args.train)
    test = load_dataset(args.test)
    if not len(test):
        raise DatasetError("test set is empty", args.test)
    fitted = fit_pipeline(train, args.method, 0.0, _prep_config(args), args.fit_on_all, args.smooth_idf)
    vectors = vectorize(fitted.tfidf, fitted.preprocess, (d.text for d in test))
    scores = [score(fitted.detector, v) for v in vectors]
    table = sweep_scored(fitted.detector, scores, test.labels, args.grid)
    out = Path(args.out)
    _write(out, table_to_csv(table))
    _write(out.with_suffix(".txt"), table_to_text(table))
    sys.stdout.write(table_to_text(table))
    best = select_best(table)
    m = best.metrics
    print(
        f"best: coeff={best.coeff} threshold={_fmt(best.threshold)} accuracy={_fmt(m.accuracy)} "
        f"precision={_fmt(m.precision)} recall={_fmt(m.recall)} f1={_fmt(m.f1)}"
    )
    return EXIT_OK


def cmd_evaluate(args) -> int:
    bundle = load_model(args.model)
    test = load_dataset(args.test)
    if not len(test):
        raise DatasetError("test set is empty", args.test)
    verdicts = classify_texts(bundle, (d.text for d in test))
    cm = confusion([v.label for v in verdicts], test.labels)
    m = compute_metrics(cm)
    det = bundle.detector
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("coeff", "threshold", "accuracy", "precision", "recall", "f1", "tp", "fp", "fn", "tn"))
        w.writerow([repr(det.coeff), repr(det.threshold), repr(m.accuracy), repr(m.precision), repr(m.recall), repr(m.f1), cm.tp, cm.fp, cm.fn, cm.tn])
        text = buf.getvalue()
    else:
        text = (
            f"method: {det.method}\ncoefficient: {det.coeff}\nthreshold: {_fmt(det.threshold)}\n"
            f"accuracy: {_fmt(m.accuracy)}\nprecision: {_fmt(m.precision)}\nrecall: {_fmt(m.recall)}\nf1: {_fmt(m.f1)}\n"
            f"confusion (positive = relevant):\n"
            f"               pred 1  pred 0\n"
            f"  actual 1   {cm.tp:>7} {cm.fn:>7}\n"
            f"  actual 0   {cm.fp:>7} {cm.tn:>7}\n"
        )
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_classify(args) -> int:
    bundle = load_model(args.model)
    items = load_texts(args.input)
    verdicts = classify_texts(bundle, (t for _, t in items))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("id", "label", "score", "reason"))
    for (doc_id, _), v in zip(items, verdicts):
        w.writerow([doc_id, v.label, repr(v.score), v.reason])
    _write(args.out, buf.getvalue())
    n_empty = sum(1 for v in verdicts if v.reason == EMPTY_DOC)
    n_rel = sum(v.label for v in verdicts)
    print(f"classified {len(verdicts)} documents: {n_rel} relevant, {len(verdicts) - n_rel} irrelevant, {n_empty} empty")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        knn = read_sweep_csv(args.knn, "knn")
        cblof = read_sweep_csv(args.cblof, "cblof")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = compare_methods(select_best(knn), select_best(cblof))
    out = Path(args.out)
    _write(out, comparison_to_csv(report))
    _write(out.with_name(out.stem + "_long.csv"), comparison_to_long_csv(report))
    for method, row in (("knn", report.knn), ("cblof", report.cblof)):
        m = row.metrics
        print(f"{method:<6} coeff={row.coeff} accuracy={_fmt(m.accuracy)} precision={_fmt(m.precision)} recall={_fmt(m.recall)} f1={_fmt(m.f1)}")
    print("winners: " + ", ".join(f"{k}={v}" for k, v in report.winners.items()) + f"; overall={report.overall}")
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit,
    "sweep": cmd_sweep,
    "evaluate": cmd_evaluate,
    "classify": cmd_classify,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, ModelFormatError, EmptyClusterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
