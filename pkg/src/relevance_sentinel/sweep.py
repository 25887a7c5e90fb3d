"""Threshold-coefficient sweeps and method comparison.

A detector's training statistics do not depend on the coefficient, so each
sweep fits once, scores every test point once, and then only re-applies the
threshold rule per grid value.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .detector import DetectorModel, compute_threshold, fit_detector, is_outlier, score
from .metrics import METRIC_NAMES, ConfusionMatrix, MetricsReport, compute_metrics, confusion
from .vectorizer import FeatureVector

DEFAULT_GRID = (0.001, 0.005, 0.01, 0.05, -0.001, -0.005, -0.01, -0.05)
CSV_COLUMNS = ("coeff", "threshold", "accuracy", "precision", "recall", "f1")
METHODS = ("knn", "cblof")
TIE = "tie"


@dataclass(frozen=True)
class SweepRow:
    coeff: float
    threshold: float
    metrics: MetricsReport
    confusion: ConfusionMatrix | None = None


@dataclass(frozen=True)
class SweepTable:
    method: str
    rows: tuple[SweepRow, ...]
    max_score: float | None = None

    @property
    def grid(self) -> tuple[float, ...]:
        return tuple(r.coeff for r in self.rows)


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse a comma-separated list of coefficients."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("grid is empty")
    try:
        grid = tuple(float(p) for p in parts)
    except ValueError:
        raise ValueError(f"grid values must be numbers: {text!r}") from None
    _check_grid(grid)
    return grid


def _check_grid(grid: Sequence[float]) -> None:
    if not grid:
        raise ValueError("grid is empty")
    bad = [c for c in grid if not c > -1]
    if bad:
        raise ValueError(f"grid values must be > -1: {bad}")


def evaluate_at(scores: Sequence[float], labels: Sequence[int], max_score: float, coeff: float) -> SweepRow:
    """Apply the threshold for ``coeff`` to precomputed scores."""
    threshold = compute_threshold(max_score, coeff)
    preds = [0 if is_outlier(s, threshold) else 1 for s in scores]
    cm = confusion(preds, labels)
    return SweepRow(coeff, threshold, compute_metrics(cm), cm)


def sweep_scored(
    model: DetectorModel, scores: Sequence[float], labels: Sequence[int], grid: Sequence[float] = DEFAULT_GRID
) -> SweepTable:
    _check_grid(grid)
    rows = tuple(evaluate_at(scores, labels, model.max_score, c) for c in grid)
    return SweepTable(model.method, rows, model.max_score)


def run_sweep(
    cluster: Sequence[FeatureVector],
    test: Sequence[tuple[FeatureVector, int]],
    method: str,
    grid: Sequence[float] = DEFAULT_GRID,
) -> SweepTable:
    """Evaluate ``method`` on ``test`` for every coefficient in ``grid``.

    Rows come back in grid order.
    """
    _check_grid(grid)
    if not test:
        raise ValueError("test set is empty")
    model = fit_detector(method, cluster, 0.0)
    scores = [score(model, x) for x, _ in test]
    labels = [y for _, y in test]
    return sweep_scored(model, scores, labels, grid)


def select_best(table: SweepTable) -> SweepRow:
    """Highest accuracy; ties go to higher F1, then to the smaller ``|coeff|``."""
    if not table.rows:
        raise ValueError("sweep table is empty")
    best = table.rows[0]
    for row in table.rows[1:]:
        a = (row.metrics.accuracy, row.metrics.f1, -abs(row.coeff))
        b = (best.metrics.accuracy, best.metrics.f1, -abs(best.coeff))
        if a > b:
            best = row
    return best


@dataclass(frozen=True)
class ComparisonReport:
    knn: SweepRow
    cblof: SweepRow
    winners: dict[str, str]
    overall: str


def compare_methods(knn_best: SweepRow, cblof_best: SweepRow) -> ComparisonReport:
    """Per-metric winners and an overall winner (most metric wins, then F1)."""
    winners = {}
    tally = {"knn": 0, "cblof": 0}
    for name in METRIC_NAMES:
        k, c = getattr(knn_best.metrics, name), getattr(cblof_best.metrics, name)
        if k > c:
            winners[name] = "knn"
        elif c > k:
            winners[name] = "cblof"
        else:
            winners[name] = TIE
        if winners[name] != TIE:
            tally[winners[name]] += 1
    if tally["knn"] != tally["cblof"]:
        overall = "knn" if tally["knn"] > tally["cblof"] else "cblof"
    else:
        overall = winners["f1"]
    return ComparisonReport(knn_best, cblof_best, winners, overall)


# -- serialization ---------------------------------------------------------


def table_to_csv(table: SweepTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in table.rows:
        m = r.metrics
        w.writerow([repr(r.coeff), repr(r.threshold), repr(m.accuracy), repr(m.precision), repr(m.recall), repr(m.f1)])
    return buf.getvalue()


def table_to_text(table: SweepTable) -> str:
    """Aligned plain-text rendering with six decimals."""
    sym = "alpha" if table.method == "knn" else "beta"
    header = (sym, "Threshold", "Accuracy", "Precision", "Recall", "F1-Score")
    lines = [f"{table.method.upper()} performance with varying {sym} values"]
    lines.append("  ".join(f"{h:>10}" for h in header))
    for r in table.rows:
        m = r.metrics
        vals = [f"{r.coeff:.3f}", *(f"{v:.6f}" for v in (r.threshold, m.accuracy, m.precision, m.recall, m.f1))]
        lines.append("  ".join(f"{v:>10}" for v in vals))
    return "\n".join(lines) + "\n"


def read_sweep_csv(path: str | Path, method: str) -> SweepTable:
    """Read a table written by :func:`table_to_csv`.

    Raises ``ValueError`` naming the file on any schema problem.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise ValueError(f"{path}: expected header {','.join(CSV_COLUMNS)}")
            rows = []
            for rec in reader:
                try:
                    vals = {k: float(rec[k]) for k in CSV_COLUMNS}
                except (TypeError, ValueError):
                    raise ValueError(f"{path}:{reader.line_num}: non-numeric or missing value") from None
                rows.append(
                    SweepRow(
                        vals["coeff"],
                        vals["threshold"],
                        MetricsReport(vals["accuracy"], vals["precision"], vals["recall"], vals["f1"]),
                    )
                )
    except OSError as exc:
        raise ValueError(f"{path}: cannot read ({exc.strerror})") from None
    if not rows:
        raise ValueError(f"{path}: no rows")
    return SweepTable(method, tuple(rows))


def comparison_to_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("method", "coeff", *METRIC_NAMES, "overall"))
    for method, row in (("knn", report.knn), ("cblof", report.cblof)):
        w.writerow([method, repr(row.coeff), *(repr(getattr(row.metrics, n)) for n in METRIC_NAMES), ""])
    w.writerow(["winner", "", *(report.winners[n] for n in METRIC_NAMES), report.overall])
    return buf.getvalue()


def comparison_to_long_csv(report: ComparisonReport) -> str:
    """One ``method,metric,value`` row per method and metric, for charting."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("method", "metric", "value"))
    for method, row in (("knn", report.knn), ("cblof", report.cblof)):
        for n in METRIC_NAMES:
            w.writerow([method, n, repr(getattr(row.metrics, n))])
    return buf.getvalue()
