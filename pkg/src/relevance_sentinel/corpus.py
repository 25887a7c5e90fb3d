"""Loading labeled document collections from CSV or JSONL files."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

FORMATS = ("csv", "jsonl")
REQUIRED_FIELDS = ("id", "text", "label")


class DatasetError(ValueError):
    """Raised when a dataset file is missing, unreadable or malformed."""

    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None):
        self.path = None if path is None else str(path)
        self.line = line
        where = ""
        if self.path is not None:
            where = self.path if line is None else f"{self.path}:{line}"
            where += ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class LabeledDocument:
    id: str
    text: str
    label: int

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        if self.label not in (0, 1) or isinstance(self.label, bool):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class Dataset:
    """An ordered, immutable collection of labeled documents."""

    documents: tuple[LabeledDocument, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[LabeledDocument]:
        return iter(self.documents)

    @property
    def counts(self) -> tuple[int, int]:
        """``(n_relevant, n_irrelevant)``."""
        n_rel = sum(1 for d in self.documents if d.label == 1)
        return n_rel, len(self.documents) - n_rel

    @property
    def labels(self) -> list[int]:
        return [d.label for d in self.documents]


def _infer_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in FORMATS:
            raise DatasetError(f"unknown format {fmt!r}; expected one of {FORMATS}", path)
        return fmt
    suffix = path.suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".jsonl", ".ndjson"):
        return "jsonl"
    raise DatasetError(f"cannot infer format from suffix {suffix!r}; pass format explicitly", path)


def _read_csv(path: Path, fields: tuple[str, ...]) -> Iterator[tuple[int, dict]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [f for f in fields if f not in header]
        if missing:
            raise DatasetError(f"header is missing column(s) {', '.join(missing)}", path, 1)
        for row in reader:
            if None in row or any(row[f] is None for f in fields):
                raise DatasetError("wrong number of columns", path, reader.line_num)
            yield reader.line_num, row


def _read_jsonl(path: Path, fields: tuple[str, ...]) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"invalid JSON ({exc.msg})", path, lineno) from None
            if not isinstance(obj, dict):
                raise DatasetError("record is not a JSON object", path, lineno)
            missing = [f for f in fields if f not in obj]
            if missing:
                raise DatasetError(f"record is missing field(s) {', '.join(missing)}", path, lineno)
            yield lineno, obj


def _records(path: str | Path, fmt: str | None, fields: tuple[str, ...]):
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if not path.is_file():
        raise DatasetError("file not found", path)
    reader = _read_csv if fmt == "csv" else _read_jsonl
    try:
        yield from reader(path, fields)
    except UnicodeDecodeError as exc:
        raise DatasetError(f"not valid UTF-8 ({exc.reason})", path) from None
    except csv.Error as exc:
        raise DatasetError(f"CSV parse error ({exc})", path) from None
    except OSError as exc:
        raise DatasetError(f"cannot read file ({exc.strerror})", path) from None


def _parse_id_text(rec: dict, path: Path, lineno: int) -> tuple[str, str]:
    doc_id, text = rec["id"], rec["text"]
    if isinstance(doc_id, int) and not isinstance(doc_id, bool):
        doc_id = str(doc_id)
    if not isinstance(doc_id, str) or not doc_id.strip():
        raise DatasetError("id must be a non-empty string", path, lineno)
    if not isinstance(text, str):
        raise DatasetError("text must be a string", path, lineno)
    return doc_id.strip(), text


def _parse_label(raw, path: Path, lineno: int) -> int:
    if isinstance(raw, str):
        raw = raw.strip()
        if raw in ("0", "1"):
            return int(raw)
    elif isinstance(raw, int) and not isinstance(raw, bool) and raw in (0, 1):
        return raw
    raise DatasetError(f"label must be 0 or 1, got {raw!r}", path, lineno)


def load_dataset(path: str | Path, format: str | None = None) -> Dataset:
    """Load a labeled dataset.

    Parameters
    ----------
    path : str or Path
        CSV file with header ``id,text,label`` or JSONL file with one
        ``{"id": ..., "text": ..., "label": 0|1}`` object per line.
    format : {"csv", "jsonl"}, optional
        Inferred from the file suffix when omitted.

    Raises
    ------
    DatasetError
        On a missing file, a malformed record, a label outside {0, 1} or a
        duplicate id. The message names the offending line.
    """
    path = Path(path)
    docs = []
    seen: dict[str, int] = {}
    for lineno, rec in _records(path, format, REQUIRED_FIELDS):
        doc_id, text = _parse_id_text(rec, path, lineno)
        label = _parse_label(rec["label"], path, lineno)
        if doc_id in seen:
            raise DatasetError(f"duplicate id {doc_id!r} (first seen on line {seen[doc_id]})", path, lineno)
        seen[doc_id] = lineno
        docs.append(LabeledDocument(doc_id, text, label))
    return Dataset(tuple(docs))


def load_texts(path: str | Path, format: str | None = None) -> list[tuple[str, str]]:
    """Load ``(id, text)`` pairs from an unlabeled input file.

    A ``label`` column, if present, is ignored.
    """
    path = Path(path)
    out = []
    seen: set[str] = set()
    for lineno, rec in _records(path, format, ("id", "text")):
        doc_id, text = _parse_id_text(rec, path, lineno)
        if doc_id in seen:
            raise DatasetError(f"duplicate id {doc_id!r}", path, lineno)
        seen.add(doc_id)
        out.append((doc_id, text))
    return out


def extract_relevant_cluster(dataset: Dataset) -> Dataset:
    """Return the label-1 documents of ``dataset`` in their original order."""
    return Dataset(tuple(d for d in dataset.documents if d.label == 1))
