"""Dataset ingestion, synthetic generators, and report serialization.

CSV conventions: comma-separated UTF-8 with decimal points, an optional
single header row (auto-detected: a non-numeric first row is a header), and
at most one label column selected by name. Rows with missing numeric cells
("", "?", "NA", "N/A", "NaN") are dropped and the count is logged; any other
non-numeric cell is a parse error naming the line.

Report files carry ``schema_version: "1"``. JSON uses sorted keys and CSV
flattens the metric values one row per value; floats are written with
``repr`` so round trips are lossless. Serialization is deterministic:
identical documents produce identical bytes (provenance timestamps default
to the empty string for exactly this reason).
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .core import DataMatrix, EmbeddingMatrix
from .errors import InvalidData, ParseError
from .rng import Xoshiro256StarStar

__all__ = [
    "SYNTHETIC_KINDS",
    "DatasetSpec",
    "MetricRecord",
    "TallyRecord",
    "Provenance",
    "ReportDocument",
    "load_csv_matrix",
    "load_embedding_csv",
    "write_embedding_csv",
    "generate_synthetic",
    "normalize_columns",
    "load_dataset",
    "write_report",
    "read_report",
    "config_hash",
]

log = logging.getLogger(__name__)

SYNTHETIC_KINDS = ("s_curve", "swiss_roll")

_MISSING_MARKERS = {"", "?", "NA", "N/A", "NaN", "nan"}


def _try_float(token: str) -> Optional[float]:
    try:
        return float(token)
    except ValueError:
        return None


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)]
    rows = [row for row in rows if row]  # ignore blank lines
    if not rows:
        raise ParseError(f"{path}: file contains no rows")
    return rows


def _parse_numeric_table(path, label_column: Optional[str]):
    """Shared CSV body parser; returns (values, labels, dropped_count)."""
    rows = _read_rows(path)
    stripped_first = [c.strip() for c in rows[0]]
    has_header = any(
        _try_float(c) is None and c not in _MISSING_MARKERS for c in stripped_first
    )
    header = stripped_first if has_header else None
    data_rows = rows[1:] if has_header else rows
    first_line = 2 if has_header else 1
    n_cols = len(rows[0])

    label_idx = None
    if label_column is not None:
        if header is None:
            raise ParseError(f"{path}: label column {label_column!r} requires a header row")
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise ParseError(f"{path}: no column named {label_column!r}") from None

    values: list[list[float]] = []
    labels: list[str] = []
    dropped = 0
    for offset, row in enumerate(data_rows):
        line = first_line + offset
        if len(row) != n_cols:
            raise ParseError(f"{path}: line {line}: expected {n_cols} columns, got {len(row)}")
        numeric: list[float] = []
        missing = False
        for j, cell in enumerate(row):
            if j == label_idx:
                continue
            token = cell.strip()
            if token in _MISSING_MARKERS:
                missing = True
                break
            parsed = _try_float(token)
            if parsed is None:
                raise ParseError(f"{path}: line {line}, column {j + 1}: not numeric: {cell!r}")
            if not math.isfinite(parsed):
                raise ParseError(f"{path}: line {line}, column {j + 1}: non-finite value")
            numeric.append(parsed)
        if missing:
            dropped += 1
            continue
        values.append(numeric)
        if label_idx is not None:
            labels.append(row[label_idx].strip())
    if dropped:
        log.warning("%s: dropped %d row(s) with missing values", path, dropped)
    if not values:
        raise ParseError(f"{path}: no usable data rows")
    return np.asarray(values, dtype=float), (labels if label_idx is not None else None)


def load_csv_matrix(path, label_column: Optional[str] = None):
    """Load a numeric CSV as a DataMatrix, splitting out an optional label column.

    Returns ``(matrix, labels)`` where ``labels`` is None unless
    ``label_column`` was given.
    """
    values, labels = _parse_numeric_table(path, label_column)
    return DataMatrix(values=values), labels


def load_embedding_csv(path) -> EmbeddingMatrix:
    """Load an N x t numeric CSV as an embedding (header auto-skipped)."""
    values, _ = _parse_numeric_table(path, None)
    return EmbeddingMatrix(values=values)


def write_embedding_csv(path, embedding: EmbeddingMatrix) -> None:
    """Write an embedding as plain numeric CSV, full float precision, no header."""
    lines = [",".join(repr(v) for v in row) for row in embedding.values.tolist()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def generate_synthetic(kind: str, n: int, noise: float = 0.0, seed: int = 0) -> DataMatrix:
    """Seeded 3-d manifold samples: an S-shaped curve sheet or a swiss roll.

    s_curve: t uniform on [-3pi/2, 3pi/2], point (sin t, 2u, sign(t)(cos t - 1)).
    swiss_roll: t uniform on [1.5pi, 4.5pi], point (t cos t, u, t sin t) with
    u uniform on [0, 21]. Gaussian noise of the given scale is added to every
    coordinate. Draw order (for cross-platform reproducibility): all n values
    of t, then all n of u, then the noise matrix row by row.
    """
    if n < 10:
        raise InvalidData(f"synthetic datasets need n >= 10, got {n}")
    if noise < 0 or not math.isfinite(noise):
        raise InvalidData("noise scale must be finite and non-negative")
    rng = Xoshiro256StarStar(seed)
    if kind == "s_curve":
        t = rng.uniforms(n, -1.5 * math.pi, 1.5 * math.pi)
        u = rng.uniforms(n)
        points = np.column_stack([np.sin(t), 2.0 * u, np.sign(t) * (np.cos(t) - 1.0)])
    elif kind == "swiss_roll":
        t = rng.uniforms(n, 1.5 * math.pi, 4.5 * math.pi)
        u = rng.uniforms(n, 0.0, 21.0)
        points = np.column_stack([t * np.cos(t), u, t * np.sin(t)])
    else:
        raise InvalidData(f"unknown synthetic kind {kind!r}; choose from {SYNTHETIC_KINDS}")
    if noise > 0.0:
        points = points + rng.normal_matrix(n, 3, scale=noise)
    return DataMatrix(values=points)


def normalize_columns(values, mode: str = "none") -> np.ndarray:
    """Per-column rescaling: none, minmax to [0, 1], or zscore. Constant columns map to 0."""
    v = np.asarray(values, dtype=float)
    if mode == "none":
        return v.copy()
    if mode == "minmax":
        lo = v.min(axis=0)
        span = v.max(axis=0) - lo
        return (v - lo) / np.where(span > 0.0, span, 1.0)
    if mode == "zscore":
        sd = v.std(axis=0)
        return (v - v.mean(axis=0)) / np.where(sd > 0.0, sd, 1.0)
    raise InvalidData(f"unknown normalize mode {mode!r}")


@dataclass(frozen=True)
class DatasetSpec:
    """Where a dataset comes from and how to prepare it."""

    source: str  # CSV path, or a synthetic kind name
    n_points: int = 150
    noise: float = 0.0
    seed: int = 0
    label_column: Optional[str] = None
    normalize: str = "none"

    @property
    def is_synthetic(self) -> bool:
        return self.source in SYNTHETIC_KINDS

    @property
    def name(self) -> str:
        return self.source if self.is_synthetic else Path(self.source).stem


def load_dataset(spec: DatasetSpec):
    """Resolve a DatasetSpec to ``(name, DataMatrix, labels)`` with normalization applied."""
    if spec.is_synthetic:
        matrix = generate_synthetic(spec.source, spec.n_points, spec.noise, spec.seed)
        labels = None
    else:
        matrix, labels = load_csv_matrix(spec.source, spec.label_column)
    if spec.normalize != "none":
        matrix = DataMatrix(values=normalize_columns(matrix.values, spec.normalize))
    return spec.name, matrix, labels


@dataclass(frozen=True)
class MetricRecord:
    """One metric value: which dataset, technique, scale, and metric produced it."""

    dataset: str
    technique: str
    scale: float
    metric: str
    value: float


@dataclass(frozen=True)
class TallyRecord:
    """Serialized ordering tally for one (metric, scale) cell."""

    metric: str
    scale: float
    total: int
    counts: dict  # ordering string ("a<b<c") -> trial count


@dataclass(frozen=True)
class Provenance:
    seed: int = 0
    config_hash: str = ""
    timestamp: str = ""  # left empty by default so reruns are byte-identical


@dataclass
class ReportDocument:
    schema_version: str = "1"
    metrics: list = field(default_factory=list)
    tallies: list = field(default_factory=list)
    agreement: Optional[dict] = None  # {"metrics": [...], "matrix": [[...]]}
    provenance: Provenance = field(default_factory=Provenance)


def config_hash(obj) -> str:
    """Stable hash of any JSON-serializable configuration."""
    blob = json.dumps(obj, sort_keys=True, default=str).encode("utf-8")
    return hashlib.blake2b(blob, digest_size=16).hexdigest()


def _doc_to_dict(doc: ReportDocument) -> dict:
    return {
        "schema_version": doc.schema_version,
        "metrics": [
            {
                "dataset": r.dataset,
                "technique": r.technique,
                "scale": r.scale,
                "metric": r.metric,
                "value": r.value,
            }
            for r in doc.metrics
        ],
        "tallies": [
            {
                "metric": t.metric,
                "scale": t.scale,
                "total": t.total,
                "counts": dict(sorted(t.counts.items())),
            }
            for t in doc.tallies
        ],
        "agreement": doc.agreement,
        "provenance": {
            "seed": doc.provenance.seed,
            "config_hash": doc.provenance.config_hash,
            "timestamp": doc.provenance.timestamp,
        },
    }


def _doc_from_dict(payload: dict) -> ReportDocument:
    prov = payload.get("provenance", {})
    return ReportDocument(
        schema_version=payload.get("schema_version", "1"),
        metrics=[MetricRecord(**row) for row in payload.get("metrics", [])],
        tallies=[TallyRecord(**row) for row in payload.get("tallies", [])],
        agreement=payload.get("agreement"),
        provenance=Provenance(
            seed=prov.get("seed", 0),
            config_hash=prov.get("config_hash", ""),
            timestamp=prov.get("timestamp", ""),
        ),
    )


def _resolve_format(path, fmt: Optional[str]) -> str:
    if fmt is not None:
        return fmt
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix in ("json", "csv"):
        return suffix
    raise InvalidData(f"cannot infer report format from {path!r}; pass format explicitly")


def write_report(doc: ReportDocument, path, fmt: Optional[str] = None) -> None:
    """Serialize a report as JSON (full document) or CSV (metric rows only)."""
    fmt = _resolve_format(path, fmt)
    if fmt == "json":
        text = json.dumps(_doc_to_dict(doc), sort_keys=True, indent=2) + "\n"
    else:
        lines = ["dataset,technique,scale,metric,value"]
        for r in doc.metrics:
            lines.append(f"{r.dataset},{r.technique},{repr(r.scale)},{r.metric},{repr(r.value)}")
        text = "\n".join(lines) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def read_report(path, fmt: Optional[str] = None) -> ReportDocument:
    """Load a report; the CSV form restores the metric rows only."""
    fmt = _resolve_format(path, fmt)
    if fmt == "json":
        return _doc_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    doc = ReportDocument()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            doc.metrics.append(
                MetricRecord(
                    dataset=row["dataset"],
                    technique=row["technique"],
                    scale=float(row["scale"]),
                    metric=row["metric"],
                    value=float(row["value"]),
                )
            )
    return doc
