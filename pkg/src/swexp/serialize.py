"""JSON documents for sources and metrics.

Source: ``{"pmf": [[...], ...], "labels_x": [...], "labels_y": [...]}``
Metric: ``{"q": [[...], ...]}``
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import NonFinite, RaggedInput, SWError
from .model import DecodingMetric, JointSource, hamming_metric, matched_metric, validate_source

__all__ = [
    "parse_matrix",
    "source_from_document",
    "metric_from_document",
    "load_source",
    "load_metric",
    "resolve_metric",
    "resolve_source",
    "EXAMPLE_PMF",
    "source_to_document",
    "format_float",
]


def parse_matrix(rows, name="matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise RaggedInput(f"{name} must be a nonempty list of rows")
    width = None
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise RaggedInput(f"{name} row {i} is not a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise RaggedInput(f"{name} row {i} has {len(row)} entries, expected {width}")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise NonFinite(f"{name} row {i} contains a non-numeric entry {v!r}")
    if width == 0:
        raise RaggedInput(f"{name} rows are empty")
    return np.array(rows, dtype=float)


def source_from_document(doc: dict) -> JointSource:
    if "pmf" not in doc:
        raise SWError("source document needs a 'pmf' key")
    pmf = parse_matrix(doc["pmf"], "pmf")
    return validate_source(pmf, doc.get("labels_x", ()), doc.get("labels_y", ()))


def metric_from_document(doc: dict) -> DecodingMetric:
    if "q" not in doc:
        raise SWError("metric document needs a 'q' key")
    return DecodingMetric(parse_matrix(doc["q"], "q"))


def _load_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SWError(f"{path}: line {exc.lineno}: {exc.msg}") from exc


def load_source(path) -> JointSource:
    return source_from_document(_load_json(path))


def load_metric(path) -> DecodingMetric:
    return metric_from_document(_load_json(path))


# 3x3 source with strongly informative side information, used as the
# built-in ``example`` source of the command-line tool
EXAMPLE_PMF = (
    (0.49, 0.005, 0.005),
    (0.015, 0.27, 0.015),
    (0.05, 0.05, 0.1),
)


def resolve_source(spec: str) -> JointSource:
    """``example`` for the built-in source, otherwise a JSON path."""
    if spec == "example":
        return validate_source(np.array(EXAMPLE_PMF))
    return load_source(spec)


def resolve_metric(spec: str, source: JointSource) -> DecodingMetric:
    """Turn ``matched``, ``hamming:DELTA`` or a JSON path into a metric."""
    if spec == "matched":
        return matched_metric(source)
    if spec.startswith("hamming:"):
        try:
            delta = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise SWError(f"bad hamming metric spec {spec!r}") from exc
        if source.x_size != source.y_size:
            raise SWError("hamming metric needs |X| = |Y|")
        return hamming_metric(source.x_size, delta)
    return load_metric(spec)


def source_to_document(source: JointSource) -> dict:
    doc = {"pmf": source.pmf.tolist()}
    if source.labels_x:
        doc["labels_x"] = list(source.labels_x)
    if source.labels_y:
        doc["labels_y"] = list(source.labels_y)
    return doc


def format_float(v: float) -> str:
    """12 significant digits; infinities spelled ``inf``/``-inf``."""
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"
