"""File formats: metric matrix documents, certificates, structured reports.

All rationals are serialized as lowest-terms strings ("p/q", or "n" for
integers); JSON objects are emitted with sorted keys so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import json
from typing import Optional, Tuple

from .core import FiniteMetricSpace, ValidationReport, format_rational, rational, validate_metric
from .errors import ShapeError
from .globalization import GlobalizationCertificate

MATRIX_FORMAT = "metric-matrix/1"
CERTIFICATE_FORMAT = "globalization-certificate/1"
VERSION = "0.1.0"


class DocumentError(ValueError):
    """Structural problem with a document (not a metric-axiom failure)."""


def space_to_document(space: FiniteMetricSpace) -> dict:
    return {
        "format": MATRIX_FORMAT,
        "points": list(space.points),
        "matrix": [[format_rational(v) for v in row] for row in space.dist],
    }


def document_to_space(doc: dict) -> Tuple[Optional[FiniteMetricSpace], ValidationReport]:
    """Parse a matrix document; returns (space or None, validation report)."""
    if not isinstance(doc, dict) or doc.get("format") != MATRIX_FORMAT:
        raise DocumentError(f"expected a {MATRIX_FORMAT} document")
    points = doc.get("points")
    matrix = doc.get("matrix")
    if not isinstance(points, list) or not isinstance(matrix, list):
        raise DocumentError("document needs 'points' and 'matrix' lists")
    if len(points) != len(matrix):
        raise DocumentError("point list and matrix size differ")
    try:
        rows = [[rational(v) for v in row] for row in matrix]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise DocumentError(f"unparseable matrix entry: {exc}") from exc
    try:
        report = validate_metric(rows)
    except ShapeError as exc:
        raise DocumentError(str(exc)) from exc
    if not report.valid:
        return None, report
    space = FiniteMetricSpace(
        points=tuple(points), dist=tuple(tuple(row) for row in rows)
    )
    return space, report


def certificate_to_document(cert: GlobalizationCertificate) -> dict:
    return {
        "format": CERTIFICATE_FORMAT,
        "space": space_to_document(cert.space),
        "host": space_to_document(cert.host),
        "embedding": list(cert.embedding),
        "table": [
            {"mapping": [[s, t] for s, t in mapping], "perm": list(perm)}
            for mapping, perm in cert.table
        ],
    }


def document_to_certificate(doc: dict) -> GlobalizationCertificate:
    if not isinstance(doc, dict) or doc.get("format") != CERTIFICATE_FORMAT:
        raise DocumentError(f"expected a {CERTIFICATE_FORMAT} document")
    space, rep = document_to_space(doc["space"])
    if space is None:
        raise DocumentError("certificate space is not a metric:\n" + rep.render())
    host, rep = document_to_space(doc["host"])
    if host is None:
        raise DocumentError("certificate host is not a metric:\n" + rep.render())
    try:
        embedding = tuple(int(i) for i in doc["embedding"])
        table = tuple(
            (
                tuple((int(s), int(t)) for s, t in entry["mapping"]),
                tuple(int(i) for i in entry["perm"]),
            )
            for entry in doc["table"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed certificate field: {exc}") from exc
    return GlobalizationCertificate(
        space=space, host=host, embedding=embedding, table=table
    )


def dumps(obj: dict) -> str:
    """Canonical JSON form: sorted keys, stable separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc


def load_path(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def report(command: str, parameters: dict, seed: Optional[int], body: dict) -> dict:
    """Structured report wrapper with provenance."""
    return {
        "provenance": {
            "command": command,
            "parameters": parameters,
            "seed": seed,
            "version": VERSION,
        },
        "result": body,
    }
