"""CSV and JSON encodings for sequences, grids and dB maps.

Every CSV starts with ``# config-sha256: <hex>`` followed by a header row.
Floats are written with ``repr`` so a read/write cycle is lossless.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

SEQUENCE_HEADER = ("n", "re", "im")
GRID_HEADER = ("n", "k", "re", "im")
DB_HEADER = ("n", "k", "db")


class CsvFormatError(ValueError):
    pass


def config_hash(config) -> str:
    """SHA-256 of the canonical JSON encoding of ``config``."""
    text = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _fmt(v) -> str:
    return repr(float(v))


def _render(header, rows, digest: str) -> str:
    buf = io.StringIO()
    buf.write(f"# config-sha256: {digest}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def sequence_csv(x, digest: str) -> str:
    x = np.asarray(x, dtype=complex)
    return _render(SEQUENCE_HEADER, ((n, _fmt(v.real), _fmt(v.imag)) for n, v in enumerate(x)), digest)


def grid_csv(Z, digest: str, header=GRID_HEADER) -> str:
    Z = np.asarray(Z, dtype=complex)
    rows = ((i, j, _fmt(Z[i, j].real), _fmt(Z[i, j].imag)) for i in range(Z.shape[0]) for j in range(Z.shape[1]))
    return _render(header, rows, digest)


def db_csv(M, digest: str, k_labels=None, header=DB_HEADER) -> str:
    """Real matrix rows ``(n, k, value)``; ``k_labels`` relabels the column index."""
    M = np.asarray(M, dtype=float)
    labels = range(M.shape[1]) if k_labels is None else [int(k) for k in k_labels]
    rows = ((i, k, _fmt(M[i, j])) for i in range(M.shape[0]) for j, k in enumerate(labels))
    return _render(header, rows, digest)


def _read_rows(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise CsvFormatError("empty CSV")
    reader = csv.reader(lines)
    header = tuple(h.strip() for h in next(reader))
    try:
        rows = [tuple(float(c) for c in row) for row in reader]
    except ValueError as exc:
        raise CsvFormatError(f"non-numeric cell: {exc}") from None
    if any(len(r) != len(header) for r in rows):
        raise CsvFormatError("ragged CSV rows")
    return header, rows


def _index(v: float, what: str) -> int:
    if v != int(v) or v < 0:
        raise CsvFormatError(f"{what} index {v} is not a nonnegative integer")
    return int(v)


def read_sequence(text: str) -> np.ndarray:
    header, rows = _read_rows(text)
    if header != SEQUENCE_HEADER:
        raise CsvFormatError(f"expected header {','.join(SEQUENCE_HEADER)}, got {','.join(header)}")
    idx = [_index(r[0], "n") for r in rows]
    if sorted(idx) != list(range(len(rows))):
        raise CsvFormatError("sequence indices must be 0..N-1, each once")
    x = np.empty(len(rows), dtype=complex)
    for i, (_, re, im) in zip(idx, rows):
        x[i] = complex(re, im)
    return x


def read_grid(text: str) -> np.ndarray:
    """Parse any two-index complex table; the first two columns are the row and column index."""
    header, rows = _read_rows(text)
    if len(header) != 4 or header[2:] != ("re", "im"):
        raise CsvFormatError(f"expected header <i>,<j>,re,im, got {','.join(header)}")
    ij = [(_index(r[0], header[0]), _index(r[1], header[1])) for r in rows]
    if not ij:
        raise CsvFormatError("empty grid")
    shape = (max(i for i, _ in ij) + 1, max(j for _, j in ij) + 1)
    if len(set(ij)) != len(ij) or len(ij) != shape[0] * shape[1]:
        raise CsvFormatError("grid cells missing or duplicated")
    Z = np.empty(shape, dtype=complex)
    for (i, j), r in zip(ij, rows):
        Z[i, j] = complex(r[2], r[3])
    return Z


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def write_json(path: Path, obj) -> Path:
    return write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")
