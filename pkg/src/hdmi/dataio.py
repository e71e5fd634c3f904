"""Column-addressable dataset access and the on-disk formats.

CSV ingestion is strict (header required, numeric cells or NA tokens,
rectangular rows). The binary matrix format stores float64 little-endian
values column-major behind a fixed header, so a memory-mapped handle can
serve single columns without loading the payload. NaN encodes missingness
in both formats.
"""

import csv
import json
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError

MAGIC = b"HDMI"
VERSION = 1
_HEADER_FMT = "<4sIQQQ"  # magic, version, rows, cols, name-table length
_HEADER_SIZE = struct.calcsize(_HEADER_FMT)

DEFAULT_NA_TOKENS = ("", "NA", "NaN", "nan", "null")


@dataclass(frozen=True)
class BinaryMatrixHeader:
    rows: int
    cols: int
    name_table_bytes: int

    @property
    def payload_bytes(self):
        return self.rows * self.cols * 8


class DatasetHandle:
    """Read-only column-addressable numeric matrix.

    Columns are served as float64 views of the column-major backing store
    (in-memory array or file mapping); no column copies are made.
    """

    def __init__(self, data, column_names, backing, index=None):
        self._data = data
        self.column_names = list(column_names)
        self.backing = backing
        self._index = index
        if len(set(self.column_names)) != len(self.column_names):
            raise DataFormatError("duplicate column names")

    @property
    def rows(self):
        return self._data.shape[0]

    @property
    def cols(self):
        return len(self.column_names)

    @classmethod
    def from_matrix(cls, matrix, column_names=None):
        m = np.asarray(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise DataFormatError("matrix must be 2D and non-empty")
        if column_names is None:
            column_names = [f"x{j}" for j in range(m.shape[1])]
        return cls(np.asfortranarray(m), column_names, "in-memory")

    def column_index(self, ref):
        if isinstance(ref, str):
            try:
                return self.column_names.index(ref)
            except ValueError:
                raise DataFormatError(f"no column named {ref!r}") from None
        j = int(ref)
        if not 0 <= j < self.cols:
            raise DataFormatError(f"column index {j} out of range")
        return j

    def column(self, j):
        if self._index is not None:
            j = self._index[j]
        return self._data[:, j]

    def select(self, indices):
        """Cheap view over a subset of columns (no data copied)."""
        local = [self.column_index(i) for i in indices]
        names = [self.column_names[j] for j in local]
        if self._index is not None:
            physical = self._index[np.asarray(local, dtype=np.int64)]
        else:
            physical = np.asarray(local, dtype=np.int64)
        return DatasetHandle(self._data, names, self.backing, physical)


def read_csv(path, delimiter=",", na_tokens=DEFAULT_NA_TOKENS):
    """Parse a headered numeric CSV into an in-memory column-major dataset."""
    na = set(na_tokens)
    values = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        names = [h.strip() for h in header]
        if len(set(names)) != len(names):
            raise DataFormatError(f"{path}: duplicate header names")
        width = len(names)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise DataFormatError(
                    f"{path}: line {lineno}: expected {width} fields, got {len(row)}")
            out = np.empty(width)
            for i, cell in enumerate(row):
                cell = cell.strip()
                if cell in na:
                    out[i] = np.nan
                    continue
                try:
                    out[i] = float(cell)
                except ValueError:
                    raise DataFormatError(
                        f"{path}: line {lineno}: non-numeric cell {cell!r}") from None
            values.append(out)
    if not values:
        raise DataFormatError(f"{path}: no data rows")
    matrix = np.asfortranarray(np.vstack(values))
    return DatasetHandle(matrix, names, "in-memory")


def write_binary(matrix, column_names, path):
    """Write a (rows, cols) float64 matrix in the binary matrix format."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise DataFormatError("matrix must be 2D")
    names = list(column_names)
    if len(names) != m.shape[1]:
        raise DataFormatError("one name per column required")
    name_blob = "\n".join(names).encode("utf-8")
    header = struct.pack(_HEADER_FMT, MAGIC, VERSION, m.shape[0], m.shape[1],
                         len(name_blob))
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(name_blob)
        fh.write(np.asfortranarray(m).astype("<f8", copy=False).tobytes(order="F"))
    return BinaryMatrixHeader(m.shape[0], m.shape[1], len(name_blob))


def convert_to_binary(csv_path, out_path, delimiter=",",
                      na_tokens=DEFAULT_NA_TOKENS):
    """CSV to binary matrix conversion; returns the written header summary."""
    handle = read_csv(csv_path, delimiter, na_tokens)
    return write_binary(handle._data, handle.column_names, out_path)


def _read_header(fh, path):
    blob = fh.read(_HEADER_SIZE)
    if len(blob) < _HEADER_SIZE:
        raise DataFormatError(f"{path}: truncated header")
    magic, version, rows, cols, name_len = struct.unpack(_HEADER_FMT, blob)
    if magic != MAGIC:
        raise DataFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise DataFormatError(f"{path}: unsupported version {version}")
    if rows < 1 or cols < 1:
        raise DataFormatError(f"{path}: empty matrix")
    name_blob = fh.read(name_len)
    if len(name_blob) < name_len:
        raise DataFormatError(f"{path}: truncated name table")
    names = name_blob.decode("utf-8").split("\n")
    if len(names) != cols:
        raise DataFormatError(
            f"{path}: name table holds {len(names)} names for {cols} columns")
    return BinaryMatrixHeader(rows, cols, name_len), names


def open_binary(path):
    """Memory-map a binary matrix file as a DatasetHandle (no payload load)."""
    import os
    with open(path, "rb") as fh:
        header, names = _read_header(fh, path)
        offset = fh.tell()
    expected = offset + header.payload_bytes
    actual = os.path.getsize(path)
    if actual != expected:
        raise DataFormatError(
            f"{path}: payload size {actual - offset} != rows*cols*8 "
            f"({header.payload_bytes})")
    data = np.memmap(path, dtype="<f8", mode="r", offset=offset,
                     shape=(header.rows, header.cols), order="F")
    return DatasetHandle(data, names, "file-mapped")


# ---------------------------------------------------------------------------
# report serialization (formats owned here; see the screening module for the
# report structure)
# ---------------------------------------------------------------------------

def _fmt(v):
    return repr(float(v))


def write_report_csv(report, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "name", "score", "raw", "n_used", "flag"])
        for s in report.scores:
            w.writerow([s.column_index, s.column_name, _fmt(s.score),
                        _fmt(s.raw), s.n_used, s.flag])


def read_report_csv(path):
    """Rows of the screening report CSV as a list of dicts."""
    out = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append({
                "index": int(row["index"]),
                "name": row["name"],
                "score": float(row["score"]),
                "raw": float(row["raw"]),
                "n_used": int(row["n_used"]),
                "flag": row["flag"],
            })
    if not out:
        raise DataFormatError(f"{path}: empty report")
    return out


def write_report_json(report, path):
    payload = {
        "config": report.config_echo(),
        "workers_used": report.workers_used,
        "backend": report.backend,
        "scores": [
            {"index": s.column_index, "name": s.column_name, "score": s.score,
             "raw": s.raw, "n_used": s.n_used, "flag": s.flag}
            for s in report.scores
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def write_timing_json(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"wall_seconds": report.wall_seconds,
                   "workers_used": report.workers_used}, fh)
        fh.write("\n")


def write_summary_csv(cells, path):
    """Replication summary table: one row per (simulation spec, method)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["p_true", "mode", "outcome", "snr", "method",
                    "mean_auroc", "ci_half_width", "replications", "status"])
        for c in cells:
            w.writerow([c.spec.p_true, c.spec.mode, c.spec.outcome,
                        _fmt(c.spec.snr), c.method,
                        _fmt(c.mean_auroc) if c.mean_auroc is not None else "",
                        _fmt(c.ci_half_width) if c.ci_half_width is not None else "",
                        c.replications, c.status])
