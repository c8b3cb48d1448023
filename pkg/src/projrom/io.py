"""File formats: PSNAP1 binary matrices, CSV run reports, sample-index lists.

PSNAP1 layout: 8 magic bytes ``b"PSNAP1\\0\\0"``, rows and cols as unsigned
64-bit little-endian integers, then ``rows * cols`` little-endian float64
values in column-major order.
"""

import csv
import struct

import numpy as np

MAGIC = b"PSNAP1\x00\x00"
_HEADER = struct.Struct("<8sQQ")

REPORT_COLUMNS = (
    "N", "p", "method", "weighting", "z", "steps", "gn_iters_total",
    "wall_ms_total", "ms_per_iteration", "rel_l2", "rel_linf", "seed",
)


class FormatError(ValueError):
    pass


def write_matrix(path, M):
    """Write a vector (as one column) or a matrix in PSNAP1 format."""
    M = np.asarray(M, dtype="<f8")
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2:
        raise ValueError(f"can only store 1-D or 2-D arrays, got shape {M.shape}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, M.shape[0], M.shape[1]))
        fh.write(M.tobytes(order="F"))


def read_matrix(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise FormatError(f"{path}: truncated header")
        magic, rows, cols = _HEADER.unpack(head)
        if magic != MAGIC:
            raise FormatError(f"{path}: not a PSNAP1 file")
        data = fh.read()
    if len(data) != 8 * rows * cols:
        raise FormatError(f"{path}: expected {rows}x{cols} values, found {len(data) // 8}")
    return np.frombuffer(data, dtype="<f8").astype(float).reshape((rows, cols), order="F")


def read_vector(path):
    M = read_matrix(path)
    if M.shape[1] != 1:
        raise FormatError(f"{path}: expected a single column, got shape {M.shape}")
    return M[:, 0]


def write_indices(path, indices):
    with open(path, "w") as fh:
        fh.writelines(f"{int(i)}\n" for i in indices)


def read_indices(path):
    with open(path) as fh:
        return np.array([int(line) for line in fh if line.strip()], dtype=np.intp)


def write_report(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in REPORT_COLUMNS})


def read_report(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
