"""Raw tensor files: a 16-byte header (magic, dtype code, rows, cols)
followed by row-major little-endian float32 values. Also 8-bit PGM/PNG
previews of [0, 1] grids."""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"ART1"
DTYPE_F32 = 1
_HEADER = struct.Struct("<4sIII")


class TensorFormatError(ValueError):
    """Raised for corrupt or mismatched tensor files."""


def write_tensor(path, values: np.ndarray) -> None:
    """Write a 2-d array as float32 little-endian with the 16-byte header."""
    arr = np.ascontiguousarray(values, dtype="<f4")
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, DTYPE_F32, arr.shape[0], arr.shape[1]))
        fh.write(arr.tobytes())


def read_tensor(path) -> np.ndarray:
    """Read a tensor file back as a float32 array of shape (rows, cols)."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise TensorFormatError(f"{path}: truncated header")
        magic, dtype, rows, cols = _HEADER.unpack(head)
        if magic != MAGIC:
            raise TensorFormatError(f"{path}: bad magic {magic!r}")
        if dtype != DTYPE_F32:
            raise TensorFormatError(f"{path}: unsupported dtype code {dtype}")
        payload = fh.read()
    expected = rows * cols * 4
    if len(payload) != expected:
        raise TensorFormatError(f"{path}: expected {expected} payload bytes, "
                                f"got {len(payload)}")
    return np.frombuffer(payload, dtype="<f4").reshape(rows, cols).copy()


def to_uint8(values: np.ndarray) -> np.ndarray:
    return np.round(np.clip(values, 0.0, 1.0) * 255.0).astype(np.uint8)


def write_pgm(path, values: np.ndarray) -> None:
    """8-bit binary PGM (P5) preview of a [0, 1] grid."""
    img = to_uint8(values)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def write_png(path, values: np.ndarray) -> None:
    """8-bit grayscale PNG preview of a [0, 1] grid."""
    from PIL import Image

    Image.fromarray(to_uint8(values), mode="L").save(path, format="PNG")
