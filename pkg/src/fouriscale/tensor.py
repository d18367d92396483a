"""Dense real tensors, a bit-exact binary file format, and lossless image I/O.

The file format ("FSTN") is deliberately minimal: a fixed little-endian
header followed by raw row-major scalars, no alignment padding, no
compression.  Layout::

    bytes 0..3   magic "FSTN"
    byte  4      format version (1)
    byte  5      dtype code (1 = float32, 2 = float64)
    byte  6      rank (2 or 3)
    then         rank x uint32 extents, little-endian
    then         payload: extents product x scalar width, little-endian

Header length is therefore exactly 7 + 4*rank bytes.  Values are held as
float64 in memory regardless of the on-disk dtype; float32 payloads are
widened on read.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import BinaryIO, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    ParameterError,
    PayloadLengthError,
    ShapeError,
    TensorFormatError,
    TensorIOError,
    UnsupportedDtypeError,
)

MAGIC = b"FSTN"
FORMAT_VERSION = 1
DTYPE_F32 = 1
DTYPE_F64 = 2

_DTYPE_WIDTH = {DTYPE_F32: 4, DTYPE_F64: 8}
_DTYPE_NUMPY = {DTYPE_F32: "<f4", DTYPE_F64: "<f8"}

PathLike = Union[str, Path]


class Tensor:
    """Immutable dense array of 64-bit floats, rank 2 (H, W) or rank 3 (C, H, W)."""

    __slots__ = ("_data",)

    def __init__(self, values) -> None:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim not in (2, 3):
            raise ShapeError(f"tensor rank must be 2 or 3, got {arr.ndim}")
        if min(arr.shape) < 1:
            raise ShapeError(f"tensor extents must all be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("tensor values must be finite")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dims(self) -> tuple[int, ...]:
        return self._data.shape

    @property
    def rank(self) -> int:
        return self._data.ndim

    @property
    def channel_count(self) -> int:
        return self._data.shape[0] if self._data.ndim == 3 else 1

    def channel(self, index: int) -> np.ndarray:
        """Read-only H x W view of one channel (rank-2 tensors have channel 0)."""
        if self._data.ndim == 2:
            if index != 0:
                raise ShapeError(f"rank-2 tensor has one channel, asked for {index}")
            return self._data
        return self._data[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.dims == other.dims and self._data.tobytes() == other._data.tobytes()

    def __hash__(self) -> int:
        return hash((self.dims, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Tensor(dims={self.dims})"


def _write_chunk(sink: BinaryIO, chunk: bytes, offset: int) -> int:
    try:
        sink.write(chunk)
    except OSError as exc:
        raise TensorIOError(f"write failed at byte offset {offset}: {exc}") from exc
    return offset + len(chunk)


def write_tensor(t: Tensor, destination: Union[BinaryIO, PathLike], dtype_code: int = DTYPE_F64) -> int:
    """Serialize ``t`` and return the total byte count written.

    ``destination`` may be a binary sink or a path.  float32 output loses
    precision by design; the default is the lossless float64 dtype.
    """
    if dtype_code not in _DTYPE_NUMPY:
        raise UnsupportedDtypeError(f"dtype code must be 1 (f32) or 2 (f64), got {dtype_code}")
    if isinstance(destination, (str, Path)):
        with open(destination, "wb") as sink:
            return write_tensor(t, sink, dtype_code)

    header = MAGIC + bytes([FORMAT_VERSION, dtype_code, t.rank])
    header += struct.pack(f"<{t.rank}I", *t.dims)
    payload = t.data.astype(_DTYPE_NUMPY[dtype_code], copy=False).tobytes()
    offset = _write_chunk(destination, header, 0)
    offset = _write_chunk(destination, payload, offset)
    return offset


def _read_exact(source: BinaryIO, count: int, what: str) -> bytes:
    data = source.read(count)
    if len(data) != count:
        raise PayloadLengthError(f"truncated {what}: expected {count} bytes, got {len(data)}")
    return data


def read_tensor(source: Union[BinaryIO, PathLike]) -> Tensor:
    """Parse one tensor from a byte stream or file written by :func:`write_tensor`."""
    if isinstance(source, (str, Path)):
        with open(source, "rb") as stream:
            return read_tensor(stream)

    magic = _read_exact(source, 4, "header")
    if magic != MAGIC:
        raise TensorFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    version, dtype_code, rank = _read_exact(source, 3, "header")
    if version != FORMAT_VERSION:
        raise TensorFormatError(f"unsupported format version {version}")
    if dtype_code not in _DTYPE_NUMPY:
        raise UnsupportedDtypeError(f"unsupported dtype code {dtype_code}")
    if rank not in (2, 3):
        raise TensorFormatError(f"rank must be 2 or 3, got {rank}")
    dims = struct.unpack(f"<{rank}I", _read_exact(source, 4 * rank, "header dims"))
    if min(dims) < 1:
        raise TensorFormatError(f"extents must be >= 1, got {dims}")

    count = int(np.prod(dims))
    width = _DTYPE_WIDTH[dtype_code]
    payload = source.read(count * width)
    if len(payload) != count * width:
        raise PayloadLengthError(
            f"truncated payload: expected {count * width} bytes, got {len(payload)}"
        )
    values = np.frombuffer(payload, dtype=_DTYPE_NUMPY[dtype_code]).astype(np.float64)
    return Tensor(values.reshape(dims))


_IMAGE_MAX = {"L": 255.0, "I;16": 65535.0, "I": 65535.0, "RGB": 255.0}


def image_import(path: PathLike) -> Tensor:
    """Load a lossless 8/16-bit raster image as a C x H x W tensor in [0, 1]."""
    try:
        with Image.open(path) as img:
            mode = img.mode
            if mode == "P":
                img = img.convert("RGB")
                mode = "RGB"
            if mode not in _IMAGE_MAX:
                raise TensorFormatError(f"unsupported image mode {mode!r} (need grayscale or RGB)")
            arr = np.asarray(img, dtype=np.float64)
    except UnidentifiedImageError as exc:
        raise TensorFormatError(f"unreadable image file {path}: {exc}") from exc

    arr = arr / _IMAGE_MAX[mode]
    if arr.ndim == 2:
        arr = arr[np.newaxis, :, :]
    else:
        arr = np.transpose(arr, (2, 0, 1))
    return Tensor(arr)


def image_export(t: Tensor, path: PathLike) -> None:
    """Write ``t`` as a lossless 8-bit image (grayscale for 1 channel, RGB for 3).

    Values are clamped to [0, 1] and quantized with round-half-away-from-zero.
    """
    data = t.data if t.rank == 3 else t.data[np.newaxis, :, :]
    channels = data.shape[0]
    if channels not in (1, 3):
        raise ShapeError(f"image export needs 1 or 3 channels, got {channels}")

    clamped = np.clip(data, 0.0, 1.0)
    quantized = np.floor(clamped * 255.0 + 0.5).astype(np.uint8)
    if channels == 1:
        img = Image.fromarray(quantized[0], mode="L")
    else:
        img = Image.fromarray(np.transpose(quantized, (1, 2, 0)), mode="RGB")
    try:
        img.save(path)
    except ValueError as exc:
        raise TensorIOError(f"cannot write image {path}: {exc}") from exc
