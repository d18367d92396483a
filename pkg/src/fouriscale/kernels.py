"""Convolution kernels, dilation, and the identities that make dilation work.

Dilating a kernel by (d_h, d_w) tiles its spectrum d_h x d_w times, and
convolving with the dilated kernel before stride-s decimation matches
convolving with the base kernel after it.  Both identities are exact under
circular boundary handling, which is why the verification ops here use it;
``same_zero_pad`` mode exists for pipeline use where layers behave like
ordinary padded convolutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ShapeError
from .sampling import DownsampleSpec, downsample
from .spectral import dft2


@dataclass(frozen=True)
class Kernel:
    """Rank-2 tap grid; tap (M//2, N//2) is the origin for "same" convolution."""

    taps: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.taps, dtype=np.float64))
        if arr.ndim != 2:
            raise ShapeError(f"kernel must be rank 2, got rank {arr.ndim}")
        if min(arr.shape) < 1:
            raise ShapeError(f"kernel extents must be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("kernel taps must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "taps", arr)

    @property
    def extents(self) -> tuple[int, int]:
        return self.taps.shape

    @property
    def center(self) -> tuple[int, int]:
        return self.taps.shape[0] // 2, self.taps.shape[1] // 2


@dataclass(frozen=True)
class DilatedKernel:
    """A kernel with zeros inserted between taps.

    The materialized grid spans (d_h*M, d_w*N) with tap (m, n) at
    (d_h*m, d_w*n); the trailing all-zero rows/columns exist for spectrum
    analysis only.  Spatial convolution uses the effective footprint
    (d_h*(M-1)+1, d_w*(N-1)+1) so that centering is not skewed by padding
    that contributes nothing.
    """

    base: Kernel
    d_h: int
    d_w: int

    @property
    def padded_extents(self) -> tuple[int, int]:
        m, n = self.base.extents
        return self.d_h * m, self.d_w * n

    @property
    def effective_extents(self) -> tuple[int, int]:
        m, n = self.base.extents
        return self.d_h * (m - 1) + 1, self.d_w * (n - 1) + 1

    def materialize(self) -> np.ndarray:
        grid = np.zeros(self.padded_extents)
        grid[:: self.d_h, :: self.d_w] = self.base.taps
        return grid

    def effective_taps(self) -> np.ndarray:
        eh, ew = self.effective_extents
        return self.materialize()[:eh, :ew]


def dilate_kernel(k: Kernel, d_h: int, d_w: int) -> DilatedKernel:
    for name, d in (("d_h", d_h), ("d_w", d_w)):
        if int(d) != d or d < 1:
            raise ParameterError(f"dilation factor {name} must be a positive integer, got {d}")
    return DilatedKernel(k, int(d_h), int(d_w))


def spectrum_tiling_residual(k: Kernel, d_h: int, d_w: int) -> float:
    """Max-abs deviation of the dilated kernel's spectrum from tiled base spectra.

    The (d_h*M) x (d_w*N) transform of the dilated grid equals the base M x N
    spectrum tiled d_h x d_w times and divided by d_h*d_w (the normalization
    ratio between the two transform sizes).
    """
    dilated = dilate_kernel(k, d_h, d_w)
    big = dft2(dilated.materialize()).data
    base = dft2(k.taps).data
    tiled = np.tile(base, (dilated.d_h, dilated.d_w)) / (dilated.d_h * dilated.d_w)
    return float(np.max(np.abs(big - tiled)))


def _resolve_grid(kernel) -> tuple[np.ndarray, tuple[int, int]]:
    if isinstance(kernel, DilatedKernel):
        grid = kernel.effective_taps()
    elif isinstance(kernel, Kernel):
        grid = kernel.taps
    else:
        raise ParameterError(f"expected Kernel or DilatedKernel, got {type(kernel).__name__}")
    return grid, (grid.shape[0] // 2, grid.shape[1] // 2)


def _shift_zero(x: np.ndarray, dy: int, dx: int) -> np.ndarray:
    out = np.zeros_like(x)
    h, w = x.shape
    dst_r = slice(max(dy, 0), h + min(dy, 0))
    dst_c = slice(max(dx, 0), w + min(dx, 0))
    src_r = slice(max(-dy, 0), h + min(-dy, 0))
    src_c = slice(max(-dx, 0), w + min(-dx, 0))
    out[dst_r, dst_c] = x[src_r, src_c]
    return out


def _circular_conv(x: np.ndarray, grid: np.ndarray, center: tuple[int, int]) -> np.ndarray:
    """Cyclic convolution with the origin at ``center``; shifts may wrap freely."""
    out = np.zeros_like(x)
    cy, cx = center
    for m, n in zip(*np.nonzero(grid)):
        out += grid[m, n] * np.roll(x, (m - cy, n - cx), axis=(0, 1))
    return out


def conv2(values, kernel, mode: str = "circular") -> np.ndarray:
    """2D convolution of a slice with a Kernel or DilatedKernel.

    ``circular`` wraps indices modulo the extents (the exact Fourier-dual
    setting); ``same_zero_pad`` extends with zeros and keeps the input
    extents.  Both center the kernel at its origin tap.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"conv2 needs a rank-2 slice, got rank {x.ndim}")
    grid, center = _resolve_grid(kernel)

    if mode == "circular":
        if grid.shape[0] > x.shape[0] or grid.shape[1] > x.shape[1]:
            raise ShapeError(
                f"kernel footprint {grid.shape} exceeds input extents {x.shape} in circular mode"
            )
        return _circular_conv(x, grid, center)
    if mode == "same_zero_pad":
        out = np.zeros_like(x)
        cy, cx = center
        for m, n in zip(*np.nonzero(grid)):
            out += grid[m, n] * _shift_zero(x, m - cy, n - cx)
        return out
    raise ParameterError(f"mode must be 'circular' or 'same_zero_pad', got {mode!r}")


def structural_consistency_residual(values, k: Kernel, s: int) -> float:
    """Max-abs gap between Down_s(x (*) dilated k) and Down_s(x) (*) k.

    Both convolutions are circular and the decimation phase is 0; under
    those semantics the two sides agree to floating-point roundoff.  The
    dilated side may wrap (its footprint can exceed the extents), which is
    well-defined for cyclic convolution.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"need a rank-2 slice, got rank {x.ndim}")
    if int(s) != s or s < 1:
        raise ParameterError(f"stride must be a positive integer, got {s}")
    _ = DownsampleSpec(s, s)
    if x.shape[0] % s or x.shape[1] % s:
        raise ShapeError(f"stride {s} does not divide extents {x.shape}")

    dilated = dilate_kernel(k, s, s)
    grid = dilated.effective_taps()
    high = _circular_conv(x, grid, (grid.shape[0] // 2, grid.shape[1] // 2))
    lhs = downsample(high, DownsampleSpec(s, s))
    low = downsample(x, DownsampleSpec(s, s))
    rhs = _circular_conv(low, k.taps, k.center)
    return float(np.max(np.abs(lhs - rhs)))
