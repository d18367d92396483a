"""2D discrete Fourier transforms, spectrum layouts, and ring amplitude profiles.

The forward transform carries the 1/(M*N) factor and the inverse carries
none, so ``idft2(dft2(x)) == x``.  Every downstream identity in this package
(patch superposition, kernel spectrum tiling, the convolution theorem
constant) is derived under this convention; changing it breaks them all.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import LayoutError, NonRealResultError, ShapeError
from .tensor import Tensor

# Residue above this is an error; anything below is discarded as roundoff.
IMAG_RESIDUE_LIMIT = 1e-6


class Layout(Enum):
    ORIGIN = "origin"            # DC component at index (0, 0)
    CENTRALIZED = "centralized"  # DC component at (H//2, W//2)


@dataclass(frozen=True)
class Spectrum:
    """Complex 2D frequency grid plus the layout tag saying where DC sits."""

    data: np.ndarray
    layout: Layout

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.data, dtype=np.complex128))
        if arr.ndim != 2:
            raise ShapeError(f"spectrum must be 2D, got rank {arr.ndim}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dims(self) -> tuple[int, int]:
        return self.data.shape


def dft2(values) -> Spectrum:
    """Forward 2D transform of a real H x W slice, origin layout, 1/(H*W) scaling."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"dft2 needs a rank-2 slice, got rank {x.ndim}")
    if x.size == 0:
        raise ShapeError("dft2 needs non-empty input")
    h, w = x.shape
    return Spectrum(np.fft.fft2(x) / (h * w), Layout.ORIGIN)


def idft2(s: Spectrum) -> np.ndarray:
    """Unscaled inverse of :func:`dft2`; raises if the result is not real."""
    if s.layout is not Layout.ORIGIN:
        raise LayoutError("idft2 needs an origin-layout spectrum; decentralize first")
    h, w = s.dims
    out = np.fft.ifft2(s.data) * (h * w)
    residue = float(np.max(np.abs(out.imag))) if out.size else 0.0
    if residue > IMAG_RESIDUE_LIMIT:
        raise NonRealResultError(
            f"inverse transform has imaginary residue {residue:.3e}; "
            "the spectrum does not have conjugate symmetry"
        )
    return np.ascontiguousarray(out.real)


def centralize(s: Spectrum) -> Spectrum:
    """Cyclically shift an origin-layout spectrum so DC lands at (H//2, W//2)."""
    if s.layout is not Layout.ORIGIN:
        raise LayoutError("centralize expects origin layout")
    h, w = s.dims
    return Spectrum(np.roll(s.data, (h // 2, w // 2), axis=(0, 1)), Layout.CENTRALIZED)


def decentralize(s: Spectrum) -> Spectrum:
    """Exact inverse of :func:`centralize`."""
    if s.layout is not Layout.CENTRALIZED:
        raise LayoutError("decentralize expects centralized layout")
    h, w = s.dims
    return Spectrum(np.roll(s.data, (-(h // 2), -(w // 2)), axis=(0, 1)), Layout.ORIGIN)


def log_amplitude_profile(s: Spectrum) -> np.ndarray:
    """Ring means of log(1+|S|) by Chebyshev distance from DC, relative to DC.

    Rings are square shells (exact integer membership, no binning ambiguity).
    Entry 0 is always 0; entries run to min(H, W) // 2 inclusive.
    """
    if s.layout is not Layout.CENTRALIZED:
        raise LayoutError("profile expects a centralized spectrum")
    h, w = s.dims
    dist_r = np.abs(np.arange(h) - h // 2)
    dist_c = np.abs(np.arange(w) - w // 2)
    rings = np.maximum(dist_r[:, None], dist_c[None, :])
    amps = np.log1p(np.abs(s.data))

    counts = np.bincount(rings.ravel())
    sums = np.bincount(rings.ravel(), weights=amps.ravel())
    profile = sums / counts
    profile = profile[: min(h, w) // 2 + 1]
    return profile - profile[0]


def spectrum_to_tensor(s: Spectrum) -> Tensor:
    """Pack a spectrum as a 2 x H x W tensor (real plane, imaginary plane)."""
    return Tensor(np.stack([s.data.real, s.data.imag]))


def tensor_to_spectrum(t: Tensor, layout: Layout) -> Spectrum:
    """Rebuild a spectrum from :func:`spectrum_to_tensor` output and a layout tag."""
    if t.rank != 3 or t.dims[0] != 2:
        raise ShapeError(f"need a 2 x H x W tensor, got dims {t.dims}")
    return Spectrum(t.data[0] + 1j * t.data[1], layout)
