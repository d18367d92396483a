"""Strided spatial downsampling and its frequency-domain counterparts.

Two facts are implemented and verified here: strided decimation equals a
plain sum of the spectrum's non-overlapping patches (under this package's
1/(M*N) forward transform the patch sum carries no extra scale factor), and
a frequency above the post-decimation Nyquist limit reappears folded back
into the representable band.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LayoutError, ParameterError, ShapeError
from .spectral import Layout, Spectrum, dft2


@dataclass(frozen=True)
class DownsampleSpec:
    """Per-axis strides plus the sampling phase (offset of the kept grid)."""

    s_h: int
    s_w: int
    phase: tuple[int, int] = (0, 0)

    def __post_init__(self):
        for name, stride in (("s_h", self.s_h), ("s_w", self.s_w)):
            if int(stride) != stride or stride < 1:
                raise ParameterError(f"{name} must be a positive integer, got {stride}")
        pr, pc = self.phase
        if not (0 <= pr < self.s_h and 0 <= pc < self.s_w):
            raise ParameterError(f"phase {self.phase} must lie in [0, stride) per axis")


def _check_divides(extent: int, stride: int, axis: str) -> None:
    if extent % stride != 0:
        raise ShapeError(f"stride {stride} does not divide {axis} extent {extent}")


def downsample(values, spec: DownsampleSpec) -> np.ndarray:
    """Keep every spec.s-th sample per axis, starting at the phase offset."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"downsample needs a rank-2 slice, got rank {x.ndim}")
    _check_divides(x.shape[0], spec.s_h, "row")
    _check_divides(x.shape[1], spec.s_w, "column")
    pr, pc = spec.phase
    return x[pr :: spec.s_h, pc :: spec.s_w].copy()


def superpose_patches(s: Spectrum, s_h: int, s_w: int) -> Spectrum:
    """Sum the s_h x s_w equal blocks of an origin-layout spectrum.

    The result equals the spectrum of the phase-0 decimated signal exactly.
    """
    if s.layout is not Layout.ORIGIN:
        raise LayoutError("superpose_patches expects origin layout")
    h, w = s.dims
    _check_divides(h, s_h, "row")
    _check_divides(w, s_w, "column")
    blocks = s.data.reshape(s_h, h // s_h, s_w, w // s_w)
    return Spectrum(blocks.sum(axis=(0, 2)), Layout.ORIGIN)


def verify_downsample_superposition(values, s_h: int, s_w: int) -> float:
    """Max-abs residual between the decimated signal's spectrum and the patch sum."""
    x = np.asarray(values, dtype=np.float64)
    direct = dft2(downsample(x, DownsampleSpec(s_h, s_w)))
    folded = superpose_patches(dft2(x), s_h, s_w)
    return float(np.max(np.abs(direct.data - folded.data)))


def predict_folded_frequency(u_signal: float, s: int) -> float:
    """Apparent frequency, in cycles/sample of the decimated grid, after stride-s sampling.

    ``u_signal`` is in cycles/sample of the original grid and must sit below
    the original Nyquist rate 0.5.  The rescaled frequency is reduced modulo
    one full cycle and reflected off the new Nyquist rate when it lands above.
    """
    if int(s) != s or s < 1:
        raise ParameterError(f"stride must be a positive integer, got {s}")
    if not (0.0 <= u_signal < 0.5):
        raise ParameterError(
            f"frequency {u_signal} violates the Nyquist precondition 0 <= u < 0.5"
        )
    v = (u_signal * s) % 1.0
    return 1.0 - v if v > 0.5 else v
