"""Low-pass masks for scale-consistent downsampling.

A mask is separable: one clamped ramp profile per axis, mirrored about the
centralized DC bin, combined by outer product.  With ramp width R = 0 and
floor sigma = 0 it is the ideal brick wall whose half-axis cutoff H/(2*s)
keeps exactly the band representable after stride-s decimation; sigma > 0
attenuates the stopband to sigma instead of removing it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ShapeError
from .spectral import Layout, Spectrum, centralize, decentralize


@dataclass(frozen=True)
class FilterSpec:
    """Mask parameters: per-axis scale factors, ramp widths in bins, stopband floor."""

    s_h: float
    s_w: float
    r_h: float = 0.0
    r_w: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.s_h < 1 or self.s_w < 1:
            raise ParameterError(f"scale factors must be >= 1, got ({self.s_h}, {self.s_w})")
        if self.r_h < 0 or self.r_w < 0:
            raise ParameterError(f"ramp widths must be >= 0, got ({self.r_h}, {self.r_w})")
        if not (0.0 <= self.sigma <= 1.0):
            raise ParameterError(f"sigma must lie in [0, 1], got {self.sigma}")


#: Mask spec that passes every frequency unchanged.
ALL_PASS = FilterSpec(s_h=1.0, s_w=1.0, r_h=0.0, r_w=0.0, sigma=1.0)


@dataclass(frozen=True)
class FilterMask:
    """Centralized real-valued mask grid.

    Masks built by :func:`build_mask_2d` satisfy: value 1 at DC, values in
    [sigma, 1], per-axis mirror symmetry about DC, and monotone non-increase
    away from DC.  The carrier itself does not re-validate, so tests can
    construct pathological masks directly.
    """

    values: np.ndarray
    layout: Layout = Layout.CENTRALIZED

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if arr.ndim != 2:
            raise ShapeError(f"mask must be rank 2, got rank {arr.ndim}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def dims(self) -> tuple[int, int]:
        return self.values.shape


def build_mask_1d(extent: int, cutoff: float, ramp: float, sigma: float) -> np.ndarray:
    """Half-axis profile over bin distances d = 0 .. ceil(extent/2) from DC.

    For ramp > 0 the value is the clamped ramp
    ``clip(((1-sigma)/ramp) * (cutoff + 1 - d) + 1, sigma, 1)``, which stays
    at 1 through d = cutoff + 1 and reaches sigma exactly ramp bins later.
    For ramp = 0 it is a step: 1 for d <= cutoff, sigma beyond.
    """
    if extent < 1:
        raise ParameterError(f"extent must be >= 1, got {extent}")
    if not (0.0 <= sigma <= 1.0):
        raise ParameterError(f"sigma must lie in [0, 1], got {sigma}")
    if cutoff < 0 or ramp < 0:
        raise ParameterError(f"cutoff and ramp must be >= 0, got ({cutoff}, {ramp})")

    d = np.arange(math.ceil(extent / 2) + 1, dtype=np.float64)
    if ramp > 0:
        return np.clip((1.0 - sigma) / ramp * (cutoff + 1.0 - d) + 1.0, sigma, 1.0)
    return np.where(d <= cutoff, 1.0, sigma)


def build_mask_2d(extents: tuple[int, int], spec: FilterSpec) -> FilterMask:
    """Separable centralized mask with half-axis cutoffs H/(2*s_h), W/(2*s_w).

    Per-axis profiles are indexed by distance from the DC bin (H//2, W//2),
    which mirrors them symmetrically for both parities and thereby preserves
    conjugate symmetry of any filtered spectrum.  The outer product is
    floored at sigma so the stopband sits at sigma itself, not sigma squared
    where both axes attenuate.
    """
    h, w = extents
    if h < 1 or w < 1:
        raise ParameterError(f"mask extents must be >= 1, got {extents}")
    profile_h = build_mask_1d(h, h / (2.0 * spec.s_h), spec.r_h, spec.sigma)
    profile_w = build_mask_1d(w, w / (2.0 * spec.s_w), spec.r_w, spec.sigma)

    dist_h = np.abs(np.arange(h) - h // 2)
    dist_w = np.abs(np.arange(w) - w // 2)
    values = np.maximum(np.outer(profile_h[dist_h], profile_w[dist_w]), spec.sigma)
    return FilterMask(values)


def apply_filter(s: Spectrum, m: FilterMask) -> Spectrum:
    """Pointwise mask product; the input layout is preserved on output."""
    if s.dims != m.dims:
        raise ShapeError(f"spectrum extents {s.dims} do not match mask extents {m.dims}")
    if s.layout is Layout.CENTRALIZED:
        return Spectrum(s.data * m.values, Layout.CENTRALIZED)
    filtered = Spectrum(centralize(s).data * m.values, Layout.CENTRALIZED)
    return decentralize(filtered)
