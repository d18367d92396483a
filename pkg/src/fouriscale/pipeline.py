"""The scale-consistent convolution pipeline and its per-step scheduling.

The core operation takes a feature map that is larger than the size a
kernel was tuned for, zero-pads it on the bottom/right up to a single
integer multiple r of that original size, low-pass filters it in the
frequency domain, crops the top-left region back out, and convolves with
the kernel dilated by r.  Working at one shared r per axis pair keeps the
per-axis dilation factors equal for any requested aspect ratio.

A schedule anneals the correction over denoising steps: full strength
before ``s_init``, a linear ramp (ceiling-rounded) between ``s_init`` and
``s_stop``, and the untouched operator afterwards.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ConfigError, ParameterError
from .filters import ALL_PASS, FilterSpec, build_mask_2d, apply_filter
from .kernels import Kernel, conv2, dilate_kernel
from .spectral import dft2, idft2
from .tensor import Tensor

BLOCKS_SD = ("DB2", "DB3", "MB", "UB0", "UB1", "UB2")
BLOCKS_SDXL = ("DB2", "MB", "UB0", "UB1")

# Pixel-count growth at or below this uses the earlier anneal window.
_SD_RATIO_SPLIT = 6.25
_WINDOW_EARLY = (10, 30)
_WINDOW_LATE = (20, 35)

_PRESETS = {
    "sd15": {
        "blocks": list(BLOCKS_SD),
        "steps": 50,
        "filter": {"sigma": 0.0, "ramp": [0.0, 0.0]},
        "sigma_mild": 1.0,
    },
    "sd21": {
        "blocks": list(BLOCKS_SD),
        "steps": 50,
        "filter": {"sigma": 0.0, "ramp": [0.0, 0.0]},
        "sigma_mild": 1.0,
    },
    "sdxl": {
        "blocks": list(BLOCKS_SDXL),
        "steps": 50,
        "filter": {"sigma": 0.6},
        "sigma_mild": 1.0,
        "training_shapes": [[128, 128]],
    },
}


@dataclass(frozen=True)
class ScaleConfig:
    """Resolved per-run parameters; immutable after loading."""

    original: tuple[int, int]
    target: tuple[int, int]
    filter: FilterSpec
    blocks: tuple[str, ...]
    s_init: int
    s_stop: int
    total_steps: int
    sigma_mild: float
    training_shapes: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        h_f, w_f = self.original
        big_h, big_w = self.target
        if min(h_f, w_f, big_h, big_w) < 1:
            raise ConfigError("original/target: extents must be >= 1")
        if big_h < h_f or big_w < w_f:
            raise ConfigError(
                f"target: {self.target} must be >= original {self.original} per axis"
            )
        if not (0 <= self.s_init <= self.s_stop <= self.total_steps):
            raise ConfigError(
                f"anneal: need 0 <= S_init <= S_stop <= steps, got "
                f"[{self.s_init}, {self.s_stop}] with steps={self.total_steps}"
            )
        if self.total_steps < 1:
            raise ConfigError("steps: must be >= 1")
        if not (self.filter.sigma < self.sigma_mild <= 1.0):
            raise ConfigError(
                f"sigma_mild: must lie in ({self.filter.sigma}, 1], got {self.sigma_mild}"
            )

    @property
    def scale_factor(self) -> int:
        return compute_scale_factor(*self.target, *self.original)


@dataclass(frozen=True)
class ScheduleStep:
    """Resolved parameters for one timestep of the anneal."""

    t: int
    dilation: int
    r: int
    filter_active: bool
    effective_filter: FilterSpec
    guidance_filter: FilterSpec

    def as_record(self) -> dict:
        def spec_record(spec: FilterSpec) -> dict:
            return {
                "scale": [spec.s_h, spec.s_w],
                "ramp": [spec.r_h, spec.r_w],
                "sigma": spec.sigma,
            }

        return {
            "t": self.t,
            "dilation": self.dilation,
            "r": self.r,
            "filter_active": self.filter_active,
            "filter": spec_record(self.effective_filter),
            "guidance": spec_record(self.guidance_filter),
        }


def compute_scale_factor(big_h: int, big_w: int, h_f: int, w_f: int) -> int:
    """Smallest single integer r with r*h_f >= H and r*w_f >= W."""
    return max(-(-big_h // h_f), -(-big_w // w_f))


def schedule_params(t: int, cfg: ScaleConfig) -> ScheduleStep:
    """Resolve dilation, padding scale, and filters for timestep ``t``."""
    if not (0 <= t < cfg.total_steps):
        raise ParameterError(f"timestep {t} outside [0, {cfg.total_steps})")

    full = cfg.scale_factor
    if t >= cfg.s_stop:
        return ScheduleStep(t, 1, 1, False, ALL_PASS, ALL_PASS)

    if t < cfg.s_init:
        current = full
    else:
        fraction = (t - cfg.s_init) / (cfg.s_stop - cfg.s_init)
        current = math.ceil(full - (full - 1) * fraction)

    effective = replace(cfg.filter, s_h=float(current), s_w=float(current))
    guidance = replace(effective, sigma=cfg.sigma_mild)
    return ScheduleStep(t, current, current, True, effective, guidance)


def guidance_filter_pair(cfg: ScaleConfig, step: ScheduleStep) -> tuple[FilterSpec, FilterSpec]:
    """The step's structure-defining filter plus its detail-preserving twin.

    The mild twin shares cutoffs and ramps and swaps the stopband floor for
    ``cfg.sigma_mild``.  Past the anneal window both are all-pass.
    """
    if not (cfg.filter.sigma < cfg.sigma_mild <= 1.0):
        raise ParameterError(
            f"sigma_mild {cfg.sigma_mild} must exceed the filter sigma {cfg.filter.sigma}"
        )
    if not step.filter_active:
        return ALL_PASS, ALL_PASS
    return step.effective_filter, replace(step.effective_filter, sigma=cfg.sigma_mild)


def fouriscale_conv(feature, k: Kernel, cfg: ScaleConfig, step: ScheduleStep,
                    mode: str = "same_zero_pad"):
    """Pad, filter in the frequency domain, crop, then convolve dilated.

    Per channel: zero-pad bottom/right to (r*h_f, r*w_f), forward transform,
    apply the step's mask built at scale (r, r) for the padded extents,
    inverse transform, crop the top-left original region, and convolve with
    the kernel dilated by the step's dilation factor.  ``mode`` selects the
    convolution boundary handling; the circular variant is the setting in
    which the consistency identity is exact.

    Returns a Tensor when given one, else an ndarray of the input's shape.
    """
    is_tensor = isinstance(feature, Tensor)
    data = feature.data if is_tensor else np.asarray(feature, dtype=np.float64)
    squeeze = data.ndim == 2
    if squeeze:
        data = data[np.newaxis, :, :]
    if data.ndim != 3:
        raise ConfigError(f"feature must be rank 2 or 3, got rank {data.ndim}")

    big_h, big_w = data.shape[1], data.shape[2]
    h_f, w_f = cfg.original
    r = step.r
    pad_h, pad_w = r * h_f, r * w_f
    if pad_h < big_h or pad_w < big_w:
        raise ConfigError(
            f"padding target {pad_h}x{pad_w} smaller than input {big_h}x{big_w}"
        )

    mask = build_mask_2d((pad_h, pad_w),
                         replace(step.effective_filter, s_h=float(r), s_w=float(r)))
    dilated = dilate_kernel(k, step.dilation, step.dilation)

    out = np.empty_like(data)
    for c in range(data.shape[0]):
        padded = np.zeros((pad_h, pad_w))
        padded[:big_h, :big_w] = data[c]
        filtered = idft2(apply_filter(dft2(padded), mask))
        out[c] = conv2(filtered[:big_h, :big_w], dilated, mode)

    if squeeze:
        out = out[0]
    return Tensor(out) if is_tensor else out


_TOP_KEYS = {"preset", "original", "target", "filter", "blocks", "steps",
             "anneal", "sigma_mild", "training_shapes"}
_FILTER_KEYS = {"sigma", "ramp"}


def _require_pair(value, field: str) -> tuple[int, int]:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)):
        raise ConfigError(f"{field}: expected a pair of integers, got {value!r}")
    return int(value[0]), int(value[1])


def _require_number(value, field: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{field}: expected a number, got {value!r}")
    return float(value)


def _closest_training_shape(target: tuple[int, int],
                            shapes: tuple[tuple[int, int], ...]) -> tuple[int, int]:
    target_aspect = math.log(target[0] / target[1])
    return min(shapes, key=lambda hw: abs(target_aspect - math.log(hw[0] / hw[1])))


def load_config(source: Union[str, Path, dict]) -> ScaleConfig:
    """Validate a JSON config document (path, JSON text, or parsed dict).

    Presets fill in block lists, step counts, filter parameters, and the
    anneal window; explicit fields always win.  Unknown fields are rejected
    so typos fail loudly.
    """
    if isinstance(source, dict):
        doc = dict(source)
    else:
        if isinstance(source, Path):
            text = source.read_text()
        else:
            text = Path(source).read_text() if Path(source).exists() else source
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config root must be a JSON object")

    unknown = sorted(set(doc) - _TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")

    preset_name = doc.pop("preset", None)
    merged: dict = {}
    if preset_name is not None:
        if preset_name not in _PRESETS:
            raise ConfigError(
                f"preset: unknown name {preset_name!r}, expected one of {sorted(_PRESETS)}"
            )
        merged.update({k: json.loads(json.dumps(v)) for k, v in _PRESETS[preset_name].items()})
    for key, value in doc.items():
        if key == "filter" and "filter" in merged and isinstance(value, dict):
            merged["filter"] = {**merged["filter"], **value}
        else:
            merged[key] = value

    if "target" not in merged:
        raise ConfigError("target: required field is missing")
    target = _require_pair(merged["target"], "target")

    training_shapes: tuple[tuple[int, int], ...] = ()
    if "training_shapes" in merged:
        raw = merged["training_shapes"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("training_shapes: expected a non-empty list of [h, w] pairs")
        training_shapes = tuple(_require_pair(p, "training_shapes") for p in raw)

    if "original" in merged:
        original = _require_pair(merged["original"], "original")
    elif training_shapes:
        original = _closest_training_shape(target, training_shapes)
    else:
        raise ConfigError("original: required field is missing (or provide training_shapes)")

    filter_doc = merged.get("filter", {})
    if not isinstance(filter_doc, dict):
        raise ConfigError(f"filter: expected an object, got {filter_doc!r}")
    unknown = sorted(set(filter_doc) - _FILTER_KEYS)
    if unknown:
        raise ConfigError(f"unknown filter field(s): {', '.join(unknown)}")
    sigma = _require_number(filter_doc.get("sigma", 0.0), "filter.sigma")

    r_full = compute_scale_factor(*target, *original)
    if "ramp" in filter_doc:
        ramp_raw = filter_doc["ramp"]
        if not isinstance(ramp_raw, (list, tuple)) or len(ramp_raw) != 2:
            raise ConfigError(f"filter.ramp: expected [R_h, R_w], got {ramp_raw!r}")
        ramp = (_require_number(ramp_raw[0], "filter.ramp"),
                _require_number(ramp_raw[1], "filter.ramp"))
    elif preset_name == "sdxl":
        # A mild fixed fraction of the padded extents; only the step at the
        # floor matters for sdxl-class runs, which never use a brick wall.
        ramp = (max(r_full * original[0] / 16.0, 1.0),
                max(r_full * original[1] / 16.0, 1.0))
    else:
        ramp = (0.0, 0.0)

    if "steps" not in merged:
        raise ConfigError("steps: required field is missing")
    steps = merged["steps"]
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 1:
        raise ConfigError(f"steps: expected a positive integer, got {steps!r}")

    if "anneal" in merged:
        anneal = _require_pair(merged["anneal"], "anneal")
    elif preset_name == "sdxl":
        anneal = _WINDOW_LATE
    elif preset_name in ("sd15", "sd21"):
        ratio = (target[0] * target[1]) / (original[0] * original[1])
        anneal = _WINDOW_EARLY if ratio <= _SD_RATIO_SPLIT else _WINDOW_LATE
    else:
        raise ConfigError("anneal: required field is missing")

    blocks = merged.get("blocks", [])
    if not isinstance(blocks, list) or not all(isinstance(b, str) for b in blocks):
        raise ConfigError(f"blocks: expected a list of names, got {blocks!r}")

    sigma_mild = _require_number(merged.get("sigma_mild", 1.0), "sigma_mild")

    try:
        spec = FilterSpec(s_h=float(r_full), s_w=float(r_full),
                          r_h=ramp[0], r_w=ramp[1], sigma=sigma)
    except ParameterError as exc:
        raise ConfigError(f"filter: {exc}") from exc

    return ScaleConfig(
        original=original,
        target=target,
        filter=spec,
        blocks=tuple(blocks),
        s_init=anneal[0],
        s_stop=anneal[1],
        total_steps=steps,
        sigma_mild=sigma_mild,
        training_shapes=training_shapes,
    )
