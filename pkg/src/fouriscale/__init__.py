"""Frequency-domain convolution toolkit.

Structural consistency across resolutions via dilated-kernel spectrum
tiling, scale consistency via separable low-pass masks, and a
pad/filter/crop convolution pipeline with an annealing schedule, plus the
numerical verification suites that back every identity.
"""

from .errors import (
    ConfigError,
    LayoutError,
    NonRealResultError,
    ParameterError,
    PayloadLengthError,
    ShapeError,
    TensorFormatError,
    TensorIOError,
    ToolkitError,
    UnsupportedDtypeError,
)
from .filters import ALL_PASS, FilterMask, FilterSpec, apply_filter, build_mask_1d, build_mask_2d
from .kernels import (
    DilatedKernel,
    Kernel,
    conv2,
    dilate_kernel,
    spectrum_tiling_residual,
    structural_consistency_residual,
)
from .pipeline import (
    ScaleConfig,
    ScheduleStep,
    compute_scale_factor,
    fouriscale_conv,
    guidance_filter_pair,
    load_config,
    schedule_params,
)
from .sampling import (
    DownsampleSpec,
    downsample,
    predict_folded_frequency,
    superpose_patches,
    verify_downsample_superposition,
)
from .spectral import (
    Layout,
    Spectrum,
    centralize,
    decentralize,
    dft2,
    idft2,
    log_amplitude_profile,
    spectrum_to_tensor,
    tensor_to_spectrum,
)
from .tensor import Tensor, image_export, image_import, read_tensor, write_tensor

__version__ = "0.1.0"

__all__ = [
    "ALL_PASS",
    "ConfigError",
    "DilatedKernel",
    "DownsampleSpec",
    "FilterMask",
    "FilterSpec",
    "Kernel",
    "Layout",
    "LayoutError",
    "NonRealResultError",
    "ParameterError",
    "PayloadLengthError",
    "ScaleConfig",
    "ScheduleStep",
    "ShapeError",
    "Spectrum",
    "Tensor",
    "TensorFormatError",
    "TensorIOError",
    "ToolkitError",
    "UnsupportedDtypeError",
    "apply_filter",
    "build_mask_1d",
    "build_mask_2d",
    "centralize",
    "compute_scale_factor",
    "conv2",
    "decentralize",
    "dft2",
    "dilate_kernel",
    "downsample",
    "fouriscale_conv",
    "guidance_filter_pair",
    "idft2",
    "image_export",
    "image_import",
    "load_config",
    "log_amplitude_profile",
    "predict_folded_frequency",
    "read_tensor",
    "schedule_params",
    "spectrum_tiling_residual",
    "spectrum_to_tensor",
    "structural_consistency_residual",
    "superpose_patches",
    "tensor_to_spectrum",
    "verify_downsample_superposition",
    "write_tensor",
]
