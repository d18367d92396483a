"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every error this package raises deliberately."""


class ShapeError(ToolkitError, ValueError):
    """An array has the wrong rank or extents for the requested operation."""


class LayoutError(ToolkitError, ValueError):
    """A spectrum is in the wrong layout (origin vs centralized)."""


class ParameterError(ToolkitError, ValueError):
    """A scalar argument is outside its documented domain."""


class ConfigError(ToolkitError, ValueError):
    """A run configuration is missing, malformed, or self-contradictory."""


class NonRealResultError(ToolkitError, ValueError):
    """An inverse transform produced a significant imaginary component."""


class TensorFormatError(ToolkitError, ValueError):
    """A byte stream or image file does not hold a readable tensor."""


class UnsupportedDtypeError(TensorFormatError):
    """The tensor file declares a dtype code this reader does not support."""


class PayloadLengthError(TensorFormatError):
    """The tensor payload is shorter than its header promises."""


class TensorIOError(ToolkitError, OSError):
    """An underlying read or write failed part-way through a tensor."""
