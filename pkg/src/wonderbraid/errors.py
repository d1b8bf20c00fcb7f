"""Exceptions shared across the package."""


class WonderbraidError(Exception):
    """Base class for all package errors."""


class UnsupportedTypeError(WonderbraidError):
    """Raised for Coxeter type labels or ranks outside the supported table."""


class CapExceededError(WonderbraidError):
    """Raised when an enumeration would exceed a configured size cap.

    The message always names the cap that was hit, so callers (and the CLI,
    which maps this to exit code 3) can report it.
    """

    def __init__(self, cap_name: str, cap_value: int, attempted: int):
        self.cap_name = cap_name
        self.cap_value = cap_value
        self.attempted = attempted
        super().__init__(
            f"cap '{cap_name}' exceeded: needed {attempted}, limit {cap_value}"
        )


class AmbiguousChainError(WonderbraidError):
    """Raised when a point-encoding chain has no unique minimal next element."""


class CodecError(WonderbraidError):
    """Raised when a subspace has no label (or a label no subspace) in a codec."""
