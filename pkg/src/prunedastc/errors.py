"""Exception hierarchy shared by the codec, container and CLI layers."""


class AstcError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(AstcError, ValueError):
    """Image dimensions do not satisfy an operation's precondition."""


class BlockIndexError(AstcError, IndexError):
    """Block coordinates fall outside the block grid."""


class UnsupportedConfigurationError(AstcError):
    """A compressed block uses a configuration other than the pruned one."""


class ContainerError(AstcError):
    """Malformed or unsupported ``.astc`` container."""


class BadMagicError(ContainerError):
    pass


class UnsupportedFootprintError(ContainerError):
    pass


class TruncatedPayloadError(ContainerError):
    pass


class UnsupportedImageError(AstcError):
    """Raster file in a format or bit depth that cannot be read."""
