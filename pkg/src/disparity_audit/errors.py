"""Exception types shared by the library and the command line."""


class AuditError(ValueError):
    """Base class for every error raised deliberately by this package."""


class DataError(AuditError):
    """The input data cannot support the requested computation."""


class ConfigError(AuditError):
    """A parameter, flag or configuration value is invalid."""
