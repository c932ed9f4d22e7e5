"""Exception hierarchy shared by the library and the command line."""


class GrmSimError(Exception):
    """Base class for every error raised by grmsim."""


class InvalidArgumentError(GrmSimError, ValueError):
    pass


class OutOfDomainError(InvalidArgumentError):
    """A value lies outside the domain a profile or model is defined on."""


class DegenerateInputError(GrmSimError, ValueError):
    """Statistic is undefined for the given data (constant vector, too few points)."""


class DuplicateCellError(InvalidArgumentError):
    pass


class ConfigError(GrmSimError, ValueError):
    """Run configuration failed validation.

    ``path`` names the offending key (dotted for nested entries) so the
    command line can point at it.
    """

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)
