"""Exception types raised across the package."""


class McgsError(Exception):
    """Base class for package errors."""


class GraphParseError(McgsError, ValueError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyGraphError(McgsError, ValueError):
    pass


class DisconnectedGraphError(McgsError, ValueError):
    pass


class ConfigError(McgsError, ValueError):
    pass
