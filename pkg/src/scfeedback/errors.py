class InvalidParameterError(ValueError):
    """A parameter is outside the domain an operation accepts."""


class InvalidConfigurationError(ValueError):
    """A link or scheme configuration cannot support the requested path."""


class ContractViolationError(ValueError):
    """An input violates an operation's precondition on its content."""
