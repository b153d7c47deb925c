"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a formula."""


class ConfigError(ValueError):
    """A configuration or experiment spec is malformed.

    ``field`` carries the dotted path of the offending entry so that the CLI
    can point at it.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
