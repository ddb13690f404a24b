"""Exception types shared across the package."""


class StylelabError(Exception):
    """Base class for all stylelab errors."""


class ShapeError(StylelabError, ValueError):
    """Operands have incompatible or empty shapes."""


class DegenerateInputError(StylelabError, ValueError):
    """Input is structurally valid but mathematically degenerate
    (zero vector to normalize, empty text to tokenize, ...)."""


class ValidationError(StylelabError, ValueError):
    """A domain invariant does not hold (corpus splits, batch styles, ...)."""


class ConfigError(StylelabError, ValueError):
    """A configuration value is missing, unknown, or inconsistent."""


class ParseError(StylelabError, ValueError):
    """A corpus file record could not be parsed.

    Carries the 1-based line number of the offending record.
    """

    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number
