"""Exception types shared across the package."""


class CardVisionError(Exception):
    """Base class for package-specific failures."""


class EmptyCornerError(CardVisionError):
    """Corner preprocessing produced no foreground worth classifying."""


class LowConfidenceError(CardVisionError):
    """Best template correlation fell below the confidence floor."""


class TemplateError(CardVisionError):
    """Template set construction, validation, or persistence failed."""
