class RQScoreError(Exception):
    """Base class for all errors raised by rqscore."""


class LexiconError(RQScoreError, ValueError):
    """The lexicon file is malformed or violates an invariant."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnresolvableRegionError(RQScoreError, KeyError):
    """An anatomy/laterality pair has no region in the catalog."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class AtlasError(RQScoreError, ValueError):
    """The region atlas is malformed or lacks a requested image."""


class PerturbationError(RQScoreError, ValueError):
    """A perturbation cannot be applied to the given pattern set."""
