"""Exception hierarchy shared across the package."""


class NasforgeError(Exception):
    """Base class for all errors raised by nasforge."""


class ConfigError(NasforgeError):
    """Config file failed to parse or validate.

    ``path`` is the dotted key path of the offending entry when known.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class UnknownComponentError(ConfigError):
    """Lookup of an unregistered (kind, name) pair."""


class DuplicateComponentError(NasforgeError):
    """A (kind, name) pair was registered twice."""


class BuildError(NasforgeError):
    """A component constructor failed during session assembly."""


class GenotypeError(NasforgeError):
    """Genotype is invalid in its search space, or a genotype string failed to parse."""


class EvaluationError(NasforgeError):
    """The evaluator could not score a rollout (e.g. missing table entry)."""


class CheckpointError(NasforgeError):
    """Checkpoint file is corrupt, truncated, or of the wrong kind."""


class FitError(NasforgeError):
    """Model fitting failed (degenerate data, non-finite values)."""


class UsageError(NasforgeError):
    """Bad command-line invocation."""
