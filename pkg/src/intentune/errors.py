"""Exception hierarchy shared across the package."""


class IntentuneError(Exception):
    """Base class for all errors raised by this package."""


class DatasetError(IntentuneError):
    """Invalid dataset file, labels out of range, or split preconditions violated."""


class EmbeddingError(IntentuneError):
    """Embedding lookup, transport, or matrix invariant failure."""


class ScorerError(IntentuneError):
    """Scorer fit/score contract violation."""


class DecisionError(IntentuneError):
    """Decision rule invalid for the task or unfittable on the given data."""


class SearchError(IntentuneError):
    """Malformed parameter space or study that produced no usable trial."""


class ArtifactError(IntentuneError):
    """Pipeline artifact cannot be saved, loaded, or verified."""


class ConfigError(IntentuneError):
    """CLI/run configuration is unusable (maps to exit code 2)."""
