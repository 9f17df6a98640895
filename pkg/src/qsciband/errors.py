"""Exception types shared across the pipeline."""


class SchemaError(ValueError):
    """Input file does not conform to the documented JSON schema."""


class ValidationError(ValueError):
    """Physical invariant violated by otherwise well-formed input."""


class ConfigError(ValueError):
    """Inconsistent operation configuration (orderings, run configs, specs)."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (hermiticity residual, PSD violation)."""


class CapacityError(RuntimeError):
    """Problem dimension exceeds the configured budget."""


class SelectionError(ValueError):
    """Subspace selection is empty or otherwise unusable."""


class OverlapTruncationError(RuntimeError):
    """Canonical orthogonalization discarded every overlap mode."""
