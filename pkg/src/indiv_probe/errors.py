"""Exception hierarchy for the toolkit.

Grouped by how the CLI maps them to exit codes: configuration problems
(exit 1), data/parse problems (exit 2), numerical degeneracy (exit 3).
"""


class IndivProbeError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(IndivProbeError):
    """Invalid parameter or violated configuration invariant."""


class LexiconError(IndivProbeError):
    """Malformed lexicon input or unknown category names."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TableError(IndivProbeError):
    """Malformed embedding-table input (JSON Lines)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingPhraseError(IndivProbeError):
    """A required phrase is absent from an embedding table."""

    def __init__(self, phrase: str, detail: str = ""):
        self.phrase = phrase
        message = f"phrase not in table: {phrase!r}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class DimensionMismatchError(IndivProbeError):
    """Vectors or matrix axes of incompatible shapes."""


class ZeroNormError(IndivProbeError):
    """A vector with zero Euclidean norm where cosine is required."""


class EmptySampleError(IndivProbeError):
    """A statistical operation received an empty sample."""


class DegeneracyError(IndivProbeError):
    """Numerical degeneracy: near-zero proxy denominator, class emptied
    by exclusions, or a synthetic configuration outside its safe domain."""


class GraphTooLargeError(IndivProbeError):
    """Clique enumeration refused: vertex count above the hard guard."""
