"""Exception hierarchy shared across the package."""


class PolicyLoopError(Exception):
    """Base class for all errors raised by this package."""


class EmptyDocument(PolicyLoopError):
    """Policy text contains no paragraphs after normalization."""


class ParseError(PolicyLoopError):
    """A policy record does not conform to the policy file format.

    `field` names the offending field path when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class OrphanAnnotation(PolicyLoopError):
    """An annotated passage could not be located in any paragraph."""

    def __init__(self, passages):
        self.passages = list(passages)
        super().__init__(f"annotated passage(s) not found in any blob: {self.passages!r}")


class EmptyCorpus(PolicyLoopError):
    """A corpus directory contained no policy records."""


class SchemaError(PolicyLoopError):
    """Label schema is malformed (duplicate id, cycle, unknown parent)."""


class DegenerateTrainingSet(PolicyLoopError):
    """Training data does not contain both classes."""


class ShapeError(PolicyLoopError):
    """Dimension or length mismatch between arrays."""


class ModelAssetError(PolicyLoopError):
    """A required model asset (encoder checkpoint) is unavailable."""


class TrainingDiverged(PolicyLoopError):
    """Training loss became NaN or infinite."""


class NotTrained(PolicyLoopError):
    """Prediction requested from a model that has not been trained."""


class ValidationError(PolicyLoopError):
    """A feedback entry or request references unknown data."""


class IntegrityError(PolicyLoopError):
    """Persisted model artifacts are inconsistent with their manifest."""


class SplitError(PolicyLoopError):
    """A stratified corpus split could not be constructed."""
