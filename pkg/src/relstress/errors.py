"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes, so every failure raised by library
code should derive from RelstressError.
"""


class RelstressError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------- brat


class BratParseError(RelstressError):
    """Failure while parsing a standoff annotation file."""

    def __init__(self, message: str, doc_id: str = "", line_no: int | None = None):
        prefix = doc_id or "<ann>"
        if line_no is not None:
            prefix = f"{prefix}:{line_no}"
        super().__init__(f"{prefix}: {message}")
        self.doc_id = doc_id
        self.line_no = line_no


class MalformedLine(BratParseError):
    """Annotation line does not match the standoff grammar."""


class DuplicateAnnotationId(MalformedLine):
    """Same T/R id declared twice in one file; never resolved last-wins."""


class OffsetMismatch(BratParseError):
    """Recorded surface text disagrees with the span's slice of the text."""


class DanglingReference(BratParseError):
    """Relation cites a text-bound annotation id that does not exist."""


class UnknownRelationLabel(BratParseError):
    """Relation label outside the closed five-label set."""


# -------------------------------------------------------------- corpus


class WindowingFailure(RelstressError):
    """Sentence windowing could not produce a window covering both spans."""


# --------------------------------------------------------------- split


class ClassTooSmall(RelstressError):
    """A label class cannot populate every cross-validation fold."""


# ----------------------------------------------------------------- ocr


class NoMappableCharacter(RelstressError):
    """Word has no character present in the keyboard adjacency map."""


class Unswappable(RelstressError):
    """Word has no adjacent pair of distinct characters to transpose."""


class NoEligibleWord(RelstressError):
    """Sample text consists solely of marker tokens."""


# ----------------------------------------------------------------- ner


class InfeasibleMutation(RelstressError):
    """Requested span mutation violates its feasibility precondition."""


class NoFeasibleMutation(RelstressError):
    """No (entity, mutation kind) combination is feasible for a sample."""


# ---------------------------------------------------------------- eval


class CoverageMismatch(RelstressError):
    """Prediction ids do not cover the gold sample ids exactly."""


class UnknownLabel(RelstressError):
    """Label string outside the closed five-label set."""


# ----------------------------------------------------------------- cli


class PipelineError(RelstressError):
    """A pipeline stage failed; carries the stage name for context."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage
