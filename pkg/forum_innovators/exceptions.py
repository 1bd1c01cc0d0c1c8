"""
Package exceptions and exit codes
"""

# stdlib
from dataclasses import dataclass, field
from typing import Optional


class ForumInnovatorsError(Exception):
    """Base class for all package errors"""

    exit_code: int = 1


class ConfigError(ForumInnovatorsError):
    """Invalid or incomplete run configuration"""

    exit_code = 2


@dataclass(frozen=True)
class Issue:
    """A single problem found while validating input data"""

    line: Optional[int]
    code: str
    message: str
    fatal: bool = True

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self.code}: {self.message}"


@dataclass
class ValidationReport:
    """Collects validation issues for a single input source"""

    source: str
    issues: list[Issue] = field(default_factory=list)

    def add(self, line: Optional[int], code: str, message: str, fatal: bool = True):
        """Record a new issue"""
        self.issues.append(Issue(line, code, message, fatal))

    @property
    def errors(self) -> list[Issue]:
        """Issues that fail strict validation"""
        return [i for i in self.issues if i.fatal]

    @property
    def warnings(self) -> list[Issue]:
        """Issues that are reported but never fatal"""
        return [i for i in self.issues if not i.fatal]

    def __bool__(self) -> bool:
        return bool(self.issues)


class ValidationError(ForumInnovatorsError):
    """Input data failed validation"""

    exit_code = 3

    def __init__(self, message: str, report: Optional[ValidationReport] = None):
        super().__init__(message)
        self.report = report


class UnknownNodeError(ValidationError, KeyError):
    """An author id is not a node of the reply graph"""

    def __str__(self) -> str:
        return str(self.args[0])


class InsufficientDataError(ValidationError):
    """A statistic was requested on too few observations"""


class EmptyVocabularyError(ValidationError):
    """Term selection left no terms to cluster"""


class NumericalError(ForumInnovatorsError):
    """A numerical routine failed to produce a usable result"""

    exit_code = 4


class DegenerateGraphError(NumericalError):
    """The graph is too small for the requested metric"""


class SeparationError(NumericalError):
    """Logistic regression coefficients diverge from (quasi-)separation"""

    def __init__(self, message: str, predictors: tuple[str, ...] = ()):
        super().__init__(message)
        self.predictors = predictors


class SingularMatrixError(NumericalError):
    """The information matrix cannot be inverted"""


class StageError(ForumInnovatorsError):
    """Wraps a failure with the pipeline stage it happened in"""

    def __init__(self, stage: str, error: ForumInnovatorsError, hint: str = ""):
        message = f"stage '{stage}' failed: {error}"
        if hint:
            message += f" ({hint})"
        super().__init__(message)
        self.stage = stage
        self.error = error
        self.exit_code = error.exit_code
