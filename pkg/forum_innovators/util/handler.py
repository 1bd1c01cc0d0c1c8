"""
Stage error handlers
"""

# stdlib
import logging
from contextlib import contextmanager
from typing import Iterator

# library
import numpy as np
from voluptuous import Invalid

# module
from forum_innovators.exceptions import (
    ConfigError,
    ForumInnovatorsError,
    NumericalError,
    StageError,
    ValidationError,
)

LOG = logging.getLogger(__name__)

HINTS = {
    ValidationError: "check the input files or rerun without --strict",
    ConfigError: "check the config file and command line overrides",
    NumericalError: "try different thresholds, predictors or a larger corpus",
}


def _hint(error: ForumInnovatorsError) -> str:
    for cls, hint in HINTS.items():
        if isinstance(error, cls):
            return hint
    return ""


@contextmanager
def stage_handler(stage: str) -> Iterator[None]:
    """Error handling around a single pipeline stage

    Library errors are mapped onto the package hierarchy and every failure is
    re-raised as a StageError naming the stage
    """
    LOG.info("stage %s started", stage)
    try:
        yield
    except StageError:
        raise
    except ForumInnovatorsError as exc:
        raise StageError(stage, exc, _hint(exc)) from exc
    except Invalid as exc:
        error = ValidationError(str(exc))
        raise StageError(stage, error, _hint(error)) from exc
    except np.linalg.LinAlgError as exc:
        error = NumericalError(f"linear algebra failure: {exc}")
        raise StageError(stage, error, _hint(error)) from exc
    except OSError as exc:
        error = ConfigError(f"file access failed: {exc}")
        raise StageError(stage, error, _hint(error)) from exc
    LOG.info("stage %s finished", stage)
