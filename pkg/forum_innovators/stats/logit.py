"""
Logistic regression by IRLS and collinearity screening
"""

# pylint: disable=too-many-instance-attributes,too-many-arguments,too-many-locals

# stdlib
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

# library
import numpy as np
from scipy import stats
from scipy.special import expit
from sklearn.metrics import roc_auc_score

# module
from forum_innovators.exceptions import (
    InsufficientDataError,
    SeparationError,
    SingularMatrixError,
    ValidationError,
)

LOG = logging.getLogger(__name__)

# A one-SD change moving the linear predictor this much saturates the fit
SEPARATION_BOUND = 30.0
MAX_HALVINGS = 40
SINGULAR = "singular information matrix; check predictors with vif()"


@dataclass(frozen=True, eq=False)
class LogitModel:
    """Fitted logistic regression, intercept first"""

    names: tuple[str, ...]
    coef: np.ndarray
    se: np.ndarray
    z: np.ndarray
    p: np.ndarray
    loglik: float
    null_loglik: float
    n: int
    converged: bool
    iterations: int
    loglik_trace: tuple[float, ...] = ()

    @property
    def mcfadden_r2(self) -> float:
        """1 - loglik / null loglik"""
        return 1 - self.loglik / self.null_loglik

    def coefficients(self) -> dict[str, tuple[float, float, float, float]]:
        """Name to (coefficient, standard error, z, p)"""
        return {
            name: (float(b), float(s), float(z), float(p))
            for name, b, s, z, p in zip(self.names, self.coef, self.se, self.z, self.p)
        }

    def predict(self, design: np.ndarray) -> np.ndarray:
        """Fitted probabilities for a design matrix without intercept"""
        design = np.asarray(design, dtype=float)
        if design.ndim == 1:
            design = design[:, None]
        return expit(self.coef[0] + design @ self.coef[1:])


def _loglik(eta: np.ndarray, y: np.ndarray) -> float:
    return float(np.sum(y * eta - np.logaddexp(0, eta)))


def _solve(information: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if np.linalg.matrix_rank(information) < len(information):
        raise SingularMatrixError(SINGULAR)
    try:
        return np.linalg.solve(information, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(SINGULAR) from exc


def _check_design(design: np.ndarray, y: np.ndarray, names: Sequence[str]):
    n, k = design.shape
    if len(y) != n:
        raise ValidationError("design and response lengths differ")
    if n <= k + 1:
        raise InsufficientDataError(
            f"{n} observations for {k} predictors and intercept"
        )
    if not np.isfinite(design).all():
        raise ValidationError("design matrix has missing or infinite values")
    constant = [names[j] for j in range(k) if np.ptp(design[:, j]) == 0]
    if constant:
        raise ValidationError(f"constant predictor(s): {', '.join(constant)}")
    if y.min() == y.max():
        raise InsufficientDataError("response has a single class")


def logistic_fit(
    design: np.ndarray,
    y: Sequence[bool],
    names: Optional[Sequence[str]] = None,
    max_iter: int = 100,
    tol: float = 1e-8,
) -> LogitModel:
    """Maximum likelihood logistic regression by IRLS with step-halving

    design holds the predictors only; an intercept column is prepended.
    Converges when the largest score component falls below tol
    """
    design = np.asarray(design, dtype=float)
    if design.ndim == 1:
        design = design[:, None]
    y = np.asarray(y, dtype=float)
    if names is None:
        names = [f"x{j}" for j in range(design.shape[1])]
    names = list(names)
    _check_design(design, y, names)
    n, k = design.shape
    x = np.column_stack([np.ones(n), design])
    mean = y.mean()
    null_loglik = float(n * (mean * np.log(mean) + (1 - mean) * np.log(1 - mean)))
    beta = np.zeros(k + 1)
    beta[0] = np.log(mean / (1 - mean))
    loglik = _loglik(x @ beta, y)
    trace = [loglik]
    scale = design.std(axis=0)
    converged, iteration = False, 0
    for iteration in range(1, max_iter + 1):
        prob = expit(x @ beta)
        score = x.T @ (y - prob)
        if np.max(np.abs(score)) < tol:
            converged = True
            break
        weights = prob * (1 - prob)
        information = (x.T * weights) @ x
        step = _solve(information, score)
        for _ in range(MAX_HALVINGS):
            candidate = beta + step
            new_loglik = _loglik(x @ candidate, y)
            if new_loglik >= loglik:
                break
            step = step / 2
        else:
            LOG.warning("step-halving failed to improve the likelihood")
            break
        beta, loglik = candidate, new_loglik
        trace.append(loglik)
        exploded = np.abs(beta[1:] * scale) > SEPARATION_BOUND
        if exploded.any():
            offending = tuple(n_ for n_, e in zip(names, exploded) if e)
            raise SeparationError(
                "coefficients diverge (perfect or quasi-separation) for: "
                + ", ".join(offending),
                offending,
            )
    else:
        prob = expit(x @ beta)
        converged = np.max(np.abs(x.T @ (y - prob))) < tol
    if not converged:
        LOG.warning("logistic regression did not converge in %d iterations", max_iter)
    prob = expit(x @ beta)
    information = (x.T * (prob * (1 - prob))) @ x
    covariance = _solve(information, np.eye(k + 1))
    se = np.sqrt(np.clip(np.diag(covariance), 0, None))
    z = np.divide(beta, se, out=np.zeros_like(beta), where=se > 0)
    p = 2 * stats.norm.sf(np.abs(z))
    return LogitModel(
        names=("const", *names),
        coef=beta,
        se=se,
        z=z,
        p=p,
        loglik=loglik,
        null_loglik=null_loglik,
        n=n,
        converged=bool(converged),
        iterations=iteration,
        loglik_trace=tuple(trace),
    )


def vif(design: np.ndarray, names: Optional[Sequence[str]] = None) -> dict[str, float]:
    """Variance inflation factor of each predictor against the others

    Exactly collinear predictors get an infinite VIF
    """
    design = np.asarray(design, dtype=float)
    n, k = design.shape
    names = list(names) if names is not None else [f"x{j}" for j in range(k)]
    if k < 2:
        raise InsufficientDataError("VIF needs at least two predictors")
    out = {}
    for j in range(k):
        target = design[:, j]
        others = np.column_stack([np.ones(n), np.delete(design, j, axis=1)])
        coef, *_ = np.linalg.lstsq(others, target, rcond=None)
        residual = target - others @ coef
        total = float(((target - target.mean()) ** 2).sum())
        unexplained = float(residual @ residual) / total if total > 0 else 0.0
        out[names[j]] = 1 / unexplained if unexplained > 1e-12 else float("inf")
    return out


def roc_auc(y: Sequence[bool], scores: Sequence[float]) -> float:
    """Area under the ROC curve of scores ranking the positive class"""
    labels = np.asarray(y, dtype=int)
    return float(roc_auc_score(labels, np.asarray(scores, dtype=float)))
