"""
Innovators versus others: per-metric tests and logistic regression blocks
"""

# pylint: disable=too-many-instance-attributes

# stdlib
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

# library
import numpy as np
import pandas as pd

# module
from forum_innovators.exceptions import (
    ForumInnovatorsError,
    InsufficientDataError,
    ValidationError,
)
from forum_innovators.metrics.table import LABELS, METRIC_COLUMNS, complete_cases
from forum_innovators.stats.hypothesis import TestResult, mann_whitney_u, welch_t
from forum_innovators.stats.logit import LogitModel, logistic_fit, roc_auc, vif

LOG = logging.getLogger(__name__)

SIGNIFICANCE_RULES = ("both", "welch", "mwu", "either")

STARS = ((0.001, "***"), (0.01, "**"), (0.05, "*"), (0.1, "^"))


def stars(p_value: float) -> str:
    """Significance marker: ^ p<.1, * p<.05, ** p<.01, *** p<.001"""
    for bound, mark in STARS:
        if p_value < bound:
            return mark
    return ""


def joint_significance(
    welch_p: float, mwu_p: float, alpha: float = 0.05, rule: str = "both"
) -> bool:
    """Whether a metric difference counts as significant under the given rule"""
    if rule == "both":
        return welch_p < alpha and mwu_p < alpha
    if rule == "welch":
        return welch_p < alpha
    if rule == "mwu":
        return mwu_p < alpha
    if rule == "either":
        return welch_p < alpha or mwu_p < alpha
    raise ValueError(f"unknown significance rule '{rule}'")


@dataclass(frozen=True)
class ComparisonRow:
    """One metric of the group comparison report"""

    metric: str
    innovator_mean: float
    other_mean: float
    n_innovators: int
    n_others: int
    welch: TestResult
    mwu: TestResult
    significant: bool

    def as_dict(self) -> dict:
        """Flat record for CSV output"""
        return {
            "metric": self.metric,
            "innovator_mean": self.innovator_mean,
            "other_mean": self.other_mean,
            "n_innovators": self.n_innovators,
            "n_others": self.n_others,
            "welch_t": self.welch.statistic,
            "welch_df": self.welch.df,
            "welch_p": self.welch.p_value,
            "mwu_u": self.mwu.statistic,
            "mwu_p": self.mwu.p_value,
            "significant": self.significant,
        }


@dataclass(frozen=True)
class BlockResult:
    """One fitted predictor block"""

    name: str
    columns: tuple[str, ...]
    model: LogitModel
    auc: float
    vif: dict[str, float]
    dropped: int

    @property
    def mcfadden_r2(self) -> float:
        """Fit quality of the block"""
        return self.model.mcfadden_r2


def _split(table: pd.DataFrame, column: str) -> tuple[np.ndarray, np.ndarray, int]:
    values = table[column].to_numpy(dtype=float)
    flags = table["innovator"].to_numpy(dtype=bool)
    present = ~np.isnan(values)
    return values[present & flags], values[present & ~flags], int((~present).sum())


def compare_groups(
    table: pd.DataFrame,
    metrics: Sequence[str] = METRIC_COLUMNS,
    alpha: float = 0.05,
    rule: str = "both",
) -> list[ComparisonRow]:
    """Welch and Mann-Whitney tests of every metric between the two groups

    Missing values are removed per metric
    """
    if rule not in SIGNIFICANCE_RULES:
        raise ValueError(f"unknown significance rule '{rule}'")
    rows = []
    for metric in metrics:
        innovators, others, dropped = _split(table, metric)
        if dropped:
            LOG.info("%s: %d authors without a value excluded", metric, dropped)
        if not len(innovators) or not len(others):
            raise InsufficientDataError(
                f"metric '{metric}' has an empty group after removing missing values"
            )
        welch = welch_t(innovators, others)
        mwu = mann_whitney_u(innovators, others)
        rows.append(
            ComparisonRow(
                metric=metric,
                innovator_mean=float(innovators.mean()),
                other_mean=float(others.mean()),
                n_innovators=len(innovators),
                n_others=len(others),
                welch=welch,
                mwu=mwu,
                significant=joint_significance(welch.p_value, mwu.p_value, alpha, rule),
            )
        )
    return rows


def _standardized(values: np.ndarray) -> np.ndarray:
    return (values - values.mean(axis=0)) / values.std(axis=0)


def fit_block(
    table: pd.DataFrame, name: str, columns: Sequence[str], standardize: bool = False
) -> BlockResult:
    """Logistic regression of the innovator flag on one block of metrics"""
    unknown = [c for c in columns if c not in table.columns]
    if unknown:
        raise ValidationError(f"{name}: unknown column(s) {', '.join(unknown)}")
    data = complete_cases(table, list(columns))
    dropped = len(table) - len(data)
    if dropped:
        LOG.info("%s: %d incomplete rows excluded", name, dropped)
    design = data[list(columns)].to_numpy(dtype=float)
    if standardize:
        design = _standardized(design)
    y = data["innovator"].to_numpy(dtype=bool)
    try:
        model = logistic_fit(design, y, columns)
    except ForumInnovatorsError as exc:
        exc.args = (f"{name}: {exc.args[0] if exc.args else exc}",) + exc.args[1:]
        raise
    inflation = vif(design, columns) if len(columns) > 1 else {columns[0]: 1.0}
    auc = roc_auc(y, model.predict(design))
    return BlockResult(name, tuple(columns), model, auc, inflation, dropped)


def model_blocks(
    table: pd.DataFrame,
    blocks: dict[str, Sequence[str]],
    standardize: bool = False,
    vif_threshold: float = 10.0,
) -> list[BlockResult]:
    """Fit every named block in declared order"""
    if not blocks:
        raise ValidationError("no predictor blocks configured")
    results = []
    for name, columns in blocks.items():
        if not columns:
            raise ValidationError(f"{name}: empty predictor block")
        result = fit_block(table, name, columns, standardize)
        high = [c for c, v in result.vif.items() if v > vif_threshold]
        if high:
            LOG.warning("%s: high variance inflation for %s", name, ", ".join(high))
        LOG.info("%s: McFadden R2=%.4f AUC=%.4f", name, result.mcfadden_r2, result.auc)
        results.append(result)
    return results


def comparison_frame(rows: Sequence[ComparisonRow]) -> pd.DataFrame:
    """Group comparison rows as a table"""
    return pd.DataFrame([r.as_dict() for r in rows])


def block_frame(results: Sequence[BlockResult]) -> pd.DataFrame:
    """Long form coefficient table of all blocks"""
    records = []
    for result in results:
        for term, (coef, se, z, p) in result.model.coefficients().items():
            records.append(
                {
                    "model": result.name,
                    "term": term,
                    "coef": coef,
                    "se": se,
                    "z": z,
                    "p": p,
                    "stars": stars(p),
                    "vif": result.vif.get(term),
                }
            )
        fit = (
            ("mcfadden_r2", result.mcfadden_r2),
            ("auc", result.auc),
            ("n", float(result.model.n)),
        )
        for term, value in fit:
            records.append({"model": result.name, "term": term, "coef": value})
    columns = ["model", "term", "coef", "se", "z", "p", "stars", "vif"]
    return pd.DataFrame(records, columns=columns)


def _fmt(value: Optional[float], digits: int = 3) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if abs(value) >= 10**6 or (value and abs(value) < 10**-digits):
        return f"{value:.{digits}e}"
    return f"{value:.{digits}f}"


def render_comparison(frame: pd.DataFrame) -> str:
    """Aligned plain-text group comparison table from comparison_frame output"""
    header = ("Metric", "Innovators", "Others", "Welch p", "Mann-Whitney p", "")
    body = [
        (
            LABELS.get(row.metric, row.metric),
            _fmt(row.innovator_mean),
            _fmt(row.other_mean),
            _fmt(row.welch_p),
            _fmt(row.mwu_p),
            "*" if bool(row.significant) else "",
        )
        for row in frame.itertuples(index=False)
    ]
    return _align(header, body)


SUMMARY_TERMS = {"mcfadden_r2": "McFadden R2", "auc": "AUC", "n": "N"}


def render_blocks(frame: pd.DataFrame) -> str:
    """Plain-text regression table from block_frame output, one column per model"""
    models = list(dict.fromkeys(frame["model"]))
    terms = list(dict.fromkeys(t for t in frame["term"] if t not in SUMMARY_TERMS))
    cells = {(row.model, row.term): row for row in frame.itertuples(index=False)}
    body = []
    for term in terms + list(SUMMARY_TERMS):
        line = []
        for model in models:
            row = cells.get((model, term))
            if row is None:
                line.append("")
            elif term == "n":
                line.append(str(int(row.coef)))
            elif term in SUMMARY_TERMS:
                line.append(_fmt(row.coef))
            else:
                line.append(f"{_fmt(row.coef)}{stars(row.p)}")
        if term == "const":
            name = "(Intercept)"
        else:
            name = SUMMARY_TERMS.get(term, LABELS.get(term, term))
        body.append((name, *line))
    legend = "^ p<.1, * p<.05, ** p<.01, *** p<.001"
    return _align(("", *models), body) + legend + "\n"


def _align(header: Sequence[str], body: Sequence[Sequence[str]]) -> str:
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = []
    for row in [header, *body]:
        cells = [row[0].ljust(widths[0])]
        cells += [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
