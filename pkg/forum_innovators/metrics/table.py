"""
Per-author metrics table shared by reports and group statistics
"""

# library
import numpy as np
import pandas as pd

# module
from forum_innovators.corpus import LabelMap
from forum_innovators.metrics.language import LANGUAGE_COLUMNS, LanguageProfile
from forum_innovators.metrics.network import NETWORK_COLUMNS, NodeCentralities

METRIC_COLUMNS = NETWORK_COLUMNS + LANGUAGE_COLUMNS

LABELS = {
    "in_degree": "In-degree",
    "out_degree": "Out-degree",
    "w_in_degree": "Weighted in-degree",
    "w_out_degree": "Weighted out-degree",
    "in_distinctiveness": "In-distinctiveness",
    "out_distinctiveness": "Out-distinctiveness",
    "closeness": "Closeness",
    "betweenness": "Betweenness",
    "constraint": "Constraint",
    "word_count": "Word Count",
    "sentiment": "Sentiment",
    "novelty": "Novelty",
    "wps": "WPS",
    "six_letter_pct": "Six-letters",
}


def metrics_table(
    centralities: dict[str, NodeCentralities],
    profiles: dict[str, LanguageProfile],
    labels: LabelMap,
) -> pd.DataFrame:
    """One row per author indexed by author_id, missing values as NaN"""
    authors = sorted(centralities)
    rows = [
        centralities[a].as_row() + profiles[a].as_row() + (labels[a],) for a in authors
    ]
    frame = pd.DataFrame(
        rows,
        index=pd.Index(authors, name="author_id"),
        columns=list(METRIC_COLUMNS) + ["innovator"],
    )
    frame["constraint"] = frame["constraint"].astype(float)
    frame["innovator"] = frame["innovator"].astype(bool)
    return frame


def missing_mask(table: pd.DataFrame) -> pd.DataFrame:
    """True where a metric value is missing"""
    return table[list(METRIC_COLUMNS)].isna()


def complete_cases(table: pd.DataFrame, columns: list[str]) -> pd.DataFrame:
    """Rows without missing values over the given columns"""
    values = table[list(columns)].to_numpy(dtype=float)
    return table[~np.isnan(values).any(axis=1)]
