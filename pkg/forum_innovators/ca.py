"""
Correspondence analysis of term x cluster contingency tables
"""

# pylint: disable=too-many-instance-attributes

# stdlib
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

# library
import numpy as np

# module
from forum_innovators.exceptions import ValidationError

LOG = logging.getLogger(__name__)

# Singular values at or below this are treated as zero inertia
RANK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Nonnegative counts, rows = terms, columns = clusters"""

    counts: np.ndarray
    row_names: tuple[str, ...]
    col_names: tuple[str, ...]

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        object.__setattr__(self, "counts", counts)
        if counts.ndim != 2 or min(counts.shape) < 2:
            raise ValidationError("contingency table must be at least 2 x 2")
        if counts.shape != (len(self.row_names), len(self.col_names)):
            raise ValidationError("contingency table labels do not match its shape")
        if (counts < 0).any() or not np.isfinite(counts).all():
            raise ValidationError(
                "contingency table must hold finite nonnegative counts"
            )
        if (counts.sum(axis=1) == 0).any():
            raise ValidationError("contingency table has an all-zero row")
        if (counts.sum(axis=0) == 0).any():
            raise ValidationError("contingency table has an all-zero column")

    @classmethod
    def from_counts(
        cls,
        counts: np.ndarray,
        row_names: Optional[Sequence[str]] = None,
        col_names: Optional[Sequence[str]] = None,
    ) -> "ContingencyTable":
        """Table with default r<i>/c<j> labels where none are given"""
        counts = np.asarray(counts, dtype=float)
        if row_names is None:
            row_names = [f"r{i}" for i in range(counts.shape[0])]
        if col_names is None:
            col_names = [f"c{j}" for j in range(counts.shape[1])]
        rows, cols = tuple(row_names), tuple(col_names)
        return cls(counts, rows, cols)

    @property
    def n(self) -> float:
        """Grand total"""
        return float(self.counts.sum())

    @property
    def row_masses(self) -> np.ndarray:
        """Row margins as proportions"""
        return self.counts.sum(axis=1) / self.n

    @property
    def col_masses(self) -> np.ndarray:
        """Column margins as proportions"""
        return self.counts.sum(axis=0) / self.n


@dataclass(frozen=True, eq=False)
class FactorMap:
    """Principal coordinates and contributions of rows and columns

    Arrays have one column per retained factor. An independent table has no
    factors and zero-width arrays
    """

    table: ContingencyTable
    singular_values: np.ndarray
    row_coords: np.ndarray
    col_coords: np.ndarray
    row_ac: np.ndarray
    col_ac: np.ndarray
    total_inertia: float

    @property
    def n_factors(self) -> int:
        """Number of factors with nonzero inertia"""
        return len(self.singular_values)

    @property
    def inertia(self) -> np.ndarray:
        """Principal inertia per factor"""
        return self.singular_values**2

    @property
    def inertia_share(self) -> np.ndarray:
        """Share of total inertia per factor"""
        if self.total_inertia <= 0:
            return np.zeros(0)
        return self.inertia / self.total_inertia


@dataclass(frozen=True)
class TermAssignment:
    """A term placed on the factor it contributes most to"""

    term: str
    factor: int
    pole: str
    ac: float
    coord: float


def ca(table: ContingencyTable) -> FactorMap:
    """Correspondence analysis by SVD of the standardized residuals

    Each factor's sign puts the row with the largest absolute contribution
    on the positive side
    """
    n = table.n
    r, c = table.row_masses, table.col_masses
    proportions = table.counts / n
    residuals = (proportions - np.outer(r, c)) / np.sqrt(np.outer(r, c))
    u, s, vt = np.linalg.svd(residuals, full_matrices=False)
    total = float((residuals**2).sum())
    tol = RANK_TOL * max(1.0, s[0] if len(s) else 0.0)
    keep = s[: min(table.counts.shape) - 1] > tol
    rank = int(keep.sum())
    if rank == 0:
        LOG.warning("table rows and columns are independent; no factors to report")
        empty_rows = np.zeros((table.counts.shape[0], 0))
        empty_cols = np.zeros((table.counts.shape[1], 0))
        return FactorMap(
            table, np.zeros(0), empty_rows, empty_cols, empty_rows, empty_cols, 0.0
        )
    u, s, v = u[:, :rank], s[:rank], vt[:rank].T
    row_coords = u * s / np.sqrt(r)[:, None]
    col_coords = v * s / np.sqrt(c)[:, None]
    row_ac = r[:, None] * row_coords**2 / s**2
    col_ac = c[:, None] * col_coords**2 / s**2
    for f in range(rank):
        if row_coords[int(np.argmax(row_ac[:, f])), f] < 0:
            row_coords[:, f] *= -1
            col_coords[:, f] *= -1
    LOG.info(
        "correspondence analysis: %d factors, total inertia %.6g, first factor %.1f%%",
        rank,
        total,
        100 * s[0] ** 2 / total,
    )
    return FactorMap(table, s, row_coords, col_coords, row_ac, col_ac, total)


def assign_terms(factor_map: FactorMap) -> dict[tuple[int, str], list[TermAssignment]]:
    """Place every term on its highest-contribution factor and pole

    Keys are (factor number from 1, "+" or "-"); ties go to the lower factor.
    Terms within a pole are ranked by decreasing contribution
    """
    if factor_map.n_factors == 0:
        raise ValidationError("no factors to assign terms to")
    out: dict[tuple[int, str], list[TermAssignment]] = {}
    for f in range(factor_map.n_factors):
        for pole in ("+", "-"):
            out[(f + 1, pole)] = []
    for i, term in enumerate(factor_map.table.row_names):
        f = int(np.argmax(factor_map.row_ac[i]))
        coord = float(factor_map.row_coords[i, f])
        pole = "+" if coord >= 0 else "-"
        ac = float(factor_map.row_ac[i, f])
        out[(f + 1, pole)].append(TermAssignment(term, f + 1, pole, ac, coord))
    for terms in out.values():
        terms.sort(key=lambda t: (-t.ac, t.term))
    return out


def cluster_positioning(factor_map: FactorMap, factors: int = 2) -> list[dict]:
    """Pole and absolute contribution of each cluster on the leading factors"""
    rows = []
    shown = min(factors, factor_map.n_factors)
    for j, name in enumerate(factor_map.table.col_names):
        row = {"cluster": name}
        for f in range(shown):
            coord = float(factor_map.col_coords[j, f])
            row[f"factor{f + 1}_coord"] = coord
            row[f"factor{f + 1}_pole"] = "+" if coord >= 0 else "-"
            row[f"factor{f + 1}_ac"] = float(factor_map.col_ac[j, f])
        rows.append(row)
    return rows


def factor_rows(factor_map: FactorMap) -> list[dict]:
    """Coordinates of every term and cluster point"""
    rows = []
    for kind, names, coords in (
        ("term", factor_map.table.row_names, factor_map.row_coords),
        ("cluster", factor_map.table.col_names, factor_map.col_coords),
    ):
        for name, point in zip(names, coords):
            row = {"entity": name, "type": kind}
            row.update({f"factor{f + 1}_coord": float(x) for f, x in enumerate(point)})
            rows.append(row)
    return rows


def contribution_rows(factor_map: FactorMap) -> list[dict]:
    """Term contributions in assignment order"""
    if factor_map.n_factors == 0:
        return []
    groups = sorted(
        assign_terms(factor_map).items(), key=lambda kv: (kv[0][0], kv[0][1] != "+")
    )
    return [
        {"term": t.term, "factor": t.factor, "ac": t.ac, "pole": t.pole}
        for _, terms in groups
        for t in terms
    ]


def inertia_rows(factor_map: FactorMap) -> list[dict]:
    """Principal inertia and share per factor"""
    return [
        {
            "factor": f + 1,
            "singular_value": float(sv),
            "inertia": float(sv**2),
            "share": float(share),
        }
        for f, (sv, share) in enumerate(
            zip(factor_map.singular_values, factor_map.inertia_share)
        )
    ]
