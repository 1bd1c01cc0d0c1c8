"""
Correspondence analysis tests
"""

# library
import numpy as np
import pytest
from scipy.stats import chi2_contingency

# module
from forum_innovators import ca
from forum_innovators.exceptions import ValidationError

# Two strongly separated clusters and a small one close to the average profile
PLANTED = (
    ("alpha", [30, 2, 0]),
    ("apex", [28, 2, 0]),
    ("beta", [0, 2, 30]),
    ("bravo", [0, 2, 28]),
    ("mixed", [10, 2, 10]),
)


def _random_tables(count: int, seed: int = 2):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        rows, cols = int(rng.integers(2, 7)), int(rng.integers(2, 6))
        yield ca.ContingencyTable.from_counts(rng.integers(1, 30, size=(rows, cols)))


def _planted() -> ca.FactorMap:
    names = tuple(name for name, _ in PLANTED)
    counts = np.array([row for _, row in PLANTED])
    table = ca.ContingencyTable(counts, names, ("1", "2", "3"))
    return ca.ca(table)


def test_table_validation():
    """Shape, labels and margins are checked"""
    for counts in ([[1, 2, 3]], [[1, -1], [2, 2]], [[0, 0], [1, 2]], [[0, 1], [0, 2]]):
        with pytest.raises(ValidationError):
            ca.ContingencyTable.from_counts(counts)
    with pytest.raises(ValidationError):
        ca.ContingencyTable(np.ones((2, 2)), ("a",), ("x", "y"))
    table = ca.ContingencyTable.from_counts([[1, 3], [2, 2]])
    assert table.row_names == ("r0", "r1")
    assert table.col_names == ("c0", "c1")
    assert table.row_masses.tolist() == pytest.approx([0.5, 0.5])


def test_diagonal_table():
    """A perfectly associated 2 x 2 table has one factor with inertia 1"""
    factor_map = ca.ca(ca.ContingencyTable.from_counts([[5, 0], [0, 5]]))
    assert factor_map.n_factors == 1
    assert factor_map.total_inertia == pytest.approx(1.0)
    assert factor_map.inertia_share.tolist() == pytest.approx([1.0])


def test_independent_table():
    """Proportional rows leave no factor to report"""
    table = ca.ContingencyTable.from_counts([[1, 2, 3], [2, 4, 6], [3, 6, 9]])
    factor_map = ca.ca(table)
    assert factor_map.n_factors == 0
    assert factor_map.row_coords.shape == (3, 0)
    assert ca.inertia_rows(factor_map) == []
    assert ca.contribution_rows(factor_map) == []
    with pytest.raises(ValidationError):
        ca.assign_terms(factor_map)


def test_inertia_is_chi2_over_n():
    """Total inertia equals the chi-squared statistic over the table total"""
    for table in _random_tables(30):
        factor_map = ca.ca(table)
        statistic = chi2_contingency(table.counts, correction=False)[0]
        assert factor_map.total_inertia == pytest.approx(statistic / table.n)
        assert factor_map.inertia.sum() == pytest.approx(factor_map.total_inertia)
        assert factor_map.n_factors <= min(table.counts.shape) - 1


def test_contributions_sum_to_one():
    """Absolute contributions of rows and of columns sum to 1 per factor"""
    for table in _random_tables(30):
        factor_map = ca.ca(table)
        ones = np.ones(factor_map.n_factors)
        assert factor_map.row_ac.sum(axis=0) == pytest.approx(ones)
        assert factor_map.col_ac.sum(axis=0) == pytest.approx(ones)


def test_reconstruction_and_transition():
    """Coordinates rebuild the table and columns are row barycenters"""
    for table in _random_tables(30):
        factor_map = ca.ca(table)
        r, c = table.row_masses, table.col_masses
        s = factor_map.singular_values
        f, g = factor_map.row_coords, factor_map.col_coords
        rebuilt = np.outer(r, c) * (1 + (f / s) @ g.T)
        assert rebuilt == pytest.approx(table.counts / table.n)
        profiles = table.counts / table.counts.sum(axis=0)
        assert g == pytest.approx((profiles.T @ f) / s)


def test_sign_convention():
    """The row with the largest contribution sits on the positive side"""
    for table in _random_tables(30):
        factor_map = ca.ca(table)
        for f in range(factor_map.n_factors):
            top = int(np.argmax(factor_map.row_ac[:, f]))
            assert factor_map.row_coords[top, f] > 0


def test_planted_poles():
    """Cluster-exclusive terms land on opposite poles of the first factor"""
    factor_map = _planted()
    poles = ca.assign_terms(factor_map)
    placed = {t.term: (t.factor, t.pole) for terms in poles.values() for t in terms}
    assert placed["alpha"][0] == placed["beta"][0] == 1
    assert placed["alpha"][1] == placed["apex"][1]
    assert placed["beta"][1] == placed["bravo"][1]
    assert placed["alpha"][1] != placed["beta"][1]
    assert factor_map.inertia_share[0] > 0.9


def test_assign_terms_partition():
    """Every term appears once, ranked by contribution within its pole"""
    for table in _random_tables(10):
        factor_map = ca.ca(table)
        if factor_map.n_factors == 0:
            continue
        poles = ca.assign_terms(factor_map)
        terms = [t.term for group in poles.values() for t in group]
        assert sorted(terms) == sorted(table.row_names)
        for (factor, pole), group in poles.items():
            assert [t.ac for t in group] == sorted((t.ac for t in group), reverse=True)
            for item in group:
                assert item.factor == factor and item.pole == pole
                assert (item.coord >= 0) == (pole == "+")


def test_assign_terms_tie():
    """Equal contributions go to the lower factor"""
    factor_map = ca.FactorMap(
        table=ca.ContingencyTable.from_counts(np.ones((2, 3))),
        singular_values=np.array([0.5, 0.5]),
        row_coords=np.array([[0.3, -0.3], [-0.3, 0.3]]),
        col_coords=np.zeros((3, 2)),
        row_ac=np.array([[0.5, 0.5], [0.5, 0.5]]),
        col_ac=np.zeros((3, 2)),
        total_inertia=0.5,
    )
    poles = ca.assign_terms(factor_map)
    assert [t.term for t in poles[(1, "+")]] == ["r0"]
    assert [t.term for t in poles[(1, "-")]] == ["r1"]
    assert poles[(2, "+")] == poles[(2, "-")] == []


def test_report_rows():
    """Factor map, contribution, inertia and cluster rows"""
    factor_map = _planted()
    rows = ca.factor_rows(factor_map)
    assert [r["type"] for r in rows].count("term") == len(PLANTED)
    assert [r["type"] for r in rows].count("cluster") == 3
    assert set(rows[0]) == {"entity", "type", "factor1_coord", "factor2_coord"}
    inertia = ca.inertia_rows(factor_map)
    assert [r["factor"] for r in inertia] == [1, 2]
    assert sum(r["share"] for r in inertia) == pytest.approx(1.0)
    contributions = ca.contribution_rows(factor_map)
    terms = sorted(r["term"] for r in contributions)
    assert terms == sorted(name for name, _ in PLANTED)
    clusters = ca.cluster_positioning(factor_map)
    assert [c["cluster"] for c in clusters] == ["1", "2", "3"]
    assert clusters[0]["factor1_pole"] != clusters[2]["factor1_pole"]
    assert abs(clusters[1]["factor1_coord"]) < abs(clusters[0]["factor1_coord"])
