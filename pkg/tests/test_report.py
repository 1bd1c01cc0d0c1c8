"""
Report writer and stage utility tests
"""

# stdlib
import math

# library
import numpy as np
import pandas as pd
import pytest
from voluptuous import Invalid

# module
from forum_innovators import ca, report
from forum_innovators.exceptions import (
    ConfigError,
    NumericalError,
    StageError,
    ValidationError,
)
from forum_innovators.util.handler import stage_handler
from forum_innovators.util.pool import WorkerPool, chunked

VALUES = (
    (None, ""),
    (float("nan"), ""),
    (True, "1"),
    (np.bool_(False), "0"),
    (np.int64(12), "12"),
    (0.1 + 0.2, "0.3"),
    (1 / 3, "0.333333333333"),
    (1e-20, "1e-20"),
    (math.inf, "inf"),
    ("Model 1", "Model 1"),
)

# (library error, mapped error, exit code)
MAPPED = (
    (ValidationError("bad line"), ValidationError, 3),
    (Invalid("not a flag"), ValidationError, 3),
    (np.linalg.LinAlgError("singular"), NumericalError, 4),
    (FileNotFoundError("posts.jsonl"), ConfigError, 2),
)


def test_format_value():
    """Cell text of every supported type"""
    for value, text in VALUES:
        assert report.format_value(value) == text


def test_write_csv(tmp_path):
    """Header row, column order and missing values"""
    rows = [{"b": 1.5, "a": "x"}, {"b": None, "a": "y", "c": True}]
    path = report.write_csv(tmp_path / "t.csv", rows, ["a", "b", "c"])
    assert path.read_text(encoding="utf-8") == "a,b,c\nx,1.5,\ny,,1\n"
    frame = pd.DataFrame({"v": [0.25]}, index=pd.Index(["n1"], name="author_id"))
    report.write_csv(tmp_path / "f.csv", frame, index=True)
    assert (tmp_path / "f.csv").read_text(encoding="utf-8") == "author_id,v\nn1,0.25\n"


def test_write_frame_dtypes(tmp_path):
    """Float, integer and flag columns share the scalar cell text"""
    frame = pd.DataFrame(
        {"x": [1 / 3, np.nan, 1e-20], "n": [1, 2, 3], "flag": [True, False, True]}
    )
    original = frame.copy()
    report.write_csv(tmp_path / "d.csv", frame)
    lines = (tmp_path / "d.csv").read_text(encoding="utf-8").splitlines()
    assert lines == ["x,n,flag", "0.333333333333,1,1", ",2,0", "1e-20,3,1"]
    pd.testing.assert_frame_equal(frame, original)


def test_point_id():
    """Element ids carry kind, name and coordinates"""
    element = report.point_id("cluster", "2", 0.5, -1 / 3)
    assert element == "cluster|2|0.5|-0.333333333333"


def test_factor_map_svg(tmp_path):
    """Points are written for two factors, nothing without factors"""
    table = ca.ContingencyTable.from_counts([[9, 1, 0], [1, 9, 1], [0, 1, 9]])
    factor_map = ca.ca(table)
    path = report.emit_svg_factor_map(factor_map, tmp_path / "map.svg", ["Work"])
    text = path.read_text(encoding="utf-8")
    for name, x, y in zip(factor_map.table.col_names, *factor_map.col_coords.T):
        assert report.point_id("cluster", name, x, y) in text
    assert "Factor 1" in text and "Work" in text
    independent = ca.ca(ca.ContingencyTable.from_counts([[1, 2], [2, 4]]))
    assert report.emit_svg_factor_map(independent, tmp_path / "none.svg") is None
    assert not (tmp_path / "none.svg").exists()


def test_manifest(tmp_path):
    """Input and artifact digests with the seed and config hash"""
    (tmp_path / "a.csv").write_text("x\n1\n", encoding="utf-8")
    source = tmp_path / "posts.jsonl"
    source.write_text("", encoding="utf-8")
    manifest = report.build_manifest("abc", 4, {"posts": source}, tmp_path, ["a.csv"])
    assert manifest["seed"] == 4
    assert manifest["config_sha256"] == "abc"
    assert manifest["inputs"]["posts"] == report.sha256_file(source)
    assert manifest["artifacts"] == {"a.csv": report.sha256_file(tmp_path / "a.csv")}
    assert "numpy" in manifest["libraries"]


def test_stage_handler():
    """Failures come out as stage errors with the mapped exit code"""
    for raised, mapped, code in MAPPED:
        with pytest.raises(StageError) as error:
            with stage_handler("ingest"):
                raise raised
        assert isinstance(error.value.error, mapped)
        assert error.value.exit_code == code
        assert str(error.value).startswith("stage 'ingest' failed")
    with pytest.raises(KeyError):
        with stage_handler("ingest"):
            raise KeyError("other")


def _add(a: int, b: int) -> int:
    return a + b


def test_chunked():
    """Contiguous chunks covering every item"""
    assert chunked(list(range(7)), 3) == [[0, 1, 2], [3, 4], [5, 6]]
    assert chunked([1, 2], 5) == [[1], [2]]
    assert not chunked([], 3)


def test_worker_pool():
    """Results keep submission order, inline or in processes"""
    args = [(i, 10 * i) for i in range(6)]
    with WorkerPool(1) as pool:
        assert pool.map(_add, args) == [11 * i for i in range(6)]
    with WorkerPool(2) as pool:
        assert pool.map(_add, args) == [11 * i for i in range(6)]
