"""
Report artifact writers: CSV tables, factor map SVG and run manifest
"""

# stdlib
import hashlib
import json
import logging
import math
import platform
from importlib import metadata
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

# library
import matplotlib
import numpy as np
import pandas as pd
from matplotlib.figure import Figure

# module
from forum_innovators import __version__
from forum_innovators.ca import FactorMap

LOG = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"

LIBRARIES = (
    "matplotlib",
    "networkx",
    "nltk",
    "numpy",
    "pandas",
    "PyYAML",
    "scikit-learn",
    "scipy",
    "voluptuous",
)

Rows = Union[pd.DataFrame, Sequence[dict]]


def format_value(value) -> str:
    """CSV cell text: floats with 12 significant digits, missing as empty"""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return ""
        return FLOAT_FORMAT % value
    return str(value)


def _frame(rows: Rows, columns: Optional[Sequence[str]], index: bool) -> pd.DataFrame:
    frame = rows.copy() if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
    if index:
        frame = frame.reset_index()
    if columns is not None:
        frame = frame.reindex(columns=list(columns))
    return frame


def write_csv(
    path: Path, rows: Rows, columns: Optional[Sequence[str]] = None, index: bool = False
) -> Path:
    """Write a table with a header row, the single CSV writer of the package"""
    frame = _frame(rows, columns, index)
    # object and bool columns take the same cell text as scalars
    for name in frame.columns:
        if frame[name].dtype == object or pd.api.types.is_bool_dtype(frame[name]):
            frame[name] = frame[name].map(format_value)
    path = Path(path)
    frame.to_csv(
        path,
        index=False,
        float_format=FLOAT_FORMAT,
        na_rep="",
        lineterminator="\n",
        encoding="utf-8",
    )
    LOG.debug("wrote %s (%d rows)", path, len(frame))
    return path


def write_text(path: Path, text: str) -> Path:
    """Write a plain-text report"""
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path


def point_id(kind: str, name: str, x: float, y: float) -> str:
    """SVG element id carrying the plotted data coordinates"""
    return f"{kind}|{name}|{format_value(x)}|{format_value(y)}"


def emit_svg_factor_map(
    factor_map: FactorMap,
    path: Path,
    axis_labels: Sequence[Optional[str]] = (),
    title: str = "Factorial map",
) -> Optional[Path]:
    """Plot cluster points on the first two factors

    A single factor is drawn as a horizontal strip. Without factors nothing
    is written and None is returned
    """
    if factor_map.n_factors == 0:
        LOG.warning(
            "no factors: rows and columns are independent, factor map not drawn"
        )
        return None
    coords = factor_map.col_coords
    xs = coords[:, 0]
    ys = coords[:, 1] if factor_map.n_factors > 1 else np.zeros(len(xs))
    share = factor_map.inertia_share
    style = {"svg.hashsalt": "forum-innovators", "svg.fonttype": "none"}
    with matplotlib.rc_context(style):
        fig = Figure(figsize=(6, 6 if factor_map.n_factors > 1 else 2))
        ax = fig.add_subplot()
        ax.axhline(0, color="grey", linewidth=0.8, gid="axis-horizontal")
        ax.axvline(0, color="grey", linewidth=0.8, gid="axis-vertical")
        for name, x, y in zip(factor_map.table.col_names, xs, ys):
            ax.plot([x], [y], "o", color="black", gid=point_id("cluster", name, x, y))
            ax.annotate(str(name), (x, y), textcoords="offset points", xytext=(6, 6))
        labels = list(axis_labels) + [None, None]
        ax.set_xlabel(_axis_title(1, share[0], labels[0]))
        if factor_map.n_factors > 1:
            ax.set_ylabel(_axis_title(2, share[1], labels[1]))
        else:
            ax.set_yticks([])
        ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    LOG.info("wrote factor map %s", path)
    return Path(path)


def _axis_title(factor: int, share: float, label: Optional[str]) -> str:
    text = f"Factor {factor} ({100 * share:.1f}%)"
    return f"{text}: {label}" if label else text


def sha256_file(path: Path) -> str:
    """Hex SHA-256 of a file's bytes"""
    digest = hashlib.sha256()
    with Path(path).open("rb") as data:
        for block in iter(lambda: data.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def library_versions() -> dict[str, Optional[str]]:
    """Installed versions of the numerical stack"""
    versions = {}
    for name in LIBRARIES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None
    return versions


def build_manifest(
    config_digest: str,
    seed: int,
    inputs: dict[str, Path],
    directory: Path,
    artifacts: Iterable[str],
) -> dict:
    """Reproducibility record of a bundle"""
    return {
        "package": "forum-innovators",
        "version": __version__,
        "python": platform.python_version(),
        "libraries": library_versions(),
        "seed": seed,
        "config_sha256": config_digest,
        "inputs": {
            name: sha256_file(p) for name, p in sorted(inputs.items()) if p is not None
        },
        "artifacts": {
            name: sha256_file(Path(directory) / name) for name in sorted(artifacts)
        },
    }


def write_manifest(path: Path, manifest: dict) -> Path:
    """Write the manifest as sorted, indented JSON"""
    return write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
