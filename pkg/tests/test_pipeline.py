"""
End to end pipeline and command line tests
"""

# stdlib
import csv
import json
import time
import xml.etree.ElementTree as ET
from pathlib import Path

# library
import pytest
from scipy.stats import binom

# module
from forum_innovators.cli import main
from forum_innovators.config import build_config
from forum_innovators.exceptions import ConfigError, StageError
from forum_innovators.pipeline import STAGES, resolve, run_pipeline
from forum_innovators.report import sha256_file
from forum_innovators.synth import SynthSpec, generate, write_synth

from tests.helpers import record

FAMILIES = {"corpus", "graph", "metrics", "etm", "ca", "table4", "table5", "manifest"}

# Generator settings with no difference between the groups
NULL_SPEC = SynthSpec(
    n_authors=150,
    n_innovators=1,
    innovator_reply_multiplier=1,
    innovator_post_multiplier=1,
    innovator_length_multiplier=1,
    innovator_novelty_rate=0,
    low_indegree_targeting=False,
    identical_vocabularies=True,
    seed=2,
)


def _inputs(directory: Path) -> dict[str, str]:
    """Null synthetic corpus with every fifth author labeled an innovator"""
    corpus, labels, truth = generate(NULL_SPEC)
    paths = write_synth(directory, corpus, labels, truth)
    flags = [f"{a},{int(i % 5 == 0)}" for i, a in enumerate(corpus.authors)]
    rows = ["author_id,innovator"] + flags
    paths["labels"].write_text("\n".join(rows) + "\n", encoding="utf-8")
    return {name: str(paths[name]) for name in ("posts", "labels", "lexicon")}


def _config(inputs: dict, output: Path, **changes):
    return build_config({"inputs": inputs, "output": str(output), **changes})


def test_resolve():
    """Targets pull in their dependencies in stage order"""
    assert resolve(["ca"]) == ["ingest", "etm", "ca"]
    assert resolve(["stats", "graph"]) == ["ingest", "graph", "metrics", "stats"]
    with pytest.raises(ValueError):
        resolve(["plots"])


def test_full_run(tmp_path):
    """Every artifact family is written and listed in the manifest"""
    output = tmp_path / "out"
    bundle = run_pipeline(_config(_inputs(tmp_path / "data"), output))
    assert bundle.families == FAMILIES
    assert bundle.directory == output
    for name in bundle.files():
        assert (output / name).is_file()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".out-")]
    manifest = json.loads((output / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["seed"] == 1
    assert set(manifest["inputs"]) == {"posts", "labels", "lexicon"}
    for name, digest in manifest["artifacts"].items():
        assert sha256_file(output / name) == digest
    assert "ca_factor_map.svg" in manifest["artifacts"]
    assert len(bundle.table) == len(bundle.table.index.unique())
    assert [r.name for r in bundle.blocks] == [f"Model {i}" for i in range(1, 7)]
    assert bundle.clustering.k >= 2


def test_deterministic_bundle(tmp_path):
    """Same inputs, config and seed give byte-identical artifacts"""
    inputs = _inputs(tmp_path / "data")
    first = run_pipeline(_config(inputs, tmp_path / "first"))
    second = run_pipeline(_config(inputs, tmp_path / "second"))
    assert first.files() == second.files()
    assert first.digest() == second.digest()


def test_partial_run(tmp_path):
    """A single target runs only what it depends on"""
    inputs = _inputs(tmp_path / "data")
    del inputs["lexicon"]
    bundle = run_pipeline(_config(inputs, tmp_path / "out"), ["graph"])
    assert bundle.families == {"corpus", "graph", "manifest"}
    with (tmp_path / "out" / "edges.csv").open(encoding="utf-8") as edges:
        assert next(csv.reader(edges)) == ["source", "target", "weight"]


def test_excluded_authors_vanish(tmp_path):
    """Excluded accounts are absent from the graph, metrics and language tables"""
    inputs = _inputs(tmp_path / "data")
    text = Path(inputs["posts"]).read_text(encoding="utf-8")
    posts = [json.loads(line) for line in text.splitlines()]
    dropped = sorted({p["author_id"] for p in posts if p["parent_post_id"] is None})[:3]
    exclusions = tmp_path / "staff.txt"
    exclusions.write_text("# staff\n" + "\n".join(dropped) + "\n", encoding="utf-8")
    output = tmp_path / "out"
    config = _config({**inputs, "exclude_authors": str(exclusions)}, output)
    bundle = run_pipeline(config, ["graph", "metrics"])
    with (output / "nodes.csv").open(encoding="utf-8") as nodes:
        node_ids = {row["author_id"] for row in csv.DictReader(nodes)}
    with (output / "edges.csv").open(encoding="utf-8") as edges:
        arc_ends = {
            a for row in csv.DictReader(edges) for a in (row["source"], row["target"])
        }
    with (output / "metrics.csv").open(encoding="utf-8") as metrics:
        metric_ids = {row["author_id"] for row in csv.DictReader(metrics)}
    for author in dropped:
        assert author not in node_ids
        assert author not in arc_ends
        assert author not in metric_ids
        assert author not in bundle.table.index
    assert node_ids == metric_ids
    assert set(bundle.manifest["inputs"]) >= {"posts", "exclude_authors"}


def test_stale_artifacts_removed(tmp_path):
    """A rerun into the same directory leaves only its own artifacts"""
    inputs = _inputs(tmp_path / "data")
    output = tmp_path / "out"
    run_pipeline(_config(inputs, output), ["metrics"])
    assert (output / "metrics.csv").is_file()
    (output / "notes.txt").write_text("kept\n", encoding="utf-8")
    bundle = run_pipeline(_config(inputs, output), ["graph"])
    assert not (output / "metrics.csv").exists()
    assert (output / "notes.txt").is_file()
    written = sorted(p.name for p in output.iterdir() if p.name != "notes.txt")
    assert written == bundle.files()


def test_cli_graph_flags(tmp_path):
    """Exclusion and thread opener flags reach the graph stage"""
    posts = tmp_path / "posts.jsonl"
    lines = [
        record("p1", "anna"),
        record("p2", "bruno", minute=1),
        record("p3", "carla", parent="p2", minute=2),
        record("p4", "staff", parent="p1", minute=3),
    ]
    posts.write_text("\n".join(lines) + "\n", encoding="utf-8")
    exclusions = tmp_path / "staff.txt"
    exclusions.write_text("staff\n", encoding="utf-8")
    common = ["graph", "-q", f"--posts={posts}", "--exclude-authors", str(exclusions)]

    def arcs(output: Path) -> set[tuple[str, str]]:
        with (output / "edges.csv").open(encoding="utf-8") as edges:
            return {(row["source"], row["target"]) for row in csv.DictReader(edges)}

    assert main([*common, "-o", str(tmp_path / "plain")]) == 0
    assert arcs(tmp_path / "plain") == {("carla", "bruno")}
    assert main([*common, "-o", str(tmp_path / "opener"), "--thread-opener-edges"]) == 0
    assert arcs(tmp_path / "opener") == {("carla", "bruno"), ("bruno", "anna")}
    with (tmp_path / "opener" / "nodes.csv").open(encoding="utf-8") as nodes:
        assert "staff" not in {row["author_id"] for row in csv.DictReader(nodes)}


def test_factor_map_matches_csv(tmp_path):
    """Plotted cluster points carry the coordinates written to CSV"""
    output = tmp_path / "out"
    run_pipeline(_config(_inputs(tmp_path / "data"), output), ["ca"])
    with (output / "ca_factor_map.csv").open(encoding="utf-8") as table:
        clusters = {
            row["entity"]: (row["factor1_coord"], row.get("factor2_coord") or "0")
            for row in csv.DictReader(table)
            if row["type"] == "cluster"
        }
    plotted = {}
    for element in ET.parse(output / "ca_factor_map.svg").iter():
        gid = element.get("id", "")
        if gid.startswith("cluster|"):
            _, name, x, y = gid.split("|")
            plotted[name] = (x, y)
    assert plotted == clusters


def test_missing_lexicon(tmp_path):
    """A stage without its input fails before anything is written"""
    inputs = _inputs(tmp_path / "data")
    del inputs["lexicon"]
    output = tmp_path / "out"
    with pytest.raises(ConfigError, match="lexicon"):
        run_pipeline(_config(inputs, output), ["metrics"])
    assert not output.exists()


def test_failing_stage_leaves_no_output(tmp_path):
    """Strict validation errors stop the run without partial output"""
    posts = tmp_path / "posts.jsonl"
    posts.write_text(record("p1", "a") + "\n{broken\n", encoding="utf-8")
    output = tmp_path / "out"
    config = build_config(
        {"inputs": {"posts": str(posts)}, "output": str(output), "strict": True}
    )
    with pytest.raises(StageError) as error:
        run_pipeline(config, ["ingest"])
    assert error.value.stage == "ingest"
    assert error.value.exit_code == 3
    assert not output.exists()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".out-")]


def test_cli_synth_run_report(tmp_path, capsys):
    """synth, run and report subcommands"""
    synth_dir = tmp_path / "synth"
    args = ["synth", "-q", "-o", str(synth_dir), "--seed", "3"]
    assert main(args + ["--set", "synth.n_authors=80"]) == 0
    assert (synth_dir / "posts.jsonl").is_file()
    assert (synth_dir / "truth.json").is_file()
    inputs = _inputs(tmp_path / "data")
    output = tmp_path / "out"
    args = ["-q", "-o", str(output)] + [f"--{k}={v}" for k, v in inputs.items()]
    capsys.readouterr()
    assert main(["run", *args]) == 0
    printed = capsys.readouterr().out
    assert "Model 6" in printed
    assert "Mann-Whitney p" in printed
    original = (output / "table4.txt").read_text(encoding="utf-8")
    assert main(["report", "-q", "-o", str(output)]) == 0
    assert (output / "table4.txt").read_text(encoding="utf-8") == original
    assert "McFadden R2" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path):
    """Configuration, validation and missing bundle failures map to exit codes"""
    inputs = _inputs(tmp_path / "data")
    posts = f"--posts={inputs['posts']}"
    out = f"--out={tmp_path / 'out'}"
    assert main(["metrics", "-q", posts, out]) == 2
    assert main(["run", "-q", "-c", str(tmp_path / "missing.yaml")]) == 2
    assert main(["run", "-q", posts, out, "--set", "etm.k_min=1"]) == 2
    assert main(["report", "-q", f"--out={tmp_path / 'empty'}"]) == 2
    broken = tmp_path / "broken.jsonl"
    broken.write_text(record("p1", "a") + "\nnot json\n", encoding="utf-8")
    assert main(["ingest", "-q", "--strict", f"--posts={broken}", out]) == 3
    assert not (tmp_path / "out").exists()


# Metrics the generator raises for innovators
PLANTED = ("out_degree", "out_distinctiveness", "word_count", "novelty")


def _planted_run(directory: Path, spec: SynthSpec, targets=("stats",)):
    corpus, labels, truth = generate(spec)
    paths = write_synth(directory / "data", corpus, labels, truth)
    inputs = {name: str(paths[name]) for name in ("posts", "labels", "lexicon")}
    return run_pipeline(_config(inputs, directory / "out"), targets)


@pytest.mark.slow
def test_planted_signal_detected(tmp_path):
    """Planted innovators differ on the planted metrics and are ranked well"""
    aucs = []
    for seed in range(5):
        spec = SynthSpec(n_authors=5000, n_innovators=50, seed=seed)
        bundle = _planted_run(tmp_path / str(seed), spec)
        rows = {row.metric: row for row in bundle.comparison}
        for metric in PLANTED:
            assert rows[metric].significant
            assert rows[metric].innovator_mean > rows[metric].other_mean
        aucs.append(max(block.auc for block in bundle.blocks))
    assert sorted(aucs)[2] >= 0.85


@pytest.mark.slow
def test_null_false_positives(tmp_path):
    """Without planted effects few metric rows come out significant"""
    flagged = total = 0
    for seed in range(5):
        spec = SynthSpec(
            n_authors=2000,
            n_innovators=400,
            innovator_reply_multiplier=1,
            innovator_post_multiplier=1,
            innovator_length_multiplier=1,
            innovator_novelty_rate=0,
            low_indegree_targeting=False,
            identical_vocabularies=True,
            seed=seed,
        )
        bundle = _planted_run(tmp_path / str(seed), spec)
        flagged += sum(row.significant for row in bundle.comparison)
        total += len(bundle.comparison)
    # one-sided binomial bound around the nominal 5% rate
    assert flagged <= binom.ppf(0.999, total, 0.05)


@pytest.mark.slow
def test_scale_run(tmp_path):
    """Forum sized corpus runs through every stage in bounded time"""
    spec = SynthSpec(n_authors=11000, n_innovators=100, single_post_share=0.2, seed=1)
    start = time.perf_counter()
    bundle = _planted_run(tmp_path, spec, STAGES)
    assert time.perf_counter() - start < 600
    assert bundle.families == FAMILIES
    with (tmp_path / "out" / "corpus_summary.csv").open(encoding="utf-8") as summary:
        assert int(next(csv.DictReader(summary))["posts"]) > 35000
