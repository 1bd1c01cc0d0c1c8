"""
Stage orchestration and report bundle assembly
"""

# pylint: disable=too-many-instance-attributes

# stdlib
import hashlib
import json
import logging
import os
import shutil
import tempfile
from dataclasses import asdict, dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

# library
import pandas as pd

# module
from forum_innovators import ca as ca_module
from forum_innovators import etm, report
from forum_innovators.config import PipelineConfig
from forum_innovators.corpus import (
    Corpus,
    LabelMap,
    corpus_summary,
    exclude_authors,
    lexical_indices,
    load_exclusions,
    parse_labels,
    parse_posts,
    posts_per_author,
)
from forum_innovators.graph import (
    ReplyGraph,
    build_graph,
    edge_rows,
    graph_summary,
    node_rows,
)
from forum_innovators.metrics.language import all_language_profiles
from forum_innovators.metrics.network import all_centralities
from forum_innovators.metrics.table import METRIC_COLUMNS, metrics_table
from forum_innovators.stats import groups
from forum_innovators.text import Analyzer, load_lexicon
from forum_innovators.util.handler import stage_handler

LOG = logging.getLogger(__name__)

STAGES = ("ingest", "graph", "metrics", "etm", "ca", "stats")

DEPENDS = {
    "ingest": (),
    "graph": ("ingest",),
    "metrics": ("graph",),
    "etm": ("ingest",),
    "ca": ("etm",),
    "stats": ("metrics",),
}

# Input paths a stage cannot run without
REQUIRES = {
    "ingest": ("posts",),
    "metrics": ("lexicon",),
    "stats": ("labels",),
}


def resolve(targets: Iterable[str]) -> list[str]:
    """Requested stages plus their dependencies in execution order"""
    needed = set()

    def visit(stage: str):
        if stage not in DEPENDS:
            raise ValueError(f"unknown stage '{stage}'")
        needed.add(stage)
        for parent in DEPENDS[stage]:
            visit(parent)

    for target in targets:
        visit(target)
    return [s for s in STAGES if s in needed]


def _read_lines(path: str) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


@dataclass
class ReportBundle:
    """Everything a run produced, with artifact file names per family"""

    directory: Path
    artifacts: dict[str, list[str]] = field(default_factory=dict)
    manifest: dict = field(default_factory=dict)
    table: Optional[pd.DataFrame] = None
    clustering: Optional[etm.Clustering] = None
    keywords: Optional[etm.KeywordTable] = None
    scores: Optional[etm.ValidationScores] = None
    factor_map: Optional[ca_module.FactorMap] = None
    comparison: list = field(default_factory=list)
    blocks: list = field(default_factory=list)

    @property
    def families(self) -> set[str]:
        """Artifact families present in the bundle"""
        return {name for name, files in self.artifacts.items() if files}

    def files(self) -> list[str]:
        """All artifact file names"""
        return sorted(f for files in self.artifacts.values() for f in files)

    def digest(self) -> str:
        """SHA-256 over the artifact digests recorded in the manifest"""
        artifacts = sorted(self.manifest.get("artifacts", {}).items())
        text = "\n".join(f"{k} {v}" for k, v in artifacts)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


class Pipeline:
    """Runs pipeline stages against one config, caching intermediate results

    Artifacts are written to the given directory; run_pipeline points it at
    a staging directory and commits the files only on success
    """

    config: PipelineConfig
    directory: Path
    bundle: ReportBundle

    def __init__(self, config: PipelineConfig, directory: Optional[Path] = None):
        self.config = config
        self.directory = Path(directory or config.output)
        self.bundle = ReportBundle(self.directory)
        self._tdm: Optional[etm.TermDocMatrix] = None

    def _write(self, family: str, name: str, rows, columns=None, **kwargs) -> str:
        report.write_csv(self.directory / name, rows, columns, **kwargs)
        self.bundle.artifacts.setdefault(family, []).append(name)
        return name

    def _write_text(self, family: str, name: str, text: str) -> str:
        report.write_text(self.directory / name, text)
        self.bundle.artifacts.setdefault(family, []).append(name)
        return name

    # Cached stage inputs

    @cached_property
    def analyzer(self) -> Analyzer:
        """Stop-words, lemmas and stemmer from config or packaged defaults"""
        inputs = self.config.inputs
        return Analyzer.from_files(
            inputs.stopwords, inputs.lemmas, self.config.text.stemmer
        )

    @cached_property
    def excluded(self) -> frozenset[str]:
        """Author ids dropped before any stage"""
        path = self.config.inputs.exclude_authors
        return load_exclusions(_read_lines(path)) if path else frozenset()

    @cached_property
    def corpus(self) -> Corpus:
        """Validated corpus without excluded authors"""
        inputs = self.config.inputs
        lines = _read_lines(inputs.posts)
        corpus = parse_posts(lines, self.config.strict, inputs.posts)
        return exclude_authors(corpus, self.excluded)

    @cached_property
    def labels(self) -> LabelMap:
        """Innovator flags, everyone a non-innovator without a labels file"""
        path = self.config.inputs.labels
        if path is None:
            return LabelMap(self.corpus.authors)
        # blank rather than drop excluded rows to keep line numbers
        lines = [
            "" if line.split(",", 1)[0].strip() in self.excluded else line
            for line in _read_lines(path)
        ]
        return parse_labels(lines, self.corpus, self.config.strict, path)

    @cached_property
    def graph(self) -> ReplyGraph:
        """Author reply network"""
        return build_graph(self.corpus, self.config.graph.thread_opener_edges)

    @cached_property
    def table(self) -> pd.DataFrame:
        """Per-author network and language metrics"""
        network = self.config.network
        centralities = all_centralities(
            self.graph, network.closeness, network.distinctiveness, self.config.threads
        )
        lexicon = load_lexicon(Path(self.config.inputs.lexicon))
        profiles = all_language_profiles(self.corpus, lexicon, self.analyzer)
        return metrics_table(centralities, profiles, self.labels)

    # Stages

    def ingest(self):
        """Corpus descriptives and validation issues"""
        summary = corpus_summary(self.corpus)
        self._write("corpus", "corpus_summary.csv", [asdict(summary)])
        lexical = lexical_indices(self.corpus)
        self._write(
            "corpus",
            "lexical_indices.csv",
            [
                {
                    **asdict(lexical),
                    "type_token_ratio": lexical.type_token_ratio,
                    "hapax_pct": lexical.hapax_pct,
                }
            ],
        )
        buckets = posts_per_author(self.corpus, self.labels)
        self._write("corpus", "posts_per_author.csv", buckets)
        issues = [
            {"source": r.source, **asdict(issue)}
            for r in (self.corpus.report, self.labels.report)
            if r is not None
            for issue in r.issues
        ]
        columns = ("source", "line", "code", "message", "fatal")
        self._write("corpus", "validation_issues.csv", issues, columns)

    def graph_stage(self):
        """Edge and node lists with the network summary"""
        edges = pd.DataFrame(
            list(edge_rows(self.graph)), columns=["source", "target", "weight"]
        )
        self._write("graph", "edges.csv", edges)
        nodes = pd.DataFrame(
            list(node_rows(self.graph)), columns=["author_id", "index"]
        )
        self._write("graph", "nodes.csv", nodes)
        self._write("graph", "graph_summary.csv", [asdict(graph_summary(self.graph))])

    def metrics(self):
        """Per-author metrics CSV"""
        self.bundle.table = self.table
        self._write(
            "metrics",
            "metrics.csv",
            self.table,
            ["author_id", *METRIC_COLUMNS, "innovator"],
            index=True,
        )

    def etm(self):
        """Clusters, validity indices, keywords and group association"""
        cfg = self.config.etm
        docs = etm.preprocess(self.corpus, self.analyzer)
        vocab = etm.select_terms(docs, cfg.min_doc_freq, cfg.high_freq_cutoff)
        tdm = etm.build_tdm(docs, vocab, cfg.weighting)
        k_max = min(cfg.k_max, len(tdm.doc_ids))
        seed = self.config.seed
        ks = range(cfg.k_min, k_max + 1)
        scores = etm.validate_clusters(tdm, ks, seed, cfg.restarts, cfg.max_iter)
        k = etm.select_k(scores, cfg.k)
        LOG.info("clustering with k=%d", k)
        clustering = etm.bisecting_kmeans(tdm, k, seed, cfg.restarts, cfg.max_iter)
        keywords = etm.cluster_keywords(tdm, clustering, cfg.top_n, cfg.keyword_unit)
        self.bundle.clustering = clustering
        self.bundle.keywords = keywords
        self.bundle.scores = scores
        self._tdm = tdm
        assignment = clustering.assignment()
        self._write(
            "etm",
            "etm_assignments.csv",
            [{"post_id": d.doc_id, "cluster": assignment.get(d.doc_id)} for d in docs],
            ("post_id", "cluster"),
        )
        self._write(
            "etm",
            "etm_validation.csv",
            [
                {
                    "k": r.k,
                    "CH": r.calinski_harabasz,
                    "DB": r.davies_bouldin,
                    "rho": r.rho,
                }
                for r in scores.records
            ],
            ("k", "CH", "DB", "rho"),
        )
        self._write(
            "etm",
            "etm_keywords.csv",
            [
                {"cluster": cid, "rank": rank, **asdict(kw)}
                for cid, kws in keywords.keywords.items()
                for rank, kw in enumerate(kws, start=1)
            ],
            ("cluster", "rank", "lemma", "chi2", "in_count", "out_count"),
        )
        summary = {
            "documents": tdm.total,
            "classified": len(tdm.doc_ids),
            "unclassified": len(tdm.unclassified),
            "coverage": tdm.coverage,
            "vocabulary": len(vocab),
            "k": k,
        }
        if self.labels.has_both_groups:
            flags = etm.author_groups(self.corpus, self.labels, clustering.doc_ids)
            test = etm.group_cluster_chi2(clustering, flags)
            summary.update(
                group_chi2=test.statistic, group_df=test.df, group_p=test.p_value
            )
            profile = etm.cluster_profile(clustering, flags)
            self._write("etm", "etm_profile.csv", profile)
        else:
            LOG.warning("labels do not cover both groups; group x cluster test skipped")
        self._write("etm", "etm_summary.csv", [summary])

    def ca(self):
        """Factor map of the term x cluster table"""
        counts, terms = etm.term_cluster_counts(self._tdm, self.bundle.clustering)
        names = [str(c) for c in range(1, self.bundle.clustering.k + 1)]
        table = ca_module.ContingencyTable(counts, terms, tuple(names))
        factor_map = ca_module.ca(table)
        self.bundle.factor_map = factor_map
        coords = [f"factor{f + 1}_coord" for f in range(factor_map.n_factors)]
        rows = ca_module.factor_rows(factor_map)
        self._write("ca", "ca_factor_map.csv", rows, ["entity", "type"] + coords)
        self._write(
            "ca",
            "ca_contributions.csv",
            ca_module.contribution_rows(factor_map),
            ("term", "factor", "ac", "pole"),
        )
        self._write(
            "ca",
            "ca_inertia.csv",
            ca_module.inertia_rows(factor_map),
            ("factor", "singular_value", "inertia", "share"),
        )
        self._write("ca", "ca_clusters.csv", ca_module.cluster_positioning(factor_map))
        if self.config.ca.svg:
            path = report.emit_svg_factor_map(
                factor_map,
                self.directory / "ca_factor_map.svg",
                self.config.ca.axis_labels,
            )
            if path is not None:
                self.bundle.artifacts["ca"].append(path.name)

    def stats(self):
        """Group comparison and logistic regression blocks"""
        self.labels.require_both_groups()
        cfg = self.config.stats
        rows = groups.compare_groups(
            self.table, METRIC_COLUMNS, cfg.alpha, cfg.significance_rule
        )
        frame = groups.comparison_frame(rows)
        self.bundle.comparison = rows
        self._write("table4", "table4.csv", frame)
        self._write_text("table4", "table4.txt", groups.render_comparison(frame))
        results = groups.model_blocks(
            self.table, cfg.blocks, cfg.standardize, cfg.vif_threshold
        )
        blocks = groups.block_frame(results)
        self.bundle.blocks = results
        self._write("table5", "table5.csv", blocks)
        self._write_text("table5", "table5.txt", groups.render_blocks(blocks))

    def check_inputs(self, stages: Iterable[str]):
        """Fail before any computation if a stage lacks an input file"""
        needed = [name for stage in stages for name in REQUIRES.get(stage, ())]
        self.config.require(*dict.fromkeys(needed))

    def execute(self, stages: Iterable[str]) -> ReportBundle:
        """Run stages in order, then write the manifest"""
        stages = list(stages)
        self.check_inputs(stages)
        self.directory.mkdir(parents=True, exist_ok=True)
        runners = {"graph": self.graph_stage}
        for stage in stages:
            with stage_handler(stage):
                runners.get(stage, getattr(self, stage))()
        inputs = {
            name: Path(path)
            for name, path in asdict(self.config.inputs).items()
            if path is not None
        }
        manifest = report.build_manifest(
            self.config.digest(),
            self.config.seed,
            inputs,
            self.directory,
            self.bundle.files(),
        )
        report.write_manifest(self.directory / "manifest.json", manifest)
        self.bundle.manifest = manifest
        self.bundle.artifacts["manifest"] = ["manifest.json"]
        return self.bundle


def _previous_artifacts(output: Path) -> set[str]:
    """Artifact names listed in the manifest of an earlier run, if any"""
    path = output / "manifest.json"
    if not path.is_file():
        return set()
    try:
        return set(json.loads(path.read_text(encoding="utf-8")).get("artifacts", {}))
    except (ValueError, AttributeError):
        LOG.warning("ignoring unreadable manifest %s", path)
        return set()


def _commit(staging: Path, output: Path, names: Iterable[str]):
    """Move finished artifacts into the output directory

    Artifacts of an earlier run that this run did not produce are removed
    """
    names = list(names)
    stale = _previous_artifacts(output) - set(names)
    output.mkdir(parents=True, exist_ok=True)
    for name in names:
        os.replace(staging / name, output / name)
    for name in sorted(stale):
        path = output / Path(name).name
        if path.is_file():
            LOG.info("removing stale artifact %s", path)
            path.unlink()


def run_pipeline(
    config: PipelineConfig, targets: Iterable[str] = STAGES
) -> ReportBundle:
    """Run the requested stages and their dependencies into config.output

    Artifacts are built in a staging directory beside the output and moved
    into place only when every stage succeeded
    """
    stages = resolve(targets)
    output = Path(config.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{output.name}-", dir=output.parent))
    try:
        bundle = Pipeline(config, staging).execute(stages)
        _commit(staging, output, bundle.files())
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    bundle.directory = output
    LOG.info("wrote %d artifacts to %s", len(bundle.files()), output)
    return bundle
