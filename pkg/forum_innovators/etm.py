"""
Emotional Text Mining: term selection, document clustering and keywords
"""

# pylint: disable=too-many-arguments,too-many-locals

# stdlib
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

# library
import numpy as np
from scipy import sparse
from scipy.stats import rankdata

# module
from forum_innovators.corpus import Corpus, LabelMap
from forum_innovators.exceptions import (
    ConfigError,
    EmptyVocabularyError,
    InsufficientDataError,
    NumericalError,
    ValidationError,
)
from forum_innovators.stats.hypothesis import TestResult, chi2_independence
from forum_innovators.text import Analyzer

LOG = logging.getLogger(__name__)

# Objective decreases smaller than this are float noise
OBJECTIVE_TOL = 1e-9
# Clusters of (numerically) identical rows cannot be split
MIN_SCATTER = 1e-10


@dataclass(frozen=True)
class ProcessedDoc:
    """Lemma stream of one post"""

    doc_id: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class TermVocabulary:
    """Selected terms with corpus and document frequencies"""

    terms: tuple[str, ...]
    corpus_freq: tuple[int, ...]
    doc_freq: tuple[int, ...]

    @property
    def index(self) -> dict[str, int]:
        """Term to column index"""
        return {t: i for i, t in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True, eq=False)
class TermDocMatrix:
    """Term occurrences of classifiable documents

    counts holds raw occurrences; matrix is the clustering view, binary
    presence by default
    """

    doc_ids: tuple[str, ...]
    terms: tuple[str, ...]
    counts: sparse.csr_matrix
    unclassified: tuple[str, ...]
    weighting: str = "binary"

    @property
    def matrix(self) -> sparse.csr_matrix:
        """Presence or count matrix, rows = documents"""
        if self.weighting == "count":
            return self.counts.astype(float)
        presence = self.counts.copy().astype(float)
        presence.data[:] = 1.0
        return presence

    def unit_rows(self) -> sparse.csr_matrix:
        """Rows scaled to unit Euclidean length"""
        matrix = self.matrix
        norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
        return sparse.diags(1 / norms) @ matrix

    @property
    def total(self) -> int:
        """Classified plus unclassified documents"""
        return len(self.doc_ids) + len(self.unclassified)

    @property
    def coverage(self) -> float:
        """Share of documents with at least one selected term"""
        return len(self.doc_ids) / self.total if self.total else 0.0


@dataclass(frozen=True, eq=False)
class Clustering:
    """Partition of the classifiable documents

    labels are cluster ids 1..k, numbered by decreasing cluster size
    """

    k: int
    labels: np.ndarray
    centroids: np.ndarray
    doc_ids: tuple[str, ...]
    coverage: float
    split_traces: tuple[tuple[float, ...], ...] = field(default=(), compare=False)

    def assignment(self) -> dict[str, int]:
        """Document id to cluster id"""
        return dict(zip(self.doc_ids, (int(c) for c in self.labels)))

    def sizes(self) -> dict[int, int]:
        """Cluster id to document count"""
        return {c: int(np.sum(self.labels == c)) for c in range(1, self.k + 1)}


@dataclass(frozen=True)
class ValidityRecord:
    """Validity indices of one partition"""

    k: int
    calinski_harabasz: float
    davies_bouldin: float
    rho: float


@dataclass(frozen=True)
class ValidationScores:
    """Validity indices for each candidate cluster count"""

    records: tuple[ValidityRecord, ...]

    def __getitem__(self, k: int) -> ValidityRecord:
        for record in self.records:
            if record.k == k:
                return record
        raise KeyError(k)

    @property
    def ks(self) -> tuple[int, ...]:
        """Candidate cluster counts"""
        return tuple(r.k for r in self.records)


@dataclass(frozen=True)
class Keyword:
    """A term characterizing a cluster"""

    lemma: str
    chi2: float
    in_count: int
    out_count: int


@dataclass(frozen=True)
class KeywordTable:
    """Top chi-squared keywords and message share per cluster"""

    keywords: dict[int, tuple[Keyword, ...]]
    shares: dict[int, float]


def preprocess(corpus: Corpus, analyzer: Analyzer) -> list[ProcessedDoc]:
    """Stop-word removal and lemmatization of every post"""
    return [
        ProcessedDoc(p.post_id, tuple(analyzer.lemmatize(p.text)))
        for p in corpus.posts
    ]


def select_terms(
    docs: Sequence[ProcessedDoc], min_doc_freq: int = 5, high_freq_cutoff: float = 0.5
) -> TermVocabulary:
    """Keep terms of medium rank frequency

    A term is kept when min_doc_freq <= document frequency <= cutoff x #docs.
    Terms are ordered by decreasing corpus frequency, then alphabetically
    """
    if min_doc_freq < 2:
        raise ConfigError("min_doc_freq must be at least 2")
    if not 0 < high_freq_cutoff <= 1:
        raise ConfigError("high_freq_cutoff must be a fraction in (0, 1]")
    corpus_freq, doc_freq = Counter(), Counter()
    for doc in docs:
        corpus_freq.update(doc.tokens)
        doc_freq.update(set(doc.tokens))
    ceiling = high_freq_cutoff * len(docs)
    kept = [t for t, df in doc_freq.items() if min_doc_freq <= df <= ceiling]
    if not kept:
        raise EmptyVocabularyError(
            f"no term has document frequency in [{min_doc_freq}, {ceiling:g}]; "
            "lower etm.min_doc_freq or raise etm.high_freq_cutoff"
        )
    kept.sort(key=lambda t: (-corpus_freq[t], t))
    LOG.info("selected %d of %d terms", len(kept), len(doc_freq))
    return TermVocabulary(
        terms=tuple(kept),
        corpus_freq=tuple(corpus_freq[t] for t in kept),
        doc_freq=tuple(doc_freq[t] for t in kept),
    )


def build_tdm(
    docs: Sequence[ProcessedDoc], vocab: TermVocabulary, weighting: str = "binary"
) -> TermDocMatrix:
    """Term-document matrix over the vocabulary

    Documents without any selected term are listed as unclassified
    """
    index = vocab.index
    rows, cols, vals = [], [], []
    doc_ids, unclassified = [], []
    for doc in docs:
        counts = Counter(index[t] for t in doc.tokens if t in index)
        if not counts:
            unclassified.append(doc.doc_id)
            continue
        row = len(doc_ids)
        doc_ids.append(doc.doc_id)
        for col in sorted(counts):
            rows.append(row)
            cols.append(col)
            vals.append(counts[col])
    counts = sparse.csr_matrix(
        (np.array(vals, dtype=np.int64), (rows, cols)), shape=(len(doc_ids), len(vocab))
    )
    tdm = TermDocMatrix(
        tuple(doc_ids), vocab.terms, counts, tuple(unclassified), weighting
    )
    LOG.info("term-document matrix covers %.1f%% of documents", 100 * tdm.coverage)
    return tdm


def _normalize(vector: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vector)
    return vector / norm if norm > 0 else vector


def _farthest_pair(
    rows: sparse.csr_matrix, rng: np.random.Generator
) -> tuple[int, int]:
    """Seeds for 2-means

    The point least similar to a random start, then its own farthest point
    """
    start = int(rng.integers(rows.shape[0]))
    first = int(np.argmin((rows @ rows[start].T).toarray().ravel()))
    second = int(np.argmin((rows @ rows[first].T).toarray().ravel()))
    if second == first:
        second = start if start != first else (first + 1) % rows.shape[0]
    return first, second


def two_means(
    rows: sparse.csr_matrix,
    rng: np.random.Generator,
    restarts: int = 10,
    max_iter: int = 100,
) -> tuple[np.ndarray, float, tuple[float, ...]]:
    """Spherical 2-means on unit rows, best of several seeded restarts

    Returns 0/1 labels, the objective (sum of cosines to the assigned
    centroid) and that restart's per-iteration objective trace
    """
    best: Optional[tuple[np.ndarray, float, tuple[float, ...]]] = None
    for _ in range(restarts):
        first, second = _farthest_pair(rows, rng)
        centroids = np.vstack([rows[first].toarray(), rows[second].toarray()])
        labels, trace = None, []
        for _ in range(max_iter):
            sims = np.asarray(rows @ centroids.T)
            new_labels = (sims[:, 1] > sims[:, 0]).astype(int)
            trace.append(float(sims[np.arange(len(new_labels)), new_labels].sum()))
            if labels is not None and np.array_equal(new_labels, labels):
                break
            labels = new_labels
            if labels.min() == labels.max():
                break
            centroids = np.vstack(
                [
                    _normalize(np.asarray(rows[labels == c].sum(axis=0)).ravel())
                    for c in (0, 1)
                ]
            )
        if labels.min() == labels.max():
            continue
        for before, after in zip(trace, trace[1:]):
            if after < before - OBJECTIVE_TOL * max(1.0, abs(before)):
                raise NumericalError("2-means objective decreased between iterations")
        objective = trace[-1]
        if best is None or objective > best[1]:
            best = (labels, objective, tuple(trace))
    if best is None:
        raise NumericalError("2-means could not split the cluster in two")
    return best


def _scatter(rows: sparse.csr_matrix) -> float:
    """Sum of squared distances to the cluster mean"""
    total = np.asarray(rows.sum(axis=0)).ravel()
    sq = rows.multiply(rows).sum()
    return float(sq - total @ total / rows.shape[0])


def _bisect(
    rows: sparse.csr_matrix, k_max: int, seed: int, restarts: int, max_iter: int
) -> Iterator[tuple[list[np.ndarray], tuple[tuple[float, ...], ...]]]:
    """Yield the member lists after every split, from 2 up to k_max clusters

    Stops early once every cluster holds identical rows
    """
    streams = np.random.SeedSequence(seed).spawn(max(1, k_max - 1))
    clusters = [np.arange(rows.shape[0])]
    traces = []
    for split in range(k_max - 1):
        scatters = [
            _scatter(rows[members]) if len(members) > 1 else -1.0
            for members in clusters
        ]
        target = int(np.argmax(scatters))
        if scatters[target] <= MIN_SCATTER:
            LOG.warning("no cluster can be split further at k=%d", len(clusters))
            return
        members = clusters.pop(target)
        labels, _, trace = two_means(
            rows[members], np.random.default_rng(streams[split]), restarts, max_iter
        )
        clusters[target:target] = [members[labels == 0], members[labels == 1]]
        traces.append(trace)
        yield clusters, tuple(traces)


def _clustering(
    rows: sparse.csr_matrix, tdm: TermDocMatrix, clusters: list[np.ndarray], traces
) -> Clustering:
    """Number clusters by decreasing size, first member breaking ties"""
    ordered = sorted(clusters, key=lambda m: (-len(m), int(m.min())))
    labels = np.zeros(rows.shape[0], dtype=int)
    centroids = []
    for cid, members in enumerate(ordered, start=1):
        labels[members] = cid
        centroids.append(_normalize(np.asarray(rows[members].mean(axis=0)).ravel()))
    return Clustering(
        k=len(ordered),
        labels=labels,
        centroids=np.vstack(centroids),
        doc_ids=tdm.doc_ids,
        coverage=tdm.coverage,
        split_traces=traces,
    )


def bisecting_kmeans(
    tdm: TermDocMatrix, k: int, seed: int = 1, restarts: int = 10, max_iter: int = 100
) -> Clustering:
    """Bisecting k-means with cosine similarity

    Repeatedly splits the cluster with the largest within-cluster scatter
    by spherical 2-means until k clusters exist
    """
    if k < 2:
        raise ConfigError("k must be at least 2")
    if k > len(tdm.doc_ids):
        raise InsufficientDataError(
            f"k={k} exceeds the {len(tdm.doc_ids)} classifiable documents"
        )
    rows = tdm.unit_rows()
    reached = 1
    for clusters, traces in _bisect(rows, k, seed, restarts, max_iter):
        if len(clusters) == k:
            return _clustering(rows, tdm, clusters, traces)
        reached = len(clusters)
    raise NumericalError(f"no cluster can be split further at k={reached}")


def validity_indices(
    rows: sparse.csr_matrix, labels: np.ndarray
) -> tuple[float, float, float]:
    """Calinski-Harabasz, Davies-Bouldin and between/total sum of squares

    All three in Euclidean geometry
    """
    n = rows.shape[0]
    ids = np.unique(labels)
    k = len(ids)
    mean = np.asarray(rows.mean(axis=0)).ravel()
    sq_norms = np.asarray(rows.multiply(rows).sum(axis=1)).ravel()
    total_ss = float(sq_norms.sum() - n * mean @ mean)
    centers, within, spread = [], 0.0, []
    between = 0.0
    for cid in ids:
        members = labels == cid
        block = rows[members]
        center = np.asarray(block.mean(axis=0)).ravel()
        dist_sq = sq_norms[members] - 2 * (block @ center) + center @ center
        dist_sq = np.clip(dist_sq, 0, None) if members.sum() > 1 else np.zeros(1)
        within += float(dist_sq.sum())
        between += float(members.sum() * (center - mean) @ (center - mean))
        spread.append(float(np.sqrt(dist_sq).mean()))
        centers.append(center)
    if within <= 0:
        ch = float("inf")
    else:
        ch = (between / (k - 1)) / (within / (n - k)) if n > k else float("inf")
    centers = np.vstack(centers)
    gaps = np.sqrt(
        np.clip(((centers[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2), 0, None)
    )
    spread = np.array(spread)
    ratios = []
    for i in range(k):
        others = [
            (spread[i] + spread[j]) / gaps[i, j]
            for j in range(k)
            if j != i and gaps[i, j] > 0
        ]
        ratios.append(max(others) if others else 0.0)
    db = float(np.mean(ratios))
    rho = between / total_ss if total_ss > 0 else 0.0
    return ch, db, rho


def validate_clusters(
    tdm: TermDocMatrix,
    k_range: Sequence[int],
    seed: int = 1,
    restarts: int = 10,
    max_iter: int = 100,
) -> ValidationScores:
    """Validity indices of the bisecting solutions for every k in range

    Bisection is sequential, so one run to max(k_range) yields every
    smaller solution with the same seed. Counts above the number of
    distinct rows cannot be reached and get no record
    """
    ks = sorted(set(k_range))
    if not ks or ks[0] < 2 or ks[-1] > len(tdm.doc_ids):
        raise ConfigError(f"k range must lie within [2, {len(tdm.doc_ids)}]")
    rows = tdm.unit_rows()
    records = []
    for clusters, _ in _bisect(rows, ks[-1], seed, restarts, max_iter):
        if len(clusters) in ks:
            labels = np.zeros(rows.shape[0], dtype=int)
            for cid, members in enumerate(clusters):
                labels[members] = cid
            ch, db, rho = validity_indices(rows, labels)
            records.append(ValidityRecord(len(clusters), ch, db, rho))
            LOG.info("k=%d CH=%.4g DB=%.4g rho=%.4g", len(clusters), ch, db, rho)
    return ValidationScores(tuple(records))


def select_k(scores: ValidationScores, override: Optional[int] = None) -> int:
    """Cluster count with the best CH plus DB rank sum, smaller k on ties"""
    if override is not None:
        return override
    if not scores.records:
        raise InsufficientDataError("documents do not support two distinct clusters")
    if len(scores.records) == 1:
        return scores.records[0].k
    ch_rank = rankdata([-r.calinski_harabasz for r in scores.records], method="min")
    db_rank = rankdata([r.davies_bouldin for r in scores.records], method="min")
    totals = ch_rank + db_rank
    best = min(range(len(totals)), key=lambda i: (totals[i], scores.records[i].k))
    return scores.records[best].k


def chi2_2x2(a: float, b: float, c: float, d: float) -> float:
    """Pearson chi-squared of [[a, b], [c, d]] without continuity correction"""
    n = a + b + c + d
    denominator = (a + b) * (c + d) * (a + c) * (b + d)
    if denominator == 0:
        return 0.0
    return n * (a * d - b * c) ** 2 / denominator


def cluster_keywords(
    tdm: TermDocMatrix,
    clustering: Clustering,
    top_n: int = 10,
    unit: str = "occurrence",
) -> KeywordTable:
    """Top chi-squared terms over-represented in each cluster

    Each term/cluster pair is tested on the 2x2 table of the term's count
    inside versus outside the cluster against the cluster totals
    """
    counts = tdm.counts if unit == "occurrence" else (tdm.counts > 0).astype(np.int64)
    counts = sparse.csr_matrix(counts)
    keywords, shares = {}, {}
    grand = np.asarray(counts.sum(axis=0)).ravel()
    if unit == "occurrence":
        grand_total = int(counts.sum())
    else:
        grand_total = counts.shape[0]
    for cid in range(1, clustering.k + 1):
        members = clustering.labels == cid
        inside = np.asarray(counts[members].sum(axis=0)).ravel()
        in_total = int(inside.sum()) if unit == "occurrence" else int(members.sum())
        out_total = grand_total - in_total
        ranked = []
        for col, term in enumerate(tdm.terms):
            a, b = int(inside[col]), int(grand[col] - inside[col])
            if in_total == 0 or out_total == 0 or a / in_total <= b / out_total:
                continue
            value = chi2_2x2(a, in_total - a, b, out_total - b)
            ranked.append(Keyword(term, value, a, b))
        ranked.sort(key=lambda kw: (-kw.chi2, kw.lemma))
        keywords[cid] = tuple(ranked[:top_n])
        shares[cid] = float(members.mean())
    return KeywordTable(keywords, shares)


def author_groups(
    corpus: Corpus, labels: LabelMap, doc_ids: Sequence[str]
) -> list[bool]:
    """Innovator flag of each document's author"""
    return [labels[corpus.by_id[d].author_id] for d in doc_ids]


def group_cluster_table(
    clustering: Clustering, groups: Sequence[bool]
) -> np.ndarray:
    """2 x k message counts, innovators first"""
    table = np.zeros((2, clustering.k), dtype=np.int64)
    for flag, cid in zip(groups, clustering.labels):
        table[0 if flag else 1, cid - 1] += 1
    return table


def group_cluster_chi2(clustering: Clustering, groups: Sequence[bool]) -> TestResult:
    """Chi-squared test of independence between author group and cluster"""
    table = group_cluster_table(clustering, groups)
    if (table.sum(axis=1) == 0).any():
        raise ValidationError("group x cluster table has an empty group")
    if (table.sum(axis=0) == 0).any():
        raise ValidationError("group x cluster table has an empty cluster")
    return chi2_independence(table)


def cluster_profile(clustering: Clustering, groups: Sequence[bool]) -> list[dict]:
    """Share of each group's messages per cluster, plus the overall share"""
    table = group_cluster_table(clustering, groups).astype(float)
    totals = table.sum(axis=1)
    overall = table.sum(axis=0) / table.sum()
    rows = []
    for cid in range(1, clustering.k + 1):
        rows.append(
            {
                "cluster": cid,
                "share": overall[cid - 1],
                "innovator_share": table[0, cid - 1] / totals[0] if totals[0] else 0.0,
                "other_share": table[1, cid - 1] / totals[1] if totals[1] else 0.0,
            }
        )
    return rows


def term_cluster_counts(
    tdm: TermDocMatrix, clustering: Clustering
) -> tuple[np.ndarray, tuple[str, ...]]:
    """Term x cluster occurrence counts with all-zero terms removed"""
    n = len(clustering.labels)
    indicator = sparse.csr_matrix(
        (np.ones(n), (np.arange(n), clustering.labels - 1)), shape=(n, clustering.k)
    )
    table = np.asarray((tdm.counts.T @ indicator).todense())
    keep = table.sum(axis=1) > 0
    terms = tuple(t for t, k in zip(tdm.terms, keep) if k)
    return table[keep], terms
