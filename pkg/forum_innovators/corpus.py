"""
Forum corpus ingest, validation and lexical indices
"""

# pylint: disable=too-many-locals

# stdlib
import csv
import json
import logging
import statistics
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from datetime import datetime
from functools import cached_property
from typing import Iterable, Iterator, Optional

# library
from voluptuous import Invalid, MultipleInvalid

# module
from forum_innovators import validate
from forum_innovators.exceptions import ValidationError, ValidationReport
from forum_innovators.text import tokenize

LOG = logging.getLogger(__name__)

POST_FIELDS = (
    "post_id",
    "author_id",
    "thread_id",
    "parent_post_id",
    "timestamp",
    "text",
)


@dataclass(frozen=True)
class Post:
    """A single forum message"""

    post_id: str
    author_id: str
    thread_id: str
    parent_post_id: Optional[str]
    timestamp: datetime
    text: str

    def to_record(self) -> dict:
        """JSON-compatible record in the input field order"""
        return {
            "post_id": self.post_id,
            "author_id": self.author_id,
            "thread_id": self.thread_id,
            "parent_post_id": self.parent_post_id,
            "timestamp": self.timestamp.isoformat().replace("+00:00", "Z"),
            "text": self.text,
        }


@dataclass(frozen=True)
class Corpus:
    """Validated, indexed and immutable collection of posts"""

    posts: tuple[Post, ...]
    report: Optional[ValidationReport] = field(default=None, compare=False)

    @cached_property
    def by_id(self) -> dict[str, Post]:
        """Post lookup by id"""
        return {p.post_id: p for p in self.posts}

    @cached_property
    def authors(self) -> tuple[str, ...]:
        """Sorted distinct author ids"""
        return tuple(sorted({p.author_id for p in self.posts}))

    @cached_property
    def threads(self) -> dict[str, tuple[Post, ...]]:
        """Thread id to posts in timestamp order, input order breaking ties"""
        index = defaultdict(list)
        for post in self.posts:
            index[post.thread_id].append(post)
        # sorted is stable, so ties keep input order
        return {
            tid: tuple(sorted(posts, key=lambda p: p.timestamp))
            for tid, posts in index.items()
        }

    @cached_property
    def posts_by_author(self) -> dict[str, tuple[Post, ...]]:
        """Author id to their posts in input order"""
        index = defaultdict(list)
        for post in self.posts:
            index[post.author_id].append(post)
        return {a: tuple(index[a]) for a in self.authors}

    def parent_author(self, post: Post) -> Optional[str]:
        """Author of the post this one answers, if any"""
        if post.parent_post_id is None:
            return None
        parent = self.by_id.get(post.parent_post_id)
        return parent.author_id if parent else None

    def __len__(self) -> int:
        return len(self.posts)


@dataclass(frozen=True)
class LabelMap:
    """Innovator flags over the corpus authors. Unlabeled authors are non-innovators"""

    authors: tuple[str, ...]
    innovators: frozenset[str] = frozenset()
    report: Optional[ValidationReport] = field(default=None, compare=False)

    def __getitem__(self, author_id: str) -> bool:
        return author_id in self.innovators

    def is_innovator(self, author_id: str) -> bool:
        """True for labeled innovators"""
        return author_id in self.innovators

    @property
    def has_both_groups(self) -> bool:
        """At least one innovator and one other author"""
        return 0 < len(self.innovators) < len(self.authors)

    def require_both_groups(self):
        """Group statistics need at least one author on each side"""
        if not self.has_both_groups:
            raise ValidationError(
                "group statistics need at least one innovator and one non-innovator"
            )


@dataclass(frozen=True)
class LexicalIndices:
    """Corpus-level token, type and hapax counts"""

    token_count: int
    type_count: int
    hapax_count: int

    @property
    def type_token_ratio(self) -> float:
        """Types over tokens"""
        return self.type_count / self.token_count if self.token_count else 0.0

    @property
    def hapax_pct(self) -> float:
        """Share of types occurring exactly once"""
        return self.hapax_count / self.type_count if self.type_count else 0.0


@dataclass(frozen=True)
class CorpusSummary:
    """Descriptive statistics of authors and posts"""

    posts: int
    authors: int
    threads: int
    mean_post_words: float
    sd_post_words: float
    single_post_authors: int
    two_post_authors: int
    three_post_authors: int
    four_plus_post_authors: int


def _finish(report: ValidationReport, strict: bool):
    """Log collected issues and fail in strict mode"""
    for issue in report.issues:
        LOG.warning("%s %s", report.source, issue)
    if strict and report.errors:
        raise ValidationError(
            f"{report.source}: {len(report.errors)} validation error(s), "
            f"first: {report.errors[0]}",
            report,
        )


def parse_posts(
    lines: Iterable[str], strict: bool = False, source: str = "posts"
) -> Corpus:
    """Parse line-delimited JSON post records into a validated Corpus

    Malformed lines, duplicate ids and bad parent links are collected in the
    corpus report. Lenient mode skips bad records and drops bad parent links,
    strict mode raises on the first report with errors
    """
    report = ValidationReport(source)
    records, lines_of = [], {}
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = validate.PostRecord(json.loads(line))
        except json.JSONDecodeError as exc:
            report.add(number, "malformed", f"not a JSON object: {exc.msg}")
            continue
        except (Invalid, MultipleInvalid) as exc:
            report.add(number, "malformed", str(exc))
            continue
        post_id = record["post_id"]
        if post_id in lines_of:
            report.add(
                number,
                "duplicate",
                f"post_id '{post_id}' on lines {lines_of[post_id]} and {number}",
            )
            continue
        lines_of[post_id] = number
        records.append(record)
    thread_of = {r["post_id"]: r["thread_id"] for r in records}
    posts = []
    for record in records:
        number = lines_of[record["post_id"]]
        parent = record["parent_post_id"]
        if parent is not None:
            if parent not in thread_of:
                report.add(number, "unknown parent", f"parent '{parent}' not found")
                parent = None
            elif thread_of[parent] != record["thread_id"]:
                report.add(
                    number,
                    "cross-thread parent",
                    f"parent '{parent}' is in thread '{thread_of[parent]}'",
                )
                parent = None
            elif parent == record["post_id"]:
                report.add(number, "self parent", "post answers itself")
                parent = None
        if not record["text"].strip():
            report.add(number, "empty text", f"post '{record['post_id']}'", fatal=False)
        posts.append(Post(**{**record, "parent_post_id": parent}))
    _finish(report, strict)
    corpus = Corpus(tuple(posts), report)
    LOG.info("parsed %d posts by %d authors", len(corpus), len(corpus.authors))
    return corpus


def dump_posts(corpus: Corpus) -> Iterator[str]:
    """Serialize posts back to JSON lines"""
    for post in corpus.posts:
        yield json.dumps(post.to_record(), ensure_ascii=False)


def parse_labels(
    lines: Iterable[str], corpus: Corpus, strict: bool = False, source: str = "labels"
) -> LabelMap:
    """Parse the author_id,innovator table into a LabelMap

    A repeated author keeps its first flag; a repeat with a different flag
    is a validation error
    """
    report = ValidationReport(source)
    known = set(corpus.authors)
    innovators = set()
    seen: dict[str, tuple[int, bool]] = {}
    reader = csv.reader(lines)
    header = next(reader, None)
    columns = [h.strip() for h in header[:2]] if header is not None else None
    if columns is not None and columns != ["author_id", "innovator"]:
        report.add(1, "header", "expected header 'author_id,innovator'")
    for number, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 2:
            report.add(number, "malformed", "expected two columns")
            continue
        author_id = row[0].strip()
        try:
            flag = validate.LabelFlag(row[1])
        except Invalid as exc:
            report.add(number, "malformed", str(exc))
            continue
        if author_id not in known:
            # only an error under --strict
            report.add(number, "unknown author", f"'{author_id}' has no posts")
            continue
        if author_id in seen:
            first, earlier = seen[author_id]
            if earlier != flag:
                message = f"'{author_id}' differs from line {first}"
                report.add(number, "conflicting label", message)
            else:
                message = f"'{author_id}' repeats line {first}"
                report.add(number, "duplicate", message, fatal=False)
            continue
        seen[author_id] = (number, flag)
        if flag:
            innovators.add(author_id)
    _finish(report, strict)
    labels = LabelMap(corpus.authors, frozenset(innovators), report)
    LOG.info("%d of %d authors labeled innovators", len(innovators), len(known))
    return labels


def load_exclusions(lines: Iterable[str]) -> frozenset[str]:
    """Author ids to exclude, one per line"""
    stripped = (line.strip() for line in lines)
    return frozenset(line for line in stripped if line and not line.startswith("#"))


def exclude_authors(corpus: Corpus, excluded: frozenset[str]) -> Corpus:
    """Drop posts by excluded authors and any reply links pointing at them"""
    if not excluded:
        return corpus
    kept_ids = {p.post_id for p in corpus.posts if p.author_id not in excluded}
    posts = []
    for post in corpus.posts:
        if post.post_id not in kept_ids:
            continue
        if post.parent_post_id is not None and post.parent_post_id not in kept_ids:
            post = replace(post, parent_post_id=None)
        posts.append(post)
    LOG.info("excluded %d posts by %d authors", len(corpus) - len(posts), len(excluded))
    return Corpus(tuple(posts), corpus.report)


def lexical_indices(corpus: Corpus) -> LexicalIndices:
    """Token, type and hapax counts over raw tokens"""
    if not corpus.posts:
        raise ValidationError("lexical indices need a nonempty corpus")
    counts = Counter()
    for post in corpus.posts:
        counts.update(tokenize(post.text))
    return LexicalIndices(
        token_count=sum(counts.values()),
        type_count=len(counts),
        hapax_count=sum(1 for c in counts.values() if c == 1),
    )


def corpus_summary(corpus: Corpus) -> CorpusSummary:
    """Posts, authors, threads, post length and posts-per-author buckets"""
    lengths = [len(tokenize(p.text)) for p in corpus.posts]
    per_author = Counter(len(p) for p in corpus.posts_by_author.values())
    return CorpusSummary(
        posts=len(corpus),
        authors=len(corpus.authors),
        threads=len(corpus.threads),
        mean_post_words=statistics.fmean(lengths) if lengths else 0.0,
        sd_post_words=statistics.stdev(lengths) if len(lengths) > 1 else 0.0,
        single_post_authors=per_author[1],
        two_post_authors=per_author[2],
        three_post_authors=per_author[3],
        four_plus_post_authors=sum(c for n, c in per_author.items() if n >= 4),
    )


POST_BUCKETS = (
    ("1", 1, 1),
    ("2", 2, 2),
    ("3", 3, 3),
    ("4-20", 4, 20),
    (">20", 21, None),
)


def posts_per_author(corpus: Corpus, labels: LabelMap) -> list[dict]:
    """Author counts per posting bucket for innovators and the rest"""
    rows = []
    for name, low, high in POST_BUCKETS:
        row = {"posts": name, "innovators": 0, "others": 0}
        for author, posts in corpus.posts_by_author.items():
            if len(posts) >= low and (high is None or len(posts) <= high):
                row["innovators" if labels[author] else "others"] += 1
        rows.append(row)
    return rows
