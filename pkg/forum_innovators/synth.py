"""
Seeded synthetic forum corpora with planted innovator signal
"""

# pylint: disable=too-many-instance-attributes,too-many-locals

# stdlib
import csv
import json
import logging
import shutil
from collections import Counter
from dataclasses import asdict, dataclass
from datetime import datetime, timedelta, timezone
from itertools import product
from pathlib import Path
from typing import Optional

# library
import numpy as np

# module
from forum_innovators.config import SynthConfig
from forum_innovators.corpus import Corpus, LabelMap, Post, dump_posts
from forum_innovators.exceptions import ConfigError
from forum_innovators.text import DEFAULT_LEXICON, default_resource

LOG = logging.getLogger(__name__)

EPOCH = datetime(2020, 1, 1, tzinfo=timezone.utc)

_SYLLABLES = ("ra", "te", "li", "no", "ca", "vi", "su", "po")
_ENDINGS = ("k", "t", "m", "b")

# Italian words mixed into the filler, most frequent first
_COMMON = (
    "il", "la", "di", "che", "e", "per", "non", "un", "una", "in", "con", "ma",
    "anche", "come", "sono", "io", "noi", "voi", "questo", "molto",
)
_LONG = (
    "progetto", "azienda", "comunque", "insieme",
    "riunione", "processo", "cliente", "servizio",
)
_SENTIMENT = (
    "grazie", "bene", "ottimo", "bravo", "bello", "problema", "male", "peccato",
)

# Share of post words drawn from the post's topic vocabulary
TOPIC_RATE = 0.35
# Posts considered when choosing whom to answer
REPLY_CANDIDATES = 5
MEAN_SENTENCE_WORDS = 12.0


def _pool(prefix: str, syllables: int = 1) -> tuple[str, ...]:
    """Deterministic made-up words ending in a consonant"""
    return tuple(
        prefix + "".join(parts) + end
        for parts in product(_SYLLABLES, repeat=syllables)
        for end in _ENDINGS
    )


TOPIC_WORDS = (_pool("zu"), _pool("ke"), _pool("fi"))
FILLER_WORDS = _COMMON + _LONG + _SENTIMENT + _pool("mo") + _pool("da")
RARE_WORDS = _pool("vel", 3)


@dataclass(frozen=True)
class SynthSpec:
    """Generator parameters

    Topic weights give each group's probability of writing about each of
    the three planted topics
    """

    n_authors: int = 1000
    n_innovators: int = 10
    single_post_share: float = 0.5
    mean_post_words: float = 91.0
    reply_prob: float = 0.3
    innovator_reply_multiplier: float = 2.5
    innovator_post_multiplier: float = 4.0
    innovator_length_multiplier: float = 1.5
    innovator_novelty_rate: float = 0.03
    low_indegree_targeting: bool = True
    identical_vocabularies: bool = False
    innovator_topics: tuple[float, float, float] = (0.9, 0.05, 0.05)
    other_topics: tuple[float, float, float] = (0.5, 0.27, 0.23)
    seed: int = 1

    def __post_init__(self):
        if not 0 <= self.n_innovators < self.n_authors:
            raise ConfigError(
                f"n_innovators ({self.n_innovators}) must be below "
                f"n_authors ({self.n_authors})"
            )
        for name in ("single_post_share", "reply_prob", "innovator_novelty_rate"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigError(f"{name} must be a probability")
        for weights in (self.innovator_topics, self.other_topics):
            valid = len(weights) == len(TOPIC_WORDS) and min(weights) >= 0
            if not valid or not np.isclose(sum(weights), 1):
                raise ConfigError(
                    "topic weights must be three probabilities summing to 1"
                )

    @classmethod
    def from_config(cls, config: SynthConfig, seed: int) -> "SynthSpec":
        """Generator settings from the synth section of a run config"""
        return cls(**asdict(config), seed=seed)

    @property
    def innovator_reply_prob(self) -> float:
        """Reply probability of innovators, capped at 1"""
        return min(1.0, self.reply_prob * self.innovator_reply_multiplier)


class _Writer:
    """Draws post texts for one author group"""

    def __init__(
        self,
        rng: np.random.Generator,
        topics,
        length: float,
        sentence: float,
        novelty: float,
    ):
        self.rng = rng
        self.topics = np.asarray(topics)
        self.length = length
        self.sentence = sentence
        self.novelty = novelty
        weights = 1 / np.arange(1, len(FILLER_WORDS) + 1)
        self.filler_p = weights / weights.sum()

    def topic(self) -> int:
        """Planted topic of the next post"""
        return int(self.rng.choice(len(self.topics), p=self.topics))

    def words(self, topic: int) -> list[str]:
        """Bag of words of one post"""
        count = max(3, int(self.rng.poisson(self.length)))
        draws = self.rng.random(count)
        topical = self.rng.integers(len(TOPIC_WORDS[topic]), size=count)
        rare = self.rng.integers(len(RARE_WORDS), size=count)
        filler = self.rng.choice(len(FILLER_WORDS), size=count, p=self.filler_p)
        out = []
        for draw, t, r, f in zip(draws, topical, rare, filler):
            if draw < TOPIC_RATE:
                out.append(TOPIC_WORDS[topic][t])
            elif draw < TOPIC_RATE + self.novelty:
                out.append(RARE_WORDS[r])
            else:
                out.append(FILLER_WORDS[f])
        return out

    def text(self, topic: int) -> str:
        """Words split into sentences of geometric length"""
        words = self.words(topic)
        parts, start = [], 0
        while start < len(words):
            stop = start + int(self.rng.geometric(1 / self.sentence))
            sentence = words[start:stop]
            mark = "?" if self.rng.random() < 0.1 else "."
            parts.append(" ".join([sentence[0].capitalize(), *sentence[1:]]) + mark)
            start = stop
        return " ".join(parts)


def _post_counts(
    spec: SynthSpec, rng: np.random.Generator, innovators: set[int]
) -> list[int]:
    counts = []
    for author in range(spec.n_authors):
        count = 1
        if rng.random() >= spec.single_post_share:
            count += int(rng.geometric(1 / 3))
        if author in innovators:
            count = max(1, int(round(count * spec.innovator_post_multiplier)))
        counts.append(count)
    return counts


def generate(spec: SynthSpec) -> tuple[Corpus, LabelMap, dict]:
    """Build a corpus, its labels and the planted ground truth"""
    rng = np.random.default_rng(spec.seed)
    authors = tuple(f"u{i:05d}" for i in range(spec.n_authors))
    drawn = rng.choice(spec.n_authors, spec.n_innovators, replace=False)
    innovators = set(int(i) for i in drawn)
    same = spec.identical_vocabularies
    writers = {
        False: _Writer(
            rng, spec.other_topics, spec.mean_post_words, MEAN_SENTENCE_WORDS, 0.0
        ),
        True: _Writer(
            rng,
            spec.other_topics if same else spec.innovator_topics,
            spec.mean_post_words * (1 if same else spec.innovator_length_multiplier),
            MEAN_SENTENCE_WORDS * (1 if same else spec.innovator_length_multiplier),
            0.0 if same else spec.innovator_novelty_rate,
        ),
    }
    counts = _post_counts(spec, rng, innovators)
    slots = [a for a, n in enumerate(counts) for _ in range(n)]
    order = rng.permutation(len(slots))
    posts: list[Post] = []
    post_authors: list[int] = []
    topics: dict[str, int] = {}
    in_replies = Counter()
    clock = EPOCH
    threads = 0
    for number, slot in enumerate(order):
        author = slots[slot]
        innovator = author in innovators
        clock += timedelta(seconds=int(rng.integers(60, 3600)))
        reply_prob = spec.innovator_reply_prob if innovator else spec.reply_prob
        parent: Optional[Post] = None
        if posts and rng.random() < reply_prob:
            picks = rng.integers(len(posts), size=REPLY_CANDIDATES)
            candidates = [int(i) for i in picks if post_authors[i] != author]
            if candidates:
                if innovator and spec.low_indegree_targeting:
                    pick = min(
                        candidates, key=lambda i: (in_replies[post_authors[i]], i)
                    )
                else:
                    pick = candidates[0]
                parent = posts[pick]
                in_replies[post_authors[pick]] += 1
        if parent is None:
            threads += 1
            thread_id = f"t{threads:05d}"
        else:
            thread_id = parent.thread_id
        writer = writers[innovator]
        topic = writer.topic()
        post = Post(
            post_id=f"p{number + 1:06d}",
            author_id=authors[author],
            thread_id=thread_id,
            parent_post_id=parent.post_id if parent else None,
            timestamp=clock,
            text=writer.text(topic),
        )
        posts.append(post)
        post_authors.append(author)
        topics[post.post_id] = topic
    corpus = Corpus(tuple(posts))
    labels = LabelMap(corpus.authors, frozenset(authors[i] for i in innovators))
    truth = {
        "seed": spec.seed,
        "spec": {
            k: list(v) if isinstance(v, tuple) else v for k, v in asdict(spec).items()
        },
        "innovators": sorted(labels.innovators),
        "topic_words": [list(words) for words in TOPIC_WORDS],
        "post_topics": topics,
    }
    LOG.info(
        "generated %d posts by %d authors in %d threads, %d innovators",
        len(posts),
        len(corpus.authors),
        threads,
        len(innovators),
    )
    return corpus, labels, truth


def write_synth(
    directory: Path, corpus: Corpus, labels: LabelMap, truth: dict
) -> dict[str, Path]:
    """Write posts, labels, ground truth and a starter lexicon"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "posts": directory / "posts.jsonl",
        "labels": directory / "labels.csv",
        "truth": directory / "truth.json",
        "lexicon": directory / "lexicon.tsv",
    }
    with paths["posts"].open("w", encoding="utf-8", newline="\n") as out:
        for line in dump_posts(corpus):
            out.write(line + "\n")
    with paths["labels"].open("w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("author_id", "innovator"))
        for author in labels.authors:
            writer.writerow((author, int(labels[author])))
    text = json.dumps(truth, indent=1, sort_keys=True) + "\n"
    paths["truth"].write_text(text, encoding="utf-8")
    shutil.copyfile(default_resource(DEFAULT_LEXICON), paths["lexicon"])
    return paths
