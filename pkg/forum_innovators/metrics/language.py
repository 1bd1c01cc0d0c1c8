"""
Per-author language characteristics: volume, complexity, sentiment, novelty
"""

# stdlib
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

# module
from forum_innovators.corpus import Corpus, Post
from forum_innovators.text import Analyzer, sentences, tokenize

LOG = logging.getLogger(__name__)

LANGUAGE_COLUMNS = ("word_count", "sentiment", "novelty", "wps", "six_letter_pct")

# Words "longer than six letters"
LONG_WORD = 7


@dataclass(frozen=True)
class LanguageProfile:
    """The five language metrics of one author"""

    word_count: int
    wps: float
    six_letter_pct: float
    sentiment: float
    novelty: float

    def as_row(self) -> tuple:
        """Values in LANGUAGE_COLUMNS order"""
        return tuple(getattr(self, c) for c in LANGUAGE_COLUMNS)


@dataclass(frozen=True)
class NoveltyContext:
    """Author population statistics over the stemmed, stop-word free vocabulary

    frequencies holds f_w per author, document_frequency holds n_w, the
    number of authors using w, and n_authors is N
    """

    n_authors: int
    frequencies: dict[str, Counter]
    document_frequency: Counter


def word_count(posts: Sequence[Post]) -> int:
    """Total tokens over all posts, stop-words included"""
    return sum(len(tokenize(p.text)) for p in posts)


def wps(posts: Sequence[Post]) -> float:
    """Mean words per sentence over all posts"""
    words = count = 0
    for post in posts:
        for sentence in sentences(post.text):
            words += len(sentence)
            count += 1
    return words / count if count else 0.0


def six_letter_pct(posts: Sequence[Post]) -> float:
    """Percentage of tokens with at least seven letters"""
    tokens = [t for p in posts for t in tokenize(p.text)]
    if not tokens:
        return 0.0
    return 100 * sum(1 for t in tokens if len(t) >= LONG_WORD) / len(tokens)


def post_sentiment(text: str, lexicon: dict[str, float]) -> float:
    """Mean polarity of lexicon tokens in a post, 0 without matches"""
    scores = [lexicon[t] for t in tokenize(text) if t in lexicon]
    return sum(scores) / len(scores) if scores else 0.0


def sentiment(posts: Sequence[Post], lexicon: dict[str, float]) -> float:
    """Mean of per-post sentiment scores"""
    if not posts:
        return 0.0
    return sum(post_sentiment(p.text, lexicon) for p in posts) / len(posts)


def build_novelty_context(corpus: Corpus, analyzer: Analyzer) -> NoveltyContext:
    """Per-author stem frequencies and author frequency of every stem"""
    frequencies = {}
    document_frequency = Counter()
    for author, posts in corpus.posts_by_author.items():
        counts = Counter()
        for post in posts:
            counts.update(analyzer.stems(post.text))
        frequencies[author] = counts
        document_frequency.update(counts.keys())
    return NoveltyContext(len(corpus.authors), frequencies, document_frequency)


def novelty(context: NoveltyContext, author_id: str) -> float:
    """(1/n) sum over the author's words w of f_w log10(N / n_w)"""
    counts = context.frequencies.get(author_id, Counter())
    total = sum(counts.values())
    if not total:
        LOG.debug("author %s has no content words, novelty 0", author_id)
        return 0.0
    score = sum(
        f * math.log10(context.n_authors / context.document_frequency[w])
        for w, f in counts.items()
    )
    return score / total


def language_profile(
    posts: Sequence[Post],
    lexicon: dict[str, float],
    context: NoveltyContext,
    author_id: str,
) -> LanguageProfile:
    """All language metrics of one author"""
    return LanguageProfile(
        word_count=word_count(posts),
        wps=wps(posts),
        six_letter_pct=six_letter_pct(posts),
        sentiment=sentiment(posts, lexicon),
        novelty=novelty(context, author_id),
    )


def all_language_profiles(
    corpus: Corpus, lexicon: dict[str, float], analyzer: Analyzer
) -> dict[str, LanguageProfile]:
    """Language metrics for every author"""
    context = build_novelty_context(corpus, analyzer)
    empty = [a for a, c in context.frequencies.items() if not c]
    if empty:
        LOG.info("%d authors have no content words, novelty set to 0", len(empty))
    out = {
        author: language_profile(posts, lexicon, context, author)
        for author, posts in corpus.posts_by_author.items()
    }
    LOG.info("computed language metrics for %d authors", len(out))
    return out
