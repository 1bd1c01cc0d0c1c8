"""
Synthetic corpus generator tests
"""

# stdlib
import json
from statistics import mean

# library
import pytest

# module
from forum_innovators.corpus import dump_posts, parse_labels, parse_posts
from forum_innovators.exceptions import ConfigError
from forum_innovators.synth import RARE_WORDS, SynthSpec, generate, write_synth

SMALL = SynthSpec(n_authors=120, n_innovators=6, seed=5)

INFEASIBLE = (
    {"n_authors": 10, "n_innovators": 10},
    {"n_innovators": -1},
    {"reply_prob": 1.5},
    {"single_post_share": -0.1},
    {"innovator_topics": (0.5, 0.5, 0.5)},
    {"other_topics": (0.5, 0.5)},
)


def test_deterministic():
    """Same seed, same corpus; another seed, another corpus"""
    first, labels, truth = generate(SMALL)
    second, labels_again, truth_again = generate(SMALL)
    assert first == second
    assert labels == labels_again
    assert truth == truth_again
    other, *_ = generate(SynthSpec(n_authors=120, n_innovators=6, seed=6))
    assert other != first


def test_output_validates_strictly():
    """Generated posts survive a strict parse unchanged"""
    corpus, labels, _ = generate(SMALL)
    parsed = parse_posts(dump_posts(corpus), strict=True)
    assert parsed == corpus
    assert not parsed.report.errors
    assert len(labels.innovators) == 6
    assert labels.has_both_groups
    for post in corpus.posts:
        if post.parent_post_id is not None:
            parent = corpus.by_id[post.parent_post_id]
            assert parent.thread_id == post.thread_id
            assert parent.author_id != post.author_id
            assert parent.timestamp < post.timestamp


def test_single_post_share():
    """About half the authors write exactly one post"""
    corpus, _, _ = generate(SynthSpec(n_authors=2000, n_innovators=0, seed=2))
    single = sum(1 for posts in corpus.posts_by_author.values() if len(posts) == 1)
    assert single / len(corpus.authors) == pytest.approx(0.5, abs=0.05)


def test_innovators_planted():
    """Innovators post more, write longer and use rare words"""
    corpus, labels, truth = generate(SynthSpec(n_authors=300, n_innovators=10, seed=3))
    assert truth["innovators"] == sorted(labels.innovators)
    by_author = corpus.posts_by_author
    innovators = [a for a in corpus.authors if labels[a]]
    others = [a for a in corpus.authors if not labels[a]]
    posts_each = {a: len(by_author[a]) for a in corpus.authors}
    assert mean(posts_each[a] for a in innovators) > mean(posts_each[a] for a in others)

    def length(authors):
        return mean(len(p.text.split()) for a in authors for p in by_author[a])

    assert length(innovators) > length(others)
    rare = set(RARE_WORDS)
    other_text = " ".join(p.text.lower() for a in others for p in by_author[a])
    assert not rare & set(other_text.replace(".", " ").replace("?", " ").split())


def test_null_configuration():
    """Without planted effects no rare words appear"""
    spec = SynthSpec(
        n_authors=100,
        n_innovators=5,
        innovator_reply_multiplier=1,
        innovator_post_multiplier=1,
        innovator_length_multiplier=1,
        innovator_novelty_rate=0,
        low_indegree_targeting=False,
        identical_vocabularies=True,
        seed=4,
    )
    corpus, _, _ = generate(spec)
    text = " ".join(p.text.lower() for p in corpus.posts)
    words = set(text.replace(".", " ").replace("?", " ").split())
    assert not words & set(RARE_WORDS)


def test_infeasible_spec():
    """Impossible counts and probabilities are configuration errors"""
    for changes in INFEASIBLE:
        with pytest.raises(ConfigError):
            SynthSpec(**changes)


def test_write_synth(tmp_path):
    """Posts, labels, ground truth and lexicon files"""
    corpus, labels, truth = generate(SMALL)
    paths = write_synth(tmp_path / "synth", corpus, labels, truth)
    assert set(paths) == {"posts", "labels", "truth", "lexicon"}
    for path in paths.values():
        assert path.is_file()
    lines = paths["posts"].read_text(encoding="utf-8").splitlines()
    assert parse_posts(lines, strict=True) == corpus
    label_lines = paths["labels"].read_text(encoding="utf-8").splitlines()
    assert label_lines[0] == "author_id,innovator"
    assert parse_labels(label_lines, corpus, strict=True) == labels
    stored = json.loads(paths["truth"].read_text(encoding="utf-8"))
    assert stored["innovators"] == truth["innovators"]
    assert stored["seed"] == 5
    assert len(stored["post_topics"]) == len(corpus)


@pytest.mark.slow
def test_single_post_share_large():
    """Within three points of the target at five thousand authors"""
    for seed in range(3):
        spec = SynthSpec(
            n_authors=5000, n_innovators=50, single_post_share=0.4, seed=seed
        )
        corpus, _, _ = generate(spec)
        single = sum(1 for posts in corpus.posts_by_author.values() if len(posts) == 1)
        assert single / len(corpus.authors) == pytest.approx(0.4, abs=0.03)
