"""
Run configuration tests
"""

# library
import pytest

# module
from forum_innovators.config import (
    PipelineConfig,
    build_config,
    load_config,
    parse_override,
)
from forum_innovators.exceptions import ConfigError

OVERRIDES = (
    ("etm.k_max=8", ("etm.k_max", 8)),
    ("network.closeness=freeman", ("network.closeness", "freeman")),
    ("ca.axis_labels=[Work, Life]", ("ca.axis_labels", ["Work", "Life"])),
    ("strict=true", ("strict", True)),
    ("inputs.labels=", ("inputs.labels", None)),
)

INVALID = (
    {"etm": {"k_min": 1}},
    {"etm": {"min_doc_freq": 1}},
    {"etm": {"k_min": 5, "k_max": 3}},
    {"etm": {"k": 9}},
    {"etm": {"weighting": "tfidf"}},
    {"stats": {"alpha": 1.5}},
    {"stats": {"blocks": {}}},
    {"stats": {"blocks": {"Model 1": []}}},
    {"stats": {"significance_rule": "most"}},
    {"network": {"closeness": "eigenvector"}},
    {"threads": 0},
    {"synth": {"innovator_post_multiplier": 0.5}},
    {"colour": "blue"},
    {"inputs": {"posts": "/nonexistent/posts.jsonl"}},
)


def test_defaults():
    """An empty config validates to the documented defaults"""
    config = build_config()
    assert config == PipelineConfig()
    assert config.etm.min_doc_freq == 5
    assert config.etm.high_freq_cutoff == 0.5
    assert (config.etm.k_min, config.etm.k_max, config.etm.k) == (2, 6, None)
    assert config.network.closeness == "harmonic"
    assert config.stats.significance_rule == "both"
    assert list(config.stats.blocks) == [f"Model {i}" for i in range(1, 7)]
    assert config.stats.blocks["Model 6"] == (
        "out_degree",
        "closeness",
        "constraint",
        "wps",
        "six_letter_pct",
    )
    assert config.synth.innovator_novelty_rate == 0.03


def test_parse_override():
    """Values after the first equals sign are read as YAML"""
    for text, target in OVERRIDES:
        assert parse_override(text) == target
    for text in ("etm.k_max", "etm.k=["):
        with pytest.raises(ConfigError):
            parse_override(text)


def test_overrides_nest():
    """Dotted overrides land in their section and beat file values"""
    config = build_config(
        {"etm": {"k_max": 4}, "seed": 3}, {"etm.k_max": 8, "etm.k": 7}
    )
    assert (config.etm.k_max, config.etm.k, config.seed) == (8, 7, 3)
    with pytest.raises(ConfigError):
        build_config({"seed": 3}, {"seed.value": 1})


def test_invalid_values():
    """Out of range and unknown values are config errors"""
    for data in INVALID:
        with pytest.raises(ConfigError) as error:
            build_config(data)
        assert error.value.exit_code == 2


def test_load_config(tmp_path):
    """YAML files with overrides on top"""
    posts = tmp_path / "posts.jsonl"
    posts.write_text("", encoding="utf-8")
    path = tmp_path / "run.yaml"
    path.write_text(
        f"inputs:\n  posts: {posts}\nseed: 7\netm:\n  k: 3\n"
        "stats:\n  blocks:\n    only: [word_count]\n",
        encoding="utf-8",
    )
    config = load_config(str(path), {"threads": 2})
    assert config.inputs.posts == str(posts)
    assert (config.seed, config.threads, config.etm.k) == (7, 2, 3)
    assert config.stats.blocks == {"only": ("word_count",)}
    assert load_config(None) == PipelineConfig()


def test_load_config_errors(tmp_path):
    """Missing, unparseable and non-mapping files"""
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.yaml"))
    broken = tmp_path / "broken.yaml"
    broken.write_text("etm: [k: 1\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(broken))
    listing = tmp_path / "list.yaml"
    listing.write_text("- seed\n- threads\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="mapping"):
        load_config(str(listing))


def test_digest():
    """Config hash is stable and follows every value"""
    assert build_config().digest() == PipelineConfig().digest()
    assert build_config({"seed": 2}).digest() != PipelineConfig().digest()
    assert len(PipelineConfig().digest()) == 64


def test_require():
    """Missing input paths are named"""
    with pytest.raises(ConfigError, match="posts, lexicon"):
        PipelineConfig().require("posts", "lexicon")
