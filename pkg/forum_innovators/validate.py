"""
Input record and config schema validation
"""

# pylint: disable=C0103

# stdlib
import re
from datetime import datetime, timezone
from typing import Callable

# library
from voluptuous import (
    All,
    Any,
    Coerce,
    In,
    Invalid,
    IsFile,
    Length,
    Optional,
    Range,
    Required,
    Schema,
)


Identifier = All(str, Length(min=1))
Fraction = All(Coerce(float), Range(0, 1))
Polarity = All(Coerce(float), Range(-1, 1))
PositiveInt = All(Coerce(int), Range(min=1))
FilePath = Any(None, IsFile(msg="file does not exist"))


def MatchesRE(name: str, pattern: str) -> Callable:
    """Returns a validation function that checks if a string matches a regex pattern"""
    expr = re.compile(pattern)

    def mre(txt: str) -> str:
        """Raises an exception if a string doesn't match the required format"""
        if not isinstance(txt, str) or expr.fullmatch(txt) is None:
            raise Invalid(f"'{txt}' is not a valid {name}")
        return txt

    return mre


def Timestamp(value: str) -> datetime:
    """Parses an ISO-8601 string into an aware UTC datetime

    Naive values are taken as UTC
    """
    if not isinstance(value, str):
        raise Invalid(f"'{value}' is not an ISO-8601 timestamp")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError as exc:
        raise Invalid(f"'{value}' is not an ISO-8601 timestamp") from exc
    if stamp.tzinfo is None:
        return stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


_TRUE = {"1", "true"}
_FALSE = {"0", "false"}


def LabelFlag(value: str) -> bool:
    """Validates an innovator flag in {0, 1, true, false}"""
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise Invalid(f"'{value}' is not a valid innovator flag")


PostRecord = Schema(
    {
        Required("post_id"): Identifier,
        Required("author_id"): Identifier,
        Required("thread_id"): Identifier,
        Required("parent_post_id", default=None): Any(None, Identifier),
        Required("timestamp"): Timestamp,
        Required("text"): str,
    }
)


def KRange(value: dict) -> dict:
    """Checks that the cluster count search range is ordered and at least 2"""
    if value["k_min"] > value["k_max"]:
        raise Invalid("etm.k_min must not exceed etm.k_max")
    if value["k"] is not None and not value["k_min"] <= value["k"] <= value["k_max"]:
        raise Invalid("etm.k must lie within [k_min, k_max]")
    return value


MODEL_6 = ["out_degree", "closeness", "constraint", "wps", "six_letter_pct"]

DEFAULT_BLOCKS = {
    "Model 1": ["in_degree", "out_degree"],
    "Model 2": ["w_in_degree", "w_out_degree"],
    "Model 3": ["in_distinctiveness", "out_distinctiveness"],
    "Model 4": ["closeness", "betweenness", "constraint"],
    "Model 5": ["word_count", "sentiment", "novelty", "wps", "six_letter_pct"],
    "Model 6": MODEL_6,
}

_inputs = Schema(
    {
        Optional("posts", default=None): FilePath,
        Optional("labels", default=None): FilePath,
        Optional("stopwords", default=None): FilePath,
        Optional("lemmas", default=None): FilePath,
        Optional("lexicon", default=None): FilePath,
        Optional("exclude_authors", default=None): FilePath,
    }
)

_graph = Schema({Optional("thread_opener_edges", default=False): bool})

_network = Schema(
    {
        Optional("closeness", default="harmonic"): In(("harmonic", "freeman")),
        Optional("distinctiveness", default="d1"): In(("d1", "d2")),
    }
)

_text = Schema(
    {Optional("stemmer", default="italian"): MatchesRE("stemmer", r"[a-z]+")}
)

_etm = All(
    Schema(
        {
            Optional("min_doc_freq", default=5): All(Coerce(int), Range(min=2)),
            Optional("high_freq_cutoff", default=0.5): All(
                Coerce(float), Range(min=0, max=1, min_included=False)
            ),
            Optional("k_min", default=2): All(Coerce(int), Range(min=2)),
            Optional("k_max", default=6): All(Coerce(int), Range(min=2)),
            Optional("k", default=None): Any(None, All(Coerce(int), Range(min=2))),
            Optional("restarts", default=10): PositiveInt,
            Optional("max_iter", default=100): PositiveInt,
            Optional("weighting", default="binary"): In(("binary", "count")),
            Optional("keyword_unit", default="occurrence"): In(
                ("occurrence", "document")
            ),
            Optional("top_n", default=10): PositiveInt,
        }
    ),
    KRange,
)

_ca = Schema(
    {
        Optional("axis_labels", default=list): [Any(None, str)],
        Optional("svg", default=True): bool,
    }
)

_stats = Schema(
    {
        Optional("alpha", default=0.05): All(
            Coerce(float), Range(min=0, max=1, min_included=False, max_included=False)
        ),
        Optional("significance_rule", default="both"): In(
            ("both", "welch", "mwu", "either")
        ),
        Optional("standardize", default=False): bool,
        Optional("vif_threshold", default=10.0): All(Coerce(float), Range(min=1)),
        Optional("blocks", default=lambda: dict(DEFAULT_BLOCKS)): All(
            {str: All([Identifier], Length(min=1))}, Length(min=1)
        ),
    }
)

_synth = Schema(
    {
        Optional("n_authors", default=1000): All(Coerce(int), Range(min=2)),
        Optional("n_innovators", default=10): All(Coerce(int), Range(min=0)),
        Optional("single_post_share", default=0.5): Fraction,
        Optional("mean_post_words", default=91.0): All(Coerce(float), Range(min=1)),
        Optional("reply_prob", default=0.3): Fraction,
        Optional("innovator_reply_multiplier", default=2.5): All(
            Coerce(float), Range(min=0)
        ),
        Optional("innovator_post_multiplier", default=4.0): All(
            Coerce(float), Range(min=1)
        ),
        Optional("innovator_length_multiplier", default=1.5): All(
            Coerce(float), Range(min=0.1)
        ),
        Optional("innovator_novelty_rate", default=0.03): Fraction,
        Optional("low_indegree_targeting", default=True): bool,
        Optional("identical_vocabularies", default=False): bool,
    }
)

CONFIG_SCHEMA = Schema(
    {
        Optional("inputs", default=dict): _inputs,
        Optional("output", default="out"): Identifier,
        Optional("seed", default=1): All(Coerce(int), Range(min=0)),
        Optional("strict", default=False): bool,
        Optional("threads", default=1): PositiveInt,
        Optional("graph", default=dict): _graph,
        Optional("network", default=dict): _network,
        Optional("text", default=dict): _text,
        Optional("etm", default=dict): _etm,
        Optional("ca", default=dict): _ca,
        Optional("stats", default=dict): _stats,
        Optional("synth", default=dict): _synth,
    }
)
