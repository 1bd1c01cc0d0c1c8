"""
Pipeline run configuration
"""

# pylint: disable=too-many-instance-attributes

# stdlib
import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

# library
import yaml
from voluptuous import Invalid, MultipleInvalid

# module
from forum_innovators import validate
from forum_innovators.exceptions import ConfigError


@dataclass(frozen=True)
class InputsConfig:
    """Input file locations. None selects the packaged default where one exists"""

    posts: Optional[str] = None
    labels: Optional[str] = None
    stopwords: Optional[str] = None
    lemmas: Optional[str] = None
    lexicon: Optional[str] = None
    exclude_authors: Optional[str] = None


@dataclass(frozen=True)
class GraphConfig:
    """Reply graph construction options"""

    thread_opener_edges: bool = False


@dataclass(frozen=True)
class NetworkConfig:
    """Centrality variant selection"""

    closeness: str = "harmonic"
    distinctiveness: str = "d1"


@dataclass(frozen=True)
class TextConfig:
    """Text normalization options"""

    stemmer: str = "italian"


@dataclass(frozen=True)
class EtmConfig:
    """Emotional Text Mining thresholds and clustering search"""

    min_doc_freq: int = 5
    high_freq_cutoff: float = 0.5
    k_min: int = 2
    k_max: int = 6
    k: Optional[int] = None
    restarts: int = 10
    max_iter: int = 100
    weighting: str = "binary"
    keyword_unit: str = "occurrence"
    top_n: int = 10


@dataclass(frozen=True)
class CaConfig:
    """Correspondence analysis report options"""

    axis_labels: tuple[Optional[str], ...] = ()
    svg: bool = True


@dataclass(frozen=True)
class StatsConfig:
    """Group comparison and regression options"""

    alpha: float = 0.05
    significance_rule: str = "both"
    standardize: bool = False
    vif_threshold: float = 10.0
    blocks: dict[str, tuple[str, ...]] = field(
        default_factory=lambda: {
            k: tuple(v) for k, v in validate.DEFAULT_BLOCKS.items()
        }
    )


@dataclass(frozen=True)
class SynthConfig:
    """Synthetic corpus generator parameters"""

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


@dataclass(frozen=True)
class PipelineConfig:
    """Complete, validated run configuration"""

    inputs: InputsConfig = field(default_factory=InputsConfig)
    output: str = "out"
    seed: int = 1
    strict: bool = False
    threads: int = 1
    graph: GraphConfig = field(default_factory=GraphConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    text: TextConfig = field(default_factory=TextConfig)
    etm: EtmConfig = field(default_factory=EtmConfig)
    ca: CaConfig = field(default_factory=CaConfig)
    stats: StatsConfig = field(default_factory=StatsConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)

    def to_dict(self) -> dict:
        """Plain nested dict with JSON-compatible values"""
        data = asdict(self)
        data["ca"]["axis_labels"] = list(self.ca.axis_labels)
        data["stats"]["blocks"] = {k: list(v) for k, v in self.stats.blocks.items()}
        return data

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form of the config"""
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def require(self, *names: str):
        """Raise a ConfigError if any named input path is not set"""
        missing = [n for n in names if getattr(self.inputs, n) is None]
        if missing:
            raise ConfigError(f"missing required input path(s): {', '.join(missing)}")


def _set_dotted(data: dict, key: str, value: Any):
    """Assign a value in a nested dict using a dotted key"""
    *parents, leaf = key.split(".")
    target = data
    for part in parents:
        target = target.setdefault(part, {})
        if not isinstance(target, dict):
            raise ConfigError(f"cannot set '{key}': '{part}' is not a section")
    target[leaf] = value


def parse_override(text: str) -> tuple[str, Any]:
    """Splits a key=value override, parsing the value as YAML"""
    if "=" not in text:
        raise ConfigError(f"override '{text}' must have the form key=value")
    key, raw = text.split("=", 1)
    try:
        value = yaml.safe_load(raw) if raw else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"override '{text}' has an unparseable value") from exc
    return key.strip(), value


def build_config(data: Optional[dict] = None, overrides: dict = None) -> PipelineConfig:
    """Validates raw config values and builds the frozen config"""
    data = dict(data or {})
    for key, value in (overrides or {}).items():
        _set_dotted(data, key, value)
    try:
        valid = validate.CONFIG_SCHEMA(data)
    except (Invalid, MultipleInvalid) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    return PipelineConfig(
        inputs=InputsConfig(**valid["inputs"]),
        output=valid["output"],
        seed=valid["seed"],
        strict=valid["strict"],
        threads=valid["threads"],
        graph=GraphConfig(**valid["graph"]),
        network=NetworkConfig(**valid["network"]),
        text=TextConfig(**valid["text"]),
        etm=EtmConfig(**valid["etm"]),
        ca=CaConfig(
            axis_labels=tuple(valid["ca"]["axis_labels"]), svg=valid["ca"]["svg"]
        ),
        stats=StatsConfig(
            alpha=valid["stats"]["alpha"],
            significance_rule=valid["stats"]["significance_rule"],
            standardize=valid["stats"]["standardize"],
            vif_threshold=valid["stats"]["vif_threshold"],
            blocks={k: tuple(v) for k, v in valid["stats"]["blocks"].items()},
        ),
        synth=SynthConfig(**valid["synth"]),
    )


def load_config(path: Optional[str] = None, overrides: dict = None) -> PipelineConfig:
    """Loads a YAML config file, applies overrides and validates the result"""
    data = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"config file {path} is not valid YAML: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a mapping")
    return build_config(data, overrides)
