"""
Tokenization, sentence splitting and text resources
"""

# stdlib
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator, Optional

# library
from nltk.stem.snowball import SnowballStemmer
from voluptuous import Invalid

# module
from forum_innovators import validate
from forum_innovators.exceptions import ConfigError, ValidationError

LOG = logging.getLogger(__name__)

# Maximal runs of letters: digits, underscores and apostrophes split tokens
TOKEN_RE = re.compile(r"[^\W\d_]+")
SENTENCE_END_RE = re.compile(r"[.?!…]+(?=\s|$)")

DEFAULT_STOPWORDS = "stopwords_it.txt"
DEFAULT_LEMMAS = "lemmas_it.tsv"
DEFAULT_LEXICON = "polarity_it.tsv"


def tokenize(text: str) -> list[str]:
    """Lowercased alphabetic tokens shared by every metric"""
    return [t.lower() for t in TOKEN_RE.findall(text)]


def sentences(text: str) -> list[list[str]]:
    """Token lists per sentence, dropping sentences without tokens

    A trailing fragment without terminal punctuation is its own sentence
    """
    out = []
    for part in SENTENCE_END_RE.split(text):
        tokens = tokenize(part)
        if tokens:
            out.append(tokens)
    return out


def default_resource(name: str) -> Path:
    """Path of a packaged data file"""
    return Path(str(resources.files("forum_innovators") / "data" / name))


def _lines(path: Path) -> Iterator[tuple[int, str]]:
    """Numbered, stripped, non-comment lines of a UTF-8 resource file"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"unreadable resource file {path}: {exc}") from exc
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield number, line


def load_wordlist(path: Optional[Path] = None) -> frozenset[str]:
    """One lowercased token per line"""
    path = path or default_resource(DEFAULT_STOPWORDS)
    return frozenset(line.lower() for _, line in _lines(path))


def _load_pairs(path: Path, value: Callable) -> dict[str, object]:
    """Tab-separated key/value rows with per-line error reporting"""
    pairs = {}
    for number, line in _lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip():
            raise ValidationError(f"{path} line {number}: expected 'token<TAB>value'")
        try:
            pairs[parts[0].strip().lower()] = value(parts[1].strip())
        except Invalid as exc:
            raise ValidationError(f"{path} line {number}: {exc}") from exc
    return pairs


def load_lemmas(path: Optional[Path] = None) -> dict[str, str]:
    """Token to lemma table"""
    path = path or default_resource(DEFAULT_LEMMAS)
    return _load_pairs(path, validate.MatchesRE("lemma", r"[^\W\d_]+"))


def load_lexicon(path: Path) -> dict[str, float]:
    """Token to polarity in [-1, 1]"""
    return _load_pairs(path, validate.Polarity)


def make_stemmer(language: Optional[str]) -> Callable[[str], str]:
    """Snowball stemmer for a language, or identity for 'none'"""
    if language is None or language == "none":
        return lambda token: token
    try:
        return SnowballStemmer(language).stem
    except ValueError as exc:
        raise ConfigError(f"no Snowball stemmer for language '{language}'") from exc


@dataclass
class Analyzer:
    """Stop-word removal, lemmatization and stemming for one corpus language"""

    stopwords: frozenset[str] = frozenset()
    lemmas: dict[str, str] = field(default_factory=dict)
    stemmer: Callable[[str], str] = field(default=lambda token: token)

    @classmethod
    def from_files(
        cls,
        stopwords: Optional[str] = None,
        lemmas: Optional[str] = None,
        stemmer: str = "italian",
    ) -> "Analyzer":
        """Build from resource paths, falling back to the packaged defaults"""
        return cls(
            stopwords=load_wordlist(Path(stopwords) if stopwords else None),
            lemmas=load_lemmas(Path(lemmas) if lemmas else None),
            stemmer=make_stemmer(stemmer),
        )

    def content_tokens(self, text: str) -> list[str]:
        """Tokens that are not stop-words"""
        return [t for t in tokenize(text) if t not in self.stopwords]

    def stems(self, text: str) -> list[str]:
        """Stop-word free stemmed tokens, the novelty vocabulary"""
        return [self.stemmer(t) for t in self.content_tokens(text)]

    def lemmatize(self, text: str) -> list[str]:
        """Stop-word free lemmas, stemming tokens missing from the lemma table"""
        out = []
        for token in self.content_tokens(text):
            lemma = self.lemmas.get(token)
            out.append(lemma if lemma is not None else self.stemmer(token))
        return [t for t in out if t]
