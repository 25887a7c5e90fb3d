"""Text cleaning for short social-media posts.

Steps run in a fixed order: lowercase, strip URLs, strip ``@mentions``,
replace punctuation with spaces, split on whitespace, drop stopwords, drop
topic keywords. Topic keywords are the search term the corpus was collected
with; they occur in nearly every document and would otherwise swamp the
IDF weights.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .corpus import LabeledDocument

STOPWORDS_ENV = "RELEVANCE_SENTINEL_STOPWORDS"
DEFAULT_KEYWORDS = frozenset({"hijacking", "hijack", "hijacked"})

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
# Everything that is not a letter/digit, underscore included.
_PUNCT_RE = re.compile(r"[\W_]+")
_HASH_RE = re.compile(r"#(?=\w)")


def read_wordlist(path: str | Path) -> frozenset[str]:
    """Read one word per line; blank lines and ``#`` comments are skipped."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word.lower())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    """The embedded English stopword list (``data/stopwords.txt``)."""
    with resources.as_file(resources.files(__package__) / "data" / "stopwords.txt") as p:
        return read_wordlist(p)


def resolve_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Explicit path, else ``$RELEVANCE_SENTINEL_STOPWORDS``, else the default list."""
    path = path or os.environ.get(STOPWORDS_ENV)
    if path:
        return read_wordlist(path)
    return default_stopwords()


@dataclass(frozen=True)
class PreprocessConfig:
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    removed_keywords: frozenset[str] = DEFAULT_KEYWORDS
    strip_urls: bool = True
    strip_mentions: bool = True
    strip_punctuation: bool = True

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "removed_keywords", frozenset(self.removed_keywords))
        for name in ("stopwords", "removed_keywords"):
            bad = [w for w in getattr(self, name) if w != w.lower() or not w]
            if bad:
                raise ValueError(f"{name} entries must be non-empty lowercase strings: {sorted(bad)[:5]}")

    def to_dict(self) -> dict:
        return {
            "stopwords": sorted(self.stopwords),
            "removed_keywords": sorted(self.removed_keywords),
            "strip_urls": self.strip_urls,
            "strip_mentions": self.strip_mentions,
            "strip_punctuation": self.strip_punctuation,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PreprocessConfig":
        return cls(
            stopwords=frozenset(d["stopwords"]),
            removed_keywords=frozenset(d["removed_keywords"]),
            strip_urls=bool(d["strip_urls"]),
            strip_mentions=bool(d["strip_mentions"]),
            strip_punctuation=bool(d["strip_punctuation"]),
        )


@dataclass(frozen=True)
class TokenDocument:
    id: str
    tokens: tuple[str, ...]
    label: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def is_empty(self) -> bool:
        return not self.tokens


def tokenize(text: str, cfg: PreprocessConfig) -> list[str]:
    text = text.lower()
    if cfg.strip_urls:
        text = _URL_RE.sub(" ", text)
    if cfg.strip_mentions:
        text = _MENTION_RE.sub(" ", text)
    if cfg.strip_punctuation:
        text = _PUNCT_RE.sub(" ", text)
    else:
        text = _HASH_RE.sub("", text)
    drop = cfg.stopwords | cfg.removed_keywords
    return [tok for tok in text.split() if tok not in drop]


def preprocess(text: str, cfg: PreprocessConfig | None = None, doc_id: str = "", label: int | None = None) -> TokenDocument:
    """Clean ``text`` into a :class:`TokenDocument`; the token list may be empty."""
    cfg = cfg or PreprocessConfig()
    return TokenDocument(doc_id, tuple(tokenize(text, cfg)), label)


def preprocess_all(docs: Iterable[LabeledDocument], cfg: PreprocessConfig | None = None) -> list[TokenDocument]:
    cfg = cfg or PreprocessConfig()
    return [preprocess(d.text, cfg, d.id, d.label) for d in docs]
