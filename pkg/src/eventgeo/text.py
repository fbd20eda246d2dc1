"""Term-frequency extraction from event notes.

Token rules are deliberately minimal and deterministic: lowercase, split on
any non-alphanumeric character, drop one-character and purely numeric tokens.
No stemming and no n-grams, so the ranked output is reproducible and feeds
any word-cloud renderer directly.
"""

from __future__ import annotations

import re
from collections import Counter
from importlib import resources
from typing import Iterable, Union

from .ingest import EventRecord

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

TermFrequencies = list[tuple[str, int]]


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric tokens, at least 2 characters, not purely numeric."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2 and not t.isdigit()]


def load_stopwords(path=None) -> frozenset[str]:
    """Stopword set from a one-word-per-line file; default is the shipped English list."""
    if path is None:
        content = resources.files("eventgeo").joinpath("data/stopwords_en.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            content = fh.read()
    return frozenset(w.strip().lower() for w in content.splitlines() if w.strip())


def term_frequencies(
    events: Iterable[Union[EventRecord, str]],
    stopwords: Union[frozenset[str], set[str], None] = None,
) -> TermFrequencies:
    """Ranked (term, count) over the notes of the given events.

    Accepts EventRecords (their notes are tokenized) or raw strings. Ordered
    by descending count, then ascending term. With stopwords=None the shipped
    English list applies; pass an empty set to keep everything.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    counts: Counter = Counter()
    for item in events:
        text = item.notes if isinstance(item, EventRecord) else item
        counts.update(t for t in tokenize(text) if t not in stopwords)
    return sorted(counts.items(), key=lambda tc: (-tc[1], tc[0]))
