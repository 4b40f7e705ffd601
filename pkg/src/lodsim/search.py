"""Keyword search over literal values, the entry point into browsing.

An inverted index posts every case-folded token of every literal object
to its (subject, predicate) pair. Queries rank subjects by how many
distinct query tokens they match; no stemming, no fuzziness.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from lodsim.kb import IRI, KnowledgeBase, Term

_TOKEN = re.compile(r"\w+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Case-folded word tokens: "Da Vinci Code" -> da, vinci, code."""
    return _TOKEN.findall(text.casefold())


class LiteralIndex:
    """Immutable token -> {(subject, predicate)} postings for one KB."""

    def __init__(self, kb: KnowledgeBase):
        postings: dict[str, set[tuple[Term, IRI]]] = {}
        for s, p, o in kb.literal_triples():
            for token in tokenize(o.lexical):
                postings.setdefault(token, set()).add((s, p))  # type: ignore[arg-type]
        self.postings: dict[str, frozenset[tuple[Term, IRI]]] = {
            t: frozenset(v) for t, v in postings.items()
        }

    def __len__(self) -> int:
        return len(self.postings)


@dataclass(frozen=True)
class SearchHit:
    subject: Term
    matched_tokens: int


def search(index: LiteralIndex, query: str, limit: int = 10) -> list[SearchHit]:
    """Subjects matching any query token, best-covered first.

    Ranked by distinct matched tokens descending, subject text ascending;
    an empty or unmatched query yields no hits.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    counts: dict[Term, int] = {}
    for token in set(tokenize(query)):
        for subject, _ in index.postings.get(token, ()):
            counts[subject] = counts.get(subject, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], str(kv[0])))
    return [SearchHit(s, n) for s, n in ranked[:limit]]
