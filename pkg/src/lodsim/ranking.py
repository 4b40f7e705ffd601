"""Top-L similar-entity retrieval and the precomputed similarity cache.

Three retrieval strategies produce the same contract: score candidates
against a source, keep the strictly positive ones, sort by score
descending with ties broken by ascending entity text, truncate to L.
``exhaustive`` scores every other entity, ``reversal`` only the provably
nonzero candidates (same result, fewer scorings), and ``lattice`` scores
the staged candidate-set descent (radius 1 only, heuristic).

Caches persist one ranked record per entity as JSON lines behind a header
carrying the source KB's content hash; a cache never silently serves
answers for a different KB or configuration.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from lodsim.kb import IRI, BlankNode, KnowledgeBase, Term
from lodsim.neighborhood import (
    DEFAULT_POLICY,
    Direction,
    ExpansionPolicy,
    PrefixMode,
)
from lodsim.reversal import candidate_similar, lattice_descend
from lodsim.similarity import SimilarityScore, similarity

TOP_METHODS = ("exhaustive", "reversal", "lattice")

VARIANT_BY_MODE = {
    PrefixMode.PLAIN: "sim",
    PrefixMode.PREFIXED: "simPrefixed",
    PrefixMode.COMBINED: "simCombined",
}
MODE_BY_VARIANT = {v: m for m, v in VARIANT_BY_MODE.items()}
VARIANTS = tuple(MODE_BY_VARIANT)


@dataclass(frozen=True)
class Fingerprint:
    """The configuration a ranking or cache was computed under."""

    k: int
    weighting: str
    variant: str
    policy: tuple[str, ...]  # direction labels, declaration order

    @classmethod
    def of(cls, k: int, weighting: str, policy: ExpansionPolicy) -> "Fingerprint":
        return cls(
            k, weighting, VARIANT_BY_MODE[policy.prefix_mode],
            tuple(policy.direction_labels()),
        )

    def expansion_policy(self) -> ExpansionPolicy:
        return ExpansionPolicy(
            directions=frozenset(Direction.parse(label) for label in self.policy),
            prefix_mode=MODE_BY_VARIANT[self.variant],
        )


@dataclass(frozen=True)
class RankedNeighbors:
    """Up to L positive-similarity entities, best first."""

    source: Term
    entries: tuple[tuple[Term, SimilarityScore], ...]
    fingerprint: Fingerprint
    L: int


def _rank(
    kb: KnowledgeBase,
    a: Term,
    candidates: Iterable[Term],
    L: int,
    k: int,
    weighting: str,
    policy: ExpansionPolicy,
) -> list[tuple[Term, SimilarityScore]]:
    scored = []
    for x in candidates:
        if x == a:
            continue
        score = similarity(kb, a, x, k, weighting, policy)
        if score.value > 0:
            scored.append((x, score))
    scored.sort(key=lambda pair: (-pair[1].value, str(pair[0])))
    return scored[:L]


def top_l(
    kb: KnowledgeBase,
    a: Term,
    L: int,
    k: int,
    weighting: str = "weighted",
    policy: ExpansionPolicy = DEFAULT_POLICY,
    method: str = "reversal",
) -> RankedNeighbors:
    """The L entities most similar to ``a``; never includes ``a``.

    All methods agree on fixtures where they are defined; lattice is a
    radius-1 heuristic that stops at the first stage boundary reaching L
    candidates and is rejected for k > 1 rather than silently
    approximated.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if method == "exhaustive":
        candidates: Iterable[Term] = kb.entity_terms()
    elif method == "reversal":
        candidates = candidate_similar(kb, a, k, policy, mode="complete")
    elif method == "lattice":
        if k != 1:
            raise ValueError(
                "the lattice method stages depth-1 candidate sets and is only "
                "defined for k = 1; use method exhaustive or reversal for larger k"
            )
        pool: list[Term] = []
        for _, members in lattice_descend(kb, a, L):
            pool.extend(members)
        candidates = pool
    else:
        raise ValueError(f"unknown method {method!r}")
    entries = _rank(kb, a, candidates, L, k, weighting, policy)
    return RankedNeighbors(a, tuple(entries), Fingerprint.of(k, weighting, policy), L)


# --- precomputed cache ----------------------------------------------------

class CacheError(Exception):
    pass


class CacheFormatError(CacheError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class CacheStalenessError(CacheError):
    pass


@dataclass
class SimilarityCache:
    """Precomputed top-L neighbors per entity, tied to one KB and config.

    ``fingerprint`` is None only for a cache with no records (nothing
    matched the class filter), where no configuration is recoverable.
    """

    kb_hash: str
    created_at: str
    L: int
    fingerprint: Fingerprint | None
    records: dict[str, list[tuple[str, float]]]

    def neighbors_of(self, uri: str) -> list[tuple[str, float]] | None:
        return self.records.get(uri)


def _entity_key(term: Term) -> str:
    return str(term)


def precompute_all(
    kb: KnowledgeBase,
    class_filter: set[str] | None,
    L: int,
    k: int,
    weighting: str = "weighted",
    policy: ExpansionPolicy = DEFAULT_POLICY,
    parallelism: int = 1,
    created_at: str | None = None,
) -> SimilarityCache:
    """Rank every matching entity offline; input order never matters.

    ``class_filter`` of None ranks every IRI entity; otherwise only the
    instances of the named classes. Unknown classes produce a warning and
    are skipped. ``created_at`` is injectable so that rebuilds can be
    byte-identical.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if class_filter is None:
        sources = [t for t in kb.entity_terms() if isinstance(t, IRI)]
    else:
        members: set[Term] = set()
        for class_iri in sorted(class_filter):
            found = kb.instances(IRI(class_iri))
            if not found and kb.term_id(IRI(class_iri)) is None:
                warnings.warn(f"unknown class skipped: {class_iri}", stacklevel=2)
                continue
            members |= found
        sources = sorted(
            (t for t in members if isinstance(t, (IRI, BlankNode))), key=str
        )

    def record(term: Term) -> tuple[str, list[tuple[str, float]]]:
        ranked = top_l(kb, term, L, k, weighting, policy, method="reversal")
        return _entity_key(term), [
            (_entity_key(x), score.value) for x, score in ranked.entries
        ]

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            pairs = list(pool.map(record, sources))
    else:
        pairs = [record(t) for t in sources]
    records = dict(sorted(pairs))
    stamp = created_at or datetime.now(timezone.utc).isoformat(timespec="seconds")
    return SimilarityCache(
        kb.content_hash(), stamp, L, Fingerprint.of(k, weighting, policy), records
    )


def save_cache(cache: SimilarityCache, path: str | Path) -> None:
    """Write header line then one record line per entity, sorted by URI."""
    fp = cache.fingerprint
    if fp is None and cache.records:
        raise CacheError("cache with records but no fingerprint")
    lines = [
        json.dumps(
            {"kbHash": cache.kb_hash, "createdAt": cache.created_at, "L": cache.L},
            ensure_ascii=False,
        )
    ]
    for uri in sorted(cache.records):
        lines.append(
            json.dumps(
                {
                    "uri": uri,
                    "k": fp.k,
                    "weighting": fp.weighting,
                    "variant": fp.variant,
                    "policy": list(fp.policy),
                    "neighbors": [
                        {"uri": n, "score": s} for n, s in cache.records[uri]
                    ],
                },
                ensure_ascii=False,
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_cache(path: str | Path, kb: KnowledgeBase | None = None) -> SimilarityCache:
    """Read a cache file back; refuse stale or malformed caches.

    With ``kb`` given, a content-hash mismatch raises
    :class:`CacheStalenessError`. Any malformed line raises
    :class:`CacheFormatError` naming the 1-based line.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise CacheFormatError("cache file is empty, header expected", line=1)
    try:
        header = json.loads(lines[0])
        kb_hash = header["kbHash"]
        created_at = header["createdAt"]
        cache_l = int(header["L"])
    except (ValueError, KeyError, TypeError) as exc:
        raise CacheFormatError(f"bad header: {exc}", line=1) from exc

    fingerprint: Fingerprint | None = None
    records: dict[str, list[tuple[str, float]]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            fp = Fingerprint(
                int(rec["k"]), rec["weighting"], rec["variant"], tuple(rec["policy"])
            )
            uri = rec["uri"]
            neighbors = [(n["uri"], float(n["score"])) for n in rec["neighbors"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise CacheFormatError(f"bad record: {exc}", line=lineno) from exc
        if fp.weighting not in ("uniform", "weighted") or fp.variant not in VARIANTS:
            raise CacheFormatError(f"bad fingerprint {fp}", line=lineno)
        if fingerprint is None:
            fingerprint = fp
        elif fp != fingerprint:
            raise CacheFormatError(
                f"record fingerprint {fp} differs from {fingerprint}", line=lineno
            )
        if len(neighbors) > cache_l:
            raise CacheFormatError("record longer than header L", line=lineno)
        records[uri] = neighbors
    if kb is not None and kb.content_hash() != kb_hash:
        raise CacheStalenessError(
            f"cache was built for KB hash {kb_hash[:12]}… but the loaded KB "
            f"hashes to {kb.content_hash()[:12]}…; rebuild with `lodsim precompute`"
        )
    return SimilarityCache(kb_hash, created_at, cache_l, fingerprint, records)
