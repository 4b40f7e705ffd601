"""
Top-L ranking and the precomputed cache
=======================================

Rank the most similar entities live, then precompute the same answers
into a cache file keyed by the KB's content hash. A cache built from a
different graph refuses to load.
"""

import tempfile
from pathlib import Path

from lodsim import (
    CacheStalenessError,
    IRI,
    load_cache,
    load_kb,
    precompute_all,
    save_cache,
    top_l,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
kb, _ = load_kb(FIXTURES / "movies.nt")
dvc = IRI("http://ex/DaVinciCode")

# reversal only scores the provably nonzero candidates; exhaustive
# scores every entity; both return identical rankings
for method in ("reversal", "exhaustive"):
    ranked = top_l(kb, dvc, L=3, k=3, method=method)
    print(method, [(str(t), round(s.value, 4)) for t, s in ranked.entries])

# precompute every instance of Film, two neighbors each
cache = precompute_all(kb, {"http://ex/Film"}, L=2, k=3)
print(f"{len(cache.records)} records under hash {cache.kb_hash[:12]}…")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "films.jsonl"
    save_cache(cache, path)
    print(path.read_text().splitlines()[0])  # the header line

    # loading against the same KB succeeds and serves instantly
    loaded = load_cache(path, kb)
    print("cached:", loaded.neighbors_of("http://ex/DaVinciCode"))

    # loading against any other KB is refused, never silently wrong
    other, _ = load_kb(FIXTURES / "ranking_flip.nt")
    try:
        load_cache(path, other)
    except CacheStalenessError as exc:
        print("stale:", exc)
