"""
Keyword search and the browsing service
=======================================

An inverted index over literal values answers keyword queries; the HTTP
service wraps search, entity views, and similarity rankings in one JSON
API. This demo searches in process and prints the equivalent service
calls.
"""

from pathlib import Path

from lodsim import LiteralIndex, load_kb, search

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# labels live in their own file; merge them with the graph
kb, _ = load_kb(FIXTURES / "movies.nt", FIXTURES / "labels.nt")
index = LiteralIndex(kb)
print(f"{len(index)} distinct tokens indexed")

# subjects are ranked by how many distinct query tokens they match
for query in ("da vinci code", "mystery", "hanks"):
    print(f"\n? {query}")
    for hit in search(index, query, limit=3):
        print(f"   {hit.matched_tokens} token(s)  {hit.subject}")

# the same data over HTTP:
#
#   lodsim serve --kb fixtures/movies.nt --labels fixtures/labels.nt --port 8080
#
#   GET /api/stats                         counts and cache status
#   GET /api/search?q=da+vinci             the ranked hits above
#   GET /api/entity?uri=http://ex/DaVinciCode
#   GET /api/similar?uri=http://ex/DaVinciCode&k=3&L=5
#   GET /api/candidates?uri=http://ex/DaVinciCode&k=1
#   GET /api/querygen?uri=http://ex/DaVinciCode&set=rf
#   POST /api/reload-cache                 swap in a fresh cache file
print("\nrun `lodsim serve --kb fixtures/movies.nt --labels fixtures/labels.nt`")
print("then open the frontend or curl the /api routes above")
