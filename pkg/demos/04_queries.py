"""
Turning candidate sets into SPARQL
==================================

Every depth-1 candidate set has a SPARQL counterpart, so candidates can
be collected from a remote endpoint instead of a local file. This demo
prints the generated queries; point `endpoint` at a live service to run
one with automatic LIMIT/OFFSET paging.
"""

from lodsim import execute_on_endpoint, gen_set_query, gen_sim_query

subject = "http://ex/DaVinciCode"

# the same-value set: any property into a value the subject also has
print(gen_set_query(subject, "rf").text)

# the union of all three depth-1 sets in one query
print(gen_set_query(subject, "union").text)

# pairwise intersections take the two kinds to combine
print(gen_set_query(subject, "pair", ("rf", "cl")).text)

# a radius-1, classes-only similarity computed by the endpoint itself
print(gen_sim_query(subject, "http://ex/Illuminati").text)

endpoint = None  # e.g. "https://dbpedia.org/sparql"
if endpoint:
    values, report = execute_on_endpoint(endpoint, gen_set_query(subject, "cl"))
    print(f"{report.rows} rows in {report.requests} request(s), "
          f"{report.elapsed:.2f}s, truncated={report.truncated}")
    for value in sorted(values)[:10]:
        print("  ", value)
