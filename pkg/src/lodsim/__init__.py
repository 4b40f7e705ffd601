"""Neighborhood-based similarity engine and browsing service for RDF data.

Loads N-Triples into an indexed in-memory base, compares entities by
distance-weighted overlap of their radius-k neighborhoods, retrieves the
most similar entities by exhaustive scan, reversed traversal or candidate
set descent, and exposes it all through a CLI and an HTTP JSON API.
"""

from lodsim.kb import (
    BlankNode,
    IRI,
    KbError,
    KnowledgeBase,
    Literal,
    ParseDiagnostic,
    ParseError,
    Triple,
    build_kb,
    load_kb,
    parse_ntriples,
    serialize_ntriples,
)
from lodsim.neighborhood import (
    DEFAULT_POLICY,
    Direction,
    ExpansionPolicy,
    Neighborhood,
    Plain,
    PrefixMode,
    Prefixed,
    expand,
    neighbors_in,
)
from lodsim.ranking import (
    CacheError,
    CacheFormatError,
    CacheStalenessError,
    Fingerprint,
    RankedNeighbors,
    SimilarityCache,
    load_cache,
    precompute_all,
    save_cache,
    top_l,
)
from lodsim.reversal import (
    candidate_set,
    candidate_sets,
    candidate_similar,
    lattice_descend,
    rev,
)
from lodsim.search import LiteralIndex, SearchHit, search
from lodsim.similarity import (
    SharedNode,
    SimilarityScore,
    node_weight,
    shared_nodes,
    similarity,
    similarity_from_distances,
)
from lodsim.sparqlgen import (
    EndpointError,
    ExecutionReport,
    GeneratedQuery,
    execute_on_endpoint,
    gen_set_query,
    gen_sim_query,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
