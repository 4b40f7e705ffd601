"""HTTP JSON API for browsing a knowledge base by similarity.

One immutable knowledge base (plus its search index and an optional
precomputed cache) is shared across requests; the cache reference can be
swapped atomically through an admin endpoint. All errors share the
envelope {"error", "detail", "param"?}. Responses are deterministic for
identical requests, timing fields aside.
"""

from __future__ import annotations

import time
from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from lodsim.kb import IRI, BlankNode, KnowledgeBase, Literal, Term, load_kb
from lodsim.neighborhood import DEFAULT_POLICY, ExpansionPolicy, expand
from lodsim.ranking import (
    MODE_BY_VARIANT,
    SimilarityCache,
    VARIANTS,
    load_cache,
    top_l,
)
from lodsim.reversal import CANDIDATE_MODES, candidate_similar
from lodsim.search import LiteralIndex, search
from lodsim.similarity import (
    WEIGHTINGS,
    shared_nodes,
    similarity_from_distances,
)
from lodsim.sparqlgen import gen_set_query, parse_set_argument

SHARED_NODES_CAP = 32

DEFAULTS = {"k": 3, "L": 5, "weighting": "weighted", "variant": "sim"}
K_RANGE = (1, 5)
L_RANGE = (1, 50)


class ApiError(Exception):
    def __init__(self, status: int, error: str, detail: str, param: str | None = None):
        self.status = status
        self.error = error
        self.detail = detail
        self.param = param
        super().__init__(detail)

    def body(self) -> dict[str, str]:
        body = {"error": self.error, "detail": self.detail}
        if self.param is not None:
            body["param"] = self.param
        return body


def _parse_entity_param(value: str | None) -> Term:
    if not value:
        raise ApiError(400, "validation_error", "missing required parameter: uri", "uri")
    if value.startswith("_:"):
        return BlankNode(value[2:])
    return IRI(value)


def _parse_int(value: str | None, name: str, default: int, lo: int, hi: int) -> int:
    if value is None:
        return default
    try:
        number = int(value)
    except ValueError:
        raise ApiError(400, "validation_error", f"{name} must be an integer", name) from None
    if not lo <= number <= hi:
        raise ApiError(
            400, "validation_error", f"{name} must be in [{lo}, {hi}], got {number}", name
        )
    return number


def _parse_choice(value: str | None, name: str, default: str, choices: tuple[str, ...]) -> str:
    if value is None:
        return default
    if value not in choices:
        raise ApiError(
            400, "validation_error",
            f"{name} must be one of {', '.join(choices)}; got {value!r}", name,
        )
    return value


def local_name(iri: str) -> str:
    for sep in ("#", "/"):
        if sep in iri:
            iri = iri.rsplit(sep, 1)[1]
    return iri


def label_of(kb: KnowledgeBase, term: Term) -> str | None:
    """First label literal: predicates with local name "label", sorted."""
    uid = kb.term_id(term)
    if uid is None:
        return None
    found: list[tuple[str, str]] = []
    for p, o in kb._out.get(uid, ()):
        pred = kb.term(p)
        obj = kb.term(o)
        if isinstance(pred, IRI) and isinstance(obj, Literal):
            if local_name(pred.value).casefold() == "label":
                found.append((pred.value, obj.lexical))
    if not found:
        return None
    return min(found)[1]


def _render_value(kb: KnowledgeBase, term: Term) -> dict[str, Any]:
    if isinstance(term, Literal):
        rendered: dict[str, Any] = {"kind": "literal", "text": term.lexical}
        if term.language:
            rendered["language"] = term.language
        if term.datatype:
            rendered["datatype"] = term.datatype
        return rendered
    rendered = {
        "kind": "iri" if isinstance(term, IRI) else "bnode",
        "text": str(term),
        "uri": str(term),
    }
    label = label_of(kb, term)
    if label is not None:
        rendered["label"] = label
    return rendered


def _similar_entry(
    kb: KnowledgeBase, hood_a, x: Term, k: int, weighting: str,
    policy: ExpansionPolicy,
) -> dict[str, Any]:
    hood_x = expand(kb, x, k, policy)
    score = similarity_from_distances(hood_a.dist, hood_x.dist, k, weighting)
    shared = []
    for row in shared_nodes(hood_a, hood_x, SHARED_NODES_CAP):
        node: dict[str, Any] = {
            "text": str(row.node),
            "distA": row.dist_a,
            "distB": row.dist_b,
            "weight": row.weight,
        }
        inner = getattr(row.node, "term", None)
        if isinstance(inner, (IRI, BlankNode)):
            node["uri"] = str(inner)
        shared.append(node)
    entry: dict[str, Any] = {
        "uri": str(x),
        "score": score.value,
        "numerator": score.numerator,
        "denominator": score.denominator,
        "intersectionSize": score.intersection_size,
        "unionSize": score.union_size,
        "sharedNodes": shared,
    }
    label = label_of(kb, x)
    if label is not None:
        entry["label"] = label
    return entry


def create_app(
    kb: KnowledgeBase,
    index: LiteralIndex | None = None,
    cache: SimilarityCache | None = None,
    cache_path: str | None = None,
    defaults: dict[str, Any] | None = None,
) -> FastAPI:
    app = FastAPI(title="lodsim", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.kb = kb
    app.state.index = index or LiteralIndex(kb)
    app.state.cache = cache
    app.state.cache_path = cache_path
    app.state.defaults = {**DEFAULTS, **(defaults or {})}

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(exc.body(), status_code=exc.status)

    @app.exception_handler(Exception)
    async def handle_crash(_request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(
            {"error": "internal", "detail": f"{type(exc).__name__}: {exc}"},
            status_code=500,
        )

    def known_entity(raw_uri: str | None) -> Term:
        term = _parse_entity_param(raw_uri)
        if kb.term_id(term) is None:
            raise ApiError(404, "not_found", f"unknown entity: {raw_uri}", "uri")
        return term

    def similarity_params(
        k: str | None, L: str | None, weighting: str | None, variant: str | None
    ) -> tuple[int, int, str, str, ExpansionPolicy]:
        d = app.state.defaults
        k_val = _parse_int(k, "k", d["k"], *K_RANGE)
        l_val = _parse_int(L, "L", d["L"], *L_RANGE)
        w = _parse_choice(weighting, "weighting", d["weighting"], WEIGHTINGS)
        v = _parse_choice(variant, "variant", d["variant"], VARIANTS)
        policy = ExpansionPolicy(DEFAULT_POLICY.directions, MODE_BY_VARIANT[v])
        return k_val, l_val, w, v, policy

    @app.get("/api/stats")
    def stats() -> dict[str, Any]:
        return {**kb.stats(), "cacheLoaded": app.state.cache is not None}

    @app.get("/api/entity")
    def entity(uri: str | None = None) -> dict[str, Any]:
        term = known_entity(uri)
        uid = kb.term_id(term)
        outgoing: dict[str, list[dict[str, Any]]] = {}
        for p, o in kb._out.get(uid, ()):
            outgoing.setdefault(str(kb.term(p)), []).append(_render_value(kb, kb.term(o)))
        incoming: dict[str, list[str]] = {}
        for p, s in kb._in.get(uid, ()):
            incoming.setdefault(str(kb.term(p)), []).append(str(kb.term(s)))
        out_groups = [
            {"property": p, "values": sorted(vals, key=lambda v: (v["text"], v["kind"]))}
            for p, vals in sorted(outgoing.items())
        ]
        in_groups = [
            {"property": p, "subjects": sorted(set(subjects))}
            for p, subjects in sorted(incoming.items())
        ]
        types = sorted(str(c) for c in kb.classes(term))
        return {
            "uri": str(term),
            "label": label_of(kb, term),
            "types": types,
            "outgoing": out_groups,
            "incoming": in_groups,
            "counts": {
                "outgoing": sum(len(g["values"]) for g in out_groups),
                "incoming": sum(len(g["subjects"]) for g in in_groups),
                "types": len(types),
            },
        }

    @app.get("/api/similar")
    def similar(
        uri: str | None = None,
        k: str | None = None,
        L: str | None = None,
        weighting: str | None = None,
        variant: str | None = None,
        method: str | None = None,
    ) -> dict[str, Any]:
        started = time.perf_counter()
        term = known_entity(uri)
        k_val, l_val, w, v, policy = similarity_params(k, L, weighting, variant)
        method_val = _parse_choice(
            method, "method", "reversal", ("exhaustive", "reversal", "lattice", "cache")
        )
        if method_val == "cache":
            cache_obj: SimilarityCache | None = app.state.cache
            if cache_obj is None:
                raise ApiError(400, "no_cache", "no cache loaded; start with --cache or POST /api/reload-cache")
            fp = cache_obj.fingerprint
            if fp is not None and (
                fp.k != k_val
                or fp.weighting != w
                or fp.variant != v
                or fp.expansion_policy() != policy
            ):
                raise ApiError(
                    400, "fingerprint_mismatch",
                    f"cache fingerprint is k={fp.k}, weighting={fp.weighting}, "
                    f"variant={fp.variant}, policy={','.join(fp.policy)}; "
                    "request parameters must match",
                )
            if l_val > cache_obj.L:
                raise ApiError(
                    400, "fingerprint_mismatch",
                    f"cache holds the top {cache_obj.L} per entity; L={l_val} is larger",
                    "L",
                )
            cached = cache_obj.neighbors_of(str(term))
            if cached is None:
                raise ApiError(404, "not_cached", f"no cached record for {term}", "uri")
            neighbor_terms = [_parse_entity_param(n_uri) for n_uri, _ in cached[:l_val]]
        else:
            try:
                ranked = top_l(kb, term, l_val, k_val, w, policy, method=method_val)
            except ValueError as exc:
                raise ApiError(400, "validation_error", str(exc), "method") from None
            neighbor_terms = [x for x, _ in ranked.entries]
        hood_a = expand(kb, term, k_val, policy)
        entries = [
            _similar_entry(kb, hood_a, x, k_val, w, policy) for x in neighbor_terms
        ]
        elapsed_ms = round((time.perf_counter() - started) * 1000, 3)
        return {
            "uri": str(term),
            "k": k_val,
            "L": l_val,
            "weighting": w,
            "variant": v,
            "entries": entries,
            "elapsedMs": elapsed_ms,
        }

    @app.get("/api/candidates")
    def candidates(
        uri: str | None = None, k: str | None = None, mode: str | None = None
    ) -> dict[str, Any]:
        term = known_entity(uri)
        k_val = _parse_int(k, "k", app.state.defaults["k"], *K_RANGE)
        mode_val = _parse_choice(mode, "mode", "complete", CANDIDATE_MODES)
        members = candidate_similar(kb, term, k_val, DEFAULT_POLICY, mode=mode_val)
        rendered = []
        for m in sorted(members, key=str):
            row: dict[str, Any] = {"uri": str(m)}
            label = label_of(kb, m)
            if label is not None:
                row["label"] = label
            rendered.append(row)
        return {
            "uri": str(term),
            "k": k_val,
            "mode": mode_val,
            "count": len(rendered),
            "members": rendered,
        }

    @app.get("/api/search")
    def search_endpoint(q: str | None = None, limit: str | None = None) -> dict[str, Any]:
        if q is None:
            raise ApiError(400, "validation_error", "missing required parameter: q", "q")
        limit_val = _parse_int(limit, "limit", 10, 1, 1000)
        hits = search(app.state.index, q, limit_val)
        rendered = []
        for hit in hits:
            row: dict[str, Any] = {"uri": str(hit.subject), "matches": hit.matched_tokens}
            label = label_of(kb, hit.subject)
            if label is not None:
                row["label"] = label
            rendered.append(row)
        return {"q": q, "hits": rendered}

    @app.get("/api/querygen")
    def querygen(uri: str | None = None, set: str | None = None) -> dict[str, Any]:
        if not uri:
            raise ApiError(400, "validation_error", "missing required parameter: uri", "uri")
        if not set:
            raise ApiError(400, "validation_error", "missing required parameter: set", "set")
        try:
            purpose, pair = parse_set_argument(set)
            query = gen_set_query(uri, purpose, pair)
        except ValueError as exc:
            param = "uri" if "IRI" in str(exc) else "set"
            raise ApiError(400, "validation_error", str(exc), param) from None
        return {"uri": uri, "set": set, "text": query.text}

    @app.post("/api/reload-cache")
    async def reload_cache(request: Request) -> dict[str, Any]:
        path = app.state.cache_path
        if request.headers.get("content-type", "").startswith("application/json"):
            body = await request.json()
            if isinstance(body, dict) and body.get("path"):
                path = body["path"]
        if not path:
            raise ApiError(400, "no_cache", "no cache path configured and none given", "path")
        try:
            new_cache = load_cache(path, kb=kb)
        except FileNotFoundError:
            raise ApiError(404, "cache_error", f"cache file not found: {path}", "path") from None
        except Exception as exc:
            raise ApiError(400, "cache_error", str(exc), "path") from None
        app.state.cache = new_cache
        app.state.cache_path = path
        return {
            "loaded": True,
            "records": len(new_cache.records),
            "createdAt": new_cache.created_at,
        }

    return app


def serve(
    kb_path: str,
    labels_path: str | None = None,
    cache_path: str | None = None,
    port: int = 8080,
    host: str = "127.0.0.1",
    defaults: dict[str, Any] | None = None,
) -> None:
    """Load everything, then block serving HTTP; stale caches fail fast."""
    import uvicorn

    paths = [kb_path] + ([labels_path] if labels_path else [])
    kb, _ = load_kb(*paths)
    cache = load_cache(cache_path, kb=kb) if cache_path else None
    app = create_app(kb, cache=cache, cache_path=cache_path, defaults=defaults)
    uvicorn.run(app, host=host, port=port, log_level="warning")
