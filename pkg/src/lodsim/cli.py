"""Command line interface for the knowledge-base similarity engine.

Conventions: data goes to standard output, diagnostics to standard
error. `--format json` emits one parseable JSON document; the default
table format carries the same data tab-separated. Exit codes: 0 success,
1 validation or usage error, 2 I/O or parse error, 3 internal failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import traceback
from typing import Any

from lodsim.kb import (
    BlankNode,
    IRI,
    KbError,
    KnowledgeBase,
    ParseError,
    Term,
    load_kb,
)
from lodsim.neighborhood import ExpansionPolicy, expand
from lodsim.ranking import (
    CacheError,
    precompute_all,
    save_cache,
    top_l,
)
from lodsim.reversal import (
    candidate_set,
    candidate_similar,
    lattice_descend,
)
from lodsim.search import LiteralIndex, search
from lodsim.similarity import similarity
from lodsim.sparqlgen import (
    EndpointError,
    execute_on_endpoint,
    gen_set_query,
    parse_set_argument,
)

_PREFIXED = re.compile(r"^([A-Za-z][A-Za-z0-9_.\-]*):(.*)$")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract reserves 2 for I/O.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_prefixes(pairs: list[str] | None) -> dict[str, str]:
    prefixes: dict[str, str] = {}
    for pair in pairs or []:
        name, eq, base = pair.partition("=")
        if not eq or not name or not base:
            raise ValueError(f"--prefix expects name=base, got {pair!r}")
        prefixes[name] = base
    return prefixes


def _resolve_term(value: str, prefixes: dict[str, str]) -> Term:
    """An absolute IRI, a registered-prefix IRI, or a _:blank label."""
    if value.startswith("_:"):
        return BlankNode(value[2:])
    m = _PREFIXED.match(value)
    if m and m.group(1) in prefixes:
        return IRI(prefixes[m.group(1)] + m.group(2))
    if "://" not in value and not m:
        raise ValueError(
            f"{value!r} is not an absolute IRI; register a prefix with --prefix name=base"
        )
    return IRI(value)


def _resolve_iri(value: str, prefixes: dict[str, str]) -> str:
    term = _resolve_term(value, prefixes)
    if not isinstance(term, IRI):
        raise ValueError(f"an IRI is required here, got {value!r}")
    return term.value


def _load_kb_arg(args: argparse.Namespace) -> KnowledgeBase:
    kb, diagnostics = load_kb(*args.kb)
    for diag in diagnostics:
        print(f"warning: {diag}", file=sys.stderr)
    return kb


def _policy(args: argparse.Namespace) -> ExpansionPolicy:
    return ExpansionPolicy.parse(
        getattr(args, "directions", None), getattr(args, "prefix_mode", None)
    )


def _num(x: float) -> int | float:
    return int(x) if float(x).is_integer() else x


def _emit(args: argparse.Namespace, document: dict[str, Any], table: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(document, ensure_ascii=False))
    else:
        for line in table:
            print(line)


# --- subcommands ----------------------------------------------------------

def _cmd_validate(args: argparse.Namespace) -> int:
    total = 0
    reports = []
    bad = 0
    for path in args.files:
        kb_part, diagnostics = load_kb(path)
        count = len(kb_part)
        total += count
        bad += len(diagnostics)
        reports.append(
            {
                "path": path,
                "triples": count,
                "diagnostics": [
                    {"line": d.line, "reason": d.reason} for d in diagnostics
                ],
            }
        )
        for d in diagnostics:
            print(f"{path}:{d.line}: {d.reason}", file=sys.stderr)
    _emit(
        args,
        {"triples": total, "files": reports},
        [f"{total} triples"],
    )
    return 2 if bad else 0


def _cmd_dist(args: argparse.Namespace) -> int:
    kb = _load_kb_arg(args)
    prefixes = _parse_prefixes(args.prefix)
    source = _resolve_term(args.uri, prefixes)
    policy = _policy(args)
    hood = expand(kb, source, args.k, policy)
    nodes = [
        {"node": str(node), "distance": d} for node, d in hood.sorted_items()
    ]
    _emit(
        args,
        {
            "uri": str(source),
            "k": args.k,
            "directions": policy.direction_labels(),
            "prefixMode": policy.prefix_mode.value,
            "count": len(nodes),
            "nodes": nodes,
        },
        [f"{row['distance']}\t{row['node']}" for row in nodes],
    )
    print(f"{len(nodes)} nodes within {args.k} steps", file=sys.stderr)
    return 0


def _cmd_sim(args: argparse.Namespace) -> int:
    kb = _load_kb_arg(args)
    prefixes = _parse_prefixes(args.prefix)
    a = _resolve_term(args.a, prefixes)
    b = _resolve_term(args.b, prefixes)
    score = similarity(kb, a, b, args.k, args.weighting, _policy(args))
    document = {
        "a": str(a),
        "b": str(b),
        "k": args.k,
        "weighting": args.weighting,
        "value": score.value,
        "numerator": _num(score.numerator),
        "denominator": _num(score.denominator),
        "intersectionSize": score.intersection_size,
        "unionSize": score.union_size,
    }
    _emit(
        args,
        document,
        [f"{key}\t{document[key]}" for key in
         ("value", "numerator", "denominator", "intersectionSize", "unionSize")],
    )
    return 0


def _cmd_candidates(args: argparse.Namespace) -> int:
    kb = _load_kb_arg(args)
    prefixes = _parse_prefixes(args.prefix)
    a = _resolve_term(args.uri, prefixes)
    if args.sets:
        stages: list[tuple[str, list[str]]] = []
        if args.sets == "all":
            for label, members in lattice_descend(kb, a):
                stages.append((label, [str(m) for m in members]))
        elif args.sets == "pairs":
            for pair in (("rf", "cl"), ("rf", "sp"), ("cl", "sp")):
                members = candidate_set(kb, a, pair[0]) & candidate_set(kb, a, pair[1])
                stages.append(("&".join(pair), sorted(str(m) for m in members)))
        else:
            for kind in args.sets.split(","):
                kind = kind.strip()
                members = candidate_set(kb, a, kind)
                stages.append((kind, sorted(str(m) for m in members)))
        _emit(
            args,
            {"uri": str(a), "sets": [
                {"label": label, "members": members} for label, members in stages
            ]},
            [f"{label}\t{m}" for label, members in stages for m in members],
        )
        return 0
    members = sorted(str(m) for m in candidate_similar(kb, a, args.k, _policy(args), args.mode))
    _emit(
        args,
        {"uri": str(a), "k": args.k, "mode": args.mode,
         "count": len(members), "members": members},
        [f"{args.mode}\t{m}" for m in members],
    )
    print(f"{len(members)} candidates", file=sys.stderr)
    return 0


def _cmd_top(args: argparse.Namespace) -> int:
    kb = _load_kb_arg(args)
    prefixes = _parse_prefixes(args.prefix)
    a = _resolve_term(args.uri, prefixes)
    ranked = top_l(kb, a, args.L, args.k, args.weighting, _policy(args), args.method)
    entries = [
        {
            "rank": i,
            "uri": str(term),
            "score": score.value,
            "numerator": _num(score.numerator),
            "denominator": _num(score.denominator),
        }
        for i, (term, score) in enumerate(ranked.entries, start=1)
    ]
    _emit(
        args,
        {"uri": str(a), "k": args.k, "L": args.L, "method": args.method,
         "weighting": args.weighting, "entries": entries},
        [f"{e['rank']}\t{e['uri']}\t{e['score']}" for e in entries],
    )
    return 0


def _cmd_precompute(args: argparse.Namespace) -> int:
    kb = _load_kb_arg(args)
    prefixes = _parse_prefixes(args.prefix)
    if args.classes.strip().lower() == "all":
        class_filter = None
    else:
        class_filter = {
            _resolve_iri(c.strip(), prefixes)
            for c in args.classes.split(",") if c.strip()
        }
    cache = precompute_all(
        kb, class_filter, args.L, args.k, args.weighting, _policy(args),
        parallelism=args.parallel, created_at=args.created_at,
    )
    save_cache(cache, args.out)
    _emit(
        args,
        {"out": args.out, "records": len(cache.records), "kbHash": cache.kb_hash,
         "createdAt": cache.created_at, "L": cache.L},
        [f"{len(cache.records)} records\t{args.out}"],
    )
    return 0


def _cmd_genquery(args: argparse.Namespace) -> int:
    prefixes = _parse_prefixes(args.prefix)
    subject = _resolve_iri(args.uri, prefixes)
    purpose, pair = parse_set_argument(args.set)
    query = gen_set_query(subject, purpose, pair)
    if not args.exec:
        if args.format == "json":
            print(json.dumps(
                {"uri": subject, "set": args.set, "text": query.text},
                ensure_ascii=False,
            ))
        else:
            print(query.text, end="")
        return 0
    endpoint = args.endpoint or os.environ.get("LODSIM_ENDPOINT")
    if not endpoint:
        raise ValueError("--exec needs --endpoint or the LODSIM_ENDPOINT variable")
    results, report = execute_on_endpoint(
        endpoint, query, timeout=args.timeout, page_size=args.page_size
    )
    _emit(
        args,
        {"uri": subject, "set": args.set, "results": sorted(results),
         "report": {"rows": report.rows, "requests": report.requests,
                    "elapsed": report.elapsed, "truncated": report.truncated}},
        sorted(results),
    )
    print(
        f"rows={report.rows} requests={report.requests} "
        f"elapsed={report.elapsed:.3f}s truncated={report.truncated}",
        file=sys.stderr,
    )
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    kb = _load_kb_arg(args)
    hits = search(LiteralIndex(kb), args.q, args.limit)
    rows = [{"uri": str(h.subject), "matches": h.matched_tokens} for h in hits]
    _emit(
        args,
        {"q": args.q, "hits": rows},
        [f"{r['matches']}\t{r['uri']}" for r in rows],
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from lodsim.service import serve

    defaults = {}
    if args.default_k is not None:
        defaults["k"] = args.default_k
    if args.default_l is not None:
        defaults["L"] = args.default_l
    if args.default_weighting:
        defaults["weighting"] = args.default_weighting
    if args.default_variant:
        defaults["variant"] = args.default_variant
    serve(
        args.kb, labels_path=args.labels, cache_path=args.cache,
        port=args.port, host=args.host, defaults=defaults or None,
    )
    return 0


# --- argument wiring ------------------------------------------------------

def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "table"), default="table")


def _add_kb(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kb", action="append", required=True, metavar="FILE",
                   help="N-Triples file; repeat to merge several")


def _add_prefix(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prefix", action="append", metavar="NAME=BASE",
                   help="register NAME: as an IRI prefix for arguments")


def _add_policy(p: argparse.ArgumentParser) -> None:
    p.add_argument("--directions", metavar="D1,D2,…",
                   help="expansion directions (default ResFrom,Classes,SuperClasses)")
    p.add_argument("--prefix-mode", choices=("plain", "prefixed", "combined"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lodsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse N-Triples files and report")
    p.add_argument("files", nargs="+")
    _add_format(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("dist", help="neighborhood of an entity with distances")
    _add_kb(p); _add_prefix(p); _add_policy(p); _add_format(p)
    p.add_argument("--uri", required=True)
    p.add_argument("-k", type=int, default=3)
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("sim", help="similarity of two entities")
    _add_kb(p); _add_prefix(p); _add_policy(p); _add_format(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--weighting", choices=("uniform", "weighted"), default="weighted")
    p.set_defaults(func=_cmd_sim)

    p = sub.add_parser("candidates", help="candidate similar entities")
    _add_kb(p); _add_prefix(p); _add_policy(p); _add_format(p)
    p.add_argument("--uri", required=True)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--mode", choices=("paper", "complete"), default="complete")
    p.add_argument("--sets", metavar="rf,cl,sp|pairs|all",
                   help="show candidate sets or lattice stages instead")
    p.set_defaults(func=_cmd_candidates)

    p = sub.add_parser("top", help="top-L most similar entities")
    _add_kb(p); _add_prefix(p); _add_policy(p); _add_format(p)
    p.add_argument("--uri", required=True)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("-L", type=int, default=5)
    p.add_argument("--method", choices=("exhaustive", "reversal", "lattice"),
                   default="reversal")
    p.add_argument("--weighting", choices=("uniform", "weighted"), default="weighted")
    p.set_defaults(func=_cmd_top)

    p = sub.add_parser("precompute", help="precompute a top-L cache file")
    _add_kb(p); _add_prefix(p); _add_policy(p); _add_format(p)
    p.add_argument("--classes", required=True, metavar="IRI,…|all")
    p.add_argument("-k", type=int, default=3)
    p.add_argument("-L", type=int, default=5)
    p.add_argument("--weighting", choices=("uniform", "weighted"), default="weighted")
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--created-at", metavar="TIMESTAMP",
                   help="stamp for the header; fixed stamps give reproducible files")
    p.set_defaults(func=_cmd_precompute)

    p = sub.add_parser("genquery", help="generate (and optionally run) a candidate query")
    _add_prefix(p); _add_format(p)
    p.add_argument("--uri", required=True)
    p.add_argument("--set", required=True, metavar="rf|rfP|cl|sp|pair:a,b|inter|union")
    p.add_argument("--exec", action="store_true", help="run against a SPARQL endpoint")
    p.add_argument("--endpoint", metavar="URL")
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--page-size", type=int, default=1000)
    p.set_defaults(func=_cmd_genquery)

    p = sub.add_parser("search", help="keyword search over literals")
    _add_kb(p); _add_format(p)
    p.add_argument("--q", required=True)
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("serve", help="run the HTTP JSON API")
    p.add_argument("--kb", required=True, metavar="FILE")
    p.add_argument("--labels", metavar="FILE")
    p.add_argument("--cache", metavar="FILE")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--default-k", type=int, dest="default_k")
    p.add_argument("--default-L", type=int, dest="default_l")
    p.add_argument("--default-weighting", choices=("uniform", "weighted"))
    p.add_argument("--default-variant",
                   choices=("sim", "simPrefixed", "simCombined"))
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit:
        raise
    except BrokenPipeError:
        return 0
    except (ValueError, EndpointError) as exc:
        print(f"lodsim: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ParseError, KbError, CacheError) as exc:
        print(f"lodsim: error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
