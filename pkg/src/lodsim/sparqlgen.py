"""SPARQL generation for the candidate sets, plus a small endpoint client.

Each candidate set has a SPARQL counterpart that retrieves the same
entities from any endpoint hosting the data, which lets candidates be
fetched remotely before scoring locally. Queries are emitted as stable
text (golden-file friendly): same inputs, byte-identical output.

The union and similarity listings are normalized to valid SPARQL 1.1
(group braces completed, the division cast through xsd:double); DISTINCT
is added throughout since candidates are sets.
"""

from __future__ import annotations

import re
import threading
import time
from dataclasses import dataclass

import requests

RDF_PREFIX = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_PREFIX = "http://www.w3.org/2000/01/rdf-schema#"
XSD_PREFIX = "http://www.w3.org/2001/XMLSchema#"

QUERY_PURPOSES = ("rf", "rfP", "cl", "sp", "pair", "inter", "union")

_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


@dataclass(frozen=True)
class GeneratedQuery:
    """A generated SELECT query binding ?y, with its provenance."""

    purpose: str
    subject: str
    text: str
    pair: tuple[str, str] | None = None


def _require_absolute(iri: str) -> None:
    if not _ABSOLUTE_IRI.match(iri):
        raise ValueError(f"subject must be an absolute IRI: {iri!r}")
    if any(c.isspace() for c in iri) or not iri:
        raise ValueError(f"subject is not a valid IRI: {iri!r}")


_PROLOGUE = (
    f"PREFIX rdf: <{RDF_PREFIX}>\n"
    f"PREFIX rdfs: <{RDFS_PREFIX}>\n"
)

# Body pattern fragments; {a} is the angle-bracketed subject. Singles use
# ?x, compound queries give the typing patterns ?z and the subsumption
# patterns ?w so the groups stay independent.
_RF = "{a} ?p1 ?x .\n?y ?p2 ?x ."
_RF_FILTER = "FILTER ( ?p1 != rdf:type && ?p2 != rdf:type )"
_RFP = "{a} ?p ?x .\n?y ?p ?x .\nFILTER ( ?p != rdf:type )"
_CL_X = "{a} rdf:type ?x .\n?y rdf:type ?x ."
_SP_X = "{a} rdfs:subClassOf ?x .\n?y rdfs:subClassOf ?x ."
_CL_Z = "{a} rdf:type ?z .\n?y rdf:type ?z ."
_SP_W = "{a} rdfs:subClassOf ?w .\n?y rdfs:subClassOf ?w ."


def _select(body_lines: list[str]) -> str:
    indented = "\n".join("  " + line for line in "\n".join(body_lines).split("\n"))
    return f"{_PROLOGUE}\nSELECT DISTINCT ?y\nWHERE {{\n{indented}\n}}\n"


def _group(fragment: str) -> list[str]:
    return ["{", *("  " + line for line in fragment.split("\n")), "}"]


def gen_set_query(
    a: str, purpose: str, pair: tuple[str, str] | None = None
) -> GeneratedQuery:
    """The SPARQL counterpart of one candidate set of subject ``a``.

    Purposes: rf, rfP, cl, sp compute the single sets; pair (with an
    ordered kind pair) a pairwise intersection; inter the full
    intersection; union the full union. Every variant matching arbitrary
    properties filters out rdf:type.
    """
    _require_absolute(a)
    subject = f"<{a}>"

    def fmt(fragment: str) -> str:
        return fragment.format(a=subject)

    if purpose == "rf":
        body = [fmt(_RF), _RF_FILTER]
    elif purpose == "rfP":
        body = [fmt(_RFP)]
    elif purpose == "cl":
        body = [fmt(_CL_X)]
    elif purpose == "sp":
        body = [fmt(_SP_X)]
    elif purpose == "inter":
        body = [fmt(_RF), fmt(_CL_Z), fmt(_SP_W), _RF_FILTER]
    elif purpose == "pair":
        if pair is None or sorted(pair) not in (["cl", "rf"], ["rf", "sp"], ["cl", "sp"]):
            raise ValueError(f"pair purpose needs two distinct kinds of rf, cl, sp; got {pair!r}")
        parts: list[str] = []
        if "rf" in pair:
            parts.append(fmt(_RF))
        if "cl" in pair:
            parts.append(fmt(_CL_Z))
        if "sp" in pair:
            parts.append(fmt(_SP_W))
        if "rf" in pair:
            parts.append(_RF_FILTER)
        body = parts
    elif purpose == "union":
        body = [
            *_group(fmt(_RF) + "\n" + _RF_FILTER),
            "UNION",
            *_group(fmt(_CL_Z)),
            "UNION",
            *_group(fmt(_SP_W)),
        ]
    else:
        raise ValueError(f"unknown query purpose {purpose!r}")
    return GeneratedQuery(purpose, a, _select(body), pair)


def gen_sim_query(a: str, b: str) -> GeneratedQuery:
    """Class-overlap similarity of two subjects, directly in SPARQL.

    Demonstration of the radius-1 Classes-only case: the ratio of shared
    to combined classes, with the division cast through xsd:double.
    Deeper radii need joins per step and are computed by the engine
    instead.
    """
    _require_absolute(a)
    _require_absolute(b)
    sa, sb = f"<{a}>", f"<{b}>"
    text = (
        f"{_PROLOGUE}"
        f"PREFIX xsd: <{XSD_PREFIX}>\n"
        "\n"
        "SELECT ( xsd:double(COUNT(DISTINCT ?class1)) / xsd:double(COUNT(DISTINCT ?class2)) AS ?res )\n"
        "WHERE {\n"
        "  {\n"
        f"    {sa} rdf:type ?class1 .\n"
        f"    {sb} rdf:type ?class1 .\n"
        "  }\n"
        "  UNION\n"
        "  {\n"
        f"    {{ {sa} rdf:type ?class2 . }}\n"
        "    UNION\n"
        f"    {{ {sb} rdf:type ?class2 . }}\n"
        "  }\n"
        "}\n"
    )
    return GeneratedQuery("sim", a, text, None)


# --- endpoint client ------------------------------------------------------

class EndpointError(Exception):
    """A SPARQL endpoint interaction failed; the message names the URL."""


@dataclass
class ExecutionReport:
    rows: int
    requests: int
    elapsed: float
    truncated: bool


_semaphores: dict[tuple[str, int], threading.Semaphore] = {}
_semaphores_lock = threading.Lock()


def _endpoint_semaphore(endpoint: str, limit: int) -> threading.Semaphore:
    # One semaphore per (endpoint, limit): polite concurrency cap.
    with _semaphores_lock:
        key = (endpoint, limit)
        if key not in _semaphores:
            _semaphores[key] = threading.Semaphore(limit)
        return _semaphores[key]


def execute_on_endpoint(
    endpoint: str,
    query: GeneratedQuery,
    timeout: float = 30.0,
    page_size: int = 1000,
    max_concurrent: int = 2,
    session: requests.Session | None = None,
) -> tuple[frozenset[str], ExecutionReport]:
    """Run a generated query, paging with LIMIT/OFFSET until exhausted.

    Returns the distinct bindings of the first projected variable plus a
    report. A page timing out ends the run early with ``truncated`` set
    and the rows gathered so far; protocol and transport failures raise
    :class:`EndpointError`.
    """
    sem = _endpoint_semaphore(endpoint, max_concurrent)
    http = session or requests
    values: set[str] = set()
    rows = 0
    nrequests = 0
    truncated = False
    started = time.monotonic()
    offset = 0
    while True:
        paged = f"{query.text}LIMIT {page_size}\nOFFSET {offset}\n"
        headers = {"Accept": "application/sparql-results+json"}
        with sem:
            try:
                nrequests += 1
                resp = http.get(
                    endpoint, params={"query": paged}, headers=headers, timeout=timeout
                )
                if resp.status_code in (405, 414):
                    resp = http.post(
                        endpoint, data={"query": paged}, headers=headers, timeout=timeout
                    )
            except requests.Timeout:
                truncated = True
                break
            except requests.RequestException as exc:
                raise EndpointError(f"request to {endpoint} failed: {exc}") from exc
        if resp.status_code != 200:
            detail = resp.text[:200].strip()
            raise EndpointError(f"{endpoint} answered HTTP {resp.status_code}: {detail}")
        try:
            payload = resp.json()
            variables = payload["head"]["vars"]
            bindings = payload["results"]["bindings"]
        except (ValueError, KeyError, TypeError) as exc:
            raise EndpointError(f"{endpoint} returned malformed results: {exc}") from exc
        var = variables[0] if variables else "y"
        for row in bindings:
            rows += 1
            cell = row.get(var)
            if cell and "value" in cell:
                values.add(cell["value"])
        if len(bindings) < page_size:
            break
        offset += page_size
    elapsed = time.monotonic() - started
    return frozenset(values), ExecutionReport(rows, nrequests, elapsed, truncated)


def parse_set_argument(spec: str) -> tuple[str, tuple[str, str] | None]:
    """Parse a CLI set argument: rf, rfP, cl, sp, inter, union or pair:x,y."""
    if spec.startswith("pair:"):
        kinds = tuple(part.strip() for part in spec[5:].split(","))
        if len(kinds) != 2:
            raise ValueError(f"pair spec needs two kinds, got {spec!r}")
        return "pair", kinds  # validated by gen_set_query
    if spec in ("rf", "rfP", "cl", "sp", "inter", "union"):
        return spec, None
    raise ValueError(f"unknown set {spec!r}")
