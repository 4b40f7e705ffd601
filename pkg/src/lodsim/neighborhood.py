"""Bounded-radius neighborhoods of knowledge base entities.

A neighborhood collects every node reachable from a source entity within k
expansion steps, tagged with its shortest distance (1..k). Expansion walks
a configurable subset of six directions; the source itself is excluded.
Distances feed the weighted set similarity in module ``similarity``.

Nodes come in two shapes. A plain node is a term of the base. A prefixed
node is a (property, value) pair written "p:o": it records through which
property a value was reached and is terminal, never expanded further.
Plain and prefixed nodes never compare equal, even for the same term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterator

from lodsim.kb import Term

if TYPE_CHECKING:
    from lodsim.kb import KnowledgeBase


class Direction(Enum):
    """One of the six expansion directions.

    For a node u: RES_FROM yields objects of u's ordinary property edges,
    RES_TO their mirror image (subjects pointing at u), CLASSES the types
    of u, INSTANCES the members of class u, SUB_CLASSES / SUPER_CLASSES
    one subsumption step down / up.
    """

    RES_FROM = ("ResFrom", "rf")
    RES_TO = ("ResTo", "rt")
    CLASSES = ("Classes", "cl")
    INSTANCES = ("Instances", "inst")
    SUB_CLASSES = ("SubClasses", "sub")
    SUPER_CLASSES = ("SuperClasses", "sp")

    def __init__(self, label: str, code: str):
        self.label = label
        self.code = code

    @classmethod
    def parse(cls, token: str) -> "Direction":
        t = token.strip().lower()
        for d in cls:
            if t in (d.label.lower(), d.code):
                return d
        raise ValueError(f"unknown direction {token!r} (expected one of "
                         + ", ".join(f"{d.label}/{d.code}" for d in cls) + ")")


def neighbors_in(kb: "KnowledgeBase", u: Term, direction: Direction) -> frozenset[Term]:
    """One expansion step from u in a single direction."""
    return {
        Direction.RES_FROM: kb.res_from,
        Direction.RES_TO: kb.res_to,
        Direction.CLASSES: kb.classes,
        Direction.INSTANCES: kb.instances,
        Direction.SUB_CLASSES: kb.subclasses,
        Direction.SUPER_CLASSES: kb.superclasses,
    }[direction](u)


def step_ids(kb: "KnowledgeBase", uid: int, direction: Direction) -> Iterator[int]:
    """Id-level single step, for the traversal engines."""
    if direction is Direction.RES_FROM:
        for _, o in kb._out.get(uid, ()):
            yield o
    elif direction is Direction.RES_TO:
        for _, s in kb._in.get(uid, ()):
            yield s
    elif direction is Direction.CLASSES:
        yield from kb._classes.get(uid, ())
    elif direction is Direction.INSTANCES:
        yield from kb._instances.get(uid, ())
    elif direction is Direction.SUB_CLASSES:
        yield from kb._subs.get(uid, ())
    else:
        yield from kb._supers.get(uid, ())


class PrefixMode(Enum):
    PLAIN = "plain"
    PREFIXED = "prefixed"
    COMBINED = "combined"

    @classmethod
    def parse(cls, token: str) -> "PrefixMode":
        t = token.strip().lower()
        for m in cls:
            if t == m.value:
                return m
        raise ValueError(f"unknown prefix mode {token!r} (expected plain, prefixed or combined)")


@dataclass(frozen=True)
class ExpansionPolicy:
    """Which directions to walk, and how ResFrom results are represented.

    In PREFIXED mode each ResFrom edge (u, p, o) contributes the terminal
    prefixed node p:o instead of the plain node o; the walk continues only
    through the other directions. COMBINED mode contributes both the
    prefixed node and the expandable plain node.
    """

    directions: frozenset[Direction] = field(
        default_factory=lambda: frozenset(
            {Direction.RES_FROM, Direction.CLASSES, Direction.SUPER_CLASSES}
        )
    )
    prefix_mode: PrefixMode = PrefixMode.PLAIN

    def direction_labels(self) -> list[str]:
        return [d.label for d in Direction if d in self.directions]

    @classmethod
    def parse(cls, directions: str | None = None, prefix_mode: str | None = None) -> "ExpansionPolicy":
        dirs = (
            frozenset(Direction.parse(tok) for tok in directions.split(",") if tok.strip())
            if directions
            else cls().directions
        )
        if not dirs:
            raise ValueError("expansion policy needs at least one direction")
        mode = PrefixMode.parse(prefix_mode) if prefix_mode else PrefixMode.PLAIN
        return cls(directions=dirs, prefix_mode=mode)


DEFAULT_POLICY = ExpansionPolicy()


@dataclass(frozen=True, slots=True)
class Plain:
    term: Term

    def __str__(self) -> str:
        return str(self.term)


@dataclass(frozen=True, slots=True)
class Prefixed:
    """Terminal node "p:o" recording the property an object was seen through."""

    prop: Term
    value: Term

    def __str__(self) -> str:
        return f"{self.prop}:{self.value}"


NeighborhoodNode = Plain | Prefixed

# Internal node keys: a plain node is its term id, a prefixed node the id
# pair (property, value). The two never collide.
NodeKey = int | tuple[int, int]


class Neighborhood:
    """The radius-k neighborhood of one source entity.

    Maps every discovered node to its shortest distance in 1..k. The
    source is not a member. Index-level keys are exposed for the
    similarity computation; term-level views for everything else.
    """

    def __init__(self, kb: "KnowledgeBase", source: Term, k: int,
                 policy: ExpansionPolicy, dist: dict[NodeKey, int]):
        self.kb = kb
        self.source = source
        self.k = k
        self.policy = policy
        self.dist = dist

    def __len__(self) -> int:
        return len(self.dist)

    def node_of(self, key: NodeKey) -> NeighborhoodNode:
        if isinstance(key, int):
            return Plain(self.kb.term(key))
        return Prefixed(self.kb.term(key[0]), self.kb.term(key[1]))

    def key_of(self, node: NeighborhoodNode | Term) -> NodeKey | None:
        if isinstance(node, Plain):
            node = node.term
        if isinstance(node, Prefixed):
            p = self.kb.term_id(node.prop)
            o = self.kb.term_id(node.value)
            return None if p is None or o is None else (p, o)
        tid = self.kb.term_id(node)
        return tid

    def distance(self, node: NeighborhoodNode | Term) -> int | None:
        """Shortest distance of a node, or None when absent."""
        key = self.key_of(node)
        return None if key is None else self.dist.get(key)

    def __iter__(self) -> Iterator[NeighborhoodNode]:
        for key in self.dist:
            yield self.node_of(key)

    def sorted_items(self) -> list[tuple[NeighborhoodNode, int]]:
        """(node, distance) pairs ordered by distance, then node text."""
        return sorted(
            ((self.node_of(key), d) for key, d in self.dist.items()),
            key=lambda pair: (pair[1], str(pair[0])),
        )

    def by_distance(self) -> dict[int, list[NeighborhoodNode]]:
        out: dict[int, list[NeighborhoodNode]] = {}
        for node, d in self.sorted_items():
            out.setdefault(d, []).append(node)
        return out


def expand(kb: "KnowledgeBase", source: Term, k: int,
           policy: ExpansionPolicy = DEFAULT_POLICY) -> Neighborhood:
    """Breadth-first expansion of ``source`` out to radius ``k``.

    Each node keeps the distance of its first discovery, which breadth
    order makes the shortest. Unknown sources yield an empty neighborhood.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    dist: dict[NodeKey, int] = {}
    source_id = kb.term_id(source)
    if source_id is None or k == 0:
        return Neighborhood(kb, source, k, policy, dist)

    res_from = Direction.RES_FROM in policy.directions
    prefixing = res_from and policy.prefix_mode is not PrefixMode.PLAIN
    plain_res_from = res_from and policy.prefix_mode is not PrefixMode.PREFIXED
    schema_tables = []
    if Direction.CLASSES in policy.directions:
        schema_tables.append(kb._classes)
    if Direction.INSTANCES in policy.directions:
        schema_tables.append(kb._instances)
    if Direction.SUB_CLASSES in policy.directions:
        schema_tables.append(kb._subs)
    if Direction.SUPER_CLASSES in policy.directions:
        schema_tables.append(kb._supers)
    res_to = Direction.RES_TO in policy.directions

    frontier = [source_id]
    for step in range(1, k + 1):
        next_frontier: list[int] = []

        def visit_plain(v: int) -> None:
            if v != source_id and v not in dist:
                dist[v] = step
                next_frontier.append(v)

        for u in frontier:
            if prefixing:
                for p, o in kb._out.get(u, ()):
                    key = (p, o)
                    if key not in dist:
                        dist[key] = step
                    if plain_res_from:
                        visit_plain(o)
            elif plain_res_from:
                for _, o in kb._out.get(u, ()):
                    visit_plain(o)
            if res_to:
                for _, s in kb._in.get(u, ()):
                    visit_plain(s)
            for table in schema_tables:
                for v in table.get(u, ()):
                    visit_plain(v)
        frontier = next_frontier
        if not frontier:
            break
    return Neighborhood(kb, source, k, policy, dist)
