"""Candidate discovery by reversed traversal and by candidate-set descent.

Scoring an entity against every other entity in a base is wasteful: most
pairs share nothing. The reversal route walks the source's neighborhood
and then traverses backwards from each neighborhood node, because exactly
the entities that can reach a shared node are the ones with a nonzero
similarity. The candidate-set route intersects three one-hop witness sets
(shared property values, shared classes, shared superclasses) and relaxes
the intersection stepwise down to their union.

Two traversal budgets are supported. The "paper" budget reverses each
node for its forward distance, which is cheap but can miss entities whose
path to the shared node is longer than the source's. The "complete"
budget reverses every node for the full radius k and finds exactly the
entities with nonzero similarity.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator

from lodsim.kb import IRI, BlankNode, KnowledgeBase, Term
from lodsim.neighborhood import (
    DEFAULT_POLICY,
    Direction,
    ExpansionPolicy,
    PrefixMode,
    expand,
    step_ids,
)

CANDIDATE_MODES = ("paper", "complete")

_REV = {
    Direction.RES_FROM: Direction.RES_TO,
    Direction.RES_TO: Direction.RES_FROM,
    Direction.CLASSES: Direction.INSTANCES,
    Direction.INSTANCES: Direction.CLASSES,
    Direction.SUB_CLASSES: Direction.SUPER_CLASSES,
    Direction.SUPER_CLASSES: Direction.SUB_CLASSES,
}


def rev(direction: Direction) -> Direction:
    """The opposite of a direction; rev is its own inverse."""
    return _REV[direction]


def _plain_directions(policy: ExpansionPolicy) -> frozenset[Direction]:
    # Directions that yield expandable plain nodes during forward
    # expansion; under PREFIXED, ResFrom yields terminal nodes only.
    if policy.prefix_mode is PrefixMode.PREFIXED:
        return policy.directions - {Direction.RES_FROM}
    return policy.directions


def _reverse_reach(
    kb: KnowledgeBase,
    starts: list[tuple[int, int]],
    rev_dirs: tuple[Direction, ...],
    exclude_start: int | None,
) -> set[int]:
    """Breadth-first reverse walk from (node id, remaining budget) seeds.

    Returns every id visited after at least one step; ``exclude_start``
    (when not itself a seed) is never reported, mirroring the exclusion of
    a source from its own neighborhood.
    """
    best: dict[int, int] = {}
    queue: deque[tuple[int, int]] = deque()
    for nid, budget in starts:
        if budget > best.get(nid, -1):
            best[nid] = budget
            queue.append((nid, budget))
    reached: set[int] = set()
    while queue:
        uid, budget = queue.popleft()
        if budget <= 0:
            continue
        for d in rev_dirs:
            for vid in step_ids(kb, uid, d):
                if vid == exclude_start:
                    continue
                remaining = budget - 1
                if remaining > best.get(vid, -1):
                    best[vid] = remaining
                    reached.add(vid)
                    queue.append((vid, remaining))
    return reached


def candidate_similar(
    kb: KnowledgeBase,
    a: Term,
    k: int,
    policy: ExpansionPolicy = DEFAULT_POLICY,
    mode: str = "complete",
) -> frozenset[Term]:
    """Entities that (potentially) have nonzero radius-k similarity to ``a``.

    Walks N_k(a), then traverses backwards from every neighborhood node:
    any entity with a forward path to a shared node lands in the result.
    With ``mode="complete"`` the result is exactly the set of entities x
    with sim_k(a, x) > 0; ``mode="paper"`` bounds each reverse walk by the
    node's forward distance instead of k and may return a subset.
    """
    if mode not in CANDIDATE_MODES:
        raise ValueError(f"unknown candidate mode {mode!r}")
    aid = kb.term_id(a)
    if aid is None:
        return frozenset()
    hood = expand(kb, a, k, policy)
    rev_dirs = tuple(rev(d) for d in Direction if d in _plain_directions(policy))

    pool: set[int] = set()
    for key, dist in hood.dist.items():
        budget = dist if mode == "paper" else k
        if isinstance(key, int):
            pool |= _reverse_reach(kb, [(key, budget)], rev_dirs, exclude_start=key)
        else:
            # Prefixed node p:o. Any subject v of an edge (v, p, o) holds
            # p:o at distance 1; entities reaching v by a plain walk of
            # budget-1 more steps hold it within the budget.
            p, o = key
            seeds = [(s, budget - 1) for q, s in kb._in.get(o, ()) if q == p]
            pool.update(s for s, _ in seeds)
            pool |= _reverse_reach(kb, seeds, rev_dirs, exclude_start=None)
    pool.discard(aid)
    return frozenset(
        t for t in kb.terms_of(pool) if isinstance(t, (IRI, BlankNode))
    )


# --- candidate sets and the descent lattice -------------------------------

CANDIDATE_SET_KINDS = ("rf", "rfP", "cl", "sp")


def candidate_set(kb: KnowledgeBase, a: Term, kind: str) -> frozenset[Term]:
    """One-hop witness set of entities sharing structure with ``a``.

    rf: some property value shared; rfP: some value shared through the
    same property; cl: some class shared; sp: some direct superclass of a
    class shared. The source qualifies as its own witness and is included.
    """
    aid = kb.term_id(a)
    if aid is None:
        return frozenset()
    found: set[int] = set()
    if kind == "rf":
        for _, o in kb._out.get(aid, ()):
            for _, s in kb._in.get(o, ()):
                found.add(s)
    elif kind == "rfP":
        for p, o in kb._out.get(aid, ()):
            for q, s in kb._in.get(o, ()):
                if q == p:
                    found.add(s)
    elif kind == "cl":
        for c in kb._classes.get(aid, ()):
            found |= kb._instances.get(c, frozenset())
    elif kind == "sp":
        # Only class-level subjects have superclasses, so this set is
        # empty for ordinary instances.
        for sc in kb._supers.get(aid, ()):
            found |= kb._subs.get(sc, frozenset())
    else:
        raise ValueError(f"unknown candidate set kind {kind!r}")
    return kb.terms_of(found)


def candidate_sets(kb: KnowledgeBase, a: Term) -> dict[str, frozenset[Term]]:
    return {kind: candidate_set(kb, a, kind) for kind in ("rf", "cl", "sp")}


def candidate_set_for_purpose(
    kb: KnowledgeBase, a: Term, purpose: str, pair: tuple[str, str] | None = None
) -> frozenset[Term]:
    """The local set a generated query of the same purpose must return."""
    if purpose in CANDIDATE_SET_KINDS:
        return candidate_set(kb, a, purpose)
    sets = candidate_sets(kb, a)
    if purpose == "pair":
        if pair is None:
            raise ValueError("purpose 'pair' needs a pair of set kinds")
        first, second = pair
        if first not in sets or second not in sets or first == second:
            raise ValueError(f"invalid set pair {pair!r}")
        return sets[first] & sets[second]
    if purpose == "inter":
        return sets["rf"] & sets["cl"] & sets["sp"]
    if purpose == "union":
        return sets["rf"] | sets["cl"] | sets["sp"]
    raise ValueError(f"unknown candidate purpose {purpose!r}")


def lattice_descend(
    kb: KnowledgeBase, a: Term, L: int | None = None
) -> Iterator[tuple[str, list[Term]]]:
    """Candidates by descending specificity, lazily, without repeats.

    Stages: the triple intersection rf&cl&sp, the three pairwise
    intersections, then the union. Each stage yields only entities not
    seen in an earlier stage, with the source excluded; empty stages are
    skipped. With ``L`` set, emission stops at the first stage boundary
    where at least L candidates have been produced. Early stages are the
    most specific and tend to hold the best matches, but carry no
    guarantee of containing the global top L.
    """
    x_rf = candidate_set(kb, a, "rf")
    x_cl = candidate_set(kb, a, "cl")
    x_sp = candidate_set(kb, a, "sp")
    stages = [
        ("rf&cl&sp", x_rf & x_cl & x_sp),
        ("rf&cl", x_rf & x_cl),
        ("rf&sp", x_rf & x_sp),
        ("cl&sp", x_cl & x_sp),
        ("union", x_rf | x_cl | x_sp),
    ]
    seen: set[Term] = {a}
    produced = 0
    for label, members in stages:
        fresh = sorted(members - seen, key=str)
        if not fresh:
            continue
        seen.update(fresh)
        produced += len(fresh)
        yield label, fresh
        if L is not None and produced >= L:
            return
