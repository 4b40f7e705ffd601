"""Distance-weighted set similarity between entity neighborhoods.

Two entities are compared through their radius-k neighborhoods. Uniform
weighting is the plain Jaccard ratio of the two node sets. Distance
weighting scores every union node by ((k'-dA) + (k'-dB)) / 2 with
k' = k + 1, where an absent node counts as distance k' and so contributes
nothing from that side; the similarity is the scored intersection over the
scored union. Weights are accumulated in integer half-units, keeping the
results exact and symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from lodsim.kb import KnowledgeBase, Term
from lodsim.neighborhood import (
    DEFAULT_POLICY,
    ExpansionPolicy,
    Neighborhood,
    NeighborhoodNode,
    NodeKey,
    expand,
)

WEIGHTINGS = ("uniform", "weighted")


def node_weight(distance: int | None, k: int) -> float:
    """One-sided weight (k+1) - d of a node; 0 when absent (d = k+1)."""
    d = k + 1 if distance is None else distance
    return float(k + 1 - d)


@dataclass(frozen=True)
class SimilarityScore:
    """A similarity value with its ratio decomposition."""

    value: float
    numerator: float
    denominator: float
    intersection_size: int
    union_size: int
    k: int
    weighting: str


def similarity_from_distances(
    dist_a: Mapping[NodeKey, int],
    dist_b: Mapping[NodeKey, int],
    k: int,
    weighting: str = "weighted",
) -> SimilarityScore:
    """Score two distance maps over a common node-key space.

    Keys may be any hashable node identity; only membership and the stored
    distances matter. An empty union scores 0.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {weighting!r}")
    inter = 0
    union = 0
    if weighting == "uniform":
        for key in dist_a:
            union += 1
            if key in dist_b:
                inter += 1
        for key in dist_b:
            if key not in dist_a:
                union += 1
        value = inter / union if union else 0.0
        return SimilarityScore(value, float(inter), float(union), inter, union, k, weighting)

    k1 = k + 1
    num2 = 0  # numerator in half-units
    den2 = 0
    for key, da in dist_a.items():
        union += 1
        wa2 = k1 - da
        db = dist_b.get(key)
        if db is None:
            den2 += wa2
        else:
            inter += 1
            pair2 = wa2 + (k1 - db)
            num2 += pair2
            den2 += pair2
    for key, db in dist_b.items():
        if key not in dist_a:
            union += 1
            den2 += k1 - db
    value = num2 / den2 if den2 else 0.0
    return SimilarityScore(value, num2 / 2, den2 / 2, inter, union, k, weighting)


def similarity(
    kb: KnowledgeBase,
    a: Term,
    b: Term,
    k: int,
    weighting: str = "weighted",
    policy: ExpansionPolicy = DEFAULT_POLICY,
) -> SimilarityScore:
    """Radius-k similarity of two entities; sim(u, u) = 1 by convention."""
    if a == b:
        n = expand(kb, a, k, policy)
        score = similarity_from_distances(n.dist, n.dist, k, weighting)
        if score.denominator == 0:
            return SimilarityScore(1.0, 0.0, 0.0, 0, 0, k, weighting)
        return score
    n_a = expand(kb, a, k, policy)
    n_b = expand(kb, b, k, policy)
    return similarity_from_distances(n_a.dist, n_b.dist, k, weighting)


@dataclass(frozen=True)
class SharedNode:
    """An intersection node with both distances and its pair weight."""

    node: NeighborhoodNode
    dist_a: int
    dist_b: int
    weight: float


def shared_nodes(
    n_a: Neighborhood, n_b: Neighborhood, limit: int | None = None
) -> list[SharedNode]:
    """Intersection nodes, closest pairs first, tie-broken by node text."""
    if n_a.k != n_b.k:
        raise ValueError("neighborhoods were expanded with different k")
    k1 = n_a.k + 1
    rows = []
    for key, da in n_a.dist.items():
        db = n_b.dist.get(key)
        if db is not None:
            node = n_a.node_of(key)
            rows.append(SharedNode(node, da, db, ((k1 - da) + (k1 - db)) / 2))
    rows.sort(key=lambda r: (r.dist_a + r.dist_b, str(r.node)))
    return rows if limit is None else rows[:limit]
