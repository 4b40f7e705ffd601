"""Neighborhood expansion against the level-by-level oracle."""

from __future__ import annotations

import random

import pytest

from lodsim.kb import IRI, build_kb
from lodsim.neighborhood import (
    DEFAULT_POLICY,
    Direction,
    ExpansionPolicy,
    Plain,
    PrefixMode,
    Prefixed,
    expand,
    neighbors_in,
)

from conftest import ex
from oracles import oracle_neighborhood, random_kb

POLICIES = [
    (("rf", "cl", "sp"), "plain"),
    (("rf", "rt", "cl", "inst", "sub", "sp"), "plain"),
    (("rt", "inst"), "plain"),
    (("rf", "cl", "sp"), "prefixed"),
    (("rf", "cl", "sp"), "combined"),
    (("rf",), "combined"),
]

_DIR_BY_CODE = {d.code: d for d in Direction}


def _policy(codes: tuple[str, ...], mode: str) -> ExpansionPolicy:
    return ExpansionPolicy(
        frozenset(_DIR_BY_CODE[c] for c in codes), PrefixMode(mode)
    )


def _as_oracle_keys(kb, hood) -> dict[tuple, int]:
    out = {}
    for key, d in hood.dist.items():
        if isinstance(key, int):
            out[("plain", kb.term(key))] = d
        else:
            out[("prefixed", kb.term(key[0]), kb.term(key[1]))] = d
    return out


def test_direction_parse_accepts_codes_and_labels():
    assert Direction.parse("rf") is Direction.RES_FROM
    assert Direction.parse("ResFrom") is Direction.RES_FROM
    assert Direction.parse("superclasses") is Direction.SUPER_CLASSES
    assert Direction.parse("sp") is Direction.SUPER_CLASSES
    with pytest.raises(ValueError, match="unknown direction"):
        Direction.parse("sideways")


def test_policy_parse():
    policy = ExpansionPolicy.parse("rf,cl,sp", "combined")
    assert policy.directions == DEFAULT_POLICY.directions
    assert policy.prefix_mode is PrefixMode.COMBINED
    assert ExpansionPolicy.parse(None, None) == DEFAULT_POLICY
    with pytest.raises(ValueError, match="at least one direction"):
        ExpansionPolicy.parse(",", None)
    with pytest.raises(ValueError, match="prefix mode"):
        ExpansionPolicy.parse("rf", "weird")


def test_default_policy_directions():
    assert DEFAULT_POLICY.directions == {
        Direction.RES_FROM, Direction.CLASSES, Direction.SUPER_CLASSES
    }
    assert DEFAULT_POLICY.prefix_mode is PrefixMode.PLAIN
    assert DEFAULT_POLICY.direction_labels() == ["ResFrom", "Classes", "SuperClasses"]


def test_neighbors_in_matches_kb_accessors(movies_kb):
    node = ex("DaVinciCode")
    assert neighbors_in(movies_kb, node, Direction.RES_FROM) == movies_kb.res_from(node)
    assert neighbors_in(movies_kb, node, Direction.CLASSES) == movies_kb.classes(node)


def test_source_is_excluded(movies_kb):
    hood = expand(movies_kb, ex("DaVinciCode"), 3)
    assert hood.distance(ex("DaVinciCode")) is None
    assert all(
        node != Plain(ex("DaVinciCode")) for node in hood
    )


def test_distance_lookup_forms(movies_kb):
    hood = expand(movies_kb, ex("DaVinciCode"), 3)
    assert hood.distance(ex("TomHanks")) == 1
    assert hood.distance(Plain(ex("Novel"))) == 3
    assert hood.distance(ex("Scotland")) is None
    assert hood.distance(IRI("http://nowhere/x")) is None


def test_k_zero_and_unknown_source(movies_kb):
    assert len(expand(movies_kb, ex("DaVinciCode"), 0)) == 0
    assert len(expand(movies_kb, IRI("http://nowhere/x"), 3)) == 0
    with pytest.raises(ValueError):
        expand(movies_kb, ex("DaVinciCode"), -1)


def test_shortest_distance_wins(movies_kb):
    # Italy is both a step-1 value of Illuminati and reachable later.
    hood = expand(movies_kb, ex("Illuminati"), 3)
    assert hood.distance(ex("Italy")) == 1


def test_prefixed_mode_yields_terminal_pairs(movies_kb):
    policy = ExpansionPolicy(DEFAULT_POLICY.directions, PrefixMode.PREFIXED)
    hood = expand(movies_kb, ex("DaVinciCode"), 2, policy)
    assert hood.distance(Prefixed(ex("actor"), ex("TomHanks"))) == 1
    # plain property values are not expanded in prefixed mode
    assert hood.distance(ex("TomHanks")) is None
    # typing still walks plain
    assert hood.distance(ex("Film")) == 1


def test_combined_mode_yields_both(movies_kb):
    policy = ExpansionPolicy(DEFAULT_POLICY.directions, PrefixMode.COMBINED)
    hood = expand(movies_kb, ex("DaVinciCode"), 1, policy)
    assert hood.distance(Prefixed(ex("actor"), ex("TomHanks"))) == 1
    assert hood.distance(ex("TomHanks")) == 1


def test_sorted_items_ordering(movies_kb):
    hood = expand(movies_kb, ex("DaVinciCode"), 3)
    items = hood.sorted_items()
    assert [d for _, d in items] == sorted(d for _, d in items)
    level1 = [str(n) for n, d in items if d == 1]
    assert level1 == sorted(level1)


def test_by_distance_partition(movies_kb):
    hood = expand(movies_kb, ex("DaVinciCode"), 3)
    grouped = hood.by_distance()
    assert {d: len(nodes) for d, nodes in grouped.items()} == {1: 7, 2: 9, 3: 1}


def test_expand_matches_oracle_on_fixture(movies_kb, movies_triples):
    for source in ("DaVinciCode", "Illuminati", "TomHanks", "Film", "MysteryNovel"):
        for k in (1, 2, 3):
            for codes, mode in POLICIES:
                hood = expand(movies_kb, ex(source), k, _policy(codes, mode))
                expected = oracle_neighborhood(movies_triples, ex(source), k, codes, mode)
                assert _as_oracle_keys(movies_kb, hood) == expected, (source, k, codes, mode)


def test_expand_matches_oracle_on_random_kbs():
    rng = random.Random(20240817)
    for i in range(40):
        triples = random_kb(rng)
        kb = build_kb(triples)
        entities = [t for t in kb.entity_terms()]
        source = rng.choice(entities)
        k = rng.choice((1, 2, 3))
        codes, mode = POLICIES[i % len(POLICIES)]
        hood = expand(kb, source, k, _policy(codes, mode))
        expected = oracle_neighborhood(triples, source, k, codes, mode)
        assert _as_oracle_keys(kb, hood) == expected


def test_expand_deterministic(movies_kb):
    a = expand(movies_kb, ex("DaVinciCode"), 3)
    b = expand(movies_kb, ex("DaVinciCode"), 3)
    assert a.dist == b.dist
    assert a.sorted_items() == b.sorted_items()
