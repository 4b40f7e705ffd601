"""
Finding candidates without scoring everyone
===========================================

Reversed traversal reports exactly the entities whose similarity to the
source is nonzero, so ranking only ever scores those. The depth-1
candidate sets and their intersection lattice give a cheaper staged
alternative.
"""

from pathlib import Path

from lodsim import (
    IRI,
    candidate_set,
    candidate_similar,
    lattice_descend,
    load_kb,
    similarity,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
kb, _ = load_kb(FIXTURES / "movies.nt")
dvc = IRI("http://ex/DaVinciCode")

# complete mode walks back out with the full radius from every
# neighborhood node; the result provably equals {x : sim_k > 0}
for k in (1, 2, 3):
    members = candidate_similar(kb, dvc, k, mode="complete")
    print(f"k={k}: {len(members)} candidates")
    for x in sorted(members, key=str):
        print(f"   {x}  sim={similarity(kb, dvc, x, k).value:.3f}")

# paper mode spends only the remaining budget at each node: a subset,
# and the same set at radius 1
staged = candidate_similar(kb, dvc, 2, mode="paper")
complete = candidate_similar(kb, dvc, 2, mode="complete")
print("staged <= complete:", staged <= complete)

# the three depth-1 candidate sets; the source itself is a member
for kind in ("rf", "cl", "sp"):
    print(kind, sorted(str(x) for x in candidate_set(kb, dvc, kind)))

# staged descent: strongest intersections first, duplicates dropped
for label, members in lattice_descend(kb, dvc):
    print(f"stage {label}: {[str(m) for m in members]}")
