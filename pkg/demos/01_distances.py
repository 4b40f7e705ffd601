"""
Bounded neighborhoods with distances
====================================

Load the bundled movie graph and walk outward from the two films,
printing every reached node with its shortest distance.
"""

from pathlib import Path

from lodsim import IRI, expand, load_kb

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# the fixture parses cleanly, so the diagnostics list comes back empty
kb, diagnostics = load_kb(FIXTURES / "movies.nt")
print(f"{len(kb)} triples, diagnostics: {diagnostics}")
print(kb.stats())

dvc = IRI("http://ex/DaVinciCode")
ill = IRI("http://ex/Illuminati")

# radius 3 under the default policy: follow ordinary properties,
# class memberships, and superclasses; the source itself is excluded
hood_dvc = expand(kb, dvc, 3)
hood_ill = expand(kb, ill, 3)

print(f"\n{'node':<28}  {'d(DaVinciCode)':>14}  {'d(Illuminati)':>13}")
names = sorted(
    {str(n) for n in hood_dvc} | {str(n) for n in hood_ill}
)
for name in names:
    term = IRI(name)
    da = hood_dvc.distance(term)
    db = hood_ill.distance(term)
    short = name.rsplit("/", 1)[1]
    print(f"{short:<28}  {da if da else '-':>14}  {db if db else '-':>13}")

# smaller radii keep only the closer shells
for k in (1, 2, 3):
    print(f"k={k}: {len(list(expand(kb, dvc, k)))} nodes around the Da Vinci Code")
