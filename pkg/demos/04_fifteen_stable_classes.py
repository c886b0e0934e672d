"""The fifteen structurally stable classes of the six-coefficient family.

Every preset below is structurally stable; their portrait signatures are
pairwise distinct, and exactly one of them carries a limit cycle.  Two extra
parameter vectors realize sub-cases the signatures must NOT separate.

Run:  python demos/04_fifteen_stable_classes.py
"""

from tropd import portrait, portrait_signature
from tropd.presets import (GENAUTO_CASES, GENAUTO_EQUIVALENT_PAIRS,
                           generalized_autocatalator, genauto)

sigs = {}
print(f"{'case':6s} {'singularities':42s} cycle?")
for case in GENAUTO_CASES:
    tds = genauto(case)
    sigs[case] = portrait_signature(tds)
    port = portrait(tds)
    kinds = ", ".join(s.kind for s in port.sings)
    has_cycle = bool(port.cycles) or any(o.periodic for _, o in port.vertex_orbits)
    print(f"{case:6s} {kinds:42s} {'yes' if has_cycle else 'no'}")

names = list(GENAUTO_CASES)
collisions = [(a, b) for i, a in enumerate(names) for b in names[i + 1:]
              if sigs[a] == sigs[b]]
print("\nsignature collisions:", collisions or "none (15 distinct classes)")

for case, vec in GENAUTO_EQUIVALENT_PAIRS.items():
    other = portrait_signature(generalized_autocatalator(vec))
    print(f"alternate realization of {case}: signatures equal = {other == sigs[case]}")
