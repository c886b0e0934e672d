"""Separatrices, splitting constants, and a robust homoclinic connection.

The second family keeps a homoclinic loop through its corner vertex for every
parameter value: the return map is the identity and the splitting constant
vanishes identically, so the band of cycles survives perturbation.

Run:  python demos/03_separatrices_and_connections.py
"""

from fractions import Fraction as F

from tropd import (Feature, Section, portrait, separatrices, singularities,
                   splitting_constant, stability_report)
from tropd.presets import persistent_connection_family

tds = persistent_connection_family(-4)

print("singularities:")
for s in singularities(tds):
    print(f"  {s.kind} at {s.location}")

port = portrait(tds)
p245 = next(Feature("vertex", v.point, tuple(sorted(v.maximizers)))
            for v in port.curves["I"].vertices if set(v.maximizers) == {2, 4, 5})
print(f"\ncorner vertex at {p245.point}")

for o in separatrices(tds, p245):
    print(f"  {o.orientation:8s} separatrix, {len(o.segments)} segments,"
          f" ends: {o.termination[0]}")

delta, form = splitting_constant(tds, p245, p245, Section.of("v", F(1, 2)))
print(f"\nhomoclinic gap at the current coefficients: {delta}")
print("gap coefficients:", dict(form.lin) or "all zero")

rep = stability_report(tds)
print("\nverdict:", rep.overall)
print("connections:", rep.separatrix_connections)
