"""Walk through the autocatalytic example end to end.

Builds the degree-3 system, inspects its subdivision and curve, finds the
singularity, traces the sliding limit cycle, and watches both disappear as
the moving coefficient crosses its two critical values.

Run:  python demos/01_autocatalator_walkthrough.py
"""

from fractions import Fraction as F

from tropd import (QPoint, is_triangulation, regular_subdivision, singularities,
                   stability_report, trace_orbit, tropical_curve)
from tropd.presets import autocatalator

# --- the system at a value inside the oscillatory window --------------------

tds = autocatalator(F(1, 4))
print("pairs:")
for p in tds.pairs:
    print(f"  {p.index}: axis {p.axis}, flow {p.flow}, monomial "
          f"{p.alpha} + {p.degree[0]}u + {p.degree[1]}v")

sub = regular_subdivision(tds, "I")
print("\nsubdivision faces (degree triples):")
for face in sub.faces:
    print("  ", [sub.points[m].degree for m in face])
print("triangulation:", is_triangulation(sub))

curve = tropical_curve(tds, "I")
print("\ncurve vertices:")
for v in curve.vertices:
    print(f"  {v.point}  ties {sorted(v.maximizers)}")
print("empty regions:", [r.pair_index for r in curve.regions if r.empty])

# --- the singularity and the attracting sliding cycle ------------------------

sing = singularities(tds)[0]
print(f"\nsingularity: {sing.kind} at {sing.location} "
      f"(horizontal tie {sing.host_u}, vertical tie {sing.host_v})")

orbit = trace_orbit(tds, QPoint.of(0, 0))
print("orbit from the fold vertex:", orbit.termination[0])
for pt, seg in zip(orbit.vertices, orbit.segments):
    print(f"  {pt} --{seg.mode[0]}--> direction {seg.direction}")

# --- sweep the coefficient across both bifurcations --------------------------

for a in (F(-1, 4), F(0), F(1, 4), F(1, 2), F(3, 4)):
    rep = stability_report(autocatalator(a))
    sings = singularities(autocatalator(a))
    kinds = ", ".join(s.kind for s in sings) or "none"
    print(f"alpha = {a!s:>5}: {rep.overall:20s} singularities: {kinds}")
