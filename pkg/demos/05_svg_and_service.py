"""Render SVG portraits and exercise the HTTP API in-process.

Run:  python demos/05_svg_and_service.py
Writes autocatalator.svg and crossing_cycle.svg into the working directory.
"""

from fractions import Fraction as F

from fastapi.testclient import TestClient

from tropd import QPoint, export_scene, export_svg, tds_to_json
from tropd.presets import autocatalator, crossing_cycle_family
from tropd.service import create_app

for name, tds, seeds in (
    ("autocatalator", autocatalator(F(1, 4)), [QPoint.of(0, 0), QPoint.of(3, 3)]),
    ("crossing_cycle", crossing_cycle_family(-25), [QPoint.of(2, 0)]),
):
    scene = export_scene(tds, orbit_seeds=seeds, with_graph=True, with_report=True)
    path = f"{name}.svg"
    with open(path, "wb") as fh:
        fh.write(export_svg(scene))
    print("wrote", path)

client = TestClient(create_app())
sid = client.post("/api/tds", json={"preset": "crossing1"}).json()["id"]
orbit = client.post(f"/api/tds/{sid}/orbit",
                    json={"start": ["2", "0"], "direction": "Forward"}).json()
print("service orbit from (2,0):", orbit["termination"],
      [v["exact"] for v in orbit["vertices"]])
report = client.get(f"/api/tds/{sid}/report").json()
print("service verdict:", report["overall"])
