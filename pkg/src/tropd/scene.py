"""Scene assembly, SVG rendering, and parameter sweeps.

Scenes carry exact rational strings next to float shadows; the shadows exist
for rendering only and never feed back into analysis.
"""

from __future__ import annotations

import json
import xml.sax.saxutils as sx
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import portrait, portrait_signature, stability_report
from .core import TropicalSystem, I, U, V, tds_to_json
from .dynamics import NULLCLINE_TRANSVERSAL, SLIDING_KINDS
from .exact import QPoint, frac, frac_str
from .graph import enumerate_cycles
from .orbits import FORWARD, Limits, Orbit, trace_orbit, trace_orbit_branches

FLOW_COLORS = {
    (0, 1): "#d62728",    # upward: red
    (0, -1): "#8c564b",   # downward: brown
    (1, 0): "#1f77b4",    # rightward: blue
    (-1, 0): "#7fc8f8",   # leftward: light blue
}
DEFAULT_CLIP = (Fraction(-8), Fraction(8), Fraction(-8), Fraction(8))


def _rat(x: Fraction) -> str:
    return frac_str(x)


def _pt_json(p: QPoint) -> dict:
    return {"exact": [_rat(p.u), _rat(p.v)], "xy": [float(p.u), float(p.v)]}


def _clip_point_on_ray(origin: QPoint, direction, clip) -> QPoint:
    lo_u, hi_u, lo_v, hi_v = clip
    ts = []
    if direction[0] != 0:
        ts.append(((hi_u if direction[0] > 0 else lo_u) - origin.u) / frac(direction[0]))
    if direction[1] != 0:
        ts.append(((hi_v if direction[1] > 0 else lo_v) - origin.v) / frac(direction[1]))
    pos = [t for t in ts if t > 0]
    t = min(pos) if pos else frac(0)
    return origin.moved(t, direction)


@dataclass
class Scene:
    tds: TropicalSystem
    layers: dict = field(default_factory=dict)
    orbits: list = field(default_factory=list)
    report: dict | None = None
    graph: dict | None = None
    clip: tuple = DEFAULT_CLIP

    def to_json(self) -> dict:
        out = {
            "alpha": {str(p.index): (None if not p.alpha.finite else _rat(p.alpha.value))
                      for p in self.tds.pairs},
            "tds": tds_to_json(self.tds),
            "clip": [float(c) for c in self.clip],
            "layers": self.layers,
            "orbits": self.orbits,
        }
        if self.report is not None:
            out["report"] = self.report
        if self.graph is not None:
            out["graph"] = self.graph
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def export_scene(
    tds: TropicalSystem,
    orbit_seeds=(),
    layers=("TU", "TV", "TI", "regions", "singularities", "vertices", "cycles"),
    with_graph: bool = False,
    with_report: bool = False,
    branch_all: bool = False,
    clip=DEFAULT_CLIP,
    max_segments: int = 10_000,
) -> Scene:
    """Assemble the drawable description of the portrait; deterministic order."""
    port = portrait(tds)
    scene = Scene(tds, clip=clip)
    for tag, f in (("TU", U), ("TV", V), ("TI", I)):
        if tag not in layers:
            continue
        curve = port.curves[f]
        edges_out = []
        for e in sorted(curve.edges, key=lambda e: e.key):
            cls = port.edge_classes.get(e.key) if f == I else None
            from .dynamics import classify_edge
            cls = cls or classify_edge(tds, e)
            if e.geom_kind == "segment":
                p1, p2 = e.p1, e.p2
            elif e.geom_kind == "ray":
                p1, p2 = e.p1, _clip_point_on_ray(e.p1, e.direction, clip)
            else:
                fwd = _clip_point_on_ray(e.p1, e.direction, clip)
                bwd = _clip_point_on_ray(e.p1, (-e.direction[0], -e.direction[1]), clip)
                p1, p2 = bwd, fwd
            entry = {
                "pair": list(e.key),
                "kind": cls.kind,
                "stability": cls.stability,
                "geom": e.geom_kind,
                "p1": _pt_json(p1),
                "p2": _pt_json(p2),
                "style": "solid" if cls.kind in SLIDING_KINDS else "dashed",
                "unbounded": e.geom_kind != "segment",
            }
            if cls.kind == NULLCLINE_TRANSVERSAL and f == I:
                entry["glyph"] = "nc-triangle"
            edges_out.append(entry)
        verts_out = [
            {"point": _pt_json(v.point), "maximizers": sorted(v.maximizers)}
            for v in sorted(curve.vertices, key=lambda v: (v.point.u, v.point.v))
        ]
        scene.layers[tag] = {"edges": edges_out, "vertices": verts_out}
    if "regions" in layers:
        scene.layers["regions"] = [
            {
                "pair": r.pair_index,
                "flow": list(tds[r.pair_index].flow),
                "color": FLOW_COLORS[tds[r.pair_index].flow],
                "witness": None if r.witness is None else _pt_json(r.witness),
                "empty": r.empty,
            }
            for r in port.curves[I].regions
        ]
    if "singularities" in layers:
        scene.layers["singularities"] = [
            {
                "point": _pt_json(s.location),
                "kind": s.kind,
                "hosts": {"U": list(s.host_u), "V": list(s.host_v)},
                "glyph": "white-disc",
            }
            for s in port.sings
        ]
    if "subdivision" in layers:
        scene.layers["subdivision"] = {
            tag: _subdivision_json(tds, port.curves[f].subdivision)
            for tag, f in (("SU", U), ("SV", V), ("SI", I))
        }
    if "cycles" in layers:
        cyc_out = []
        for rec in port.cycles:
            o = trace_orbit(tds, rec.witness, FORWARD,
                            limits=Limits(max_segments=max_segments))
            cyc_out.append({"kind": "crossing", "multiplier": _rat(rec.multiplier),
                            "verdict": rec.verdict, "orbit": orbit_to_json(o)})
        seen_routes = set()
        for _mem, o in port.vertex_orbits:
            if not o.periodic:
                continue
            repeat = o.termination[1] if len(o.termination) > 1 else 0
            loop_pts = o.vertices[repeat:]
            key = tuple(sorted(str(x) for x in set(loop_pts)))
            if key in seen_routes:
                continue
            seen_routes.add(key)
            cyc_out.append({"kind": "sliding", "multiplier": None, "verdict": "sliding",
                            "orbit": orbit_to_json(o)})
        scene.layers["cycles"] = cyc_out
    for seed in orbit_seeds:
        start = seed if isinstance(seed, QPoint) else QPoint.of(seed[0], seed[1])
        if branch_all:
            orbs = trace_orbit_branches(tds, start, limits=Limits(max_segments=max_segments))
        else:
            orbs = [trace_orbit(tds, start, limits=Limits(max_segments=max_segments))]
        for o in orbs:
            scene.orbits.append(orbit_to_json(o))
    if with_graph:
        cycles, truncated = enumerate_cycles(port.graph)
        scene.graph = {
            "nodes": [{"degree": list(n.degree), "flow": list(n.flow), "pair": n.pair_index}
                      for n in port.graph.nodes],
            "arcs": [[list(a), list(b)] for a, b in port.graph.arcs],
            "cycles": [[list(d) for d in cyc] for cyc in cycles],
            "truncated": truncated,
        }
    if with_report:
        rep = stability_report(tds)
        scene.report = report_to_json(rep)
    return scene


def _subdivision_json(tds, sub):
    return {
        "points": [
            {"degree": list(p.degree), "height": None if p.height is None else _rat(p.height),
             "pairs": list(p.pair_indices), "on_envelope": p.on_envelope}
            for p in sub.points
        ],
        "faces": [[list(sub.points[m].degree) for m in face] for face in sub.faces],
    }


def _mode_json(mode) -> list:
    tag, detail = mode[0], mode[1]
    return [tag, list(detail)] if isinstance(detail, tuple) else [tag, detail]


def orbit_to_json(o: Orbit) -> dict:
    return {
        "start": _pt_json(o.start),
        "orientation": o.orientation,
        "vertices": [_pt_json(v) for v in o.vertices],
        "modes": [_mode_json(s.mode) for s in o.segments],
        "directions": [[_rat(frac(s.direction[0])), _rat(frac(s.direction[1]))] for s in o.segments],
        "termination": [str(x) for x in o.termination],
    }


def report_to_json(rep) -> dict:
    return {
        "general_position": {
            "gp1": rep.general_position.gp1,
            "gp2": rep.general_position.gp2,
            "gp3": rep.general_position.gp3,
        },
        "singularities": [[str(loc), kind] for loc, kind in rep.singularity_kinds],
        "cycles": [[list(regions), _rat(c), verdict] for regions, c, verdict in rep.crossing_cycles],
        "connections": [[p, q, persistent] for p, q, persistent in rep.separatrix_connections],
        "overall": rep.overall,
        "witness": rep.witness,
    }


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def export_svg(scene: Scene, size: int = 640) -> bytes:
    """Deterministic standalone SVG: solid sliding edges, dashed crossing ones,
    flow-colored regions, white-disc singularities, arrowed orbits."""
    lo_u, hi_u, lo_v, hi_v = (float(c) for c in scene.clip)
    pad = 0.05 * (hi_u - lo_u)
    span_u = (hi_u - lo_u) + 2 * pad
    span_v = (hi_v - lo_v) + 2 * pad

    def sx_(x: float) -> float:
        return (x - lo_u + pad) / span_u * size

    def sy_(y: float) -> float:
        return size - (y - lo_v + pad) / span_v * size

    def fmt(x: float) -> str:
        return f"{x:.3f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for tag in ("TU", "TV", "TI"):
        layer = scene.layers.get(tag)
        if not layer:
            continue
        faint = tag != "TI"
        for e in layer["edges"]:
            x1, y1 = e["p1"]["xy"]
            x2, y2 = e["p2"]["xy"]
            color = "#bbbbbb" if faint else "#222222"
            dash = ' stroke-dasharray="6,4"' if e["style"] == "dashed" else ""
            width = 1.0 if faint else 1.8
            parts.append(
                f'<line x1="{fmt(sx_(x1))}" y1="{fmt(sy_(y1))}" x2="{fmt(sx_(x2))}" '
                f'y2="{fmt(sy_(y2))}" stroke="{color}" stroke-width="{width}"{dash}/>'
            )
            if not faint and e.get("glyph") == "nc-triangle":
                mx, my = sx_((x1 + x2) / 2), sy_((y1 + y2) / 2)
                parts.append(
                    f'<path d="M {fmt(mx)} {fmt(my - 4)} L {fmt(mx - 4)} {fmt(my + 3)} '
                    f'L {fmt(mx + 4)} {fmt(my + 3)} Z" fill="#d62728"/>'
                )
            if not faint and e.get("unbounded"):
                parts.append(
                    f'<circle cx="{fmt(sx_(x2))}" cy="{fmt(sy_(y2))}" r="2.4" fill="#222222"/>'
                )
    for r in scene.layers.get("regions", []):
        if r["witness"] is None:
            continue
        x, y = r["witness"]["xy"]
        if not (lo_u <= x <= hi_u and lo_v <= y <= hi_v):
            continue
        parts.append(
            f'<text x="{fmt(sx_(x))}" y="{fmt(sy_(y))}" font-size="12" fill="{r["color"]}" '
            f'text-anchor="middle">{r["pair"]}</text>'
        )
    for o in scene.orbits:
        fast_dash = ""
        pts = " ".join(f"{fmt(sx_(v['xy'][0]))},{fmt(sy_(v['xy'][1]))}" for v in o["vertices"])
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="#d62728" stroke-width="1.6"{fast_dash}/>'
        )
        for idx, mode in enumerate(o["modes"]):
            v1 = o["vertices"][idx]["xy"]
            v2 = o["vertices"][idx + 1]["xy"]
            mx, my = sx_((v1[0] + v2[0]) / 2), sy_((v1[1] + v2[1]) / 2)
            dx, dy = sx_(v2[0]) - sx_(v1[0]), sy_(v2[1]) - sy_(v1[1])
            n = (dx * dx + dy * dy) ** 0.5
            if n < 8:
                continue
            dx, dy = dx / n, dy / n
            heads = 2 if mode[0] == "region" else 1   # double arrows on fast legs
            for h in range(heads):
                ox, oy = mx + dx * 5 * h, my + dy * 5 * h
                parts.append(
                    f'<path d="M {fmt(ox)} {fmt(oy)} L {fmt(ox - 6 * dx + 3 * dy)} '
                    f'{fmt(oy - 6 * dy - 3 * dx)} L {fmt(ox - 6 * dx - 3 * dy)} '
                    f'{fmt(oy - 6 * dy + 3 * dx)} Z" fill="#d62728"/>'
                )
    for s in scene.layers.get("singularities", []):
        x, y = s["point"]["xy"]
        parts.append(
            f'<circle cx="{fmt(sx_(x))}" cy="{fmt(sy_(y))}" r="5" fill="white" '
            f'stroke="black" stroke-width="1.5"/>'
        )
    for v in scene.layers.get("TI", {}).get("vertices", []):
        x, y = v["point"]["xy"]
        parts.append(f'<circle cx="{fmt(sx_(x))}" cy="{fmt(sy_(y))}" r="2.6" fill="#222222"/>')
    parts.append("</svg>")
    return "\n".join(parts).encode()


# ---------------------------------------------------------------------------
# Parameter sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepChamber:
    lo: Fraction
    hi: Fraction
    verdict: str
    signature_hash: int


@dataclass
class SweepResult:
    chambers: list
    boundaries: list          # (lo, hi) rational brackets, width <= tol
    boundary_points: list     # samples that sit exactly on a boundary
    exact_values: list        # exact roots recovered where traceable
    samples: list             # (alpha, verdict)


def sweep(
    tds_template: TropicalSystem,
    param: int,
    lo,
    hi,
    step,
    tol=Fraction(1, 10**6),
    refine_exact: bool = True,
) -> SweepResult:
    """Sample signatures along one coefficient, merge equal-signature chambers,
    and bisect every change down to `tol`; brackets then get exact-root
    refinement through the affine connection gaps where routes allow it."""
    lo, hi, step, tol = frac(lo), frac(hi), frac(step), frac(tol)
    if step <= 0:
        raise ValueError("step must be positive")

    def system_at(a: Fraction) -> TropicalSystem:
        return tds_template.with_alpha({param: a})

    def sig_at(a: Fraction):
        return portrait_signature(system_at(a))

    samples = []
    a = lo
    while a <= hi:
        samples.append(a)
        if a == hi:
            break
        a = min(a + step, hi)

    sigs = {a: sig_at(a) for a in samples}
    verdicts = {}

    def verdict_at(a):
        if a not in verdicts:
            verdicts[a] = stability_report(system_at(a)).overall
        return verdicts[a]

    raw = []
    chambers = []
    cur_lo = samples[0]
    for a_prev, a_next in zip(samples, samples[1:]):
        if sigs[a_prev] == sigs[a_next]:
            continue
        left, right = a_prev, a_next
        sig_left = sigs[a_prev]
        # half tolerance so two brackets meeting at an exact sample still
        # enclose the boundary within tol after merging
        while right - left > tol / 2:
            mid = (left + right) / 2
            if sig_at(mid) == sig_left:
                left = mid
            else:
                right = mid
        raw.append((left, right, a_prev, a_next))
        chambers.append(SweepChamber(cur_lo, a_prev, verdict_at(a_prev), hash(sigs[a_prev])))
        cur_lo = a_next
    chambers.append(SweepChamber(cur_lo, samples[-1], verdict_at(samples[-1]), hash(sigs[samples[-1]])))

    # a sample sitting exactly on a signature change yields two adjacent
    # brackets; keep it only when the flanking chambers genuinely differ,
    # else it is a degenerate point inside one chamber
    boundaries = []
    boundary_points = []
    i = 0
    while i < len(raw):
        if i + 1 < len(raw) and raw[i][1] == raw[i + 1][0]:
            point = raw[i][1]
            boundary_points.append(point)
            if sigs[raw[i][2]] != sigs[raw[i + 1][3]]:
                boundaries.append((raw[i][0], raw[i + 1][1]))
            i += 2
        else:
            left, right = raw[i][0], raw[i][1]
            if right == samples[-1] or left == samples[0]:
                # the change point converged onto a range endpoint
                boundary_points.append(right if right == samples[-1] else left)
            else:
                boundaries.append((left, right))
            i += 1
    out_bounds = boundaries

    exact_values = []
    if refine_exact:
        for blo, bhi in out_bounds:
            root = _exact_root_in(tds_template, param, blo, bhi)
            exact_values.append(root)
    sample_rows = [(a, verdict_at(a)) for a in samples]
    return SweepResult(chambers, out_bounds, boundary_points, exact_values, sample_rows)


def _exact_root_in(template: TropicalSystem, param: int, blo: Fraction, bhi: Fraction):
    """Recover the exact bifurcation value inside a bracket from affine
    connection gaps traced just outside it."""
    from .analysis import connection_gap_candidates

    width = bhi - blo
    probes = [blo - width, bhi + width, blo - 4 * width, bhi + 4 * width]
    for probe in probes:
        tds = template.with_alpha({param: probe})
        try:
            gaps = connection_gap_candidates(tds)
        except Exception:
            continue
        for g in gaps:
            coef = g.coeff(param)
            if coef == 0:
                continue
            rest = g.const + sum(
                c * tds[k].alpha.value for k, c in g.lin.items() if k != param and tds[k].alpha.finite
            )
            root = -rest / coef
            if blo <= root <= bhi:
                return root
    return None
