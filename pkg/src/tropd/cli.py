"""Command line interface: analyze, portrait, sweep, graph, tropicalize, serve."""

from __future__ import annotations

import json

import click

from .analysis import stability_report
from .core import tds_from_json, tropicalize
from .exact import QPoint, frac, frac_str
from .graph import build_graph, enumerate_cycles
from .presets import preset, preset_names
from .scene import export_scene, export_svg, report_to_json, sweep


def _load_system(spec_path, preset_name, overrides):
    if preset_name:
        tds = preset(preset_name)
    elif spec_path:
        with open(spec_path) as fh:
            tds = tds_from_json(json.load(fh))
    else:
        raise click.UsageError("provide a spec file or --preset")
    if overrides:
        updates = {}
        for ov in overrides:
            key, _, val = ov.partition("=")
            updates[int(key)] = None if val in ("null", "-inf") else frac(val)
        tds = tds.with_alpha(updates)
    return tds


@click.group()
def main():
    """Exact phase-portrait analysis for planar max-affine switching systems."""


spec_argument = click.argument("spec", required=False, type=click.Path(exists=True))
preset_option = click.option("--preset", "preset_name", type=click.Choice(preset_names()),
                             help="use a built-in system instead of a spec file")
set_option = click.option("--set", "overrides", multiple=True, metavar="K=P/Q",
                          help="override a coefficient, e.g. --set 5=-25 or --set 1=-5/4")


@main.command()
@spec_argument
@preset_option
@set_option
def analyze(spec, preset_name, overrides):
    """Print the structural-stability report as JSON."""
    tds = _load_system(spec, preset_name, overrides)
    rep = stability_report(tds)
    click.echo(json.dumps(report_to_json(rep), indent=2, sort_keys=True))


@main.command()
@spec_argument
@preset_option
@set_option
@click.option("-o", "--output", type=click.Path(), default="portrait.svg", show_default=True)
@click.option("--orbit", "orbits", multiple=True, metavar="U,V", help="seed an orbit, e.g. --orbit 2,0")
@click.option("--branch-all", is_flag=True, help="enumerate continuation branches at vertices")
@click.option("--size", default=640, show_default=True)
def portrait(spec, preset_name, overrides, output, orbits, branch_all, size):
    """Render the phase portrait to SVG."""
    tds = _load_system(spec, preset_name, overrides)
    seeds = []
    for spec_pt in orbits:
        u, _, v = spec_pt.partition(",")
        seeds.append(QPoint.of(frac(u), frac(v)))
    scene = export_scene(tds, orbit_seeds=seeds, with_report=True, branch_all=branch_all)
    data = export_svg(scene, size=size)
    with open(output, "wb") as fh:
        fh.write(data)
    click.echo(f"wrote {output} ({len(data)} bytes)")


@main.command(name="sweep")
@spec_argument
@preset_option
@set_option
@click.option("--param", required=True, type=int, help="pair index whose coefficient sweeps")
@click.option("--range", "range_", required=True, metavar="LO:HI:STEP")
def sweep_cmd(spec, preset_name, overrides, param, range_):
    """Sample a coefficient range, merge chambers, bracket bifurcations."""
    tds = _load_system(spec, preset_name, overrides)
    lo, hi, step = (frac(x) for x in range_.split(":"))
    res = sweep(tds, param, lo, hi, step)
    out = {
        "chambers": [[frac_str(c.lo), frac_str(c.hi), c.verdict] for c in res.chambers],
        "boundaries": [[frac_str(l), frac_str(r)] for l, r in res.boundaries],
        "boundary_points": [frac_str(x) for x in res.boundary_points],
        "exact_values": [None if x is None else frac_str(x) for x in res.exact_values],
    }
    click.echo(json.dumps(out, indent=2))


@main.command(name="graph")
@spec_argument
@preset_option
@set_option
@click.option("--cycles", "show_cycles", is_flag=True, help="also enumerate simple cycles")
def graph_cmd(spec, preset_name, overrides, show_cycles):
    """Print the crossing graph (nodes, arcs, optionally cycles)."""
    tds = _load_system(spec, preset_name, overrides)
    g = build_graph(tds)
    out = {
        "nodes": [[list(n.degree), list(n.flow), n.pair_index] for n in g.nodes],
        "arcs": [[list(a), list(b)] for a, b in g.arcs],
    }
    if show_cycles:
        cycles, truncated = enumerate_cycles(g)
        out["cycles"] = [[list(d) for d in c] for c in cycles]
        out["truncated"] = truncated
    click.echo(json.dumps(out, indent=2))


@main.command(name="tropicalize")
@click.argument("poly", type=click.Path(exists=True))
@click.option("--eps", required=True, metavar="P/Q")
@click.option("--snap", default=10**6, show_default=True, help="max denominator for log snapping")
def tropicalize_cmd(poly, eps, snap):
    """Convert classical polynomial coefficients into a system spec."""
    from .core import tds_to_json

    with open(poly) as fh:
        data = json.load(fh)
    tds = tropicalize(
        [(c[0], c[1], c[2]) for c in data["u_coeffs"]],
        [(c[0], c[1], c[2]) for c in data["v_coeffs"]],
        frac(eps),
        snap_denominator=snap,
    )
    click.echo(json.dumps(tds_to_json(tds), indent=2))


@main.command()
@click.option("--port", default=8420, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port, host):
    """Run the HTTP explorer service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
