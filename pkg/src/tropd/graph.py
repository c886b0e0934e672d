"""Directed crossing graph over the labelled subdivision."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

import networkx as nx

from .core import TropicalSystem, I
from .exact import dot
from .geometry import Subdivision, regular_subdivision

CYCLE_CAP = 100_000


@dataclass(frozen=True)
class GraphNode:
    degree: tuple[int, int]
    flow: tuple[int, int]
    pair_index: int


@dataclass(frozen=True)
class CrossingGraph:
    nodes: tuple[GraphNode, ...]
    arcs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]   # degree -> degree

    def node_by_degree(self, degree) -> GraphNode | None:
        for n in self.nodes:
            if n.degree == tuple(degree):
                return n
        return None

    def to_networkx(self) -> "nx.DiGraph":
        g = nx.DiGraph()
        for n in self.nodes:
            g.add_node(n.degree)
        g.add_edges_from(self.arcs)
        return g


def build_graph(tds: TropicalSystem, subdivision: Subdivision | None = None) -> CrossingGraph:
    """Nodes are labelled envelope points; an arc marks same-direction transit.

    The arc from degree(i) to degree(j) exists when the subdivision contains
    the edge and both flows cross it positively:
    d_i . (deg j - deg i) > 0 and d_j . (deg j - deg i) > 0.
    """
    sub = subdivision if subdivision is not None else regular_subdivision(tds, I)
    by_id = {p.id: p for p in sub.points}
    nodes = []
    label: dict[int, int] = {}
    for p in sub.points:
        if not p.on_envelope or not p.dominant:
            continue
        k = p.dominant[0]
        label[p.id] = k
        nodes.append(GraphNode(p.degree, tds[k].flow, k))
    arcs = []
    for e in sub.edges:
        if e.a not in label or e.b not in label:
            continue
        for a, b in ((e.a, e.b), (e.b, e.a)):
            i, j = label[a], label[b]
            n = (tds[j].degree[0] - tds[i].degree[0], tds[j].degree[1] - tds[i].degree[1])
            if dot(tds[i].flow, n) > 0 and dot(tds[j].flow, n) > 0:
                arcs.append((by_id[a].degree, by_id[b].degree))
    nodes.sort(key=lambda n: n.degree)
    arcs.sort()
    return CrossingGraph(tuple(nodes), tuple(arcs))


def enumerate_cycles(g: CrossingGraph, min_len: int = 4, cap: int = CYCLE_CAP):
    """All simple directed cycles of length >= min_len, deterministic order.

    Returns (cycles, truncated); each cycle is a tuple of degree nodes rotated
    so its smallest node comes first.
    """
    dg = g.to_networkx()
    raw = list(islice(nx.simple_cycles(dg), cap + 1))
    truncated = len(raw) > cap
    cycles = set()
    for cyc in raw[:cap]:
        if len(cyc) < min_len:
            continue
        k = cyc.index(min(cyc))
        cycles.add(tuple(cyc[k:] + cyc[:k]))
    return sorted(cycles), truncated


def reachable(g: CrossingGraph, from_nodes, reverse: bool = False) -> set:
    """Forward (or reverse) reachability closure over the arc set."""
    dg = g.to_networkx()
    if reverse:
        dg = dg.reverse()
    out: set = set()
    for n in from_nodes:
        n = tuple(n)
        if n not in dg:
            continue
        out.add(n)
        out |= nx.descendants(dg, n)
    return out
