"""Region intersection graphs.

A region assignment pins one connected subset of a base graph to every
rig vertex; two rig vertices are adjacent exactly when their regions
share a base vertex.  Every graph is such an intersection graph over its
own subdivision, which gives a canonical round-trip used heavily in
tests and in the flow transfer.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import (
    Graph,
    connected_components,
    graph_from_json_dict,
    graph_to_json_dict,
    subdivision,
)

__all__ = [
    "RegionAssignment",
    "build_rig",
    "rig_over_subdivision",
    "distinguished_vertices",
    "assignment_to_json_dict",
    "assignment_from_json_dict",
]


@dataclass(frozen=True)
class RegionAssignment:
    """Base graph plus one nonempty connected region per rig vertex."""

    base: Graph
    regions: tuple

    def __post_init__(self):
        norm = []
        for i, region in enumerate(self.regions):
            vs = tuple(sorted({int(v) for v in region}))
            if not vs:
                raise ValueError(f"region {i} is empty")
            if vs[0] < 0 or vs[-1] >= self.base.n:
                raise ValueError(f"region {i} leaves the base vertex range")
            norm.append(vs)
        object.__setattr__(self, "regions", tuple(norm))
        for i, vs in enumerate(self.regions):
            if len(connected_components(self.base, subset=vs)) != 1:
                raise ValueError(f"region {i} is not connected in the base graph")

    @property
    def k(self) -> int:
        return len(self.regions)

    def masks(self):
        """Region bitmasks over base vertices, for fast intersection tests."""
        out = []
        for vs in self.regions:
            m = 0
            for v in vs:
                m |= 1 << v
            out.append(m)
        return out


def build_rig(assign: RegionAssignment) -> Graph:
    """Intersection graph of the regions: edge iff two regions overlap."""
    masks = assign.masks()
    k = len(masks)
    edges = [
        (i, j) for i in range(k) for j in range(i + 1, k) if masks[i] & masks[j]
    ]
    return Graph(k, edges)


def rig_over_subdivision(graph: Graph) -> RegionAssignment:
    """Present ``graph`` as a rig over its subdivision.

    The region of vertex v is v itself together with the midpoints of
    its incident edges; two regions meet exactly at the midpoint of the
    shared edge, so ``build_rig`` returns ``graph`` back.
    """
    base = subdivision(graph)
    n = graph.n
    incident = [[] for _ in range(n)]
    for k, (u, v) in enumerate(graph.edges):
        incident[u].append(n + k)
        incident[v].append(n + k)
    regions = tuple(tuple([v] + incident[v]) for v in range(n))
    return RegionAssignment(base, regions)


def distinguished_vertices(assign: RegionAssignment) -> tuple:
    """Smallest base vertex of each region (the region's representative)."""
    return tuple(region[0] for region in assign.regions)


def assignment_to_json_dict(assign: RegionAssignment, **extras) -> dict:
    d = {
        "base": graph_to_json_dict(assign.base),
        "regions": [list(r) for r in assign.regions],
    }
    d.update(extras)
    return d


def assignment_from_json_dict(d: dict) -> RegionAssignment:
    base, _, _ = graph_from_json_dict(d["base"])
    return RegionAssignment(base, tuple(tuple(r) for r in d["regions"]))
