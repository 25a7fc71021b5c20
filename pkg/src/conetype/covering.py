"""Graph morphisms, the local covering criterion and unique path lifting."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .errors import (
    DomainMismatch,
    EdgeEndpointMismatch,
    IncompleteMap,
    NotAPath,
    NotLocallyInjective,
    NotLocallySurjective,
    RootNotPreserved,
    TargetNotConnected,
    UnknownState,
    WrongStartVertex,
)
from .graph import Dfa, Multigraph, as_graph, truncated_cover, word_id


@dataclass(frozen=True, eq=False)
class GraphMorphism:
    source: Multigraph
    target: Multigraph
    vertex_map: Mapping = field(repr=False)
    edge_map: Mapping = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "source", as_graph(self.source))
        object.__setattr__(self, "target", as_graph(self.target))
        object.__setattr__(self, "vertex_map", dict(self.vertex_map))
        object.__setattr__(self, "edge_map", dict(self.edge_map))

    def __eq__(self, other):
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.vertex_map == other.vertex_map
            and self.edge_map == other.edge_map
        )

    __hash__ = None

    @cached_property
    def _lift_index(self):
        # (source state, target edge) -> source edge
        index = {}
        for e in self.source.edges:
            index.setdefault((e.src, self.edge_map[e.id]), e)
        return index


def identity(g) -> GraphMorphism:
    g = as_graph(g)
    return GraphMorphism(g, g, {q: q for q in g.states}, {e.id: e.id for e in g.edges})


def verify_morphism(m: GraphMorphism) -> None:
    src, tgt = m.source, m.target
    for q in src.states:
        if q not in m.vertex_map:
            raise IncompleteMap(f"state {q!r} has no image", state=q)
        if not tgt.has_state(m.vertex_map[q]):
            raise UnknownState(f"image {m.vertex_map[q]!r} of {q!r} is not a target state", state=m.vertex_map[q])
    for e in src.edges:
        if e.id not in m.edge_map:
            raise IncompleteMap(f"edge {e.id!r} has no image", edge=e.id)
        if not tgt.has_edge(m.edge_map[e.id]):
            raise EdgeEndpointMismatch(f"image of edge {e.id!r} is not a target edge", edge=e.id)
    if m.vertex_map[src.root] != tgt.root:
        raise RootNotPreserved(
            f"root {src.root!r} maps to {m.vertex_map[src.root]!r}, not {tgt.root!r}"
        )
    for e in src.edges:
        image = tgt.edge(m.edge_map[e.id])
        if m.vertex_map[e.src] != image.src or m.vertex_map[e.dst] != image.dst:
            raise EdgeEndpointMismatch(
                f"edge {e.id!r} maps to {image.id!r} with mismatched endpoints", edge=e.id
            )


def verify_covering(m: GraphMorphism) -> None:
    """Raise unless ``m`` restricts to a bijection on every out-edge set.

    Together with a connected target this certifies a covering morphism.
    """
    verify_morphism(m)
    if not m.target.is_connected():
        raise TargetNotConnected("target has states unreachable from its root")
    for q in m.source.states:
        images = [m.edge_map[e.id] for e in m.source.out_edges(q)]
        if len(set(images)) != len(images):
            raise NotLocallyInjective(f"two out-edges of {q!r} share an image", state=q)
        wanted = {e.id for e in m.target.out_edges(m.vertex_map[q])}
        if set(images) != wanted:
            raise NotLocallySurjective(
                f"out-edges of {q!r} miss part of the out-edges of {m.vertex_map[q]!r}", state=q
            )


def is_covering(m: GraphMorphism) -> bool:
    try:
        verify_covering(m)
    except (
        IncompleteMap,
        UnknownState,
        EdgeEndpointMismatch,
        RootNotPreserved,
        TargetNotConnected,
        NotLocallyInjective,
        NotLocallySurjective,
    ):
        return False
    return True


def lift_path(m: GraphMorphism, start: str, downstairs: Sequence[str]) -> list:
    """The unique source path from ``start`` mapping onto the target path ``downstairs``."""
    if not m.source.has_state(start):
        raise UnknownState(f"unknown state {start!r}", state=start)
    tgt = m.target
    for k, eid in enumerate(downstairs):
        if not tgt.has_edge(eid):
            raise NotAPath(f"{eid!r} is not a target edge", position=k)
        if k and tgt.edge(downstairs[k - 1]).dst != tgt.edge(eid).src:
            raise NotAPath(f"edges {downstairs[k - 1]!r} and {eid!r} do not chain", position=k)
    if downstairs and tgt.edge(downstairs[0]).src != m.vertex_map[start]:
        raise WrongStartVertex(
            f"path starts at {tgt.edge(downstairs[0]).src!r}, expected {m.vertex_map[start]!r}"
        )
    index = m._lift_index
    q = start
    lifted = []
    for eid in downstairs:
        e = index.get((q, eid))
        if e is None:
            raise NotLocallySurjective(f"no out-edge of {q!r} maps to {eid!r}", state=q)
        lifted.append(e.id)
        q = e.dst
    return lifted


def compose(m2: GraphMorphism, m1: GraphMorphism) -> GraphMorphism:
    """``m2 ∘ m1``."""
    if m1.target != m2.source:
        raise DomainMismatch("target of the first morphism differs from source of the second")
    return GraphMorphism(
        m1.source,
        m2.target,
        {q: m2.vertex_map[p] for q, p in m1.vertex_map.items()},
        {e: m2.edge_map[f] for e, f in m1.edge_map.items()},
    )


def truncation_projection(dfa: Dfa, depth: int) -> GraphMorphism:
    """Projection of the depth-truncated universal cover onto the DFA's graph.

    Not a covering (leaves have no out-edges) but a morphism.
    """
    tree = truncated_cover(dfa, depth)
    graph = tree.as_multigraph()
    vertex_map = {}
    edge_map = {}
    for v in tree.vertices:
        vertex_map[word_id(v)] = tree.type_of[v]
        if v:
            edge_map[word_id(v)] = dfa.delta[tree.type_of[v[:-1]], v[-1]].id
    return GraphMorphism(graph, dfa.graph, vertex_map, edge_map)
