"""Geometric Myhill-Nerode theory on rooted multigraphs.

Two states are equivalent when the trees of paths issuing from them are
isomorphic as unlabelled rooted trees. The geometric Moore algorithm computes
this congruence by refining on edge counts into blocks; the minimal covering
quotient has one state per class.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import factorial, prod
from typing import Iterable

from . import kernels
from .covering import GraphMorphism
from .errors import NotConnected, UnknownState
from .graph import Dfa, Edge, GraphLike, Multigraph, as_graph, validate


@dataclass(frozen=True)
class Partition:
    blocks: tuple

    def __post_init__(self):
        blocks = sorted(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def from_labels(cls, states: Iterable[str], labels: Iterable) -> "Partition":
        groups: dict = {}
        for q, b in zip(states, labels):
            groups.setdefault(b, []).append(q)
        return cls(tuple(groups.values()))

    @cached_property
    def _index(self) -> dict:
        return {q: b for b in self.blocks for q in b}

    def block_of(self, q: str) -> tuple:
        return self._index[q]

    def same_block(self, q1: str, q2: str) -> bool:
        return self.block_of(q1) == self.block_of(q2)

    def is_discrete(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def refines(self, other: "Partition") -> bool:
        """Every block of ``self`` lies inside a block of ``other``."""
        return all(len({other.block_of(q) for q in b}) == 1 for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]


def moore_bound(g: GraphLike) -> int:
    return (as_graph(g).num_states + 1) ** 2


def _require_connected(graph: Multigraph) -> None:
    if not graph.is_connected():
        raise NotConnected("some states are unreachable from the root; reduce first")


def _refine(graph: Multigraph, rounds: int, colors=None):
    states = graph.states
    index = {q: i for i, q in enumerate(states)}
    triples = [
        (index[e.src], index[e.dst], 0 if colors is None else colors[k])
        for k, e in enumerate(graph.edges)
    ]
    ptr, dst, color = kernels.csr(len(states), triples)
    block, done, stable = kernels.refine(len(states), ptr, dst, color, [0] * len(states), rounds)
    return Partition.from_labels(states, block), done, stable


def geometric_moore(g: GraphLike) -> Partition:
    """Partition of the states by isomorphism type of their path trees."""
    graph = as_graph(g)
    _require_connected(graph)
    bound = moore_bound(graph)
    partition, _, stable = _refine(graph, bound)
    # a refinement chain on |Q| states splits at most |Q|-1 times
    assert stable, "geometric Moore did not stabilize within (|Q|+1)^2 rounds"
    return partition


def moore_partitions(g: GraphLike, rounds: int) -> list:
    """``[P_0, P_1, ..., P_rounds]`` computed one round at a time, no early stop."""
    graph = as_graph(g)
    return [_refine(graph, d)[0] for d in range(rounds + 1)]


def geometric_moore_counting(g: GraphLike, early_stop: bool = False, count_cap=None) -> Partition:
    """The algorithm as stated with edge-count predicates ``(P, n)``.

    Each round intersects the previous partition with the two-block partitions
    "exactly n out-edges into P" for every block P and every ``n <= count_cap``.
    ``count_cap`` defaults to the largest out-degree; capping at |Q| is not
    enough once parallel edges push counts above |Q|. Slow; kept as a
    cross-check for :func:`geometric_moore`.
    """
    graph = as_graph(g)
    states = graph.states
    _require_connected(graph)
    into = {q: {} for q in states}
    for e in graph.edges:
        into[e.src][e.dst] = into[e.src].get(e.dst, 0) + 1
    if count_cap is None:
        count_cap = max(len(graph.out_edges(q)) for q in states)

    labels = [0] * len(states)
    for _ in range(moore_bound(graph)):
        blocks: dict = {}
        for q, b in zip(states, labels):
            blocks.setdefault(b, set()).add(q)
        counts = {
            b: [sum(into[q].get(p, 0) for p in members) for q in states]
            for b, members in blocks.items()
        }
        keys = []
        for i in range(len(states)):
            keys.append(
                (labels[i],)
                + tuple(counts[b][i] == n for b in sorted(counts) for n in range(count_cap + 1))
            )
        canon: dict = {}
        new = [canon.setdefault(k, len(canon)) for k in keys]
        stalled = len(canon) == len(blocks)
        labels = new
        if early_stop and stalled:
            break
    return Partition.from_labels(states, labels)


def cone_equivalent(g: GraphLike, q1: str, q2: str, d: int) -> bool:
    """Whether the depth-``d`` truncated path trees at ``q1`` and ``q2`` are isomorphic."""
    graph = as_graph(g)
    for q in (q1, q2):
        if not graph.has_state(q):
            raise UnknownState(f"unknown state {q!r}", state=q)
    if d < 0:
        raise ValueError("depth must be non-negative")
    partition, _, _ = _refine(graph, d)
    return partition.same_block(q1, q2)


def cone_forms(g: GraphLike, d: int) -> dict:
    """Canonical form id of the depth-``d`` truncated path tree at every state.

    Rooted-tree canonical forms computed bottom-up: a tree's form is the sorted
    tuple of its children's forms, interned to an integer. Equal ids mean
    isomorphic trees. Shared subtrees are interned once, so depth does not
    blow up the cost.
    """
    graph = as_graph(g)
    table: dict = {}
    leaf = table.setdefault((), 0)
    forms = {q: leaf for q in graph.states}
    for _ in range(d):
        nxt = {}
        for q in graph.states:
            key = tuple(sorted(forms[e.dst] for e in graph.out_edges(q)))
            nxt[q] = table.setdefault(key, len(table))
        forms = nxt
    return forms


def cone_partition(g: GraphLike, d: int) -> Partition:
    graph = as_graph(g)
    forms = cone_forms(graph, d)
    return Partition.from_labels(graph.states, [forms[q] for q in graph.states])


def tree_canonical_form(children, root) -> str:
    """Nested-parenthesis canonical string of an explicit finite rooted tree."""
    kids = sorted(tree_canonical_form(children, c) for c in children(root))
    return "(" + "".join(kids) + ")"


@dataclass(frozen=True, eq=False)
class MinimizationResult:
    quotient: Multigraph
    projection: GraphMorphism
    classes: Partition
    reduced: bool = False


def class_name(block: Iterable[str]) -> str:
    return "+".join(sorted(block))


def minimal_quotient(g: GraphLike) -> MinimizationResult:
    """The minimal covering quotient and a covering of (the reduced) ``g`` onto it.

    States unreachable from the root are dropped first; ``reduced`` records it.
    """
    graph = as_graph(g)
    reduced = not graph.is_connected()
    if reduced:
        graph = graph.restrict(graph.root)
    classes = geometric_moore(graph)
    name = {q: class_name(b) for b in classes.blocks for q in b}
    names = [class_name(b) for b in classes.blocks]

    edges = []
    buckets = {}
    for block, c in zip(classes.blocks, names):
        rep = block[0]
        targets = [name[e.dst] for e in graph.out_edges(rep)]
        for d in names:
            ids = [f"{c}->{d}#{k}" for k in range(targets.count(d))]
            edges.extend(Edge(i, c, d) for i in ids)
            buckets[c, d] = ids
    quotient = Multigraph(tuple(names), name[graph.root], tuple(edges))

    edge_map = {}
    for q in graph.states:
        by_target: dict = {}
        for e in graph.out_edges(q):
            by_target.setdefault(name[e.dst], []).append(e.id)
        for d, ids in by_target.items():
            # the class independence claim guarantees equal bucket sizes
            assert len(ids) == len(buckets[name[q], d])
            edge_map.update(zip(sorted(ids), buckets[name[q], d]))
    projection = GraphMorphism(graph, quotient, name, edge_map)
    return MinimizationResult(quotient, projection, classes, reduced)


def is_minimal(g: GraphLike) -> bool:
    return geometric_moore(g).is_discrete()


def classical_minimize(dfa: Dfa) -> Dfa:
    """Language-minimal DFA via Moore refinement on labelled transitions."""
    validate(dfa)
    graph = dfa.graph
    _require_connected(graph)
    letter_index = {a: i for i, a in enumerate(dfa.alphabet)}
    colors = [letter_index[a] for a in dfa.labels]
    # the first round separates states by their sets of defined letters
    classes, _, stable = _refine(graph, moore_bound(graph), colors)
    assert stable
    name = {q: class_name(b) for b in classes.blocks for q in b}
    records = []
    for block in classes.blocks:
        rep = block[0]
        c = name[rep]
        for a in dfa.letters(rep):
            records.append((f"{c}.{a}", c, a, name[dfa.delta[rep, a].dst]))
    return Dfa.from_edges(
        [class_name(b) for b in classes.blocks], name[dfa.root], records, dfa.alphabet
    )


def edge_automorphism_order(g: GraphLike) -> int:
    """Order of the group of automorphisms fixing every state: product of factorials
    of the parallel-edge multiplicities."""
    return prod(factorial(n) for n in as_graph(g).multiplicities().values())
