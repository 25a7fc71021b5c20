"""Rooted directed multigraphs and DFAs viewed as labelled multigraphs.

States, edge ids and letters are opaque strings. States and letters are kept
in lexicographic order so every enumeration below is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import (
    DuplicateEdgeId,
    DuplicateOutLabel,
    LetterNotInAlphabet,
    MissingLabel,
    UnknownLetter,
    UnknownState,
)

Word = tuple  # tuple[str, ...]


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Multigraph:
    states: tuple
    root: str
    edges: tuple

    def __post_init__(self):
        states = tuple(sorted(set(self.states)))
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "edges", edges)
        known = set(states)
        if self.root not in known:
            raise UnknownState(f"root {self.root!r} is not a state", state=self.root)
        seen = set()
        for e in edges:
            if e.id in seen:
                raise DuplicateEdgeId(f"edge id {e.id!r} used twice", edge=e.id)
            seen.add(e.id)
            for q in (e.src, e.dst):
                if q not in known:
                    raise UnknownState(f"edge {e.id!r} touches unknown state {q!r}", state=q)

    @cached_property
    def _out(self):
        out = {q: [] for q in self.states}
        for e in self.edges:
            out[e.src].append(e)
        return {q: tuple(es) for q, es in out.items()}

    @cached_property
    def _by_id(self):
        return {e.id: e for e in self.edges}

    def out_edges(self, q: str) -> tuple:
        """Out-edges of ``q`` in edge-sequence order."""
        try:
            return self._out[q]
        except KeyError:
            raise UnknownState(f"unknown state {q!r}", state=q) from None

    def edge(self, edge_id: str) -> Edge:
        return self._by_id[edge_id]

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._by_id

    def has_state(self, q: str) -> bool:
        return q in self._out

    def reachable_from(self, q: str) -> set:
        self.out_edges(q)
        seen = {q}
        todo = [q]
        while todo:
            p = todo.pop()
            for e in self._out[p]:
                if e.dst not in seen:
                    seen.add(e.dst)
                    todo.append(e.dst)
        return seen

    def is_connected(self) -> bool:
        """Every state reachable from the root."""
        return len(self.reachable_from(self.root)) == len(self.states)

    def multiplicities(self) -> dict:
        """Number of parallel edges for each ordered (src, dst) pair."""
        counts: dict = {}
        for e in self.edges:
            counts[e.src, e.dst] = counts.get((e.src, e.dst), 0) + 1
        return counts

    def restrict(self, q: str) -> "Multigraph":
        keep = self.reachable_from(q)
        return Multigraph(
            tuple(s for s in self.states if s in keep),
            q,
            tuple(e for e in self.edges if e.src in keep),
        )

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Dfa:
    """A multigraph plus one letter per edge (aligned with ``graph.edges``).

    Admissibility is not checked on construction; see :func:`validate`.
    """

    graph: Multigraph
    alphabet: tuple
    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(labels) != len(self.graph.edges):
            raise MissingLabel(
                f"{len(self.graph.edges)} edges but {len(labels)} labels"
            )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))

    @classmethod
    def from_edges(
        cls,
        states: Iterable[str],
        root: str,
        edges: Iterable[Sequence[str]],
        alphabet: Optional[Iterable[str]] = None,
    ) -> "Dfa":
        """Build from ``(id, src, letter, dst)`` records."""
        edges = list(edges)
        graph = Multigraph(tuple(states), root, tuple(Edge(i, s, t) for i, s, _, t in edges))
        labels = tuple(a for _, _, a, _ in edges)
        if alphabet is None:
            alphabet = labels
        return cls(graph, tuple(alphabet), labels)

    @property
    def root(self) -> str:
        return self.graph.root

    @property
    def states(self) -> tuple:
        return self.graph.states

    @cached_property
    def label(self) -> dict:
        return {e.id: a for e, a in zip(self.graph.edges, self.labels)}

    @cached_property
    def delta(self) -> dict:
        """``(state, letter) -> Edge``; validates the DFA on first use."""
        validate(self)
        return {(e.src, a): e for e, a in zip(self.graph.edges, self.labels)}

    @cached_property
    def _letters_at(self) -> dict:
        out = {q: [] for q in self.graph.states}
        for e, a in zip(self.graph.edges, self.labels):
            out[e.src].append(a)
        return {q: tuple(sorted(ls)) for q, ls in out.items()}

    def letters(self, q: str) -> tuple:
        """Sorted out-letters of ``q``."""
        self.graph.out_edges(q)
        return self._letters_at[q]

    def step(self, q: str, letter: str) -> Optional[str]:
        e = self.delta.get((q, letter))
        return None if e is None else e.dst

    def triple(self, edge_id: str) -> tuple:
        e = self.graph.edge(edge_id)
        return (e.src, self.label[edge_id], e.dst)


GraphLike = Union[Multigraph, Dfa]


def as_graph(g: GraphLike) -> Multigraph:
    return g.graph if isinstance(g, Dfa) else g


def validate(dfa: Dfa) -> None:
    """Raise unless the labelling is admissible and uses only alphabet letters."""
    letters = set(dfa.alphabet)
    seen = set()
    for e, a in zip(dfa.graph.edges, dfa.labels):
        if a not in letters:
            raise UnknownLetter(f"edge {e.id!r} has label {a!r} outside the alphabet", edge=e.id, letter=a)
        if (e.src, a) in seen:
            raise DuplicateOutLabel(
                f"state {e.src!r} has two out-edges labelled {a!r}", state=e.src, letter=a
            )
        seen.add((e.src, a))


def _check_letters(dfa: Dfa, word: Sequence[str]) -> None:
    known = set(dfa.alphabet)
    for a in word:
        if a not in known:
            raise LetterNotInAlphabet(f"letter {a!r} not in alphabet", letter=a)


def run(dfa: Dfa, word: Sequence[str]) -> Optional[str]:
    """State reached after reading ``word``, or None if the word is rejected."""
    _check_letters(dfa, word)
    delta = dfa.delta
    q = dfa.root
    for a in word:
        e = delta.get((q, a))
        if e is None:
            return None
        q = e.dst
    return q


def run_path(dfa: Dfa, word: Sequence[str]) -> Optional[list]:
    """The edges traversed by ``word`` from the root, or None."""
    _check_letters(dfa, word)
    delta = dfa.delta
    q = dfa.root
    path = []
    for a in word:
        e = delta.get((q, a))
        if e is None:
            return None
        path.append(e)
        q = e.dst
    return path


def accepts(dfa: Dfa, word: Sequence[str]) -> bool:
    return run(dfa, word) is not None


def iter_levels(dfa: Dfa, start: Optional[str] = None) -> Iterator[list]:
    """Yield ``[(word, state), ...]`` for lengths 0, 1, 2, ... in lexicographic order."""
    delta = dfa.delta
    layer = [((), dfa.root if start is None else start)]
    while True:
        yield layer
        nxt = []
        for w, q in layer:
            for a in dfa.letters(q):
                nxt.append((w + (a,), delta[q, a].dst))
        layer = nxt


def level(dfa: Dfa, n: int) -> list:
    """All accepted words of length exactly ``n``, sorted."""
    if n < 0:
        raise ValueError("level must be non-negative")
    for k, layer in enumerate(iter_levels(dfa)):
        if k == n:
            return [w for w, _ in layer]


def level_counts(dfa: Dfa, n: int, start: Optional[str] = None) -> dict:
    """Number of words of length ``n`` ending in each state (no enumeration)."""
    counts = {dfa.root if start is None else start: 1}
    for _ in range(n):
        nxt: dict = {}
        for q, c in counts.items():
            for e in dfa.graph.out_edges(q):
                nxt[e.dst] = nxt.get(e.dst, 0) + c
        counts = nxt
    return counts


def reachable_closure(g: GraphLike, q: str) -> GraphLike:
    """Sub-automaton on the states reachable from ``q``, rooted at ``q``."""
    graph = as_graph(g)
    sub = graph.restrict(q)
    if isinstance(g, Multigraph):
        return sub
    keep = {e.id for e in sub.edges}
    labels = tuple(a for e, a in zip(graph.edges, g.labels) if e.id in keep)
    return Dfa(sub, g.alphabet, labels)


@dataclass(frozen=True)
class TruncatedTree:
    depth: int
    vertices: tuple
    type_of: Mapping

    def children(self, v: Word) -> list:
        return [u for u in self.vertices if len(u) == len(v) + 1 and u[:-1] == v]

    def as_multigraph(self) -> Multigraph:
        """The tree as a multigraph; vertex and edge ids come from :func:`word_id`."""
        ids = [word_id(v) for v in self.vertices]
        edges = tuple(Edge(word_id(v), word_id(v[:-1]), word_id(v)) for v in self.vertices if v)
        return Multigraph(tuple(ids), word_id(()), edges)


def word_id(w: Sequence[str]) -> str:
    return "/" + "/".join(w)


def truncated_cover(dfa: Dfa, d: int) -> TruncatedTree:
    vertices = []
    type_of = {}
    for k, layer in enumerate(iter_levels(dfa)):
        if k > d:
            break
        for w, q in layer:
            vertices.append(w)
            type_of[w] = q
    return TruncatedTree(d, tuple(vertices), type_of)


def canonical_labelling(g: Multigraph) -> Dfa:
    """Label the k-th out-edge of every state with ``e<k>``."""
    position: dict = {}
    labels = []
    for e in g.edges:
        k = position.get(e.src, 0)
        position[e.src] = k + 1
        labels.append(f"e{k}")
    return Dfa(g, tuple(set(labels)), tuple(labels))
