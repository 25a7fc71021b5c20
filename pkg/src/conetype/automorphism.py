"""Portrait calculus for the automorphism group of a self-similar tree.

An automorphism of the path tree of a geometrically minimal DFA is determined
by its portrait: a permutation of the out-letters at every vertex. A portrait
defines an automorphism exactly when each of its permutations is admissible,
i.e. only swaps letters that lead to the same state. Portraits here are lazy;
the only evaluation primitives are :meth:`Portrait.local` and
:meth:`Portrait.image`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import factorial, prod
from typing import Iterator, Mapping, NamedTuple, Optional, Sequence

from .errors import (
    BaseMismatch,
    NotAdmissible,
    NotAPermutation,
    NotConnected,
    NotMinimal,
    UnknownState,
    WordNotAccepted,
)
from .graph import Dfa, GraphLike, as_graph, level_counts, iter_levels, run
from .minimization import is_minimal


# -- permutations -----------------------------------------------------------


@dataclass(frozen=True)
class Injection:
    """Injective map on letters, identity outside ``domain``."""

    domain: tuple
    images: tuple

    def __post_init__(self):
        pairs = sorted(zip(self.domain, self.images))
        object.__setattr__(self, "domain", tuple(a for a, _ in pairs))
        object.__setattr__(self, "images", tuple(b for _, b in pairs))
        if len(set(self.domain)) != len(self.domain):
            raise NotAPermutation("repeated letter in domain")
        if len(set(self.images)) != len(self.images):
            raise NotAPermutation("map is not injective")

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "Injection":
        return cls(tuple(mapping), tuple(mapping.values()))

    @cached_property
    def mapping(self) -> dict:
        return dict(zip(self.domain, self.images))

    def __call__(self, letter: str) -> str:
        return self.mapping.get(letter, letter)

    def is_identity(self) -> bool:
        return self.domain == self.images

    def restrict(self, letters: Sequence[str]) -> "Injection":
        return Injection(tuple(letters), tuple(self(a) for a in letters))


@dataclass(frozen=True)
class Permutation(Injection):
    """Bijection of ``domain`` onto itself."""

    def __post_init__(self):
        super().__post_init__()
        if set(self.images) != set(self.domain):
            raise NotAPermutation("images differ from the domain")

    @classmethod
    def identity(cls, domain: Sequence[str]) -> "Permutation":
        return cls(tuple(domain), tuple(domain))

    @classmethod
    def from_cycles(cls, domain: Sequence[str], cycles: Sequence[Sequence[str]]) -> "Permutation":
        mapping = {a: a for a in domain}
        for cycle in cycles:
            for a in cycle:
                if a not in mapping:
                    raise NotAPermutation(f"cycle letter {a!r} outside the domain")
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                mapping[a] = b
        return cls(tuple(mapping), tuple(mapping.values()))

    def __mul__(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        domain = sorted(set(self.domain) | set(other.domain))
        return Permutation(tuple(domain), tuple(self(other(a)) for a in domain))

    def inverse(self) -> "Permutation":
        return Permutation(self.images, self.domain)

    def extend(self, letters: Sequence[str]) -> "Permutation":
        return Permutation(tuple(letters), tuple(self(a) for a in letters))

    def cycles(self) -> list:
        """Non-trivial cycles, each starting at its least letter, in order."""
        seen = set()
        out = []
        for a in self.domain:
            if a in seen or self(a) == a:
                continue
            cycle = [a]
            seen.add(a)
            b = self(a)
            while b != a:
                cycle.append(b)
                seen.add(b)
                b = self(b)
            out.append(cycle)
        return out

    def __str__(self):
        return "".join("(" + " ".join(c) + ")" for c in self.cycles()) or "id"


def as_permutation(m: Injection, letters: Sequence[str]) -> Permutation:
    return Permutation(tuple(letters), tuple(m(a) for a in letters))


# -- admissible permutations ------------------------------------------------


@lru_cache(maxsize=256)
def _minimal(dfa: Dfa) -> bool:
    return as_graph(dfa).is_connected() and is_minimal(dfa)


def require_minimal(dfa: Dfa) -> None:
    if not as_graph(dfa).is_connected():
        raise NotConnected("automaton has unreachable states")
    if not _minimal(dfa):
        raise NotMinimal("automaton is not geometrically minimal")


@dataclass(frozen=True)
class AdmissiblePermutation:
    state: str
    perm: Permutation


def blocks_at(dfa: Dfa, q: str) -> tuple:
    """``((target, letters), ...)``: out-letters of ``q`` grouped by target state."""
    groups: dict = {}
    for a in dfa.letters(q):
        groups.setdefault(dfa.delta[q, a].dst, []).append(a)
    return tuple((t, tuple(groups[t])) for t in sorted(groups))


def is_admissible(dfa: Dfa, q: str, m: Injection) -> bool:
    """``m`` permutes the out-letters of ``q`` and keeps every letter's target."""
    letters = dfa.letters(q)
    if not set(m.domain) <= set(letters):
        return False
    images = [m(a) for a in letters]
    if set(images) != set(letters):
        return False
    return all(dfa.delta[q, a].dst == dfa.delta[q, b].dst for a, b in zip(letters, images))


def admissible(dfa: Dfa, q: str, perm: Injection) -> AdmissiblePermutation:
    """Check ``perm`` at ``q`` and extend it by the identity to all of the out-letters."""
    if not dfa.graph.has_state(q):
        raise UnknownState(f"unknown state {q!r}", state=q)
    if not is_admissible(dfa, q, perm):
        raise NotAdmissible(f"{perm} does not preserve the target blocks at {q!r}", state=q)
    return AdmissiblePermutation(q, as_permutation(perm, dfa.letters(q)))


@dataclass(frozen=True)
class SymGroup:
    """The group of admissible permutations at one state."""

    state: str
    blocks: tuple

    @property
    def block_sizes(self) -> list:
        return [len(letters) for _, letters in self.blocks]

    @property
    def order(self) -> int:
        return prod(factorial(n) for n in self.block_sizes)

    def elements(self) -> Iterator[Permutation]:
        """All elements, identity first, in a fixed order."""
        domain = sorted(a for _, letters in self.blocks for a in letters)
        per_block = [list(itertools.permutations(letters)) for _, letters in self.blocks]
        for choice in itertools.product(*per_block):
            mapping = {}
            for (_, letters), images in zip(self.blocks, choice):
                mapping.update(zip(letters, images))
            yield Permutation(tuple(domain), tuple(mapping[a] for a in domain))


def admissible_perms(dfa_min: Dfa, q: str) -> SymGroup:
    require_minimal(dfa_min)
    if not dfa_min.graph.has_state(q):
        raise UnknownState(f"unknown state {q!r}", state=q)
    return SymGroup(q, blocks_at(dfa_min, q))


def _sym_orders(dfa: Dfa) -> dict:
    return {q: SymGroup(q, blocks_at(dfa, q)).order for q in dfa.states}


# -- portraits --------------------------------------------------------------


class Portrait:
    """Base class. Subclasses implement ``local`` and may override ``image``."""

    base: Dfa

    def local(self, v: tuple) -> Injection:
        """Local map at vertex ``v`` (identity where nothing is stored)."""
        raise NotImplementedError

    def image(self, v: tuple) -> tuple:
        out = []
        for k, a in enumerate(v):
            out.append(self.local(v[:k])(a))
        return tuple(out)


_IDENTITY = Injection((), ())


@dataclass(frozen=True, eq=False)
class FiniteSupport(Portrait):
    base: Dfa
    entries: Mapping = field(default_factory=dict)
    check: bool = field(default=True, repr=False)
    truncated_at: Optional[int] = None

    def __post_init__(self):
        entries = {tuple(v): m for v, m in dict(self.entries).items()}
        if self.check:
            require_minimal(self.base)
            for v, m in entries.items():
                q = run(self.base, v)
                if q is None:
                    raise WordNotAccepted(f"support vertex {v!r} is not accepted", word=v)
                entries[v] = admissible(self.base, q, m).perm
        entries = {v: m for v, m in entries.items() if not m.is_identity()}
        object.__setattr__(self, "entries", entries)

    def local(self, v):
        return self.entries.get(tuple(v), _IDENTITY)

    def image(self, v):
        entries = self.entries
        if not entries:
            return tuple(v)
        return tuple(
            entries[v[:k]](a) if v[:k] in entries else a for k, a in enumerate(v)
        )


@dataclass(frozen=True, eq=False)
class ConeUniform(Portrait):
    """Permutation ``assign[q]`` at every vertex of type ``q`` inside the cone at ``at``."""

    base: Dfa
    at: tuple
    assign: Mapping

    def __post_init__(self):
        require_minimal(self.base)
        at = tuple(self.at)
        if run(self.base, at) is None:
            raise WordNotAccepted(f"cone base {at!r} is not accepted", word=at)
        assign = {}
        for q, m in dict(self.assign).items():
            perm = admissible(self.base, q, m).perm
            if not perm.is_identity():
                assign[q] = perm
        object.__setattr__(self, "at", at)
        object.__setattr__(self, "assign", assign)

    def local(self, v):
        v = tuple(v)
        if v[: len(self.at)] != self.at or not self.assign:
            return _IDENTITY
        q = run(self.base, v)
        return self.assign.get(q, _IDENTITY)

    def image(self, v):
        v = tuple(v)
        n = len(self.at)
        if v[:n] != self.at or not self.assign:
            return v
        delta = self.base.delta
        q = run(self.base, self.at)
        out = list(v[:n])
        for a in v[n:]:
            p = self.assign.get(q) if q is not None else None
            out.append(p(a) if p is not None else a)
            e = delta.get((q, a)) if q is not None else None
            q = None if e is None else e.dst
        return tuple(out)


@dataclass(frozen=True, eq=False)
class Product(Portrait):
    """``factors[0] ∘ factors[1] ∘ ... ∘ factors[-1]``."""

    base: Dfa
    factors: tuple

    def local(self, v):
        # local(g∘h, v) = local(g, h(v)) ∘ local(h, v)
        v = tuple(v)
        maps = []
        cur = v
        for f in reversed(self.factors):
            maps.append(f.local(cur))
            cur = f.image(cur)
        q = run(self.base, v)
        letters = self.base.letters(q) if q is not None else ()
        images = []
        for a in letters:
            for m in maps:
                a = m(a)
            images.append(a)
        return Injection(tuple(letters), tuple(images))

    def image(self, v):
        v = tuple(v)
        for f in reversed(self.factors):
            v = f.image(v)
        return v


@dataclass(frozen=True, eq=False)
class ConeRetraction(Portrait):
    """Local maps of ``inner`` inside the cone at ``at``, identity elsewhere."""

    base: Dfa
    inner: Portrait
    at: tuple

    def local(self, v):
        v = tuple(v)
        if v[: len(self.at)] != self.at:
            return _IDENTITY
        return self.inner.local(v)


@dataclass(frozen=True, eq=False)
class LevelRetraction(Portrait):
    """Local maps of ``inner`` at depth >= ``level``, identity above."""

    base: Dfa
    inner: Portrait
    level: int

    def local(self, v):
        if len(v) < self.level:
            return _IDENTITY
        return self.inner.local(tuple(v))


@dataclass(frozen=True, eq=False)
class Inverse(Portrait):
    """Lazy inverse: the local map at v is the inverse of ``inner``'s map at ``inner⁻¹(v)``."""

    base: Dfa
    inner: Portrait

    def _preimage(self, v):
        u = ()
        for a in v:
            u = u + (_invert_at(self.base, self.inner.local(u), u, a),)
        return u

    def local(self, v):
        v = tuple(v)
        u = self._preimage(v)
        q = run(self.base, u)
        letters = self.base.letters(q) if q is not None else ()
        m = as_permutation(self.inner.local(u), letters)
        return m.inverse()

    def image(self, v):
        return self._preimage(tuple(v))


def _invert_at(base, m, u, a):
    for b in m.domain:
        if m(b) == a:
            return b
    if a in m.domain:
        raise NotAPermutation(f"letter {a!r} has no preimage at {u!r}")
    return a


def identity_portrait(base: Dfa) -> FiniteSupport:
    return FiniteSupport(base, {})


def _require_accepted(base: Dfa, v) -> str:
    q = run(base, tuple(v))
    if q is None:
        raise WordNotAccepted(f"word {tuple(v)!r} is not accepted", word=tuple(v))
    return q


def local_permutation(g: Portrait, v: Sequence[str]) -> AdmissiblePermutation:
    v = tuple(v)
    q = _require_accepted(g.base, v)
    return AdmissiblePermutation(q, as_permutation(g.local(v), g.base.letters(q)))


def act_word(g: Portrait, v: Sequence[str]) -> tuple:
    v = tuple(v)
    _require_accepted(g.base, v)
    return g.image(v)


def _same_base(g1: Portrait, g2: Portrait) -> None:
    if g1.base is not g2.base and g1.base != g2.base:
        raise BaseMismatch("portraits live over different automata")


def _is_trivial(g: Portrait) -> bool:
    return (isinstance(g, FiniteSupport) and not g.entries and g.truncated_at is None) or (
        isinstance(g, ConeUniform) and not g.assign
    )


def compose(g1: Portrait, g2: Portrait) -> Portrait:
    """``g1 ∘ g2`` (apply ``g2`` first)."""
    _same_base(g1, g2)
    if _is_trivial(g2):
        return g1
    if _is_trivial(g1):
        return g2
    if isinstance(g1, ConeUniform) and isinstance(g2, ConeUniform) and g1.at == g2.at:
        # automorphisms preserve types, so the state-wise product is exact
        states = set(g1.assign) | set(g2.assign)
        assign = {}
        for q in states:
            letters = g1.base.letters(q)
            a = g1.assign.get(q, Permutation.identity(letters))
            b = g2.assign.get(q, Permutation.identity(letters))
            assign[q] = a * b
        return ConeUniform(g1.base, g1.at, assign)
    factors = []
    for g in (g1, g2):
        factors.extend(g.factors if isinstance(g, Product) else (g,))
    return Product(g1.base, tuple(factors))


def invert(g: Portrait) -> Portrait:
    if _is_trivial(g):
        return g
    if isinstance(g, FiniteSupport):
        entries = {}
        for u, m in g.entries.items():
            if not isinstance(m, Permutation):
                raise NotAPermutation(f"entry at {u!r} is not a permutation")
            entries[g.image(u)] = m.inverse()
        return FiniteSupport(g.base, entries, check=g.check, truncated_at=g.truncated_at)
    if isinstance(g, ConeUniform):
        return ConeUniform(g.base, g.at, {q: p.inverse() for q, p in g.assign.items()})
    if isinstance(g, Product):
        return Product(g.base, tuple(invert(f) for f in reversed(g.factors)))
    if isinstance(g, Inverse):
        return g.inner
    return Inverse(g.base, g)


def basic_automorphism(dfa_min: Dfa, q: str, sigma: Injection) -> ConeUniform:
    """The lift of the edge automorphism ``sigma`` at ``q``: ``sigma`` at every vertex of type ``q``."""
    return basic_at(dfa_min, (), q, sigma)


def basic_at(dfa_min: Dfa, w: Sequence[str], q: str, sigma: Injection) -> ConeUniform:
    """``sigma`` at every vertex of type ``q`` inside the cone at ``w``."""
    require_minimal(dfa_min)
    w = tuple(w)
    top = _require_accepted(dfa_min, w)
    perm = admissible(dfa_min, q, sigma).perm
    if q not in dfa_min.graph.reachable_from(top):
        return ConeUniform(dfa_min, w, {})
    return ConeUniform(dfa_min, w, {q: perm})


def retract(g: Portrait, w: Sequence[str]) -> Portrait:
    """Keep ``g``'s local maps inside the cone at ``w``; identity elsewhere."""
    w = tuple(w)
    _require_accepted(g.base, w)
    if not w:
        return g
    if isinstance(g, FiniteSupport):
        entries = {v: m for v, m in g.entries.items() if v[: len(w)] == w}
        return FiniteSupport(g.base, entries, check=g.check, truncated_at=g.truncated_at)
    if isinstance(g, ConeUniform):
        if w[: len(g.at)] == g.at:
            return ConeUniform(g.base, w, g.assign)
        if g.at[: len(w)] == w:
            return g
        return ConeUniform(g.base, w, {})
    return ConeRetraction(g.base, g, w)


def retract_level(g: Portrait, n: int) -> Portrait:
    """Keep ``g``'s local maps at depth ``>= n``; identity above."""
    if n < 0:
        raise ValueError("level must be non-negative")
    if n == 0:
        return g
    if isinstance(g, FiniteSupport):
        entries = {v: m for v, m in g.entries.items() if len(v) >= n}
        return FiniteSupport(g.base, entries, check=g.check, truncated_at=g.truncated_at)
    if isinstance(g, ConeUniform) and len(g.at) >= n:
        return g
    if isinstance(g, LevelRetraction):
        return LevelRetraction(g.base, g.inner, max(n, g.level))
    return LevelRetraction(g.base, g, n)


def normalize_to_depth(g: Portrait, n: int) -> FiniteSupport:
    """Flatten into explicit local maps at all vertices of length ``<= n``.

    Anything deeper is dropped; ``truncated_at`` marks the result.
    """
    entries = {}
    for k, layer in enumerate(iter_levels(g.base)):
        if k > n:
            break
        for v, q in layer:
            m = as_permutation(g.local(v), g.base.letters(q))
            if not m.is_identity():
                entries[v] = m
    return FiniteSupport(g.base, entries, truncated_at=n)


def equal_to_depth(g: Portrait, h: Portrait, n: int) -> bool:
    """Whether ``g`` and ``h`` agree on every accepted word of length ``<= n``."""
    _same_base(g, h)
    for k, layer in enumerate(iter_levels(g.base)):
        if k > n:
            return True
        for v, _ in layer:
            if g.image(v) != h.image(v):
                return False


# -- orders, finiteness, generators -------------------------------------------


def level_group_order(dfa_min: Dfa, n: int) -> int:
    """Order of the product of the admissible groups over the words of length ``n``."""
    require_minimal(dfa_min)
    orders = _sym_orders(dfa_min)
    return prod(orders[q] ** c for q, c in level_counts(dfa_min, n).items())


def truncated_order(dfa_min: Dfa, n: int) -> int:
    """Order of the automorphism group modulo the rigid stabilizer of level ``n+1``."""
    require_minimal(dfa_min)
    orders = _sym_orders(dfa_min)
    total = 1
    counts = {dfa_min.root: 1}
    for _ in range(n + 1):
        total *= prod(orders[q] ** c for q, c in counts.items())
        nxt: dict = {}
        for q, c in counts.items():
            for e in dfa_min.graph.out_edges(q):
                nxt[e.dst] = nxt.get(e.dst, 0) + c
        counts = nxt
    return total


class Finiteness(NamedTuple):
    finite: bool
    witnesses: list


def is_finite(g: GraphLike) -> Finiteness:
    """The group is finite iff no double edge is recurrent (on or below a cycle)."""
    graph = as_graph(g)
    if not graph.is_connected():
        raise NotConnected("graph has unreachable states")
    if not is_minimal(graph):
        raise NotMinimal("graph is not geometrically minimal")
    on_cycle = {
        q for q in graph.states if any(q in graph.reachable_from(e.dst) for e in graph.out_edges(q))
    }
    below_cycle = set()
    for q in on_cycle:
        below_cycle |= graph.reachable_from(q)
    witnesses = []
    for q in graph.states:
        if q not in below_cycle:
            continue
        out = graph.out_edges(q)
        for i, e1 in enumerate(out):
            for e2 in out[i + 1 :]:
                if e1.dst == e2.dst:
                    witnesses.append((e1.id, e2.id))
    return Finiteness(not witnesses, witnesses)


class Generator(NamedTuple):
    word: tuple
    state: str
    perm: Permutation


def enumerate_generators(dfa_min: Dfa, max_len: int) -> list:
    """Triples ``(w, q, sigma)`` with ``|w| <= max_len``, ``q`` reachable from the
    type of ``w`` and ``sigma`` a non-identity admissible permutation at ``q``."""
    require_minimal(dfa_min)
    groups = {q: SymGroup(q, blocks_at(dfa_min, q)) for q in dfa_min.states}
    nontrivial = {q: [p for p in grp.elements() if not p.is_identity()] for q, grp in groups.items()}
    out = []
    for k, layer in enumerate(iter_levels(dfa_min)):
        if k > max_len:
            break
        for w, top in layer:
            for q in sorted(dfa_min.graph.reachable_from(top)):
                out.extend(Generator(w, q, p) for p in nontrivial[q])
    return out


# -- portraits over arbitrary DFAs --------------------------------------------


@dataclass(frozen=True, eq=False)
class GeneralPortrait:
    """Finitely many local injections over any valid DFA; identity elsewhere."""

    dfa: Dfa
    local: Mapping

    def __post_init__(self):
        local = {}
        for v, m in dict(self.local).items():
            v = tuple(v)
            q = _require_accepted(self.dfa, v)
            letters = self.dfa.letters(q)
            if not set(m.domain) <= set(letters):
                raise NotAdmissible(f"map at {v!r} is defined outside the out-letters", word=v)
            local[v] = m.restrict(letters)
        object.__setattr__(self, "local", local)

    def at(self, v: tuple) -> Injection:
        return self.local.get(v, _IDENTITY)

    def image(self, v: Sequence[str]) -> tuple:
        v = tuple(v)
        return tuple(self.at(v[:k])(a) for k, a in enumerate(v))


class PortraitCheck(NamedTuple):
    ok: bool
    vertex: Optional[tuple]

    def __bool__(self):
        return self.ok


def check_general_portrait(gp: GeneralPortrait, depth: int) -> PortraitCheck:
    """Level-by-level check that the portrait maps the language into itself.

    At every vertex ``v`` shorter than ``depth`` the local map must send the
    out-letters of ``v`` injectively into the out-letters of the image of ``v``.
    Returns the first offending vertex (in level order) on failure.
    """
    dfa = gp.dfa
    delta = dfa.delta
    layer = [((), dfa.root, dfa.root)]
    for _ in range(depth):
        nxt = []
        for v, q, image_q in layer:
            m = gp.at(v)
            letters = dfa.letters(q)
            images = [m(a) for a in letters]
            if len(set(images)) != len(images) or not set(images) <= set(dfa.letters(image_q)):
                return PortraitCheck(False, v)
            for a, b in zip(letters, images):
                nxt.append((v + (a,), delta[q, a].dst, delta[image_q, b].dst))
        layer = nxt
    return PortraitCheck(True, None)
