"""Action of tree automorphisms on the language of a non-minimal DFA.

The covering onto the minimal quotient groups the original edges into fibers;
the fibers become the letters of the quotient DFA. Words are pushed down along
the covering, acted on by a portrait over the quotient, and lifted back by
unique path lifting.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

from .automorphism import GeneralPortrait, Injection, Portrait
from .covering import GraphMorphism
from .errors import BaseMismatch, WordNotAccepted
from .graph import Dfa, iter_levels, reachable_closure, run, run_path
from .minimization import minimal_quotient


@dataclass(frozen=True, eq=False)
class QuotientAlphabet:
    letters: tuple
    fiber_of: Mapping  # original edge id -> fiber name
    members: Mapping  # fiber name -> ((src, label, dst), ...)


@dataclass(frozen=True, eq=False)
class MinimizedLabelled:
    original: Dfa
    quotient_dfa: Dfa
    covering: GraphMorphism
    qalpha: QuotientAlphabet
    reduced: bool = False

    @cached_property
    def _member_at(self) -> dict:
        # (fiber, original state) -> original edge
        out = {}
        for e in self.original.graph.edges:
            out[self.qalpha.fiber_of[e.id], e.src] = e
        return out


def geometric_minimization(dfa: Dfa) -> MinimizedLabelled:
    """Minimal covering quotient of ``dfa`` labelled by the fibers of the covering.

    Fibers over quotient edges leaving the root class are named ``a1, a2, ...``,
    the rest ``b1, b2, ...``, both in quotient edge order.
    """
    result = minimal_quotient(dfa.graph)
    original = dfa
    if result.reduced:
        original = reachable_closure(dfa, dfa.root)
    quotient = result.quotient
    edge_map = result.projection.edge_map

    names = {}
    counters = {"a": 0, "b": 0}
    for e in quotient.edges:
        kind = "a" if e.src == quotient.root else "b"
        counters[kind] += 1
        names[e.id] = f"{kind}{counters[kind]}"

    fiber_of = {eid: names[qid] for eid, qid in edge_map.items()}
    members: dict = {names[e.id]: [] for e in quotient.edges}
    for e in original.graph.edges:
        members[fiber_of[e.id]].append(original.triple(e.id))
    members = {k: tuple(sorted(v)) for k, v in members.items()}
    letters = tuple(names[e.id] for e in quotient.edges)
    qalpha = QuotientAlphabet(letters, fiber_of, members)
    quotient_dfa = Dfa(quotient, letters, letters)
    return MinimizedLabelled(original, quotient_dfa, result.projection, qalpha, result.reduced)


def push_word(ml: MinimizedLabelled, w: Sequence[str]) -> tuple:
    """Fiber word of the image of ``w``'s path under the covering."""
    path = run_path(ml.original, tuple(w))
    if path is None:
        raise WordNotAccepted(f"{tuple(w)!r} is not accepted by the original automaton", word=tuple(w))
    return tuple(ml.qalpha.fiber_of[e.id] for e in path)


def lift_word(ml: MinimizedLabelled, w: Sequence[str]) -> tuple:
    """Original word whose path lifts the fiber word ``w`` from the root."""
    w = tuple(w)
    if run(ml.quotient_dfa, w) is None:
        raise WordNotAccepted(f"{w!r} is not accepted by the quotient automaton", word=w)
    member_at = ml._member_at
    q = ml.original.root
    out = []
    for letter in w:
        e = member_at.get((letter, q))
        # unique by path lifting along a covering
        assert e is not None, f"fiber {letter} has no member leaving {q}"
        out.append(ml.original.label[e.id])
        q = e.dst
    return tuple(out)


class ActionTrace(NamedTuple):
    pushed: tuple
    acted: tuple
    lifted: tuple


def act_trace(ml: MinimizedLabelled, g: Portrait, w: Sequence[str]) -> ActionTrace:
    if g.base is not ml.quotient_dfa and g.base != ml.quotient_dfa:
        raise BaseMismatch("portrait is not over this geometric minimization")
    pushed = push_word(ml, w)
    acted = g.image(pushed)
    return ActionTrace(pushed, acted, lift_word(ml, acted))


def act_on_original(ml: MinimizedLabelled, g: Portrait, w: Sequence[str]) -> tuple:
    """Image of ``w`` under the automorphism with portrait ``g`` over the quotient."""
    return act_trace(ml, g, w).lifted


def pullback_portrait(ml: MinimizedLabelled, g: Portrait, depth: int) -> GeneralPortrait:
    """Local maps of ``g`` transported to the original labelling, on vertices shorter than ``depth``."""
    local = {}
    for k, layer in enumerate(iter_levels(ml.original)):
        if k >= depth:
            break
        for v, q in layer:
            letters = ml.original.letters(q)
            images = tuple(act_on_original(ml, g, v + (a,))[-1] for a in letters)
            m = Injection(letters, images)
            if not m.is_identity():
                local[v] = m
    return GeneralPortrait(ml.original, local)
