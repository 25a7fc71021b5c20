"""Random portraits for property tests, driven by an explicit ``random.Random``."""

from __future__ import annotations

import random

from conetype import automorphism as aut
from conetype.graph import Dfa, iter_levels


def vertices_upto(dfa: Dfa, depth: int) -> list:
    """``[(word, state)]`` for every vertex with ``|word| <= depth``."""
    out = []
    for k, layer in enumerate(iter_levels(dfa)):
        if k > depth:
            break
        out.extend(layer)
    return out


def random_word(rng: random.Random, dfa: Dfa, length: int) -> tuple:
    """A uniformly chosen path of up to ``length`` letters (shorter at sinks)."""
    w = []
    q = dfa.root
    for _ in range(length):
        letters = dfa.letters(q)
        if not letters:
            break
        a = rng.choice(letters)
        w.append(a)
        q = dfa.step(q, a)
    return tuple(w)


def random_admissible(rng: random.Random, dfa: Dfa, q: str) -> aut.Permutation:
    """A random element of Sym(q): shuffle inside each block."""
    images = {}
    for _, block in aut.blocks_at(dfa, q):
        shuffled = list(block)
        rng.shuffle(shuffled)
        images.update(zip(block, shuffled))
    letters = dfa.letters(q)
    return aut.Permutation(letters, tuple(images[a] for a in letters))


def random_finite(rng: random.Random, dfa: Dfa, max_depth: int = 4, size: int = 4) -> aut.FiniteSupport:
    pool = vertices_upto(dfa, max_depth)
    entries = {}
    for v, q in rng.sample(pool, min(size, len(pool))):
        entries[v] = random_admissible(rng, dfa, q)
    return aut.FiniteSupport(dfa, entries)


def random_cone(rng: random.Random, dfa: Dfa, max_depth: int = 2) -> aut.ConeUniform:
    w = random_word(rng, dfa, rng.randint(0, max_depth))
    states = sorted(_reach(dfa, w))
    assign = {q: random_admissible(rng, dfa, q) for q in states if rng.random() < 0.7}
    return aut.ConeUniform(dfa, w, assign)


def _reach(dfa: Dfa, w: tuple) -> set:
    q = dfa.root
    for a in w:
        q = dfa.step(q, a)
    return dfa.graph.reachable_from(q)


def random_portrait(rng: random.Random, dfa: Dfa, depth: int = 2) -> aut.Portrait:
    """Finite, cone, basic, retracted, inverted and composed portraits, mixed."""
    kind = rng.randrange(6 if depth > 0 else 3)
    if kind == 0:
        return random_finite(rng, dfa)
    if kind == 1:
        return random_cone(rng, dfa)
    if kind == 2:
        w = random_word(rng, dfa, rng.randint(0, 2))
        q = rng.choice(dfa.states)
        return aut.basic_at(dfa, w, q, random_admissible(rng, dfa, q))
    inner = random_portrait(rng, dfa, depth - 1)
    if kind == 3:
        return aut.compose(inner, random_portrait(rng, dfa, depth - 1))
    if kind == 4:
        return aut.invert(inner)
    if rng.random() < 0.5:
        return aut.retract(inner, random_word(rng, dfa, rng.randint(0, 2)))
    return aut.retract_level(inner, rng.randint(0, 3))
