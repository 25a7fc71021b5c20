"""JSON formats for automata, morphisms, permutations and portraits."""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterable, Sequence

from . import automorphism as aut
from .covering import GraphMorphism
from .errors import FormatError, LetterNotInAlphabet
from .graph import Dfa, Edge, Multigraph, canonical_labelling, validate


# -- words ------------------------------------------------------------------


def parse_word(text, alphabet: Iterable[str]) -> tuple:
    """Split ``text`` into letters.

    Whitespace or commas separate letters when present; otherwise the text is
    tokenized greedily by the longest matching letter.
    """
    if isinstance(text, (list, tuple)):
        return tuple(text)
    text = text.strip()
    if not text:
        return ()
    if re.search(r"[\s,]", text):
        return tuple(t for t in re.split(r"[\s,]+", text) if t)
    letters = sorted(set(alphabet), key=len, reverse=True)
    out = []
    i = 0
    while i < len(text):
        for a in letters:
            if a and text.startswith(a, i):
                out.append(a)
                i += len(a)
                break
        else:
            raise LetterNotInAlphabet(f"cannot read a letter at {text[i:]!r}", letter=text[i:])
    return tuple(out)


def format_word(w: Sequence[str]) -> str:
    if all(len(a) == 1 for a in w):
        return "".join(w)
    return " ".join(w)


# -- automata ---------------------------------------------------------------


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing field {key!r}")
    return obj[key]


def dfa_from_json(obj) -> Dfa:
    """Load an automaton; unlabelled input gets the canonical labelling."""
    states = _require(obj, "states", "automaton")
    root = _require(obj, "root", "automaton")
    raw = _require(obj, "edges", "automaton")
    edges = []
    labels = []
    for k, e in enumerate(raw):
        edges.append(
            Edge(
                str(e.get("id", f"e{k}")),
                _require(e, "src", f"edge {k}"),
                _require(e, "dst", f"edge {k}"),
            )
        )
        labels.append(e.get("label"))
    graph = Multigraph(tuple(states), root, tuple(edges))
    if all(a is None for a in labels):
        return canonical_labelling(graph)
    if any(a is None for a in labels):
        raise FormatError("either every edge has a label or none does")
    alphabet = obj.get("alphabet", labels)
    dfa = Dfa(graph, tuple(alphabet), tuple(labels))
    validate(dfa)
    return dfa


def dfa_to_json(dfa: Dfa) -> dict:
    return {
        "alphabet": list(dfa.alphabet),
        "states": list(dfa.states),
        "root": dfa.root,
        "edges": [
            {"id": e.id, "src": e.src, "label": a, "dst": e.dst}
            for e, a in zip(dfa.graph.edges, dfa.labels)
        ],
    }


def graph_to_json(g: Multigraph) -> dict:
    """Automaton JSON for an unlabelled graph (canonically labelled)."""
    return dfa_to_json(canonical_labelling(g))


def load_json(path) -> object:
    try:
        with open(Path(path), encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def load_automaton(path) -> Dfa:
    return dfa_from_json(load_json(path))


# -- morphisms --------------------------------------------------------------


def morphism_to_json(m: GraphMorphism) -> dict:
    return {
        "vertex_map": {q: m.vertex_map[q] for q in m.source.states},
        "edge_map": {e.id: m.edge_map[e.id] for e in m.source.edges},
    }


def morphism_from_json(obj, source, target) -> GraphMorphism:
    return GraphMorphism(
        source,
        target,
        dict(_require(obj, "vertex_map", "morphism")),
        dict(_require(obj, "edge_map", "morphism")),
    )


# -- permutations and portraits ---------------------------------------------


def perm_to_json(p: aut.Permutation) -> list:
    return p.cycles()


def perm_from_json(cycles, domain: Sequence[str]) -> aut.Permutation:
    if not isinstance(cycles, list) or not all(isinstance(c, list) for c in cycles):
        raise FormatError("a permutation is a list of cycles, each a list of letters")
    return aut.Permutation.from_cycles(tuple(domain), cycles)


def portrait_to_json(g: aut.Portrait) -> dict:
    if isinstance(g, aut.FiniteSupport):
        out = {
            "kind": "finite",
            "entries": [
                {"vertex": format_word(v), "perm": perm_to_json(m)}
                for v, m in sorted(g.entries.items(), key=lambda kv: (len(kv[0]), kv[0]))
            ],
        }
        if g.truncated_at is not None:
            out["truncated_at"] = g.truncated_at
        return out
    if isinstance(g, aut.ConeUniform):
        return {
            "kind": "cone",
            "base": format_word(g.at),
            "assign": {q: perm_to_json(g.assign[q]) for q in sorted(g.assign)},
        }
    if isinstance(g, aut.Product):
        return {"kind": "product", "factors": [portrait_to_json(f) for f in g.factors]}
    if isinstance(g, aut.ConeRetraction):
        return {"kind": "retract", "base": format_word(g.at), "inner": portrait_to_json(g.inner)}
    if isinstance(g, aut.LevelRetraction):
        return {"kind": "retract_level", "level": g.level, "inner": portrait_to_json(g.inner)}
    if isinstance(g, aut.Inverse):
        return {"kind": "inverse", "inner": portrait_to_json(g.inner)}
    raise TypeError(f"cannot serialize {type(g).__name__}")


def portrait_from_json(obj, base: Dfa) -> aut.Portrait:
    kind = _require(obj, "kind", "portrait")
    word = lambda text: parse_word(text, base.alphabet)  # noqa: E731
    if kind == "finite":
        entries = {}
        for item in _require(obj, "entries", "finite portrait"):
            v = word(_require(item, "vertex", "entry"))
            q = aut._require_accepted(base, v)
            entries[v] = perm_from_json(_require(item, "perm", "entry"), base.letters(q))
        return aut.FiniteSupport(base, entries, truncated_at=obj.get("truncated_at"))
    if kind == "cone":
        assign = {
            q: perm_from_json(cycles, base.letters(q))
            for q, cycles in _require(obj, "assign", "cone portrait").items()
        }
        return aut.ConeUniform(base, word(obj.get("base", "")), assign)
    if kind == "product":
        factors = tuple(portrait_from_json(f, base) for f in _require(obj, "factors", "product"))
        return aut.Product(base, factors)
    if kind == "retract":
        return aut.retract(portrait_from_json(_require(obj, "inner", "retract"), base), word(obj["base"]))
    if kind == "retract_level":
        return aut.retract_level(
            portrait_from_json(_require(obj, "inner", "retract_level"), base),
            int(_require(obj, "level", "retract_level")),
        )
    if kind == "inverse":
        return aut.invert(portrait_from_json(_require(obj, "inner", "inverse"), base))
    raise FormatError(f"unknown portrait kind {kind!r}")


def general_portrait_from_json(obj, dfa: Dfa) -> aut.GeneralPortrait:
    """``{"kind": "general", "entries": [{"vertex": ..., "map": {letter: letter}}]}``.

    An entry may give ``"perm"`` (cycles) instead of ``"map"``.
    """
    local = {}
    for item in _require(obj, "entries", "general portrait"):
        v = parse_word(_require(item, "vertex", "entry"), dfa.alphabet)
        if "map" in item:
            local[v] = aut.Injection.from_mapping(item["map"])
        else:
            q = aut._require_accepted(dfa, v)
            local[v] = perm_from_json(_require(item, "perm", "entry"), dfa.letters(q))
    return aut.GeneralPortrait(dfa, local)


def general_portrait_to_json(gp: aut.GeneralPortrait) -> dict:
    return {
        "kind": "general",
        "entries": [
            {"vertex": format_word(v), "map": dict(m.mapping)}
            for v, m in sorted(gp.local.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ],
    }


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2)
