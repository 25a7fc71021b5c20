"""Command-line front end: ``conetype <command> --automaton FILE [options]``.

Exit status 0 on success (JSON on stdout, or text with ``--plain``), 1 on
domain or I/O errors (JSON error object on stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import automorphism as aut
from . import serialize as ser
from .errors import ConetypeError, NotMinimal
from .graph import level
from .language import act_trace, geometric_minimization, lift_word, pullback_portrait, push_word
from .minimization import (
    classical_minimize,
    cone_equivalent,
    is_minimal,
    minimal_quotient,
    moore_bound,
)

COMMANDS = (
    "validate",
    "minimize",
    "classical-minimize",
    "is-minimal",
    "is-finite",
    "order",
    "levels",
    "generators",
    "verify-portrait",
    "act",
    "push",
    "lift",
    "cone-eq",
)

# options each command needs beyond --automaton
REQUIRED = {
    "order": ("level",),
    "levels": ("level",),
    "generators": ("max_len",),
    "verify-portrait": ("portrait",),
    "act": ("portrait", "word"),
    "push": ("word",),
    "lift": ("word",),
    "cone-eq": ("states",),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conetype", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--automaton", required=True, metavar="PATH")
        p.add_argument("--plain", action="store_true", help="plain text instead of JSON")
        if name in ("verify-portrait", "act"):
            p.add_argument("--portrait", metavar="PATH")
        if name in ("act", "push", "lift"):
            p.add_argument("--word", metavar="STRING")
        if name in ("order", "levels"):
            p.add_argument("--level", type=_natural, metavar="N")
        if name in ("verify-portrait", "cone-eq"):
            p.add_argument("--depth", type=_natural, metavar="N")
        if name == "generators":
            p.add_argument("--max-len", type=_natural, metavar="N")
        if name in ("order", "generators", "is-finite"):
            p.add_argument("--strict", action="store_true", help="fail instead of auto-minimizing")
        if name == "act":
            p.add_argument("--trace", action="store_true")
        if name == "cone-eq":
            p.add_argument("--states", nargs=2, metavar=("Q1", "Q2"))
    return parser


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _minimal_dfa(dfa, strict):
    """``(dfa to use, geometric minimization or None)``."""
    if dfa.graph.is_connected() and is_minimal(dfa):
        return dfa, None
    if strict:
        raise NotMinimal("automaton is not geometrically minimal (--strict)")
    ml = geometric_minimization(dfa)
    return ml.quotient_dfa, ml


def _minimized_info(ml):
    if ml is None:
        return {"minimized": False}
    return {"minimized": True, "quotient": ser.dfa_to_json(ml.quotient_dfa)}


def run_command(args) -> tuple:
    """Execute one command; returns ``(json_payload, plain_text)``."""
    dfa = ser.load_automaton(args.automaton)
    cmd = args.command

    if cmd == "validate":
        payload = {"valid": True, "states": len(dfa.states), "edges": len(dfa.graph.edges)}
        return payload, "valid"

    if cmd == "minimize":
        result = minimal_quotient(dfa.graph)
        payload = {
            "reduced": result.reduced,
            "quotient": ser.graph_to_json(result.quotient),
            "morphism": ser.morphism_to_json(result.projection),
            "partition": result.classes.to_json(),
        }
        plain = "\n".join(" ".join(b) for b in result.classes.blocks)
        return payload, plain

    if cmd == "classical-minimize":
        small = classical_minimize(dfa)
        return ser.dfa_to_json(small), "\n".join(small.states)

    if cmd == "is-minimal":
        flag = is_minimal(dfa)
        return {"minimal": flag}, str(flag).lower()

    if cmd == "is-finite":
        base, ml = _minimal_dfa(dfa, args.strict)
        report = aut.is_finite(base)
        payload = {"finite": report.finite, "witnesses": [list(w) for w in report.witnesses]}
        payload.update(_minimized_info(ml))
        return payload, "finite" if report.finite else "infinite"

    if cmd == "order":
        base, ml = _minimal_dfa(dfa, args.strict)
        total = aut.truncated_order(base, args.level)
        payload = {
            "level": args.level,
            "level_order": str(aut.level_group_order(base, args.level)),
            "truncated_order": str(total),
        }
        payload.update(_minimized_info(ml))
        return payload, str(total)

    if cmd == "levels":
        words = [ser.format_word(w) for w in level(dfa, args.level)]
        return {"level": args.level, "words": words}, "\n".join(words)

    if cmd == "generators":
        base, ml = _minimal_dfa(dfa, args.strict)
        gens = aut.enumerate_generators(base, args.max_len)
        items = [
            {"word": ser.format_word(g.word), "state": g.state, "perm": ser.perm_to_json(g.perm)}
            for g in gens
        ]
        payload = {"count": len(items), "generators": items}
        payload.update(_minimized_info(ml))
        plain = "\n".join(f"{i['word'] or '-'}\t{i['state']}\t{json.dumps(i['perm'])}" for i in items)
        return payload, plain

    if cmd == "verify-portrait":
        obj = ser.load_json(args.portrait)
        depth = 6 if args.depth is None else args.depth
        if isinstance(obj, dict) and obj.get("kind") == "general":
            gp = ser.general_portrait_from_json(obj, dfa)
        else:
            ml = geometric_minimization(dfa)
            g = ser.portrait_from_json(obj, ml.quotient_dfa)
            gp = pullback_portrait(ml, g, depth)
        check = aut.check_general_portrait(gp, depth)
        vertex = None if check.vertex is None else ser.format_word(check.vertex)
        return {"ok": check.ok, "depth": depth, "vertex": vertex}, "ok" if check.ok else f"violation at {vertex!r}"

    if cmd in ("act", "push", "lift"):
        ml = geometric_minimization(dfa)
        if cmd == "push":
            out = push_word(ml, ser.parse_word(args.word, dfa.alphabet))
            return {"word": ser.format_word(out)}, ser.format_word(out)
        if cmd == "lift":
            out = lift_word(ml, ser.parse_word(args.word, ml.quotient_dfa.alphabet))
            return {"word": ser.format_word(out)}, ser.format_word(out)
        g = ser.portrait_from_json(ser.load_json(args.portrait), ml.quotient_dfa)
        w = ser.parse_word(args.word, dfa.alphabet)
        trace = act_trace(ml, g, w)
        result = ser.format_word(trace.lifted)
        if not args.trace:
            return {"word": result}, result
        steps = [ser.format_word(x) for x in (w, trace.pushed, trace.acted)]
        payload = {"push": steps[1], "image": steps[2], "word": result}
        plain = "\n".join(
            [
                f"Step 1: P({steps[0]}) = {steps[1]}",
                f"Step 2: g({steps[1]}) = {steps[2]}",
                f"Step 3: P^-1({steps[2]}) = {result}",
            ]
        )
        return payload, plain

    if cmd == "cone-eq":
        q1, q2 = args.states
        depth = moore_bound(dfa) if args.depth is None else args.depth
        flag = cone_equivalent(dfa, q1, q2, depth)
        return {"equivalent": flag, "depth": depth}, str(flag).lower()

    raise AssertionError(cmd)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for opt in REQUIRED.get(args.command, ()):
        if getattr(args, opt) is None:
            parser.error(f"{args.command} requires --{opt.replace('_', '-')}")
    try:
        payload, plain = run_command(args)
    except ConetypeError as exc:
        print(json.dumps(exc.to_json(), ensure_ascii=False), file=sys.stderr)
        return 1
    except OSError as exc:
        err = {"error": "IOError", "message": f"{exc.strerror or exc}: {exc.filename}"}
        print(json.dumps(err, ensure_ascii=False), file=sys.stderr)
        return 1
    print(plain if args.plain else ser.dumps(payload))
    return 0


if __name__ == "__main__":
    sys.exit(main())
