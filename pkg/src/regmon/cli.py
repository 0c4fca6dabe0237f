"""Command-line front end: ``regmon <command> ...``.

Exit codes: 0 success or accept, 1 reject or nothing found, 2 usage or
validation error (one ``error:`` line on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from . import serialize as S
from .automaton import (NondetAutomaton, automaton_preimage, automaton_union, enumerate_members,
                        intersect, nd_accepts)
from .determinize import Convex, DetAutomaton, check_convex, det_accepts, determinize
from .diagram import Diagram, dataflow_dag, normalize
from .encodings import nfa_to_monoidal, treeaut_to_monoidal, tree_to_diagram, word_to_diagram
from .errors import NotMergeable, RegmonError
from .grammar import Grammar, automaton_to_grammar, grammar_image, grammar_to_automaton, grammar_union
from .restriction import (NotFoundWithinBounds, causal_closure_witness, embed, merge_histories,
                          prefix_histories)
from .syntactic import NoneFound, delta_partition, distinguish, syntactic_automaton

DEFAULT_BUDGET = 200_000


class UsageError(RegmonError):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return S.loads(text)
    except json.JSONDecodeError as e:
        raise S.DocumentError(f"{path} is not JSON: {e.msg} at line {e.lineno}") from None


def _load_kind(path: str, *types):
    x = _load(path)
    if not isinstance(x, types):
        names = " or ".join(t.__name__ for t in types)
        raise UsageError(f"{path} holds a {type(x).__name__}, expected {names}")
    return x


def _automaton(path: str) -> NondetAutomaton | DetAutomaton:
    x = _load_kind(path, NondetAutomaton, DetAutomaton, Grammar)
    return grammar_to_automaton(x) if isinstance(x, Grammar) else x


def _nondet(path: str) -> NondetAutomaton:
    from .determinize import det_to_nondet
    a = _automaton(path)
    return det_to_nondet(a) if isinstance(a, DetAutomaton) else a


def _emit(out, x) -> None:
    out.write(S.dumps(x) + "\n")


def _line(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))


def _report_json(r) -> dict:
    if isinstance(r, Convex):
        entries = []
        for g in sorted(r.witness):
            for ins, comps in sorted(r.witness[g].items(), key=lambda kv: _line(S._word(kv[0]))):
                entries.append({"gen": g, "inputs": [S.state_to_json(s) for s in ins],
                                "components": None if comps is None else [S.state_to_json(s) for s in comps]})
        return {"convex": True, "boxes": entries}
    return {"convex": False, "generator": r.generator,
            "inputs": [S.state_to_json(s) for s in r.inputs],
            "missing": [S.state_to_json(q) for q in r.missing]}


# -- commands ---------------------------------------------------------------

def cmd_validate(args, out) -> int:
    x = _load(args.document)
    out.write(f"ok {S.to_document(x)['kind']}\n")
    return 0


def cmd_member(args, out) -> int:
    a = _automaton(args.automaton)
    d = _load_kind(args.diagram, Diagram)
    if args.mode == "det":
        det = a if isinstance(a, DetAutomaton) else determinize(a)
        ok = det_accepts(det, d)
    else:
        ok = det_accepts(a, d) if isinstance(a, DetAutomaton) else nd_accepts(a, d)
    out.write("accept\n" if ok else "reject\n")
    return 0 if ok else 1


def cmd_enumerate(args, out) -> int:
    a = _nondet(args.automaton)
    found = list(enumerate_members(a, args.max_gens, args.max_width, connected=args.connected))
    if args.count:
        out.write(f"{len(found)}\n")
    else:
        for d in found:
            out.write(_line(S.diagram_to_json(d)) + "\n")
    return 0 if found else 1


def cmd_convert(args, out) -> int:
    x = _load_kind(args.document, Grammar, NondetAutomaton, DetAutomaton)
    if isinstance(x, Grammar):
        _emit(out, grammar_to_automaton(x))
    else:
        _emit(out, automaton_to_grammar(x if isinstance(x, NondetAutomaton) else _nondet(args.document)))
    return 0


def cmd_union(args, out) -> int:
    x, y = _load(args.first), _load(args.second)
    if isinstance(x, Grammar) and isinstance(y, Grammar):
        _emit(out, grammar_union(x, y))
    else:
        _emit(out, automaton_union(_nondet(args.first), _nondet(args.second)))
    return 0


def cmd_intersect(args, out) -> int:
    _emit(out, intersect(_nondet(args.first), _nondet(args.second)))
    return 0


def cmd_image(args, out) -> int:
    g = _load_kind(args.grammar, Grammar, NondetAutomaton)
    if isinstance(g, NondetAutomaton):
        g = automaton_to_grammar(g)
    _emit(out, grammar_image(g, _load_kind(args.morphism, S.AlphabetMorphism)))
    return 0


def cmd_preimage(args, out) -> int:
    _emit(out, automaton_preimage(_nondet(args.automaton), _load_kind(args.morphism, S.AlphabetMorphism)))
    return 0


def cmd_determinize(args, out) -> int:
    a = _nondet(args.automaton)
    report = check_convex(a, reachable_only=args.reachable_only)
    if not report.convex:
        out.write(_line(_report_json(report)) + "\n")
        return 1
    _emit(out, determinize(a, report))
    return 0


def cmd_convex_check(args, out) -> int:
    report = check_convex(_nondet(args.automaton), reachable_only=args.reachable_only)
    out.write(_line(_report_json(report)) + "\n")
    return 0 if report.convex else 1


def cmd_histories(args, out) -> int:
    d = _load_kind(args.diagram, Diagram)
    for h in prefix_histories(d):
        out.write(_line(S.diagram_to_json(h.rest, "rest-diagram")) + "\n")
    return 0


def cmd_merge(args, out) -> int:
    hs = [embed(_load_kind(p, Diagram)) for p in args.histories]
    target = _load_kind(args.target, Diagram) if args.target else None
    try:
        res = merge_histories(hs, target=target, budget=args.search_budget)
    except NotMergeable as e:
        out.write(f"not-mergeable: {e}\n")
        return 1
    _emit(out, res.diagram)
    return 0


def cmd_closure_witness(args, out) -> int:
    a = _nondet(args.automaton)
    d = _load_kind(args.diagram, Diagram)
    w = causal_closure_witness(a, d, max_generators=args.max_gens, tuple_size=args.tuple_size,
                               max_width=args.max_width, budget=args.search_budget)
    if isinstance(w, NotFoundWithinBounds):
        out.write(f"not-found tuples_tried={w.tuples_tried}\n")
        return 1
    _emit(out, w)
    return 0


def cmd_congruence(args, out) -> int:
    a = _nondet(args.automaton)
    if args.distinguish:
        d1, d2 = (_load_kind(p, Diagram) for p in args.distinguish)
        c = distinguish(a, d1, d2, args.max_gens, args.max_width)
        if isinstance(c, NoneFound):
            out.write(f"not-found contexts_tried={c.contexts_tried}\n")
            return 1
        out.write(_line({"left": S.diagram_to_json(c.left), "right": S.diagram_to_json(c.right),
                         "pad_left": c.pad_left, "pad_right": c.pad_right,
                         "capacity": list(c.capacity)}) + "\n")
        return 0
    parts = delta_partition(a, args.arity, args.coarity, args.max_gens, args.max_width)
    rows = []
    for rel, ds in parts:
        pairs = [[S._word(w), S._word(v)] for w, v in rel.sorted_pairs()]
        rows.append({"relation": pairs, "diagrams": [S.diagram_to_json(d)["slices"] for d in ds]})
    rows.sort(key=lambda r: json.dumps(r["relation"], ensure_ascii=False))
    out.write(_line({"arity": args.arity, "coarity": args.coarity, "classes": rows}) + "\n")
    return 0


def cmd_syntactic_build(args, out) -> int:
    p = _load_kind(args.pro, S.FinitePro)
    _emit(out, syntactic_automaton(p, verify=not args.no_verify))
    return 0


def cmd_encode_nfa(args, out) -> int:
    n = _load_kind(args.nfa, S.ClassicalNFA)
    alph, a = nfa_to_monoidal(n)
    if args.word is not None:
        _emit(out, word_to_diagram(json.loads(args.word), alph))
    else:
        _emit(out, a)
    return 0


def cmd_encode_tree(args, out) -> int:
    t = _load_kind(args.tree_automaton, S.TreeAutomaton)
    alph, a = treeaut_to_monoidal(t)
    if args.tree is not None:
        _emit(out, tree_to_diagram(S.tree_from_json(json.loads(args.tree)), alph, t.direction))
    else:
        _emit(out, a)
    return 0


def cmd_corpus(args, out) -> int:
    if args.name is None:
        out.write("\n".join(corpus.NAMES) + "\n")
        return 0
    e = corpus.build(args.name)
    part = {"grammar": e.grammar, "automaton": e.automaton, "det": e.det,
            "presentation": e.presentation, "alphabet": e.alphabet}[args.part]
    if part is None:
        raise UsageError(f"corpus entry {args.name!r} has no {args.part}")
    _emit(out, part)
    return 0


def _dot_quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_diagram(d: Diagram) -> str:
    dag = dataflow_dag(normalize(d))
    lines = ["digraph diagram {", "  rankdir=TB;", "  node [fontname=Helvetica];"]
    for k in range(d.arity):
        lines.append(f"  in{k} [shape=point, xlabel={_dot_quote(k)}];")
    for i, o in enumerate(dag.occurrences):
        lines.append(f"  n{i} [shape=box, label={_dot_quote(o.gen)}];")
    for k in range(d.coarity):
        lines.append(f"  out{k} [shape=point, xlabel={_dot_quote(k)}];")
    src = {}
    for k, w in enumerate(dag.inputs):
        src[w] = f"in{k}"
    for i, o in enumerate(dag.occurrences):
        for w in o.outputs:
            src[w] = f"n{i}"
    for i, o in enumerate(dag.occurrences):
        for p, w in enumerate(o.inputs):
            lines.append(f"  {src[w]} -> n{i} [headlabel={_dot_quote(p)}];")
    for k, w in enumerate(dag.outputs):
        lines.append(f"  {src[w]} -> out{k};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_grammar(g: Grammar) -> str:
    lines = ["digraph grammar {", "  node [fontname=Helvetica];"]
    names = {q: f"s{i}" for i, q in enumerate(g.states)}
    for q, n in names.items():
        lines.append(f"  {n} [shape=ellipse, label={_dot_quote(S.state_to_json(q))}];")
    for i, e in enumerate(g.edges):
        lines.append(f"  e{i} [shape=box, label={_dot_quote(g.labelling[e.name])}, tooltip={_dot_quote(e.name)}];")
        for p, q in enumerate(e.dom):
            lines.append(f"  {names[q]} -> e{i} [headlabel={_dot_quote(p)}];")
        for p, q in enumerate(e.cod):
            lines.append(f"  e{i} -> {names[q]} [taillabel={_dot_quote(p)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_render(args, out) -> int:
    x = _load_kind(args.document, Diagram, Grammar, NondetAutomaton)
    if isinstance(x, Diagram):
        text = render_diagram(x)
    else:
        text = render_grammar(x if isinstance(x, Grammar) else automaton_to_grammar(x))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


# -- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="regmon", description="Regular monoidal languages toolkit.")
    p.add_argument("--search-budget", type=int, default=DEFAULT_BUDGET,
                   help="node budget for restriction-module fold searches")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "parse and validate a document")
    sp.add_argument("document")

    sp = add("member", cmd_member, "test acceptance of a scalar diagram")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--mode", choices=["nd", "det"], default="nd")

    sp = add("enumerate", cmd_enumerate, "list accepted scalars within bounds")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--max-gens", type=int, required=True)
    sp.add_argument("--max-width", type=int, required=True)
    sp.add_argument("--connected", action="store_true")
    sp.add_argument("--count", action="store_true", help="print only the number of members")

    sp = add("convert", cmd_convert, "grammar to automaton or back")
    sp.add_argument("document")

    for name, fn in (("union", cmd_union), ("intersect", cmd_intersect)):
        sp = add(name, fn, f"{name} of two languages")
        sp.add_argument("first")
        sp.add_argument("second")

    sp = add("image", cmd_image, "grammar image along an alphabet morphism")
    sp.add_argument("--grammar", required=True)
    sp.add_argument("--morphism", required=True)

    sp = add("preimage", cmd_preimage, "automaton preimage along an alphabet morphism")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--morphism", required=True)

    for name, fn in (("determinize", cmd_determinize), ("convex-check", cmd_convex_check)):
        sp = add(name, fn, "subset construction" if name == "determinize" else "box test")
        sp.add_argument("--automaton", required=True)
        sp.add_argument("--reachable-only", action="store_true")

    sp = add("histories", cmd_histories, "prefix histories of a scalar diagram")
    sp.add_argument("--diagram", required=True)

    sp = add("merge", cmd_merge, "fold a tuple of histories into a diagram")
    sp.add_argument("histories", nargs="+")
    sp.add_argument("--target")

    sp = add("closure-witness", cmd_closure_witness, "search member histories merging to a diagram")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--max-gens", type=int, default=6)
    sp.add_argument("--max-width", type=int, default=6)
    sp.add_argument("--tuple-size", type=int, default=2)

    sp = add("congruence", cmd_congruence, "partition a hom-set or find a separating context")
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--arity", type=int, default=0)
    sp.add_argument("--coarity", type=int, default=0)
    sp.add_argument("--max-gens", type=int, default=4)
    sp.add_argument("--max-width", type=int, default=4)
    sp.add_argument("--distinguish", nargs=2, metavar="DIAGRAM")

    sp = add("syntactic-build", cmd_syntactic_build, "automaton from a finite restriction pro")
    sp.add_argument("--pro", required=True)
    sp.add_argument("--no-verify", action="store_true")

    sp = add("encode-nfa", cmd_encode_nfa, "word automaton as a monoidal automaton")
    sp.add_argument("--nfa", required=True)
    sp.add_argument("--word", help="JSON array of letters; emit its diagram instead")

    sp = add("encode-tree", cmd_encode_tree, "tree automaton as a monoidal automaton")
    sp.add_argument("--tree-automaton", required=True)
    sp.add_argument("--tree", help="nested JSON array; emit its diagram instead")

    sp = add("corpus", cmd_corpus, "print a corpus entry (no name lists entries)")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--part", choices=["grammar", "automaton", "det", "presentation", "alphabet"],
                    default="automaton")

    sp = add("render", cmd_render, "DOT drawing of a diagram or grammar")
    sp.add_argument("document")
    sp.add_argument("--out")
    return p


def run_command(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args, out)
    except (RegmonError, ValueError) as e:
        msg = " ".join(str(e).split())
        err.write(f"error: {type(e).__name__}: {msg}\n")
        return 2


def main() -> None:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
