"""JSON documents for every value the command line reads or writes."""

from __future__ import annotations

import json
from typing import Any

from .automaton import AlphabetMorphism, NondetAutomaton, sort_states, state_key, word_key
from .determinize import DetAutomaton
from .diagram import Alphabet, Diagram
from .encodings import ClassicalNFA, TreeAutomaton
from .errors import RegmonError
from .grammar import Grammar, make_grammar
from .restriction import Fold, Witness, base_alphabet, rest_alphabet
from .syntactic import FinitePro

VERSION = 1


class DocumentError(RegmonError):
    pass


# -- states -----------------------------------------------------------------

def state_to_json(q) -> Any:
    if isinstance(q, frozenset):
        return {"set": [state_to_json(x) for x in sorted(q, key=state_key)]}
    if isinstance(q, tuple):
        return [state_to_json(x) for x in q]
    return q


def state_from_json(v) -> Any:
    if isinstance(v, dict):
        return frozenset(state_from_json(x) for x in v["set"])
    if isinstance(v, list):
        return tuple(state_from_json(x) for x in v)
    return v


def _word(w) -> list:
    return [state_to_json(q) for q in w]


def _unword(v) -> tuple:
    return tuple(state_from_json(q) for q in v)


# -- basic values -----------------------------------------------------------

def alphabet_to_json(a: Alphabet) -> dict:
    return {name: [ar, coar] for name, (ar, coar) in a.items()}


def alphabet_from_json(v: dict) -> Alphabet:
    return Alphabet({k: (int(x[0]), int(x[1])) for k, x in v.items()})


def diagram_to_json(d: Diagram, kind: str = "diagram") -> dict:
    return {
        "kind": kind, "version": VERSION,
        "alphabet": alphabet_to_json(base_alphabet(d.alphabet) if kind == "rest-diagram" else d.alphabet),
        "arity": d.arity,
        "slices": [[{"wire": None} if it is None else {"gen": it} for it in sl] for sl in d.slices],
    }


def diagram_from_json(v: dict, alphabet: Alphabet | None = None) -> Diagram:
    alph = alphabet_from_json(v["alphabet"]) if "alphabet" in v else alphabet
    if alph is None:
        raise DocumentError("diagram document has no alphabet")
    if v.get("kind") == "rest-diagram":
        alph = rest_alphabet(alph)
    slices = []
    for sl in v["slices"]:
        items = []
        for it in sl:
            if "gen" in it:
                items.append(it["gen"])
            elif "wire" in it:
                items.append(None)
            else:
                raise DocumentError(f"slice item {it!r} is neither a wire nor a generator")
        slices.append(tuple(items))
    return Diagram(alph, int(v["arity"]), tuple(slices))


def automaton_to_json(a: NondetAutomaton) -> dict:
    trans = {}
    for g in a.alphabet:
        pairs = sorted(a.transitions[g], key=lambda p: (word_key(p[0]), word_key(p[1])))
        trans[g] = [[_word(w), _word(v)] for w, v in pairs]
    return {"kind": "automaton", "version": VERSION, "alphabet": alphabet_to_json(a.alphabet),
            "states": [state_to_json(q) for q in a.states], "transitions": trans}


def automaton_from_json(v: dict) -> NondetAutomaton:
    alph = alphabet_from_json(v["alphabet"])
    trans = {g: [(_unword(p[0]), _unword(p[1])) for p in pairs] for g, pairs in v["transitions"].items()}
    return NondetAutomaton(alph, [state_from_json(q) for q in v["states"]], trans)


def det_to_json(a: DetAutomaton) -> dict:
    trans = {}
    for g in a.alphabet:
        items = sorted(a.transitions[g].items(), key=lambda p: word_key(p[0]))
        trans[g] = [[_word(w), _word(r)] for w, r in items]
    return {"kind": "det-automaton", "version": VERSION, "alphabet": alphabet_to_json(a.alphabet),
            "states": [state_to_json(q) for q in a.states], "transitions": trans}


def det_from_json(v: dict) -> DetAutomaton:
    alph = alphabet_from_json(v["alphabet"])
    trans = {g: {_unword(p[0]): _unword(p[1]) for p in pairs} for g, pairs in v["transitions"].items()}
    return DetAutomaton(alph, [state_from_json(q) for q in v["states"]], trans)


def grammar_to_json(g: Grammar) -> dict:
    return {
        "kind": "grammar", "version": VERSION, "alphabet": alphabet_to_json(g.alphabet),
        "states": [state_to_json(q) for q in sort_states(g.states)],
        "edges": [{"name": e.name, "dom": _word(e.dom), "cod": _word(e.cod), "label": g.labelling[e.name]}
                  for e in g.edges],
    }


def grammar_from_json(v: dict) -> Grammar:
    alph = alphabet_from_json(v["alphabet"])
    edges = [(e["name"], _unword(e["dom"]), _unword(e["cod"]), e["label"]) for e in v["edges"]]
    return make_grammar(alph, [state_from_json(q) for q in v["states"]], edges)


def morphism_to_json(h: AlphabetMorphism) -> dict:
    return {"kind": "morphism", "version": VERSION, "source": alphabet_to_json(h.source),
            "target": alphabet_to_json(h.target), "map": dict(sorted(h.mapping.items()))}


def morphism_from_json(v: dict) -> AlphabetMorphism:
    return AlphabetMorphism(alphabet_from_json(v["source"]), alphabet_from_json(v["target"]), v["map"])


def pro_to_json(p: FinitePro) -> dict:
    return {
        "kind": "finite-pro", "version": VERSION, "alphabet": alphabet_to_json(p.alphabet),
        "bound": p.bound,
        "homs": [{"dom": n, "cod": m, "classes": list(cs)} for (n, m), cs in sorted(p.homs.items())],
        "identity": {str(n): c for n, c in sorted(p.identity.items())},
        "compose": sorted([a, b, c] for (a, b), c in p.compose.items()),
        "tensor": sorted([a, b, c] for (a, b), c in p.tensor.items()),
        "generators": dict(sorted(p.generators.items())),
        "copy": p.copy, "discard": p.discard, "swap": p.swap, "empty": p.empty,
        "labels": dict(sorted(p.labels.items())),
    }


def pro_from_json(v: dict) -> FinitePro:
    return FinitePro(
        alphabet=alphabet_from_json(v["alphabet"]), bound=int(v["bound"]),
        homs={(h["dom"], h["cod"]): list(h["classes"]) for h in v["homs"]},
        identity={int(n): c for n, c in v["identity"].items()},
        compose={(a, b): c for a, b, c in v["compose"]},
        tensor={(a, b): c for a, b, c in v["tensor"]},
        generators=dict(v["generators"]),
        copy=v.get("copy"), discard=v.get("discard"), swap=v.get("swap"), empty=v.get("empty"),
        labels=dict(v.get("labels", {})))


def witness_to_json(w: Witness) -> dict:
    return {
        "kind": "witness", "version": VERSION,
        "histories": [diagram_to_json(h, "rest-diagram") for h in w.histories],
        "trace": [{"keep": f.keep, "drop": f.drop, "gen": f.gen} for f in w.trace],
        "diagram": diagram_to_json(w.diagram),
    }


def witness_from_json(v: dict) -> Witness:
    return Witness(tuple(diagram_from_json(h) for h in v["histories"]),
                   tuple(Fold(f["keep"], f["drop"], f["gen"]) for f in v["trace"]),
                   diagram_from_json(v["diagram"]))


def nfa_to_json(n: ClassicalNFA) -> dict:
    return {"kind": "nfa", "version": VERSION, "states": list(n.states), "letters": list(n.letters),
            "transitions": sorted([list(t) for t in n.transitions], key=lambda t: [str(x) for x in t]),
            "initials": sorted(n.initials, key=state_key), "finals": sorted(n.finals, key=state_key)}


def nfa_from_json(v: dict) -> ClassicalNFA:
    return ClassicalNFA(v["states"], v["letters"], {tuple(t) for t in v["transitions"]},
                        set(v["initials"]), set(v["finals"]))


def tree_automaton_to_json(t: TreeAutomaton) -> dict:
    trans = {}
    for s in sorted(t.ranks):
        pairs = sorted(t.transitions[s], key=lambda p: str(p))
        trans[s] = [[list(a) if isinstance(a, tuple) else a, list(b) if isinstance(b, tuple) else b]
                    for a, b in pairs]
    return {"kind": "tree-automaton", "version": VERSION, "direction": t.direction,
            "states": list(t.states), "ranks": dict(sorted(t.ranks.items())), "transitions": trans,
            "accepting": sorted(t.accepting, key=state_key)}


def tree_automaton_from_json(v: dict) -> TreeAutomaton:
    bu = v["direction"] == "bottom-up"
    trans = {s: [(tuple(a), b) if bu else (a, tuple(b)) for a, b in pairs]
             for s, pairs in v["transitions"].items()}
    return TreeAutomaton(v["states"], dict(v["ranks"]), trans, set(v["accepting"]), v["direction"])


def tree_to_json(tree) -> list:
    return [tree[0]] + [tree_to_json(k) for k in tree[1:]]


def tree_from_json(v) -> tuple:
    if not isinstance(v, list) or not v or not isinstance(v[0], str):
        raise DocumentError("trees are nested arrays headed by a symbol name")
    return (v[0],) + tuple(tree_from_json(k) for k in v[1:])


# -- dispatch ---------------------------------------------------------------

_WRITERS = [
    (Grammar, grammar_to_json),
    (NondetAutomaton, automaton_to_json),
    (DetAutomaton, det_to_json),
    (Diagram, diagram_to_json),
    (FinitePro, pro_to_json),
    (Witness, witness_to_json),
    (AlphabetMorphism, morphism_to_json),
    (ClassicalNFA, nfa_to_json),
    (TreeAutomaton, tree_automaton_to_json),
]

_READERS = {
    "diagram": diagram_from_json,
    "rest-diagram": diagram_from_json,
    "automaton": automaton_from_json,
    "det-automaton": det_from_json,
    "grammar": grammar_from_json,
    "finite-pro": pro_from_json,
    "witness": witness_from_json,
    "morphism": morphism_from_json,
    "nfa": nfa_from_json,
    "tree-automaton": tree_automaton_from_json,
    "alphabet": lambda v: alphabet_from_json(v["generators"]),
}


def to_document(x) -> dict:
    if isinstance(x, Alphabet):
        return {"kind": "alphabet", "version": VERSION, "generators": alphabet_to_json(x)}
    for cls, fn in _WRITERS:
        if isinstance(x, cls):
            return fn(x)
    raise DocumentError(f"no document kind for {type(x).__name__}")


def from_document(v: dict):
    if not isinstance(v, dict) or "kind" not in v:
        raise DocumentError("document must be an object with a 'kind' field")
    if v.get("version", VERSION) != VERSION:
        raise DocumentError(f"unsupported document version {v.get('version')!r}")
    try:
        reader = _READERS[v["kind"]]
    except KeyError:
        raise DocumentError(f"unknown document kind {v['kind']!r}") from None
    try:
        return reader(v)
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise DocumentError(f"malformed {v['kind']} document: {e}") from None


def dumps(x) -> str:
    return json.dumps(to_document(x), ensure_ascii=False, indent=2, sort_keys=False)


def loads(s: str):
    return from_document(json.loads(s))
