"""Regular monoidal grammars: labelled monoidal graphs over an alphabet."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .automaton import (AlphabetMorphism, NondetAutomaton, sort_states, tag_states, word_key)
from .diagram import Alphabet, Edge, MonoidalGraph
from .errors import AlphabetMismatch, ArityMismatch


@dataclass(frozen=True)
class Grammar:
    """A machine graph whose edges are labelled by generators of ``alphabet``."""

    machine: MonoidalGraph
    alphabet: Alphabet
    labelling: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "labelling", dict(self.labelling))

    @property
    def states(self) -> tuple:
        return self.machine.vertices

    @property
    def edges(self) -> tuple:
        return self.machine.edges

    def __eq__(self, other):
        return (isinstance(other, Grammar) and self.machine == other.machine
                and self.alphabet == other.alphabet and self.labelling == other.labelling)

    def __hash__(self):
        return hash((self.machine, self.alphabet, tuple(sorted(self.labelling.items()))))


def make_grammar(alphabet: Alphabet, states, edges, validate: bool = True) -> Grammar:
    """Build a grammar from ``(name, dom, cod, label)`` tuples."""
    es = tuple(Edge(name, tuple(dom), tuple(cod)) for name, dom, cod, _ in edges)
    labels = {name: label for name, _, _, label in edges}
    g = Grammar(MonoidalGraph(tuple(states), es), alphabet, labels)
    if validate:
        validate_grammar(g)
    return g


def validate_grammar(g: Grammar) -> bool:
    names = {e.name for e in g.machine.edges}
    if set(g.labelling) != names:
        missing = sorted(names - set(g.labelling))
        extra = sorted(set(g.labelling) - names)
        raise ArityMismatch(f"labelling does not match edges (unlabelled {missing}, unknown {extra})",
                            missing[0] if missing else extra[0])
    for e in g.machine.edges:
        label = g.labelling[e.name]
        ar, coar = g.alphabet[label]
        if len(e.dom) != ar or len(e.cod) != coar:
            raise ArityMismatch(
                f"edge {e.name!r}: {len(e.dom)}->{len(e.cod)} but {label!r} is {ar}->{coar}", e.name)
    return True


def grammar_to_automaton(g: Grammar) -> NondetAutomaton:
    validate_grammar(g)
    trans: dict[str, set] = {x: set() for x in g.alphabet}
    for e in g.machine.edges:
        trans[g.labelling[e.name]].add((e.dom, e.cod))
    return NondetAutomaton(g.alphabet, g.machine.vertices, {x: frozenset(p) for x, p in trans.items()})


def automaton_to_grammar(a: NondetAutomaton) -> Grammar:
    """One edge per transition pair; edge names are ``gen#i`` in sorted pair order."""
    edges = []
    for x in a.alphabet:
        pairs = sorted(a.transitions[x], key=lambda p: (word_key(p[0]), word_key(p[1])))
        for i, (w, v) in enumerate(pairs):
            edges.append((f"{x}#{i}", w, v, x))
    return make_grammar(a.alphabet, a.states, edges)


def grammar_union(g1: Grammar, g2: Grammar) -> Grammar:
    if g1.alphabet != g2.alphabet:
        raise AlphabetMismatch("grammars use different alphabets")
    validate_grammar(g1)
    validate_grammar(g2)
    clash = set(g1.states) & set(g2.states)
    r1 = tag_states(g1.states, 1, clash)
    r2 = tag_states(g2.states, 2, clash)
    edges = []
    for tag, g, r in ((1, g1, r1), (2, g2, r2)):
        for e in g.edges:
            edges.append((f"{e.name}@{tag}", tuple(r[q] for q in e.dom), tuple(r[q] for q in e.cod),
                          g.labelling[e.name]))
    states = sort_states(list(r1.values()) + list(r2.values()))
    return make_grammar(g1.alphabet, states, edges)


def grammar_image(g: Grammar, h: AlphabetMorphism) -> Grammar:
    """Relabel along ``h``; the machine is unchanged."""
    if h.source != g.alphabet:
        raise AlphabetMismatch("morphism does not start at the grammar's alphabet")
    return Grammar(g.machine, h.target, {e: h(x) for e, x in g.labelling.items()})


def empty_grammar(alphabet: Alphabet, states=()) -> Grammar:
    return Grammar(MonoidalGraph(tuple(states), ()), alphabet, {})


def widen_grammar(g: Grammar, alphabet: Alphabet) -> Grammar:
    """The same grammar viewed over a larger alphabet."""
    big = g.alphabet.union(alphabet)
    if big != alphabet:
        raise AlphabetMismatch("target alphabet does not contain the grammar's alphabet")
    return Grammar(g.machine, alphabet, g.labelling)
