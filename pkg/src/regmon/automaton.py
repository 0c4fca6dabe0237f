"""Non-deterministic monoidal automata and their frontier semantics."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable, Iterator, Mapping

from .diagram import Alphabet, Diagram, enumerate_scalars, is_connected
from .errors import AlphabetMismatch, ArityMismatch, NotScalar

State = Hashable
Word = tuple
Pair = tuple[Word, Word]


def state_key(q) -> tuple:
    """Total order on heterogeneous state names (strings, ints, tuples, frozensets)."""
    if isinstance(q, frozenset):
        return (3, tuple(sorted(state_key(x) for x in q)))
    if isinstance(q, tuple):
        return (2, tuple(state_key(x) for x in q))
    if isinstance(q, int) and not isinstance(q, bool):
        return (0, q)
    return (1, str(q))


def sort_states(qs: Iterable) -> tuple:
    return tuple(sorted(set(qs), key=state_key))


def word_key(w: Word) -> tuple:
    return tuple(state_key(q) for q in w)


@dataclass(frozen=True)
class TransitionRelation:
    """A relation ``Q^arity -> P(Q^coarity)`` given by its pairs."""

    arity: int
    coarity: int
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset((tuple(a), tuple(b)) for a, b in self.pairs))
        for a, b in self.pairs:
            if len(a) != self.arity or len(b) != self.coarity:
                raise ArityMismatch(f"pair {a}->{b} does not have shape {self.arity}->{self.coarity}")

    def image(self, w: Word) -> set:
        return {b for a, b in self.pairs if a == w}

    def compose(self, other: "TransitionRelation") -> "TransitionRelation":
        if self.coarity != other.arity:
            raise ArityMismatch("relations are not composable")
        by_src: dict = {}
        for b, c in other.pairs:
            by_src.setdefault(b, []).append(c)
        return TransitionRelation(self.arity, other.coarity,
                                  frozenset((a, c) for a, b in self.pairs for c in by_src.get(b, ())))

    def tensor(self, other: "TransitionRelation") -> "TransitionRelation":
        return TransitionRelation(self.arity + other.arity, self.coarity + other.coarity,
                                  frozenset((a + c, b + d) for a, b in self.pairs for c, d in other.pairs))

    @classmethod
    def identity(cls, states: Iterable, n: int) -> "TransitionRelation":
        return cls(n, n, frozenset((w, w) for w in product(sort_states(states), repeat=n)))

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs, key=lambda p: (word_key(p[0]), word_key(p[1])))

    def is_functional(self) -> bool:
        seen = set()
        for a, _ in self.pairs:
            if a in seen:
                return False
            seen.add(a)
        return True


@dataclass(frozen=True)
class NondetAutomaton:
    """States plus, for every generator, a set of (input word, output word) pairs."""

    alphabet: Alphabet
    states: tuple
    transitions: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        states = sort_states(self.states)
        object.__setattr__(self, "states", states)
        qs = set(states)
        trans = {}
        for g in self.alphabet:
            ar, coar = self.alphabet[g]
            pairs = frozenset((tuple(a), tuple(b)) for a, b in self.transitions.get(g, ()))
            for a, b in pairs:
                if len(a) != ar or len(b) != coar:
                    raise ArityMismatch(f"transition {a}->{b} for {g!r} should have shape {ar}->{coar}")
                bad = [q for q in a + b if q not in qs]
                if bad:
                    raise ValueError(f"transition for {g!r} mentions unknown states {bad}")
            trans[g] = pairs
        extra = set(self.transitions) - set(self.alphabet)
        if extra:
            raise AlphabetMismatch(f"transitions for generators outside the alphabet: {sorted(extra)}")
        object.__setattr__(self, "transitions", trans)
        index: dict[str, dict] = {}
        for g, pairs in trans.items():
            m: dict = {}
            for a, b in pairs:
                m.setdefault(a, []).append(b)
            index[g] = m
        object.__setattr__(self, "_index", index)

    def __eq__(self, other):
        return (isinstance(other, NondetAutomaton) and self.alphabet == other.alphabet
                and self.states == other.states and self.transitions == other.transitions)

    def __hash__(self):
        return hash((self.alphabet, self.states, tuple(sorted(self.transitions.items()))))

    def image(self, gen: str, w: Word) -> list:
        return self._index[gen].get(w, [])

    def relation(self, gen: str) -> TransitionRelation:
        ar, coar = self.alphabet[gen]
        return TransitionRelation(ar, coar, self.transitions[gen])

    def accepts(self, d: Diagram) -> bool:
        return nd_accepts(self, d)


def _check_alphabet(a, d: Diagram) -> None:
    if a.alphabet != d.alphabet:
        raise AlphabetMismatch("automaton and diagram use different alphabets")


def frontier_run(a: NondetAutomaton, d: Diagram, start: Iterable[Word]) -> set:
    """Push a set of state words through ``d`` slice by slice."""
    frontier = {tuple(w) for w in start}
    alph = a.alphabet
    for sl in d.slices:
        if not frontier:
            break
        nxt = set()
        for w in frontier:
            parts = []
            pos = 0
            for item in sl:
                if item is None:
                    parts.append(((w[pos],),))
                    pos += 1
                    continue
                ar = alph[item][0]
                outs = a.image(item, w[pos:pos + ar])
                if not outs:
                    break
                parts.append(outs)
                pos += ar
            else:
                for combo in product(*parts):
                    nxt.add(sum(combo, ()))
        frontier = nxt
    return frontier


def nd_accepts(a: NondetAutomaton, d: Diagram) -> bool:
    _check_alphabet(a, d)
    if not d.is_scalar:
        raise NotScalar("acceptance is defined on scalar diagrams")
    final = frontier_run(a, d, [()])
    assert final <= {()}
    return final == {()}


def relation_of(a: NondetAutomaton, d: Diagram) -> TransitionRelation:
    """The relation ``Q^n -> P(Q^m)`` the automaton assigns to ``d``."""
    _check_alphabet(a, d)
    pairs = set()
    for w in product(a.states, repeat=d.arity):
        for out in frontier_run(a, d, [w]):
            pairs.add((w, out))
    return TransitionRelation(d.arity, d.coarity, frozenset(pairs))


def _same_alphabet(a1, a2) -> None:
    if a1.alphabet != a2.alphabet:
        raise AlphabetMismatch("automata use different alphabets")


def intersect(a1: NondetAutomaton, a2: NondetAutomaton) -> NondetAutomaton:
    """Product automaton on pairs of states."""
    _same_alphabet(a1, a2)
    states = [(p, q) for p in a1.states for q in a2.states]
    trans = {}
    for g in a1.alphabet:
        trans[g] = frozenset(
            (tuple(zip(w1, w2)), tuple(zip(v1, v2)))
            for w1, v1 in a1.transitions[g] for w2, v2 in a2.transitions[g])
    return NondetAutomaton(a1.alphabet, states, trans)


def tag_states(states: Iterable, tag: int, clash: set) -> dict:
    out = {}
    for q in states:
        if q in clash:
            out[q] = f"{q}@{tag}" if isinstance(q, str) else (q, tag)
        else:
            out[q] = q
    return out


def rename_states(a: NondetAutomaton, mapping: Mapping) -> NondetAutomaton:
    trans = {g: frozenset((tuple(mapping[q] for q in w), tuple(mapping[q] for q in v)) for w, v in pairs)
             for g, pairs in a.transitions.items()}
    return NondetAutomaton(a.alphabet, [mapping[q] for q in a.states], trans)


def automaton_union(a1: NondetAutomaton, a2: NondetAutomaton) -> NondetAutomaton:
    """Disjoint union of states and transitions.

    Each connected component of an accepted diagram runs entirely inside one
    summand, so the connected members are exactly those of either automaton.
    """
    _same_alphabet(a1, a2)
    clash = set(a1.states) & set(a2.states)
    b1 = rename_states(a1, tag_states(a1.states, 1, clash))
    b2 = rename_states(a2, tag_states(a2.states, 2, clash))
    if set(b1.states) & set(b2.states):
        raise ValueError("state tagging failed to separate the automata")
    trans = {g: b1.transitions[g] | b2.transitions[g] for g in a1.alphabet}
    return NondetAutomaton(a1.alphabet, b1.states + b2.states, trans)


@dataclass(frozen=True)
class AlphabetMorphism:
    """Arity-preserving map between generator names."""

    source: Alphabet
    target: Alphabet
    mapping: Mapping[str, str]

    def __post_init__(self):
        m = dict(self.mapping)
        missing = [g for g in self.source if g not in m]
        if missing:
            raise ArityMismatch(f"morphism undefined on {missing}")
        for g, h in m.items():
            if g not in self.source:
                raise AlphabetMismatch(f"{g!r} is not in the source alphabet")
            if self.source[g] != self.target[h]:
                raise ArityMismatch(f"{g!r} and {h!r} have different types")
        object.__setattr__(self, "mapping", m)

    def __call__(self, g: str) -> str:
        return self.mapping[g]

    def apply(self, d: Diagram) -> Diagram:
        """Relabel every generator of ``d``."""
        if d.alphabet != self.source:
            raise AlphabetMismatch("diagram is not over the morphism's source")
        slices = tuple(tuple(None if it is None else self.mapping[it] for it in sl) for sl in d.slices)
        return Diagram(self.target, d.arity, slices)

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "AlphabetMorphism":
        return cls(alphabet, alphabet, {g: g for g in alphabet})


def automaton_preimage(a: NondetAutomaton, h: AlphabetMorphism) -> NondetAutomaton:
    """Automaton over ``h.source`` running ``a`` on relabelled generators."""
    if h.target != a.alphabet:
        raise AlphabetMismatch("morphism does not target the automaton's alphabet")
    trans = {g: a.transitions[h(g)] for g in h.source}
    return NondetAutomaton(h.source, a.states, trans)


def is_functional(a: NondetAutomaton) -> bool:
    return all(a.relation(g).is_functional() for g in a.alphabet)


def empty_automaton(alphabet: Alphabet, states: Iterable = ()) -> NondetAutomaton:
    return NondetAutomaton(alphabet, tuple(states), {})


def enumerate_members(a: NondetAutomaton, max_generators: int, max_width: int,
                      connected: bool = False) -> Iterator[Diagram]:
    for d in enumerate_scalars(a.alphabet, max_generators, max_width):
        if connected and not is_connected(d):
            continue
        if nd_accepts(a, d):
            yield d


def widen_automaton(a: NondetAutomaton, alphabet: Alphabet) -> NondetAutomaton:
    """The same automaton over a larger alphabet; new generators get empty relations."""
    if a.alphabet.union(alphabet) != alphabet:
        raise AlphabetMismatch("target alphabet does not contain the automaton's alphabet")
    return NondetAutomaton(alphabet, a.states, dict(a.transitions))
