"""Classical word and tree automata as monoidal automata over special alphabets."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .automaton import NondetAutomaton, sort_states
from .diagram import Alphabet, Diagram, compose, dataflow_dag, is_connected, normalize, tensor_all
from .errors import NotWordShaped

START, END = "⊢", "⊣"


# -- words ------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalNFA:
    """``transitions`` holds ``(source, letter, target)`` triples."""

    states: tuple
    letters: tuple
    transitions: frozenset
    initials: frozenset
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", sort_states(self.states))
        object.__setattr__(self, "letters", tuple(sorted(set(self.letters))))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        object.__setattr__(self, "initials", frozenset(self.initials))
        object.__setattr__(self, "finals", frozenset(self.finals))
        qs = set(self.states)
        if not self.initials <= qs or not self.finals <= qs:
            raise ValueError("initial and final states must be states")
        for p, x, q in self.transitions:
            if p not in qs or q not in qs or x not in self.letters:
                raise ValueError(f"bad transition {(p, x, q)}")
        if {START, END} & set(self.letters):
            raise ValueError("letters may not reuse the start/end generator names")

    @classmethod
    def single_initial(cls, states, letters, transitions, initial, finals) -> "ClassicalNFA":
        return cls(states, letters, transitions, {initial}, finals)


def word_alphabet(letters: Iterable[str]) -> Alphabet:
    gens = {x: (1, 1) for x in letters}
    gens[START] = (0, 1)
    gens[END] = (1, 0)
    return Alphabet(gens)


def word_shape(alphabet: Alphabet) -> tuple[str, str, list[str]]:
    """Start generator, end generator and letters of a word alphabet."""
    starts = [g for g, t in alphabet.items() if t == (0, 1)]
    ends = [g for g, t in alphabet.items() if t == (1, 0)]
    letters = [g for g, t in alphabet.items() if t == (1, 1)]
    if len(starts) != 1 or len(ends) != 1 or len(starts) + len(ends) + len(letters) != len(alphabet):
        raise NotWordShaped("alphabet needs one 0->1 generator, one 1->0 generator and letters 1->1")
    return starts[0], ends[0], letters


def nfa_to_monoidal(n: ClassicalNFA) -> tuple[Alphabet, NondetAutomaton]:
    alph = word_alphabet(n.letters)
    trans = {x: set() for x in n.letters}
    for p, x, q in n.transitions:
        trans[x].add(((p,), (q,)))
    trans[START] = {((), (i,)) for i in n.initials}
    trans[END] = {((f,), ()) for f in n.finals}
    return alph, NondetAutomaton(alph, n.states, trans)


def monoidal_to_nfa(a: NondetAutomaton) -> ClassicalNFA:
    start, end, letters = word_shape(a.alphabet)
    trans = {(w[0], x, v[0]) for x in letters for w, v in a.transitions[x]}
    initials = {v[0] for _, v in a.transitions[start]}
    finals = {w[0] for w, _ in a.transitions[end]}
    return ClassicalNFA(a.states, letters, trans, initials, finals)


def word_to_diagram(word: Sequence[str], alphabet: Alphabet) -> Diagram:
    start, end, letters = word_shape(alphabet)
    steps = [(0, start)] + [(0, x) for x in word] + [(0, end)]
    return Diagram.from_steps(alphabet, 0, steps)


def diagram_to_word(d: Diagram) -> tuple[str, ...]:
    start, end, _ = word_shape(d.alphabet)
    if not is_connected(d):
        raise NotWordShaped("diagram is not connected")
    gens = [g for _, g in normalize(d).steps()]
    if gens[0] != start or gens[-1] != end:
        raise NotWordShaped("diagram does not run from start to end")
    return tuple(gens[1:-1])


def nfa_accepts(n: ClassicalNFA, word: Sequence[str]) -> bool:
    cur = set(n.initials)
    for x in word:
        cur = {q for p, y, q in n.transitions if y == x and p in cur}
    return bool(cur & n.finals)


def random_nfa(seed: int, n_states: int = 4, letters: Sequence[str] = ("x", "y"),
               density: float = 0.35) -> ClassicalNFA:
    rng = random.Random(seed)
    states = [f"q{i}" for i in range(n_states)]
    trans = {(p, x, q) for p in states for x in letters for q in states if rng.random() < density}
    finals = {q for q in states if rng.random() < 0.4} or {rng.choice(states)}
    return ClassicalNFA.single_initial(states, letters, trans, states[0], finals)


# -- trees ------------------------------------------------------------------

Tree = tuple  # (symbol, child, child, ...)


@dataclass(frozen=True)
class TreeAutomaton:
    """Bottom-up: pairs ``(children states, state)``.  Top-down: pairs ``(state, children states)``.

    ``accepting`` is the final set for bottom-up automata and the initial set
    for top-down ones.
    """

    states: tuple
    ranks: dict
    transitions: dict
    accepting: frozenset
    direction: str = "bottom-up"

    def __post_init__(self):
        if self.direction not in ("bottom-up", "top-down"):
            raise ValueError("direction must be bottom-up or top-down")
        object.__setattr__(self, "states", sort_states(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        trans = {}
        for s, r in self.ranks.items():
            if s in (START, END):
                raise ValueError("symbols may not reuse the start/end generator names")
            pairs = frozenset((tuple(a), b) if self.direction == "bottom-up" else (a, tuple(b))
                              for a, b in self.transitions.get(s, ()))
            for a, b in pairs:
                kids = a if self.direction == "bottom-up" else b
                if len(kids) != r:
                    raise ValueError(f"transition for {s!r} does not match rank {r}")
            trans[s] = pairs
        object.__setattr__(self, "transitions", trans)


def tree_alphabet(ranks: dict, direction: str = "bottom-up") -> Alphabet:
    if direction == "bottom-up":
        gens = {s: (r, 1) for s, r in ranks.items()}
        gens[END] = (1, 0)
    else:
        gens = {s: (1, r) for s, r in ranks.items()}
        gens[START] = (0, 1)
    return Alphabet(gens)


def treeaut_to_monoidal(t: TreeAutomaton) -> tuple[Alphabet, NondetAutomaton]:
    alph = tree_alphabet(t.ranks, t.direction)
    trans = {}
    if t.direction == "bottom-up":
        for s, pairs in t.transitions.items():
            trans[s] = {(kids, (q,)) for kids, q in pairs}
        trans[END] = {((q,), ()) for q in t.accepting}
    else:
        for s, pairs in t.transitions.items():
            trans[s] = {((q,), kids) for q, kids in pairs}
        trans[START] = {((), (q,)) for q in t.accepting}
    return alph, NondetAutomaton(alph, t.states, trans)


def _subtree_bu(tree: Tree, alphabet: Alphabet) -> Diagram:
    sym, kids = tree[0], tree[1:]
    below = tensor_all([_subtree_bu(k, alphabet) for k in kids], alphabet)
    return compose(below, Diagram.generator(alphabet, sym))


def _subtree_td(tree: Tree, alphabet: Alphabet) -> Diagram:
    sym, kids = tree[0], tree[1:]
    below = tensor_all([_subtree_td(k, alphabet) for k in kids], alphabet)
    return compose(Diagram.generator(alphabet, sym), below)


def tree_to_diagram(tree: Tree, alphabet: Alphabet, direction: str = "bottom-up") -> Diagram:
    """Connected scalar for ``tree``: leaves first and the root generator last (mirrored top-down)."""
    if direction == "bottom-up":
        d = compose(_subtree_bu(tree, alphabet), Diagram.generator(alphabet, END))
    else:
        d = compose(Diagram.generator(alphabet, START), _subtree_td(tree, alphabet))
    return normalize(d)


def diagram_to_tree(d: Diagram, direction: str = "bottom-up") -> Tree:
    if not is_connected(d):
        raise NotWordShaped("diagram is not connected")
    dag = dataflow_dag(d)
    occ = dag.occurrences
    if direction == "bottom-up":
        roots = [i for i, o in enumerate(occ) if o.gen == END]
        if len(roots) != 1:
            raise NotWordShaped("expected exactly one root generator")
        prod = dag.producer

        def build(i):
            return (occ[i].gen,) + tuple(build(prod[w][0]) for w in occ[i].inputs)

        return build(prod[occ[roots[0]].inputs[0]][0])
    roots = [i for i, o in enumerate(occ) if o.gen == START]
    if len(roots) != 1:
        raise NotWordShaped("expected exactly one start generator")
    cons = dag.consumer

    def build_td(i):
        return (occ[i].gen,) + tuple(build_td(cons[w][0]) for w in occ[i].outputs)

    return build_td(cons[occ[roots[0]].outputs[0]][0])


def tree_size(tree: Tree) -> int:
    return 1 + sum(tree_size(k) for k in tree[1:])


def enumerate_trees(ranks: dict, max_nodes: int) -> list[Tree]:
    """All well-ranked trees with at most ``max_nodes`` nodes, by size then structure."""
    syms = sorted(ranks)
    by_size: dict[int, list[Tree]] = {}

    def forests(k: int, total: int) -> Iterator[tuple]:
        if k == 0:
            if total == 0:
                yield ()
            return
        for first in range(1, total - k + 2):
            for t in by_size.get(first, []):
                for rest in forests(k - 1, total - first):
                    yield (t,) + rest

    for size in range(1, max_nodes + 1):
        out = []
        for s in syms:
            r = ranks[s]
            if r == 0:
                if size == 1:
                    out.append((s,))
            elif size - 1 >= r:
                for kids in forests(r, size - 1):
                    out.append((s,) + kids)
        by_size[size] = out
    return [t for size in range(1, max_nodes + 1) for t in by_size[size]]


def connected_filter(ds: Iterable[Diagram]) -> Iterator[Diagram]:
    return (d for d in ds if is_connected(d))
