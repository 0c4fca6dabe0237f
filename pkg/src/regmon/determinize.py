"""Deterministic monoidal automata, convexity, and the powerset construction."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .automaton import NondetAutomaton, sort_states, state_key, word_key
from .diagram import Alphabet, Diagram
from .errors import AlphabetMismatch, ArityMismatch, NotConvex, NotScalar


@dataclass(frozen=True)
class DetAutomaton:
    """States plus, for every generator, a partial function on state words."""

    alphabet: Alphabet
    states: tuple
    transitions: Mapping[str, Mapping[tuple, tuple]]

    def __post_init__(self):
        states = sort_states(self.states)
        object.__setattr__(self, "states", states)
        qs = set(states)
        trans = {}
        for g in self.alphabet:
            ar, coar = self.alphabet[g]
            table = {tuple(k): tuple(v) for k, v in dict(self.transitions.get(g, {})).items()}
            for k, v in table.items():
                if len(k) != ar or len(v) != coar:
                    raise ArityMismatch(f"entry {k}->{v} for {g!r} should have shape {ar}->{coar}")
                bad = [q for q in k + v if q not in qs]
                if bad:
                    raise ValueError(f"entry for {g!r} mentions unknown states {bad}")
            trans[g] = table
        extra = set(self.transitions) - set(self.alphabet)
        if extra:
            raise AlphabetMismatch(f"transitions for generators outside the alphabet: {sorted(extra)}")
        object.__setattr__(self, "transitions", trans)

    def __eq__(self, other):
        return (isinstance(other, DetAutomaton) and self.alphabet == other.alphabet
                and self.states == other.states and self.transitions == other.transitions)

    def __hash__(self):
        return hash((self.alphabet, self.states))

    def step(self, gen: str, w: tuple):
        return self.transitions[gen].get(w)

    def accepts(self, d: Diagram) -> bool:
        return det_accepts(self, d)


def det_run(a: DetAutomaton, d: Diagram, w: tuple):
    """Run from state word ``w``; ``None`` if some entry is undefined."""
    if a.alphabet != d.alphabet:
        raise AlphabetMismatch("automaton and diagram use different alphabets")
    alph = a.alphabet
    for sl in d.slices:
        out = []
        pos = 0
        for item in sl:
            if item is None:
                out.append(w[pos])
                pos += 1
                continue
            ar = alph[item][0]
            r = a.transitions[item].get(w[pos:pos + ar])
            if r is None:
                return None
            out.extend(r)
            pos += ar
        w = tuple(out)
    return w


def det_accepts(a: DetAutomaton, d: Diagram) -> bool:
    if a.alphabet != d.alphabet:
        raise AlphabetMismatch("automaton and diagram use different alphabets")
    if not d.is_scalar:
        raise NotScalar("acceptance is defined on scalar diagrams")
    return det_run(a, d, ()) == ()


def det_to_nondet(a: DetAutomaton) -> NondetAutomaton:
    trans = {g: frozenset(t.items()) for g, t in a.transitions.items()}
    return NondetAutomaton(a.alphabet, a.states, trans)


def nondet_to_det(a: NondetAutomaton) -> DetAutomaton:
    """Reinterpret a functional automaton as a deterministic one."""
    trans = {}
    for g, pairs in a.transitions.items():
        table = {}
        for w, v in pairs:
            if w in table and table[w] != v:
                raise ValueError(f"relation for {g!r} is not functional at {w}")
            table[w] = v
        trans[g] = table
    return DetAutomaton(a.alphabet, a.states, trans)


def nonempty_subsets(states) -> list[frozenset]:
    """Nonempty subsets ordered as bitsets over the sorted state list."""
    qs = sort_states(states)
    out = []
    for mask in range(1, 1 << len(qs)):
        out.append(frozenset(q for i, q in enumerate(qs) if mask >> i & 1))
    return out


def subset_key(s: frozenset, states) -> int:
    qs = sort_states(states)
    return sum(1 << i for i, q in enumerate(qs) if q in s)


@dataclass(frozen=True)
class Convex:
    """Per generator, map from subset tuples to box components (``None`` for an empty image)."""

    witness: Mapping[str, Mapping[tuple, tuple | None]]

    @property
    def convex(self) -> bool:
        return True


@dataclass(frozen=True)
class NonConvex:
    generator: str
    inputs: tuple
    missing: tuple

    @property
    def convex(self) -> bool:
        return False


ConvexityReport = Convex | NonConvex


def image_of_subsets(a: NondetAutomaton, gen: str, subsets: tuple) -> set:
    out = set()
    for w in product(*(sorted(s, key=state_key) for s in subsets)):
        out.update(a.image(gen, tuple(w)))
    return out


def box_components(words: set, m: int) -> tuple:
    return tuple(frozenset(w[i] for w in words) for i in range(m))


def _reachable_tuples(a: NondetAutomaton) -> dict[str, set]:
    """Subset tuples met while building the determinized tables from scratch."""
    seen_subsets: set = set()
    tuples: dict[str, set] = {g: set() for g in a.alphabet}
    changed = True
    while changed:
        changed = False
        for g in a.alphabet:
            ar, coar = a.alphabet[g]
            for tup in product(sorted(seen_subsets, key=state_key), repeat=ar):
                if tup in tuples[g]:
                    continue
                tuples[g].add(tup)
                u = image_of_subsets(a, g, tup)
                if u:
                    for comp in box_components(u, coar):
                        if comp not in seen_subsets:
                            seen_subsets.add(comp)
                            changed = True
    return tuples


def check_convex(a: NondetAutomaton, reachable_only: bool = False) -> ConvexityReport:
    subsets = nonempty_subsets(a.states)
    witness: dict[str, dict] = {}
    reach = _reachable_tuples(a) if reachable_only else None
    for g in a.alphabet:
        ar, coar = a.alphabet[g]
        table = {}
        candidates = reach[g] if reach is not None else product(subsets, repeat=ar)
        for tup in sorted(candidates, key=lambda t: tuple(subset_key(s, a.states) for s in t)):
            u = image_of_subsets(a, g, tup)
            if not u:
                table[tup] = None
                continue
            comps = box_components(u, coar)
            box = set(product(*comps))
            if box != u:
                missing = min(box - u, key=word_key)
                return NonConvex(g, tup, missing)
            table[tup] = comps
        witness[g] = table
    return Convex(witness)


def determinize(a: NondetAutomaton, report: ConvexityReport | None = None) -> DetAutomaton:
    """Powerset construction over nonempty subsets; requires a convex automaton."""
    if report is None:
        report = check_convex(a)
    if isinstance(report, NonConvex):
        raise NotConvex(report)
    trans = {}
    for g, table in report.witness.items():
        out = {}
        for tup, comps in table.items():
            if comps is None or any(not c for c in comps):
                continue
            out[tup] = comps
        trans[g] = out
    return DetAutomaton(a.alphabet, nonempty_subsets(a.states), trans)

