"""Example languages with independent oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable

from .automaton import NondetAutomaton, frontier_run, intersect, is_functional
from .determinize import DetAutomaton, nondet_to_det
from .diagram import Alphabet, Diagram, normalize
from .encodings import (ClassicalNFA, TreeAutomaton, nfa_to_monoidal, random_nfa, treeaut_to_monoidal)
from .errors import UnknownEntry
from .grammar import Grammar, automaton_to_grammar, grammar_to_automaton, make_grammar
from .syntactic import FinitePro, relational_pro, trivial_pro


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    grammar: Grammar
    summary: str
    oracle: str
    det: DetAutomaton | None = None
    presentation: FinitePro | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def alphabet(self) -> Alphabet:
        return self.grammar.alphabet

    @property
    def automaton(self) -> NondetAutomaton:
        return grammar_to_automaton(self.grammar)


# -- dyck -------------------------------------------------------------------

DYCK = Alphabet({"top": (0, 1), "open": (1, 2), "close": (2, 1), "bot": (1, 0)})


def _dyck() -> CorpusEntry:
    g = make_grammar(DYCK, ["P", "S"], [
        ("top", (), ("S",), "top"),
        ("open", ("S",), ("S", "P"), "open"),
        ("close", ("S", "P"), ("S",), "close"),
        ("bot", ("S",), (), "bot"),
    ])
    a = grammar_to_automaton(g)
    return CorpusEntry("dyck", g, "balanced parentheses read along a spine wire",
                       "stack-based balance check of the open/close readout",
                       det=nondet_to_det(a), presentation=relational_pro(a, 2))


def dyck_readout(d: Diagram) -> str:
    return "".join({"open": "(", "close": ")"}.get(g, "") for _, g in normalize(d).steps())


def balanced(word: str) -> bool:
    depth = 0
    for ch in word:
        depth += 1 if ch == "(" else -1
        if depth < 0:
            return False
    return depth == 0


def dyck_word_diagram(word: str) -> Diagram:
    steps = [(0, "top")] + [(0, "open" if ch == "(" else "close") for ch in word] + [(0, "bot")]
    return Diagram.from_steps(DYCK, 0, steps)


# -- brick walls and xor tiles ----------------------------------------------

WALL = Alphabet({"start0": (0, 2), "start1": (0, 2), "brick0": (2, 2), "brick1": (2, 2),
                 "ht": (1, 1), "hb": (1, 1), "end": (2, 0)})


def _brick_wall() -> CorpusEntry:
    edges = []
    for c in "01":
        edges.append((f"start{c}", (), ("L", "R"), f"start{c}"))
        edges.append((f"brick{c}", ("L", "R"), ("R", "L"), f"brick{c}"))
    edges += [("ht", ("R",), ("L",), "ht"), ("hb", ("L",), ("R",), "hb"),
              ("end", ("R", "L"), (), "end")]
    g = make_grammar(WALL, ["L", "R"], edges)
    return CorpusEntry("brick_wall", g, "staggered brick tilings with half bricks; every rectangular wall is a member",
                       "raster generator for walls of given pair count and odd-layer count",
                       det=nondet_to_det(grammar_to_automaton(g)))


def _xor_tiles() -> CorpusEntry:
    edges = []
    for c in (0, 1):
        edges.append((f"start{c}", (), (str(c), "0"), f"start{c}"))
        for a, b in product((0, 1), repeat=2):
            if a ^ b == c:
                edges.append((f"brick{c}_{a}{b}", (str(a), str(b)), (str(c), str(c)), f"brick{c}"))
    for x in "01":
        edges.append((f"ht_{x}", (x,), (x,), "ht"))
        edges.append((f"hb_{x}", (x,), (x,), "hb"))
        for y in "01":
            edges.append((f"end_{x}{y}", (x, y), (), "end"))
    g = make_grammar(WALL, ["0", "1"], edges)
    return CorpusEntry("xor_tiles", g, "each brick is coloured by the xor of the colours above it",
                       "staggered xor cellular automaton",
                       det=nondet_to_det(grammar_to_automaton(g)))


def _sierpinski() -> CorpusEntry:
    a = intersect(build("brick_wall").automaton, build("xor_tiles").automaton)
    g = automaton_to_grammar(a)
    return CorpusEntry("sierpinski", g, "brick walls whose colours follow the xor rule",
                       "staggered xor cellular automaton on rectangular walls",
                       det=nondet_to_det(a))


def wall_layout(pairs: int, layers: int) -> list[tuple[int, str]]:
    """Steps of a wall with ``pairs`` bricks per odd layer and ``layers`` odd layers; kinds uncoloured."""
    if pairs < 1 or layers < 1:
        raise ValueError("walls need at least one pair and one layer")
    steps = [(2 * i, "start") for i in range(pairs)]
    for k in range(layers):
        if k:
            steps.append((0, "ht"))
            steps += [(2 * j + 1, "brick") for j in range(pairs - 1)]
            steps.append((2 * pairs - 1, "hb"))
        steps += [(2 * j, "brick") for j in range(pairs)]
    steps += [(0, "end")] * pairs
    return steps


def wall_diagram(pairs: int, layers: int, colours=None) -> Diagram:
    """A wall raster; ``colours`` lists one bit per start and brick, in step order."""
    layout = wall_layout(pairs, layers)
    n_col = sum(1 for _, k in layout if k in ("start", "brick"))
    colours = list(colours) if colours is not None else [0] * n_col
    if len(colours) != n_col:
        raise ValueError(f"need {n_col} colours")
    it = iter(colours)
    steps = [(o, f"{k}{next(it)}" if k in ("start", "brick") else k) for o, k in layout]
    return Diagram.from_steps(WALL, 0, steps)


def wall_colour_count(pairs: int, layers: int) -> int:
    return pairs + layers * pairs + (layers - 1) * (pairs - 1)


def xor_ca(seed: tuple[int, ...], layers: int) -> list[tuple[int, ...]]:
    """Rows of the staggered xor automaton: ``layers`` full rows interleaved with short rows.

    A full row has one cell per pair; the short row between two full rows has
    one cell per adjacent pair of cells.  Edge cells of a full row combine the
    cell above with the neighbouring short-row cell.
    """
    rows = [tuple(seed)]
    full = tuple(seed)
    n = len(seed)
    for _ in range(layers - 1):
        short = tuple(full[j] ^ full[j + 1] for j in range(n - 1))
        rows.append(short)
        if n == 1:
            nxt = (full[0] ^ full[0],)
        else:
            nxt = tuple((full[0] if j == 0 else short[j - 1]) ^ (full[n - 1] if j == n - 1 else short[j])
                        for j in range(n))
        rows.append(nxt)
        full = nxt
    return rows


def ca_colourings(pairs: int, layers: int) -> set[tuple[int, ...]]:
    """Colour vectors (starts then bricks in wall step order) of every seeded evolution."""
    out = set()
    for seed in product((0, 1), repeat=pairs):
        rows = xor_ca(seed, layers)
        out.add(tuple(seed) + tuple(c for row in rows for c in row))
    return out


def accepted_colourings(a: NondetAutomaton, pairs: int, layers: int) -> set[tuple[int, ...]]:
    """Colourings of a wall accepted by ``a``, found by a depth-first frontier run."""
    layout = wall_layout(pairs, layers)
    out = set()

    def rec(i: int, frontier: set, width: int, cols: tuple):
        if not frontier:
            return
        if i == len(layout):
            if frontier == {()}:
                out.add(cols)
            return
        off, kind = layout[i]
        options = [(f"{kind}{c}", (c,)) for c in (0, 1)] if kind in ("start", "brick") else [(kind, ())]
        for gen, extra in options:
            step = Diagram.from_steps(a.alphabet, width, [(off, gen)])
            rec(i + 1, frontier_run(a, step, frontier), step.coarity, cols + extra)

    rec(0, {()}, 0, ())
    return out


# -- example with a non-convex relation -------------------------------------

EX13 = Alphabet({"γ": (0, 4), "b": (1, 0), "c": (1, 0), "δ": (2, 0)})


def _example13() -> CorpusEntry:
    g = make_grammar(EX13, ["A", "B", "C"], [
        ("γ_b", (), ("A", "B", "B", "A"), "γ"),
        ("γ_c", (), ("A", "C", "C", "A"), "γ"),
        ("b", ("B",), (), "b"),
        ("c", ("C",), (), "c"),
        ("δ", ("A", "A"), (), "δ"),
    ])
    return CorpusEntry("example13", g, "two connected members sharing an outer frame",
                       "enumeration, convexity check and causal closure search")


def ex13_member(inner: str) -> Diagram:
    return Diagram.from_steps(EX13, 0, [(0, "γ"), (1, inner), (1, inner), (0, "δ")])


def ex13_mixed() -> Diagram:
    return Diagram.from_steps(EX13, 0, [(0, "γ"), (1, "b"), (1, "c"), (0, "δ")])


# -- bones ------------------------------------------------------------------

BONES = Alphabet({"u": (0, 1), "v": (1, 0)})


def _bones() -> CorpusEntry:
    g = make_grammar(BONES, ["s"], [("u", (), ("s",), "u"), ("v", ("s",), (), "v")])
    a = grammar_to_automaton(g)
    return CorpusEntry("bones", g, "tensor powers of a two-generator bone",
                       "every scalar is a tensor power of u;v",
                       det=nondet_to_det(a), presentation=trivial_pro(BONES, 3))


def bone_power(k: int) -> Diagram:
    return Diagram.from_steps(BONES, 0, [(0, "u"), (0, "v")] * k)


# -- words and trees --------------------------------------------------------

NFA_SEEDS = (11, 23, 47)


def ends_in_x() -> ClassicalNFA:
    return ClassicalNFA.single_initial(
        ["p", "q"], ["x", "y"],
        {("p", "x", "p"), ("p", "y", "p"), ("p", "x", "q")}, "p", {"q"})


def sample_nfas() -> list[ClassicalNFA]:
    return [ends_in_x()] + [random_nfa(s) for s in NFA_SEEDS]


def _nfa_samples() -> CorpusEntry:
    n = ends_in_x()
    _, a = nfa_to_monoidal(n)
    return CorpusEntry("nfa_samples", automaton_to_grammar(a), "words over {x, y} ending in x",
                       "direct NFA simulation", extra={"nfas": sample_nfas()})


BOOL_LIST_RANKS = {"t": 0, "f": 0, "nil": 0, "cons": 2}


def bool_list_automaton() -> TreeAutomaton:
    return TreeAutomaton(
        ["Bool", "List"], BOOL_LIST_RANKS,
        {"t": [((), "Bool")], "f": [((), "Bool")], "nil": [((), "List")],
         "cons": [(("Bool", "List"), "List")]},
        {"List"})


def _bool_list() -> CorpusEntry:
    t = bool_list_automaton()
    _, a = treeaut_to_monoidal(t)
    return CorpusEntry("bool_list", automaton_to_grammar(a), "well-typed lists of booleans as trees",
                       "direct bottom-up tree run", extra={"tree_automaton": t})


def bu_run(t: TreeAutomaton, tree) -> set:
    """States reachable at the root of ``tree``."""
    kids = [bu_run(t, k) for k in tree[1:]]
    return {q for qs, q in t.transitions[tree[0]] if len(qs) == len(kids)
            and all(x in s for x, s in zip(qs, kids))}


# -- registry ---------------------------------------------------------------

_BUILDERS: dict[str, Callable[[], CorpusEntry]] = {
    "dyck": _dyck,
    "brick_wall": _brick_wall,
    "xor_tiles": _xor_tiles,
    "sierpinski": _sierpinski,
    "example13": _example13,
    "bones": _bones,
    "nfa_samples": _nfa_samples,
    "bool_list": _bool_list,
}

NAMES = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def build(name: str) -> CorpusEntry:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownEntry(f"no corpus entry named {name!r}; known: {', '.join(NAMES)}") from None


def oracle(name: str, *args):
    """Independent reference answers for an entry.

    dyck(diagram) -> readout balanced; brick_wall(pairs, layers) -> colouring
    count; xor_tiles/sierpinski(pairs, layers) -> set of colour vectors;
    nfa_samples(index, word) and bool_list(tree) -> bool.
    """
    if name == "dyck":
        return balanced(dyck_readout(args[0]))
    if name == "brick_wall":
        return 2 ** wall_colour_count(*args)
    if name in ("xor_tiles", "sierpinski"):
        return ca_colourings(*args)
    if name == "nfa_samples":
        i, word = args
        from .encodings import nfa_accepts
        return nfa_accepts(sample_nfas()[i], word)
    if name == "bool_list":
        return bool(bu_run(bool_list_automaton(), args[0]) & bool_list_automaton().accepting)
    if name in _BUILDERS:
        raise UnknownEntry(f"entry {name!r} has no callable oracle")
    raise UnknownEntry(f"no corpus entry named {name!r}")


def functional_entries() -> list[str]:
    return [n for n in NAMES if is_functional(build(n).automaton)]
