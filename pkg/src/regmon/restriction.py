"""Copy/discard extension of a pro, term graphs, causal histories and history merging."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .diagram import Alphabet, Diagram, dataflow_dag, normalize
from .determinize import DetAutomaton, det_run
from .errors import (AlphabetMismatch, NotInImage, NotMergeable, NotScalar,
                     SearchBudgetExceeded)

COPY, DISCARD, SWAP = "copy", "discard", "swap"
STRUCTURE = {COPY: (1, 2), DISCARD: (1, 0), SWAP: (2, 2)}


@lru_cache(maxsize=None)
def rest_alphabet(alphabet: Alphabet) -> Alphabet:
    """``alphabet`` plus copy, discard and swap."""
    if alphabet.union(Alphabet(STRUCTURE)) == alphabet:
        return alphabet
    clash = set(STRUCTURE) & set(alphabet)
    if clash:
        raise AlphabetMismatch(f"generator names reserved for the restriction structure: {sorted(clash)}")
    return alphabet.extend(STRUCTURE)


def base_alphabet(alphabet: Alphabet) -> Alphabet:
    return Alphabet({g: t for g, t in alphabet.items() if g not in STRUCTURE})


def embed(d: Diagram) -> Diagram:
    """Read a diagram of the pro as a diagram of its restriction extension."""
    return Diagram(rest_alphabet(d.alphabet), d.arity, d.slices)


@lru_cache(maxsize=64)
def _structural(a: DetAutomaton) -> DetAutomaton:
    alph = rest_alphabet(a.alphabet)
    trans = dict(a.transitions)
    trans[COPY] = {(q,): (q, q) for q in a.states}
    trans[DISCARD] = {(q,): () for q in a.states}
    trans[SWAP] = {(p, q): (q, p) for p in a.states for q in a.states}
    return DetAutomaton(alph, a.states, trans)


def det_run_rest(a: DetAutomaton, r: Diagram) -> bool:
    """Run a deterministic automaton on a copy/discard diagram: copy is the diagonal, discard is total."""
    if not r.is_scalar:
        raise NotScalar("det_run_rest needs a scalar diagram")
    if base_alphabet(r.alphabet) != a.alphabet:
        raise AlphabetMismatch("diagram is not over the automaton's alphabet")
    ext = _structural(a)
    return det_run(ext, Diagram(ext.alphabet, 0, r.slices), ()) == ()


# -- histories --------------------------------------------------------------

@dataclass(frozen=True)
class History:
    rest: Diagram
    source: Diagram
    kept: frozenset


def _down_closed_sets(n: int, preds: list[set]) -> list[frozenset]:
    out = [frozenset()]
    # Extend each set by occurrences whose predecessors are already present, in index order.
    seen = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for s in frontier:
            for i in range(n):
                if i not in s and preds[i] <= s:
                    t = s | {i}
                    if t not in seen:
                        seen.add(t)
                        out.append(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def history_of(d: Diagram, kept: Iterable[int]) -> Diagram:
    """Keep the given occurrences and discard every wire leaving them towards a dropped one."""
    kept = set(kept)
    alph = rest_alphabet(d.alphabet)
    base = d.alphabet
    cut = [False] * d.arity
    steps = []
    for idx, (off, g) in enumerate(d.steps()):
        ar, coar = base[g]
        if idx in kept:
            if not all(cut[off:off + ar]):
                raise ValueError("kept occurrences are not downward closed")
            steps.append((sum(cut[:off]), g))
            cut[off:off + ar] = [True] * coar
        else:
            for k in range(off, off + ar):
                if cut[k]:
                    steps.append((sum(cut[:k]), DISCARD))
                    cut[k] = False
            cut[off:off + ar] = [False] * coar
    return Diagram.from_steps(alph, d.arity, steps)


def prefix_histories(d: Diagram) -> list[History]:
    """One history per downward-closed set of occurrences, smallest first."""
    if not d.is_scalar:
        raise NotScalar("histories are defined for scalar diagrams")
    dag = dataflow_dag(d)
    n = len(dag.occurrences)
    preds = [dag.predecessors(i) for i in range(n)]
    return [History(history_of(d, s), d, s) for s in _down_closed_sets(n, preds)]


# -- term graphs ------------------------------------------------------------

class _TieBudget(Exception):
    pass


_COMPONENT_KEYS: dict = {}


def _component_key(items: tuple, max_branches: int = 20_000) -> tuple | None:
    """Canonical key of one connected term graph given as sorted ``(node, (gen, ins, outs))`` pairs.

    Every node is reachable backwards from a top node, one none of whose
    outputs is read, and inputs are ordered.  Tops are taken one at a time;
    each contributes the block of nodes it newly reaches, named in
    depth-first order.  The least block goes next and ties are branched on,
    except that tied tops whose new nodes no other top can reach are
    interchangeable and only one of them is tried.
    """
    if items in _COMPONENT_KEYS:
        return _COMPONENT_KEYS[items]
    nodes = dict(items)
    producer = {w: (i, p) for i, (_, _, outs) in nodes.items() for p, w in enumerate(outs)}
    read = {w for _, ins, _ in nodes.values() for w in ins}
    tops = [i for i, (_, _, outs) in nodes.items() if not any(w in read for w in outs)]
    closure: dict = {}

    def below(i) -> frozenset:
        if i not in closure:
            closure[i] = frozenset([i]).union(*(below(producer[w][0]) for w in nodes[i][1]))
        return closure[i]

    for t in tops:
        below(t)
    budget = [max_branches]

    def block(top, ids):
        new: dict = {}
        order = []

        def name(n):
            new[n] = len(ids) + len(new)
            order.append(n)
            for w in nodes[n][1]:
                j = producer[w][0]
                if j not in ids and j not in new:
                    name(j)

        name(top)
        entries = []
        for n in order:
            g, ins, _ = nodes[n]
            refs = tuple((ids[j] if j in ids else new[j], p) for j, p in (producer[w] for w in ins))
            entries.append((g, refs))
        return tuple(entries), new

    def search(ids, remaining):
        if not remaining:
            return ()
        budget[0] -= 1
        if budget[0] < 0:
            raise _TieBudget
        blocks = {t: block(t, ids) for t in remaining}
        least = min(b for b, _ in blocks.values())
        best = None
        free_tried = False
        for t in remaining:
            if blocks[t][0] != least:
                continue
            others = frozenset().union(*(closure[u] for u in remaining if u != t))
            if not others & blocks[t][1].keys():
                if free_tried:
                    continue
                free_tried = True
            nxt = dict(ids)
            nxt.update(blocks[t][1])
            cand = (least,) + search(nxt, tuple(u for u in remaining if u != t))
            if best is None or cand < best:
                best = cand
        return best

    try:
        key = search({}, tuple(tops))
        assert sum(len(b) for b in key) == len(nodes)
    except _TieBudget:
        key = None
    if len(_COMPONENT_KEYS) > 500_000:
        _COMPONENT_KEYS.clear()
    _COMPONENT_KEYS[items] = key
    return key


@dataclass
class TermGraph:
    """Occurrences of base generators joined by wires with arbitrary fan-out.

    ``nodes[i] = (gen, input wires, output wires)``; ``consumers[w]`` lists the
    ``(node, port)`` pairs reading wire ``w``.
    """

    alphabet: Alphabet
    nodes: dict = field(default_factory=dict)
    consumers: dict = field(default_factory=dict)

    def copy(self) -> "TermGraph":
        return TermGraph(self.alphabet, dict(self.nodes), {w: list(c) for w, c in self.consumers.items()})

    def fan_out(self, w: int) -> int:
        return len(self.consumers[w])

    def gen_counts(self) -> dict:
        out: dict = {}
        for g, _, _ in self.nodes.values():
            out[g] = out.get(g, 0) + 1
        return out

    def bad_wires(self) -> list[int]:
        return sorted(w for w, c in self.consumers.items() if len(c) != 1)

    def to_nx(self) -> nx.DiGraph:
        G = nx.DiGraph()
        for i, (g, ins, outs) in self.nodes.items():
            G.add_node(("n", i), label="g:" + ascii(g))
        for w, cons in self.consumers.items():
            G.add_node(("w", w), label=f"w:{len(cons)}")
        for i, (g, ins, outs) in self.nodes.items():
            for p, w in enumerate(outs):
                G.add_edge(("n", i), ("w", w), label=f"o{p}")
            ports: dict = {}
            for p, w in enumerate(ins):
                ports.setdefault(w, []).append(p)
            for w, ps in ports.items():
                G.add_edge(("w", w), ("n", i), label="i" + ",".join(map(str, ps)))
        return G

    def canonical_key(self) -> tuple | None:
        """A complete isomorphism invariant: the sorted keys of the connected components.

        None if some component is too symmetric for the tie search.
        """
        parent = {i: i for i in self.nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        producer = {w: i for i, (_, _, outs) in self.nodes.items() for w in outs}
        for i, (_, ins, _) in self.nodes.items():
            for w in ins:
                a, b = find(i), find(producer[w])
                if a != b:
                    parent[a] = b
        comps: dict = {}
        for i in sorted(self.nodes):
            comps.setdefault(find(i), []).append((i, self.nodes[i]))
        keys = []
        for items in comps.values():
            k = _component_key(tuple(items))
            if k is None:
                return None
            keys.append(k)
        return tuple(sorted(keys))

    def wl_hash(self) -> str:
        return nx.weisfeiler_lehman_graph_hash(self.to_nx(), node_attr="label", edge_attr="label")

    def isomorphic(self, other: "TermGraph") -> bool:
        if self.gen_counts() != other.gen_counts() or len(self.consumers) != len(other.consumers):
            return False
        k1, k2 = self.canonical_key(), other.canonical_key()
        if k1 is not None and k2 is not None:
            return k1 == k2
        return self.nx_isomorphic(other)

    def nx_isomorphic(self, other: "TermGraph") -> bool:
        """Isomorphism by graph matching on the labelled bipartite node/wire graph."""
        return nx.is_isomorphic(self.to_nx(), other.to_nx(),
                                node_match=lambda a, b: a["label"] == b["label"],
                                edge_match=lambda a, b: a["label"] == b["label"])


def canonical_termgraph(r: Diagram) -> TermGraph:
    """Collapse copy trees into fan-out and drop discarded copy branches."""
    if not r.is_scalar:
        raise NotScalar("term graphs are built for scalar diagrams")
    base = base_alphabet(r.alphabet)
    t = TermGraph(base)
    cut: list[int] = []
    wire = 0
    for i, (off, g) in enumerate(r.steps()):
        if g == COPY:
            cut[off:off + 1] = [cut[off], cut[off]]
        elif g == DISCARD:
            del cut[off]
        elif g == SWAP:
            cut[off], cut[off + 1] = cut[off + 1], cut[off]
        else:
            ar, coar = base[g]
            ins = tuple(cut[off:off + ar])
            outs = tuple(range(wire, wire + coar))
            wire += coar
            for p, w in enumerate(ins):
                t.consumers[w].append((i, p))
            for w in outs:
                t.consumers[w] = []
            t.nodes[i] = (g, ins, outs)
            cut[off:off + ar] = outs
    return t


def disjoint_union(graphs: Sequence[TermGraph]) -> TermGraph:
    if not graphs:
        raise ValueError("need at least one graph")
    out = TermGraph(graphs[0].alphabet)
    n_off = w_off = 0
    for t in graphs:
        if t.alphabet != out.alphabet:
            raise AlphabetMismatch("term graphs over different alphabets")
        for i, (g, ins, outs) in t.nodes.items():
            out.nodes[i + n_off] = (g, tuple(w + w_off for w in ins), tuple(w + w_off for w in outs))
        for w, cons in t.consumers.items():
            out.consumers[w + w_off] = [(i + n_off, p) for i, p in cons]
        n_off += max(t.nodes, default=-1) + 1
        w_off += max(t.consumers, default=-1) + 1
    return out


def _planar_steps(t: TermGraph) -> list | None:
    producer = {}
    for i, (g, ins, outs) in t.nodes.items():
        for w in outs:
            producer[w] = i
    order = sorted(t.nodes)
    failed = set()

    def rec(placed: frozenset, cut: tuple):
        if len(placed) == len(order):
            return [] if not cut else None
        key = (placed, cut)
        if key in failed:
            return None
        for i in order:
            if i in placed:
                continue
            g, ins, outs = t.nodes[i]
            if ins:
                starts = [k for k in range(len(cut) - len(ins) + 1) if cut[k:k + len(ins)] == ins]
            else:
                starts = range(len(cut) + 1)
            for k in starts:
                rest = rec(placed | {i}, cut[:k] + outs + cut[k + len(ins):])
                if rest is not None:
                    return [(k, g)] + rest
        failed.add(key)
        return None

    return rec(frozenset(), ())


def termgraph_to_diagram(t: TermGraph) -> Diagram:
    """A copy/discard-free planar diagram with this term graph, in normal form."""
    bad = t.bad_wires()
    if bad:
        w = bad[0]
        raise NotInImage(f"wire {w} has fan-out {t.fan_out(w)}")
    steps = _planar_steps(t)
    if steps is None:
        raise NotInImage("no planar layering exists")
    return normalize(Diagram.from_steps(t.alphabet, 0, steps))


def in_image(t: TermGraph) -> bool:
    return not t.bad_wires() and _planar_steps(t) is not None


# -- folding ----------------------------------------------------------------

@dataclass(frozen=True)
class Fold:
    """Merge occurrence ``drop`` into ``keep``: same generator, same input wires."""

    keep: int
    drop: int
    gen: str


def fold_candidates(t: TermGraph) -> list[Fold]:
    groups: dict = {}
    for i in sorted(t.nodes):
        g, ins, _ = t.nodes[i]
        groups.setdefault((g, ins), []).append(i)
    out = []
    for (g, _), ids in sorted(groups.items(), key=lambda kv: kv[1][0]):
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                out.append(Fold(ids[a], ids[b], g))
    return out


def apply_fold(t: TermGraph, f: Fold) -> TermGraph:
    gk, ik, ok = t.nodes[f.keep]
    gd, idr, od = t.nodes[f.drop]
    if gk != gd or gk != f.gen or ik != idr:
        raise NotMergeable(f"cannot fold {f}: generators or inputs differ")
    u = t.copy()
    del u.nodes[f.drop]
    for w in idr:
        u.consumers[w] = [(n, p) for n, p in u.consumers[w] if n != f.drop]
    ren = dict(zip(od, ok))
    for wd, wk in ren.items():
        for n, p in u.consumers.pop(wd):
            g, ins, outs = u.nodes[n]
            u.nodes[n] = (g, tuple(ren.get(w, w) for w in ins), outs)
            u.consumers[wk].append((n, p))
    return u


class _IsoMemo:
    def __init__(self):
        self.keys: set = set()
        self.buckets: dict[str, list[TermGraph]] = {}
        self.exact: set = set()

    def add(self, t: TermGraph) -> bool:
        """Record ``t``; False if an isomorphic graph was already present."""
        # fold orders that pick the same partition give literally equal graphs
        raw = tuple(sorted(t.nodes.items()))
        if raw in self.exact:
            return False
        self.exact.add(raw)
        key = t.canonical_key()
        if key is not None:
            if key in self.keys:
                return False
            self.keys.add(key)
            return True
        h = t.wl_hash()
        bucket = self.buckets.setdefault(h, [])
        if any(t.nx_isomorphic(s) for s in bucket):
            return False
        bucket.append(t)
        return True


@dataclass(frozen=True)
class MergeResult:
    diagram: Diagram
    trace: tuple
    graph: TermGraph = field(compare=False)


def _dominates(t: TermGraph, target_counts: dict) -> bool:
    counts = t.gen_counts()
    return counts.keys() == target_counts.keys() and all(counts[g] >= c for g, c in target_counts.items())


def fold_search(start: TermGraph, target: TermGraph | None = None,
                budget: int = 200_000, memo: _IsoMemo | None = None) -> Iterator[tuple[TermGraph, tuple]]:
    """Breadth-first over fold sequences, one visit per isomorphism class.

    Yields every reached graph that lies in the image of the pro (and, when a
    target is given, is isomorphic to it) together with its fold trace.  A
    shared ``memo`` skips graphs already explored by earlier searches.
    """
    target_counts = target.gen_counts() if target is not None else None
    target_key = target.canonical_key() if target is not None else None
    if memo is None:
        memo = _IsoMemo()
    if not memo.add(start):
        return
    queue = deque([(start, ())])
    seen = 0
    while queue:
        t, trace = queue.popleft()
        seen += 1
        if seen > budget:
            raise SearchBudgetExceeded(budget)
        if target is not None:
            if t.gen_counts() == target_counts and (
                    t.canonical_key() == target_key if target_key is not None else t.nx_isomorphic(target)):
                yield t, trace
                return
        elif not t.bad_wires() and in_image(t):
            yield t, trace
        for f in fold_candidates(t):
            u = apply_fold(t, f)
            if target_counts is not None and not _dominates(u, target_counts):
                continue
            if not _viable(u):
                continue
            if memo.add(u):
                queue.append((u, trace + (f,)))


def _as_graph(h) -> TermGraph:
    if isinstance(h, History):
        h = h.rest
    if isinstance(h, TermGraph):
        return h
    return canonical_termgraph(h)


def merge_histories(hs: Sequence, target: Diagram | None = None, budget: int = 200_000) -> MergeResult:
    """Fold the tensor of ``hs`` until it becomes a copy/discard-free planar diagram.

    With ``target`` the search looks for that diagram specifically; otherwise
    the first in-image graph reached (fewest folds) is returned.
    """
    graphs = [_as_graph(h) for h in hs]
    start = disjoint_union(graphs)
    tgt = canonical_termgraph(target) if target is not None else None
    for t, trace in fold_search(start, tgt, budget):
        return MergeResult(termgraph_to_diagram(t), trace, t)
    raise NotMergeable("no fold sequence reaches a diagram of the pro")


def replay_trace(hs: Sequence, trace: Sequence[Fold]) -> TermGraph:
    """Re-apply a fold trace step by step, checking each fold's side condition."""
    t = disjoint_union([_as_graph(h) for h in hs])
    for f in trace:
        t = apply_fold(t, f)
    return t


def absorbs(d: Diagram, h, budget: int = 200_000) -> bool:
    """Whether ``d`` tensored with ``h`` folds back to ``d``."""
    if not d.is_scalar:
        raise NotScalar("absorbs needs scalar diagrams")
    try:
        merge_histories([embed(d), h], target=d, budget=budget)
    except NotMergeable:
        return False
    return True


# -- causal closure ---------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    histories: tuple
    trace: tuple
    diagram: Diagram


@dataclass(frozen=True)
class NotFoundWithinBounds:
    tuples_tried: int


def distinct_histories(members: Iterable[Diagram]) -> list[History]:
    """Prefix histories of all members, one per term-graph isomorphism class."""
    memo = _IsoMemo()
    out = []
    for m in members:
        for h in prefix_histories(m):
            if memo.add(canonical_termgraph(h.rest)):
                out.append(h)
    return out


def _history_tuples(hist: list[History], size: int):
    for k in range(1, size + 1):
        yield from combinations_with_replacement(range(len(hist)), k)


def _viable(t: TermGraph) -> bool:
    """Necessary condition for some fold sequence to reach fan-out exactly one everywhere.

    Folds only merge nodes and never split them, so two readers of a wire
    that differ in generator or port stay apart forever, and a discarded
    output survives unless its producer still has a twin to fold into.
    """
    counts = None
    producer = None
    for w, cons in t.consumers.items():
        if len(cons) > 1:
            (n0, p0), rest = cons[0], cons[1:]
            g0 = t.nodes[n0][0]
            for n, p in rest:
                if n == n0 or p != p0 or t.nodes[n][0] != g0:
                    return False
        elif not cons:
            if counts is None:
                counts = t.gen_counts()
                producer = {x: g for g, _, outs in t.nodes.values() for x in outs}
            if counts[producer[w]] < 2:
                return False
    return True


def causal_closure_witness(a, candidate: Diagram, max_generators: int = 6, tuple_size: int = 2,
                           max_width: int = 6, members: Iterable[Diagram] | None = None,
                           budget: int = 200_000) -> Witness | NotFoundWithinBounds:
    """Search tuples of member histories whose merge is ``candidate``.

    Members are enumerated from ``a`` up to the given bounds unless supplied.
    """
    from .automaton import enumerate_members
    if not candidate.is_scalar:
        raise NotScalar("candidate must be scalar")
    if members is None:
        members = enumerate_members(a, max_generators, max_width)
    hist = distinct_histories(members)
    target = canonical_termgraph(candidate)
    tcounts = target.gen_counts()
    tried = 0
    for tup in _history_tuples(hist, tuple_size):
        hs = [hist[i] for i in tup]
        start = disjoint_union([canonical_termgraph(h.rest) for h in hs])
        if not _dominates(start, tcounts):
            continue
        tried += 1
        for t, trace in fold_search(start, target, budget):
            return Witness(tuple(h.rest for h in hs), trace, termgraph_to_diagram(t))
    return NotFoundWithinBounds(tried)


def closure_merges(members: Iterable[Diagram], tuple_size: int = 3,
                   budget: int = 200_000) -> Iterator[tuple[tuple, Diagram, tuple]]:
    """Every in-image diagram reachable by folding a tuple of member histories.

    Graphs reached from an earlier tuple are not explored again, so each
    merge is reported for the first tuple that reaches it.
    """
    hist = distinct_histories(members)
    memo = _IsoMemo()
    for tup in _history_tuples(hist, tuple_size):
        hs = tuple(hist[i].rest for i in tup)
        start = disjoint_union([canonical_termgraph(h) for h in hs])
        if not _viable(start):
            continue
        for t, trace in fold_search(start, None, budget, memo):
            yield hs, termgraph_to_diagram(t), trace
