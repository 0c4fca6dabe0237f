"""Brute-force reference implementations used only by the tests.

Nothing here calls the library's run, normalization or determinization code;
each oracle works from the raw slice lists or from first principles.
"""

from __future__ import annotations

from collections import deque
from itertools import product


def occurrences(alphabet, arity, slices):
    """Walk slices left to right, naming wires; returns (occurrences, input wires, output wires).

    Each occurrence is ``(gen, input wire ids, output wire ids)``.
    """
    cur = list(range(arity))
    fresh = arity
    occs = []
    for sl in slices:
        nxt = []
        pos = 0
        for item in sl:
            if item is None:
                nxt.append(cur[pos])
                pos += 1
                continue
            ar, coar = alphabet[item]
            ins = cur[pos:pos + ar]
            pos += ar
            outs = list(range(fresh, fresh + coar))
            fresh += coar
            occs.append((item, tuple(ins), tuple(outs)))
            nxt += outs
        assert pos == len(cur), "slice does not match its input width"
        cur = nxt
    return occs, tuple(range(arity)), tuple(cur)


def brute_accepts(a, d) -> bool:
    """Search for a labelling of every wire by a state that every occurrence respects."""
    occs, ins, outs = occurrences(d.alphabet, d.arity, d.slices)
    assert not ins and not outs
    table = {g: list(a.transitions[g]) for g in d.alphabet}

    def rec(i, label):
        if i == len(occs):
            return True
        g, wi, wo = occs[i]
        want = tuple(label[w] for w in wi)
        for w, v in table[g]:
            if tuple(w) == want:
                new = dict(label)
                new.update(zip(wo, v))
                if rec(i + 1, new):
                    return True
        return False

    return rec(0, {})


def brute_relation(a, d) -> set:
    """Pairs (input word, output word) admitted by some wire labelling of ``d``."""
    occs, ins, outs = occurrences(d.alphabet, d.arity, d.slices)
    table = {g: list(a.transitions[g]) for g in d.alphabet}
    found = set()
    for start in product(a.states, repeat=len(ins)):
        stack = [(0, dict(zip(ins, start)))]
        while stack:
            i, label = stack.pop()
            if i == len(occs):
                found.add((tuple(start), tuple(label[w] for w in outs)))
                continue
            g, wi, wo = occs[i]
            want = tuple(label[w] for w in wi)
            for w, v in table[g]:
                if tuple(w) == want:
                    new = dict(label)
                    new.update(zip(wo, v))
                    stack.append((i + 1, new))
    return found


# -- interchange classes ----------------------------------------------------

def step_swaps(alphabet, s1, s2):
    """Every way to exchange two consecutive steps while keeping the diagram."""
    (o1, g1), (o2, g2) = s1, s2
    ar1, co1 = alphabet[g1]
    ar2, co2 = alphabet[g2]
    out = set()
    if o2 >= o1 + co1:
        out.add(((o2 - co1 + ar1, g2), (o1, g1)))
    if o2 + ar2 <= o1:
        out.add(((o2, g2), (o1 - ar2 + co2, g1)))
    return out


def bfs_class(alphabet, steps, limit=200_000):
    start = tuple(steps)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for i in range(len(s) - 1):
            for a, b in step_swaps(alphabet, s[i], s[i + 1]):
                t = s[:i] + (a, b) + s[i + 2:]
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
                    if len(seen) > limit:
                        raise RuntimeError("class too large for the oracle")
    return seen


# -- words and trees --------------------------------------------------------

def nfa_run(transitions, initials, finals, word) -> bool:
    """Plain subset simulation over ``(p, letter, q)`` triples."""
    succ = {}
    for p, x, q in transitions:
        succ.setdefault((p, x), set()).add(q)
    cur = set(initials)
    for x in word:
        nxt = set()
        for p in cur:
            nxt |= succ.get((p, x), set())
        cur = nxt
    return bool(cur & set(finals))


def bu_states(rules, tree) -> set:
    """States a nondeterministic bottom-up tree automaton can reach at the root.

    ``rules`` maps a symbol to a list of ``(child states, state)``.
    """
    sym, kids = tree[0], tree[1:]
    below = [bu_states(rules, k) for k in kids]
    return {q for qs, q in rules[sym] if all(x in s for x, s in zip(qs, below))}


def tree_subset_table(rules, ranks):
    """Deterministic subset automaton: (symbol, tuple of child subsets) -> subset."""
    states = sorted({q for rs in rules.values() for qs, q in rs} |
                    {x for rs in rules.values() for qs, _ in rs for x in qs})
    subsets = [frozenset(c for c, bit in zip(states, bits) if bit)
               for bits in product((0, 1), repeat=len(states))]
    table = {}
    for sym, r in ranks.items():
        for kids in product(subsets, repeat=r):
            table[(sym, kids)] = frozenset(q for qs, q in rules[sym]
                                           if all(x in s for x, s in zip(qs, kids)))
    return table


def subset_run(table, tree) -> frozenset:
    return table[(tree[0], tuple(subset_run(table, k) for k in tree[1:]))]


# -- walls ------------------------------------------------------------------

def simulate_wall(seed, layers):
    """Colours of every brick of a staggered xor wall, row by row.

    Wires are tracked geometrically: a start of colour c emits (c, 0), a brick
    reads two wires and writes its xor on both outputs, half bricks pass
    colours through.
    """
    n = len(seed)
    wires = []
    for c in seed:
        wires += [c, 0]
    colours = list(seed)
    for k in range(layers):
        if k:
            # even layer: pair wire 2j+1 with 2j+2
            for j in range(n - 1):
                c = wires[2 * j + 1] ^ wires[2 * j + 2]
                wires[2 * j + 1] = wires[2 * j + 2] = c
                colours.append(c)
        for j in range(n):
            c = wires[2 * j] ^ wires[2 * j + 1]
            wires[2 * j] = wires[2 * j + 1] = c
            colours.append(c)
    return tuple(colours)


def wall_configurations(pairs, layers) -> set:
    return {simulate_wall(seed, layers) for seed in product((0, 1), repeat=pairs)}


def balanced(word) -> bool:
    stack = []
    for ch in word:
        if ch == "(":
            stack.append(ch)
        elif not stack:
            return False
        else:
            stack.pop()
    return not stack


def lift_accepts(grammar, d) -> bool:
    """Whether ``d`` is the labelling image of some scalar machine diagram.

    Each occurrence is lifted to an edge with the same label whose domain
    matches the vertices already chosen for its input wires.
    """
    occs, _, _ = occurrences(d.alphabet, d.arity, d.slices)
    by_label = {}
    for e in grammar.edges:
        by_label.setdefault(grammar.labelling[e.name], []).append(e)

    def rec(i, vertex):
        if i == len(occs):
            return True
        g, wi, wo = occs[i]
        want = tuple(vertex[w] for w in wi)
        for e in by_label.get(g, ()):
            if tuple(e.dom) == want:
                new = dict(vertex)
                new.update(zip(wo, e.cod))
                if rec(i + 1, new):
                    return True
        return False

    return rec(0, {})
