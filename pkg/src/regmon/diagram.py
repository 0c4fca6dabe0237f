"""String diagrams in the free pro over a monoidal alphabet.

A diagram is stored as a list of slices.  Each slice is a tuple of items,
``None`` for an identity wire and a generator name otherwise.  Internally most
algorithms work on the *step* form, where every slice holds exactly one
generator and is recorded as ``(offset, name)``: the generator consumes the
wires ``offset .. offset + arity`` of the current cut.

Equality of diagrams is equality up to planar isotopy.  Two step sequences
denote the same morphism iff they are related by a chain of interchange moves
(swapping adjacent steps that touch disjoint wires), so :func:`normalize`
picks the lexicographically least step sequence of that class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AlphabetMismatch, BoundaryMismatch, NotScalar, UnknownGenerator

Item = str | None
Slice = tuple[Item, ...]
Step = tuple[int, str]

WIRE: Item = None


class Alphabet:
    """A monoidal alphabet: generator names with arity and coarity."""

    __slots__ = ("_items", "_map")

    def __init__(self, generators: Mapping[str, tuple[int, int]] | Iterable[tuple[str, tuple[int, int]]]):
        items = dict(generators.items() if isinstance(generators, Mapping) else generators)
        for name, (ar, coar) in items.items():
            if not isinstance(name, str) or not name:
                raise ValueError(f"generator names must be non-empty strings, got {name!r}")
            if ar < 0 or coar < 0:
                raise ValueError(f"negative arity for {name!r}")
        self._map = {k: (int(a), int(c)) for k, (a, c) in sorted(items.items())}
        self._items = tuple(self._map.items())

    def __contains__(self, name) -> bool:
        return name in self._map

    def __getitem__(self, name: str) -> tuple[int, int]:
        try:
            return self._map[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}:{a}->{c}" for k, (a, c) in self._items)
        return f"Alphabet({body})"

    def items(self):
        return self._items

    def arity(self, name: str) -> int:
        return self[name][0]

    def coarity(self, name: str) -> int:
        return self[name][1]

    def extend(self, extra: Mapping[str, tuple[int, int]]) -> "Alphabet":
        clash = set(extra) & set(self._map)
        if clash:
            raise AlphabetMismatch(f"generator names already in use: {sorted(clash)}")
        return Alphabet({**self._map, **extra})

    def union(self, other: "Alphabet") -> "Alphabet":
        merged = dict(self._map)
        for k, v in other.items():
            if k in merged and merged[k] != v:
                raise AlphabetMismatch(f"generator {k!r} has conflicting types")
            merged[k] = v
        return Alphabet(merged)

    def as_monoidal_graph(self) -> "MonoidalGraph":
        edges = [(k, ("*",) * a, ("*",) * c) for k, (a, c) in self._items]
        return MonoidalGraph(["*"], edges)


@dataclass(frozen=True)
class Edge:
    name: str
    dom: tuple[str, ...]
    cod: tuple[str, ...]


class MonoidalGraph:
    """Finite monoidal graph: vertices and edges typed by words of vertices."""

    def __init__(self, vertices: Iterable[str], edges: Iterable):
        vs = set(vertices)
        try:
            self.vertices = tuple(sorted(vs))
        except TypeError:
            self.vertices = tuple(sorted(vs, key=repr))
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                name, dom, cod = e
                e = Edge(name, tuple(dom), tuple(cod))
            es.append(e)
        names = [e.name for e in es]
        if len(set(names)) != len(names):
            raise ValueError("edge names must be pairwise distinct")
        vs = set(self.vertices)
        for e in es:
            bad = [v for v in e.dom + e.cod if v not in vs]
            if bad:
                raise ValueError(f"edge {e.name!r} uses unknown vertices {bad}")
        self.edges = tuple(sorted(es, key=lambda e: e.name))

    def __eq__(self, other):
        return (isinstance(other, MonoidalGraph) and self.vertices == other.vertices
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"MonoidalGraph(vertices={list(self.vertices)}, edges={len(self.edges)})"


def _widths(alphabet: Alphabet, item: Item) -> tuple[int, int]:
    if item is None:
        return 1, 1
    return alphabet[item]


def check_slices(alphabet: Alphabet, arity: int, slices: Sequence[Sequence[Item]]) -> int:
    """Check the boundary chain and return the coarity.

    Raises ``UnknownGenerator`` or ``BoundaryMismatch`` naming the first bad slice.
    """
    if arity < 0:
        raise BoundaryMismatch(f"negative arity {arity}")
    width = arity
    for i, sl in enumerate(slices):
        w_in = w_out = 0
        for item in sl:
            if item is not None and item not in alphabet:
                raise UnknownGenerator(item, i)
            a, c = _widths(alphabet, item)
            w_in += a
            w_out += c
        if w_in != width:
            raise BoundaryMismatch(f"slice {i} expects {w_in} wires but receives {width}", i)
        width = w_out
    return width


@dataclass(frozen=True)
class Diagram:
    """A morphism ``arity -> coarity`` of the free pro over ``alphabet``."""

    alphabet: Alphabet
    arity: int
    slices: tuple[Slice, ...] = ()
    coarity: int = field(init=False, compare=False)

    def __post_init__(self):
        slices = tuple(tuple(s) for s in self.slices)
        object.__setattr__(self, "slices", slices)
        object.__setattr__(self, "coarity", check_slices(self.alphabet, self.arity, slices))

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, alphabet: Alphabet, n: int = 0) -> "Diagram":
        return cls(alphabet, n, ())

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Diagram":
        return cls(alphabet, 0, ())

    @classmethod
    def generator(cls, alphabet: Alphabet, name: str) -> "Diagram":
        ar, _ = alphabet[name]
        return cls(alphabet, ar, ((name,),))

    @classmethod
    def from_steps(cls, alphabet: Alphabet, arity: int, steps: Iterable[Step]) -> "Diagram":
        slices = []
        width = arity
        for off, name in steps:
            ar, coar = alphabet[name]
            if off < 0 or off + ar > width:
                raise BoundaryMismatch(f"step {len(slices)} at offset {off} does not fit width {width}",
                                       len(slices))
            slices.append((None,) * off + (name,) + (None,) * (width - off - ar))
            width += coar - ar
        return cls(alphabet, arity, tuple(slices))

    # -- views ---------------------------------------------------------------
    @property
    def is_scalar(self) -> bool:
        return self.arity == 0 and self.coarity == 0

    @property
    def is_empty(self) -> bool:
        return self.is_scalar and not self.steps()

    def steps(self) -> list[Step]:
        """Flatten slices into one-generator steps, left item first."""
        out = []
        for sl in self.slices:
            done = 0  # output width of the items already applied in this slice
            for item in sl:
                if item is None:
                    done += 1
                else:
                    out.append((done, item))
                    done += self.alphabet[item][1]
        return out

    def size(self) -> int:
        return sum(1 for sl in self.slices for item in sl if item is not None)

    def generators_used(self) -> list[str]:
        return [g for _, g in self.steps()]

    def widths(self) -> list[int]:
        """Cut widths of the slice boundaries, starting with the arity."""
        ws = [self.arity]
        for sl in self.slices:
            ws.append(sum(_widths(self.alphabet, it)[1] for it in sl))
        return ws

    def max_width(self) -> int:
        return max(self.widths())

    def __str__(self) -> str:
        if not self.slices:
            return f"id({self.arity})" if self.arity else "□"
        parts = []
        for sl in self.slices:
            parts.append("[" + " ".join("|" if it is None else it for it in sl) + "]")
        return ";".join(parts)

    # -- operators -----------------------------------------------------------
    def __rshift__(self, other: "Diagram") -> "Diagram":
        return compose(self, other)

    def __matmul__(self, other: "Diagram") -> "Diagram":
        return tensor(self, other)


def validate_diagram(alphabet: Alphabet, arity: int, slices) -> bool:
    """Return True when the raw slice data forms a diagram, raise otherwise."""
    check_slices(alphabet, arity, [tuple(s) for s in slices])
    return True


def _same_alphabet(d1: Diagram, d2: Diagram) -> None:
    if d1.alphabet != d2.alphabet:
        raise AlphabetMismatch("diagrams are over different alphabets")


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """Sequential composition ``d1 ; d2``."""
    _same_alphabet(d1, d2)
    if d1.coarity != d2.arity:
        raise BoundaryMismatch(f"cannot compose {d1.arity}->{d1.coarity} with {d2.arity}->{d2.coarity}")
    return Diagram(d1.alphabet, d1.arity, d1.slices + d2.slices)


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    """Parallel composition, ``d1`` drawn above ``d2``."""
    _same_alphabet(d1, d2)
    n = max(len(d1.slices), len(d2.slices))
    top = list(d1.slices) + [(None,) * d1.coarity] * (n - len(d1.slices))
    bot = list(d2.slices) + [(None,) * d2.coarity] * (n - len(d2.slices))
    return Diagram(d1.alphabet, d1.arity + d2.arity, tuple(a + b for a, b in zip(top, bot)))


def compose_all(ds: Sequence[Diagram]) -> Diagram:
    out = ds[0]
    for d in ds[1:]:
        out = compose(out, d)
    return out


def tensor_all(ds: Sequence[Diagram], alphabet: Alphabet | None = None) -> Diagram:
    if not ds:
        if alphabet is None:
            raise ValueError("empty tensor needs an alphabet")
        return Diagram.empty(alphabet)
    out = ds[0]
    for d in ds[1:]:
        out = tensor(out, d)
    return out


def whisker(d: Diagram, left: int, right: int) -> Diagram:
    """``id_left ⊗ d ⊗ id_right``."""
    a = d.alphabet
    return tensor(tensor(Diagram.identity(a, left), d), Diagram.identity(a, right))


# -- interchange moves --------------------------------------------------------

def swap_steps(alphabet: Alphabet, first: Step, second: Step) -> list[tuple[Step, Step]]:
    """All ways to run ``second`` before ``first`` by one interchange move.

    Returns a list of ``(second', first')`` pairs; empty when ``second`` reads
    a wire produced by ``first``.  Two results occur only when ``first`` has no
    outputs and ``second`` has no inputs and they meet at the same gap.
    """
    o1, g1 = first
    o2, g2 = second
    ar1, coar1 = alphabet[g1]
    ar2, coar2 = alphabet[g2]
    out = []
    if o2 + ar2 <= o1:
        out.append(((o2, g2), (o1 - ar2 + coar2, g1)))
    if o2 >= o1 + coar1:
        pair = ((o2 - coar1 + ar1, g2), (o1, g1))
        if pair not in out:
            out.append(pair)
    return out


def interchange_class(alphabet: Alphabet, steps: Sequence[Step]) -> set[tuple[Step, ...]]:
    """Every step sequence reachable from ``steps`` by interchange moves."""
    start = tuple(steps)
    seen = {start}
    frontier = [start]
    while frontier:
        s = frontier.pop()
        for i in range(len(s) - 1):
            for b, c in swap_steps(alphabet, s[i], s[i + 1]):
                t = s[:i] + (b, c) + s[i + 2:]
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
    return seen


def _min_arity(alphabet: Alphabet, steps: Sequence[Step]) -> int:
    need = delta = 0
    for o, g in steps:
        ar, coar = alphabet[g]
        need = max(need, o + ar - delta)
        delta += coar - ar
    return need


class _Structure:
    """Occurrences, wires and faces of a step sequence.

    Interchange moves keep occurrence identities, wire sides and the face each
    source sits in, so the class is the set of placements consistent with them.
    """

    def __init__(self, alphabet: Alphabet, steps: Sequence[Step]):
        parent: list[int] = []

        def fresh() -> int:
            parent.append(len(parent))
            return len(parent) - 1

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        n = _min_arity(alphabet, steps)
        self.left = fresh()
        gaps = [self.left] + [fresh() for _ in range(n)]
        cut = list(range(n))
        sides = {w: (gaps[w], gaps[w + 1]) for w in range(n)}
        wire = n
        occs = []
        for o, g in steps:
            ar, coar = alphabet[g]
            ins = tuple(cut[o:o + ar])
            outs = tuple(range(wire, wire + coar))
            wire += coar
            face = gaps[o]
            if coar == 0:
                lo, hi = find(gaps[o]), find(gaps[o + ar])
                if lo != hi:
                    parent[hi] = lo
                mid = [gaps[o]]
            else:
                mid = [gaps[o]] + [fresh() for _ in range(coar - 1)] + [gaps[o + ar]]
                for k, w in enumerate(outs):
                    sides[w] = (mid[k], mid[k + 1])
            gaps[o:o + ar + 1] = mid
            cut[o:o + ar] = outs
            occs.append((g, ins, outs, face))
        self.find = find
        self.n_in = n
        self.final = tuple(cut)
        self.occs = occs
        self.sides = sides
        producer = {w: i for i, (_, _, outs, _) in enumerate(occs) for w in outs}
        self.preds = []
        for _, ins, _, _ in occs:
            m = 0
            for w in ins:
                if w in producer:
                    m |= 1 << producer[w]
            self.preds.append(m)

    def gap_face(self, cut: tuple, k: int) -> int:
        if k > 0:
            return self.find(self.sides[cut[k - 1]][1])
        if cut:
            return self.find(self.sides[cut[0]][0])
        return self.find(self.left)

    def moves(self, mask: int, cut: tuple):
        for i, (g, ins, outs, face) in enumerate(self.occs):
            if mask >> i & 1 or self.preds[i] & ~mask:
                continue
            if ins:
                k = cut.index(ins[0])
                if cut[k:k + len(ins)] != ins:
                    continue
                yield (k, g), i, k, len(ins)
            else:
                f = self.find(face)
                for k in range(len(cut) + 1):
                    if self.gap_face(cut, k) == f:
                        yield (k, g), i, k, 0

    def least(self) -> tuple[Step, ...]:
        memo: dict = {}
        full = (1 << len(self.occs)) - 1

        def best(mask: int, cut: tuple):
            # Least completion from this state, or None at a dead end.
            if mask == full:
                return () if cut == self.final else None
            key = (mask, cut)
            if key in memo:
                return memo[key]
            res = None
            for st, i, k, ar in sorted(self.moves(mask, cut)):
                if res is not None and st > res[0]:
                    break
                rest = best(mask | 1 << i, cut[:k] + self.occs[i][2] + cut[k + ar:])
                if rest is not None and (res is None or (st,) + rest < res):
                    res = (st,) + rest
            memo[key] = res
            return res

        res = best(0, tuple(range(self.n_in)))
        assert res is not None and len(res) == len(self.occs)
        return res


class _Canonicalizer:
    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.memo: dict[tuple[Step, ...], tuple[Step, ...]] = {}

    def __call__(self, steps: Sequence[Step]) -> tuple[Step, ...]:
        steps = tuple(steps)
        hit = self.memo.get(steps)
        if hit is None:
            hit = _Structure(self.alphabet, steps).least()
            self.memo[steps] = hit
            self.memo[hit] = hit
        return hit


_CANONICALIZERS: dict[Alphabet, _Canonicalizer] = {}


def _canonicalizer(alphabet: Alphabet) -> _Canonicalizer:
    c = _CANONICALIZERS.get(alphabet)
    if c is None or len(c.memo) > 500_000:
        c = _CANONICALIZERS[alphabet] = _Canonicalizer(alphabet)
    return c


def canonical_steps(alphabet: Alphabet, steps: Sequence[Step]) -> tuple[Step, ...]:
    """Least step sequence (lexicographic on ``(offset, name)``) in the interchange class."""
    return _canonicalizer(alphabet)(steps)


def normalize(d: Diagram) -> Diagram:
    return Diagram.from_steps(d.alphabet, d.arity, canonical_steps(d.alphabet, d.steps()))


def is_normal(d: Diagram) -> bool:
    return d.slices == normalize(d).slices


def diagrams_equal(d1: Diagram, d2: Diagram) -> bool:
    _same_alphabet(d1, d2)
    if (d1.arity, d1.coarity) != (d2.arity, d2.coarity):
        return False
    if sorted(d1.generators_used()) != sorted(d2.generators_used()):
        return False
    return canonical_steps(d1.alphabet, d1.steps()) == canonical_steps(d2.alphabet, d2.steps())


def canonical_key(d: Diagram) -> tuple:
    """Hashable key identifying the isotopy class of ``d``."""
    return (d.arity, canonical_steps(d.alphabet, d.steps()))


def random_interchange(d: Diagram, rng, moves: int = 10) -> Diagram:
    """Apply up to ``moves`` random interchange moves to the step form of ``d``."""
    steps = d.steps()
    for _ in range(moves):
        if len(steps) < 2:
            break
        i = rng.randrange(len(steps) - 1)
        options = swap_steps(d.alphabet, steps[i], steps[i + 1])
        if options:
            b, a = options[rng.randrange(len(options))]
            steps[i], steps[i + 1] = b, a
    return Diagram.from_steps(d.alphabet, d.arity, steps)


def layered(d: Diagram) -> Diagram:
    """Pack the step form of ``d`` greedily into as few slices as possible.

    Same morphism, different slicing; used for display.
    """
    a = d.alphabet
    slices: list[list[Item]] = []
    for off, g in d.steps():
        ar, _ = a[g]
        if slices and _try_join(a, slices[-1], off, g, ar):
            continue
        width = sum(_widths(a, it)[1] for it in slices[-1]) if slices else d.arity
        slices.append([None] * off + [g] + [None] * (width - off - ar))
    return Diagram(a, d.arity, tuple(tuple(s) for s in slices))


def _try_join(a: Alphabet, sl: list[Item], off: int, g: str, ar: int) -> bool:
    # output position -> item index; gens only join over pass-through wires
    owner = []
    for idx, it in enumerate(sl):
        owner.extend([idx] * _widths(a, it)[1])
    if ar:
        idxs = owner[off:off + ar]
        if any(sl[i] is not None for i in idxs):
            return False
        first = idxs[0]
        sl[first:first + ar] = [g]
        return True
    if 0 < off < len(owner) and owner[off - 1] == owner[off] and sl[owner[off]] is not None:
        return False
    pos = owner[off - 1] + 1 if off > 0 else 0
    sl.insert(pos, g)
    return True


# -- dataflow ---------------------------------------------------------------

@dataclass(frozen=True)
class Occurrence:
    gen: str
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


@dataclass(frozen=True)
class DataflowDag:
    """Occurrences in step order with wire ids; boundary wires listed separately."""

    occurrences: tuple[Occurrence, ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    n_wires: int

    @property
    def producer(self) -> dict[int, tuple[int, int]]:
        out = {}
        for i, occ in enumerate(self.occurrences):
            for p, w in enumerate(occ.outputs):
                out[w] = (i, p)
        return out

    @property
    def consumer(self) -> dict[int, tuple[int, int]]:
        out = {}
        for i, occ in enumerate(self.occurrences):
            for p, w in enumerate(occ.inputs):
                out[w] = (i, p)
        return out

    def predecessors(self, i: int) -> set[int]:
        prod = self.producer
        return {prod[w][0] for w in self.occurrences[i].inputs if w in prod}

    def successors(self, i: int) -> set[int]:
        cons = self.consumer
        return {cons[w][0] for w in self.occurrences[i].outputs if w in cons}

    def components(self) -> list[list[int]]:
        """Occurrence indices grouped by connectivity, ordered by first occurrence."""
        parent = list(range(len(self.occurrences)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        prod = self.producer
        for i, occ in enumerate(self.occurrences):
            for w in occ.inputs:
                if w in prod:
                    ra, rb = find(i), find(prod[w][0])
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = {}
        for i in range(len(self.occurrences)):
            groups.setdefault(find(i), []).append(i)
        return [groups[k] for k in sorted(groups)]

    def signature(self) -> tuple:
        """Isomorphism-sensitive summary used to compare DAGs in tests."""
        return tuple(sorted((o.gen, len(self.predecessors(i)), len(self.successors(i)))
                            for i, o in enumerate(self.occurrences)))


def dataflow_dag(d: Diagram) -> DataflowDag:
    counter = d.arity
    cut = list(range(d.arity))
    occs = []
    for off, g in d.steps():
        ar, coar = d.alphabet[g]
        ins = tuple(cut[off:off + ar])
        outs = tuple(range(counter, counter + coar))
        counter += coar
        cut[off:off + ar] = outs
        occs.append(Occurrence(g, ins, outs))
    return DataflowDag(tuple(occs), tuple(range(d.arity)), tuple(cut), counter)


def sub_diagram(d: Diagram, keep: Iterable[int]) -> Diagram:
    """The scalar sub-diagram formed by the occurrences (step indices) in ``keep``.

    ``keep`` must be closed under wire connectivity within a scalar diagram.
    """
    keep = set(keep)
    a = d.alphabet
    cut: list[bool] = [False] * d.arity  # True when the wire belongs to the kept part
    steps = []
    for idx, (off, g) in enumerate(d.steps()):
        ar, coar = a[g]
        if idx in keep:
            steps.append((sum(cut[:off]), g))
            cut[off:off + ar] = [True] * coar
        else:
            cut[off:off + ar] = [False] * coar
    return Diagram.from_steps(a, 0, steps)


def connected_components(d: Diagram) -> list[Diagram]:
    """Split a scalar diagram into its connected pieces.

    Pieces sitting side by side tensor back to ``d``; a piece enclosed in a
    face of another piece is still reported, but then the tensor of the
    pieces is a different diagram.
    """
    if not d.is_scalar:
        raise NotScalar("connected_components needs a scalar diagram")
    dag = dataflow_dag(d)
    return [sub_diagram(d, comp) for comp in dag.components()]


def is_connected(d: Diagram) -> bool:
    return d.is_scalar and len(dataflow_dag(d).components()) == 1


def has_enclosed_component(d: Diagram) -> bool:
    comps = connected_components(d)
    return len(comps) > 1 and not diagrams_equal(tensor_all(comps), d)


# -- enumeration ------------------------------------------------------------

def _extends_canonically(alphabet: Alphabet, steps: Sequence[Step], new: Step) -> bool:
    """Whether ``steps + [new]`` is canonical, given that ``steps`` is."""
    # Cheap rejection: ``new`` alone can be moved to an earlier, smaller position.
    offsets = {new[0]}
    g = new[1]
    for i in range(len(steps) - 1, -1, -1):
        nxt = set()
        for o in offsets:
            for (o2, _), _ in swap_steps(alphabet, steps[i], (o, g)):
                nxt.add(o2)
        if not nxt:
            break
        if any((o, g) < steps[i] for o in nxt):
            return False
        offsets = nxt
    cand = tuple(steps) + (new,)
    return canonical_steps(alphabet, cand) == cand


def enumerate_diagrams(alphabet: Alphabet, n_in: int, n_out: int, max_generators: int,
                       max_width: int) -> Iterator[Diagram]:
    """Every normal-form diagram ``n_in -> n_out`` within the bounds, exactly once.

    The width bound applies to every cut of the normal form.  Output is
    ordered by generator count, then lexicographically by steps.
    """
    if max(n_in, n_out) > max_width:
        return iter(())
    gens = sorted(alphabet.items())
    drop = max([ar - coar for _, (ar, coar) in gens] + [0])
    grow = max([coar - ar for _, (ar, coar) in gens] + [0])
    found: list[tuple[Step, ...]] = []

    def rec(steps: list[Step], width: int):
        if width == n_out:
            found.append(tuple(steps))
        if len(steps) == max_generators:
            return
        left = max_generators - len(steps) - 1
        for name, (ar, coar) in gens:
            w2 = width - ar + coar
            if w2 > max_width or ar > width:
                continue
            if w2 - left * drop > n_out or w2 + left * grow < n_out:
                continue
            for off in range(width - ar + 1):
                st = (off, name)
                if _extends_canonically(alphabet, steps, st):
                    steps.append(st)
                    rec(steps, w2)
                    steps.pop()

    rec([], n_in)
    found.sort(key=lambda s: (len(s), s))
    return (Diagram.from_steps(alphabet, n_in, s) for s in found)


def enumerate_scalars(alphabet: Alphabet, max_generators: int, max_width: int) -> Iterator[Diagram]:
    need = max([max(ar, coar) for _, (ar, coar) in alphabet.items()] + [0])
    if max_width < need:
        raise ValueError(f"max_width must be at least {need} for this alphabet")
    return enumerate_diagrams(alphabet, 0, 0, max_generators, max_width)
