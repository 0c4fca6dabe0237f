"""Contexts, approximations of the syntactic congruence, and finite pro presentations."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from .automaton import NondetAutomaton, TransitionRelation, frontier_run, relation_of, sort_states
from .determinize import DetAutomaton
from .diagram import Alphabet, Diagram, compose, enumerate_diagrams, normalize, whisker
from .errors import AlphabetMismatch, CapacityMismatch, IncompleteTables, TableLookupMissing


# -- contexts ---------------------------------------------------------------

@dataclass(frozen=True)
class Context:
    """A scalar diagram with a hole of capacity ``(n, m)`` and ``pad_left``/``pad_right`` wires beside it."""

    left: Diagram
    right: Diagram
    pad_left: int
    pad_right: int
    capacity: tuple[int, int]

    def __post_init__(self):
        n, m = self.capacity
        a, b = self.pad_left, self.pad_right
        if self.left.arity != 0 or self.left.coarity != a + n + b:
            raise CapacityMismatch("left part must be 0 -> pad_left + n + pad_right")
        if self.right.coarity != 0 or self.right.arity != a + m + b:
            raise CapacityMismatch("right part must be pad_left + m + pad_right -> 0")
        if self.left.alphabet != self.right.alphabet:
            raise AlphabetMismatch("context halves use different alphabets")

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Context":
        e = Diagram.empty(alphabet)
        return cls(e, e, 0, 0, (0, 0))

    def size(self) -> int:
        return self.left.size() + self.right.size()


def fill_context(c: Context, d: Diagram) -> Diagram:
    if (d.arity, d.coarity) != c.capacity:
        raise CapacityMismatch(f"hole has capacity {c.capacity}, diagram is {d.arity}->{d.coarity}")
    if d.alphabet != c.left.alphabet:
        raise AlphabetMismatch("context and diagram use different alphabets")
    return normalize(compose(compose(c.left, whisker(d, c.pad_left, c.pad_right)), c.right))


def enumerate_contexts(alphabet: Alphabet, n: int, m: int, max_generators: int,
                       max_width: int) -> Iterator[Context]:
    """Contexts of capacity ``(n, m)`` ordered by size, then pads, then halves."""
    lefts: dict = {}
    rights: dict = {}
    found = []
    for a in range(max_width + 1):
        for b in range(max_width + 1 - a):
            if a + n + b > max_width or a + m + b > max_width:
                continue
            k1, k2 = a + n + b, a + m + b
            if k1 not in lefts:
                lefts[k1] = list(enumerate_diagrams(alphabet, 0, k1, max_generators, max_width))
            if k2 not in rights:
                rights[k2] = list(enumerate_diagrams(alphabet, k2, 0, max_generators, max_width))
            for i, l in enumerate(lefts[k1]):
                for j, r in enumerate(rights[k2]):
                    if l.size() + r.size() <= max_generators:
                        found.append((l.size() + r.size(), a, b, i, j, l, r))
    found.sort(key=lambda t: t[:5])
    for _, a, b, _, _, l, r in found:
        yield Context(l, r, a, b, (n, m))


@dataclass(frozen=True)
class NoneFound:
    contexts_tried: int


def distinguish(a: NondetAutomaton, d1: Diagram, d2: Diagram, max_generators: int = 4,
                max_width: int = 4) -> Context | NoneFound:
    """First context (within bounds) placing exactly one of ``d1``, ``d2`` in the language."""
    if (d1.arity, d1.coarity) != (d2.arity, d2.coarity):
        raise CapacityMismatch("diagrams have different boundaries")
    n, m = d1.arity, d1.coarity
    tried = 0
    accept_cache: dict = {}
    for c in enumerate_contexts(a.alphabet, n, m, max_generators, max_width):
        tried += 1
        start = frontier_run(a, c.left, [()])
        key = c.right
        if key not in accept_cache:
            accept_cache[key] = {w for w in product(a.states, repeat=c.right.arity)
                                 if frontier_run(a, c.right, [w])}
        good = accept_cache[key]
        r1 = bool(frontier_run(a, whisker(d1, c.pad_left, c.pad_right), start) & good)
        r2 = bool(frontier_run(a, whisker(d2, c.pad_left, c.pad_right), start) & good)
        if r1 != r2:
            return c
    return NoneFound(tried)


def delta_partition(a: NondetAutomaton, n: int, m: int, max_generators: int,
                    max_width: int) -> list[tuple[TransitionRelation, list[Diagram]]]:
    """Enumerated ``n -> m`` diagrams grouped by the relation the automaton assigns them."""
    groups: dict = {}
    for d in enumerate_diagrams(a.alphabet, n, m, max_generators, max_width):
        groups.setdefault(relation_of(a, d), []).append(d)
    return list(groups.items())


# -- finite presentations ---------------------------------------------------

@dataclass
class FinitePro:
    """Finitely many classes per hom-set, with composition and tensor tables up to ``bound``.

    Class names are strings.  ``copy``, ``discard`` and ``swap`` designate the
    restriction structure when present; ``empty`` is the class of the empty diagram.
    """

    alphabet: Alphabet
    bound: int
    homs: dict = field(default_factory=dict)        # (n, m) -> list of class names
    identity: dict = field(default_factory=dict)    # n -> class
    compose: dict = field(default_factory=dict)     # (c1, c2) -> class
    tensor: dict = field(default_factory=dict)      # (c1, c2) -> class
    generators: dict = field(default_factory=dict)  # generator name -> class
    copy: str | None = None
    discard: str | None = None
    swap: str | None = None
    empty: str | None = None
    labels: dict = field(default_factory=dict)      # class -> human-readable description

    def type_of(self, c: str) -> tuple[int, int]:
        for nm, cs in self.homs.items():
            if c in cs:
                return nm
        raise TableLookupMissing(f"unknown class {c!r}")

    def types(self) -> dict:
        return {c: nm for nm, cs in self.homs.items() for c in cs}

    def comp(self, c1: str, c2: str) -> str:
        try:
            return self.compose[(c1, c2)]
        except KeyError:
            raise TableLookupMissing(f"no composition entry for ({c1}, {c2})") from None

    def tens(self, c1: str, c2: str) -> str:
        try:
            return self.tensor[(c1, c2)]
        except KeyError:
            raise TableLookupMissing(f"no tensor entry for ({c1}, {c2})") from None

    def ident(self, n: int) -> str:
        try:
            return self.identity[n]
        except KeyError:
            raise TableLookupMissing(f"no identity class for {n}") from None

    def tensor_all(self, cs) -> str:
        acc = self.ident(0)
        for c in cs:
            acc = self.tens(acc, c)
        return acc

    def comp_all(self, cs) -> str:
        acc = cs[0]
        for c in cs[1:]:
            acc = self.comp(acc, c)
        return acc


def check_tables(p: FinitePro) -> None:
    """Raise IncompleteTables unless every in-bound composite and tensor is present."""
    types = p.types()
    for n in range(p.bound + 1):
        if n not in p.identity:
            raise IncompleteTables(f"missing identity class for {n}")
    by_dom: dict = {}
    for c, (n, m) in types.items():
        by_dom.setdefault(n, []).append(c)
    for c1, (n1, m1) in types.items():
        for c2 in by_dom.get(m1, []):
            if (c1, c2) not in p.compose:
                raise IncompleteTables(f"missing composition entry ({c1}, {c2})")
        for c2, (n2, m2) in types.items():
            if n1 + n2 <= p.bound and m1 + m2 <= p.bound and (c1, c2) not in p.tensor:
                raise IncompleteTables(f"missing tensor entry ({c1}, {c2})")


@dataclass(frozen=True)
class EquationFailure:
    law: str
    detail: str

    def __bool__(self):
        return False


def _perm_class(p: FinitePro, perm: list[int]) -> str:
    """Class of the wire permutation sending position ``i`` to ``perm[i]``, built from swaps."""
    n = len(perm)
    cur = list(range(n))  # cur[k] = original wire now at position k
    steps = []
    for k in range(n):  # bubble sort towards target order
        for j in range(n - 1 - k):
            if perm[cur[j]] > perm[cur[j + 1]]:
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                steps.append(j)
    acc = p.ident(n)
    for j in steps:
        layer = p.tensor_all([p.ident(j), p.swap, p.ident(n - j - 2)]) if n >= 2 else p.ident(n)
        acc = p.comp(acc, layer)
    return acc


def _copy_n(p: FinitePro, n: int) -> str:
    """``n`` wires copied into two blocks ``x1..xn x1..xn``."""
    if n == 0:
        return p.ident(0)
    base = p.tensor_all([p.copy] * n)
    perm = [0] * (2 * n)
    for i in range(n):
        perm[2 * i] = i
        perm[2 * i + 1] = n + i
    return p.comp(base, _perm_class(p, perm))


def check_laws(p: FinitePro, max_triples: int = 50_000):
    """Unit laws on every class; associativity on (at most ``max_triples``) composable triples."""
    types = p.types()
    i0 = p.ident(0)
    for c, (n, m) in sorted(types.items()):
        if p.comp(p.ident(n), c) != c or p.comp(c, p.ident(m)) != c:
            return EquationFailure("identity", f"at class {c}")
        if p.tens(i0, c) != c or p.tens(c, i0) != c:
            return EquationFailure("tensor unit", f"at class {c}")
    by_dom: dict = {}
    for c, (n, m) in sorted(types.items()):
        by_dom.setdefault(n, []).append(c)
    count = 0
    for x, (_, k) in sorted(types.items()):
        for y in by_dom.get(k, []):
            for z in by_dom.get(types[y][1], []):
                if p.comp(p.comp(x, y), z) != p.comp(x, p.comp(y, z)):
                    return EquationFailure("associativity", f"at ({x}, {y}, {z})")
                count += 1
                if count >= max_triples:
                    return True
    return True


def verify_restriction_structure(p: FinitePro):
    """True, or the first failing equation, within the arity bound."""
    check_tables(p)
    if None in (p.copy, p.discard, p.swap):
        raise TableLookupMissing("restriction structure is not fully designated")
    N = p.bound
    i1 = p.ident(1)

    def eq(law, lhs, rhs, detail=""):
        if lhs != rhs:
            return EquationFailure(law, f"{lhs} != {rhs} {detail}".strip())
        return None

    checks = []
    if N >= 2:
        i2 = p.ident(2)
        checks.append(eq("swap involutive", p.comp(p.swap, p.swap), i2))
        checks.append(eq("commutativity", p.comp(p.copy, p.swap), p.copy))
        checks.append(eq("left unitality", p.comp(p.copy, p.tens(p.discard, i1)), i1))
        checks.append(eq("right unitality", p.comp(p.copy, p.tens(i1, p.discard)), i1))
    if N >= 3:
        s1, s2 = p.tens(p.swap, i1), p.tens(i1, p.swap)
        checks.append(eq("braid", p.comp_all([s1, s2, s1]), p.comp_all([s2, s1, s2])))
        checks.append(eq("coassociativity", p.comp(p.copy, p.tens(p.copy, i1)),
                         p.comp(p.copy, p.tens(i1, p.copy))))
    for f in checks:
        if f is not None:
            return f
    # Copies and discards on several wires are assembled from the designated
    # ones, so coherence reduces to the monoidal laws of the tables.
    f = check_laws(p)
    if f is not True:
        return f
    # Naturality of copy against every class whose doubled boundary fits the bound.
    for c, (n, m) in sorted(p.types().items()):
        if 2 * n > N or 2 * m > N:
            continue
        lhs = p.comp(c, _copy_n(p, m))
        rhs = p.comp(_copy_n(p, n), p.tens(c, c))
        f = eq("copy naturality", lhs, rhs, f"at class {c}")
        if f is not None:
            return f
    return True


def syntactic_automaton(p: FinitePro, verify: bool = True) -> DetAutomaton:
    """Deterministic automaton on the ``0 -> 1`` classes of a presentation with restriction structure."""
    if p.discard is None:
        raise TableLookupMissing("presentation has no discard class")
    if verify:
        res = verify_restriction_structure(p)
        if res is not True:
            raise ValueError(f"restriction structure fails: {res.law}: {res.detail}")
    if p.empty is None:
        raise TableLookupMissing("presentation has no empty-diagram class")
    states = list(p.homs.get((0, 1), []))
    i1 = p.ident(1)
    trans: dict = {}
    for g in p.alphabet:
        try:
            beta = p.generators[g]
        except KeyError:
            raise TableLookupMissing(f"no class designated for generator {g!r}") from None
        n, m = p.alphabet[g]
        projections = [p.tensor_all([p.discard] * i + [i1] + [p.discard] * (m - 1 - i)) for i in range(m)]
        table = {}
        for ins in product(states, repeat=n):
            composite = p.comp(p.tensor_all(ins), beta)
            if m == 0:
                if composite == p.empty:
                    table[ins] = ()
            else:
                table[ins] = tuple(p.comp(composite, pr) for pr in projections)
        trans[g] = table
    return DetAutomaton(p.alphabet, states, trans)


# -- presentations built from relations ---------------------------------------

def diagonal(states, n: int = 1) -> TransitionRelation:
    return TransitionRelation(1, 2, frozenset(((q,), (q, q)) for q in sort_states(states)))


def total_discard(states) -> TransitionRelation:
    return TransitionRelation(1, 0, frozenset(((q,), ()) for q in sort_states(states)))


def transposition(states) -> TransitionRelation:
    qs = sort_states(states)
    return TransitionRelation(2, 2, frozenset(((p, q), (q, p)) for p in qs for q in qs))


def relational_pro(a: NondetAutomaton, bound: int, copy: TransitionRelation | None = None,
                   discard: TransitionRelation | None = None, swap: TransitionRelation | None = None,
                   max_classes: int = 20_000) -> FinitePro:
    """The sub-pro of relations generated by the automaton and copy/discard/swap, up to ``bound``.

    Classes are relations; two diagrams share a class exactly when the
    automaton assigns them the same relation, which refines the syntactic
    congruence.  The structure defaults to diagonal, total discard and swap.
    """
    copy = copy or diagonal(a.states)
    discard = discard or total_discard(a.states)
    swap = swap or transposition(a.states)
    seeds = [TransitionRelation.identity(a.states, n) for n in range(bound + 1)]
    seeds += [a.relation(g) for g in a.alphabet]
    seeds += [copy, discard, swap]
    elems: list = []
    index: dict = {}

    def add(r):
        if r.arity > bound or r.coarity > bound or r in index:
            return
        if len(elems) >= max_classes:
            raise IncompleteTables(f"relational closure exceeds {max_classes} classes")
        index[r] = len(elems)
        elems.append(r)

    for r in seeds:
        add(r)
    done = 0
    while done < len(elems):
        x = elems[done]
        done += 1
        for y in list(elems[:done]):
            for u, v in ((x, y), (y, x)):
                if u.coarity == v.arity:
                    add(u.compose(v))
                if u.arity + v.arity <= bound and u.coarity + v.coarity <= bound:
                    add(u.tensor(v))
    name = {r: f"r{i}" for i, r in enumerate(elems)}
    homs: dict = {}
    for r in elems:
        homs.setdefault((r.arity, r.coarity), []).append(name[r])
    comp_t, tens_t = {}, {}
    for u in elems:
        for v in elems:
            if u.coarity == v.arity:
                comp_t[(name[u], name[v])] = name[u.compose(v)]
            if u.arity + v.arity <= bound and u.coarity + v.coarity <= bound:
                tens_t[(name[u], name[v])] = name[u.tensor(v)]
    labels = {name[r]: _describe(r) for r in elems}
    empty = TransitionRelation(0, 0, frozenset({((), ())}))
    return FinitePro(
        alphabet=a.alphabet, bound=bound, homs=homs,
        identity={n: name[TransitionRelation.identity(a.states, n)] for n in range(bound + 1)},
        compose=comp_t, tensor=tens_t,
        generators={g: name[a.relation(g)] for g in a.alphabet},
        copy=name[copy], discard=name[discard], swap=name[swap],
        empty=name.get(empty), labels=labels)


def _describe(r: TransitionRelation) -> str:
    def w(x):
        return "".join(map(str, x)) or "ε"
    return "{" + ", ".join(f"{w(a)}→{w(b)}" for a, b in r.sorted_pairs()) + "}"


def trivial_pro(alphabet: Alphabet, bound: int) -> FinitePro:
    """One class per hom-set ``(n, m)`` with ``n, m <= bound``."""
    def cls(n, m):
        return f"{n},{m}"
    homs = {(n, m): [cls(n, m)] for n in range(bound + 1) for m in range(bound + 1)}
    comp_t, tens_t = {}, {}
    for (n, k) in homs:
        for m in range(bound + 1):
            comp_t[(cls(n, k), cls(k, m))] = cls(n, m)
    for (n1, m1) in homs:
        for (n2, m2) in homs:
            if n1 + n2 <= bound and m1 + m2 <= bound:
                tens_t[(cls(n1, m1), cls(n2, m2))] = cls(n1 + n2, m1 + m2)
    gens = {g: cls(*alphabet[g]) for g in alphabet}
    return FinitePro(alphabet, bound, homs, {n: cls(n, n) for n in range(bound + 1)}, comp_t, tens_t,
                     gens, copy=cls(1, 2), discard=cls(1, 0), swap=cls(2, 2), empty=cls(0, 0))


def presentation_with(p: FinitePro, **changes) -> FinitePro:
    """A shallow copy with some fields replaced; tables are copied."""
    q = FinitePro(p.alphabet, p.bound, dict(p.homs), dict(p.identity), dict(p.compose), dict(p.tensor),
                  dict(p.generators), p.copy, p.discard, p.swap, p.empty, dict(p.labels))
    for k, v in changes.items():
        setattr(q, k, v)
    return q


def class_of(p: FinitePro, d: Diagram) -> str:
    """Evaluate a diagram in the presentation by table lookups, slice by slice."""
    acc = p.ident(d.arity)
    for sl in d.slices:
        parts = [p.ident(1) if it is None else p.generators[it] for it in sl]
        acc = p.comp(acc, p.tensor_all(parts))
    return acc
