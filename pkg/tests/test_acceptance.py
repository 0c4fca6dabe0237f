"""The thirteen acceptance criteria, one test each.

Every test records its outcome in ``conftest.ACCEPTANCE`` before asserting,
so the terminal summary lists one PASS/FAIL line per criterion.
"""

import random
from itertools import product

import conftest
from cache import scalars
from oracles import bu_states, lift_accepts, nfa_run, subset_run, tree_subset_table, wall_configurations
from strategies import SAMPLE_ALPHABETS, random_automaton, random_diagram
from regmon import corpus
from regmon.automaton import (AlphabetMorphism, TransitionRelation, automaton_preimage, automaton_union,
                              enumerate_members, intersect, nd_accepts, relation_of)
from regmon.determinize import NonConvex, check_convex, det_accepts, det_run, determinize
from regmon.diagram import (Alphabet, Diagram, canonical_key, compose, connected_components, normalize,
                            random_interchange, tensor)
from regmon.encodings import END, enumerate_trees, nfa_to_monoidal, tree_to_diagram, treeaut_to_monoidal, word_to_diagram
from regmon.grammar import grammar_image, grammar_to_automaton, grammar_union
from regmon.restriction import (Witness, canonical_termgraph, causal_closure_witness, closure_merges,
                                det_run_rest, embed, prefix_histories, replay_trace)


def record(n, ok, detail):
    conftest.ACCEPTANCE[n] = (bool(ok), detail)
    assert ok, detail


def convex_automata():
    out = {n: corpus.build(n).automaton for n in ("dyck", "brick_wall", "sierpinski")}
    for i, n in enumerate(corpus.sample_nfas()):
        out[f"nfa{i}"] = nfa_to_monoidal(n)[1]
    out["bool_list"] = treeaut_to_monoidal(corpus.bool_list_automaton())[1]
    return out


def test_01_grammar_round_trip():
    checked = bad = 0
    for name in corpus.NAMES:
        g = corpus.build(name).grammar
        a = grammar_to_automaton(g)
        for d in scalars(g.alphabet, 6, 6):
            checked += 1
            bad += lift_accepts(g, d) != nd_accepts(a, d)
    record(1, bad == 0, f"{len(corpus.NAMES)} grammars, {checked} scalars at (6, 6), {bad} disagreements")


def test_02_determinization():
    checked = bad = 0
    for name, a in convex_automata().items():
        assert check_convex(a).convex, name
        det = determinize(a)
        for d in scalars(a.alphabet, 6, 6):
            checked += 1
            bad += nd_accepts(a, d) != det_accepts(det, d)
    record(2, bad == 0, f"{len(convex_automata())} convex automata, {checked} scalars at (6, 6), {bad} disagreements")


def test_03_example13_not_convex():
    r = check_convex(corpus.build("example13").automaton)
    ok = isinstance(r, NonConvex) and (r.generator, r.inputs, r.missing) == ("γ", (), tuple("ABCA"))
    record(3, ok, f"check_convex(example13) = {r}")


def test_04_words():
    checked = bad = 0
    nfas = [corpus.random_nfa(s) for s in corpus.NFA_SEEDS]
    for n in nfas:
        assert len(n.states) <= 4 and len(n.letters) == 2
        alph, a = nfa_to_monoidal(n)
        for k in range(9):
            for w in product(n.letters, repeat=k):
                checked += 1
                bad += nfa_run(n.transitions, n.initials, n.finals, w) != nd_accepts(a, word_to_diagram(w, alph))
    record(4, bad == 0, f"{len(nfas)} seeded NFAs, {checked} words of length <= 8, {bad} disagreements")


def test_05_trees():
    t = corpus.bool_list_automaton()
    alph, a = treeaut_to_monoidal(t)
    rules = {s: list(p) for s, p in t.transitions.items()}
    table = tree_subset_table(rules, corpus.BOOL_LIST_RANKS)
    det = determinize(a)
    trees = enumerate_trees(corpus.BOOL_LIST_RANKS, 7)
    bad = 0
    for tree in trees:
        d = tree_to_diagram(tree, alph)
        want = bool(bu_states(rules, tree) & t.accepting)
        bad += nd_accepts(a, d) != want or det_accepts(det, d) != want
        root = subset_run(table, tree)
        body = Diagram.from_steps(alph, 0, [s for s in d.steps() if s[1] != END])
        got = det_run(det, body, ())
        bad += got != ((root,) if root else None)
    record(5, bad == 0, f"{len(trees)} trees with <= 7 nodes, {bad} disagreements (runs and subset states)")


def test_06_tensor_lemma():
    rng = random.Random(2024)
    bad = total = 0
    for name in corpus.NAMES:
        e = corpus.build(name)
        a = e.automaton
        pool = list(scalars(a.alphabet, 6, 4))
        members = [d for d in pool if nd_accepts(a, d)]
        for _ in range(500):
            x = rng.choice(members if rng.random() < 0.5 else pool)
            y = rng.choice(members if rng.random() < 0.5 else pool)
            total += 1
            want = nd_accepts(a, x) and nd_accepts(a, y)
            bad += nd_accepts(a, tensor(x, y)) != want
            if e.det is not None:
                bad += det_accepts(e.det, tensor(x, y)) != want
    record(6, bad == 0, f"{total} seeded pairs over {len(corpus.NAMES)} automata, {bad} violations")


def test_07_restriction_runs():
    dets = {n: corpus.build(n).det for n in corpus.NAMES if corpus.build(n).det is not None}
    dets.update({n: determinize(a) for n, a in convex_automata().items() if n not in dets})
    checked = hist = bad = 0
    for det in dets.values():
        for d in scalars(det.alphabet, 6, 6):
            checked += 1
            ok = det_accepts(det, d)
            bad += det_run_rest(det, embed(d)) != ok
            if ok:
                for h in prefix_histories(d):
                    hist += 1
                    bad += not det_run_rest(det, h.rest)
    record(7, bad == 0, f"{len(dets)} deterministic automata, {checked} scalars, {hist} histories, {bad} failures")


def test_08_example13_causal_closure():
    a = corpus.build("example13").automaton
    connected = list(enumerate_members(a, 8, 4, connected=True))
    keys = {canonical_key(d) for d in connected}
    mixed = corpus.ex13_mixed()
    w = causal_closure_witness(a, mixed, max_generators=8, max_width=4, tuple_size=2)
    found = isinstance(w, Witness)
    replayed = found and canonical_termgraph(embed(mixed)).isomorphic(replay_trace(w.histories, w.trace))
    ok = (len(connected) == 2
          and keys == {canonical_key(corpus.ex13_member("b")), canonical_key(corpus.ex13_member("c"))}
          and found and canonical_key(w.diagram) == canonical_key(mixed) and replayed
          and not nd_accepts(a, mixed))
    detail = (f"{len(connected)} connected members; witness {'found' if found else 'missing'}"
              f"{f' from {len(w.histories)} histories, {len(w.trace)} folds' if found else ''}; "
              f"mixed diagram {'accepted' if nd_accepts(a, mixed) else 'rejected'}: not causally closed")
    record(8, ok, detail)


def test_09_deterministic_languages_are_causally_closed():
    merges = bad = 0
    for name in ("dyck", "sierpinski"):
        e = corpus.build(name)
        members = list(enumerate_members(e.automaton, 6, 3))
        for hs, d, trace in closure_merges(members, tuple_size=3):
            merges += 1
            bad += not (det_accepts(e.det, d) and nd_accepts(e.automaton, d))
    record(9, bad == 0, f"{merges} merged diagrams from tuples of <= 3 histories "
                        f"(members with <= 6 generators, width <= 3), {bad} rejected")


def test_10_bones_syntactic_automaton():
    e = corpus.build("bones")
    s = syntactic_automaton_of(e.presentation)
    accepted = {canonical_key(d) for d in scalars(corpus.BONES, 6, 3) if det_accepts(s, d)}
    want = {canonical_key(corpus.bone_power(k)) for k in range(4)}
    ok = len(s.states) == 1 and accepted == want
    record(10, ok, f"{len(s.states)} state(s); accepts {len(accepted)} scalars at (6, 3), "
                   f"{'exactly' if accepted == want else 'not'} the bone powers 0..3")


def syntactic_automaton_of(p):
    from regmon.syntactic import syntactic_automaton
    return syntactic_automaton(p)


PLAIN = Alphabet({"start": (0, 2), "brick": (2, 2), "ht": (1, 1), "hb": (1, 1), "end": (2, 0)})


def test_11_closure_laws():
    wall = scalars(corpus.WALL, 6, 6)
    bw, xt = corpus.build("brick_wall"), corpus.build("xor_tiles")
    lang = {n: {canonical_key(d) for d in wall if nd_accepts(corpus.build(n).automaton, d)}
            for n in ("brick_wall", "xor_tiles", "sierpinski")}
    failures = []

    inter = intersect(bw.automaton, xt.automaton)
    got = {canonical_key(d) for d in wall if nd_accepts(inter, d)}
    if not got == lang["brick_wall"] & lang["xor_tiles"] == lang["sierpinski"]:
        failures.append("intersection")

    def component_union(d, langs):
        return all(any(nd_accepts(corpus.build(n).automaton, c) for n in langs) for c in connected_components(d))

    un_a = automaton_union(bw.automaton, xt.automaton)
    un_g = grammar_to_automaton(grammar_union(bw.grammar, xt.grammar))
    for d in wall:
        want = component_union(d, ("brick_wall", "xor_tiles"))
        if nd_accepts(un_a, d) != want or nd_accepts(un_g, d) != want:
            failures.append("union")
            break
    if not lang["brick_wall"] | lang["xor_tiles"] <= {canonical_key(d) for d in wall if nd_accepts(un_a, d)}:
        failures.append("union contains both")

    forget = AlphabetMorphism(corpus.WALL, PLAIN, {g: g.rstrip("01") for g in corpus.WALL})
    img = grammar_to_automaton(grammar_image(xt.grammar, forget))
    want = {canonical_key(forget.apply(d)) for d in wall if nd_accepts(xt.automaton, d)}
    got = {canonical_key(d) for d in scalars(PLAIN, 6, 6) if nd_accepts(img, d)}
    if got != want:
        failures.append("image")

    bleach = AlphabetMorphism(corpus.WALL, corpus.WALL,
                              {g: g[:-1] + "0" if g[-1] in "01" else g for g in corpus.WALL})
    pre = automaton_preimage(xt.automaton, bleach)
    if any(nd_accepts(pre, d) != nd_accepts(xt.automaton, bleach.apply(d)) for d in wall):
        failures.append("preimage")
    detail = (f"{len(wall)} wall scalars at (6, 6); |brick_wall|={len(lang['brick_wall'])}, "
              f"|xor_tiles|={len(lang['xor_tiles'])}, |sierpinski|={len(lang['sierpinski'])}, "
              f"image size {len(want)}; failures: {failures or 'none'}")
    record(11, not failures, detail)


def test_12_diagram_calculus():
    rng = random.Random(12)
    bad_norm = 0
    for i in range(1000):
        d = random_diagram(rng, SAMPLE_ALPHABETS[i % 3], max_generators=7)
        n = normalize(d)
        moved = random_interchange(d, rng, moves=rng.randint(1, 40))
        bad_norm += normalize(n) != n or normalize(moved) != n
    bad_functor = 0
    for i in range(500):
        alph = SAMPLE_ALPHABETS[i % 3]
        a = random_automaton(rng, alph, n_states=rng.randint(1, 3))
        d1 = random_diagram(rng, alph, max_generators=4, max_width=4)
        d2 = random_diagram(rng, alph, arity=d1.coarity, max_generators=4, max_width=4)
        r1, r2 = relation_of(a, d1), relation_of(a, d2)
        bad_functor += relation_of(a, compose(d1, d2)) != r1.compose(r2)
        bad_functor += relation_of(a, tensor(d1, d2)) != r1.tensor(r2)
        bad_functor += relation_of(a, Diagram.identity(alph, d1.arity)) != TransitionRelation.identity(a.states, d1.arity)
    automata = [corpus.build(n).automaton for n in corpus.NAMES] + list(convex_automata().values())
    automata += [random_automaton(rng, SAMPLE_ALPHABETS[k % 3], density=0.2) for k in range(30)]
    dets = [corpus.build(n).det for n in corpus.NAMES if corpus.build(n).det is not None]
    empty_ok = (all(nd_accepts(a, Diagram.empty(a.alphabet)) for a in automata)
                and all(det_accepts(d, Diagram.empty(d.alphabet)) for d in dets))
    record(12, bad_norm == 0 and bad_functor == 0 and empty_ok,
           f"1000 move sequences ({bad_norm} failures); 500 functor pairs ({bad_functor} failures); "
           f"empty diagram accepted by {len(automata) + len(dets)} automata: {empty_ok}")


def test_13_sierpinski_is_the_xor_automaton():
    s = corpus.build("sierpinski").automaton
    bad = []
    sizes = 0
    for pairs in range(1, 5):
        for layers in range(1, 9):
            got = corpus.accepted_colourings(s, pairs, layers)
            sizes += len(got)
            if got != wall_configurations(pairs, layers):
                bad.append((pairs, layers))
    record(13, not bad, f"walls of 1-4 bricks per row and 1-8 full rows ({sizes} configurations), "
                        f"mismatches: {bad or 'none'}")
