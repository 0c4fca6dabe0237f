import json
import sys
from itertools import product
from pathlib import Path

import pytest

from oracles import balanced, brute_accepts, lift_accepts, nfa_run, wall_configurations
from cache import scalars
from regmon import corpus
from regmon import serialize as S
from regmon.automaton import nd_accepts
from regmon.determinize import det_accepts
from regmon.diagram import canonical_key
from regmon.encodings import nfa_to_monoidal, word_to_diagram
from regmon.errors import UnknownEntry

FIXTURES = Path(__file__).parent / "fixtures"
sys.path.insert(0, str(FIXTURES))
import regen  # noqa: E402


@pytest.mark.parametrize("name", corpus.NAMES)
def test_entries_build(name):
    e = corpus.build(name)
    assert e.name == name and e.summary and e.oracle
    assert nd_accepts(e.automaton, corpus.Diagram.empty(e.alphabet))
    if e.det is not None:
        assert det_accepts(e.det, corpus.Diagram.empty(e.alphabet))


def test_unknown_entry():
    with pytest.raises(UnknownEntry):
        corpus.build("nope")
    with pytest.raises(UnknownEntry):
        corpus.oracle("example13")


@pytest.mark.parametrize("name", corpus.NAMES)
def test_golden_enumeration(name):
    lines = (FIXTURES / "corpus" / f"{name}.golden").read_text(encoding="utf-8").splitlines()
    header, body = lines[0], lines[1:]
    assert header.endswith(f": {len(body)}")
    assert body == regen.golden_lines(name)


@pytest.mark.parametrize("name", corpus.NAMES)
def test_fixture_parses_to_entry(name):
    doc = json.loads((FIXTURES / "corpus" / f"{name}.json").read_text(encoding="utf-8"))
    assert S.from_document(doc) == corpus.build(name).grammar


@pytest.mark.parametrize("name", corpus.NAMES)
def test_library_agrees_with_lifting_oracle(name):
    e = corpus.build(name)
    g, w = regen.BOUNDS.get(name, (5, 4))
    for d in scalars(e.alphabet, g, w):
        assert nd_accepts(e.automaton, d) == lift_accepts(e.grammar, d) == brute_accepts(e.automaton, d)


class TestExample13:
    def test_gamma_image(self):
        a = corpus.build("example13").automaton
        assert set(a.image("γ", ())) == {tuple("ABBA"), tuple("ACCA")}

    def test_members(self):
        a = corpus.build("example13").automaton
        assert nd_accepts(a, corpus.ex13_member("b"))
        assert nd_accepts(a, corpus.ex13_member("c"))
        assert not nd_accepts(a, corpus.ex13_mixed())


class TestDyck:
    def test_members_are_balanced(self):
        a = corpus.build("dyck").automaton
        members = [d for d in scalars(corpus.DYCK, 6, 6) if nd_accepts(a, d)]
        assert members
        for d in members:
            assert balanced(corpus.dyck_readout(d))
            assert corpus.oracle("dyck", d)

    def test_every_short_balanced_word_is_realized(self):
        a = corpus.build("dyck").automaton
        for n in range(0, 9, 2):
            for w in product("()", repeat=n):
                w = "".join(w)
                if balanced(w):
                    d = corpus.dyck_word_diagram(w)
                    assert nd_accepts(a, d) and corpus.dyck_readout(d) == w

    def test_presentation_classes(self):
        assert len(corpus.build("dyck").presentation.homs[(0, 0)]) >= 1


class TestWalls:
    @pytest.mark.parametrize("pairs,layers", [(p, n) for p in range(1, 4) for n in range(1, 4) if p + n <= 5])
    def test_every_raster_colouring_is_a_brick_wall(self, pairs, layers):
        a = corpus.build("brick_wall").automaton
        cols = corpus.accepted_colourings(a, pairs, layers)
        # starts, full rows and the short rows between them
        n_bits = pairs + layers * pairs + (layers - 1) * (pairs - 1)
        assert len(cols) == 2 ** n_bits == corpus.oracle("brick_wall", pairs, layers)

    @pytest.mark.parametrize("pairs,layers", [(p, n) for p in range(1, 4) for n in range(1, 5)])
    def test_xor_and_sierpinski_follow_the_automaton(self, pairs, layers):
        want = wall_configurations(pairs, layers)
        for name in ("xor_tiles", "sierpinski"):
            got = corpus.accepted_colourings(corpus.build(name).automaton, pairs, layers)
            assert got == want == corpus.oracle(name, pairs, layers)

    def test_wall_diagram_colour_count(self):
        with pytest.raises(ValueError):
            corpus.wall_diagram(2, 2, [0])
        with pytest.raises(ValueError):
            corpus.wall_layout(0, 1)

    def test_non_rectangular_tilings_are_brick_walls(self):
        # local tiles cannot see the wall's outline, so ragged walls are members too
        a = corpus.build("brick_wall").automaton
        d = corpus.Diagram.from_steps(corpus.WALL, 0, [(0, "start0"), (0, "hb"), (1, "ht"), (0, "end")])
        assert nd_accepts(a, d)


class TestWordsAndTrees:
    def test_nfa_samples(self):
        for i, n in enumerate(corpus.sample_nfas()):
            alph, a = nfa_to_monoidal(n)
            for k in range(5):
                for w in product(n.letters, repeat=k):
                    want = nfa_run(n.transitions, n.initials, n.finals, w)
                    assert corpus.oracle("nfa_samples", i, w) == want
                    assert nd_accepts(a, word_to_diagram(w, alph)) == want

    def test_bool_list(self):
        from regmon.encodings import enumerate_trees
        t = corpus.bool_list_automaton()
        lists = [tr for tr in enumerate_trees(corpus.BOOL_LIST_RANKS, 5) if corpus.oracle("bool_list", tr)]
        assert ("nil",) in lists and ("cons", ("t",), ("nil",)) in lists
        assert ("cons", ("nil",), ("nil",)) not in lists
        assert t.accepting == {"List"}


def test_functional_entries():
    assert "dyck" in corpus.functional_entries()
    assert "example13" not in corpus.functional_entries()


def test_bone_powers_are_distinct():
    keys = {canonical_key(corpus.bone_power(k)) for k in range(4)}
    assert len(keys) == 4
