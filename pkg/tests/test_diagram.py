import random

import pytest
from hypothesis import given, strategies as st

from oracles import bfs_class, occurrences
from strategies import SAMPLE_ALPHABETS, composable_pairs, diagrams
from regmon.diagram import (Alphabet, Diagram, MonoidalGraph, canonical_key, compose, connected_components,
                            dataflow_dag, diagrams_equal, enumerate_diagrams, enumerate_scalars,
                            has_enclosed_component, interchange_class, is_connected, is_normal, layered,
                            normalize, random_interchange, tensor, tensor_all, validate_diagram, whisker)
from regmon.errors import AlphabetMismatch, BoundaryMismatch, UnknownGenerator

F = SAMPLE_ALPHABETS[0]
BONES = Alphabet({"u": (0, 1), "v": (1, 0)})


def bone():
    return Diagram.from_steps(BONES, 0, [(0, "u"), (0, "v")])


class TestConstruction:
    def test_generator_and_identity(self):
        m = Diagram.generator(F, "m")
        assert (m.arity, m.coarity) == (2, 1)
        assert Diagram.identity(F, 3).coarity == 3
        assert Diagram.empty(F).is_scalar

    def test_unknown_generator_names_slice(self):
        with pytest.raises(UnknownGenerator) as e:
            Diagram(F, 1, (("f",), ("nope",)))
        assert e.value.index == 1

    def test_boundary_mismatch(self):
        with pytest.raises(BoundaryMismatch):
            Diagram(F, 1, (("m",),))
        with pytest.raises(BoundaryMismatch):
            Diagram.from_steps(F, 1, [(1, "f")])

    def test_validate_diagram(self):
        assert validate_diagram(F, 2, [("m",), ("f",)])

    def test_bad_alphabet(self):
        with pytest.raises(ValueError):
            Alphabet({"": (0, 1)})
        with pytest.raises(AlphabetMismatch):
            F.extend({"f": (1, 1)})

    def test_alphabet_as_graph(self):
        g = F.as_monoidal_graph()
        assert g.vertices == ("*",) or list(g.vertices) == ["*"]

    def test_monoidal_graph_vertices_sorted(self):
        g = MonoidalGraph(["b", "a"], [("x", ("a",), ("b",))])
        assert list(g.vertices) == ["a", "b"]


class TestComposition:
    def test_compose_mismatch(self):
        with pytest.raises(BoundaryMismatch):
            compose(Diagram.generator(F, "m"), Diagram.generator(F, "m"))

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            tensor(Diagram.empty(F), Diagram.empty(BONES))

    def test_tensor_of_bones(self):
        two = tensor(bone(), bone())
        assert two.size() == 4
        assert len(connected_components(two)) == 2

    @given(st.data())
    def test_tensor_is_associative_with_unit(self, data):
        a = data.draw(diagrams())
        b = data.draw(diagrams(alphabet=a.alphabet))
        e = Diagram.empty(a.alphabet)
        assert diagrams_equal(tensor(e, a), a)
        assert diagrams_equal(tensor(a, e), a)
        assert diagrams_equal(tensor(tensor(a, b), a), tensor(a, tensor(b, a)))

    @given(composable_pairs())
    def test_interchange_law(self, pair):
        d1, d2 = pair
        # (d1 ; d2) (x) s == (d1 (x) s) ; (d2 (x) id)
        left = compose(tensor(d1, Diagram.identity(d1.alphabet, 2)), tensor(d2, Diagram.identity(d1.alphabet, 2)))
        assert diagrams_equal(left, whisker(compose(d1, d2), 0, 2))
        side = Diagram.generator(d1.alphabet, sorted(d1.alphabet)[0])
        a = tensor(compose(d1, d2), side)
        b = compose(tensor(d1, side), tensor(d2, Diagram.identity(d1.alphabet, side.coarity)))
        assert diagrams_equal(a, b)

    def test_sliding(self):
        f = Diagram.generator(F, "f")
        a = compose(tensor(f, Diagram.identity(F, 1)), tensor(Diagram.identity(F, 1), f))
        b = compose(tensor(Diagram.identity(F, 1), f), tensor(f, Diagram.identity(F, 1)))
        assert a != b
        assert diagrams_equal(a, b)
        assert canonical_key(a) == canonical_key(b)


class TestNormalForm:
    @given(diagrams())
    def test_idempotent(self, d):
        n = normalize(d)
        assert normalize(n) == n
        assert is_normal(n)

    @given(diagrams(), st.integers(0, 2 ** 32 - 1))
    def test_invariant_under_moves(self, d, seed):
        moved = random_interchange(d, random.Random(seed), moves=25)
        assert normalize(moved) == normalize(d)

    @given(diagrams(max_generators=5, max_width=4))
    def test_is_least_member_of_oracle_class(self, d):
        cls = bfs_class(d.alphabet, d.steps())
        assert tuple(normalize(d).steps()) == min(cls)

    @given(diagrams(max_generators=5, max_width=4))
    def test_library_class_matches_oracle(self, d):
        assert interchange_class(d.alphabet, d.steps()) == bfs_class(d.alphabet, d.steps())

    def test_floating_sources_respect_faces(self):
        # A source under a cap differs from the same source beside it.
        a = Alphabet({"cup": (0, 2), "cap": (2, 0), "p": (0, 0)})
        inside = Diagram.from_steps(a, 0, [(0, "cup"), (1, "p"), (0, "cap")])
        outside = Diagram.from_steps(a, 0, [(0, "cup"), (0, "cap"), (0, "p")])
        assert not diagrams_equal(inside, outside)
        assert has_enclosed_component(inside)
        assert not has_enclosed_component(outside)

    @given(diagrams())
    def test_layered_keeps_diagram(self, d):
        assert diagrams_equal(layered(d), d)
        assert len(layered(d).slices) <= max(1, len(d.slices))


class TestDataflow:
    @given(diagrams())
    def test_dag_matches_slice_walk(self, d):
        dag = dataflow_dag(d)
        occs, _, _ = occurrences(d.alphabet, d.arity, d.slices)
        assert sorted(o.gen for o in dag.occurrences) == sorted(g for g, _, _ in occs)
        assert len(dag.inputs) == d.arity and len(dag.outputs) == d.coarity

    def test_connectivity(self):
        assert not is_connected(Diagram.empty(BONES))
        assert is_connected(bone())
        assert not is_connected(tensor(bone(), bone()))


class TestEnumeration:
    def test_scalars_are_distinct_normal_forms(self):
        ds = list(enumerate_scalars(F, 4, 3))
        keys = [canonical_key(d) for d in ds]
        assert len(keys) == len(set(keys))
        assert all(is_normal(d) for d in ds)

    def test_bones_counts(self):
        # tensor powers of u;v plus nothing else
        ds = list(enumerate_scalars(BONES, 6, 3))
        assert len(ds) == 4
        assert [d.size() for d in ds] == [0, 2, 4, 6]

    def test_enumeration_is_complete_against_step_sequences(self):
        # every step sequence within bounds normalizes to an enumerated diagram
        alph = Alphabet({"e": (0, 1), "m": (2, 1), "k": (1, 0)})
        found = {canonical_key(d) for d in enumerate_diagrams(alph, 0, 0, 5, 3)}

        def rec(width, steps, out):
            if width == 0 and steps:
                out.add(canonical_key(Diagram.from_steps(alph, 0, steps)))
            if len(steps) == 5:
                return
            for g, (ar, co) in alph.items():
                for off in range(width - ar + 1):
                    if width - ar + co <= 3:
                        rec(width - ar + co, steps + [(off, g)], out)

        brute = {canonical_key(Diagram.empty(alph))}
        rec(0, [], brute)
        assert brute == found

    def test_tensor_all(self):
        assert tensor_all([bone()] * 3).size() == 6
