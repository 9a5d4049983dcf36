import random

import pytest

from bunchkit.exceptions import FrameError, InputError
from bunchkit.frames import check_frame
from bunchkit.heap import (
    EMPTY, Heap, HeapUniverse, Store, StoreFrames, adjunction_report, agreement_report, all_heaps,
    check_pseudo_epi, compose_heaps, heap_frame, indexed_sat, persistence_report, pointer_logic,
    pointer_sat, quantifier_adjoints, separation_properties, store_frame, store_maps,
)
from bunchkit.syntax import parse_formula, var


def formula(text: str, variant: str = "bi"):
    return parse_formula(text, pointer_logic(variant))


@pytest.fixture
def tiny():
    """One location and two values"""
    return HeapUniverse((1,), (0, 1))


@pytest.fixture
def pair():
    return HeapUniverse((1, 2), (1, 2, 5, 7))


class TestHeaps:
    def test_disjoint_union(self):
        joined = compose_heaps(Heap.of({1: 5}), Heap.of({2: 7}))
        assert joined == Heap.of({1: 5, 2: 7})

    def test_overlap_is_undefined(self):
        assert compose_heaps(Heap.of({1: 5}), Heap.of({1: 7})) is None

    def test_heap_count(self):
        assert len(all_heaps(HeapUniverse((1, 2), (1, 2, 3)))) == 16

    def test_heaps_sorted_by_size(self, tiny):
        assert [str(h) for h in all_heaps(tiny)] == ["[]", "{1:0}", "{1:1}"]

    def test_subheap(self):
        assert Heap.of({1: 5}).subheap(Heap.of({1: 5, 2: 7}))
        assert not Heap.of({1: 7}).subheap(Heap.of({1: 5, 2: 7}))

    def test_location_mapped_twice(self):
        with pytest.raises(InputError):
            Heap(((1, 5), (1, 7)))

    def test_locations_must_be_values(self):
        with pytest.raises(InputError):
            HeapUniverse((3,), (0, 1))

    def test_universe_document(self):
        u = HeapUniverse.from_dict({"loc": [2, 1], "val": [1, 2], "modulus": 3})
        assert u.loc == (1, 2)
        assert u.to_dict() == {"loc": [1, 2], "val": [1, 2], "modulus": 3}


class TestPointerLogic:
    def test_points_to_in_larger_heap(self, pair):
        s, h = Store(("x",), (1,)), Heap.of({1: 5, 2: 7})
        assert pointer_sat(pair, s, h, formula("x |-> 5"), "bi")
        assert not pointer_sat(pair, s, h, formula("x |-> 5", "bbi"), "bbi")

    def test_points_to_exact_heap(self, pair):
        s = Store(("x",), (1,))
        assert pointer_sat(pair, s, Heap.of({1: 5}), formula("x |-> 5", "bbi"), "bbi")

    def test_emp(self, pair):
        s, h = Store((), ()), Heap.of({1: 5})
        assert pointer_sat(pair, s, h, formula("emp"), "bi")
        assert not pointer_sat(pair, s, h, formula("emp", "bbi"), "bbi")
        assert pointer_sat(pair, s, EMPTY, formula("emp", "bbi"), "bbi")

    def test_separating_conjunction(self, pair):
        s, h = Store(("x", "y"), (1, 2)), Heap.of({1: 5, 2: 7})
        f = formula("x |-> 5 * y |-> 7", "bbi")
        assert pointer_sat(pair, s, h, f, "bbi")
        assert not pointer_sat(pair, Store(("x", "y"), (1, 1)), h, f, "bbi")

    def test_existential(self):
        u = HeapUniverse((1,), (1, 5))
        assert pointer_sat(u, Store((), ()), Heap.of({1: 5}), formula("exists v. v |-> 5"))
        assert not pointer_sat(u, Store((), ()), EMPTY, formula("exists v. v |-> 5"))

    def test_wand(self, tiny):
        s = Store(("x",), (1,))
        f = formula("x |-> 0 -* x |-> 0", "bbi")
        assert pointer_sat(tiny, s, EMPTY, f, "bbi")
        assert pointer_sat(tiny, s, Heap.of({1: 1}), f, "bbi")

    def test_later_bindings_shadow(self, tiny):
        s = Store(("x", "x"), (0, 1))
        assert pointer_sat(tiny, s, EMPTY, formula("x = 1"))

    def test_modular_arithmetic(self):
        u = HeapUniverse((0, 1), (0, 1), modulus=2)
        assert pointer_sat(u, Store(("x",), (1,)), Heap.of({0: 0}), formula("x + 1 |-> 0"))

    def test_arithmetic_needs_a_modulus(self, tiny):
        with pytest.raises(InputError):
            pointer_sat(tiny, Store(("x",), (1,)), EMPTY, formula("x + 1 = 0"))

    def test_free_variable_outside_store(self, tiny):
        with pytest.raises(InputError):
            pointer_sat(tiny, Store((), ()), EMPTY, formula("x |-> 0"))

    def test_atoms_are_rejected(self, tiny):
        with pytest.raises(InputError):
            pointer_sat(tiny, Store((), ()), EMPTY, formula("p"))

    def test_heap_outside_universe(self, tiny):
        with pytest.raises(InputError):
            pointer_sat(tiny, Store((), ()), Heap.of({2: 0}), formula("emp"))

    def test_unknown_variant(self, tiny):
        with pytest.raises(InputError):
            pointer_sat(tiny, Store((), ()), EMPTY, formula("emp"), "lgl")


class TestFrames:
    def test_heap_frame(self, tiny):
        f = heap_frame(tiny, "bbi")
        assert f.states == ("[]", "{1:0}", "{1:1}")
        assert f.units == {"[]"}
        assert check_frame(f) == []

    def test_bi_heap_frame_orders_by_extension(self, tiny):
        f = heap_frame(tiny, "bi")
        assert f.leq("[]", "{1:0}")
        assert f.units == set(f.states)
        assert check_frame(f) == []

    def test_store_frame_size(self, tiny):
        assert len(store_frame(tiny, 1).states) == 6
        assert len(store_frame(tiny, 0).states) == 3

    def test_store_frame_composes_within_a_store(self, tiny):
        f = store_frame(tiny, 1, "bbi")
        assert f.compose("(0)[]", "(0){1:1}") == {"(0){1:1}"}
        assert f.compose("(0)[]", "(1){1:1}") == frozenset()

    def test_store_maps(self, tiny):
        maps = store_maps(tiny, ("x",), pair=(var("x"), var("x")))
        assert maps["delta"]["(1){1:0}"] == "(1,1){1:0}"
        assert maps["pi"]["(0,1)[]"] == "(0)[]"
        assert maps["pair"]["(1)[]"] == "(1,1)[]"

    def test_decode(self, tiny):
        space = StoreFrames(tiny)
        space.frame(1)
        assert space.decode("(1){1:0}") == ((1,), Heap.of({1: 0}))
        with pytest.raises(InputError):
            space.decode("(9)[]")


class TestIndexedSatisfaction:
    def test_agrees_on_points_to(self, pair):
        x = ((1,), Heap.of({1: 5, 2: 7}))
        assert indexed_sat(pair, x, formula("x |-> 5"), ("x",), "bi")
        assert not indexed_sat(pair, x, formula("x |-> 5", "bbi"), ("x",), "bbi")

    def test_existential(self):
        u = HeapUniverse((1,), (1, 5))
        assert indexed_sat(u, ((), Heap.of({1: 5})), formula("exists v. v |-> 5"), ())

    @pytest.mark.parametrize("variant", ["bi", "bbi"])
    def test_agreement_report(self, tiny, variant):
        texts = [
            "x |-> 0", "exists y. x |-> y", "x = 1 -> emp", "x |-> 1 * top",
            "forall y. y = y", "x |-> 0 -* bot", "!(x |-> 1) /\\ exists y. y = x",
        ]
        report = agreement_report(tiny, [formula(t, variant) for t in texts], ("x",), variant)
        assert report.holds
        assert report.details["evaluations"] == len(texts) * 6

    def test_bi_satisfaction_is_persistent(self, tiny):
        texts = ["x |-> 0", "exists y. x |-> y", "emp -* x |-> 1", "x |-> 0 \\/ x |-> 1"]
        assert persistence_report(tiny, [formula(t) for t in texts], ("x",)).holds


BOUND = ("y", "z", "w")
CONNECTIVES = {"and": "/\\", "or": "\\/", "imp": "->", "star": "*", "wand": "-*"}


def random_pointer_text(rng: random.Random, scope: tuple, depth: int) -> str:
    """A random first-order pointer formula over the variables in scope"""
    terms = list(scope) + ["0", "1", "2"]
    if depth == 0 or rng.random() < 0.3:
        leaf = rng.choice(["pointsto", "pointsto", "eq", "emp", "top", "bot"])
        if leaf == "pointsto":
            return f"({rng.choice(terms)} |-> {rng.choice(terms)})"
        if leaf == "eq":
            return f"({rng.choice(terms)} = {rng.choice(terms)})"
        return leaf
    op = rng.choice(sorted(CONNECTIVES) + ["not", "exists", "forall"])
    if op == "not":
        return f"!{random_pointer_text(rng, scope, depth - 1)}"
    if op in ("exists", "forall"):
        if len(scope) > len(BOUND):
            return random_pointer_text(rng, scope, depth - 1)
        name = BOUND[len(scope) - 1]
        return f"({op} {name}. {random_pointer_text(rng, scope + (name,), depth - 1)})"
    left = random_pointer_text(rng, scope, depth - 1)
    right = random_pointer_text(rng, scope, depth - 1)
    return f"({left} {CONNECTIVES[op]} {right})"


class TestRandomAgreement:
    @pytest.fixture
    def universe(self):
        return HeapUniverse((1, 2), (0, 1, 2))

    @pytest.mark.parametrize("variant", ["bi", "bbi"])
    def test_pointer_and_indexed_satisfaction_agree(self, universe, variant):
        rng = random.Random(23)
        texts = [random_pointer_text(rng, ("x",), 3) for _ in range(40)]
        report = agreement_report(universe, [formula(t, variant) for t in texts], ("x",), variant)
        assert report.holds, report.violations
        assert report.details["evaluations"] == len(texts) * 3 * len(all_heaps(universe))

    def test_random_bi_formulas_are_persistent(self, universe):
        rng = random.Random(29)
        texts = [random_pointer_text(rng, ("x",), 3) for _ in range(40)]
        assert persistence_report(universe, [formula(t) for t in texts], ("x",)).holds

    def test_generator_is_seeded(self):
        first, second = random.Random(5), random.Random(5)
        assert [random_pointer_text(first, ("x",), 3) for _ in range(5)] == \
            [random_pointer_text(second, ("x",), 3) for _ in range(5)]


class TestStoreFrameStructure:
    @pytest.mark.parametrize("variant", ["bi", "bbi"])
    def test_quantifier_adjunction(self, tiny, variant):
        report = adjunction_report(tiny, 0, variant)
        assert report.holds
        assert report.details["exhaustive"]

    def test_exists_of_empty_set(self, tiny):
        exists, forall = quantifier_adjoints(tiny, 0, ())
        assert exists == frozenset()
        assert forall == frozenset()

    def test_adjoints_need_an_upset(self, tiny):
        with pytest.raises(InputError):
            quantifier_adjoints(tiny, 0, {"(0)[]"}, "bi")

    @pytest.mark.parametrize("variant", ["bi", "bbi"])
    def test_identity_substitution_square(self, tiny, variant):
        assert check_pseudo_epi(tiny, ("x",), [var("x")], variant).holds


class TestSeparationProperties:
    def test_heap_frame_properties(self):
        report = separation_properties(heap_frame(HeapUniverse((1, 2), (1, 2)), "bbi"))
        assert report.failed() == ["Divisibility"]
        assert report.details["I * I -> I"]

    def test_two_point_frame(self, two_point):
        report = separation_properties(two_point)
        assert "Partial Deterministic" not in report.failed()

    def test_needs_boolean_frame_with_units(self, tiny):
        with pytest.raises(FrameError):
            separation_properties(heap_frame(tiny, "bi"))
