import random
from itertools import combinations

import pytest

from bunchkit.algebras import Algebra, check_algebra, derive_algebra
from bunchkit.duality import (
    complex_algebra, correspondence_check, element_sets, enumerate_prime_filters, eta_check,
    filter_name, inverse_image_check, join_irreducibles, prime_filter_frame, set_name, theta_check,
)
from bunchkit.exceptions import FrameError
from bunchkit.frames import Frame, check_frame
from bunchkit.syntax import Logic, LogicName, SigmaAxiom


class TestComplexAlgebra:
    def test_one_point_frame_gives_two_elements(self, library):
        ca = complex_algebra(library["bbi-1pt"])
        assert ca.carrier == ("{}", "{e}")
        assert ca.const("munit") == "{e}"
        assert ca.op("star", "{e}", "{e}") == "{e}"
        assert check_algebra(ca) == []

    def test_layered_chain_gives_three_chain(self, library):
        ca = complex_algebra(library["ilgl-2chain"])
        assert ca.carrier == ("{}", "{y}", "{x,y}")
        assert ca.le("{y}", "{x,y}")
        assert not ca.le("{x,y}", "{y}")
        assert check_algebra(ca) == []

    def test_classical_negation(self, library):
        ca = complex_algebra(library["cbi-1pt"])
        assert ca.un("mneg", "{}") == "{e}"
        assert ca.un("mneg", "{e}") == "{}"
        assert ca.const("mbot") == "{}"
        assert check_algebra(ca) == []

    def test_two_point_frame_is_a_four_element_boolean_algebra(self, two_point):
        ca = complex_algebra(two_point)
        assert ca.size == 4
        assert ca.op("star", "{a}", "{a}") == "{}"
        assert ca.op("wand", "{a}", "{a}") == "{e,a}"
        assert check_algebra(ca) == []

    def test_illegal_frame(self):
        f = Frame(Logic(LogicName.BBI), ("e",), frozenset({("e", "e", "e")}))
        with pytest.raises(FrameError):
            complex_algebra(f)

    def test_element_sets(self, two_point):
        assert element_sets(two_point)["{e,a}"] == {"e", "a"}
        assert set_name(two_point, {"a", "e"}) == "{e,a}"


class TestPrimeFilters:
    def test_two_element_algebra(self, library):
        a = library["bbi-alg-2"]
        filters = enumerate_prime_filters(a)
        assert filters == [{"1"}]
        assert filter_name(a, filters[0]) == "F_1"

    def test_heyting_chain(self, library):
        a = library["bi-heyting-3"]
        assert enumerate_prime_filters(a) == [{"1"}, {"m", "1"}]
        assert join_irreducibles(a) == ["m", "1"]

    def test_principal_filters_above_the_cap(self, library):
        a = library["bi-heyting-3"]
        assert enumerate_prime_filters(a, cap=0) == enumerate_prime_filters(a)

    def test_prime_filter_frame_of_boolean_algebra(self, library):
        pf = prime_filter_frame(library["bbi-alg-2"])
        assert pf.states == ("F_1",)
        assert pf.comp == {("F_1", "F_1", "F_1")}
        assert pf.units == {"F_1"}
        assert check_frame(pf) == []

    def test_prime_filter_frame_is_ordered_by_inclusion(self, library):
        pf = prime_filter_frame(library["bi-heyting-3"])
        assert pf.states == ("F_1", "F_m")
        assert pf.leq("F_1", "F_m")
        assert not pf.leq("F_m", "F_1")


class TestRoundTrips:
    def test_theta_on_boolean_algebra(self, library):
        report = theta_check(library["bbi-alg-2"])
        assert report.holds
        assert report.details["theta"] == {"0": "{}", "1": "{F_1}"}
        assert report.details["isomorphism"]

    def test_theta_on_heyting_chain(self, library):
        report = theta_check(library["bi-heyting-3"])
        assert report.holds
        assert report.details["theta"] == {"0": "{}", "m": "{F_m}", "1": "{F_1,F_m}"}
        assert report.details["surjective"]

    def test_eta_on_boolean_frame(self, two_point):
        report = eta_check(two_point)
        assert report.holds
        assert report.details["eta"] == {"e": "F_{e}", "a": "F_{a}"}
        assert report.details["bijective"]

    def test_eta_on_ordered_frame(self, library):
        report = eta_check(library["bi-nat2"])
        assert report.holds
        assert report.details["bijective"]

    def test_eta_preserves_minus(self, library):
        report = eta_check(library["cbi-2pt"])
        assert report.holds
        assert "minus" in report.checked


def upset_algebra(logic: Logic, rng: random.Random) -> Algebra:
    """
    The up-sets of a random poset on at most three points, with star and
    seq as meet, mor as join and diamond as the identity.

    Boolean and De Morgan kinds get a discrete poset, so the carrier is a
    powerset and the multiplicative negation is involutive.
    """
    points = "abc"[:rng.randint(1, 3)]
    below = set()
    if not logic.boolean and logic.name is not LogicName.DMBI:
        below = {(x, y) for x, y in combinations(points, 2) if rng.random() < 0.5}
        below |= {(x, z) for x, y in below for y2, z in below if y == y2}
    upsets = [frozenset(s) for k in range(len(points) + 1) for s in combinations(points, k)
              if all(y in s for x, y in below if x in s)]
    name = {s: "{" + ",".join(sorted(s)) + "}" for s in upsets}
    carrier = [name[s] for s in upsets]
    leq = [(name[s], name[t]) for s in upsets for t in upsets if s <= t]
    meet = {(name[s], name[t]): name[s & t] for s in upsets for t in upsets}
    join = {(name[s], name[t]): name[s | t] for s in upsets for t in upsets}
    tables = {"star": meet}
    if logic.name in (LogicName.BIBI, LogicName.BIBBI):
        tables["mor"] = join
    if logic.name is LogicName.CKBI:
        tables["seq"] = meet
    constants = {}
    if logic.has_units:
        constants["munit"] = name[frozenset(points)]
    if logic.name in (LogicName.DMBI, LogicName.CBI, LogicName.BIBI, LogicName.BIBBI):
        constants["mbot"] = name[frozenset()]
    unary = {"diamond": {x: x for x in carrier}} if logic.name is LogicName.SML else None
    return derive_algebra(logic, carrier, leq, tables, unary, constants)


class TestGeneratedAlgebras:
    @pytest.mark.parametrize("name", [n.value for n in LogicName])
    def test_theta_embeds_every_generated_algebra(self, name):
        logic = Logic.parse(name)
        rng = random.Random(17)
        for _ in range(6):
            a = upset_algebra(logic, rng)
            assert check_algebra(a) == []
            report = theta_check(a)
            assert report.holds, report.violations
            assert report.details["surjective"]

    def test_generator_is_seeded(self):
        bi = Logic(LogicName.BI)
        first = upset_algebra(bi, random.Random(3))
        second = upset_algebra(bi, random.Random(3))
        assert first.carrier == second.carrier
        assert first.leq == second.leq

    def test_intuitionistic_kinds_get_proper_heyting_algebras(self):
        rng = random.Random(17)
        sizes = {len(upset_algebra(Logic(LogicName.BI), rng).carrier) for _ in range(20)}
        assert sizes - {2, 4, 8}


class TestInverseImage:
    def test_identity(self, two_point):
        report = inverse_image_check({"e": "e", "a": "a"}, two_point, two_point)
        assert report.holds
        assert report.details["map"]["{a}"] == "{a}"

    def test_requires_a_morphism(self, library, two_point):
        with pytest.raises(FrameError):
            inverse_image_check({"e": "e"}, library["bbi-1pt"], two_point)


class TestCorrespondence:
    @pytest.mark.parametrize("axiom", list(SigmaAxiom))
    def test_frame_with_every_property(self, library, axiom):
        report = correspondence_check(library["bibbi-2pt"], axiom)
        assert report.details["property_holds"]
        assert report.details["axiom_valid"]
        assert report.holds

    @pytest.mark.parametrize("axiom", list(SigmaAxiom))
    def test_named_violators_falsify_their_axiom(self, library, axiom):
        report = correspondence_check(library[f"bibbi-violates-{axiom.value}"], axiom)
        assert not report.details["property_holds"]
        assert report.details["search"] == "found"
        assert report.details["falsifier"] is not None
        assert not report.details["axiom_valid"]
        assert report.holds

    def test_needs_bi_intuitionistic_frame(self, two_point):
        with pytest.raises(FrameError):
            correspondence_check(two_point, SigmaAxiom.ASSOC)
