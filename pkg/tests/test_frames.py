import random

import pytest

from bunchkit.exceptions import FrameError, InputError, SignatureError
from bunchkit.explorer import random_formula
from bunchkit.frames import (
    UDMF, Frame, Model, Violation, check_frame, check_morphism, check_persistent,
    check_sigma_property, check_udmf, entails_in_model, frame_from_dict, frame_to_dict,
    infinity_set, persistence_sweep, satisfies, upsets, updown_closure, valid_in_frame,
    valuation_from_dict, valuations,
)
from bunchkit.syntax import Logic, LogicName, SigmaAxiom, parse_formula, parse_sequent


def one_point(units=frozenset({"e"})) -> Frame:
    return Frame(Logic(LogicName.BBI), ("e",), frozenset({("e", "e", "e")}), frozenset(units))


class TestFrameChecks:
    def test_one_point_bbi_frame(self):
        assert check_frame(one_point()) == []

    def test_two_point_bbi_frame(self, two_point):
        assert check_frame(two_point) == []

    def test_missing_unit(self):
        assert check_frame(one_point(units=())) == [Violation("Unit Existence", {"x": "e"})]

    def test_coherence_in_bbi(self):
        comp = frozenset({("e", "e", "e"), ("e", "a", "a"), ("a", "e", "a"), ("a", "e", "e"), ("e", "a", "e")})
        f = Frame(Logic(LogicName.BBI), ("e", "a"), comp, frozenset({"e"}))
        assert "Coherence" in [v.axiom for v in check_frame(f)]

    def test_boolean_logics_need_identity_order(self):
        order = frozenset({("e", "e"), ("a", "a"), ("e", "a")})
        f = Frame(Logic(LogicName.BBI), ("e", "a"), frozenset({("e", "e", "e"), ("e", "a", "a"), ("a", "e", "a")}),
                  frozenset({"e"}), order)
        assert "Identity Order" in [v.axiom for v in check_frame(f)]

    def test_layered_chain_has_no_unit_conditions(self, library):
        assert check_frame(library["ilgl-2chain"]) == []

    def test_duplicate_states(self):
        with pytest.raises(FrameError):
            Frame(Logic(LogicName.BBI), ("e", "e"))

    def test_unknown_state_in_relation(self):
        with pytest.raises(FrameError):
            Frame(Logic(LogicName.BBI), ("e",), frozenset({("e", "e", "z")}), frozenset({"e"}))

    def test_fields_outside_the_kind(self):
        with pytest.raises(FrameError):
            Frame(Logic(LogicName.BBI), ("e",), frozenset({("e", "e", "e")}), frozenset({"e"}), minus={"e": "e"})

    def test_units_not_allowed_in_layered_frames(self):
        with pytest.raises(FrameError):
            Frame(Logic(LogicName.LGL), ("e",), units=frozenset({"e"}))

    def test_sigma_property_on_named_violator(self, library):
        assert check_sigma_property(library["bibbi-2pt"], SigmaAxiom.ASSOC) is None
        violation = check_sigma_property(library["bibbi-violates-assoc"], SigmaAxiom.ASSOC)
        assert violation is not None
        assert violation.axiom == "Sigma Associativity"

    def test_infinity_set_of_cbi_frame(self, library):
        infinity, violations = infinity_set(library["cbi-2pt"])
        assert infinity == {"a"}
        assert violations == []

    def test_infinity_set_needs_minus(self, two_point):
        with pytest.raises(FrameError):
            infinity_set(two_point)


class TestSatisfaction:
    def test_atom_and_unit(self, two_point, bbi):
        m = Model(two_point, {"p": {"a"}})
        assert satisfies(m, "a", parse_formula("p", bbi))
        assert not satisfies(m, "a", parse_formula("emp", bbi))
        assert satisfies(m, "e", parse_formula("emp", bbi))

    def test_star_needs_a_split(self, two_point, bbi):
        m = Model(two_point, {"p": {"a"}})
        assert not satisfies(m, "a", parse_formula("p * p", bbi))
        assert satisfies(m, "a", parse_formula("p * emp", bbi))

    def test_wand(self, two_point, bbi):
        m = Model(two_point, {"p": {"a"}})
        assert satisfies(m, "e", parse_formula("p -* p", bbi))
        assert not satisfies(m, "e", parse_formula("emp -* p", bbi))

    def test_boolean_negation(self, two_point, bbi):
        m = Model(two_point, {"p": {"a"}})
        assert satisfies(m, "e", parse_formula("!p", bbi))

    def test_unknown_state(self, two_point, bbi):
        with pytest.raises(InputError):
            satisfies(Model(two_point), "z", parse_formula("p", bbi))

    def test_connective_outside_the_frame_logic(self, two_point):
        f = parse_formula("p *- q", Logic(LogicName.ILGL))
        with pytest.raises(SignatureError):
            satisfies(Model(two_point), "e", f)

    def test_entailment_in_a_model(self, two_point, bbi):
        m = Model(two_point, {"p": {"a"}})
        assert not entails_in_model(m, parse_sequent("p |- p * p", bbi))
        assert entails_in_model(m, parse_sequent("p * q |- q * p", bbi))

    def test_validity_over_all_valuations(self, two_point, bbi):
        assert not valid_in_frame(two_point, parse_sequent("p |- p * p", bbi))
        assert valid_in_frame(two_point, parse_sequent("p * emp |- p", bbi))

    def test_udmf_mode_limited_to_bi_and_bbi(self, library):
        with pytest.raises(InputError):
            Model(library["ilgl-2chain"], {}, UDMF)

    def test_unknown_mode(self, two_point):
        with pytest.raises(InputError):
            Model(two_point, {}, "weak")


class TestPersistence:
    def test_valuation_must_be_an_upset(self, library):
        with pytest.raises(InputError):
            Model(library["bi-nat2"], {"p": {"0"}})

    def test_check_persistent(self, library):
        f = library["bi-nat2"]
        assert check_persistent(f, {"p": {"1", "2"}})
        assert not check_persistent(f, {"p": {"1"}})

    def test_upsets_of_a_chain(self, library):
        assert upsets(library["bi-nat2"]) == [frozenset(), {"2"}, {"1", "2"}, {"0", "1", "2"}]

    def test_valuation_count(self, library):
        assert len(list(valuations(library["bi-nat2"], ["p", "q"]))) == 16

    def test_random_formulas_stay_persistent(self, library):
        f = library["bi-nat2"]
        bi = Logic(LogicName.BI)
        rng = random.Random(3)
        formulas = [random_formula(bi, ("p", "q"), 3, rng) for _ in range(100)]
        for v in valuations(f, ["p", "q"]):
            assert persistence_sweep(Model(f, v), formulas) == []


class TestUpDownClosure:
    def test_closure_adds_larger_results(self, library):
        closed = updown_closure(library["bi-nat2"])
        assert closed.compose("0", "0") == {"0", "1", "2"}
        assert closed.compose("1", "1") == {"2"}

    def test_closed_frame_is_a_udmf(self, library):
        assert check_udmf(updown_closure(library["bi-nat2"])) == []

    def test_closure_needs_a_legal_frame(self):
        with pytest.raises(FrameError):
            updown_closure(one_point(units=()))

    def test_closure_rejects_other_kinds(self, library):
        with pytest.raises(FrameError):
            updown_closure(library["ilgl-2chain"])


class TestMorphisms:
    def test_identity(self, two_point):
        assert check_morphism({"e": "e", "a": "a"}, two_point, two_point) == []

    def test_missing_back_condition(self, two_point):
        violations = check_morphism({"e": "e"}, one_point(), two_point)
        assert [v.axiom for v in violations] == ["clause 3", "clause 4"]

    def test_unit_sent_to_non_unit(self):
        target = Frame(Logic(LogicName.BBI), ("e",), frozenset({("e", "e", "e")}))
        assert check_morphism({"e": "e"}, one_point(), target) == [Violation("clause 7", {"e": "e"})]

    def test_kinds_must_agree(self, library):
        with pytest.raises(FrameError):
            check_morphism({"e": "e"}, library["bbi-1pt"], library["cbi-1pt"])

    def test_map_must_be_total(self, two_point):
        with pytest.raises(InputError):
            check_morphism({"e": "e"}, two_point, two_point)

    def test_map_must_land_in_target(self, two_point):
        with pytest.raises(InputError):
            check_morphism({"e": "z"}, one_point(), two_point)


class TestDocuments:
    def test_round_trip(self, library):
        for name in ("bbi-2pt", "cbi-2pt", "ckbi-2pt", "sml-2pt", "bibbi-2pt", "bi-nat2"):
            f = library[name]
            assert frame_from_dict(frame_to_dict(f)) == f

    def test_missing_order_is_identity(self):
        f = frame_from_dict({"kind": "BBI", "states": ["e"], "comp": [["e", "e", "e"]], "E": ["e"]})
        assert f.order == {("e", "e")}

    def test_logic_override(self):
        doc = {"kind": "BBI", "states": ["e"], "comp": [["e", "e", "e"]], "E": ["e"]}
        assert frame_from_dict(doc, Logic(LogicName.BI)).kind is LogicName.BI

    def test_malformed(self):
        with pytest.raises(InputError):
            frame_from_dict({"kind": "BBI"})

    def test_valuation_document(self):
        assert valuation_from_dict({"p": ["a"]}) == {"p": frozenset({"a"})}
        with pytest.raises(InputError):
            valuation_from_dict({"p": 3})
