import random

import pytest

from bunchkit.exceptions import InputError, SignatureError
from bunchkit.explorer import (
    SearchBudget, canonical_key, correspondence_sweep, countermodel_search, enumerate_frames,
    frames_of_size, morphism_fuzz, persistence_fuzz, random_formula, roundtrip_sweep,
    sample_models, soundness_fuzz, transfer_fuzz, udmf_agreement_fuzz,
)
from bunchkit.frames import UDMF, Frame, Model, check_frame, satisfies
from bunchkit.syntax import Logic, LogicName, check_signature, parse_formula, parse_sequent


def budget(name: str = "BBI", **kwargs) -> SearchBudget:
    return SearchBudget(logic=Logic.parse(name), **kwargs)


class TestBudget:
    def test_state_limit(self):
        with pytest.raises(InputError):
            budget(max_states=6)

    def test_udmf_needs_bi_or_bbi(self):
        with pytest.raises(InputError):
            budget("ILGL", mode=UDMF)

    def test_positive_time_limit(self):
        with pytest.raises(InputError):
            budget(time_limit=0)


class TestEnumeration:
    def test_single_bbi_frame_on_one_state(self):
        frames = frames_of_size(budget(), 1)
        assert len(frames) == 1
        assert frames[0].comp == {("s0", "s0", "s0")}

    def test_two_ilgl_frames_on_one_state(self):
        assert len(frames_of_size(budget("ILGL"), 1)) == 2

    def test_enumerated_frames_are_legal(self):
        for f in enumerate_frames(budget("BI", max_states=2)):
            assert check_frame(f) == []

    def test_no_isomorphic_duplicates(self):
        frames = frames_of_size(budget(), 2)
        keys = [canonical_key(f) for f in frames]
        assert len(set(keys)) == len(keys)

    def test_canonical_key_ignores_names(self, two_point):
        renamed = Frame(two_point.logic, ("x", "y"),
                        frozenset({("x", "x", "x"), ("x", "y", "y"), ("y", "x", "y")}), frozenset({"x"}))
        assert canonical_key(renamed) == canonical_key(two_point)

    def test_extended_kinds(self):
        assert len(frames_of_size(budget("CBI"), 1)) == 1
        for f in frames_of_size(budget("CKBI"), 1):
            assert check_frame(f) == []

    def test_same_frames_with_worker_processes(self):
        serial = frames_of_size(budget(max_states=2), 2)
        parallel = frames_of_size(budget(max_states=2, jobs=2), 2)
        assert serial == parallel


class TestCountermodelSearch:
    def test_contraction_needs_two_states(self, bbi):
        result = countermodel_search(parse_sequent("p |- p * p", bbi), budget(max_states=2))
        assert result.found
        cm = result.countermodel
        assert len(cm.frame.states) == 2
        m = Model(cm.frame, cm.valuation)
        assert satisfies(m, cm.state, parse_formula("p", bbi))
        assert not satisfies(m, cm.state, parse_formula("p * p", bbi))

    def test_unit_entails_bottom_fails_on_one_state(self, bbi):
        result = countermodel_search(parse_sequent("emp |- bot", bbi), budget(max_states=2))
        assert result.found
        assert len(result.countermodel.frame.states) == 1

    def test_exhaustion_is_reported(self, bbi):
        result = countermodel_search(parse_sequent("p /\\ q |- p", bbi), budget(max_states=2))
        assert not result.found
        assert result.complete
        assert "no countermodel up to 2 states" in result.reason

    def test_valuation_cap(self, bbi):
        result = countermodel_search(parse_sequent("p |- p * p", bbi), budget(max_states=2, max_valuations=1))
        assert not result.found
        assert not result.complete
        assert "valuation cap" in result.reason

    def test_signature_is_checked(self):
        s = parse_sequent("p *- q |- p", Logic(LogicName.ILGL))
        with pytest.raises(SignatureError):
            countermodel_search(s, budget())

    def test_result_document(self, bbi):
        doc = countermodel_search(parse_sequent("emp |- bot", bbi), budget()).to_dict()
        assert doc["found"]
        assert doc["countermodel"]["state"] == "s0"
        assert doc["countermodel"]["valuation"] == {}


class TestRandom:
    @pytest.mark.parametrize("name", ["BBI", "ILGL", "CKBI", "SML", "BiBBI", "CBI"])
    def test_formulas_stay_in_signature(self, name):
        logic = Logic.parse(name)
        rng = random.Random(5)
        for _ in range(100):
            check_signature(random_formula(logic, ("p", "q"), 3, rng), logic)

    def test_seeded_sampling_is_deterministic(self):
        first = sample_models(budget(seed=4), 10)
        second = sample_models(budget(seed=4), 10)
        assert [(m.frame, m.valuation) for m in first] == [(m.frame, m.valuation) for m in second]


class TestFuzzers:
    @pytest.mark.parametrize("name", [n.value for n in LogicName])
    def test_rules_are_sound(self, name):
        report = soundness_fuzz(budget(name, seed=1), trials=20)
        assert report.holds, report.violations
        assert report.details["models"] == 20
        assert report.details["premises_held"] > 0

    def test_persistence(self):
        assert persistence_fuzz(budget("BI", seed=2), trials=30).holds

    @pytest.mark.parametrize("name", ["BI", "BBI"])
    def test_udmf_agreement(self, name):
        report = udmf_agreement_fuzz(budget(name, seed=3), trials=1000)
        assert report.holds, report.violations
        assert report.details["triples"] >= 1000

    def test_udmf_agreement_needs_bi(self):
        with pytest.raises(InputError):
            udmf_agreement_fuzz(budget("ILGL"), trials=1)

    @pytest.mark.parametrize("name", [n.value for n in LogicName])
    def test_satisfaction_transfers_to_complex_algebra(self, name):
        report = transfer_fuzz(budget(name, seed=6), trials=30)
        assert report.holds, report.violations

    @pytest.mark.parametrize("name", [n.value for n in LogicName])
    def test_round_trips(self, name):
        report = roundtrip_sweep(budget(name, max_states=2))
        assert report.holds, report.violations
        assert report.details["frames"] >= 1
        assert ("program rules" in report.checked) == (name == "CKBI")

    def test_correspondence_rows(self):
        report = correspondence_sweep(budget("BiBBI", max_states=1))
        assert report.holds
        assert set(report.details["falsified"]) == {"assoc", "mbot-weak", "mbot-contr", "mor-contr", "weak-dist"}

    def test_correspondence_needs_bi_intuitionistic(self):
        with pytest.raises(InputError):
            correspondence_sweep(budget("BBI"))

    def test_inverse_images(self):
        report = morphism_fuzz(budget("BBI", max_states=2, seed=8), trials=50)
        assert report.holds
