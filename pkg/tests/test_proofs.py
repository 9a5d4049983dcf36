import pytest

from bunchkit.exceptions import InputError
from bunchkit.proofs import check_proof, list_rules, proof_from_dict, proof_to_dict
from bunchkit.syntax import Logic, LogicName


def rule_ids(name: str, **flags):
    return [r.rule_id for r in list_rules(Logic.parse(name, **flags))]


def proof(logic: str, *steps):
    return proof_from_dict({"logic": logic, "steps": list(steps)})


class TestRuleSets:
    def test_bbi_has_rules_0_to_18(self):
        assert rule_ids("BBI") == [f"R{i}" for i in range(19)]

    def test_bi_drops_double_negation(self):
        assert rule_ids("BI") == [f"R{i}" for i in range(1, 19)]

    def test_layered_logics_stop_at_15(self):
        assert rule_ids("ILGL") == [f"R{i}" for i in range(1, 16)]
        assert rule_ids("LGL") == [f"R{i}" for i in range(16)]

    def test_ckbi_extends_bbi(self):
        extra = ["R25", "R26", "R27", "R28", "R29", "R30", "R31", "R34", "R35"]
        assert rule_ids("CKBI") == rule_ids("BBI") + extra

    def test_de_morgan_rules(self):
        assert rule_ids("DMBI")[-2:] == ["R19", "R20"]

    def test_sigma_rows_follow_flags(self):
        ids = rule_ids("BiBBI", sigma=["weak-dist", "assoc"])
        assert ids[-6:] == ["R21", "R22", "R23", "R24", "assoc", "weak-dist"]

    def test_modal_packages(self):
        assert rule_ids("SML")[-3:] == ["Mono◇", "Dist◇∨", "◇⊥"]
        assert rule_ids("SML", modal="S4")[-2:] == ["T", "4"]
        assert rule_ids("SML", modal="S5")[-3:] == ["T", "4", "B5"]

    def test_commutative_logics_state_left_wand_rules_with_wand(self):
        r14 = next(r for r in list_rules(Logic(LogicName.BBI)) if r.rule_id == "R14")
        assert "*-" not in r14.schema_text()
        layered = next(r for r in list_rules(Logic(LogicName.ILGL)) if r.rule_id == "R14")
        assert "*-" in layered.schema_text()


class TestCheckProof:
    def test_identity_in_ilgl(self):
        p = proof("ILGL", {"seq": ["p", "p"], "rule": "R1", "subst": {"phi": "p"}})
        assert check_proof(p).accepted

    def test_commutativity_in_bbi(self):
        p = proof("BBI", {"seq": ["p * q", "q * p"], "rule": "R17", "subst": {"phi": "p", "psi": "q"}})
        assert check_proof(p).accepted

    def test_instantiation_mismatch(self):
        p = proof("BBI", {"seq": ["p", "p * p"], "rule": "R17", "subst": {"phi": "p", "psi": "p"}})
        verdict = check_proof(p)
        assert not verdict.accepted
        assert verdict.step == 0
        assert "instantiation" in verdict.reason

    def test_double_negation_only_in_boolean_logics(self):
        step = {"seq": ["!!p", "p"], "rule": "R0", "subst": {"phi": "p"}}
        assert check_proof(proof("BBI", step)).accepted
        verdict = check_proof(proof("BI", step))
        assert not verdict.accepted
        assert "R0" in verdict.reason

    def test_two_step_derivation(self):
        p = proof(
            "BBI",
            {"seq": ["p * q", "q * p"], "rule": "R17", "subst": {"phi": "p", "psi": "q"}},
            {"seq": ["p * q", "q * p \\/ r"], "rule": "R8", "premises": [0],
             "subst": {"phi": "p * q", "psi1": "q * p", "psi2": "r"}},
        )
        assert check_proof(p).accepted

    def test_premise_must_come_earlier(self):
        p = proof(
            "BBI",
            {"seq": ["p * q", "q * p \\/ r"], "rule": "R8", "premises": [0],
             "subst": {"phi": "p * q", "psi1": "q * p", "psi2": "r"}},
        )
        verdict = check_proof(p)
        assert not verdict.accepted
        assert "earlier" in verdict.reason

    def test_wrong_arity(self):
        p = proof("BBI", {"seq": ["p", "p"], "rule": "R1", "premises": [0], "subst": {"phi": "p"}})
        assert "premises" in check_proof(p).reason

    def test_connective_outside_logic_is_a_rejection(self):
        p = proof("BBI", {"seq": ["p *- q", "p *- q"], "rule": "R1", "subst": {"phi": "p *- q"}})
        verdict = check_proof(p)
        assert not verdict.accepted
        assert "dnaw" in verdict.reason

    def test_unit_rule_both_directions(self):
        forward = {"seq": ["p * emp", "p"], "rule": "R18", "subst": {"phi": "p"}}
        backward = {"seq": ["p", "p * emp"], "rule": "R18", "subst": {"phi": "p"}}
        assert check_proof(proof("BBI", forward, backward)).accepted

    def test_sigma_rule_needs_its_flag(self):
        step = {"seq": ["p mor p", "p"], "rule": "mor-contr", "subst": {"phi": "p"}}
        assert not check_proof(proof("BiBBI", step)).accepted
        flagged = proof_from_dict({"logic": "BiBBI", "sigma": ["mor-contr"], "steps": [step]})
        assert check_proof(flagged).accepted

    def test_document_round_trip(self):
        p = proof("BBI", {"seq": ["p * q", "q * p"], "rule": "R17", "subst": {"phi": "p", "psi": "q"}})
        assert proof_from_dict(proof_to_dict(p)) == p

    def test_malformed_document(self):
        with pytest.raises(InputError):
            proof_from_dict({"logic": "BBI", "steps": [{"rule": "R1"}]})
