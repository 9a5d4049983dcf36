import pytest

from bunchkit.algebras import (
    algebra_from_dict, algebra_to_dict, algebraic_separation, asl_report, check_algebra,
    check_sigma_axiom, derive_algebra, evaluate, falsifying_interpretation, interpretations,
    iterate, residuation_report, validates_sequent,
)
from bunchkit.exceptions import AlgebraError, BudgetExhausted, InputError, SignatureError
from bunchkit.syntax import Logic, LogicName, SigmaAxiom, parse_formula, parse_sequent

BOOLEAN = [("0", "1")]
MEET = {(x, y): min(x, y) for x in "01" for y in "01"}


def two_element(name: str, **constants):
    return derive_algebra(Logic(LogicName(name)), "01", BOOLEAN, {"star": MEET},
                          constants={"munit": "1", **constants})


@pytest.fixture
def ckbi():
    return derive_algebra(Logic(LogicName.CKBI), "01", BOOLEAN, {"star": MEET, "seq": MEET},
                          constants={"munit": "1"})


class TestDerive:
    def test_lattice_is_completed(self, library):
        a = library["bbi-alg-2"]
        assert a.const("top") == "1"
        assert a.const("bot") == "0"
        assert a.op("imp", "1", "0") == "0"
        assert a.op("wand", "1", "0") == "0"

    def test_heyting_chain_implication(self, library):
        a = library["bi-heyting-3"]
        assert a.op("imp", "m", "0") == "0"
        assert a.op("imp", "0", "m") == "1"

    def test_not_a_lattice(self):
        with pytest.raises(AlgebraError):
            derive_algebra(Logic(LogicName.BI), "ab", [], {"star": {}}, constants={"munit": "a"})

    def test_missing_constant(self):
        with pytest.raises(AlgebraError):
            derive_algebra(Logic(LogicName.BBI), "01", BOOLEAN, {"star": MEET})

    def test_table_leaving_the_carrier(self):
        with pytest.raises(AlgebraError):
            derive_algebra(Logic(LogicName.BBI), "01", BOOLEAN, {"star": {(x, y): "2" for x in "01" for y in "01"}},
                           constants={"munit": "1"})

    def test_de_morgan_negation_from_mbot(self):
        a = two_element("CBI", mbot="0")
        assert a.un("mneg", "1") == "0"
        assert a.un("mneg", "0") == "1"


class TestCheckAlgebra:
    def test_two_element_meet_algebra(self, library):
        assert check_algebra(library["bbi-alg-2"]) == []

    def test_heyting_chain(self, library):
        assert check_algebra(library["bi-heyting-3"]) == []

    def test_unit_at_bottom(self):
        a = two_element("BBI", munit="0")
        assert [v.axiom for v in check_algebra(a)] == ["Unit"]

    def test_wrong_residual(self):
        a = derive_algebra(Logic(LogicName.BBI), "01", BOOLEAN,
                           {"star": MEET, "wand": {(x, y): "0" for x in "01" for y in "01"}},
                           constants={"munit": "1"})
        assert "Residuation" in [v.axiom for v in check_algebra(a)]

    def test_chain_is_not_boolean(self):
        a = derive_algebra(Logic(LogicName.BBI), "0m1", [("0", "m"), ("m", "1")],
                           {"star": {(x, y): min(x, y, key="0m1".index) for x in "0m1" for y in "0m1"}},
                           constants={"munit": "1"})
        assert "Complement" in [v.axiom for v in check_algebra(a)]

    def test_classical_bi(self):
        assert check_algebra(two_element("CBI", mbot="0")) == []

    def test_ckbi(self, ckbi):
        assert check_algebra(ckbi) == []

    def test_sigma_axiom_on_demand(self):
        a = derive_algebra(Logic(LogicName.BIBBI), "01", BOOLEAN,
                           {"star": MEET, "mor": {(x, y): max(x, y) for x in "01" for y in "01"}},
                           constants={"munit": "1", "mbot": "0"})
        assert check_sigma_axiom(a, SigmaAxiom.MOR_CONTR) is None
        assert check_sigma_axiom(a, SigmaAxiom.MBOT_WEAK) is None


class TestEvaluate:
    def test_bottom_annihilates(self, library, bbi):
        a = library["bbi-alg-2"]
        assert evaluate(a, {"b": "1"}, parse_formula("bot * b", bbi)) == "0"

    def test_wand_into_top(self, library, bbi):
        a = library["bbi-alg-2"]
        for value in a.carrier:
            assert evaluate(a, {"a": value}, parse_formula("a -* top", bbi)) == "1"

    def test_negation_is_expanded(self, library, bbi):
        assert evaluate(library["bbi-alg-2"], {"p": "0"}, parse_formula("!p", bbi)) == "1"

    def test_uncovered_atom(self, library, bbi):
        with pytest.raises(InputError):
            evaluate(library["bbi-alg-2"], {}, parse_formula("p", bbi))

    def test_unknown_element(self, library, bbi):
        with pytest.raises(InputError):
            evaluate(library["bbi-alg-2"], {"p": "2"}, parse_formula("p", bbi))

    def test_signature(self, library):
        with pytest.raises(SignatureError):
            evaluate(library["bbi-alg-2"], {"p": "1"}, parse_formula("mnot p", Logic(LogicName.CBI)))


class TestSequents:
    def test_meet_algebra_validates_contraction(self, library, bbi):
        assert validates_sequent(library["bbi-alg-2"], parse_sequent("p |- p * p", bbi))

    def test_excluded_middle_fails_in_heyting_chain(self, library):
        bi = Logic(LogicName.BI)
        falsifier = falsifying_interpretation(library["bi-heyting-3"], parse_sequent("top |- p \\/ !p", bi))
        assert falsifier == {"p": "m"}

    def test_interpretation_cap(self, library):
        with pytest.raises(BudgetExhausted):
            list(interpretations(library["bi-heyting-3"], ["p", "q", "r"], cap=10))


class TestReports:
    def test_residuation_laws(self, library):
        report = residuation_report(library["bbi-alg-2"])
        assert report.holds
        assert report.details["subset_laws"]
        assert "star: bottom annihilates" in report.checked
        assert "wand: top" in report.checked

    def test_subset_laws_skipped_above_cap(self, library):
        report = residuation_report(library["bi-heyting-3"], subset_cap=2)
        assert report.holds
        assert not report.details["subset_laws"]
        assert "star: preserves joins" not in report.checked

    def test_ckbi_residuation_covers_seq(self, ckbi):
        report = residuation_report(ckbi)
        assert report.holds
        assert "seq: preserves joins" in report.checked

    def test_asl_rules(self, ckbi):
        report = asl_report(ckbi)
        assert report.holds
        assert report.details["valid_triples"] == 7
        assert report.checked == [
            "Frame", "Concurrency", "Skip", "Seq", "NonDet", "Iterate", "Disjunction", "Consequence",
        ]

    def test_asl_needs_ckbi(self, library):
        with pytest.raises(AlgebraError):
            asl_report(library["bbi-alg-2"])

    def test_iterate_from_unit(self, ckbi):
        assert iterate(ckbi, "0") == "1"

    def test_algebraic_separation(self, library):
        report = algebraic_separation(library["bbi-alg-2"])
        assert report.holds
        assert report.checked == ["Indivisible Units", "Divisibility"]

    def test_separation_needs_boolean_units(self, library):
        with pytest.raises(AlgebraError):
            algebraic_separation(library["bi-heyting-3"])


class TestDocuments:
    def test_round_trip(self, library):
        for name in ("bbi-alg-2", "bi-heyting-3"):
            a = library[name]
            assert algebra_from_dict(algebra_to_dict(a)) == a

    def test_tables_derived_from_star(self):
        doc = {
            "kind": "BBI",
            "elements": ["0", "1"],
            "leq": [["0", "1"]],
            "constants": {"munit": "1"},
            "star": [["0", "0", "0"], ["0", "1", "0"], ["1", "0", "0"], ["1", "1", "1"]],
        }
        a = algebra_from_dict(doc)
        assert check_algebra(a) == []
        assert a.op("wand", "1", "0") == "0"

    def test_malformed(self):
        with pytest.raises(InputError):
            algebra_from_dict({"kind": "BBI"})
