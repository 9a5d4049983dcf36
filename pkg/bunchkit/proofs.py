"""
Hilbert systems and a rule-by-rule proof checker

Every rule is a schema over the metavariables phi, psi, chi, xi, eta,
psi1 and psi2. A proof step names its rule and supplies the substitution
that instantiates the schema; the checker never searches for one.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple
import logging

from .exceptions import InputError, SignatureError
from .syntax import (
    Formula, Logic, LogicName, ModalClass, Sequent, SigmaAxiom,
    atoms, check_signature, parse_unchecked, print_formula, substitute,
)

logger = logging.getLogger(__name__)

METAVARIABLES = ("phi", "psi", "chi", "xi", "eta", "psi1", "psi2")

Variant = Tuple[Tuple[str, ...], str]


def _schema(text: str) -> Sequent:
    left, right = text.split("|-")
    return Sequent(parse_unchecked(left), parse_unchecked(right))


@dataclass(frozen=True)
class Rule:
    """
    A named rule schema.

    ``variants`` lists the alternative (premises, conclusion) shapes the
    rule admits: both directions of a ⊣⊢ rule, or the choice of disjunct
    in rules 5 and 8. All variants have the same number of premises.
    """

    rule_id: str
    variants: Tuple[Variant, ...]
    name: str = ""

    @property
    def arity(self) -> int:
        return len(self.variants[0][0])

    @cached_property
    def schemas(self) -> List[Tuple[Tuple[Sequent, ...], Sequent]]:
        return [(tuple(_schema(p) for p in premises), _schema(conclusion))
                for premises, conclusion in self.variants]

    def metavariables(self, variant: int = 0) -> FrozenSet[str]:
        premises, conclusion = self.schemas[variant]
        found: FrozenSet[str] = frozenset()
        for s in premises + (conclusion,):
            found |= atoms(s.antecedent) | atoms(s.consequent)
        return found

    def schema_text(self) -> str:
        shapes = []
        for premises, conclusion in self.variants:
            shapes.append(f"{', '.join(premises)}  /  {conclusion}" if premises else conclusion)
        return "  |  ".join(shapes)

    def to_dict(self) -> Dict[str, Any]:
        return {"rule": self.rule_id, "name": self.name, "premises": self.arity, "schema": self.schema_text()}


def _axiom(rule_id: str, conclusion: str, name: str) -> Rule:
    return Rule(rule_id, (((), conclusion),), name)


def _inference(rule_id: str, premises: Sequence[str], conclusion: str, name: str) -> Rule:
    return Rule(rule_id, ((tuple(premises), conclusion),), name)


def _equivalence(rule_id: str, left: str, right: str, name: str) -> Rule:
    return Rule(rule_id, (((), f"{left} |- {right}"), ((), f"{right} |- {left}")), name)


LAYERED_RULES = [
    _axiom("R0", "!!phi |- phi", "double negation"),
    _axiom("R1", "phi |- phi", "identity"),
    _axiom("R2", "phi |- top", "top"),
    _axiom("R3", "bot |- phi", "bottom"),
    _inference("R4", ["eta |- phi", "eta |- psi"], "eta |- phi /\\ psi", "and introduction"),
    Rule("R5", (
        (("phi |- psi1 /\\ psi2",), "phi |- psi1"),
        (("phi |- psi1 /\\ psi2",), "phi |- psi2"),
    ), "and elimination"),
    _inference("R6", ["phi |- psi"], "eta /\\ phi |- psi", "and weakening"),
    _inference("R7", ["eta |- psi", "phi |- psi"], "eta \\/ phi |- psi", "or elimination"),
    Rule("R8", (
        (("phi |- psi1",), "phi |- psi1 \\/ psi2"),
        (("phi |- psi2",), "phi |- psi1 \\/ psi2"),
    ), "or introduction"),
    _inference("R9", ["eta |- phi -> psi", "eta |- phi"], "eta |- psi", "modus ponens"),
    _inference("R10", ["eta /\\ phi |- psi"], "eta |- phi -> psi", "implication introduction"),
    _inference("R11", ["xi |- phi", "eta |- psi"], "xi * eta |- phi * psi", "star monotonicity"),
    _inference("R12", ["eta * phi |- psi"], "eta |- phi -* psi", "wand introduction"),
    _inference("R13", ["xi |- phi -* psi", "eta |- phi"], "xi * eta |- psi", "wand elimination"),
    _inference("R14", ["eta * phi |- psi"], "phi |- eta *- psi", "left wand introduction"),
    _inference("R15", ["xi |- phi *- psi", "eta |- phi"], "eta * xi |- psi", "left wand elimination"),
]

# a commutative product has a single residual, so rules 14 and 15 use -*
COMMUTED_RULES = [
    _inference("R14", ["eta * phi |- psi"], "phi |- eta -* psi", "left wand introduction"),
    _inference("R15", ["xi |- phi -* psi", "eta |- phi"], "eta * xi |- psi", "left wand elimination"),
]

BUNCHED_RULES = [
    _axiom("R16", "(phi * psi) * xi |- phi * (psi * xi)", "star associativity"),
    _axiom("R17", "phi * psi |- psi * phi", "star commutativity"),
    _equivalence("R18", "phi * emp", "phi", "unit"),
]

DE_MORGAN_RULES = [
    _equivalence("R19", "mnot mnot phi", "phi", "involution"),
    _equivalence("R20", "mnot phi", "phi -* mbot", "negation as wand"),
]

BI_INTUITIONISTIC_RULES = [
    _inference("R21", ["eta |- phi mor psi"], "eta rslash phi |- psi", "rslash introduction"),
    _inference("R22", ["eta rslash phi |- psi"], "eta |- phi mor psi", "rslash elimination"),
    _inference("R23", ["xi |- phi", "eta |- psi"], "xi mor eta |- phi mor psi", "mor monotonicity"),
    _axiom("R24", "phi mor psi |- psi mor phi", "mor commutativity"),
]

SIGMA_RULES = {
    SigmaAxiom.ASSOC: _axiom("assoc", "phi mor (psi mor chi) |- (phi mor psi) mor chi", "mor associativity"),
    SigmaAxiom.MBOT_WEAK: _axiom("mbot-weak", "phi |- phi mor mbot", "mbot weakening"),
    SigmaAxiom.MBOT_CONTR: _axiom("mbot-contr", "phi mor mbot |- phi", "mbot contraction"),
    SigmaAxiom.MOR_CONTR: _axiom("mor-contr", "phi mor phi |- phi", "mor contraction"),
    SigmaAxiom.WEAK_DIST: _axiom("weak-dist", "phi * (psi mor chi) |- (phi * psi) mor chi", "weak distributivity"),
}

CONCURRENT_RULES = [
    _inference("R25", ["xi |- phi", "eta |- psi"], "xi ; eta |- phi ; psi", "seq monotonicity"),
    _inference("R26", ["eta ; phi |- psi"], "eta |- phi -; psi", "right seq residual introduction"),
    _inference("R27", ["xi |- phi -; psi", "eta |- phi"], "xi ; eta |- psi", "right seq residual elimination"),
    _inference("R28", ["eta ; phi |- psi"], "phi |- eta ;- psi", "left seq residual introduction"),
    _inference("R29", ["xi |- phi ;- psi", "eta |- phi"], "eta ; xi |- psi", "left seq residual elimination"),
    _equivalence("R30", "emp ; phi", "phi", "left seq unit"),
    _equivalence("R31", "phi ; emp", "phi", "right seq unit"),
    _equivalence("R34", "phi ; (psi ; chi)", "(phi ; psi) ; chi", "seq associativity"),
    _axiom("R35", "(phi * psi) ; (chi * xi) |- (phi ; chi) * (psi ; xi)", "exchange"),
]

MODAL_RULES = [
    _inference("Mono◇", ["phi |- psi"], "<>phi |- <>psi", "diamond monotonicity"),
    _equivalence("Dist◇∨", "<>(phi \\/ psi)", "<>phi \\/ <>psi", "diamond distributes over or"),
    _axiom("◇⊥", "<>bot |- bot", "diamond bottom"),
]
S4_RULES = [
    _axiom("T", "phi |- <>phi", "reflexivity"),
    _axiom("4", "<><>phi |- <>phi", "transitivity"),
]
S5_RULES = [_axiom("B5", "<>[]phi |- []phi", "symmetry")]


def list_rules(logic: Logic) -> List[Rule]:
    """
    The Hilbert system of a logic, in rule-number order.

    Boolean logics start from rules 0-15, intuitionistic ones from 1-15;
    unit-bearing logics add 16-18 and then their own extensions. Σ rows
    and the modal class extend the list according to the logic's flags.
    """
    kind = logic.name
    rules = list(LAYERED_RULES) if logic.boolean else LAYERED_RULES[1:]
    if not logic.has_units:
        return rules
    rules = rules[:-2] + COMMUTED_RULES
    rules += BUNCHED_RULES
    if kind in (LogicName.DMBI, LogicName.CBI):
        rules += DE_MORGAN_RULES
    if kind in (LogicName.BIBI, LogicName.BIBBI):
        rules += BI_INTUITIONISTIC_RULES
        rules += [SIGMA_RULES[s] for s in SigmaAxiom if s in logic.sigma]
    if kind is LogicName.CKBI:
        rules += CONCURRENT_RULES
    if kind is LogicName.SML:
        rules += MODAL_RULES
        if logic.modal is not ModalClass.NONE:
            rules += S4_RULES
        if logic.modal is ModalClass.S5:
            rules += S5_RULES
    return rules


# ----------------------------------------------------------------------------
# Proofs
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    sequent: Sequent
    rule: str
    premises: Tuple[int, ...] = ()
    subst: Mapping[str, Formula] = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class Proof:
    logic: Logic
    steps: Tuple[Step, ...]


@dataclass(frozen=True)
class Verdict:
    """Accepted, or the index of the first failing step with the reason"""

    accepted: bool
    step: Optional[int] = None
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"accepted": self.accepted, "step": self.step, "reason": self.reason}

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        return f"rejected at step {self.step}: {self.reason}"


def _instantiate(s: Sequent, subst: Mapping[str, Formula]) -> Sequent:
    return Sequent(substitute(s.antecedent, subst), substitute(s.consequent, subst))


def _check_step(index: int, step: Step, steps: Sequence[Step], rules: Mapping[str, Rule],
                logic: Logic) -> Optional[str]:
    """The reason the step is rejected, or None"""
    for s in (step.sequent,) + tuple(step.subst.values()):
        parts = (s.antecedent, s.consequent) if isinstance(s, Sequent) else (s,)
        try:
            for part in parts:
                check_signature(part, logic)
        except SignatureError as e:
            return str(e)

    rule = rules.get(step.rule)
    if rule is None:
        return f"rule '{step.rule}' is not in the {logic} system"
    if len(step.premises) != rule.arity:
        return f"rule {rule.rule_id} takes {rule.arity} premises, got {len(step.premises)}"
    for k in step.premises:
        if not 0 <= k < index:
            return f"premise {k} is not an earlier step"

    reasons = []
    for variant, (premises, conclusion) in enumerate(rule.schemas):
        missing = sorted(rule.metavariables(variant) - set(step.subst))
        if missing:
            reasons.append(f"substitution leaves {', '.join(missing)} unassigned")
            continue
        if _instantiate(conclusion, step.subst) != step.sequent:
            reasons.append("instantiation does not match the step's sequent")
            continue
        mismatch = [
            k for k, schema in zip(step.premises, premises)
            if _instantiate(schema, step.subst) != steps[k].sequent
        ]
        if mismatch:
            reasons.append(f"instantiation does not match premise step {mismatch[0]}")
            continue
        return None
    return reasons[0]


def check_proof(p: Proof, logic: Optional[Logic] = None) -> Verdict:
    """
    Check a proof step by step.

    Args:
        p: The proof object
        logic: Logic to check against; defaults to the proof's own

    Returns:
        An accepted Verdict, or the first failing step with its reason
    """
    logic = logic or p.logic
    rules = {r.rule_id: r for r in list_rules(logic)}
    for index, step in enumerate(p.steps):
        reason = _check_step(index, step, p.steps, rules, logic)
        if reason is not None:
            logger.debug("proof rejected at step %d: %s", index, reason)
            return Verdict(False, index, reason)
    return Verdict(True)


def rule_instance(rule: Rule, subst: Mapping[str, Formula],
                  variant: int = 0) -> Tuple[Tuple[Sequent, ...], Sequent]:
    """Premises and conclusion of a rule variant under a substitution"""
    premises, conclusion = rule.schemas[variant]
    return tuple(_instantiate(s, subst) for s in premises), _instantiate(conclusion, subst)


# ----------------------------------------------------------------------------
# JSON documents
# ----------------------------------------------------------------------------

def _sequent_from_pair(pair) -> Sequent:
    left, right = pair
    return Sequent(parse_unchecked(str(left)), parse_unchecked(str(right)))


def proof_from_dict(doc: Mapping[str, Any], logic: Optional[Logic] = None) -> Proof:
    """
    Read a proof document.

    Formulas are parsed without a signature check so that a connective
    outside the logic surfaces as a rejected step, not an exception.

    Raises:
        InputError: Missing keys or wrongly shaped entries
        ParseError: A formula does not parse
    """
    try:
        if logic is None:
            logic = Logic.parse(doc["logic"], doc.get("sigma", ()), doc.get("modal", "none"))
        steps = []
        for entry in doc["steps"]:
            steps.append(Step(
                sequent=_sequent_from_pair(entry["seq"]),
                rule=str(entry["rule"]),
                premises=tuple(int(k) for k in entry.get("premises", ())),
                subst={str(k): parse_unchecked(str(v)) for k, v in entry.get("subst", {}).items()},
            ))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed proof document: {e}") from e
    return Proof(logic, tuple(steps))


def proof_to_dict(p: Proof) -> Dict[str, Any]:
    return {
        "logic": p.logic.name.value,
        "sigma": sorted(s.value for s in p.logic.sigma),
        "modal": p.logic.modal.value,
        "steps": [
            {
                "seq": [print_formula(s.sequent.antecedent), print_formula(s.sequent.consequent)],
                "rule": s.rule,
                "premises": list(s.premises),
                "subst": {k: print_formula(v) for k, v in sorted(s.subst.items())},
            }
            for s in p.steps
        ],
    }
