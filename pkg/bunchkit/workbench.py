"""
bunchkit workbench

The service object behind the command line: loads JSON documents, runs
the semantic operations and keeps running statistics.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union
import json
import logging

from .algebras import (
    Algebra, algebra_from_dict, algebra_to_dict, algebraic_separation, asl_report,
    check_algebra, residuation_report,
)
from .duality import complex_algebra, correspondence_check, eta_check, inverse_image_check, prime_filter_frame, theta_check
from .exceptions import BunchkitError, InputError
from .explorer import (
    SearchBudget, correspondence_sweep, countermodel_search, morphism_fuzz, persistence_fuzz,
    roundtrip_sweep, soundness_fuzz, transfer_fuzz, udmf_agreement_fuzz,
)
from .frames import (
    DE_MORGAN, STRONG, Frame, Model, check_frame, check_morphism, check_udmf, entails_in_model,
    frame_from_dict, frame_to_dict, infinity_set, satisfies, valid_in_frame, valuation_from_dict,
)
from .heap import (
    Heap, HeapUniverse, Store, heap_frame, indexed_sat, pointer_logic, pointer_sat,
    separation_properties,
)
from .models import sample_library
from .proofs import check_proof, list_rules, proof_from_dict
from .syntax import (
    Logic, LogicName, SigmaAxiom, atoms, depth, expand_defined, parse_formula, parse_sequent,
    print_formula,
)

logger = logging.getLogger(__name__)

FUZZERS = ("soundness", "persistence", "udmf", "transfer", "roundtrip", "correspondence", "morphism")


@dataclass
class Outcome:
    """
    Result of one workbench operation.

    ``ok`` is False for semantic negatives (a failed check, a countermodel
    found); ``payload`` is JSON-ready.
    """

    ok: bool
    payload: Dict[str, Any] = field(default_factory=dict)


def load_json(path: Union[str, Path]) -> Any:
    """Read a UTF-8 JSON document, raising InputError when it cannot be read"""
    logger.debug("reading %s", path)
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from e


def dump_json(doc: Any, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


class Workbench:
    """Runs the bunchkit operations over JSON inputs"""

    def __init__(self, verbose: bool = False, logger: Optional[logging.Logger] = None,
                 budget: Optional[SearchBudget] = None):
        """
        Initialize the workbench.

        Args:
            verbose: If True, log progress at DEBUG level
            logger: Optional custom logger instance
            budget: Default search budget for countermodels and fuzzing
        """
        self.verbose = verbose
        self.budget = budget or SearchBudget()

        if logger:
            self.logger = logger
        else:
            self.logger = self._setup_default_logger()

        self.stats = {
            'frames_checked': 0,
            'algebras_checked': 0,
            'models_evaluated': 0,
            'proofs_checked': 0,
            'countermodels_found': 0,
            'errors': 0,
        }

    def _setup_default_logger(self) -> logging.Logger:
        """Setup default logging configuration"""
        logger = logging.getLogger("bunchkit")

        # Avoid duplicate handlers
        if logger.handlers:
            return logger

        level = logging.DEBUG if self.verbose else logging.INFO
        logger.setLevel(level)

        handler = logging.StreamHandler()
        handler.setLevel(level)
        formatter = logging.Formatter('%(levelname)s: %(message)s')
        handler.setFormatter(formatter)

        logger.addHandler(handler)
        return logger

    # ------------------------------------------------------------------
    # Loading
    # ------------------------------------------------------------------

    def load_frame(self, path: Union[str, Path], logic: Optional[Logic] = None) -> Frame:
        return frame_from_dict(load_json(path), logic)

    def load_algebra(self, path: Union[str, Path], logic: Optional[Logic] = None) -> Algebra:
        return algebra_from_dict(load_json(path), logic)

    def load_valuation(self, path: Optional[Union[str, Path]]) -> Dict[str, Any]:
        if path is None:
            return {}
        return valuation_from_dict(load_json(path))

    def load_universe(self, path: Union[str, Path]) -> HeapUniverse:
        return HeapUniverse.from_dict(load_json(path))

    def load_store(self, path: Union[str, Path]) -> Store:
        return Store.from_dict(load_json(path))

    def load_heap(self, path: Union[str, Path]) -> Heap:
        doc = load_json(path)
        if not isinstance(doc, Mapping):
            raise InputError(f"{path} does not hold a heap object")
        return Heap.of(doc.get("heap", doc))

    # ------------------------------------------------------------------
    # Syntax and proofs
    # ------------------------------------------------------------------

    def parse(self, text: str, logic: Logic) -> Outcome:
        """Parse a formula or a sequent and describe it"""
        if "|-" in text.replace("|->", ""):
            s = parse_sequent(text, logic)
            return Outcome(True, {
                "sequent": f"{print_formula(s.antecedent)} |- {print_formula(s.consequent)}",
                "atoms": sorted(atoms(s.antecedent) | atoms(s.consequent)),
            })
        f = parse_formula(text, logic)
        return Outcome(True, {
            "formula": print_formula(f),
            "expanded": print_formula(expand_defined(f, logic)),
            "atoms": sorted(atoms(f)),
            "depth": depth(f),
        })

    def rules(self, logic: Logic) -> Outcome:
        return Outcome(True, {"logic": str(logic), "rules": [r.to_dict() for r in list_rules(logic)]})

    def check_proof(self, path: Union[str, Path], logic: Optional[Logic] = None) -> Outcome:
        proof = proof_from_dict(load_json(path), logic)
        verdict = check_proof(proof)
        self.stats['proofs_checked'] += 1
        self.logger.debug(f"Proof with {len(proof.steps)} steps: {verdict}")
        return Outcome(verdict.accepted, verdict.to_dict())

    # ------------------------------------------------------------------
    # Frames, models and algebras
    # ------------------------------------------------------------------

    def check_frame(self, frame: Frame) -> Outcome:
        """Check a frame against its kind, with the extra De Morgan and closure facts"""
        violations = check_frame(frame)
        self.stats['frames_checked'] += 1
        payload: Dict[str, Any] = {"kind": str(frame.logic), "violations": [v.to_dict() for v in violations]}
        ok = not violations
        if frame.kind in DE_MORGAN and ok:
            infinity, problems = infinity_set(frame)
            payload["infinity"] = frame.sorted_states(infinity)
            payload["infinity_violations"] = [v.to_dict() for v in problems]
            ok = not problems
        if frame.kind in (LogicName.BI, LogicName.BBI):
            payload["udmf"] = [v.axiom for v in check_udmf(frame)]
        self.logger.debug(f"Frame with {len(frame.states)} states: {len(violations)} violations")
        return Outcome(ok, payload)

    def check_algebra(self, algebra: Algebra) -> Outcome:
        """Check an algebra's axioms and run the reports that apply to its kind"""
        violations = check_algebra(algebra)
        self.stats['algebras_checked'] += 1
        payload: Dict[str, Any] = {"kind": str(algebra.logic), "violations": [v.to_dict() for v in violations]}
        ok = not violations
        if ok:
            checks = [residuation_report(algebra)]
            if algebra.logic.name is LogicName.CKBI:
                checks.append(asl_report(algebra))
            for report in checks:
                payload[report.name] = report.to_dict()
            ok = all(r.holds for r in checks)
            # separation properties are findings about the algebra, not failures
            if algebra.logic.boolean and algebra.logic.has_units:
                separation = algebraic_separation(algebra)
                payload[separation.name] = separation.to_dict()
        return Outcome(ok, payload)

    def sat(self, frame: Frame, valuation: Mapping[str, Any], state: str, formula: str,
            mode: str = STRONG) -> Outcome:
        f = parse_formula(formula, frame.logic)
        result = satisfies(Model(frame, valuation, mode), state, f)
        self.stats['models_evaluated'] += 1
        return Outcome(True, {"state": state, "formula": print_formula(f), "satisfied": result})

    def entails(self, frame: Frame, valuation: Optional[Mapping[str, Any]], sequent: str,
                mode: str = STRONG) -> Outcome:
        """Check a sequent in one model, or in every model on the frame when no valuation is given"""
        s = parse_sequent(sequent, frame.logic)
        if valuation:
            holds = entails_in_model(Model(frame, valuation, mode), s)
            scope = "model"
        else:
            holds = valid_in_frame(frame, s, mode)
            scope = "frame"
        self.stats['models_evaluated'] += 1
        return Outcome(holds, {"sequent": str(s), "scope": scope, "holds": holds})

    # ------------------------------------------------------------------
    # Duality
    # ------------------------------------------------------------------

    def com(self, frame: Frame) -> Outcome:
        algebra = complex_algebra(frame)
        self.stats['frames_checked'] += 1
        return Outcome(True, algebra_to_dict(algebra))

    def pr(self, algebra: Algebra) -> Outcome:
        frame = prime_filter_frame(algebra)
        self.stats['algebras_checked'] += 1
        return Outcome(True, frame_to_dict(frame))

    def roundtrip(self, subject: Union[Frame, Algebra]) -> Outcome:
        """θ for an algebra, η for a frame"""
        report = theta_check(subject) if isinstance(subject, Algebra) else eta_check(subject)
        return Outcome(report.holds, report.to_dict())

    def morphism(self, mapping: Mapping[str, str], source: Frame, target: Frame) -> Outcome:
        violations = check_morphism(mapping, source, target)
        payload: Dict[str, Any] = {"violations": [v.to_dict() for v in violations]}
        if violations:
            return Outcome(False, payload)
        report = inverse_image_check(mapping, source, target)
        payload["inverse_image"] = report.to_dict()
        return Outcome(report.holds, payload)

    def correspondence(self, frame: Frame, axiom: str) -> Outcome:
        try:
            row = SigmaAxiom(axiom)
        except ValueError as e:
            raise InputError(f"unknown correspondence row '{axiom}'") from e
        report = correspondence_check(frame, row)
        return Outcome(report.holds, report.to_dict())

    # ------------------------------------------------------------------
    # Heaps
    # ------------------------------------------------------------------

    def heap_sat(self, universe: HeapUniverse, store: Store, heap: Heap, formula: str,
                 variant: str) -> Outcome:
        f = parse_formula(formula, pointer_logic(variant))
        result = pointer_sat(universe, store, heap, f, variant)
        self.stats['models_evaluated'] += 1
        return Outcome(True, {"store": store.to_dict(), "heap": str(heap), "satisfied": result})

    def indexed_sat(self, universe: HeapUniverse, store: Store, heap: Heap, formula: str,
                    variant: str) -> Outcome:
        f = parse_formula(formula, pointer_logic(variant))
        result = indexed_sat(universe, (store.vals, heap), f, store.ctx, variant)
        self.stats['models_evaluated'] += 1
        return Outcome(True, {"state": f"{list(store.vals)}{heap}", "satisfied": result})

    def sep_props(self, subject: Union[Frame, HeapUniverse], variant: str = "bbi") -> Outcome:
        """Report the separation properties; failed properties are findings, not errors"""
        frame = heap_frame(subject, variant) if isinstance(subject, HeapUniverse) else subject
        report = separation_properties(frame)
        self.stats['frames_checked'] += 1
        return Outcome(True, report.to_dict())

    # ------------------------------------------------------------------
    # Search
    # ------------------------------------------------------------------

    def countermodel(self, sequent: str, budget: Optional[SearchBudget] = None) -> Outcome:
        budget = budget or self.budget
        s = parse_sequent(sequent, budget.logic)
        self.logger.info(f"🔍 Searching countermodels for {s} up to {budget.max_states} states...")
        result = countermodel_search(s, budget)
        self.stats['models_evaluated'] += result.valuations_explored
        if result.found:
            self.stats['countermodels_found'] += 1
            self.logger.info(f"Countermodel found at state {result.countermodel.state}")
        else:
            self.logger.info(result.reason)
        return Outcome(not result.found, result.to_dict())

    def fuzz(self, kind: str, trials: int, budget: Optional[SearchBudget] = None) -> Outcome:
        """
        Run one of the fuzzers or sweeps.

        Raises:
            InputError: Unknown fuzzer name
        """
        budget = budget or self.budget
        runners = {
            "soundness": lambda: soundness_fuzz(budget, trials),
            "persistence": lambda: persistence_fuzz(budget, trials),
            "udmf": lambda: udmf_agreement_fuzz(budget, trials),
            "transfer": lambda: transfer_fuzz(budget, trials),
            "roundtrip": lambda: roundtrip_sweep(budget),
            "correspondence": lambda: correspondence_sweep(budget),
            "morphism": lambda: morphism_fuzz(budget, trials),
        }
        if kind not in runners:
            raise InputError(f"unknown fuzzer '{kind}', expected one of {list(FUZZERS)}")
        self.logger.info(f"🎲 Running {kind} over {budget.logic} (seed {budget.seed})...")
        report = runners[kind]()
        self.stats['models_evaluated'] += trials
        return Outcome(report.holds, report.to_dict())

    # ------------------------------------------------------------------
    # Samples
    # ------------------------------------------------------------------

    def samples(self, directory: Optional[Union[str, Path]] = None) -> Outcome:
        """List the sample library, writing one JSON file per entry when a directory is given"""
        library = sample_library()
        docs = {
            name: algebra_to_dict(item) if isinstance(item, Algebra) else frame_to_dict(item)
            for name, item in library.items()
        }
        if directory is None:
            return Outcome(True, {"samples": docs})
        target = Path(directory)
        try:
            target.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise InputError(f"cannot create {target}: {e}") from e
        written: List[str] = []
        for name, doc in docs.items():
            path = target / f"{name}.json"
            try:
                dump_json(doc, path)
            except OSError as e:
                self.stats['errors'] += 1
                raise InputError(f"cannot write {path}: {e}") from e
            self.logger.debug(f"Wrote {path}")
            written.append(str(path))
        self.logger.info(f"Wrote {len(written)} samples to {target}")
        return Outcome(True, {"written": written})

    # ------------------------------------------------------------------

    def get_stats(self) -> Dict[str, int]:
        """Get workbench statistics"""
        return self.stats.copy()

    def print_summary(self):
        """Print operation summary"""
        self.logger.info("\n📊 Session Summary:")
        self.logger.info(f"   Frames checked: {self.stats['frames_checked']}")
        self.logger.info(f"   Algebras checked: {self.stats['algebras_checked']}")
        self.logger.info(f"   Models evaluated: {self.stats['models_evaluated']}")
        self.logger.info(f"   Proofs checked: {self.stats['proofs_checked']}")
        self.logger.info(f"   Countermodels found: {self.stats['countermodels_found']}")
        if self.stats['errors']:
            self.logger.info(f"   Errors: {self.stats['errors']}")

    def record_error(self, error: BunchkitError) -> None:
        self.stats['errors'] += 1
        self.logger.debug(f"{type(error).__name__}: {error}")
