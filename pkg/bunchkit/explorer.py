"""
Bounded search over small frames

Exhaustive enumeration of frames up to isomorphism, minimal countermodel
search for sequents, and the fuzzers that back the semantic properties of
the other modules (rule soundness, persistence, closure agreement,
satisfaction transfer and the duality round trips).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple
import logging
import random
import time

from .algebras import asl_report, check_algebra, evaluate
from .duality import complex_algebra, correspondence_check, eta_check, inverse_image_check, set_name, theta_check
from .exceptions import BudgetExhausted, FrameError, InputError
from .frames import (
    BI_INTUITIONISTIC, DE_MORGAN, STRONG, UDMF, Evaluator, Frame, Model, Report,
    check_frame, check_morphism, entails_in_model, frame_to_dict, persistence_sweep,
    satisfies, updown_closure, upsets, valuation_to_dict,
)
from .proofs import list_rules, rule_instance
from .syntax import (
    BINARY, CONSTANTS, UNARY, Formula, Logic, LogicName, ModalClass, Sequent, SigmaAxiom,
    atom, atoms, check_signature, node, print_formula,
)

logger = logging.getLogger(__name__)

MAX_STATES = 5
FUZZ_ATOMS = ("p", "q", "r")

Pair = Tuple[str, str]
Triple = Tuple[str, str, str]
Valuation = Dict[str, FrozenSet[str]]


@dataclass(frozen=True)
class SearchBudget:
    """
    Limits and settings for enumeration, search and fuzzing.

    Attributes:
        logic: The logic whose frames are searched, with its flags
        max_states: Largest frame size tried (1 to 5)
        max_valuations: Cap on valuations evaluated by countermodel search
        time_limit: Wall-clock seconds before the search gives up
        jobs: Worker processes for enumeration
        seed: Seed for every random choice
        mode: Satisfaction mode, 'strong' or 'udmf'
    """

    logic: Logic = field(default_factory=lambda: Logic(LogicName.BBI))
    max_states: int = 2
    max_valuations: int = 100_000
    time_limit: float = 60.0
    jobs: int = 1
    seed: int = 0
    mode: str = STRONG

    def __post_init__(self):
        if not 1 <= self.max_states <= MAX_STATES:
            raise InputError(f"max_states must be between 1 and {MAX_STATES}, got {self.max_states}")
        if self.max_valuations < 1:
            raise InputError("max_valuations must be positive")
        if self.time_limit <= 0:
            raise InputError("time_limit must be positive")
        if self.jobs < 1:
            raise InputError("jobs must be at least 1")
        if self.mode not in (STRONG, UDMF):
            raise InputError(f"unknown satisfaction mode '{self.mode}'")
        if self.mode == UDMF and self.logic.name not in (LogicName.BI, LogicName.BBI):
            raise InputError("the udmf clauses are defined for BI and BBI frames only")


# ----------------------------------------------------------------------------
# Frame enumeration
# ----------------------------------------------------------------------------

BASE_KIND = {
    LogicName.LGL: LogicName.LGL,
    LogicName.ILGL: LogicName.ILGL,
    LogicName.BI: LogicName.BI,
    LogicName.DMBI: LogicName.BI,
    LogicName.BIBI: LogicName.BI,
    LogicName.BBI: LogicName.BBI,
    LogicName.CBI: LogicName.BBI,
    LogicName.BIBBI: LogicName.BBI,
    LogicName.CKBI: LogicName.BBI,
    LogicName.SML: LogicName.BBI,
}


class _Clock:
    """Deadline and candidate counter shared by one enumeration task"""

    def __init__(self, deadline: float):
        self.deadline = deadline
        self.explored = 0

    def tick(self) -> None:
        self.explored += 1
        if self.explored % 256 == 0 and time.time() > self.deadline:
            raise BudgetExhausted(f"time limit reached after {self.explored} candidates", self.explored)


def _subsets(items: Sequence[Any]) -> List[FrozenSet[Any]]:
    return [frozenset(c) for size in range(len(items) + 1) for c in combinations(items, size)]


def _preorders(states: Tuple[str, ...]) -> List[FrozenSet[Pair]]:
    diagonal = frozenset((s, s) for s in states)
    off = [(x, y) for x in states for y in states if x != y]
    found = []
    for size in range(len(off) + 1):
        for chosen in combinations(off, size):
            order = diagonal | frozenset(chosen)
            if all((x, z) in order for x, y in order for y2, z in order if y == y2):
                found.append(order)
    return found


def _relation_tables(keys: Sequence[Pair], allowed: Callable[[Pair], Sequence[str]]) -> Iterator[FrozenSet[Triple]]:
    """Every relation giving each key a subset of its allowed results"""
    choices = [_subsets(sorted(allowed(k))) for k in keys]
    for picked in product(*choices):
        yield frozenset((x, y, z) for (x, y), results in zip(keys, picked) for z in results)


def _symmetric(triples: FrozenSet[Triple]) -> FrozenSet[Triple]:
    return triples | frozenset((y, x, z) for x, y, z in triples)


def canonical_key(f: Frame) -> Tuple:
    """
    The lexicographically least encoding of f over all renamings to s0..sn.

    Two frames of one kind are isomorphic iff their keys are equal.
    """
    return min(_encode(f, dict(zip(perm, _labels(len(f.states))))) for perm in permutations(f.states))


def _labels(n: int) -> List[str]:
    return [f"s{i}" for i in range(n)]


def _encode(f: Frame, m: Mapping[str, str]) -> Tuple:
    return (
        tuple(sorted((m[x], m[y], m[z]) for x, y, z in f.comp)),
        tuple(sorted(m[u] for u in f.units)),
        tuple(sorted((m[x], m[y]) for x, y in f.order)),
        tuple(sorted((m[x], m[y]) for x, y in f.minus.items())),
        tuple(sorted((m[x], m[y], m[z]) for x, y, z in f.nabla)),
        tuple(sorted(m[u] for u in f.u_set)),
        tuple(sorted((m[x], m[y], m[z]) for x, y, z in f.seq)),
        tuple(sorted((m[x], m[y]) for x, y in f.access)),
    )


def _decode(logic: Logic, n: int, key: Tuple) -> Frame:
    comp, units, order, minus, nabla, u_set, seq, access = key
    return Frame(logic, tuple(_labels(n)), frozenset(comp), frozenset(units), frozenset(order),
                 dict(minus), frozenset(nabla), frozenset(u_set), frozenset(seq), frozenset(access))


def _base_frames(task: Tuple[Logic, int, FrozenSet[Pair], FrozenSet[str], float]) -> Tuple[List[Tuple], int]:
    """Canonical keys of the legal base frames with one order and one unit set"""
    logic, n, order, units, deadline = task
    clock = _Clock(deadline)
    states = tuple(_labels(n))
    up = {x: {y for a, y in order if a == x} for x in states}
    keys = set()
    if logic.commutative:
        pairs = [(x, y) for i, x in enumerate(states) for y in states[i:]]

        def allowed(pair):
            x, y = pair
            results = set(states)
            if x in units:
                results &= up[y]
            if y in units:
                results &= up[x]
            return results
    else:
        pairs = [(x, y) for x in states for y in states]

        def allowed(pair):
            return states

    for comp in _relation_tables(pairs, allowed):
        clock.tick()
        if logic.commutative:
            comp = _symmetric(comp)
        f = Frame(logic, states, comp, units, order)
        if not check_frame(f):
            keys.add(canonical_key(f))
    return sorted(keys), clock.explored


def _extensions(logic: Logic, base: Frame) -> Iterator[Dict[str, Any]]:
    """Candidate extra structure turning a base frame into a frame of logic"""
    states = base.states
    kind = logic.name
    if kind in DE_MORGAN:
        for image in permutations(states):
            minus = dict(zip(states, image))
            if all(minus[minus[x]] == x for x in states):
                yield {"minus": minus}
    elif kind in BI_INTUITIONISTIC:
        pairs = [(x, y) for i, x in enumerate(states) for y in states[i:]]
        for nabla in _relation_tables(pairs, lambda pair: states):
            for u_set in _subsets(states):
                yield {"nabla": _symmetric(nabla), "u_set": u_set}
    elif kind is LogicName.CKBI:
        def allowed(pair):
            x, y = pair
            results = set(states)
            if x in base.units:
                results &= {y}
            if y in base.units:
                results &= {x}
            return results

        for seq in _relation_tables([(x, y) for x in states for y in states], allowed):
            yield {"seq": seq}
    elif kind is LogicName.SML:
        diagonal = frozenset((x, x) for x in states)
        off = [(x, y) for x in states for y in states if x != y]
        for access in _subsets(off):
            if logic.modal is ModalClass.NONE:
                for loops in _subsets(states):
                    yield {"access": access | {(x, x) for x in loops}}
            else:
                yield {"access": access | diagonal}
    else:
        yield {}


def _extended_frames(task: Tuple[Logic, int, Tuple, float]) -> Tuple[List[Tuple], int]:
    logic, n, base_key, deadline = task
    clock = _Clock(deadline)
    base = _decode(Logic(BASE_KIND[logic.name]), n, base_key)
    keys = set()
    for extra in _extensions(logic, base):
        clock.tick()
        try:
            f = Frame(logic, base.states, base.comp, base.units, base.order, **extra)
        except FrameError:
            continue
        if not check_frame(f):
            keys.add(canonical_key(f))
    return sorted(keys), clock.explored


def _run(fn: Callable, tasks: List, jobs: int) -> List:
    if jobs == 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def frames_of_size(b: SearchBudget, n: int, deadline: Optional[float] = None) -> List[Frame]:
    """
    Every frame of the budget's logic on n states, one per isomorphism class.

    Frames come back in canonical-key order with states named s0, s1, ...

    Raises:
        BudgetExhausted: The time limit ran out
    """
    deadline = deadline if deadline is not None else time.time() + b.time_limit
    logic = b.logic
    base_logic = Logic(BASE_KIND[logic.name])
    states = tuple(_labels(n))
    orders = [frozenset((s, s) for s in states)] if base_logic.boolean else _preorders(states)
    tasks = []
    for order in orders:
        up = {x: {y for a, y in order if a == x} for x in states}
        if base_logic.has_units:
            for units in _subsets(states):
                if units and (base_logic.boolean or all(up[u] <= units for u in units)):
                    tasks.append((base_logic, n, order, units, deadline))
        else:
            tasks.append((base_logic, n, order, frozenset(), deadline))
    results = _run(_base_frames, tasks, b.jobs)
    base_keys = sorted({key for keys, _ in results for key in keys})
    explored = sum(count for _, count in results)
    if logic == base_logic:
        keys = base_keys
    else:
        results = _run(_extended_frames, [(logic, n, key, deadline) for key in base_keys], b.jobs)
        keys = sorted({key for found, _ in results for key in found})
        explored += sum(count for _, count in results)
    logger.debug("%s: %d frames on %d states from %d candidates", logic, len(keys), n, explored)
    return [_decode(logic, n, key) for key in keys]


def enumerate_frames(b: SearchBudget) -> Iterator[Frame]:
    """
    Yield every frame up to b.max_states, smallest first, up to isomorphism.

    Raises:
        BudgetExhausted: The time limit ran out; frames already yielded stand
    """
    deadline = time.time() + b.time_limit
    for n in range(1, b.max_states + 1):
        yield from frames_of_size(b, n, deadline)


# ----------------------------------------------------------------------------
# Countermodel search
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Countermodel:
    frame: Frame
    valuation: Mapping[str, FrozenSet[str]] = field(hash=False)
    state: str = ""

    def to_dict(self) -> Dict[str, Any]:
        doc = frame_to_dict(self.frame)
        doc["valuation"] = valuation_to_dict(self.frame, self.valuation)
        doc["state"] = self.state
        return doc


@dataclass
class SearchResult:
    """
    Outcome of a bounded search.

    ``complete`` is True when the whole space within max_states was
    searched; a missing countermodel is then an exhaustion notice, not a
    validity proof.
    """

    countermodel: Optional[Countermodel] = None
    frames_explored: int = 0
    valuations_explored: int = 0
    complete: bool = True
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.countermodel is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "found": self.found,
            "countermodel": self.countermodel.to_dict() if self.countermodel else None,
            "frames_explored": self.frames_explored,
            "valuations_explored": self.valuations_explored,
            "complete": self.complete,
            "reason": self.reason,
        }


def valuations_by_population(f: Frame, names: Iterable[str]) -> List[Valuation]:
    """Persistent valuations ordered by the total number of states they make true"""
    names = sorted(names)
    choices = upsets(f)
    combos = sorted(product(range(len(choices)), repeat=len(names)),
                    key=lambda idx: (sum(len(choices[i]) for i in idx), idx))
    return [dict(zip(names, (choices[i] for i in idx))) for idx in combos]


def countermodel_search(s: Sequent, b: SearchBudget) -> SearchResult:
    """
    Look for a model and state satisfying s's antecedent but not its consequent.

    Frames are tried by size and valuations by population, so the first
    countermodel is a smallest one. Every countermodel is re-verified with
    satisfies before it is returned.

    Raises:
        SignatureError: s uses a connective outside b.logic
    """
    check_signature(s.antecedent, b.logic)
    check_signature(s.consequent, b.logic)
    names = atoms(s.antecedent) | atoms(s.consequent)
    result = SearchResult()
    try:
        for f in enumerate_frames(b):
            result.frames_explored += 1
            for v in valuations_by_population(f, names):
                if result.valuations_explored >= b.max_valuations:
                    result.complete = False
                    result.reason = f"valuation cap of {b.max_valuations} reached"
                    return result
                result.valuations_explored += 1
                m = Model(f, v, b.mode)
                evaluate_in = Evaluator(m)
                bad = evaluate_in(s.antecedent) - evaluate_in(s.consequent)
                if not bad:
                    continue
                x = f.sorted_states(bad)[0]
                if satisfies(m, x, s.antecedent) and not satisfies(m, x, s.consequent):
                    result.countermodel = Countermodel(f, v, x)
                    logger.debug("countermodel for %s on %d states", s, len(f.states))
                    return result
                logger.warning("discarding unverified countermodel at %s", x)
    except BudgetExhausted as e:
        result.complete = False
        result.reason = str(e)
        return result
    result.reason = f"no countermodel up to {b.max_states} states"
    return result


# ----------------------------------------------------------------------------
# Random formulas and models
# ----------------------------------------------------------------------------

def random_formula(logic: Logic, names: Sequence[str], depth: int, rng: random.Random) -> Formula:
    """
    A random propositional formula of the logic over the given atoms.

    Depth bounds the nesting; leaves are atoms or the logic's constants.
    """
    admitted = logic.admitted
    leaves = [atom(n) for n in names] + [node(op) for op in sorted(CONSTANTS & admitted, key=lambda o: o.value)]
    if depth <= 0 or rng.random() < 0.25:
        return rng.choice(leaves)
    ops = sorted((UNARY | BINARY) & admitted, key=lambda o: o.value)
    op = rng.choice(ops)
    if op in UNARY:
        return node(op, random_formula(logic, names, depth - 1, rng))
    return node(op, random_formula(logic, names, depth - 1, rng), random_formula(logic, names, depth - 1, rng))


def _collect_frames(b: SearchBudget) -> List[Frame]:
    frames = []
    try:
        for f in enumerate_frames(b):
            frames.append(f)
    except BudgetExhausted as e:
        logger.debug("sampling from a partial frame list: %s", e)
    if not frames:
        raise BudgetExhausted("no frames found within the budget")
    return frames


def sample_models(b: SearchBudget, count: int, names: Sequence[str] = FUZZ_ATOMS,
                  rng: Optional[random.Random] = None) -> List[Model]:
    """Random models over the enumerated frames, with random persistent valuations"""
    rng = rng or random.Random(b.seed)
    frames = _collect_frames(b)
    ups = {f: upsets(f) for f in frames}
    models = []
    for _ in range(count):
        f = rng.choice(frames)
        models.append(Model(f, {n: rng.choice(ups[f]) for n in names}, b.mode))
    return models


# ----------------------------------------------------------------------------
# Fuzzers
# ----------------------------------------------------------------------------

def soundness_fuzz(b: SearchBudget, trials: int, formula_depth: int = 2) -> Report:
    """
    Check every rule of the logic in sampled models.

    A rule instance fails in a model when all its premises hold there and
    its conclusion does not. Metavariables are replaced by random formulas.
    """
    rng = random.Random(b.seed)
    rules = list_rules(b.logic)
    models = sample_models(b, trials, rng=rng)
    failures: Dict[str, Dict[str, Any]] = {}
    instances = premises_held = 0
    for m in models:
        for rule in rules:
            if rule.rule_id in failures:
                continue
            for variant in range(len(rule.variants)):
                subst = {name: random_formula(b.logic, FUZZ_ATOMS, formula_depth, rng)
                         for name in sorted(rule.metavariables(variant))}
                premises, conclusion = rule_instance(rule, subst, variant)
                instances += 1
                if not all(entails_in_model(m, p) for p in premises):
                    continue
                premises_held += 1
                if not entails_in_model(m, conclusion):
                    failures[rule.rule_id] = {
                        "conclusion": f"{print_formula(conclusion.antecedent)} |- {print_formula(conclusion.consequent)}",
                        "frame": frame_to_dict(m.frame),
                        "valuation": valuation_to_dict(m.frame, m.valuation),
                    }
                    break
    report = Report(f"soundness {b.logic}")
    for rule in rules:
        report.record(rule.rule_id, failures.get(rule.rule_id))
    report.details.update({"models": len(models), "instances": instances, "premises_held": premises_held})
    return report


def persistence_fuzz(b: SearchBudget, trials: int, formula_depth: int = 3) -> Report:
    """Truth of random formulas is upwards closed in sampled models"""
    rng = random.Random(b.seed)
    report = Report("persistence")
    violations = []
    for m in sample_models(b, trials, rng=rng):
        formula = random_formula(b.logic, FUZZ_ATOMS, formula_depth, rng)
        violations.extend(persistence_sweep(m, [formula]))
        if violations:
            break
    report.record("Persistence", violations[0].witness if violations else None)
    report.details["models"] = trials
    return report


def udmf_agreement_fuzz(b: SearchBudget, trials: int, formula_depth: int = 3) -> Report:
    """
    Strong satisfaction on a BI frame against udmf satisfaction on its closure.

    Raises:
        InputError: The budget's logic is not BI or BBI
    """
    if b.logic.name not in (LogicName.BI, LogicName.BBI):
        raise InputError("the closure agreement is stated for BI and BBI frames")
    rng = random.Random(b.seed)
    closures: Dict[Frame, Frame] = {}
    witness = None
    compared = 0
    for m in sample_models(b, trials, rng=rng):
        f = m.frame
        if f not in closures:
            closures[f] = updown_closure(f)
        formula = random_formula(b.logic, FUZZ_ATOMS, formula_depth, rng)
        strong = Evaluator(Model(f, m.valuation, STRONG))(formula)
        closed = Evaluator(Model(closures[f], m.valuation, UDMF))(formula)
        compared += len(f.states)
        if strong != closed:
            witness = {
                "formula": print_formula(formula),
                "frame": frame_to_dict(f),
                "valuation": valuation_to_dict(f, m.valuation),
                "strong": f.sorted_states(strong),
                "udmf": f.sorted_states(closed),
            }
            break
    report = Report("strong/udmf agreement")
    report.record("Agreement", witness)
    report.details["triples"] = compared
    return report


def transfer_fuzz(b: SearchBudget, trials: int, formula_depth: int = 3) -> Report:
    """A state satisfies a formula iff it lies in the formula's value in the complex algebra"""
    rng = random.Random(b.seed)
    algebras = {}
    witness = None
    for m in sample_models(b, trials, rng=rng):
        f = m.frame
        if f not in algebras:
            algebras[f] = complex_algebra(f)
        formula = random_formula(b.logic, FUZZ_ATOMS, formula_depth, rng)
        interpretation = {n: set_name(f, v) for n, v in m.valuation.items()}
        direct = set_name(f, Evaluator(m)(formula))
        algebraic = evaluate(algebras[f], interpretation, formula)
        if direct != algebraic:
            witness = {"formula": print_formula(formula), "frame": frame_to_dict(f),
                       "valuation": valuation_to_dict(f, m.valuation),
                       "satisfied": direct, "value": algebraic}
            break
    report = Report("satisfaction transfer")
    report.record("Transfer", witness)
    report.details["models"] = trials
    return report


def roundtrip_sweep(b: SearchBudget) -> Report:
    """
    Run the duality checks on every enumerated frame.

    For each frame the complex algebra must pass its checks and embed
    into its prime filter frame, and η must behave as the order demands.
    CKBI complex algebras also run the program-logic rules.
    """
    report = Report(f"round trip {b.logic}")
    failures: Dict[str, Dict[str, Any]] = {}
    count = 0
    for f in _collect_frames(b):
        count += 1
        a = complex_algebra(f)
        named = {"frame": frame_to_dict(f)}
        violations = check_algebra(a)
        if violations and "complex algebra" not in failures:
            failures["complex algebra"] = {**named, "violation": violations[0].to_dict()}
        theta = theta_check(a)
        if not theta.holds and "theta" not in failures:
            failures["theta"] = {**named, "failed": theta.failed()}
        eta = eta_check(f)
        if not eta.holds and "eta" not in failures:
            failures["eta"] = {**named, "failed": eta.failed()}
        if b.logic.name is LogicName.CKBI:
            asl = asl_report(a)
            if not asl.holds and "program rules" not in failures:
                failures["program rules"] = {**named, "failed": asl.failed()}
    items = ["complex algebra", "theta", "eta"] + (["program rules"] if b.logic.name is LogicName.CKBI else [])
    for item in items:
        report.record(item, failures.get(item))
    report.details["frames"] = count
    return report


def correspondence_sweep(b: SearchBudget) -> Report:
    """
    Check the sound direction of every correspondence row on enumerated frames.

    Frames are enumerated without Σ flags; each row is checked on every
    frame, and the details count how often a failing property came with
    a falsifying interpretation.

    Raises:
        InputError: The budget's logic is not BiBI or BiBBI
    """
    if b.logic.name not in BI_INTUITIONISTIC:
        raise InputError("correspondence rows are stated for BiBI and BiBBI frames")
    plain = SearchBudget(Logic(b.logic.name), b.max_states, b.max_valuations, b.time_limit, b.jobs, b.seed)
    frames = _collect_frames(plain)
    report = Report(f"correspondence {b.logic.name.value}")
    falsified: Dict[str, int] = {}
    for axiom in SigmaAxiom:
        witness = None
        falsified[axiom.value] = 0
        for f in frames:
            row = correspondence_check(f, axiom)
            if not row.holds and witness is None:
                witness = {"frame": frame_to_dict(f), "failed": row.failed()}
            if row.details.get("falsifier"):
                falsified[axiom.value] += 1
        report.record(axiom.value, witness)
    report.details.update({"frames": len(frames), "falsified": falsified})
    return report


def morphism_fuzz(b: SearchBudget, trials: int) -> Report:
    """Random state maps that are morphisms must induce homomorphisms by inverse image"""
    rng = random.Random(b.seed)
    frames = _collect_frames(b)
    found = 0
    witness = None
    for _ in range(trials):
        source, target = rng.choice(frames), rng.choice(frames)
        g = {x: rng.choice(target.states) for x in source.states}
        if check_morphism(g, source, target):
            continue
        found += 1
        result = inverse_image_check(g, source, target)
        if not result.holds:
            witness = {"map": g, "source": frame_to_dict(source), "target": frame_to_dict(target),
                       "failed": result.failed()}
            break
    report = Report("inverse image")
    report.record("Homomorphism", witness)
    report.details.update({"trials": trials, "morphisms": found})
    return report
