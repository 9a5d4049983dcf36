"""
Finite Kripke frames for the bunched logic family

Frame conditions per logic, persistent valuations, satisfaction in the
strong and UDMF readings, entailment in a model, the up/down closure of BI
frames and frame morphism checking.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple
import logging

import networkx as nx

from .exceptions import FrameError, InputError, SignatureError
from .syntax import (
    Formula, Logic, LogicName, ModalClass, Op, Sequent, SigmaAxiom,
    atoms, check_signature, print_formula,
)

logger = logging.getLogger(__name__)

Triple = Tuple[str, str, str]
Pair = Tuple[str, str]
Valuation = Dict[str, FrozenSet[str]]

STRONG = "strong"
UDMF = "udmf"

BI_BASED = frozenset({LogicName.BI, LogicName.DMBI, LogicName.BIBI})
BBI_BASED = frozenset({
    LogicName.BBI, LogicName.CBI, LogicName.BIBBI, LogicName.CKBI, LogicName.SML,
})
DE_MORGAN = frozenset({LogicName.DMBI, LogicName.CBI})
BI_INTUITIONISTIC = frozenset({LogicName.BIBI, LogicName.BIBBI})


@dataclass(frozen=True)
class Violation:
    """A failed axiom or clause together with the witness that falsifies it"""

    axiom: str
    witness: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"axiom": self.axiom, "witness": dict(self.witness)}

    def __str__(self) -> str:
        bound = ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.axiom} [{bound}]" if bound else self.axiom


@dataclass
class Report:
    """
    Outcome of a batch of named checks.

    ``checked`` lists every item that was examined, ``violations`` the
    ones that failed, and ``details`` any extra facts worth reporting
    (sizes, derived sets, search results).
    """

    name: str
    checked: List[str] = field(default_factory=list)
    violations: List[Violation] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations

    def record(self, item: str, witness: Optional[Dict[str, Any]]) -> None:
        self.checked.append(item)
        if witness is not None:
            self.violations.append(Violation(item, witness))

    def failed(self) -> List[str]:
        return [v.axiom for v in self.violations]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "holds": self.holds,
            "checked": list(self.checked),
            "violations": [v.to_dict() for v in self.violations],
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class Frame:
    """
    A finite frame.

    Relations are stored extensionally: ``comp`` holds triples (x, y, z)
    meaning z is in x∘y, ``order`` holds pairs (x, y) meaning x ≼ y. The
    per-logic extras (minus, nabla, u_set, seq, access) are empty unless
    the logic uses them.
    """

    logic: Logic
    states: Tuple[str, ...]
    comp: FrozenSet[Triple] = frozenset()
    units: FrozenSet[str] = frozenset()
    order: Optional[FrozenSet[Pair]] = None
    minus: Mapping[str, str] = field(default_factory=dict, hash=False)
    nabla: FrozenSet[Triple] = frozenset()
    u_set: FrozenSet[str] = frozenset()
    seq: FrozenSet[Triple] = frozenset()
    access: FrozenSet[Pair] = frozenset()

    def __post_init__(self):
        states = tuple(self.states)
        if len(set(states)) != len(states):
            raise FrameError("duplicate state names")
        object.__setattr__(self, "states", states)
        if self.order is None:
            object.__setattr__(self, "order", frozenset((s, s) for s in states))
        for name in ("comp", "units", "order", "nabla", "u_set", "seq", "access"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "minus", dict(self.minus))
        self._check_structure()

    def _check_structure(self) -> None:
        known = set(self.states)
        if not known:
            raise FrameError("a frame needs at least one state")
        referenced: Set[str] = set(self.units) | set(self.u_set)
        for rel in (self.comp, self.nabla, self.seq, self.order, self.access):
            for entry in rel:
                referenced.update(entry)
        referenced.update(self.minus.keys())
        referenced.update(self.minus.values())
        unknown = referenced - known
        if unknown:
            raise FrameError(f"unknown states referenced: {sorted(unknown)}")

        kind = self.logic.name
        present = {
            "E": bool(self.units) and not self.logic.has_units,
            "minus": bool(self.minus) and kind not in DE_MORGAN,
            "nabla": bool(self.nabla) and kind not in BI_INTUITIONISTIC,
            "U": bool(self.u_set) and kind not in BI_INTUITIONISTIC,
            "seq": bool(self.seq) and kind is not LogicName.CKBI,
            "R": bool(self.access) and kind is not LogicName.SML,
        }
        extra = [name for name, bad in present.items() if bad]
        if extra:
            raise FrameError(f"fields {extra} are not part of a {kind.value} frame")
        if kind in DE_MORGAN and set(self.minus) != known:
            raise FrameError("minus must be total on the states")

    @property
    def kind(self) -> LogicName:
        return self.logic.name

    @cached_property
    def index(self) -> Dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def up(self) -> Dict[str, FrozenSet[str]]:
        """States above each state, x ≼ y"""
        table: Dict[str, Set[str]] = {s: set() for s in self.states}
        for x, y in self.order:
            table[x].add(y)
        return {s: frozenset(v) for s, v in table.items()}

    @cached_property
    def down(self) -> Dict[str, FrozenSet[str]]:
        table: Dict[str, Set[str]] = {s: set() for s in self.states}
        for x, y in self.order:
            table[y].add(x)
        return {s: frozenset(v) for s, v in table.items()}

    @cached_property
    def comp_table(self) -> Dict[Pair, FrozenSet[str]]:
        return _table(self.comp)

    @cached_property
    def nabla_table(self) -> Dict[Pair, FrozenSet[str]]:
        return _table(self.nabla)

    @cached_property
    def seq_table(self) -> Dict[Pair, FrozenSet[str]]:
        return _table(self.seq)

    @cached_property
    def successors(self) -> Dict[str, FrozenSet[str]]:
        table: Dict[str, Set[str]] = {s: set() for s in self.states}
        for x, y in self.access:
            table[x].add(y)
        return {s: frozenset(v) for s, v in table.items()}

    def compose(self, x: str, y: str) -> FrozenSet[str]:
        return self.comp_table.get((x, y), frozenset())

    def leq(self, x: str, y: str) -> bool:
        return (x, y) in self.order

    def upclose(self, states: Iterable[str]) -> FrozenSet[str]:
        result: Set[str] = set()
        for s in states:
            result |= self.up[s]
        return frozenset(result)

    def is_upset(self, states: Iterable[str]) -> bool:
        chosen = frozenset(states)
        return all(self.up[s] <= chosen for s in chosen)

    def sorted_states(self, states: Iterable[str]) -> List[str]:
        return sorted(states, key=self.index.__getitem__)


def _table(triples: Iterable[Triple]) -> Dict[Pair, FrozenSet[str]]:
    table: Dict[Pair, Set[str]] = {}
    for x, y, z in triples:
        table.setdefault((x, y), set()).add(z)
    return {k: frozenset(v) for k, v in table.items()}


def preorder_closure(states: Iterable[str], pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    """Reflexive-transitive closure of a relation given as (x, y) pairs"""
    graph = nx.DiGraph()
    graph.add_nodes_from(states)
    graph.add_edges_from(pairs)
    closure = nx.transitive_closure(graph, reflexive=True)
    return frozenset(closure.edges())


# ----------------------------------------------------------------------------
# Frame conditions
# ----------------------------------------------------------------------------

Check = Callable[[Frame], Optional[Dict[str, Any]]]


def _first(witnesses: Iterator[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
    return next(witnesses, None)


def _reflexivity(f: Frame):
    return _first({"x": x} for x in f.states if not f.leq(x, x))


def _transitivity(f: Frame):
    for x, y in f.order:
        for z in f.up[y]:
            if not f.leq(x, z):
                return {"x": x, "y": y, "z": z}
    return None


def _identity_order(f: Frame):
    return _first({"x": x, "y": y} for x, y in f.order if x != y)


def _commutativity(table_name: str) -> Check:
    def check(f: Frame):
        triples = f.comp if table_name == "comp" else f.nabla
        return _first({"x": x, "y": y, "z": z} for x, y, z in triples if (y, x, z) not in triples)
    return check


def _closure(f: Frame):
    return _first({"e": e, "e'": e2} for e in f.units for e2 in f.up[e] if e2 not in f.units)


def _unit_existence(f: Frame):
    return _first({"x": x} for x in f.states
                  if not any(x in f.compose(x, e) for e in f.units))


def _coherence_bi(f: Frame):
    return _first({"x": x, "y": y, "e": e} for y, e, x in f.comp
                  if e in f.units and not f.leq(y, x))


def _coherence_bbi(f: Frame):
    return _first({"x": x, "y": y, "e": e} for y, e, x in f.comp
                  if e in f.units and x != y)


def _associativity_bi(f: Frame):
    # t' ≽ t ∈ x∘y and w ∈ t'∘z give s' ≽ s ∈ y∘z and w ≽ w' ∈ x∘s'
    by_left = _by_left(f.comp)
    for x, y, t in f.comp:
        for t2 in f.up[t]:
            for z, w in by_left.get(t2, ()):
                if not _assoc_witness(f, f.comp_table, x, y, z, w):
                    return {"x": x, "y": y, "z": z, "t": t, "t'": t2, "w": w}
    return None


def _assoc_witness(f: Frame, table, x, y, z, w) -> bool:
    for s in table.get((y, z), ()):
        for s2 in f.up[s]:
            if any(w2 in f.down[w] for w2 in table.get((x, s2), ())):
                return True
    return False


def _associativity_bbi(f: Frame):
    by_left = _by_left(f.comp)
    for x, y, t in f.comp:
        for z, w in by_left.get(t, ()):
            if not any(w in f.compose(x, s) for s in f.compose(y, z)):
                return {"x": x, "y": y, "z": z, "t": t, "w": w}
    return None


def _nondet_associativity(f: Frame):
    # s ∈ x∘y and t ∈ s∘z give s' ∈ y∘z with t ∈ x∘s'
    by_left = _by_left(f.comp)
    for x, y, s in f.comp:
        for z, t in by_left.get(s, ()):
            if not any(t in f.compose(x, s2) for s2 in f.compose(y, z)):
                return {"x": x, "y": y, "z": z, "s": s, "t": t}
    return None


def _by_left(triples: Iterable[Triple]) -> Dict[str, List[Pair]]:
    table: Dict[str, List[Pair]] = {}
    for x, y, z in triples:
        table.setdefault(x, []).append((y, z))
    return table


def _downwards_closed(f: Frame):
    for y, z, x in f.comp:
        for y2 in f.down[y]:
            for z2 in f.down[z]:
                if not (f.compose(y2, z2) & f.down[x]):
                    return {"x": x, "y": y, "z": z, "y'": y2, "z'": z2}
    return None


def _upwards_closed(f: Frame):
    for y, z, x in f.comp:
        for x2 in f.up[x]:
            if not any(x2 in f.compose(y2, z2) for y2 in f.up[y] for z2 in f.up[z]):
                return {"x": x, "y": y, "z": z, "x'": x2}
    return None


def _dual(f: Frame):
    return _first({"x": x, "y": y} for y, x in f.order
                  if not f.leq(f.minus[x], f.minus[y]))


def _involutive(f: Frame):
    return _first({"x": x} for x in f.states if f.minus[f.minus[x]] != x)


def _compatibility(f: Frame):
    return _first({"x": x, "y": y, "z": z} for x, y, z in f.comp
                  if f.minus[x] not in f.compose(f.minus[z], y))


def _u_closure(f: Frame):
    return _first({"u": u, "u'": u2} for u in f.u_set for u2 in f.down[u] if u2 not in f.u_set)


def _unit_existence_seq(side: str) -> Check:
    def check(f: Frame):
        for x in f.states:
            pairs = ((e, x) if side == "L" else (x, e) for e in f.units)
            if not any(x in f.seq_table.get(p, ()) for p in pairs):
                return {"x": x}
        return None
    return check


def _coherence_seq(side: str) -> Check:
    def check(f: Frame):
        for a, b, x in f.seq:
            e, y = (a, b) if side == "L" else (b, a)
            if e in f.units and x != y:
                return {"x": x, "y": y, "e": e}
        return None
    return check


def _seq_associativity(f: Frame):
    table = f.seq_table
    for x, y, z in product(f.states, repeat=3):
        left = {w for t in table.get((x, y), ()) for w in table.get((t, z), ())}
        right = {w for t in table.get((y, z), ()) for w in table.get((x, t), ())}
        if left != right:
            w = sorted(left ^ right)[0]
            return {"x": x, "y": y, "z": z, "w": w}
    return None


def _exchange(f: Frame):
    # t ∈ w∘y, s ∈ x∘z, u ∈ t▷s give r ∈ w▷x, v ∈ y▷z with u ∈ r∘v
    for w, y, t in f.comp:
        for x, z, s in f.comp:
            for u in f.seq_table.get((t, s), ()):
                found = any(
                    u in f.compose(r, v)
                    for r in f.seq_table.get((w, x), ())
                    for v in f.seq_table.get((y, z), ())
                )
                if not found:
                    return {"w": w, "x": x, "y": y, "z": z, "t": t, "s": s, "u": u}
    return None


def _r_reflexive(f: Frame):
    return _first({"x": x} for x in f.states if x not in f.successors[x])


def _r_transitive(f: Frame):
    return _first({"x": x, "y": y, "z": z} for x, y in f.access
                  for z in f.successors[y] if z not in f.successors[x])


def _r_symmetric(f: Frame):
    return _first({"x": x, "y": y} for x, y in f.access if (y, x) not in f.access)


# Bi(B)BI correspondents; with identity order they read as the BiBBI variants

def _sigma_assoc(f: Frame):
    by_left = _by_left(f.nabla)
    for x, y, t in f.nabla:
        for t2 in f.down[t]:
            for z, w in by_left.get(t2, ()):
                found = any(
                    w in f.down[w2]
                    for s in f.nabla_table.get((y, z), ())
                    for s2 in f.down[s]
                    for w2 in f.nabla_table.get((x, s2), ())
                )
                if not found:
                    return {"x": x, "y": y, "z": z, "t": t, "t'": t2, "w": w}
    return None


def _sigma_mbot_weak(f: Frame):
    return _first({"x": x, "y": y, "u": u} for y, u, x in f.nabla
                  if u in f.u_set and not f.leq(x, y))


def _sigma_mbot_contr(f: Frame):
    return _first({"w": w} for w in f.states
                  if not any(w in f.nabla_table.get((w, u), ()) for u in f.u_set))


def _sigma_mor_contr(f: Frame):
    return _first({"x": x} for x in f.states if x not in f.nabla_table.get((x, x), ()))


def _sigma_weak_dist(f: Frame):
    for x1, x2, t in f.comp:
        for t1 in f.up[t]:
            for y1, y2, t2 in f.nabla:
                if not f.leq(t1, t2):
                    continue
                found = any(
                    y1 in f.compose(x1, w) and x2 in f.nabla_table.get((w, y2), ())
                    for w in f.states
                )
                if not found:
                    return {"x1": x1, "x2": x2, "t": t, "t'": t1, "t''": t2, "y1": y1, "y2": y2}
    return None


SIGMA_CHECKS: Dict[SigmaAxiom, Tuple[str, Check]] = {
    SigmaAxiom.ASSOC: ("Sigma Associativity", _sigma_assoc),
    SigmaAxiom.MBOT_WEAK: ("Sigma mbot Weakening", _sigma_mbot_weak),
    SigmaAxiom.MBOT_CONTR: ("Sigma mbot Contraction", _sigma_mbot_contr),
    SigmaAxiom.MOR_CONTR: ("Sigma mor Contraction", _sigma_mor_contr),
    SigmaAxiom.WEAK_DIST: ("Sigma Weak Distributivity", _sigma_weak_dist),
}


def frame_checks(f: Frame) -> List[Tuple[str, Check]]:
    """The named conditions a frame of this kind (and flags) must satisfy"""
    kind = f.kind
    checks: List[Tuple[str, Check]] = [("Reflexivity", _reflexivity), ("Transitivity", _transitivity)]
    if f.logic.boolean:
        checks.append(("Identity Order", _identity_order))
    if kind in BI_BASED:
        checks += [
            ("Commutativity", _commutativity("comp")),
            ("Closure", _closure),
            ("Unit Existence", _unit_existence),
            ("Coherence", _coherence_bi),
            ("Associativity", _associativity_bi),
        ]
    elif kind in BBI_BASED:
        checks += [
            ("Commutativity", _commutativity("comp")),
            ("Unit Existence", _unit_existence),
            ("Coherence", _coherence_bbi),
            ("Associativity", _associativity_bbi),
        ]
    if kind in DE_MORGAN:
        checks += [("Dual", _dual), ("Involutive", _involutive), ("Compatibility", _compatibility)]
    if kind in BI_INTUITIONISTIC:
        checks += [("Nabla Commutativity", _commutativity("nabla")), ("U-Closure", _u_closure)]
        for axiom in sorted(f.logic.sigma, key=lambda a: a.value):
            checks.append(SIGMA_CHECKS[axiom])
    if kind is LogicName.CKBI:
        checks += [
            ("Unit Existence_L", _unit_existence_seq("L")),
            ("Unit Existence_R", _unit_existence_seq("R")),
            ("Coherence_L", _coherence_seq("L")),
            ("Coherence_R", _coherence_seq("R")),
            ("Seq Associativity", _seq_associativity),
            ("Exchange", _exchange),
        ]
    if kind is LogicName.SML and f.logic.modal is not ModalClass.NONE:
        checks += [("R Reflexivity", _r_reflexive), ("R Transitivity", _r_transitive)]
        if f.logic.modal is ModalClass.S5:
            checks.append(("R Symmetry", _r_symmetric))
    return checks


def _run(f: Frame, checks: List[Tuple[str, Check]]) -> List[Violation]:
    violations = []
    for name, check in checks:
        witness = check(f)
        if witness is not None:
            violations.append(Violation(name, witness))
    return violations


def check_frame(f: Frame) -> List[Violation]:
    """
    Check every condition of the frame's kind.

    Returns:
        One Violation per failed condition, carrying the first witness
        found; empty when the frame is legal.
    """
    violations = _run(f, frame_checks(f))
    logger.debug("check_frame %s on %d states: %d violations", f.logic, len(f.states), len(violations))
    return violations


def check_sigma_property(f: Frame, axiom: SigmaAxiom) -> Optional[Violation]:
    """Check a single Bi(B)BI frame correspondent regardless of the frame's flags"""
    name, check = SIGMA_CHECKS[SigmaAxiom(axiom)]
    witness = check(f)
    return Violation(name, witness) if witness is not None else None


def check_udmf(f: Frame) -> List[Violation]:
    """The monoidal-frame conditions together with upwards and downwards closure"""
    return _run(f, [
        ("Commutativity", _commutativity("comp")),
        ("Non-deterministic Associativity", _nondet_associativity),
        ("Unit Existence", _unit_existence),
        ("Coherence", _coherence_bi),
        ("Closure", _closure),
        ("Downwards Closed", _downwards_closed),
        ("Upwards Closed", _upwards_closed),
    ])


def infinity_set(f: Frame) -> Tuple[FrozenSet[str], List[Violation]]:
    """
    Derive the set ∞ = {-e | e ∈ E} of a De Morgan frame.

    Also checks that -x is the only state w with ∞ ∩ (w∘x) non-empty.
    """
    if f.kind not in DE_MORGAN:
        raise FrameError(f"{f.kind.value} frames have no minus operation")
    infinity = frozenset(f.minus[e] for e in f.units)
    violations = []
    for x in f.states:
        hits = [w for w in f.states if f.compose(w, x) & infinity]
        if hits != [f.minus[x]]:
            violations.append(Violation("Infinity Uniqueness", {"x": x, "candidates": hits}))
    return infinity, violations


# ----------------------------------------------------------------------------
# Models and satisfaction
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Model:
    frame: Frame
    valuation: Mapping[str, FrozenSet[str]] = field(default_factory=dict, hash=False)
    mode: str = STRONG

    def __post_init__(self):
        if self.mode not in (STRONG, UDMF):
            raise InputError(f"unknown satisfaction mode '{self.mode}'")
        if self.mode == UDMF and self.frame.kind not in (LogicName.BI, LogicName.BBI):
            raise InputError("the udmf clauses are defined for BI and BBI frames only")
        known = set(self.frame.states)
        cleaned = {}
        for name, value in self.valuation.items():
            value = frozenset(value)
            if not value <= known:
                raise InputError(f"valuation of '{name}' mentions unknown states {sorted(value - known)}")
            if not self.frame.is_upset(value):
                raise InputError(f"valuation of '{name}' is not persistent")
            cleaned[name] = value
        object.__setattr__(self, "valuation", cleaned)


class SetOperations:
    """
    The connectives of a frame acting on sets of states.

    Each method is the satisfaction clause of one connective read as an
    operation on extensions; complex algebras reuse these as their tables.
    """

    def __init__(self, frame: Frame, mode: str = STRONG):
        self.frame = frame
        self.strong = mode == STRONG
        self.all = frozenset(frame.states)

    def _up_where_none(self, bad: Set[str]) -> FrozenSet[str]:
        """States none of whose ≼-successors is bad"""
        return frozenset(x for x in self.frame.states if not (self.frame.up[x] & bad))

    def constant(self, op: Op) -> FrozenSet[str]:
        fr = self.frame
        if op is Op.TOP:
            return self.all
        if op is Op.BOT:
            return frozenset()
        if op is Op.MUNIT:
            return fr.units
        if op is Op.MBOT:
            if fr.kind in DE_MORGAN:
                return frozenset(x for x in fr.states if fr.minus[x] not in fr.units)
            return self.all - fr.u_set
        raise SignatureError(f"{op.value} is not a constant")

    def apply(self, op: Op, *args: FrozenSet[str]) -> FrozenSet[str]:
        fr = self.frame
        if op is Op.NOT:
            return self._up_where_none(set(args[0]))
        if op is Op.MNEG:
            return self.mneg(args[0])
        if op is Op.DIAMOND:
            return frozenset(x for x in fr.states if fr.successors[x] & args[0])
        if op is Op.BOX:
            return frozenset(x for x in fr.states if fr.successors[x] <= args[0])
        if op in (Op.EQ, Op.POINTSTO, Op.EXISTS, Op.FORALL):
            raise SignatureError("first-order formulas are evaluated over store frames by the heap module")

        a, b = args
        if op is Op.AND:
            return a & b
        if op is Op.OR:
            return a | b
        if op is Op.IMP:
            return self._up_where_none(set(a - b))
        if op is Op.STAR:
            return self.star(a, b, self.strong)
        if op is Op.WAND:
            bad = {x2 for x2, y, z in fr.comp if y in a and z not in b}
            return self._up_where_none(bad) if self.strong else self.all - bad
        if op is Op.DNAW:
            bad = {x2 for y, x2, z in fr.comp if y in a and z not in b}
            return self._up_where_none(bad) if self.strong else self.all - bad
        if op is Op.MOR:
            if fr.kind in DE_MORGAN:
                return self.mneg(self.star(self.mneg(a), self.mneg(b), True))
            bad = {s for t, u, s in fr.nabla if t not in a and u not in b}
            return self._up_where_none(bad)
        if op is Op.RSLASH:
            good = {s for t, s, u in fr.nabla if u in a and t not in b}
            return fr.upclose(good)
        if op is Op.SEQ:
            return frozenset(x for y, z, x in fr.seq if y in a and z in b)
        if op is Op.RSEQ:
            bad = {x for x, y, z in fr.seq if y in a and z not in b}
            return self.all - bad
        if op is Op.LSEQ:
            # z ∈ y ▷ x, read with the sequential composition
            bad = {x for y, x, z in fr.seq if y in a and z not in b}
            return self.all - bad
        if op is Op.DIAMOND_SUB:
            reach = {z for z in fr.states if fr.successors[z] & b}
            return frozenset(x for x, y, z in fr.comp if y in a and z in reach)
        raise SignatureError(f"no satisfaction clause for {op.value}")

    def mneg(self, a: FrozenSet[str]) -> FrozenSet[str]:
        return frozenset(x for x in self.frame.states if self.frame.minus[x] not in a)

    def star(self, a: FrozenSet[str], b: FrozenSet[str], strong: bool = True) -> FrozenSet[str]:
        made = {x for y, z, x in self.frame.comp if y in a and z in b}
        return self.frame.upclose(made) if strong else frozenset(made)


class Evaluator:
    """Computes formula extensions over a model, memoised per subformula"""

    def __init__(self, model: Model):
        self.model = model
        self.ops = SetOperations(model.frame, model.mode)
        self.cache: Dict[Formula, FrozenSet[str]] = {}

    def __call__(self, f: Formula) -> FrozenSet[str]:
        if f not in self.cache:
            if f.op is Op.ATOM:
                value = self.model.valuation.get(f.name, frozenset())
            elif not f.children and f.op not in (Op.EQ, Op.POINTSTO):
                value = self.ops.constant(f.op)
            else:
                value = self.ops.apply(f.op, *(self(c) for c in f.children))
            self.cache[f] = value
        return self.cache[f]


def extension(m: Model, f: Formula) -> FrozenSet[str]:
    """The set of states of m satisfying f"""
    return Evaluator(m)(f)


def satisfies(m: Model, x: str, f: Formula) -> bool:
    """
    Decide x ⊨ f in the model.

    Raises:
        InputError: x is not a state of the frame
        SignatureError: f uses a connective outside the frame's logic
    """
    if x not in m.frame.index:
        raise InputError(f"unknown state '{x}'")
    check_signature(f, m.frame.logic)
    return x in extension(m, f)


def entails_in_model(m: Model, s: Sequent) -> bool:
    """True iff every state satisfying the antecedent satisfies the consequent"""
    evaluate = Evaluator(m)
    return evaluate(s.antecedent) <= evaluate(s.consequent)


def check_persistent(f: Frame, v: Mapping[str, Iterable[str]]) -> bool:
    return all(f.is_upset(value) for value in v.values())


def persistence_sweep(m: Model, formulas: Iterable[Formula]) -> List[Violation]:
    """Report (formula, x ≼ y) pairs where x satisfies the formula and y does not"""
    evaluate = Evaluator(m)
    violations = []
    for formula in formulas:
        ext = evaluate(formula)
        for x, y in m.frame.order:
            if x in ext and y not in ext:
                violations.append(Violation("Persistence", {
                    "formula": print_formula(formula), "x": x, "y": y,
                }))
                break
    return violations


def upsets(f: Frame) -> List[FrozenSet[str]]:
    """All ≼-up-sets of the frame, smallest first"""
    found = []
    for size in range(len(f.states) + 1):
        for chosen in combinations(f.states, size):
            candidate = frozenset(chosen)
            if f.is_upset(candidate):
                found.append(candidate)
    return found


def valuations(f: Frame, names: Iterable[str]) -> Iterator[Valuation]:
    """Every persistent valuation of the given atoms"""
    names = sorted(names)
    choices = upsets(f)
    for combo in product(choices, repeat=len(names)):
        yield dict(zip(names, combo))


def valid_in_frame(f: Frame, s: Sequent, mode: str = STRONG) -> bool:
    """True iff the sequent holds in every model on f over its atoms"""
    names = atoms(s.antecedent) | atoms(s.consequent)
    return all(entails_in_model(Model(f, v, mode), s) for v in valuations(f, names))


# ----------------------------------------------------------------------------
# Up/down closure
# ----------------------------------------------------------------------------

def updown_closure(f: Frame) -> Frame:
    """
    Saturate ∘ so the frame becomes upwards and downwards closed.

    x ∈ y ∘ z holds afterwards iff some x' ≼ x, y ≼ y', z ≼ z' have
    x' ∈ y' ∘ z'. States, order and units are unchanged.

    Raises:
        FrameError: The frame is not a BI or BBI frame, or fails its checks
    """
    if f.kind not in (LogicName.BI, LogicName.BBI):
        raise FrameError(f"up/down closure is defined on BI frames, not {f.kind.value}")
    violations = check_frame(f)
    if violations:
        raise FrameError(f"frame fails its checks: {violations[0]}")
    closed = set()
    for y2, z2, x2 in f.comp:
        for y in f.down[y2]:
            for z in f.down[z2]:
                for x in f.up[x2]:
                    closed.add((y, z, x))
    return Frame(f.logic, f.states, frozenset(closed), f.units, f.order)


# ----------------------------------------------------------------------------
# Morphisms
# ----------------------------------------------------------------------------

class _MorphismChecker:
    """Clause-by-clause check of a state map g between two frames of one kind"""

    def __init__(self, g: Mapping[str, str], a: Frame, b: Frame):
        if a.kind is not b.kind:
            raise FrameError(f"cannot map a {a.kind.value} frame to a {b.kind.value} frame")
        missing = [x for x in a.states if x not in g]
        if missing:
            raise InputError(f"map is not total, missing {missing}")
        outside = sorted({g[x] for x in a.states} - set(b.states))
        if outside:
            raise InputError(f"map sends states outside the target: {outside}")
        self.g, self.a, self.b = g, a, b
        self.violations: List[Violation] = []

    def fail(self, clause: str, **witness) -> None:
        self.violations.append(Violation(f"clause {clause}", witness))

    def run(self) -> List[Violation]:
        if self.a.logic.boolean:
            self._lgl_clauses()
        else:
            self._ilgl_clauses()
        if self.a.logic.has_units:
            self._units()
        if self.a.kind in DE_MORGAN:
            self._minus()
        if self.a.kind in BI_INTUITIONISTIC:
            self._nabla()
        if self.a.kind is LogicName.CKBI:
            self._seq()
        if self.a.kind is LogicName.SML:
            self._access()
        return self.violations

    def _first_failure(self, clause: str, items) -> None:
        for witness in items:
            self.fail(clause, **witness)
            return

    def _ilgl_clauses(self) -> None:
        g, a, b = self.g, self.a, self.b
        self._first_failure("1", (
            {"x": x, "y": y} for x, y in a.order if not b.leq(g[x], g[y])
        ))
        self._first_failure("2", (
            {"x": x, "y'": y2} for x in a.states for y2 in b.up[g[x]]
            if not any(g[y] == y2 for y in a.up[x])
        ))
        self._first_failure("3", (
            {"x": x, "y": y, "z": z} for y, z, x in a.comp if g[x] not in b.compose(g[y], g[z])
        ))
        self._first_failure("4", (
            {"x": x, "w'": w2, "y'": y2, "z'": z2}
            for x in a.states for y2, z2, w2 in b.comp if b.leq(w2, g[x])
            and not any(
                b.leq(y2, g[y]) and b.leq(z2, g[z])
                for y, z, w in a.comp if a.leq(w, x)
            )
        ))
        self._first_failure("5", (
            {"x": x, "w'": w2, "y'": y2, "z'": z2}
            for x in a.states for w2, y2, z2 in b.comp if b.leq(g[x], w2)
            and not any(
                b.leq(y2, g[y]) and b.leq(g[z], z2)
                for w, y, z in a.comp if a.leq(x, w)
            )
        ))
        self._first_failure("6", (
            {"x": x, "w'": w2, "y'": y2, "z'": z2}
            for x in a.states for y2, w2, z2 in b.comp if b.leq(g[x], w2)
            and not any(
                b.leq(y2, g[y]) and b.leq(g[z], z2)
                for y, w, z in a.comp if a.leq(x, w)
            )
        ))

    def _lgl_clauses(self) -> None:
        g, a, b = self.g, self.a, self.b
        self._first_failure("1", (
            {"x": x, "y": y, "z": z} for y, z, x in a.comp if g[x] not in b.compose(g[y], g[z])
        ))
        self._first_failure("2", (
            {"x": x, "y'": y2, "z'": z2}
            for x in a.states for y2, z2, x2 in b.comp if x2 == g[x]
            and not any(g[y] == y2 and g[z] == z2 for y, z, w in a.comp if w == x)
        ))
        self._first_failure("3", (
            {"x": x, "y'": y2, "z'": z2}
            for x in a.states for x2, y2, z2 in b.comp if x2 == g[x]
            and not any(g[y] == y2 and g[z] == z2 for w, y, z in a.comp if w == x)
        ))
        self._first_failure("4", (
            {"x": x, "y'": y2, "z'": z2}
            for x in a.states for y2, x2, z2 in b.comp if x2 == g[x]
            and not any(g[y] == y2 and g[z] == z2 for y, w, z in a.comp if w == x)
        ))

    def _units(self) -> None:
        g, a, b = self.g, self.a, self.b
        self._first_failure("7", (
            {"e": e} for e in a.states if (e in a.units) != (g[e] in b.units)
        ))

    def _minus(self) -> None:
        g, a, b = self.g, self.a, self.b
        self._first_failure("8", (
            {"x": x} for x in a.states if g[a.minus[x]] != b.minus[g[x]]
        ))

    def _nabla(self) -> None:
        g, a, b = self.g, self.a, self.b
        self._first_failure("8", (
            {"x": x, "y": y, "z": z} for y, z, x in a.nabla
            if g[x] not in b.nabla_table.get((g[y], g[z]), ())
        ))
        self._first_failure("9", (
            {"x": x, "s'": s2, "t'": t2, "u'": u2}
            for x in a.states for t2, u2, s2 in b.nabla if b.leq(g[x], s2)
            and not any(
                a.leq(x, s) and b.leq(g[t], t2) and b.leq(g[u], u2)
                for t, u, s in a.nabla
            )
        ))
        self._first_failure("10", (
            {"x": x, "s'": s2, "t'": t2, "u'": u2}
            for x in a.states for t2, s2, u2 in b.nabla if b.leq(s2, g[x])
            and not any(
                a.leq(s, x) and b.leq(u2, g[u]) and b.leq(g[t], t2)
                for t, s, u in a.nabla
            )
        ))

    def _seq(self) -> None:
        g, a, b = self.g, self.a, self.b
        self._first_failure("seq-forth", (
            {"x": x, "y": y, "z": z} for y, z, x in a.seq
            if g[x] not in b.seq_table.get((g[y], g[z]), ())
        ))
        self._first_failure("seq-back", (
            {"x": x, "y'": y2, "z'": z2}
            for x in a.states for y2, z2, x2 in b.seq if x2 == g[x]
            and not any(g[y] == y2 and g[z] == z2 for y, z, w in a.seq if w == x)
        ))

    def _access(self) -> None:
        g, a, b = self.g, self.a, self.b
        self._first_failure("R-forth", (
            {"x": x, "y": y} for x, y in a.access if (g[x], g[y]) not in b.access
        ))
        self._first_failure("R-back", (
            {"x": x, "y'": y2} for x in a.states for y2 in b.successors[g[x]]
            if not any(g[y] == y2 for y in a.successors[x])
        ))


def check_morphism(g: Mapping[str, str], a: Frame, b: Frame) -> List[Violation]:
    """
    Check that g is a morphism of frames of the same kind.

    Layered (ILGL) clauses 1-6 are used for intuitionistic kinds and the
    LGL clauses 1-4 for Boolean ones; units add clause 7, the De Morgan
    minus clause 8, and Bi(B)BI's nabla clauses 8-10.
    """
    return _MorphismChecker(g, a, b).run()


# ----------------------------------------------------------------------------
# JSON documents
# ----------------------------------------------------------------------------

def frame_from_dict(doc: Mapping[str, Any], logic: Optional[Logic] = None) -> Frame:
    """
    Build a frame from its JSON document.

    The logic is read from the document's kind/sigma/modal fields unless
    one is given; a missing order means the identity order.
    """
    try:
        if logic is None:
            logic = Logic.parse(doc["kind"], doc.get("sigma", ()), doc.get("modal", "none"))
        states = [str(s) for s in doc["states"]]
        order = doc.get("order")
        return Frame(
            logic=logic,
            states=tuple(states),
            comp=frozenset(_triples(doc.get("comp", ()))),
            units=frozenset(str(e) for e in doc.get("E", ())),
            order=None if order is None else frozenset(_pairs(order)),
            minus={str(k): str(v) for k, v in (doc.get("minus") or {}).items()},
            nabla=frozenset(_triples(doc.get("nabla", ()))),
            u_set=frozenset(str(u) for u in doc.get("U", ())),
            seq=frozenset(_triples(doc.get("seq", ()))),
            access=frozenset(_pairs(doc.get("R", ()))),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed frame document: {e}") from e


def _triples(rows) -> Iterator[Triple]:
    for row in rows:
        x, y, z = row
        yield str(x), str(y), str(z)


def _pairs(rows) -> Iterator[Pair]:
    for row in rows:
        x, y = row
        yield str(x), str(y)


def frame_to_dict(f: Frame) -> Dict[str, Any]:
    key = f.index.__getitem__

    def rows(relation):
        return [list(r) for r in sorted(relation, key=lambda r: tuple(key(s) for s in r))]

    return {
        "kind": f.kind.value,
        "states": list(f.states),
        "order": rows(f.order),
        "comp": rows(f.comp),
        "E": f.sorted_states(f.units),
        "minus": {x: f.minus[x] for x in f.sorted_states(f.minus)},
        "nabla": rows(f.nabla),
        "U": f.sorted_states(f.u_set),
        "seq": rows(f.seq),
        "R": rows(f.access),
        "sigma": sorted(a.value for a in f.logic.sigma),
        "modal": f.logic.modal.value,
    }


def valuation_from_dict(doc: Mapping[str, Any]) -> Valuation:
    try:
        return {str(k): frozenset(str(s) for s in v) for k, v in doc.items()}
    except (AttributeError, TypeError) as e:
        raise InputError(f"malformed valuation document: {e}") from e


def valuation_to_dict(f: Frame, v: Mapping[str, Iterable[str]]) -> Dict[str, List[str]]:
    return {k: f.sorted_states(v[k]) for k in sorted(v)}
