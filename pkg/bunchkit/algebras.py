"""
Finite algebras for the bunched logic family

Algebras are stored as full operation tables over a finite bounded
distributive lattice. This module checks the per-logic axioms, evaluates
formulas under interpretations, validates sequents by enumeration and
reports on the residuation laws and the abstract separation logic rules.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import chain, combinations, product
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple
import logging

from .exceptions import AlgebraError, BudgetExhausted, InputError, SignatureError
from .frames import Report, Violation, preorder_closure
from .syntax import (
    Formula, Logic, LogicName, ModalClass, Op, Sequent, SigmaAxiom,
    atoms, check_signature, expand_defined, parse_sequent,
)

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]
Interpretation = Dict[str, str]

DEFAULT_INTERPRETATION_CAP = 100_000
SUBSET_CAP = 8

_LATTICE = ("and", "or", "imp")
_LAYERED = ("star", "wand", "dnaw")
_BUNCHED = ("star", "wand")


def required_binary(logic: Logic) -> Tuple[str, ...]:
    """Names of the binary tables an algebra of this logic carries"""
    kind = logic.name
    if not logic.has_units:
        return _LATTICE + _LAYERED
    ops = _LATTICE + _BUNCHED
    if kind in (LogicName.BIBI, LogicName.BIBBI):
        ops += ("mor", "rslash")
    if kind is LogicName.CKBI:
        ops += ("seq", "rseq", "lseq")
    return ops


def required_unary(logic: Logic) -> Tuple[str, ...]:
    if logic.name in (LogicName.DMBI, LogicName.CBI):
        return ("mneg",)
    if logic.name is LogicName.SML:
        return ("diamond",)
    return ()


def required_constants(logic: Logic) -> Tuple[str, ...]:
    names = ("top", "bot")
    if logic.has_units:
        names += ("munit",)
    if logic.name in (LogicName.DMBI, LogicName.CBI, LogicName.BIBI, LogicName.BIBBI):
        names += ("mbot",)
    return names


@dataclass(frozen=True)
class Algebra:
    """
    A finite algebra given by its order and operation tables.

    ``tables`` maps an operation name (the connective's name, e.g. "star",
    "wand", "rseq") to a total table (x, y) -> z; ``unary`` does the same
    for "mneg" and "diamond"; ``constants`` names top, bot, munit, mbot.
    """

    logic: Logic
    carrier: Tuple[str, ...]
    leq: FrozenSet[Pair]
    tables: Mapping[str, Mapping[Pair, str]] = field(hash=False)
    unary: Mapping[str, Mapping[str, str]] = field(default_factory=dict, hash=False)
    constants: Mapping[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        carrier = tuple(self.carrier)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "leq", frozenset(self.leq))
        if not carrier:
            raise AlgebraError("an algebra needs a non-empty carrier")
        if len(set(carrier)) != len(carrier):
            raise AlgebraError("duplicate element names")
        known = set(carrier)
        for x, y in self.leq:
            if x not in known or y not in known:
                raise AlgebraError(f"order mentions unknown element in ({x}, {y})")

        expected = set(required_binary(self.logic))
        if set(self.tables) != expected:
            raise AlgebraError(
                f"a {self.logic.name.value} algebra needs tables {sorted(expected)}, got {sorted(self.tables)}"
            )
        for name, table in self.tables.items():
            for x, y in product(carrier, repeat=2):
                value = table.get((x, y))
                if value not in known:
                    raise AlgebraError(f"table '{name}' is partial or leaves the carrier at ({x}, {y})")
        if set(self.unary) != set(required_unary(self.logic)):
            raise AlgebraError(f"a {self.logic.name.value} algebra needs unary operations {list(required_unary(self.logic))}")
        for name, table in self.unary.items():
            if any(table.get(x) not in known for x in carrier):
                raise AlgebraError(f"unary operation '{name}' is partial or leaves the carrier")
        for name in required_constants(self.logic):
            if self.constants.get(name) not in known:
                raise AlgebraError(f"constant '{name}' is missing or not an element")

    @cached_property
    def index(self) -> Dict[str, int]:
        return {x: i for i, x in enumerate(self.carrier)}

    def le(self, x: str, y: str) -> bool:
        return (x, y) in self.leq

    def op(self, name: str, x: str, y: str) -> str:
        return self.tables[name][(x, y)]

    def un(self, name: str, x: str) -> str:
        return self.unary[name][x]

    def const(self, name: str) -> str:
        return self.constants[name]

    def meet(self, x: str, y: str) -> str:
        return self.tables["and"][(x, y)]

    def join(self, x: str, y: str) -> str:
        return self.tables["or"][(x, y)]

    def neg(self, x: str) -> str:
        return self.tables["imp"][(x, self.constants["bot"])]

    def join_all(self, elements: Iterable[str]) -> str:
        result = self.constants["bot"]
        for x in elements:
            result = self.join(result, x)
        return result

    def meet_all(self, elements: Iterable[str]) -> str:
        result = self.constants["top"]
        for x in elements:
            result = self.meet(result, x)
        return result

    @property
    def size(self) -> int:
        return len(self.carrier)


def _greatest(candidates: Iterable[str], le: Callable[[str, str], bool]) -> Optional[str]:
    pool = list(candidates)
    for c in pool:
        if all(le(d, c) for d in pool):
            return c
    return None


def _least(candidates: Iterable[str], le: Callable[[str, str], bool]) -> Optional[str]:
    pool = list(candidates)
    for c in pool:
        if all(le(c, d) for d in pool):
            return c
    return None


def derive_algebra(
    logic: Logic,
    carrier: Iterable[str],
    leq: Iterable[Pair],
    tables: Optional[Mapping[str, Mapping[Pair, str]]] = None,
    unary: Optional[Mapping[str, Mapping[str, str]]] = None,
    constants: Optional[Mapping[str, str]] = None,
) -> Algebra:
    """
    Complete a partially specified algebra.

    The order is closed reflexively and transitively. Meets, joins,
    bounds and the Heyting implication are computed from it when absent.
    Missing residuals of a given product are computed as the greatest (or
    least, for rslash) solutions of their adjunctions. For the De Morgan
    kinds mbot and mneg are each derived from the other.

    Raises:
        AlgebraError: The order is not a lattice, or a residual does not exist
    """
    carrier = tuple(str(x) for x in carrier)
    order = preorder_closure(carrier, leq)
    le = lambda x, y: (x, y) in order
    for x, y in order:
        if x != y and le(y, x):
            raise AlgebraError(f"order is not antisymmetric: {x} and {y}")
    tables = {k: dict(v) for k, v in (tables or {}).items()}
    unary = {k: dict(v) for k, v in (unary or {}).items()}
    constants = dict(constants or {})
    pairs = list(product(carrier, repeat=2))

    constants.setdefault("top", _greatest(carrier, le))
    constants.setdefault("bot", _least(carrier, le))
    if constants["top"] is None or constants["bot"] is None:
        raise AlgebraError("order has no top or no bottom")

    if "and" not in tables:
        tables["and"] = {}
        for x, y in pairs:
            glb = _greatest((z for z in carrier if le(z, x) and le(z, y)), le)
            if glb is None:
                raise AlgebraError(f"{x} and {y} have no meet")
            tables["and"][(x, y)] = glb
    if "or" not in tables:
        tables["or"] = {}
        for x, y in pairs:
            lub = _least((z for z in carrier if le(x, z) and le(y, z)), le)
            if lub is None:
                raise AlgebraError(f"{x} and {y} have no join")
            tables["or"][(x, y)] = lub
    meet = tables["and"]

    def residual(name: str, holds: Callable[[str, str, str], bool], pick=_greatest) -> None:
        if name in tables:
            return
        tables[name] = {}
        for x, y in pairs:
            best = pick((z for z in carrier if holds(z, x, y)), le)
            if best is None:
                raise AlgebraError(f"no '{name}' residual for ({x}, {y})")
            tables[name][(x, y)] = best

    # imp(x, y) is the greatest z with z ∧ x <= y
    residual("imp", lambda z, x, y: le(meet[(z, x)], y))

    needed = required_binary(logic)
    if "star" in tables:
        star = tables["star"]
        # wand(b, c) is the greatest a with a * b <= c
        residual("wand", lambda z, b, c: le(star[(z, b)], c))
        if "dnaw" in needed:
            residual("dnaw", lambda z, a, c: le(star[(a, z)], c))

    if logic.name in (LogicName.DMBI, LogicName.CBI):
        if "mneg" not in unary and "mbot" in constants:
            unary["mneg"] = {x: tables["wand"][(x, constants["mbot"])] for x in carrier}
        if "mbot" not in constants and "mneg" in unary and "munit" in constants:
            constants["mbot"] = unary["mneg"][constants["munit"]]

    if "mor" in tables and "rslash" in needed:
        mor = tables["mor"]
        # rslash(a, b) is the least c with a <= b mor c
        residual("rslash", lambda z, a, b: le(a, mor[(b, z)]), pick=_least)

    if "seq" in tables:
        seq = tables["seq"]
        residual("rseq", lambda z, b, c: le(seq[(z, b)], c))
        residual("lseq", lambda z, a, c: le(seq[(a, z)], c))

    return Algebra(
        logic=logic,
        carrier=carrier,
        leq=order,
        tables={k: tables[k] for k in needed if k in tables},
        unary=unary,
        constants={k: v for k, v in constants.items() if k in required_constants(logic)},
    )


# ----------------------------------------------------------------------------
# Axioms
# ----------------------------------------------------------------------------

Check = Callable[[Algebra], Optional[Dict[str, Any]]]


def _first(witnesses: Iterator[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
    return next(witnesses, None)


def _pairs(a: Algebra):
    return product(a.carrier, repeat=2)


def _triples(a: Algebra):
    return product(a.carrier, repeat=3)


def _partial_order(a: Algebra):
    for x in a.carrier:
        if not a.le(x, x):
            return {"x": x}
    for x, y in _pairs(a):
        if x != y and a.le(x, y) and a.le(y, x):
            return {"x": x, "y": y}
    for x, y, z in _triples(a):
        if a.le(x, y) and a.le(y, z) and not a.le(x, z):
            return {"x": x, "y": y, "z": z}
    return None


def _bounds(a: Algebra):
    top, bot = a.const("top"), a.const("bot")
    return _first({"x": x} for x in a.carrier if not (a.le(bot, x) and a.le(x, top)))


def _meet(a: Algebra):
    for x, y in _pairs(a):
        m = a.meet(x, y)
        if not (a.le(m, x) and a.le(m, y)):
            return {"x": x, "y": y}
        for z in a.carrier:
            if a.le(z, x) and a.le(z, y) and not a.le(z, m):
                return {"x": x, "y": y, "z": z}
    return None


def _join(a: Algebra):
    for x, y in _pairs(a):
        j = a.join(x, y)
        if not (a.le(x, j) and a.le(y, j)):
            return {"x": x, "y": y}
        for z in a.carrier:
            if a.le(x, z) and a.le(y, z) and not a.le(j, z):
                return {"x": x, "y": y, "z": z}
    return None


def _distributivity(a: Algebra):
    return _first({"a": x, "b": y, "c": z} for x, y, z in _triples(a)
                  if a.meet(x, a.join(y, z)) != a.join(a.meet(x, y), a.meet(x, z)))


def _heyting(a: Algebra):
    return _first({"a": x, "b": y, "c": z} for x, y, z in _triples(a)
                  if a.le(z, a.op("imp", x, y)) != a.le(a.meet(z, x), y))


def _complement(a: Algebra):
    top = a.const("top")
    return _first({"a": x} for x in a.carrier if a.join(x, a.neg(x)) != top)


def _residuation(prod: str, right: str) -> Check:
    # a . b <= c iff a <= right(b, c)
    def check(a: Algebra):
        return _first({"a": x, "b": y, "c": z} for x, y, z in _triples(a)
                      if a.le(a.op(prod, x, y), z) != a.le(x, a.op(right, y, z)))
    return check


def _left_residuation(prod: str, left: str) -> Check:
    # a . b <= c iff b <= left(a, c)
    def check(a: Algebra):
        return _first({"a": x, "b": y, "c": z} for x, y, z in _triples(a)
                      if a.le(a.op(prod, x, y), z) != a.le(y, a.op(left, x, z)))
    return check


def _commutative(name: str) -> Check:
    def check(a: Algebra):
        return _first({"a": x, "b": y} for x, y in _pairs(a) if a.op(name, x, y) != a.op(name, y, x))
    return check


def _associative(name: str) -> Check:
    def check(a: Algebra):
        return _first({"a": x, "b": y, "c": z} for x, y, z in _triples(a)
                      if a.op(name, x, a.op(name, y, z)) != a.op(name, a.op(name, x, y), z))
    return check


def _unit(name: str, both_sides: bool = False) -> Check:
    def check(a: Algebra):
        e = a.const("munit")
        for x in a.carrier:
            if a.op(name, x, e) != x or (both_sides and a.op(name, e, x) != x):
                return {"a": x}
        return None
    return check


def _involution(a: Algebra):
    return _first({"a": x} for x in a.carrier if a.un("mneg", a.un("mneg", x)) != x)


def _negated_unit(a: Algebra):
    if a.un("mneg", a.const("munit")) != a.const("mbot"):
        return {"munit": a.const("munit"), "mbot": a.const("mbot")}
    return None


def _negation_definition(a: Algebra):
    mbot = a.const("mbot")
    return _first({"a": x} for x in a.carrier if a.un("mneg", x) != a.op("wand", x, mbot))


def _co_residuation(a: Algebra):
    # a <= b mor c iff a rslash b <= c
    return _first({"a": x, "b": y, "c": z} for x, y, z in _triples(a)
                  if a.le(x, a.op("mor", y, z)) != a.le(a.op("rslash", x, y), z))


def _exchange(a: Algebra):
    for w, x, y, z in product(a.carrier, repeat=4):
        left = a.op("seq", a.op("star", w, x), a.op("star", y, z))
        right = a.op("star", a.op("seq", w, y), a.op("seq", x, z))
        if not a.le(left, right):
            return {"a": w, "b": x, "c": y, "d": z}
    return None


def _diamond_normal(a: Algebra):
    bot = a.const("bot")
    if a.un("diamond", bot) != bot:
        return {"a": bot}
    return None


def _diamond_additive(a: Algebra):
    d = a.unary["diamond"]
    return _first({"a": x, "b": y} for x, y in _pairs(a) if d[a.join(x, y)] != a.join(d[x], d[y]))


def _diamond_reflexive(a: Algebra):
    return _first({"a": x} for x in a.carrier if not a.le(x, a.un("diamond", x)))


def _diamond_transitive(a: Algebra):
    d = a.unary["diamond"]
    return _first({"a": x} for x in a.carrier if not a.le(d[d[x]], d[x]))


def _diamond_symmetric(a: Algebra):
    d = a.unary["diamond"]
    box = {x: a.neg(d[a.neg(x)]) for x in a.carrier}
    return _first({"a": x} for x in a.carrier if not a.le(d[box[x]], box[x]))


def _sigma_assoc(a: Algebra):
    return _first({"a": x, "b": y, "c": z} for x, y, z in _triples(a)
                  if not a.le(a.op("mor", x, a.op("mor", y, z)), a.op("mor", a.op("mor", x, y), z)))


def _sigma_mbot_weak(a: Algebra):
    return _first({"a": x} for x in a.carrier if not a.le(x, a.op("mor", x, a.const("mbot"))))


def _sigma_mbot_contr(a: Algebra):
    return _first({"a": x} for x in a.carrier if not a.le(a.op("mor", x, a.const("mbot")), x))


def _sigma_mor_contr(a: Algebra):
    return _first({"a": x} for x in a.carrier if not a.le(a.op("mor", x, x), x))


def _sigma_weak_dist(a: Algebra):
    return _first({"a": x, "b": y, "c": z} for x, y, z in _triples(a)
                  if not a.le(a.op("star", x, a.op("mor", y, z)), a.op("mor", a.op("star", x, y), z)))


SIGMA_CHECKS: Dict[SigmaAxiom, Tuple[str, Check]] = {
    SigmaAxiom.ASSOC: ("Mor Associativity", _sigma_assoc),
    SigmaAxiom.MBOT_WEAK: ("mbot Weakening", _sigma_mbot_weak),
    SigmaAxiom.MBOT_CONTR: ("mbot Contraction", _sigma_mbot_contr),
    SigmaAxiom.MOR_CONTR: ("Mor Contraction", _sigma_mor_contr),
    SigmaAxiom.WEAK_DIST: ("Weak Distributivity", _sigma_weak_dist),
}

# the same axioms as sequents over atoms a, b, c
SIGMA_SEQUENTS: Dict[SigmaAxiom, str] = {
    SigmaAxiom.ASSOC: "a mor (b mor c) |- (a mor b) mor c",
    SigmaAxiom.MBOT_WEAK: "a |- a mor mbot",
    SigmaAxiom.MBOT_CONTR: "a mor mbot |- a",
    SigmaAxiom.MOR_CONTR: "a mor a |- a",
    SigmaAxiom.WEAK_DIST: "a * (b mor c) |- (a * b) mor c",
}


def sigma_sequent(axiom: SigmaAxiom, logic: Logic) -> Sequent:
    return parse_sequent(SIGMA_SEQUENTS[SigmaAxiom(axiom)], logic)


def algebra_checks(a: Algebra) -> List[Tuple[str, Check]]:
    """The named axioms an algebra of this kind (and flags) must satisfy"""
    logic = a.logic
    kind = logic.name
    checks: List[Tuple[str, Check]] = [
        ("Partial Order", _partial_order),
        ("Bounds", _bounds),
        ("Meet", _meet),
        ("Join", _join),
        ("Distributivity", _distributivity),
        ("Heyting Residuation", _heyting),
    ]
    if logic.boolean:
        checks.append(("Complement", _complement))
    checks.append(("Residuation", _residuation("star", "wand")))
    if not logic.has_units:
        checks.append(("Left Residuation", _left_residuation("star", "dnaw")))
    else:
        checks += [
            ("Commutativity", _commutative("star")),
            ("Associativity", _associative("star")),
            ("Unit", _unit("star")),
        ]
    if kind in (LogicName.DMBI, LogicName.CBI):
        checks += [
            ("Involution", _involution),
            ("Negated Unit", _negated_unit),
            ("Negation Definition", _negation_definition),
        ]
    if kind in (LogicName.BIBI, LogicName.BIBBI):
        checks += [("Mor Commutativity", _commutative("mor")), ("Co-residuation", _co_residuation)]
        for axiom in sorted(logic.sigma, key=lambda s: s.value):
            checks.append(SIGMA_CHECKS[axiom])
    if kind is LogicName.CKBI:
        checks += [
            ("Seq Associativity", _associative("seq")),
            ("Seq Unit", _unit("seq", both_sides=True)),
            ("Seq Residuation", _residuation("seq", "rseq")),
            ("Seq Left Residuation", _left_residuation("seq", "lseq")),
            ("Exchange", _exchange),
        ]
    if kind is LogicName.SML:
        checks += [("Diamond Normality", _diamond_normal), ("Diamond Additivity", _diamond_additive)]
        if logic.modal is not ModalClass.NONE:
            checks += [("Diamond Reflexivity", _diamond_reflexive), ("Diamond Transitivity", _diamond_transitive)]
        if logic.modal is ModalClass.S5:
            checks.append(("Diamond Symmetry", _diamond_symmetric))
    return checks


def check_algebra(a: Algebra) -> List[Violation]:
    """
    Check the lattice, residuation, monoid and kind-specific axioms.

    Returns:
        One Violation per failed axiom with its first witness; empty when
        the algebra belongs to its kind.
    """
    violations = []
    for name, check in algebra_checks(a):
        witness = check(a)
        if witness is not None:
            violations.append(Violation(name, witness))
    logger.debug("check_algebra %s on %d elements: %d violations", a.logic, a.size, len(violations))
    return violations


def check_sigma_axiom(a: Algebra, axiom: SigmaAxiom) -> Optional[Violation]:
    name, check = SIGMA_CHECKS[SigmaAxiom(axiom)]
    witness = check(a)
    return Violation(name, witness) if witness is not None else None


# ----------------------------------------------------------------------------
# Interpretations
# ----------------------------------------------------------------------------

_BINARY_TABLE = {
    Op.AND: "and", Op.OR: "or", Op.IMP: "imp", Op.STAR: "star", Op.WAND: "wand",
    Op.DNAW: "dnaw", Op.MOR: "mor", Op.RSLASH: "rslash", Op.SEQ: "seq",
    Op.RSEQ: "rseq", Op.LSEQ: "lseq",
}
_CONSTANT_NAME = {Op.TOP: "top", Op.BOT: "bot", Op.MUNIT: "munit", Op.MBOT: "mbot"}
_UNARY_NAME = {Op.MNEG: "mneg", Op.DIAMOND: "diamond"}


def _evaluate(a: Algebra, i: Mapping[str, str], f: Formula, cache: Dict[Formula, str]) -> str:
    if f in cache:
        return cache[f]
    op = f.op
    if op is Op.ATOM:
        if f.name not in i:
            raise InputError(f"interpretation does not cover atom '{f.name}'")
        value = i[f.name]
    elif op in _CONSTANT_NAME:
        value = a.const(_CONSTANT_NAME[op])
    elif op in _UNARY_NAME:
        value = a.un(_UNARY_NAME[op], _evaluate(a, i, f.children[0], cache))
    elif op in _BINARY_TABLE:
        left = _evaluate(a, i, f.children[0], cache)
        right = _evaluate(a, i, f.children[1], cache)
        value = a.op(_BINARY_TABLE[op], left, right)
    else:
        raise SignatureError(f"no algebraic clause for {op.value}")
    cache[f] = value
    return value


def evaluate(a: Algebra, i: Mapping[str, str], f: Formula) -> str:
    """
    The value of f under the interpretation i, extended homomorphically.

    Defined connectives are expanded first, so ¬ is read as → ⊥ and the
    SML box and separating modality through their definitions.
    """
    check_signature(f, a.logic)
    unknown = {v for v in i.values() if v not in a.index}
    if unknown:
        raise InputError(f"interpretation uses unknown elements {sorted(unknown)}")
    return _evaluate(a, i, expand_defined(f, a.logic), {})


def interpretations(a: Algebra, names: Iterable[str],
                    cap: int = DEFAULT_INTERPRETATION_CAP) -> Iterator[Interpretation]:
    """
    Every map from the given atoms into the carrier.

    Raises:
        BudgetExhausted: There are more than cap interpretations
    """
    names = sorted(names)
    total = a.size ** len(names)
    if total > cap:
        raise BudgetExhausted(
            f"{total} interpretations of {len(names)} atoms exceed the cap of {cap}", explored=0,
        )
    for values in product(a.carrier, repeat=len(names)):
        yield dict(zip(names, values))


def falsifying_interpretation(a: Algebra, s: Sequent,
                              cap: int = DEFAULT_INTERPRETATION_CAP) -> Optional[Interpretation]:
    """An interpretation with ⟦antecedent⟧ not below ⟦consequent⟧, if one exists"""
    check_signature(s.antecedent, a.logic)
    check_signature(s.consequent, a.logic)
    antecedent = expand_defined(s.antecedent, a.logic)
    consequent = expand_defined(s.consequent, a.logic)
    names = atoms(antecedent) | atoms(consequent)
    for i in interpretations(a, names, cap):
        cache: Dict[Formula, str] = {}
        if not a.le(_evaluate(a, i, antecedent, cache), _evaluate(a, i, consequent, cache)):
            return i
    return None


def validates_sequent(a: Algebra, s: Sequent, cap: int = DEFAULT_INTERPRETATION_CAP) -> bool:
    """True iff ⟦antecedent⟧ <= ⟦consequent⟧ under every interpretation of its atoms"""
    return falsifying_interpretation(a, s, cap) is None


# ----------------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------------

def _subsets(a: Algebra) -> List[Tuple[str, ...]]:
    return list(chain.from_iterable(combinations(a.carrier, k) for k in range(a.size + 1)))


def _product_laws(report: Report, a: Algebra, prod: str, right: str,
                  left: Optional[str], subsets: Optional[List[Tuple[str, ...]]]) -> None:
    """Monotonicity, annihilation, join preservation and the residual laws of one product"""
    top, bot = a.const("top"), a.const("bot")
    pairs = list(_pairs(a))

    report.record(f"{prod}: monotone", _first(
        {"a": x, "a'": x2, "b": y, "b'": y2}
        for (x, x2), (y, y2) in product(pairs, repeat=2)
        if a.le(x, x2) and a.le(y, y2) and not a.le(a.op(prod, x, y), a.op(prod, x2, y2))
    ))
    report.record(f"{prod}: bottom annihilates", _first(
        {"a": x} for x in a.carrier if a.op(prod, bot, x) != bot or a.op(prod, x, bot) != bot
    ))
    for residual in filter(None, (right, left)):
        report.record(f"{residual}: top", _first(
            {"a": x} for x in a.carrier if a.op(residual, x, top) != top or a.op(residual, bot, x) != top
        ))
    if subsets is None:
        return

    report.record(f"{prod}: preserves joins", _first(
        {"X": list(xs), "Y": list(ys)}
        for xs, ys in product(subsets, repeat=2)
        if a.op(prod, a.join_all(xs), a.join_all(ys))
        != a.join_all(a.op(prod, x, y) for x in xs for y in ys)
    ))
    for residual in filter(None, (right, left)):
        report.record(f"{residual}: joins to meets", _first(
            {"X": list(xs), "z": z}
            for xs in subsets for z in a.carrier
            if a.meet_all(a.op(residual, x, z) for x in xs) != a.op(residual, a.join_all(xs), z)
        ))
        report.record(f"{residual}: preserves meets", _first(
            {"X": list(xs), "z": z}
            for xs in subsets for z in a.carrier
            if a.meet_all(a.op(residual, z, x) for x in xs) != a.op(residual, z, a.meet_all(xs))
        ))


def _mor_laws(report: Report, a: Algebra, subsets: Optional[List[Tuple[str, ...]]]) -> None:
    top, bot = a.const("top"), a.const("bot")
    pairs = list(_pairs(a))
    report.record("mor: monotone", _first(
        {"a": x, "a'": x2, "b": y, "b'": y2}
        for (x, x2), (y, y2) in product(pairs, repeat=2)
        if a.le(x, x2) and a.le(y, y2) and not a.le(a.op("mor", x, y), a.op("mor", x2, y2))
    ))
    report.record("mor: top absorbs", _first(
        {"a": x} for x in a.carrier if a.op("mor", top, x) != top or a.op("mor", x, top) != top
    ))
    report.record("rslash: bottom", _first(
        {"a": x} for x in a.carrier if a.op("rslash", x, top) != bot or a.op("rslash", bot, x) != bot
    ))
    if subsets is None:
        return
    report.record("mor: preserves meets", _first(
        {"X": list(xs), "Y": list(ys)}
        for xs, ys in product(subsets, repeat=2)
        if a.op("mor", a.meet_all(xs), a.meet_all(ys))
        != a.meet_all(a.op("mor", x, y) for x in xs for y in ys)
    ))
    # rslash is a left adjoint in its first argument and antitone in its second
    report.record("rslash: preserves joins", _first(
        {"X": list(xs), "z": z}
        for xs in subsets for z in a.carrier
        if a.op("rslash", a.join_all(xs), z) != a.join_all(a.op("rslash", x, z) for x in xs)
    ))
    report.record("rslash: meets to joins", _first(
        {"X": list(xs), "z": z}
        for xs in subsets for z in a.carrier
        if a.op("rslash", z, a.meet_all(xs)) != a.join_all(a.op("rslash", z, x) for x in xs)
    ))


def residuation_report(a: Algebra, subset_cap: int = SUBSET_CAP) -> Report:
    """
    Check the consequences of residuation on a valid algebra.

    Pointwise laws are always checked; laws quantifying over subsets of
    the carrier (joins and meets of arbitrary families, the empty family
    included) only when the carrier has at most subset_cap elements.
    """
    report = Report("residuation")
    subsets = _subsets(a) if a.size <= subset_cap else None
    report.details["subset_laws"] = subsets is not None
    left = "dnaw" if "dnaw" in a.tables else None
    _product_laws(report, a, "star", "wand", left, subsets)
    if "mor" in a.tables:
        _mor_laws(report, a, subsets)
    if "seq" in a.tables:
        _product_laws(report, a, "seq", "rseq", "lseq", subsets)
    return report


def iterate(a: Algebra, c: str) -> str:
    """The join of all sequential powers of c, starting from the unit"""
    power = a.const("munit")
    total = power
    seen = {power}
    while True:
        power = a.op("seq", power, c)
        total = a.join(total, power)
        if power in seen:
            return total
        seen.add(power)


def asl_report(a: Algebra) -> Report:
    """
    Check the abstract separation logic rules on a CKBI algebra.

    A triple {p} c {q} is read as p;c <= q, parallel composition as *,
    nondeterministic choice as join and skip as the unit.
    """
    if a.logic.name is not LogicName.CKBI:
        raise AlgebraError(f"the triple reading needs a CKBI algebra, not {a.logic.name.value}")
    seq, star, le = (lambda x, y: a.op("seq", x, y)), (lambda x, y: a.op("star", x, y)), a.le
    carrier = a.carrier
    triples = [(p, c, q) for p, c, q in product(carrier, repeat=3) if le(seq(p, c), q)]
    report = Report("asl")
    report.details["valid_triples"] = len(triples)

    report.record("Frame", _first(
        {"p": p, "c": c, "q": q, "r": r}
        for p, c, q in triples for r in carrier
        if not le(seq(star(p, r), c), star(q, r))
    ))
    report.record("Concurrency", _first(
        {"p1": p1, "c1": c1, "q1": q1, "p2": p2, "c2": c2, "q2": q2}
        for (p1, c1, q1), (p2, c2, q2) in product(triples, repeat=2)
        if not le(seq(star(p1, p2), star(c1, c2)), star(q1, q2))
    ))
    skip = a.const("munit")
    report.record("Skip", _first({"p": p} for p in carrier if not le(seq(p, skip), p)))
    by_pre: Dict[str, List[Tuple[str, str]]] = {}
    for p, c, q in triples:
        by_pre.setdefault(p, []).append((c, q))
    report.record("Seq", _first(
        {"p": p, "c1": c1, "q": q, "c2": c2, "r": r}
        for p, c1, q in triples for c2, r in by_pre.get(q, ())
        if not le(seq(p, seq(c1, c2)), r)
    ))
    valid = set(triples)
    report.record("NonDet", _first(
        {"p": p, "c1": c1, "c2": c2, "q": q}
        for p, c1, q in triples for c2 in carrier
        if (p, c2, q) in valid and not le(seq(p, a.join(c1, c2)), q)
    ))
    report.record("Iterate", _first(
        {"p": p, "c": c} for p, c, q in triples if p == q and not le(seq(p, iterate(a, c)), p)
    ))
    report.record("Disjunction", _first(
        {"c": c, "q": q}
        for c, q in product(carrier, repeat=2)
        if not le(seq(a.join_all(p for p in carrier if (p, c, q) in valid), c), q)
    ))
    report.record("Consequence", _first(
        {"p'": p2, "p": p, "c": c, "q": q, "q'": q2}
        for p, c, q in triples for p2 in carrier for q2 in carrier
        if le(p2, p) and le(q, q2) and not le(seq(p2, c), q2)
    ))
    return report


def algebraic_separation(a: Algebra) -> Report:
    """Indivisible units (⊤* ∧ (a * b) <= a) and divisibility (¬⊤* <= ¬⊤* * ¬⊤*)"""
    if not (a.logic.boolean and a.logic.has_units):
        raise AlgebraError("separation axioms are stated for Boolean algebras with a unit")
    e = a.const("munit")
    report = Report("separation")
    report.record("Indivisible Units", _first(
        {"a": x, "b": y} for x, y in _pairs(a) if not a.le(a.meet(e, a.op("star", x, y)), x)
    ))
    ne = a.neg(e)
    report.record("Divisibility", None if a.le(ne, a.op("star", ne, ne)) else {"not_munit": ne})
    return report


# ----------------------------------------------------------------------------
# JSON documents
# ----------------------------------------------------------------------------

def algebra_from_dict(doc: Mapping[str, Any], logic: Optional[Logic] = None) -> Algebra:
    """
    Build an algebra from its JSON document.

    Binary operations are triple lists under their names ("star": [[x, y, z]]
    for x * y = z), unary ones pair lists, constants an object. Omitted
    tables are derived where possible.
    """
    try:
        if logic is None:
            logic = Logic.parse(doc["kind"], doc.get("sigma", ()), doc.get("modal", "none"))
        carrier = [str(x) for x in doc["elements"]]
        tables = {}
        for name in required_binary(logic):
            if name in doc:
                tables[name] = {(str(x), str(y)): str(z) for x, y, z in doc[name]}
        unary = {}
        for name in required_unary(logic):
            if name in doc:
                unary[name] = {str(x): str(y) for x, y in doc[name]}
        constants = {str(k): str(v) for k, v in doc.get("constants", {}).items()}
        leq = [(str(x), str(y)) for x, y in doc.get("leq", ())]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed algebra document: {e}") from e
    return derive_algebra(logic, carrier, leq, tables, unary, constants)


def algebra_to_dict(a: Algebra) -> Dict[str, Any]:
    key = a.index.__getitem__
    doc: Dict[str, Any] = {
        "kind": a.logic.name.value,
        "sigma": sorted(s.value for s in a.logic.sigma),
        "modal": a.logic.modal.value,
        "elements": list(a.carrier),
        "leq": [[x, y] for x, y in sorted(a.leq, key=lambda p: (key(p[0]), key(p[1]))) if x != y],
        "constants": {k: a.constants[k] for k in required_constants(a.logic)},
    }
    for name in required_binary(a.logic):
        doc[name] = [[x, y, a.op(name, x, y)] for x, y in product(a.carrier, repeat=2)]
    for name in required_unary(a.logic):
        doc[name] = [[x, a.un(name, x)] for x in a.carrier]
    return doc
