"""
The separation logic instance

Finite heaps over a universe of locations and values, the pointer-logic
satisfaction relation in its intuitionistic (BI) and classical (BBI)
readings, the store frames Val^n × H with the maps that interpret
quantifiers and equality, and the separation properties of frames.
"""

from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple
import logging

from .exceptions import FrameError, InputError
from .frames import STRONG, Frame, Model, Report, SetOperations, extension, upsets
from .syntax import (
    Formula, Logic, LogicName, Op, Term, check_signature, expand_defined,
    free_vars, parse_formula, print_formula, subformulas, var,
)

logger = logging.getLogger(__name__)

BI = "bi"
BBI = "bbi"
VARIANTS = (BI, BBI)

Cell = Tuple[int, int]
Vector = Tuple[int, ...]


def _variant(variant: str) -> str:
    variant = str(variant).lower()
    if variant not in VARIANTS:
        raise InputError(f"unknown variant '{variant}', expected one of {list(VARIANTS)}")
    return variant


def pointer_logic(variant: str) -> Logic:
    """The first-order logic a variant's formulas are checked against"""
    name = LogicName.BI if _variant(variant) == BI else LogicName.BBI
    return Logic(name, first_order=True)


@dataclass(frozen=True)
class HeapUniverse:
    """
    Locations and values a heap may use.

    Locations must be values. With a modulus set, terms may use + and -
    read modulo it.
    """

    loc: Tuple[int, ...]
    val: Tuple[int, ...]
    modulus: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "loc", tuple(sorted(set(int(x) for x in self.loc))))
        object.__setattr__(self, "val", tuple(sorted(set(int(x) for x in self.val))))
        if not self.loc or not self.val:
            raise InputError("a heap universe needs at least one location and one value")
        missing = set(self.loc) - set(self.val)
        if missing:
            raise InputError(f"locations {sorted(missing)} are not values")
        if self.modulus is not None and self.modulus < 1:
            raise InputError("modulus must be positive")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "HeapUniverse":
        try:
            return cls(tuple(doc["loc"]), tuple(doc["val"]), doc.get("modulus"))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed universe document: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"loc": list(self.loc), "val": list(self.val)}
        if self.modulus is not None:
            doc["modulus"] = self.modulus
        return doc


@dataclass(frozen=True)
class Heap:
    """A finite partial map from locations to values, kept sorted by location"""

    cells: Tuple[Cell, ...] = ()

    def __post_init__(self):
        cells = tuple(sorted((int(l), int(v)) for l, v in self.cells))
        locations = [l for l, _ in cells]
        if len(set(locations)) != len(locations):
            raise InputError(f"heap maps a location twice: {cells}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def of(cls, mapping: Mapping[Any, Any]) -> "Heap":
        try:
            return cls(tuple((int(k), int(v)) for k, v in mapping.items()))
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed heap: {e}") from e

    @property
    def dom(self) -> FrozenSet[int]:
        return frozenset(l for l, _ in self.cells)

    def get(self, loc: int) -> Optional[int]:
        for l, v in self.cells:
            if l == loc:
                return v
        return None

    def subheap(self, other: "Heap") -> bool:
        """h ⊑ h': the graph of h is contained in that of h'"""
        return set(self.cells) <= set(other.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __str__(self) -> str:
        if not self.cells:
            return "[]"
        return "{" + ",".join(f"{l}:{v}" for l, v in self.cells) + "}"

    def to_dict(self) -> Dict[str, int]:
        return {str(l): v for l, v in self.cells}


EMPTY = Heap()


def compose_heaps(h1: Heap, h2: Heap) -> Optional[Heap]:
    """The union of two heaps with disjoint domains; None when they overlap"""
    if h1.dom & h2.dom:
        return None
    return Heap(h1.cells + h2.cells)


def all_heaps(u: HeapUniverse) -> List[Heap]:
    """Every heap over the universe, by size and then by content"""
    heaps = []
    for choice in product((None,) + u.val, repeat=len(u.loc)):
        heaps.append(Heap(tuple((l, v) for l, v in zip(u.loc, choice) if v is not None)))
    return sorted(heaps, key=lambda h: (len(h), h.cells))


def all_stores(u: HeapUniverse, n: int) -> List[Vector]:
    """Every value vector of length n"""
    if n < 0:
        raise InputError("context size must be non-negative")
    return list(product(u.val, repeat=n))


@dataclass(frozen=True)
class Store:
    """A context of variables and the vector of their values; later names shadow earlier ones"""

    ctx: Tuple[str, ...]
    vals: Vector

    def __post_init__(self):
        object.__setattr__(self, "ctx", tuple(self.ctx))
        object.__setattr__(self, "vals", tuple(int(v) for v in self.vals))
        if len(self.ctx) != len(self.vals):
            raise InputError(f"store has {len(self.ctx)} variables but {len(self.vals)} values")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "Store":
        try:
            return cls(tuple(str(x) for x in doc["ctx"]), tuple(doc["vals"]))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed store document: {e}") from e

    def lookup(self, name: str) -> int:
        for variable, value in zip(reversed(self.ctx), reversed(self.vals)):
            if variable == name:
                return value
        raise InputError(f"variable '{name}' is not in the store")

    def extend(self, name: str, value: int) -> "Store":
        return Store(self.ctx + (name,), self.vals + (value,))

    def to_dict(self) -> Dict[str, Any]:
        return {"ctx": list(self.ctx), "vals": list(self.vals)}


def eval_term(u: HeapUniverse, t: Term, lookup) -> int:
    if t.kind == "var":
        return lookup(t.name)
    if t.kind == "const":
        return t.value
    if u.modulus is None:
        raise InputError(f"term '{t}' uses arithmetic but the universe has no modulus")
    left, right = (eval_term(u, arg, lookup) for arg in t.args)
    return (left + right) % u.modulus if t.kind == "add" else (left - right) % u.modulus


def points_to(variant: str, heap: Heap, address: int, content: int) -> bool:
    """The atomic clause for E |-> F at the evaluated address and content"""
    if variant == BBI and heap.dom != {address}:
        return False
    return heap.get(address) == content


# ----------------------------------------------------------------------------
# Pointer logic
# ----------------------------------------------------------------------------

def _check_pointer_formula(f: Formula, variant: str, ctx: Iterable[str]) -> Formula:
    check_signature(f, pointer_logic(variant))
    expanded = expand_defined(f, pointer_logic(variant))
    for sub in subformulas(expanded):
        if sub.op is Op.ATOM:
            raise InputError(f"pointer logic has no propositional atoms, found '{sub.name}'")
    unbound = free_vars(expanded) - set(ctx)
    if unbound:
        raise InputError(f"free variables {sorted(unbound)} are not in the store")
    return expanded


class _PointerSemantics:
    """Direct evaluation of pointer-logic formulas at a store and heap"""

    def __init__(self, u: HeapUniverse, variant: str):
        self.u = u
        self.variant = variant
        self.heaps = all_heaps(u)

    def sat(self, s: Store, h: Heap, f: Formula) -> bool:
        op = f.op
        if op is Op.TOP:
            return True
        if op is Op.BOT:
            return False
        if op is Op.MUNIT:
            return self.variant == BI or h == EMPTY
        if op is Op.EQ:
            left, right = (eval_term(self.u, t, s.lookup) for t in f.terms)
            return left == right
        if op is Op.POINTSTO:
            address, content = (eval_term(self.u, t, s.lookup) for t in f.terms)
            return points_to(self.variant, h, address, content)
        if op is Op.AND:
            return self.sat(s, h, f.children[0]) and self.sat(s, h, f.children[1])
        if op is Op.OR:
            return self.sat(s, h, f.children[0]) or self.sat(s, h, f.children[1])
        if op is Op.IMP:
            larger = [h2 for h2 in self.heaps if h.subheap(h2)] if self.variant == BI else [h]
            return all(not self.sat(s, h2, f.children[0]) or self.sat(s, h2, f.children[1]) for h2 in larger)
        if op is Op.STAR:
            return any(
                self.sat(s, h1, f.children[0]) and self.sat(s, Heap(tuple(set(h.cells) - set(h1.cells))), f.children[1])
                for h1 in self.heaps if h1.subheap(h)
            )
        if op is Op.WAND:
            for h2 in self.heaps:
                joined = compose_heaps(h, h2)
                if joined is not None and self.sat(s, h2, f.children[0]) and not self.sat(s, joined, f.children[1]):
                    return False
            return True
        if op in (Op.EXISTS, Op.FORALL):
            results = (self.sat(s.extend(f.name, a), h, f.children[0]) for a in self.u.val)
            return any(results) if op is Op.EXISTS else all(results)
        raise InputError(f"no pointer-logic clause for {op.value}")


def pointer_sat(u: HeapUniverse, s: Store, h: Heap, f: Formula, variant: str = BI) -> bool:
    """
    Decide s, h ⊨ f in BI (intuitionistic) or BBI (classical) pointer logic.

    Raises:
        InputError: f has atoms or free variables outside the store, or
            the heap leaves the universe
        SignatureError: f uses a connective outside the pointer logic
    """
    variant = _variant(variant)
    _check_heap(u, h)
    expanded = _check_pointer_formula(f, variant, s.ctx)
    return _PointerSemantics(u, variant).sat(s, h, expanded)


def _check_heap(u: HeapUniverse, h: Heap) -> None:
    outside = [c for c in h.cells if c[0] not in u.loc or c[1] not in u.val]
    if outside:
        raise InputError(f"heap cells {outside} are outside the universe")


# ----------------------------------------------------------------------------
# Frames
# ----------------------------------------------------------------------------

def _heap_relations(u: HeapUniverse, variant: str, name):
    """Composition triples, order pairs and units over heaps, with states named by name(h)"""
    heaps = all_heaps(u)
    comp = set()
    for h1, h2 in product(heaps, repeat=2):
        joined = compose_heaps(h1, h2)
        if joined is not None:
            comp.add((name(h1), name(h2), name(joined)))
    if variant == BI:
        order = {(name(h1), name(h2)) for h1, h2 in product(heaps, repeat=2) if h1.subheap(h2)}
        units = {name(h) for h in heaps}
    else:
        order = {(name(h), name(h)) for h in heaps}
        units = {name(EMPTY)}
    return heaps, comp, order, units


def heap_frame(u: HeapUniverse, variant: str = BBI) -> Frame:
    """
    The frame of all heaps under disjoint union.

    The BI variant orders heaps by ⊑ with every heap a unit; the BBI
    variant uses the identity order with the empty heap as sole unit.
    """
    variant = _variant(variant)
    heaps, comp, order, units = _heap_relations(u, variant, str)
    logic = Logic(LogicName.BI if variant == BI else LogicName.BBI)
    return Frame(logic, tuple(str(h) for h in heaps), frozenset(comp), frozenset(units), frozenset(order))


def store_state(vals: Vector, heap: Heap) -> str:
    return "(" + ",".join(str(v) for v in vals) + ")" + str(heap)


class StoreFrames:
    """
    The store frames Val^n × H of one universe and variant.

    Frames are built on demand and cached per context size. States are
    named '(v1,...,vn){l:v,...}'; composition requires equal stores.
    """

    def __init__(self, u: HeapUniverse, variant: str = BI):
        self.u = u
        self.variant = _variant(variant)
        self.heaps = all_heaps(u)
        self._frames: Dict[int, Frame] = {}
        self._decode: Dict[str, Tuple[Vector, Heap]] = {}

    def frame(self, n: int) -> Frame:
        if n not in self._frames:
            stores = all_stores(self.u, n)
            _, comp, order, units = _heap_relations(self.u, self.variant, str)
            states = []
            for vals in stores:
                for h in self.heaps:
                    name = store_state(vals, h)
                    self._decode[name] = (vals, h)
                    states.append(name)

            def lift(vals, heap_name):
                return "(" + ",".join(str(v) for v in vals) + ")" + heap_name

            logic = Logic(LogicName.BI if self.variant == BI else LogicName.BBI)
            self._frames[n] = Frame(
                logic,
                tuple(states),
                frozenset((lift(v, x), lift(v, y), lift(v, z)) for v in stores for x, y, z in comp),
                frozenset(lift(v, e) for v in stores for e in units),
                frozenset((lift(v, x), lift(v, y)) for v in stores for x, y in order),
            )
            logger.debug("store frame n=%d has %d states", n, len(states))
        return self._frames[n]

    def decode(self, state: str) -> Tuple[Vector, Heap]:
        if state not in self._decode:
            raise InputError(f"unknown store-frame state '{state}'")
        return self._decode[state]

    def states(self, n: int) -> List[Tuple[Vector, Heap]]:
        return [self.decode(x) for x in self.frame(n).states]

    def term_map(self, ctx: Sequence[str], terms: Sequence[Term]) -> Dict[str, str]:
        """R(⟨t1,...,tm⟩): Val^|ctx| × H → Val^m × H, acting on the store only"""
        self.frame(len(terms))
        mapping = {}
        for x in self.frame(len(ctx)).states:
            vals, h = self.decode(x)
            store = Store(tuple(ctx), vals)
            image = tuple(eval_term(self.u, t, store.lookup) for t in terms)
            mapping[x] = store_state(image, h)
        return mapping

    def projection(self, n: int) -> Dict[str, str]:
        """R(π): Val^(n+1) × H → Val^n × H, dropping the last coordinate"""
        self.frame(n)
        return {x: store_state(self.decode(x)[0][:-1], self.decode(x)[1]) for x in self.frame(n + 1).states}

    def diagonal(self) -> Dict[str, str]:
        """R(Δ): Val × H → Val² × H, duplicating the coordinate"""
        self.frame(2)
        return {x: store_state(self.decode(x)[0] * 2, self.decode(x)[1]) for x in self.frame(1).states}


def store_frame(u: HeapUniverse, n: int, variant: str = BI) -> Frame:
    """The frame Val^n × H; n = 0 gives a copy of the heap frame"""
    if n < 0:
        raise InputError("context size must be non-negative")
    return StoreFrames(u, variant).frame(n)


def store_maps(u: HeapUniverse, ctx: Sequence[str], variant: str = BI,
               pair: Optional[Tuple[Term, Term]] = None) -> Dict[str, Dict[str, str]]:
    """
    The state maps interpreting quantifiers and equality over a context.

    Returns R(π) from the context extended by one variable, R(Δ), and,
    when a pair of terms is given, R(⟨t, t'⟩).
    """
    space = StoreFrames(u, variant)
    maps = {"pi": space.projection(len(ctx)), "delta": space.diagonal()}
    if pair is not None:
        maps["pair"] = space.term_map(ctx, pair)
    return maps


# ----------------------------------------------------------------------------
# Indexed satisfaction
# ----------------------------------------------------------------------------

class _IndexedSemantics:
    """Extensions of first-order formulas over the store frames of a context"""

    def __init__(self, space: StoreFrames):
        self.space = space
        self.cache: Dict[Tuple[Formula, Tuple[str, ...]], FrozenSet[str]] = {}

    def extension(self, f: Formula, ctx: Tuple[str, ...]) -> FrozenSet[str]:
        key = (f, ctx)
        if key not in self.cache:
            self.cache[key] = self._compute(f, ctx)
        return self.cache[key]

    def _compute(self, f: Formula, ctx: Tuple[str, ...]) -> FrozenSet[str]:
        space = self.space
        frame = space.frame(len(ctx))
        op = f.op
        if op in (Op.EQ, Op.POINTSTO):
            # R(<t, t'>) into Val² × H, then the range of R(Δ) or the points-to predicate
            image = space.term_map(ctx, f.terms)
            diagonal_range = set(space.diagonal().values())
            found = set()
            for x, y in image.items():
                if op is Op.EQ:
                    if y in diagonal_range:
                        found.add(x)
                else:
                    (address, content), h = space.decode(y)
                    if points_to(space.variant, h, address, content):
                        found.add(x)
            return frozenset(found)
        if op in (Op.EXISTS, Op.FORALL):
            inner = self.extension(f.children[0], ctx + (f.name,))
            pi = space.projection(len(ctx))
            if op is Op.EXISTS:
                return frozenset(pi[y] for y in inner)
            outside = {pi[y] for y in space.frame(len(ctx) + 1).states if y not in inner}
            return frozenset(x for x in frame.states if not (frame.up[x] & outside))
        ops = SetOperations(frame, STRONG)
        if not f.children:
            return ops.constant(op)
        return ops.apply(op, *(self.extension(c, ctx) for c in f.children))


def indexed_sat(u: HeapUniverse, x: Tuple[Vector, Heap], f: Formula, ctx: Sequence[str],
                variant: str = BI) -> bool:
    """
    Decide x ⊨ f at a state of the store frame over ctx.

    Connectives follow the frame's satisfaction clauses; quantifiers go
    through R(π), equality through the range of R(Δ), and points-to is a
    predicate on Val² × H.
    """
    vals, h = x
    ctx = tuple(ctx)
    Store(ctx, vals)
    _check_heap(u, h)
    space = StoreFrames(u, variant)
    expanded = _check_pointer_formula(f, space.variant, ctx)
    return store_state(tuple(vals), h) in _IndexedSemantics(space).extension(expanded, ctx)


def agreement_report(u: HeapUniverse, formulas: Iterable[Formula], ctx: Sequence[str],
                     variant: str = BI) -> Report:
    """Compare pointer_sat and indexed_sat on every store and heap for each formula"""
    ctx = tuple(ctx)
    space = StoreFrames(u, variant)
    direct = _PointerSemantics(u, space.variant)
    indexed = _IndexedSemantics(space)
    report = Report("pointer/indexed agreement")
    count = 0
    for f in formulas:
        expanded = _check_pointer_formula(f, space.variant, ctx)
        ext = indexed.extension(expanded, ctx)
        witness = None
        for vals, h in space.states(len(ctx)):
            count += 1
            if direct.sat(Store(ctx, vals), h, expanded) != (store_state(vals, h) in ext):
                witness = {"store": list(vals), "heap": str(h)}
                break
        report.record(print_formula(f), witness)
    report.details["evaluations"] = count
    return report


def persistence_report(u: HeapUniverse, formulas: Iterable[Formula], ctx: Sequence[str]) -> Report:
    """Check that BI pointer-logic satisfaction is preserved when the heap grows"""
    ctx = tuple(ctx)
    semantics = _PointerSemantics(u, BI)
    heaps = semantics.heaps
    report = Report("heap persistence")
    for f in formulas:
        expanded = _check_pointer_formula(f, BI, ctx)
        witness = None
        for vals in all_stores(u, len(ctx)):
            s = Store(ctx, vals)
            holding = [h for h in heaps if semantics.sat(s, h, expanded)]
            witness = next((
                {"store": list(vals), "heap": str(h), "larger": str(h2)}
                for h in holding for h2 in heaps if h.subheap(h2) and h2 not in holding
            ), None)
            if witness:
                break
        report.record(print_formula(f), witness)
    return report


# ----------------------------------------------------------------------------
# Quantifier adjoints and the indexed frame condition
# ----------------------------------------------------------------------------

def _adjoints(space: StoreFrames, n: int, chosen: FrozenSet[str]) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    upper, lower = space.frame(n + 1), space.frame(n)
    pi = space.projection(n)
    exists = lower.upclose(pi[y] for y in chosen)
    forall = frozenset(
        x for x in lower.states
        if all(y in chosen for y in upper.states if lower.leq(x, pi[y]))
    )
    return exists, forall


def quantifier_adjoints(u: HeapUniverse, n: int, chosen: Iterable[str],
                        variant: str = BI) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """
    The images of a set of states of Val^(n+1) × H under ∃ and ∀.

    ∃(A) holds at x when some y ∈ A has R(π)(y) ≼ x; ∀(A) holds at x when
    every y with x ≼ R(π)(y) lies in A.

    Raises:
        InputError: A mentions unknown states or, in the BI variant, is not an up-set
    """
    space = StoreFrames(u, variant)
    upper = space.frame(n + 1)
    chosen = frozenset(chosen)
    unknown = chosen - set(upper.states)
    if unknown:
        raise InputError(f"unknown states {sorted(unknown)[:3]}")
    if not upper.is_upset(chosen):
        raise InputError("the set is not upwards closed")
    return _adjoints(space, n, chosen)


def adjunction_report(u: HeapUniverse, n: int, variant: str = BI, limit: int = 4096) -> Report:
    """
    Check ∃ ⊣ P(π) ⊣ ∀ over all up-sets of the two store frames.

    P(π)(b) is the preimage of b under R(π). The up-set families are
    enumerated only while their product stays within limit pairs.
    """
    space = StoreFrames(u, variant)
    upper, lower = space.frame(n + 1), space.frame(n)
    pi = space.projection(n)
    report = Report("quantifier adjunction")
    exists_bot, _ = _adjoints(space, n, frozenset())
    _, forall_top = _adjoints(space, n, frozenset(upper.states))
    report.record("exists bottom", None if not exists_bot else {"image": lower.sorted_states(exists_bot)})
    report.record("forall top", None if forall_top == set(lower.states) else {
        "missing": lower.sorted_states(set(lower.states) - forall_top),
    })
    if len(upper.states) > 16 or len(lower.states) > 16:
        report.details["exhaustive"] = False
        return report
    ups, lows = upsets(upper), upsets(lower)
    if len(ups) * len(lows) > limit:
        report.details["exhaustive"] = False
        return report
    report.details["exhaustive"] = True
    images = {a: _adjoints(space, n, a) for a in ups}
    preimage = {b: frozenset(y for y in upper.states if pi[y] in b) for b in lows}
    report.record("exists adjunction", next((
        {"a": upper.sorted_states(a), "b": lower.sorted_states(b)}
        for a in ups for b in lows if (images[a][0] <= b) != (a <= preimage[b])
    ), None))
    report.record("forall adjunction", next((
        {"a": upper.sorted_states(a), "b": lower.sorted_states(b)}
        for a in ups for b in lows if (preimage[b] <= a) != (b <= images[a][1])
    ), None))
    return report


def check_pseudo_epi(u: HeapUniverse, ctx: Sequence[str], terms: Sequence[Term],
                     variant: str = BI) -> Report:
    """
    Check the indexed-frame condition for the square of s = ⟨terms⟩.

    BI: R(π')(y) ≼ R(s)(x) implies some z has R(π)(z) ≼ x and
    y ≼ R(s × id)(z). BBI: the same with equalities (quasi-pullback).
    """
    space = StoreFrames(u, variant)
    n, m = len(ctx), len(terms)
    source, target = space.frame(n), space.frame(m)
    upper_source, upper_target = space.frame(n + 1), space.frame(m + 1)
    s_map = space.term_map(ctx, terms)
    pi_source, pi_target = space.projection(n), space.projection(m)
    fresh = "_x"
    while fresh in ctx:
        fresh += "'"
    extended = tuple(terms) + (var(fresh),)
    s_times_id = space.term_map(tuple(ctx) + (fresh,), extended)
    report = Report("pseudo epi" if space.variant == BI else "quasi-pullback")
    witness = None
    for x in source.states:
        for y in upper_target.states:
            if not target.leq(pi_target[y], s_map[x]):
                continue
            if not any(
                source.leq(pi_source[z], x) and upper_target.leq(y, s_times_id[z])
                for z in upper_source.states
            ):
                witness = {"x": x, "y": y}
                break
        if witness:
            break
    report.record("square", witness)
    return report


# ----------------------------------------------------------------------------
# Separation properties
# ----------------------------------------------------------------------------

UNIT_FORMULA = "(!(top -* !emp) * !(top -* !emp)) -> !(top -* !emp)"


def separation_properties(f: Frame) -> Report:
    """
    The memory-model properties of a Boolean frame with units.

    Also evaluates I * I -> I with I = ¬(⊤ −∗ ¬⊤*), valid on partial
    deterministic frames, and records its validity in the details.
    """
    if not (f.logic.boolean and f.logic.has_units):
        raise FrameError(f"separation properties are stated for BBI-style frames, not {f.kind.value}")
    states, units = f.states, f.units
    splits: Dict[str, List[Tuple[str, str]]] = {}
    for y, z, x in f.comp:
        splits.setdefault(x, []).append((y, z))
    report = Report("separation properties")

    report.record("Partial Deterministic", next((
        {"w1": y, "w2": z, "results": f.sorted_states(f.compose(y, z))}
        for y, z in product(states, repeat=2) if len(f.compose(y, z)) > 1
    ), None))
    report.record("Cancellative", next((
        {"w": w, "w1": w1, "w2": w2}
        for w in states for w1, w2 in product(states, repeat=2)
        if w1 != w2 and f.compose(w, w1) & f.compose(w, w2)
    ), None))
    report.record("Indivisible Units", next((
        {"w": w, "w'": w2} for w, w2 in product(states, repeat=2)
        if f.compose(w, w2) & units and w not in units
    ), None))
    report.record("Disjointness", next((
        {"w": w} for w in states if f.compose(w, w) and w not in units
    ), None))
    report.record("Divisibility", next((
        {"w": w} for w in states if w not in units
        and not any(y not in units and z not in units for y, z in splits.get(w, ()))
    ), None))

    def cross_split(t, u, v, w) -> bool:
        for tv, tw in splits.get(t, ()):
            for tv2, uv in splits.get(v, ()):
                if tv2 != tv:
                    continue
                for tw2, uw in splits.get(w, ()):
                    if tw2 == tw and u in f.compose(uv, uw):
                        return True
        return False

    report.record("Cross Split", next((
        {"t": t, "u": u, "v": v, "w": w}
        for t, u, v, w in product(states, repeat=4)
        if f.compose(t, u) & f.compose(v, w) and not cross_split(t, u, v, w)
    ), None))

    formula = parse_formula(UNIT_FORMULA, f.logic)
    failing = set(states) - extension(Model(f), formula)
    report.details["I * I -> I"] = not failing
    if failing:
        report.details["I * I -> I failing at"] = f.sorted_states(failing)
    return report
