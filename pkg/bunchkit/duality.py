"""
Finite duality between frames and algebras

Complex algebras of frames, prime filter frames of algebras, and the
checks that the canonical maps θ (algebra into the complex algebra of its
prime filters) and η (frame into the prime filter frame of its complex
algebra) behave as the representation theorems say. On finite structures
every set is clopen, so no topology is carried.
"""

from dataclasses import replace
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple
import logging

import networkx as nx

from .algebras import (
    Algebra, falsifying_interpretation, required_binary, required_constants,
    required_unary, sigma_sequent,
)
from .exceptions import AlgebraError, FrameError
from .frames import (
    BI_INTUITIONISTIC, DE_MORGAN, STRONG, Frame, Report, SetOperations,
    check_frame, check_morphism, check_sigma_property, upsets,
)
from .syntax import Logic, LogicName, Op, SigmaAxiom

logger = logging.getLogger(__name__)

PrimeFilter = FrozenSet[str]

BRUTE_FORCE_CAP = 16

_CONSTANT_OPS = {"top": Op.TOP, "bot": Op.BOT, "munit": Op.MUNIT, "mbot": Op.MBOT}


def set_name(f: Frame, states: Iterable[str]) -> str:
    """Element name of a set of states in the complex algebra, e.g. '{a,e}'"""
    return "{" + ",".join(f.sorted_states(states)) + "}"


# ----------------------------------------------------------------------------
# Complex algebras
# ----------------------------------------------------------------------------

def complex_algebra(f: Frame, validate: bool = True) -> Algebra:
    """
    The algebra of up-sets of a frame.

    Every operation is the frame's satisfaction clause read on sets of
    states, so the value of a formula in the complex algebra is exactly
    its extension in the corresponding model.

    Raises:
        FrameError: validate is set and the frame fails its checks
    """
    if validate:
        violations = check_frame(f)
        if violations:
            raise FrameError(f"frame fails its checks: {violations[0]}")
    elements = upsets(f)
    names = {s: set_name(f, s) for s in elements}
    ops = SetOperations(f, STRONG)

    def name_of(value: FrozenSet[str], what: str) -> str:
        if value not in names:
            raise FrameError(f"{what} yields {set_name(f, value)}, which is not an up-set")
        return names[value]

    tables = {}
    for op_name in required_binary(f.logic):
        op = Op(op_name)
        tables[op_name] = {
            (names[x], names[y]): name_of(ops.apply(op, x, y), op_name)
            for x, y in product(elements, repeat=2)
        }
    unary = {
        op_name: {names[x]: name_of(ops.apply(Op(op_name), x), op_name) for x in elements}
        for op_name in required_unary(f.logic)
    }
    constants = {
        c: name_of(ops.constant(_CONSTANT_OPS[c]), c) for c in required_constants(f.logic)
    }
    leq = {(names[x], names[y]) for x, y in product(elements, repeat=2) if x <= y}
    logger.debug("complex algebra of %d states has %d elements", len(f.states), len(elements))
    return Algebra(f.logic, tuple(names[s] for s in elements), frozenset(leq), tables, unary, constants)


# ----------------------------------------------------------------------------
# Prime filters
# ----------------------------------------------------------------------------

def is_prime_filter(a: Algebra, chosen: FrozenSet[str]) -> bool:
    if not chosen or a.const("bot") in chosen:
        return False
    for x in chosen:
        if any(a.le(x, y) and y not in chosen for y in a.carrier):
            return False
    for x, y in product(chosen, repeat=2):
        if a.meet(x, y) not in chosen:
            return False
    for x, y in combinations(a.carrier, 2):
        if a.join(x, y) in chosen and x not in chosen and y not in chosen:
            return False
    return True


def join_irreducibles(a: Algebra) -> List[str]:
    """Elements other than bottom with exactly one lower cover in the Hasse diagram"""
    strict = nx.DiGraph()
    strict.add_nodes_from(a.carrier)
    strict.add_edges_from((x, y) for x, y in a.leq if x != y)
    hasse = nx.transitive_reduction(strict)
    bot = a.const("bot")
    return [x for x in a.carrier if x != bot and hasse.in_degree(x) == 1]


def principal_filter(a: Algebra, x: str) -> PrimeFilter:
    return frozenset(y for y in a.carrier if a.le(x, y))


def _filter_key(a: Algebra, chosen: PrimeFilter):
    return (len(chosen), sorted(a.index[x] for x in chosen))


def enumerate_prime_filters(a: Algebra, cap: int = BRUTE_FORCE_CAP) -> List[PrimeFilter]:
    """
    All prime filters of a finite algebra, smallest first.

    Carriers up to cap elements are searched exhaustively over subsets
    containing top and avoiding bottom; larger ones use the principal
    filters of join-irreducible elements, which coincide with the prime
    filters on a finite distributive lattice.
    """
    top, bot = a.const("top"), a.const("bot")
    if a.size > cap:
        found = [principal_filter(a, j) for j in join_irreducibles(a)]
    else:
        rest = [x for x in a.carrier if x not in (top, bot)]
        found = []
        for size in range(len(rest) + 1):
            for extra in combinations(rest, size):
                chosen = frozenset((top,) + extra)
                if top != bot and is_prime_filter(a, chosen):
                    found.append(chosen)
    return sorted(found, key=lambda F: _filter_key(a, F))


def filter_name(a: Algebra, chosen: PrimeFilter) -> str:
    """State name of a prime filter, after its least element"""
    least = next(x for x in chosen if all(a.le(x, y) for y in chosen))
    return f"F_{least}"


def prime_filter_frame(a: Algebra) -> Frame:
    """
    The frame of prime filters of an algebra, ordered by inclusion.

    Composition relates F, F' to every F'' containing all products of
    their members; the per-kind structure is read off the algebra the
    same way (units from ⊤*, minus from ∼, nabla and U from ⅋ and ⊥*,
    sequential composition from ;, accessibility from ◇).
    """
    filters = enumerate_prime_filters(a)
    name = {F: filter_name(a, F) for F in filters}
    logic = a.logic

    def related(op: str, F, G, H) -> bool:
        return all(a.op(op, x, y) in H for x in F for y in G)

    comp = frozenset(
        (name[F], name[G], name[H]) for F, G, H in product(filters, repeat=3) if related("star", F, G, H)
    )
    if logic.boolean:
        order = frozenset((name[F], name[F]) for F in filters)
    else:
        order = frozenset((name[F], name[G]) for F, G in product(filters, repeat=2) if F <= G)

    extras = {}
    if logic.has_units:
        extras["units"] = frozenset(name[F] for F in filters if a.const("munit") in F)
    if logic.name in DE_MORGAN:
        by_set = {F: name[F] for F in filters}
        minus = {}
        for F in filters:
            image = frozenset(x for x in a.carrier if a.un("mneg", x) not in F)
            if image not in by_set:
                raise AlgebraError(f"minus of {name[F]} is not a prime filter")
            minus[name[F]] = by_set[image]
        extras["minus"] = minus
    if logic.name in BI_INTUITIONISTIC:
        extras["nabla"] = frozenset(
            (name[F], name[G], name[H]) for F, G, H in product(filters, repeat=3)
            if all(x in F or y in G for x, y in product(a.carrier, repeat=2) if a.op("mor", x, y) in H)
        )
        extras["u_set"] = frozenset(name[F] for F in filters if a.const("mbot") not in F)
    if logic.name is LogicName.CKBI:
        extras["seq"] = frozenset(
            (name[F], name[G], name[H]) for F, G, H in product(filters, repeat=3) if related("seq", F, G, H)
        )
    if logic.name is LogicName.SML:
        extras["access"] = frozenset(
            (name[F], name[G]) for F, G in product(filters, repeat=2)
            if all(a.un("diamond", x) in F for x in G)
        )
    logger.debug("prime filter frame of %d elements has %d states", a.size, len(filters))
    return Frame(logic, tuple(name[F] for F in filters), comp, order=order, **extras)


# ----------------------------------------------------------------------------
# Representation checks
# ----------------------------------------------------------------------------

def _preservation(report: Report, source: Algebra, target: Algebra, h: Mapping[str, str]) -> None:
    """Record whether h commutes with every constant and operation of the kind"""
    for c in required_constants(source.logic):
        ok = h[source.const(c)] == target.const(c)
        report.record(f"constant {c}", None if ok else {
            "image": h[source.const(c)], "expected": target.const(c),
        })
    for op in required_binary(source.logic):
        report.record(f"preserves {op}", next((
            {"x": x, "y": y} for x, y in product(source.carrier, repeat=2)
            if h[source.op(op, x, y)] != target.op(op, h[x], h[y])
        ), None))
    for op in required_unary(source.logic):
        report.record(f"preserves {op}", next((
            {"x": x} for x in source.carrier if h[source.un(op, x)] != target.un(op, h[x])
        ), None))


def theta_check(a: Algebra) -> Report:
    """
    Check that θ(a) = {F | a ∈ F} embeds a into the complex algebra of its
    prime filter frame.

    Surjectivity is reported in the details; on finite algebras θ is onto,
    so embedding and isomorphism coincide.
    """
    report = Report("theta")
    pf = prime_filter_frame(a)
    frame_violations = check_frame(pf)
    report.record("prime filter frame", {"violations": [str(v) for v in frame_violations]}
                  if frame_violations else None)
    ca = complex_algebra(pf, validate=False)
    filters = enumerate_prime_filters(a)
    names = {F: filter_name(a, F) for F in filters}
    theta = {x: set_name(pf, (names[F] for F in filters if x in F)) for x in a.carrier}

    report.record("injective", next((
        {"x": x, "y": y} for x, y in combinations(a.carrier, 2) if theta[x] == theta[y]
    ), None))
    report.record("order", next((
        {"x": x, "y": y} for x, y in product(a.carrier, repeat=2)
        if a.le(x, y) != ca.le(theta[x], theta[y])
    ), None))
    _preservation(report, a, ca, theta)
    surjective = set(theta.values()) == set(ca.carrier)
    report.details.update({
        "prime_filters": [names[F] for F in filters],
        "theta": theta,
        "surjective": surjective,
        "isomorphism": report.holds and surjective,
    })
    return report


def _saturate(f: Frame, triples: Iterable[Tuple[str, str, str]], result_down: bool) -> FrozenSet[Tuple[str, str, str]]:
    """
    Close a ternary relation under the frame order.

    With result_down unset, (y, z, x) gains (y0, z0, x1) for y0 ≼ y, z0 ≼ z,
    x ≼ x1, the closure of ∘; with it set, arguments move up and the
    result down, the closure of ▽.
    """
    closed = set()
    for y, z, x in triples:
        args_y = f.up[y] if result_down else f.down[y]
        args_z = f.up[z] if result_down else f.down[z]
        results = f.down[x] if result_down else f.up[x]
        closed.update(product(args_y, args_z, results))
    return frozenset(closed)


def eta_check(f: Frame) -> Report:
    """
    Check η(x) = {A | x ∈ A} from f to the prime filter frame of its
    complex algebra.

    The kernel of η must be order-equivalence and η must reflect the
    order; ∘ and ▽ are compared after closing the image under the target
    order, which is exact on Boolean kinds where the order is identity.
    """
    report = Report("eta")
    ca = complex_algebra(f)
    pf = prime_filter_frame(ca)
    filters = enumerate_prime_filters(ca)
    by_set = {F: filter_name(ca, F) for F in filters}

    members = element_sets(f)
    eta: Dict[str, Optional[str]] = {}
    for x in f.states:
        image = frozenset(A for A in ca.carrier if x in members[A])
        eta[x] = by_set.get(image)
    report.record("prime filter image", next(({"x": x} for x, F in eta.items() if F is None), None))
    if not report.holds:
        return report

    report.record("kernel", next((
        {"x": x, "y": y} for x, y in combinations(f.states, 2)
        if (eta[x] == eta[y]) != (f.leq(x, y) and f.leq(y, x))
    ), None))
    report.record("order", next((
        {"x": x, "y": y} for x, y in product(f.states, repeat=2)
        if f.leq(x, y) != pf.leq(eta[x], eta[y])
    ), None))
    image_comp = {(eta[y], eta[z], eta[x]) for y, z, x in f.comp}
    report.record("composition", _relation_witness(_saturate(pf, image_comp, False), pf.comp))
    if f.logic.has_units:
        report.record("units", next((
            {"x": x} for x in f.states if (x in f.units) != (eta[x] in pf.units)
        ), None))
    if f.kind in DE_MORGAN:
        report.record("minus", next((
            {"x": x} for x in f.states if eta[f.minus[x]] != pf.minus[eta[x]]
        ), None))
    if f.kind in BI_INTUITIONISTIC:
        image_nabla = {(eta[t], eta[u], eta[s]) for t, u, s in f.nabla}
        report.record("nabla", _relation_witness(_saturate(pf, image_nabla, True), pf.nabla))
        report.record("U", next((
            {"x": x} for x in f.states if (x in f.u_set) != (eta[x] in pf.u_set)
        ), None))
    if f.kind is LogicName.CKBI:
        image_seq = frozenset((eta[y], eta[z], eta[x]) for y, z, x in f.seq)
        report.record("sequential composition", _relation_witness(image_seq, pf.seq))
    if f.kind is LogicName.SML:
        image_access = frozenset((eta[x], eta[y]) for x, y in f.access)
        report.record("accessibility", _relation_witness(image_access, pf.access))

    hit = set(eta.values())
    report.details.update({
        "eta": dict(eta),
        "injective": len(hit) == len(f.states),
        "surjective": hit == set(pf.states),
    })
    report.details["bijective"] = report.details["injective"] and report.details["surjective"]
    return report


def element_sets(f: Frame) -> Dict[str, FrozenSet[str]]:
    """Complex algebra element names mapped back to their sets of states"""
    return {set_name(f, s): s for s in upsets(f)}


def _relation_witness(image, target):
    missing = sorted(set(target) - set(image))
    extra = sorted(set(image) - set(target))
    if not missing and not extra:
        return None
    return {"missing": [list(t) for t in missing[:1]], "extra": [list(t) for t in extra[:1]]}


def inverse_image_check(g: Mapping[str, str], a: Frame, b: Frame) -> Report:
    """
    Check that B ↦ g⁻¹(B) is a homomorphism from the complex algebra of b
    to that of a.

    Raises:
        FrameError: g is not a frame morphism
    """
    violations = check_morphism(g, a, b)
    if violations:
        raise FrameError(f"map is not a morphism: {violations[0]}")
    ca, cb = complex_algebra(a), complex_algebra(b)
    report = Report("inverse image")
    members = element_sets(b)
    h = {}
    for B in cb.carrier:
        preimage = frozenset(x for x in a.states if g[x] in members[B])
        h[B] = set_name(a, preimage)
    report.record("up-sets", next(({"B": B} for B, A in h.items() if A not in ca.index), None))
    if report.holds:
        _preservation(report, cb, ca, h)
    report.details["map"] = h
    return report


def correspondence_check(f: Frame, axiom: SigmaAxiom) -> Report:
    """
    Relate a Σ frame property to its axiom in the complex algebra.

    When the frame has the property the axiom must be valid, and a
    falsifying interpretation is recorded as a violation. When it lacks
    the property a falsifier is searched for and reported in the details
    either way; the converse is not asserted.
    """
    if f.kind not in BI_INTUITIONISTIC:
        raise FrameError(f"correspondence is defined on BiBI/BiBBI frames, not {f.kind.value}")
    axiom = SigmaAxiom(axiom)
    basic = replace(f, logic=Logic(f.kind))
    ca = complex_algebra(basic)
    falsifier = falsifying_interpretation(ca, sigma_sequent(axiom, ca.logic))
    prop = check_sigma_property(basic, axiom)
    report = Report(f"correspondence {axiom.value}")
    report.details.update({
        "property_holds": prop is None,
        "property_witness": prop.witness if prop else None,
        "axiom_valid": falsifier is None,
        "falsifier": falsifier,
    })
    if prop is None:
        report.record("sound direction", falsifier)
    else:
        report.details["search"] = "not found" if falsifier is None else "found"
    return report
