"""
Concrete model families and the sample library

Layered-graph scaffolds, resource-monoid frames and a curated set of
named frames and algebras that the tests, the CLI and the fuzzers share.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union
import logging

import networkx as nx

from .algebras import Algebra, derive_algebra
from .exceptions import FrameError, InputError
from .frames import Frame, check_frame, updown_closure
from .heap import HeapUniverse, heap_frame
from .syntax import Logic, LogicName

logger = logging.getLogger(__name__)

Edge = Tuple[str, str]
Subgraph = Tuple[FrozenSet[str], FrozenSet[Edge]]

ORDERS = ("subgraph", "supergraph", "equality")
MAX_SCAFFOLD_VERTICES = 4


def subgraph_name(g: Subgraph) -> str:
    """'u,v|u>v' for the subgraph on u, v with the edge u→v"""
    vertices, edges = g
    name = ",".join(sorted(vertices))
    if edges:
        name += "|" + ";".join(f"{a}>{b}" for a, b in sorted(edges))
    return name


@dataclass
class Scaffold:
    """
    A directed graph with a distinguished edge set and admissible subgraphs.

    Attributes:
        graph: The underlying graph; distinguished edges carry the
            attribute ``distinguished=True``
        states: The admissible subgraphs X, as (vertices, edges) pairs
        order: One of 'subgraph', 'supergraph' or 'equality'
    """

    graph: nx.DiGraph
    states: List[Subgraph] = field(default_factory=list)
    order: str = "subgraph"

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Edge], distinguished: Iterable[Edge],
              states: Iterable[Tuple[Iterable[str], Iterable[Edge]]], order: str = "subgraph") -> "Scaffold":
        graph = nx.DiGraph()
        graph.add_nodes_from(str(v) for v in vertices)
        for a, b in edges:
            graph.add_edge(str(a), str(b), distinguished=False)
        for a, b in distinguished:
            if not graph.has_edge(str(a), str(b)):
                raise InputError(f"distinguished edge {a}->{b} is not an edge of the graph")
            graph.edges[str(a), str(b)]["distinguished"] = True
        chosen = [
            (frozenset(str(v) for v in vs), frozenset((str(a), str(b)) for a, b in es))
            for vs, es in states
        ]
        return cls(graph, chosen, order)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "Scaffold":
        try:
            return cls.build(
                doc["vertices"],
                [tuple(e) for e in doc.get("edges", [])],
                [tuple(e) for e in doc.get("distinguished", [])],
                [(s.get("vertices", []), [tuple(e) for e in s.get("edges", [])]) for s in doc["states"]],
                doc.get("order", "subgraph"),
            )
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise InputError(f"malformed scaffold document: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            "vertices": sorted(self.graph.nodes),
            "edges": [list(e) for e in sorted(self.graph.edges)],
            "distinguished": [list(e) for e in sorted(self.distinguished)],
            "states": [{"vertices": sorted(vs), "edges": [list(e) for e in sorted(es)]} for vs, es in self.states],
            "order": self.order,
        }

    @property
    def distinguished(self) -> FrozenSet[Edge]:
        return frozenset((a, b) for a, b, marked in self.graph.edges(data="distinguished") if marked)

    def reaches(self, h: Subgraph, k: Subgraph) -> bool:
        """H ⇝ K: some distinguished edge runs from a vertex of H to a vertex of K"""
        return any(a in h[0] and b in k[0] for a, b in self.distinguished)

    def layer(self, h: Subgraph, k: Subgraph) -> Optional[Subgraph]:
        """H @ K, or None when the layering is undefined"""
        if h[0] & k[0] or not self.reaches(h, k) or self.reaches(k, h):
            return None
        between = frozenset((a, b) for a, b in self.distinguished if a in h[0] and b in k[0])
        return h[0] | k[0], h[1] | k[1] | between

    def validate(self) -> None:
        """
        Check the graph size, the subgraphs and the closure condition on X.

        Raises:
            FrameError: A state is not a subgraph, or X is not closed
        """
        if len(self.graph) > MAX_SCAFFOLD_VERTICES:
            raise FrameError(f"scaffolds are limited to {MAX_SCAFFOLD_VERTICES} vertices")
        if self.order not in ORDERS:
            raise InputError(f"unknown scaffold order '{self.order}', expected one of {list(ORDERS)}")
        known = set(self.states)
        if len(known) != len(self.states):
            raise FrameError("duplicate admissible subgraphs")
        for vs, es in self.states:
            if not vs <= set(self.graph.nodes) or any(not self.graph.has_edge(a, b) for a, b in es):
                raise FrameError(f"'{subgraph_name((vs, es))}' is not a subgraph")
            if any(a not in vs or b not in vs for a, b in es):
                raise FrameError(f"'{subgraph_name((vs, es))}' has an edge leaving its vertices")
        for h in self.states:
            for k in self.states:
                joined = self.layer(h, k)
                if joined is not None and joined not in known:
                    raise FrameError(
                        f"'{subgraph_name(h)}' @ '{subgraph_name(k)}' is defined but not admissible")
        for g in self.states:
            for h, k in self._splits(g):
                if h not in known or k not in known:
                    raise FrameError(
                        f"'{subgraph_name(g)}' splits into '{subgraph_name(h)}' @ '{subgraph_name(k)}' "
                        "whose parts are not both admissible")

    def _splits(self, g: Subgraph) -> Iterable[Tuple[Subgraph, Subgraph]]:
        vertices, edges = g
        ordered = sorted(vertices)
        for size in range(1, len(ordered)):
            for part in combinations(ordered, size):
                left = frozenset(part)
                right = vertices - left
                h = (left, frozenset(e for e in edges if e[0] in left and e[1] in left))
                k = (right, frozenset(e for e in edges if e[0] in right and e[1] in right))
                if self.layer(h, k) == g:
                    yield h, k


def scaffold_frame(s: Scaffold) -> Frame:
    """
    The (I)LGL frame of a scaffold.

    States are the admissible subgraphs; x ∘ y is {x @ y} when defined and
    empty otherwise. The equality order gives an LGL frame, the subgraph
    and supergraph orders an ILGL frame.

    Raises:
        FrameError: The scaffold fails validation
        InputError: Unknown order name
    """
    s.validate()
    names = {g: subgraph_name(g) for g in s.states}
    comp = set()
    for h in s.states:
        for k in s.states:
            joined = s.layer(h, k)
            if joined is not None:
                comp.add((names[h], names[k], names[joined]))
    if s.order == "equality":
        order = {(n, n) for n in names.values()}
    else:
        wanted = (lambda a, b: a[0] <= b[0] and a[1] <= b[1]) if s.order == "subgraph" else \
                 (lambda a, b: b[0] <= a[0] and b[1] <= a[1])
        order = {(names[a], names[b]) for a in s.states for b in s.states if wanted(a, b)}
    logic = Logic(LogicName.LGL if s.order == "equality" else LogicName.ILGL)
    f = Frame(logic, tuple(sorted(names.values())), frozenset(comp), order=frozenset(order))
    logger.debug("scaffold frame with %d states and %d layerings", len(f.states), len(comp))
    return f


def monoid_frame(elements: Iterable[Any], table: Mapping[Tuple[Any, Any], Any], unit: Any,
                 order: Optional[Iterable[Tuple[Any, Any]]] = None, udmf: bool = False) -> Frame:
    """
    The frame of a finite partial commutative monoid with a preorder.

    Undefined products are absent from table. With no order, or the
    identity order, the result is a BBI frame with E = {unit}; otherwise a
    BI frame with E the up-closure of the unit. With udmf set, the BI
    composition is up/down closed afterwards.

    Raises:
        FrameError: The monoid does not yield a frame of its kind
    """
    names = [str(x) for x in elements]
    if str(unit) not in names:
        raise InputError(f"unit {unit} is not an element")
    comp = frozenset((str(x), str(y), str(z)) for (x, y), z in table.items())
    pairs = frozenset((str(x), str(y)) for x, y in (order or ()))
    discrete = all(x == y for x, y in pairs)
    if discrete:
        f = Frame(Logic(LogicName.BBI), tuple(names), comp, frozenset({str(unit)}))
    else:
        logic = Logic(LogicName.BI)
        draft = Frame(logic, tuple(names), comp, order=_closed(names, pairs))
        f = Frame(logic, tuple(names), comp, draft.up[str(unit)], draft.order)
    violations = check_frame(f)
    if violations:
        raise FrameError(f"the monoid does not give a frame: {violations[0]}")
    if udmf and not discrete:
        f = updown_closure(f)
    return f


def _closed(names: List[str], pairs: FrozenSet[Tuple[str, str]]) -> FrozenSet[Tuple[str, str]]:
    graph = nx.DiGraph()
    graph.add_nodes_from(names)
    graph.add_edges_from(pairs)
    closure = nx.transitive_closure(graph, reflexive=True)
    return frozenset(closure.edges)


def capped_sum_monoid(cap: int) -> Tuple[List[int], Dict[Tuple[int, int], int]]:
    """ℕ truncated at cap under addition, defined while the sum stays within the cap"""
    elements = list(range(cap + 1))
    table = {(x, y): x + y for x in elements for y in elements if x + y <= cap}
    return elements, table


# ----------------------------------------------------------------------------
# Sample library
# ----------------------------------------------------------------------------

Sample = Union[Frame, Algebra]


def _two_point_comp() -> FrozenSet[Tuple[str, str, str]]:
    # e∘e = {e}, e∘a = a∘e = {a}, a∘a = ∅
    return frozenset({("e", "e", "e"), ("e", "a", "a"), ("a", "e", "a")})


def _nabla(table: Mapping[Tuple[str, str], Iterable[str]]) -> FrozenSet[Tuple[str, str, str]]:
    """Symmetric ▽ triples from a table keyed by unordered pairs"""
    triples = set()
    for (t, u), results in table.items():
        for s in results:
            triples.add((t, u, s))
            triples.add((u, t, s))
    return frozenset(triples)


def _bibbi(nabla: Mapping[Tuple[str, str], Iterable[str]], u_set: Iterable[str],
           states: Tuple[str, ...] = ("e", "a"),
           comp: Optional[FrozenSet[Tuple[str, str, str]]] = None) -> Frame:
    if comp is None:
        comp = _two_point_comp() if states == ("e", "a") else frozenset(
            t for x in states for t in (("e", x, x), (x, "e", x)))
    return Frame(Logic(LogicName.BIBBI), states, comp, frozenset({"e"}),
                 nabla=_nabla(nabla), u_set=frozenset(u_set))


# ▽ with a below e: every Σ property holds
_BIBBI_NABLA = {("e", "e"): {"e"}, ("e", "a"): {"e"}, ("a", "a"): {"a"}}


def _sample_frames() -> Dict[str, Frame]:
    bbi = Logic(LogicName.BBI)
    frames: Dict[str, Frame] = {
        "bbi-1pt": Frame(bbi, ("e",), frozenset({("e", "e", "e")}), frozenset({"e"})),
        "bbi-2pt": Frame(bbi, ("e", "a"), _two_point_comp(), frozenset({"e"})),
        "cbi-1pt": Frame(Logic(LogicName.CBI), ("e",), frozenset({("e", "e", "e")}), frozenset({"e"}),
                         minus={"e": "e"}),
        "cbi-2pt": Frame(Logic(LogicName.CBI), ("e", "a"), _two_point_comp(), frozenset({"e"}),
                         minus={"e": "a", "a": "e"}),
        "ilgl-2chain": Frame(Logic(LogicName.ILGL), ("x", "y"), order=frozenset({("x", "x"), ("y", "y"), ("x", "y")})),
        "ckbi-2pt": Frame(Logic(LogicName.CKBI), ("e", "a"), _two_point_comp(), frozenset({"e"}),
                          seq=_two_point_comp()),
        "sml-2pt": Frame(Logic(LogicName.SML, modal="S4"), ("e", "a"), _two_point_comp(), frozenset({"e"}),
                         access=frozenset({("e", "e"), ("a", "a"), ("e", "a")})),
        "bibbi-1pt": _bibbi({("e", "e"): {"e"}}, {"e"}, states=("e",), comp=frozenset({("e", "e", "e")})),
        "bibbi-2pt": _bibbi(_BIBBI_NABLA, {"a"}),
        "bibbi-violates-assoc": _bibbi(
            {("e", "e"): {"e"}, ("e", "a"): {"e"}, ("e", "b"): {"e"}, ("a", "a"): {"a"}, ("b", "b"): {"b"}},
            {"a", "b"}, states=("e", "a", "b")),
        "bibbi-violates-mbot-weak": _bibbi({**_BIBBI_NABLA, ("a", "a"): {"a", "e"}}, {"a"}),
        "bibbi-violates-mbot-contr": _bibbi(_BIBBI_NABLA, ()),
        "bibbi-violates-mor-contr": _bibbi({("e", "a"): {"e"}, ("a", "a"): {"a"}}, {"a"}),
        "bibbi-violates-weak-dist": _bibbi({("e", "e"): {"e"}, ("e", "a"): {"a"}, ("a", "a"): {"a"}}, {"e"}),
    }
    elements, table = capped_sum_monoid(2)
    frames["bi-nat2"] = monoid_frame(elements, table, 0, [(x, y) for x in elements for y in elements if x <= y])
    frames["lgl-layers"] = scaffold_frame(Scaffold.build(
        ["u", "v"], [("u", "v")], [("u", "v")],
        [(["u"], []), (["v"], []), (["u", "v"], [("u", "v")])], order="equality"))
    frames["heap-bbi-1x2"] = heap_frame(HeapUniverse((1,), (0, 1)), "bbi")
    return frames


def _sample_algebras() -> Dict[str, Algebra]:
    boolean = [("0", "1")]
    chain = [("0", "m"), ("m", "1")]
    meet2 = {(x, y): min(x, y) for x in "01" for y in "01"}
    meet3 = {(x, y): "0" if "0" in (x, y) else ("m" if "m" in (x, y) else "1") for x in "0m1" for y in "0m1"}
    return {
        "bbi-alg-2": derive_algebra(Logic(LogicName.BBI), "01", boolean, {"star": meet2}, constants={"munit": "1"}),
        "bi-heyting-3": derive_algebra(Logic(LogicName.BI), "0m1", chain, {"star": meet3}, constants={"munit": "1"}),
    }


def sample_library() -> Dict[str, Sample]:
    """
    Named frames and algebras, each legal for its kind.

    The bibbi-violates-<row> frames are legal BiBBI frames that fail
    the named correspondence property.
    """
    library: Dict[str, Sample] = {}
    library.update(_sample_frames())
    library.update(_sample_algebras())
    return dict(sorted(library.items()))
