import pytest

from bunchkit.algebras import Algebra, check_algebra
from bunchkit.exceptions import FrameError, InputError
from bunchkit.frames import Frame, Model, check_frame, check_sigma_property, frame_checks, satisfies, valid_in_frame
from bunchkit.models import Scaffold, capped_sum_monoid, monoid_frame, scaffold_frame, subgraph_name
from bunchkit.syntax import Logic, LogicName, SigmaAxiom, parse_formula, parse_sequent


def two_vertex(order="equality", states=None) -> Scaffold:
    if states is None:
        states = [(["u"], []), (["v"], []), (["u", "v"], [("u", "v")])]
    return Scaffold.build(["u", "v"], [("u", "v")], [("u", "v")], states, order)


class TestScaffold:
    def test_layering_follows_the_distinguished_edge(self):
        s = two_vertex()
        u, v = s.states[0], s.states[1]
        assert s.layer(u, v) == (frozenset({"u", "v"}), frozenset({("u", "v")}))
        assert s.layer(v, u) is None

    def test_overlapping_subgraphs_do_not_layer(self):
        s = two_vertex()
        assert s.layer(s.states[0], s.states[0]) is None

    def test_subgraph_names(self):
        assert subgraph_name((frozenset({"v", "u"}), frozenset({("u", "v")}))) == "u,v|u>v"
        assert subgraph_name((frozenset({"u"}), frozenset())) == "u"

    def test_lgl_frame(self):
        f = scaffold_frame(two_vertex())
        assert f.kind is LogicName.LGL
        assert f.states == ("u", "u,v|u>v", "v")
        assert f.comp == {("u", "v", "u,v|u>v")}
        assert check_frame(f) == []

    def test_subgraph_order_gives_ilgl(self):
        f = scaffold_frame(two_vertex("subgraph"))
        assert f.kind is LogicName.ILGL
        assert f.leq("u", "u,v|u>v")
        assert not f.leq("u,v|u>v", "u")

    def test_supergraph_order(self):
        f = scaffold_frame(two_vertex("supergraph"))
        assert f.leq("u,v|u>v", "v")

    def test_layered_conjunction(self):
        f = scaffold_frame(two_vertex())
        m = Model(f, {"p": {"u"}, "q": {"v"}})
        lgl = Logic(LogicName.LGL)
        assert satisfies(m, "u,v|u>v", parse_formula("p * q", lgl))
        assert not satisfies(m, "u,v|u>v", parse_formula("q * p", lgl))

    def test_admissible_states_must_be_closed(self):
        with pytest.raises(FrameError):
            scaffold_frame(two_vertex(states=[(["u"], []), (["v"], [])]))

    def test_splits_must_be_admissible(self):
        with pytest.raises(FrameError):
            scaffold_frame(two_vertex(states=[(["u", "v"], [("u", "v")])]))

    def test_unknown_order(self):
        with pytest.raises(InputError):
            scaffold_frame(two_vertex("sideways"))

    def test_distinguished_edge_must_exist(self):
        with pytest.raises(InputError):
            Scaffold.build(["u", "v"], [], [("u", "v")], [])

    def test_document_round_trip(self):
        s = two_vertex()
        assert scaffold_frame(Scaffold.from_dict(s.to_dict())) == scaffold_frame(s)


class TestMonoidFrames:
    def test_capped_sum(self):
        elements, table = capped_sum_monoid(2)
        assert elements == [0, 1, 2]
        assert table[(1, 1)] == 2
        assert (1, 2) not in table

    def test_discrete_monoid_gives_bbi_frame(self):
        f = monoid_frame(*capped_sum_monoid(2), 0)
        assert f.kind is LogicName.BBI
        assert f.units == {"0"}
        assert f.compose("1", "1") == {"2"}
        assert f.compose("1", "2") == frozenset()

    def test_ordered_monoid_gives_bi_frame(self, library):
        f = library["bi-nat2"]
        assert f.kind is LogicName.BI
        assert f.units == {"0", "1", "2"}
        assert f.leq("0", "2")

    def test_udmf_flag_closes_composition(self):
        elements, table = capped_sum_monoid(2)
        order = [(x, y) for x in elements for y in elements if x <= y]
        f = monoid_frame(elements, table, 0, order, udmf=True)
        assert f.compose("0", "0") == {"0", "1", "2"}

    def test_unit_must_be_an_element(self):
        with pytest.raises(InputError):
            monoid_frame([0, 1], {(0, 0): 0}, 5)

    def test_non_commutative_table(self):
        with pytest.raises(FrameError):
            monoid_frame([0, 1], {(0, 0): 0, (0, 1): 1}, 0)


class TestSampleLibrary:
    def test_every_sample_is_legal(self, library):
        for name, item in library.items():
            if isinstance(item, Frame):
                assert check_frame(item) == [], name
            else:
                assert isinstance(item, Algebra)
                assert check_algebra(item) == [], name

    def test_library_is_sorted_by_name(self, library):
        assert list(library) == sorted(library)

    def test_classical_frame_with_empty_u(self, library):
        f = library["cbi-1pt"]
        cbi = Logic(LogicName.CBI)
        m = Model(f)
        assert not satisfies(m, "e", parse_formula("mbot", cbi))
        assert not satisfies(m, "e", parse_formula("mnot emp", cbi))
        assert satisfies(m, "e", parse_formula("emp", cbi))

    def test_two_point_frame_falsifies_contraction(self, two_point, bbi):
        assert not valid_in_frame(two_point, parse_sequent("p |- p * p", bbi))

    def test_ckbi_frame_satisfies_exchange(self, library):
        f = library["ckbi-2pt"]
        assert "Exchange" in [name for name, _ in frame_checks(f)]
        assert check_frame(f) == []

    def test_violators_fail_their_row(self, library):
        for axiom in SigmaAxiom:
            f = library[f"bibbi-violates-{axiom.value}"]
            assert check_sigma_property(f, axiom) is not None, axiom.value

    def test_heap_sample(self, library):
        assert library["heap-bbi-1x2"].states == ("[]", "{1:0}", "{1:1}")
