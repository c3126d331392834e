import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from lienil.graph import (
    OMEGA,
    Cycle,
    Edge,
    Graph,
    GraphError,
    GraphSyntaxError,
    NotSolvableError,
    Vertex,
    block_structure,
    char2_condition,
    classify,
    count_paths_to_cycle,
    count_paths_to_sink,
    decompose,
    distinct_cycles,
    emitters_receiving_edges,
    format_count,
    is_isolated_and_loops,
    is_no_exit,
    normalize_characteristic,
    parse_graph,
    report_json,
    serialize_graph,
    vertex_kinds,
)

from oracles import brute_path_count


def build(n_vertices, arcs, pendants=None):
    pendants = pendants or {}
    verts = [Vertex(f"v{i}", *pendants.get(i, (0, 0))) for i in range(n_vertices)]
    edges = [Edge(f"e{k}", f"v{s}", f"v{t}") for k, (s, t) in enumerate(arcs)]
    return Graph(verts, edges)


@st.composite
def small_graphs(draw, max_vertices=4, max_edges=6, pendants=False):
    n = draw(st.integers(1, max_vertices))
    arcs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_edges))
    extra = {}
    if pendants:
        for i in range(n):
            extra[i] = (draw(st.integers(0, 2)), draw(st.integers(0, 1)))
    return build(n, arcs, extra)


def brute(g, target, cycle=None):
    edges = [(e.name, e.source, e.range) for e in g.edges.values()]
    return brute_path_count(list(g.vertices), edges, target, list(cycle.edges) if cycle else [])


# -- text format -------------------------------------------------------------------------


def test_parse_with_comments_and_attributes():
    g = parse_graph(
        """
        # two vertices and a loop
        vertex u pendant_sinks=3
        vertex v [pendant_loops=omega]   # trailing comment
        edge e : u -> v
        edge f : v -> v
        """
    )
    assert list(g.vertices) == ["u", "v"]
    assert g.vertices["u"].pendant_sinks == 3
    assert g.vertices["v"].pendant_loops == OMEGA
    assert g.edges["f"].is_loop and not g.edges["e"].is_loop
    assert g.out_degree("u") == 4 and g.out_degree("v") == OMEGA
    assert not g.row_finite


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("vertex a\n  edge e : a -> b\n", 2, 17),
        ("vertex a\nedge e : c -> a\n", 2, 10),
        ("vertex a [pendant_sinks=x]\n", 1, 25),
        ("vertex a\nvertex a\n", 2, 8),
        ("vertex a\nedge a : a -> a\n", 2, 6),
        ("vertx a\n", 1, 1),
        ("vertex a [pendant_sinks=1\n", 1, 10),
        ("vertex a [colour=red]\n", 1, 10),
        ("vertex 9a\n", 1, 8),
        ("vertex a\nedge e a -> a\n", 2, 1),
    ],
)
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(GraphSyntaxError) as err:
        parse_graph(text)
    assert (err.value.line, err.value.column) == (line, column)
    assert str(err.value).startswith(f"line {line}, column {column}:")


def test_repeated_attribute_is_rejected():
    with pytest.raises(GraphSyntaxError, match="given twice"):
        parse_graph("vertex a [pendant_sinks=1] [pendant_sinks=2]\n")


def test_programmatic_construction_is_validated():
    with pytest.raises(GraphError):
        Graph(["a"], [("e", "a", "b")])
    with pytest.raises(GraphError):
        Graph(["a", "a"])
    with pytest.raises(GraphError):
        Graph(["a"], [("a", "a", "a")])
    with pytest.raises(GraphError):
        Graph([Vertex("a", pendant_sinks=-1)])
    with pytest.raises(GraphError):
        Graph(["a b"])


@given(g=small_graphs(pendants=True))
def test_serialize_round_trip(g):
    text = serialize_graph(g)
    assert parse_graph(text) == g
    assert serialize_graph(parse_graph(text)) == text


def test_serialize_omega():
    g = Graph([Vertex("v", OMEGA, 2)])
    assert serialize_graph(g) == "vertex v [pendant_sinks=omega] [pendant_loops=2]\n"
    assert parse_graph(serialize_graph(g)) == g
    assert format_count(OMEGA) == "omega" and format_count(3) == 3


def test_empty_graph():
    g = parse_graph("")
    assert serialize_graph(g) == "" and g.vertices == {}
    rep = classify(g, 2)
    assert rep.solvable and rep.nilpotent


# -- local structure ------------------------------------------------------------------


def test_vertex_kinds():
    g = parse_graph(
        """
        vertex a
        vertex b [pendant_sinks=2]
        vertex c [pendant_loops=omega]
        vertex d
        vertex z
        edge e : a -> b
        edge f : b -> d
        """
    )
    k = vertex_kinds(g)
    assert k.sinks == ["d", "z"]
    assert k.isolated == ["z"]
    assert k.regular == ["a", "b"]
    assert k.infinite_emitters == ["c"]
    assert [f.to_dict() for f in k.families] == [
        {"owner": "b", "kind": "sink", "count": 2},
        {"owner": "c", "kind": "loop", "count": "omega"},
    ]
    assert emitters_receiving_edges(g) == []
    g2 = parse_graph("vertex a\nvertex c [pendant_sinks=omega]\nedge e : a -> c\n")
    assert emitters_receiving_edges(g2) == ["c"]


def test_expand_writes_out_pendants():
    g = Graph([Vertex("v", 2, 1)], [Edge("f", "v", "v")])
    x = g.expand()
    assert len(x.vertices) == 4 and len(x.edges) == 1 + 2 + 2
    assert not x.has_pendants()
    assert sorted(v for v in x.vertices if x.is_sink(v)) == ["v_s0", "v_s1"]
    assert x.loops_at("v_l0")
    with pytest.raises(GraphError):
        Graph([Vertex("v", OMEGA)]).expand()


def test_expand_avoids_name_clashes():
    g = Graph([Vertex("v", 1), Vertex("v_s0")])
    x = g.expand()
    assert set(x.vertices) == {"v", "v_s0", "v_s1"}


def test_graph_equality_is_structural():
    a = parse_graph("vertex x\nvertex y\nedge e : x -> y\n")
    b = Graph(["x", "y"], [("e", "x", "y")])
    assert a == b and hash(a) == hash(b)
    assert a != Graph(["x", "y"], [("e", "y", "x")])


# -- cycles --------------------------------------------------------------------------------


def test_distinct_cycles_one_per_vertex_set():
    g = parse_graph(
        """
        vertex b
        vertex a
        vertex c
        edge p : a -> b
        edge q : a -> b
        edge r : b -> a
        edge s : c -> c
        edge t : c -> c
        """
    )
    cycles = distinct_cycles(g)
    assert [(c.vertices, c.edges) for c in cycles] == [(("a", "b"), ("p", "r")), (("c",), ("s",))]
    assert cycles[0].label == "p.r" and cycles[0].base == "a" and len(cycles[0]) == 2
    assert cycles[1].is_loop


def test_three_vertex_orders_collapse():
    # a->b->c->a and a->c->b->a share a vertex set
    g = build(3, [(0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0)])
    cycles = distinct_cycles(g)
    assert {c.vertex_set for c in cycles} == {
        frozenset({"v0", "v1"}),
        frozenset({"v0", "v2"}),
        frozenset({"v1", "v2"}),
        frozenset({"v0", "v1", "v2"}),
    }
    assert next(c for c in cycles if len(c) == 3).vertices == ("v0", "v1", "v2")


def test_no_exit_witness():
    g = parse_graph("vertex v\nvertex w\nedge f : v -> v\nedge x : v -> w\n")
    ok, wit = is_no_exit(g)
    assert not ok and wit == {"vertex": "v", "cycle_edge": "f", "exit": "x"}
    g = Graph([Vertex("v", pendant_sinks=1)], [Edge("f", "v", "v")])
    ok, wit = is_no_exit(g)
    assert not ok and wit["exit"] == "pendant edge"
    assert is_no_exit(build(3, [(0, 1), (1, 2), (2, 0), (2, 2)]))[1]["vertex"] == "v2"
    assert is_no_exit(build(3, [(0, 1), (1, 0), (2, 0)])) == (True, None)


# -- the characteristic-2 vertex condition --------------------------------------------


def test_char2_condition_branches():
    # u -> v -> w with an extra edge into v: u fails, v is not a sink or loop vertex
    g = build(3, [(0, 1), (1, 2)])
    ok, wit = char2_condition(g)
    assert not ok and wit == {"vertex": "v0", "edge": "e0", "target": "v1", "reason": "v1 is neither a sink nor on a loop"}

    shared_sink = build(3, [(0, 2), (1, 2)])
    ok, wit = char2_condition(shared_sink)
    assert not ok and wit["reason"] == "sink v2 receives 2 edges"

    crowded_loop = build(2, [(0, 1), (0, 1), (1, 1)])
    ok, wit = char2_condition(crowded_loop)
    assert not ok and wit["reason"] == "v1 carries a loop but receives 3 edges"

    assert char2_condition(build(2, [(0, 1), (1, 1)]))[0]
    assert char2_condition(build(3, [(0, 1), (0, 2), (2, 2)]))[0]
    # vertices on a 2-cycle pass on their own
    assert char2_condition(build(2, [(0, 1), (1, 0)]))[0]
    # an edge into a 2-cycle does not
    ok, wit = char2_condition(build(3, [(0, 1), (1, 0), (2, 0)]))
    assert not ok and wit["vertex"] == "v2"


def test_isolated_and_loops():
    assert is_isolated_and_loops(build(3, [(1, 1)])) == (True, None)
    ok, wit = is_isolated_and_loops(build(2, [(0, 0), (0, 0)]))
    assert not ok and wit["vertex"] == "v0"
    ok, wit = is_isolated_and_loops(Graph([Vertex("v", 0, 1)]))
    assert not ok and wit == {"vertex": "v", "reason": "has pendant edges"}


# -- path counts ---------------------------------------------------------------------


def test_path_count_examples():
    line = build(3, [(0, 1), (1, 2)])
    assert count_paths_to_sink(line, "v2") == 3
    diamond = build(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert count_paths_to_sink(diamond, "v3") == 5
    fed_by_loop = build(2, [(0, 0), (0, 1)])
    assert count_paths_to_sink(fed_by_loop, "v1") == OMEGA
    two_cycle = build(3, [(0, 1), (1, 0), (2, 0)])
    c = distinct_cycles(two_cycle)[0]
    assert count_paths_to_cycle(two_cycle, c) == 3
    assert count_paths_to_cycle(two_cycle, c, base="v1") == 3
    with pytest.raises(GraphError):
        count_paths_to_sink(line, "v0")
    with pytest.raises(GraphError):
        count_paths_to_sink(line, "nope")
    with pytest.raises(GraphError):
        count_paths_to_cycle(two_cycle, c, base="v2")
    with pytest.raises(GraphError):
        count_paths_to_cycle(two_cycle, Cycle(("e1", "e0"), ("v0", "v1")))


@given(g=small_graphs())
@settings(max_examples=150, deadline=None)
def test_sink_counts_match_enumeration(g):
    for v in g.vertices:
        if g.is_sink(v):
            assert count_paths_to_sink(g, v) == brute(g, v)


@given(g=small_graphs())
@settings(max_examples=150, deadline=None)
def test_cycle_counts_match_enumeration_at_every_base(g):
    for c in distinct_cycles(g):
        counts = set()
        for k, base in enumerate(c.vertices):
            rotated = Cycle(c.edges[k:] + c.edges[:k], c.vertices[k:] + c.vertices[:k])
            got = count_paths_to_cycle(g, c, base=base)
            assert got == brute(g, base, rotated)
            counts.add(got)
        assert len(counts) == 1


@given(g=small_graphs(max_vertices=3, max_edges=4, pendants=True))
@settings(max_examples=100, deadline=None)
def test_pendant_families_match_expanded_graph(g):
    sinks, cycles = block_structure(g)
    xs, xc = block_structure(g.expand())

    def sizes(blocks):
        out = []
        for b in blocks:
            out += [b.size] * int(b.copies)
        return sorted(out)

    assert sizes(sinks) == sizes(xs)
    assert sizes(cycles) == sizes(xc)
    for char in (2, "not2"):
        a, b = classify(g, char), classify(g.expand(), char)
        assert (a.solvable, a.nilpotent) == (b.solvable, b.nilpotent)


# -- classification and decomposition -----------------------------------------------


def test_normalize_characteristic():
    for sel in (2, "2", " 2 "):
        assert normalize_characteristic(sel) == "2"
    for sel in (0, 3, "not2", "not 2", "NOT_2", "odd", "5"):
        assert normalize_characteristic(sel) == "not 2"
    for bad in ("two", 2.0, None):
        with pytest.raises(ValueError):
            normalize_characteristic(bad)


def test_classify_reports_rule_and_trace():
    g = build(2, [(0, 0), (0, 1)])
    rep = classify(g, 2)
    assert not rep.solvable and rep.witness["rule"] == "exit"
    d = rep.to_dict()
    assert d["characteristic"] == "2"
    assert [step["check"] for step in d["explanation"]] == [
        "no_exit",
        "char2_condition",
        "isolated_and_loops",
        "no_path_ends_at_infinite_emitter",
        "solvable",
    ]
    odd = classify(build(1, [(0, 0)]), "not2")
    assert odd.solvable and odd.nilpotent and odd.witness is None
    assert odd.to_dict()["characteristic"] == "not2"
    rep = classify(build(3, [(0, 1), (1, 2)]), 2)
    assert rep.no_exit and not rep.solvable and rep.witness["rule"] == "vertex_condition"


@given(g=small_graphs(pendants=True))
@settings(max_examples=150, deadline=None)
def test_classification_implications(g):
    even, odd = classify(g, 2), classify(g, "not2")
    assert even.nilpotent == odd.nilpotent
    assert not even.nilpotent or even.solvable
    assert not odd.solvable or even.solvable
    assert odd.solvable == odd.nilpotent


def test_decompose_loop_behind_edge():
    g = build(2, [(0, 1), (1, 1)])
    rep = decompose(g, 2)
    assert [b.to_dict() for b in rep.blocks] == [{"kind": "MatLaurent", "size": 2, "at": "e1"}]
    assert rep.exact and rep.quotient_emitters == []
    with pytest.raises(NotSolvableError) as err:
        decompose(g, "not2")
    assert err.value.report.witness["vertex"] == "v0"


def test_decompose_two_cycle():
    rep = decompose(build(2, [(0, 1), (1, 0)]), 2)
    assert [b.to_dict() for b in rep.blocks] == [{"kind": "MatLaurent", "size": 2, "at": "e0.e1"}]


def test_decompose_isolated_and_loops_any_characteristic():
    g = build(3, [(1, 1)])
    for char in (2, "not2"):
        rep = decompose(g, char)
        assert sorted((b.kind, b.size, b.at) for b in rep.blocks) == [
            ("MatK", 1, "v0"),
            ("MatK", 1, "v2"),
            ("MatLaurent", 1, "e0"),
        ]


def test_decompose_infinite_clock():
    g = Graph([Vertex("v", pendant_sinks=OMEGA)])
    rep = decompose(g, 2)
    assert [b.to_dict() for b in rep.blocks] == [{"kind": "MatK", "size": 2, "at": "v:pendant_sinks", "copies": "omega"}]
    assert rep.quotient_emitters == ["v"]
    assert rep.row_finite is False and rep.exact is False
    assert json.loads(report_json(rep))["exact"] is False


def test_block_structure_without_solvability():
    sinks, cycles = block_structure(build(3, [(0, 1), (1, 2)]))
    assert [(b.at, b.size) for b in sinks] == [("v2", 3)]
    sinks, cycles = block_structure(build(2, [(0, 0), (0, 1)]))
    assert sinks[0].size == OMEGA and cycles[0].size == 1
    assert math.isinf(sinks[0].size)


@given(g=small_graphs(pendants=True))
@settings(max_examples=150, deadline=None)
def test_decompose_bounds(g):
    for char, bound in ((2, 2), ("not2", 1)):
        rep = classify(g, char)
        if rep.solvable:
            d = decompose(g, char)
            assert all(b.size <= bound for b in d.blocks)
            assert d.exact == g.row_finite
        else:
            with pytest.raises(NotSolvableError):
                decompose(g, char)
