import itertools

import pytest

from uniprod.product import (
    CliqueFactor,
    ExplicitFactor,
    Graph,
    PathFactor,
    ProductWitness,
    WitnessError,
    complete_graph,
    lift_embedding,
    path_graph,
    strong_product,
    trim_witness,
    validate_subgraph_embedding,
)


def test_graph_basics():
    g = Graph("abc", [("a", "b")])
    g.add_edge("b", "c")
    assert g.n == 3 and g.m == 2
    assert g.has_edge("a", "b") and g.has_edge("b", "a")
    assert not g.has_edge("a", "c")
    assert g.neighbors("b") == {"a", "c"}
    assert sorted(map(sorted, g.edges())) == [["a", "b"], ["b", "c"]]
    assert g.degree_sequence() == [2, 1, 1]
    with pytest.raises(ValueError):
        g.add_edge("a", "a")


def test_induced_subgraph():
    g = complete_graph(4)
    sub = g.induced_subgraph([1, 2, 3])
    assert sub.n == 3 and sub.m == 3
    assert not sub.has_vertex(4)


def test_graph_jsonl_roundtrip(tmp_path):
    g = Graph(["x", "y", "z", "w"], [("x", "y"), ("y", "z")], name="demo")
    path = tmp_path / "g.jsonl"
    g.write_jsonl(path)
    back = Graph.read_jsonl(path)
    # ids are densified on write, so compare by isomorphism invariant shape
    assert back.n == g.n and back.m == g.m
    assert back.degree_sequence() == g.degree_sequence()
    assert back.name == "demo"
    with pytest.raises(ValueError):
        Graph.read_jsonl(__file__)


def test_strong_product_matches_definition():
    a, b = path_graph(3), complete_graph(2)
    g = strong_product(a, b)
    assert g.n == 6
    for (u1, v1), (u2, v2) in itertools.combinations(g.vertices(), 2):
        row_ok = u1 == u2 or a.has_edge(u1, u2)
        col_ok = v1 == v2 or b.has_edge(v1, v2)
        assert g.has_edge((u1, v1), (u2, v2)) == (row_ok and col_ok)


def test_factor_contracts():
    p = PathFactor(4)
    assert p.has_vertex(1) and p.has_vertex(4) and not p.has_vertex(5)
    assert p.adjacent(2, 3) and not p.adjacent(2, 4)
    k = CliqueFactor(3)
    assert k.adjacent(1, 3) and not k.adjacent(2, 2)
    e = ExplicitFactor(path_graph(3))
    assert e.adjacent(1, 2) and not e.adjacent(1, 3)
    assert set(e.vertices()) == {1, 2, 3}
    with pytest.raises(ValueError):
        PathFactor(0)


def test_witness_validates_membership():
    g = Graph(range(3), [(0, 1), (1, 2)])
    w = ProductWitness(g, (PathFactor(2), CliqueFactor(2)), {0: (1, 1), 1: (1, 2), 2: (2, 2)})
    w.validate()
    assert w.used(0) == {1, 2}

    bad = ProductWitness(g, (PathFactor(2), CliqueFactor(2)), {0: (1, 1), 1: (1, 1), 2: (2, 2)})
    with pytest.raises(WitnessError):
        bad.validate()
    gap = ProductWitness(g, (PathFactor(3), CliqueFactor(2)), {0: (1, 1), 1: (3, 2), 2: (2, 2)})
    with pytest.raises(WitnessError):
        gap.validate()
    outside = ProductWitness(g, (PathFactor(2), CliqueFactor(2)), {0: (0, 1), 1: (1, 2), 2: (2, 2)})
    with pytest.raises(WitnessError):
        outside.validate()


def test_trim_witness_compacts_path_rows():
    g = Graph(range(2), [(0, 1)])
    w = ProductWitness(g, (PathFactor(9), CliqueFactor(3)), {0: (4, 1), 1: (5, 3)})
    out = trim_witness(w)
    assert out.factors[0].h == 2
    assert out.coords[0][0] == 1 and out.coords[1][0] == 2
    out.validate()


def test_lift_embedding_replaces_first_factor():
    g = Graph(range(3), [(0, 1), (1, 2)])
    w = ProductWitness(g, (PathFactor(3), CliqueFactor(2)), {0: (1, 1), 1: (2, 2), 2: (3, 1)})
    host = complete_graph(5)
    lifted = lift_embedding({1: 2, 2: 3, 3: 4}, (ExplicitFactor(host),), w)
    assert lifted.coords[0] == (2, 1)
    with pytest.raises(WitnessError):
        lift_embedding({1: 2, 2: 2, 3: 4}, (ExplicitFactor(host),), w)
    sparse = Graph(range(1, 6))
    with pytest.raises(WitnessError):
        lift_embedding({1: 1, 2: 2, 3: 3}, (ExplicitFactor(sparse),), w)


def test_validate_subgraph_embedding():
    g = path_graph(3)
    host = complete_graph(4)
    validate_subgraph_embedding(g, {1: 2, 2: 3, 3: 4}, host)
    with pytest.raises(WitnessError):
        validate_subgraph_embedding(g, {1: 2, 2: 2, 3: 4}, host)
    with pytest.raises(WitnessError):
        validate_subgraph_embedding(g, {1: 2, 2: 3}, host)
    sparse = path_graph(4)
    with pytest.raises(WitnessError):
        validate_subgraph_embedding(g, {1: 1, 2: 2, 3: 4}, sparse)
