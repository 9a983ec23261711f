import itertools
import random

import pytest

from uniprod.closure import ClosureGraph
from uniprod.decomp import generate_qt_instance
from uniprod.product import Graph, PathFactor, ProductWitness, path_graph
from uniprod.unigraph import (
    QtEmbedding,
    UgParams,
    check_vertex,
    degree_domination_check,
    edge_count_bound,
    embed,
    embed_qt,
    is_edge,
    is_edge_exhaustive,
    materialize,
    validate_qt_embedding,
    vertex_count_bound,
)


def all_vertices(p: UgParams, max_len: int):
    strings = [""]
    for L in range(1, max_len + 1):
        strings += ["".join(t) for t in itertools.product("01", repeat=L)]
    for x in strings:
        for y in strings:
            if len(x) + len(y) <= p.budget:
                for z in range(p.d + 1):
                    yield (x, y, z)


def test_params_defaults():
    p = UgParams(128)
    assert p.d == 7
    assert p.budget == p.d + p.lam + 2
    # the default slack is large enough to re-encode any signature
    assert p.codec.width + p.d + 2 <= p.lam
    with pytest.raises(ValueError):
        UgParams(0)
    with pytest.raises(ValueError):
        UgParams(4, lam=-1)


def test_check_vertex():
    p = UgParams(4, lam=1)
    check_vertex(p, ("01", "0", 2))
    with pytest.raises(ValueError):
        check_vertex(p, ("01", "0", p.d + 1))
    with pytest.raises(ValueError):
        check_vertex(p, ("0" * p.budget, "1", 0))
    with pytest.raises(ValueError):
        check_vertex(p, ("2", "", 0))


def test_closed_form_matches_exhaustive_adjacency():
    # the oracle tries every candidate prefix cut and code; the closed
    # form must agree on every pair in a small parameter grid
    rng = random.Random(13)
    for n, lam in [(2, 1), (4, 1), (4, 2), (8, 2)]:
        p = UgParams(n, lam=lam)
        vs = [v for v in all_vertices(p, min(p.budget, 4)) if len(v[0]) + len(v[1]) <= 4]
        pairs = [(u, v) for u in vs for v in vs]
        rng.shuffle(pairs)
        for u, v in pairs[:4000]:
            assert is_edge(p, u, v) == is_edge_exhaustive(p, u, v), (u, v, n, lam)


def test_adjacency_is_symmetric_and_irreflexive():
    p = UgParams(8, lam=2)
    vs = list(all_vertices(p, 3))
    rng = random.Random(14)
    for _ in range(2000):
        u, v = rng.choice(vs), rng.choice(vs)
        assert is_edge(p, u, v) == is_edge(p, v, u)
    for v in vs[:200]:
        assert not is_edge(p, v, v)


def test_same_row_adjacency_is_prefix_order():
    p = UgParams(8, lam=2)
    # same y: u-v edge iff one x is a prefix of the other (type 1)
    for x1, x2 in [("", "0101"), ("01", "0110"), ("01", "00")]:
        u, v = (x1, "1", 0), (x2, "1", 1)
        want = x2.startswith(x1) or x1.startswith(x2)
        assert is_edge(p, u, v) == want


def test_materialized_counts_stay_under_bounds():
    for n, lam in [(2, 1), (4, 1), (4, 2), (8, 1)]:
        p = UgParams(n, lam=lam)
        g = materialize(p)
        assert g.n <= vertex_count_bound(p)
        assert g.m <= edge_count_bound(p)
        for (u, v) in itertools.islice(g.edges(), 500):
            assert is_edge(p, u, v)
    with pytest.raises(ValueError):
        materialize(UgParams(1 << 16), cap=1000)


def test_degree_domination():
    p = UgParams(4, lam=1)
    assert degree_domination_check(materialize(p), 4)
    assert not degree_domination_check(path_graph(4), 4)


def test_embed_closure_path_witness():
    rng = random.Random(15)
    for trial in range(60):
        n = rng.choice([16, 64, 256])
        d = (n - 1).bit_length()
        cg = ClosureGraph(d)
        h = rng.randint(1, 5)
        coords, used = {}, set()
        g = Graph()
        for v in range(rng.randint(1, 30)):
            c = (rng.randint(1, cg.n), rng.randint(1, h))
            if c in used:
                continue
            used.add(c)
            coords[v] = c
            g.add_vertex(v)
        vs = sorted(coords)
        for a, b in itertools.combinations(vs, 2):
            (c1, y1), (c2, y2) = coords[a], coords[b]
            if abs(y1 - y2) <= 1 and (c1 == c2 or cg.adjacent(c1, c2)) and rng.random() < 0.6:
                if (c1, y1) != (c2, y2):
                    g.add_edge(a, b)
        w = ProductWitness(g, (cg, PathFactor(h)), coords)
        w.validate()
        p = UgParams(n)
        zeta = embed(p, w)
        assert len(set(zeta.values())) == len(zeta)
        for a, b in g.edges():
            assert is_edge(p, zeta[a], zeta[b])


def test_embed_rejects_wrong_factor():
    g = Graph([0])
    w = ProductWitness(g, (PathFactor(1), PathFactor(1)), {0: (1, 1)})
    with pytest.raises(TypeError):
        embed(UgParams(4), w)
    big = ClosureGraph(4)
    w2 = ProductWitness(g, (big, PathFactor(1)), {0: (big.root, 1)})
    with pytest.raises(ValueError):
        embed(UgParams(4), w2)  # closure taller than params allow


def test_embed_qt_end_to_end():
    rng = random.Random(16)
    for trial in range(30):
        t = rng.randint(1, 3)
        n = rng.randint(t + 2, 48)
        h = rng.randint(1, max(1, n // 3))
        inst = generate_qt_instance(t, n, h, rng_seed=trial)
        emb = embed_qt(UgParams(n), inst)
        assert emb.omega >= 1
        validate_qt_embedding(emb.params, inst, emb)


def test_validate_qt_embedding_catches_corruption():
    inst = generate_qt_instance(2, 12, 3, rng_seed=4)
    p = UgParams(12)
    emb = embed_qt(p, inst)
    broken = dict(emb.mapping)
    a, b = sorted(broken, key=repr)[:2]
    broken[a] = broken[b]
    with pytest.raises(ValueError):
        validate_qt_embedding(p, inst, QtEmbedding(broken, emb.omega, p, {}))
