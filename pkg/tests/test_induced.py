import itertools
import random

import pytest

from uniprod.decomp import generate_qt_instance
from uniprod.induced import (
    LabelParams,
    LabelledInstance,
    adjacency_test,
    assemble_universal,
    bag_stats,
    build_context,
    fixup,
    growth_report,
    label_instance,
    make_label,
    make_label_legacy,
    pack_label,
    unpack_label,
    verify_labelling,
)


def contexts(seeds, tmax=2, nmax=26):
    rng = random.Random(99)
    for seed in seeds:
        t = rng.randint(1, tmax)
        n = rng.randint(t + 3, nmax)
        h = rng.randint(1, max(1, n // 3))
        inst = generate_qt_instance(t, n, h, rng_seed=seed)
        yield build_context(inst)


def test_context_places_vertices_on_root_paths():
    # every member of a row's clique union gets a tree node that is an
    # ancestor of its own interval's key, and bag colours are proper
    for ctx in contexts(range(8)):
        for y in range(1, ctx.h + 1):
            tree = ctx.trees[y]
            for v in ctx.s_plus[y]:
                node = ctx.x[y][v]
                assert tree.is_ancestor(node, ctx.rank[v])
                lo, hi = ctx.span[v]
                assert lo <= node <= hi
            for node, members in ctx.bags[y].items():
                slots = [ctx.psi[y][v] for v in members]
                assert sorted(slots) == list(range(1, len(members) + 1))


def test_clique_nodes_share_root_paths():
    # vertices of one family clique present in a row sit on one root path
    for ctx in contexts(range(8, 14)):
        for y in range(1, ctx.h + 1):
            tree = ctx.trees[y]
            present = set(ctx.s_plus[y])
            for v in ctx.s_plus[y]:
                nodes = [ctx.x[y][w] for w in ctx.tt.cliques[v] if w in present]
                nodes.sort(key=tree.depth)
                for a, b in zip(nodes, nodes[1:]):
                    assert tree.is_ancestor(a, b)


def test_fixup_contract():
    for ctx in contexts(range(14, 26)):
        fixup(ctx)
        for y in range(1, ctx.h + 1):
            tree = ctx.trees[y]
            present = set(ctx.s_plus[y])
            for v in ctx.s_plus[y]:
                # moved nodes stay on the root path, above the original
                assert tree.is_ancestor(ctx.xp[y][v], ctx.x[y][v])
                for w in ctx.tt.cliques[v]:
                    if w in present:
                        gap = tree.depth(ctx.xp[y][w]) - tree.depth(ctx.xp[y][v])
                        assert gap <= 1
        first = {y: dict(ctx.xp[y]) for y in ctx.xp}
        # idempotence: running the pass on its own output moves nothing
        ctx.x = ctx.xp
        fixup(ctx)
        assert {y: dict(ctx.xp[y]) for y in ctx.xp} == first


def test_bag_stats_accounting():
    ctx = next(contexts([5], tmax=2, nmax=24))
    with pytest.raises(ValueError):
        bag_stats(ctx)  # fixup required first
    fixup(ctx)
    stats = bag_stats(ctx)
    assert stats["max_bag_fixed"] >= 1
    assert stats["accounting_ok"] is True


def test_labels_pack_and_unpack_exactly():
    for ctx in contexts(range(30, 36)):
        fixup(ctx)
        for scheme, make in (("fixed", make_label), ("legacy", make_label_legacy)):
            for (hv, y) in sorted(ctx.inv, key=repr):
                label = make(ctx, hv, y)
                bits = pack_label(label, ctx.params)
                back = unpack_label(bits, ctx.params)
                assert back == label, (scheme, hv, y)


def test_unpack_rejects_garbage():
    params = LabelParams(n=16, t=1)
    with pytest.raises(ValueError):
        unpack_label("", params)
    with pytest.raises(ValueError):
        unpack_label("1", params)
    ctx = next(contexts([7], tmax=1, nmax=12))
    fixup(ctx)
    li = label_instance(ctx, "fixed")
    bits = sorted(li.packed.values())[0]
    with pytest.raises(ValueError):
        unpack_label(bits + "0", li.params)  # trailing bits must be rejected


def test_tester_is_exact_on_random_instances():
    for ctx in contexts(range(40, 52), tmax=2, nmax=24):
        fixup(ctx)
        for scheme in ("fixed", "legacy"):
            li = label_instance(ctx, scheme)
            pairs = verify_labelling(li)
            assert pairs == li.graph.n * (li.graph.n - 1) // 2


def test_tester_requires_matching_parameters():
    ctx1 = next(contexts([1], tmax=1, nmax=10))
    fixup(ctx1)
    li1 = label_instance(ctx1, "fixed")
    li2 = label_instance(ctx1, "legacy")
    a = unpack_label(sorted(li1.packed.values())[0], li1.params)
    b = unpack_label(sorted(li2.packed.values())[0], li2.params)
    with pytest.raises(ValueError):
        adjacency_test(a, b)  # schemes differ


def test_labels_are_distinct_within_instance():
    ctx = next(contexts([3], tmax=2, nmax=20))
    fixup(ctx)
    li = label_instance(ctx, "fixed")
    assert len(set(li.packed.values())) == len(li.packed)


def test_labelled_instance_jsonl_roundtrip(tmp_path):
    ctx = next(contexts([8], tmax=2, nmax=18))
    fixup(ctx)
    li = label_instance(ctx, "fixed")
    path = tmp_path / "labels.jsonl"
    li.write_jsonl(path)
    back = LabelledInstance.read_jsonl(path)
    assert back.scheme == li.scheme and back.params == li.params
    assert set(back.packed.values()) == set(li.packed.values())
    assert back.graph.n == li.graph.n and back.graph.m == li.graph.m
    assert verify_labelling(back) == verify_labelling(li)


def test_assemble_universal_and_growth():
    params = None
    corpus = []
    rng = random.Random(77)
    for seed in range(5):
        n, h = 18, rng.randint(1, 5)
        inst = generate_qt_instance(2, n, h, rng_seed=seed)
        if params is None:
            params = LabelParams(n=n, t=2)
        ctx = fixup(build_context(inst, params=params))
        corpus.append(label_instance(ctx, "fixed"))
    un = assemble_universal(corpus)
    report = growth_report(un, params)
    assert report["vertices_within"] and report["edges_within"]
    # membership is by label, so vertex count never exceeds the label total
    assert un.n <= sum(len(li.packed) for li in corpus)
    with pytest.raises(ValueError):
        assemble_universal([])


def test_assembled_graph_contains_each_member_induced():
    rng = random.Random(88)
    params = LabelParams(n=16, t=1)
    corpus = []
    for seed in range(4):
        inst = generate_qt_instance(1, 16, rng.randint(1, 4), rng_seed=seed + 60)
        ctx = fixup(build_context(inst, params=params))
        corpus.append(label_instance(ctx, "fixed"))
    un = assemble_universal(corpus)
    for li in corpus:
        verts = sorted(li.packed, key=repr)
        for a, b in itertools.combinations(verts, 2):
            assert un.has_edge(li.packed[a], li.packed[b]) == li.graph.has_edge(a, b)
