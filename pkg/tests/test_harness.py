import json

import pytest

from uniprod.harness import (
    Report,
    bad_family_counts,
    bad_family_slope,
    gen_bad_example,
    run_suite,
)


def test_bad_example_recipe_counts():
    for n in (24, 48, 120):
        m = n // 12
        for i, j in [(1, 1), (m, 1), (m, m)]:
            ex = gen_bad_example(n, i, j)
            # spine of 5 plus m kept leaves in each of two blocks per side
            assert ex.graph.n == 4 * m + 5
            assert ex.graph.m == ex.graph.n - 1
            deg = {v: len(ex.graph.neighbors(v)) for v in ex.graph.vertices()}
            assert deg["v"] == 2
            assert deg[ex.spine["w"]] == deg[ex.spine["u"]] == 2
            assert deg["a"] == deg["b"] == 2 * m + 1


def test_bad_example_is_a_tree_with_matching_intervals():
    ex = gen_bad_example(36, 2, 3)
    seen, stack = set(), ["v"]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(ex.graph.neighbors(v))
    assert seen == set(ex.graph.vertices())
    for u, v in ex.graph.edges():
        assert ex.rep.meets(u, v)
    assert not ex.rep.meets("a", "b")
    assert ex.ttree.order[0] == ex.spine["w"]
    ex.ttree.validate()
    ex.instance.witness.validate()


def test_bad_example_parameter_guards():
    for bad in [(47, 1, 1), (12, 1, 1), (48, 0, 1), (48, 1, 5), (48, 5, 1)]:
        with pytest.raises(ValueError):
            gen_bad_example(*bad)


def test_hub_label_growth_separates_schemes():
    legacy = bad_family_counts(48, "legacy", check_one=True)
    fixed = bad_family_counts(48, "fixed", check_one=True)
    assert legacy["labels_v"] == 48 // 12  # one hub label per family member
    assert fixed["labels_v"] < legacy["labels_v"]
    assert fixed["cross_edges"] < legacy["cross_edges"]


def test_slope_measurement():
    res = bad_family_slope("legacy", ns=(48, 96))
    assert res["slope"] > 1.5
    res = bad_family_slope("fixed", ns=(48, 96))
    assert res["slope"] < 1.5


def test_report_accumulates_and_serializes(tmp_path):
    rep = Report("demo", {"n": 3})
    rep.add("first", True, value=7)
    rep.add("second", False, reason="because")
    rep.rows.append({"x": 1, "y": 2})
    assert not rep.ok
    assert "FAIL" in rep.summary()
    out = tmp_path / "rep.json"
    rep.write(out)
    data = json.loads(out.read_text())
    assert data["suite"] == "demo" and data["ok"] is False
    assert len(data["checks"]) == 2
    csv_path = tmp_path / "rep.csv"
    rep.write_csv(csv_path)
    assert csv_path.read_text().startswith("x,y")


def test_run_suite_universality_and_sizes():
    rep = run_suite("universality", {"n": 64, "count": 2, "seed": 3})
    assert rep.ok and rep.config["count"] == 2
    rep = run_suite("sizes", {"n": 4, "lam": 2, "cap": 300_000})
    assert rep.ok
    assert any("vertices" in r for r in rep.rows)


def test_run_suite_labels_and_compression():
    rep = run_suite("labels", {"n": 16, "t": 1, "count": 2, "seed": 5})
    assert rep.ok
    rep = run_suite("compression", {"n0": 12, "k": 2, "eps": 0.8, "count": 2, "seed": 1})
    assert rep.ok


def test_run_suite_growth():
    rep = run_suite("growth", {"ns": [48, 96], "check": False})
    assert rep.ok
    assert len(rep.rows) == 4  # two schemes at two sizes


def test_run_suite_guards():
    with pytest.raises(ValueError):
        run_suite("no-such-suite")
    with pytest.raises(ValueError):
        run_suite("labels", {"count": 0})
