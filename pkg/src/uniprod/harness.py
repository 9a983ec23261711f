"""Corpus generation, density experiments, and batch verification suites.

Besides random product instances, this module builds the adversarial
double-star family: a tree whose hub vertices sit next to one leaf of
each star, so the legacy labelling leaks the leaf's identity into the
hub labels and the label graph picks up a quadratic bipartite core.
The depth-fixup scheme caps that leak, and the growth suite measures
the two slopes side by side.

Suites bundle the end-to-end checks behind one entry point returning a
machine-readable report; the CLI maps report failures to exit codes.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .compressor import build_saturator, compress, embed_compressed, verify_saturation
from .decomp import QtInstance, TTree, TreeDecomposition, generate_qt_instance
from .closure import IntervalRep
from .induced import (
    LabelParams,
    adjacency_test,
    assemble_universal,
    bag_stats,
    build_context,
    fixup,
    growth_report,
    label_instance,
    unpack_label,
    verify_labelling,
)
from .product import ExplicitFactor, Graph, PathFactor, ProductWitness, validate_subgraph_embedding
from .unigraph import (
    UgParams,
    degree_domination_check,
    edge_count_bound,
    embed_qt,
    materialize,
    vertex_count_bound,
)


@dataclass
class BadExample:
    """One member of the double-star family, on a single product row."""

    n: int
    i: int
    j: int
    graph: Graph
    rep: IntervalRep
    ttree: TTree
    instance: QtInstance
    spine: dict  # role name -> vertex id


def gen_bad_example(n: int, i: int, j: int) -> BadExample:
    """Double-star tree member H_{i,j} with its prescribed intervals.

    The hub v spans everything, the star centers split the line, and
    every leaf is a unit interval; which leaves are present is steered
    by i on the left star and j on the right.  The left hub neighbour w
    is the leaf just past position n/12, so its position among the kept
    leaves shifts with i (and likewise u with j).  Construction order is
    a preorder from w, making w the attach vertex of v.
    """
    if n % 12 or n < 24:
        raise ValueError("n must be a multiple of 12, at least 24")
    m = n // 12
    if not (1 <= i <= m and 1 <= j <= m):
        raise ValueError(f"need 1 <= i, j <= {m}")
    p = m + 1
    left = sorted({p} | set(range(1, i + 1)) | set(range(2 * m + 1, 3 * m - i + 1))
                  | set(range(n // 4 + 1, n // 4 + m + 1)))
    right = sorted({p} | set(range(1, j + 1)) | set(range(2 * m + 1, 3 * m - j + 1))
                   | set(range(n // 4 + 1, n // 4 + m + 1)))
    w, u = f"a{p}", f"b{p}"
    verts = ["v", "a", "b"] + [f"a{k}" for k in left] + [f"b{k}" for k in right]
    edges = [("v", w), ("v", u)] + [("a", f"a{k}") for k in left] + [("b", f"b{k}") for k in right]
    graph = Graph(verts, edges, name=f"double-star(n={n}, i={i}, j={j})")

    ivs = {"v": (1, n), "a": (1, Fraction(n - 1, 2)), "b": (n // 2 + 1, n - 1)}
    for k in left:
        ivs[f"a{k}"] = (k, k)
    for k in right:
        ivs[f"b{k}"] = (n // 2 + k, n // 2 + k)
    rep = IntervalRep(ivs)

    order, attach, owner = [], {}, {}
    stack = [(w, None)]
    while stack:
        v, parent = stack.pop()
        order.append(v)
        attach[v] = frozenset() if parent is None else frozenset({parent})
        if parent is not None:
            owner[v] = parent
        for nb in sorted(graph.neighbors(v), reverse=True):
            if nb != parent:
                stack.append((nb, v))
    tt = TTree(t=1, order=order, graph=graph, attach=attach, owner=owner)
    tt.validate()

    coords = {v: (v, 1) for v in verts}
    witness = ProductWitness(graph, (ExplicitFactor(graph), PathFactor(1)), coords)
    witness.validate()
    instance = QtInstance(
        graph=graph,
        witness=witness,
        host=graph,
        decomposition=tt.family_decomposition(),
        t=1,
        h=1,
        seed=0,
    )
    return BadExample(n, i, j, graph, rep, tt, instance, {"v": "v", "u": u, "w": w, "alpha": "a", "beta": "b"})


def bad_family_counts(n: int, scheme: str, check_one: bool = False) -> dict:
    """Hub-label statistics over the diagonal family i = j = 1..n/12.

    Counts the distinct labels the two hubs take across the family and
    the tester edges between the two label sets; the legacy scheme gives
    a full bipartite pattern there, the fixup scheme a near-linear one.
    """
    params = LabelParams(n=n, t=1)
    m = n // 12
    lv, lu = [], []
    for i in range(1, m + 1):
        ex = gen_bad_example(n, i, i)
        ctx = build_context(ex.instance, params=params, rep=ex.rep, tt=ex.ttree)
        if scheme == "fixed":
            fixup(ctx)
        li = label_instance(ctx, scheme)
        if check_one and i == 1:
            verify_labelling(li)
        lv.append(li.packed[ex.spine["v"]])
        lu.append(li.packed[ex.spine["u"]])
    sv, su = sorted(set(lv)), sorted(set(lu))
    dec = {s: unpack_label(s, params) for s in set(sv) | set(su)}
    cross = sum(1 for a in sv for b in su if a != b and adjacency_test(dec[a], dec[b]))
    return {"n": n, "family": m, "scheme": scheme, "labels_v": len(sv), "labels_u": len(su), "cross_edges": cross}


def bad_family_slope(scheme: str, ns=(120, 240, 480), check_one: bool = False) -> dict:
    """Log-log growth rate of the cross-edge count over the family sizes."""
    points = [bad_family_counts(n, scheme, check_one=check_one) for n in ns]
    lo, hi = points[0], points[-1]
    slope = math.log(hi["cross_edges"] / lo["cross_edges"]) / math.log(hi["n"] / lo["n"])
    return {"scheme": scheme, "points": points, "slope": slope}


@dataclass
class Report:
    """Suite outcome: every check recorded, config embedded, CSV-friendly."""

    name: str
    config: dict
    checks: list = field(default_factory=list)
    rows: list = field(default_factory=list)  # plot data, one dict per point
    runtime: float = 0.0

    def add(self, check: str, ok, **metrics) -> None:
        self.checks.append({"check": check, "ok": bool(ok), **metrics})

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "config": self.config,
            "ok": self.ok,
            "runtime_s": round(self.runtime, 3),
            "checks": self.checks,
            "rows": self.rows,
        }

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, default=str)
            fh.write("\n")

    def write_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            if not self.rows:
                fh.write("")
                return
            writer = csv.DictWriter(fh, fieldnames=sorted({k for r in self.rows for k in r}))
            writer.writeheader()
            writer.writerows(self.rows)

    def summary(self) -> str:
        lines = [f"suite {self.name}: {'PASS' if self.ok else 'FAIL'} ({len(self.checks)} checks, {self.runtime:.1f}s)"]
        for c in self.checks:
            extra = ", ".join(f"{k}={v}" for k, v in c.items() if k not in ("check", "ok"))
            lines.append(f"  [{'ok' if c['ok'] else 'FAIL'}] {c['check']}" + (f" ({extra})" if extra else ""))
        return "\n".join(lines)


def run_suite(name: str, config: dict | None = None) -> Report:
    """Execute a named verification suite; unknown names raise."""
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; have {sorted(_SUITES)}")
    config = dict(config or {})
    report = Report(name, config)
    start = time.time()
    _SUITES[name](config, report)
    report.runtime = time.time() - start
    if not report.checks:
        raise ValueError(f"suite {name!r} produced no checks; refusing a vacuous pass")
    return report


def _suite_universality(cfg: dict, report: Report) -> None:
    n = int(cfg.get("n", 128))
    t = int(cfg.get("t", 2))
    count = int(cfg.get("count", 5))
    seed = int(cfg.get("seed", 0))
    if count < 1:
        raise ValueError("count must be positive")
    rng = random.Random(seed)
    p = UgParams(n)
    report.add("parameters", True, n=n, d=p.d, lam=p.lam, budget=p.budget)
    for k in range(count):
        ni = rng.randint(t + 2, min(n, 32))
        hi = rng.randint(1, max(1, ni // 2))
        inst = generate_qt_instance(t, ni, hi, rng.randrange(1 << 30))
        try:
            emb = embed_qt(p, inst)
            report.add(f"embed instance {k}", True, vertices=ni, rows=hi, omega=emb.omega)
            report.rows.append({"instance": k, "vertices": ni, "rows": hi, "omega": emb.omega})
        except Exception as exc:  # report, do not mask which instance failed
            report.add(f"embed instance {k}", False, vertices=ni, rows=hi, error=str(exc))


def _suite_sizes(cfg: dict, report: Report) -> None:
    n = int(cfg.get("n", 4))
    lam = cfg.get("lam")
    cap = int(cfg.get("cap", 300_000))
    p = UgParams(n, lam=int(lam)) if lam is not None else UgParams(n)
    vb, eb = vertex_count_bound(p), edge_count_bound(p)
    report.add("bounds computed", True, n=n, lam=p.lam, vertex_bound=vb, edge_bound=eb)
    row = {"n": n, "lam": p.lam, "vertex_bound": vb, "edge_bound": eb}
    if vb <= cap:
        g = materialize(p, cap=cap)
        report.add("materialized within bounds", g.n <= vb and g.m <= eb, vertices=g.n, edges=g.m)
        report.add("degree domination", degree_domination_check(g, n), n=n)
        row.update({"vertices": g.n, "edges": g.m})
    else:
        report.add("materialization skipped", True, reason=f"vertex bound {vb} over cap {cap}")
    report.rows.append(row)


def _suite_labels(cfg: dict, report: Report) -> None:
    n = int(cfg.get("n", 24))
    t = int(cfg.get("t", 2))
    count = int(cfg.get("count", 4))
    seed = int(cfg.get("seed", 0))
    if count < 1:
        raise ValueError("count must be positive")
    rng = random.Random(seed)
    params = LabelParams(n=n, t=t)
    corpus = []
    for k in range(count):
        hi = rng.randint(1, max(1, n // 4))
        inst = generate_qt_instance(t, n, hi, rng.randrange(1 << 30))
        ctx = fixup(build_context(inst, params=params))
        stats = bag_stats(ctx)
        report.add(f"bags instance {k}", stats["max_bag_fixed"] <= stats["reference"], **stats)
        for scheme in ("fixed", "legacy"):
            li = label_instance(ctx, scheme)
            pairs = verify_labelling(li)
            report.add(f"tester exact {scheme} instance {k}", True, pairs=pairs)
            if scheme == "fixed":
                corpus.append(li)
    un = assemble_universal(corpus)
    growth = growth_report(un, params)
    report.add("corpus induced in assembled graph", True, **growth)
    report.rows.append(growth)


def _suite_growth(cfg: dict, report: Report) -> None:
    ns = tuple(cfg.get("ns") or (48, 96, 192))
    slopes = {}
    for scheme in ("legacy", "fixed"):
        res = bad_family_slope(scheme, ns=ns, check_one=bool(cfg.get("check", True)))
        slopes[scheme] = res["slope"]
        report.rows.extend(res["points"])
        report.add(f"{scheme} slope measured", True, slope=round(res["slope"], 3))
    report.add(
        "fixup grows slower than legacy",
        slopes["fixed"] < slopes["legacy"],
        legacy=round(slopes["legacy"], 3),
        fixed=round(slopes["fixed"], 3),
    )


def _suite_compression(cfg: dict, report: Report) -> None:
    n0 = int(cfg.get("n0", 16))
    k = int(cfg.get("k", 2))
    eps = float(cfg.get("eps", 0.5))
    count = int(cfg.get("count", 5))
    seed = int(cfg.get("seed", 0))
    if count < 1:
        raise ValueError("count must be positive")
    rng = random.Random(seed)
    for idx in range(count):
        s = build_saturator(n0, k, eps, seed=rng.randrange(1 << 30))
        verdict = verify_saturation(s, n=min(4, s.n_u), samples=10, rng_seed=idx)
        report.add(f"saturation {idx}", bool(verdict), mode=verdict.mode, d_sat=s.d_sat)
        if not verdict:
            continue
        g = Graph(range(s.n_v))
        for _ in range(2 * s.n_v):
            a, b = rng.sample(range(s.n_v), 2)
            g.add_edge(a, b)
        hn = compress(g, s)
        edge = sorted(g.edges())[0]
        emb = embed_compressed(Graph(range(2), [(0, 1)]), {0: edge[0], 1: edge[1]}, s, g, hn)
        report.add(f"compressed embedding {idx}", True, u_vertices=hn.n, u_edges=hn.m, image=sorted(emb.values()))


_SUITES = {
    "universality": _suite_universality,
    "sizes": _suite_sizes,
    "labels": _suite_labels,
    "growth": _suite_growth,
    "compression": _suite_compression,
}
