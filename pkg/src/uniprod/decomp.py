"""Tree decompositions, t-trees, and width conversions.

The pipeline here turns a width-t tree decomposition into three related
artifacts: a completed t-tree (a maximal graph of treewidth t with its
construction order and family cliques), a path decomposition whose width
grows only by a log factor, and an interval representation realizing
that path decomposition geometrically.  Random t-trees and random
subgraphs of ttree x path products act as test instances downstream.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .closure import IntervalRep
from .product import ExplicitFactor, Graph, PathFactor, ProductWitness


@dataclass
class TreeDecomposition:
    """Bags indexed by tree nodes plus the tree's edge list."""

    bags: dict
    edges: list

    def __post_init__(self):
        self.bags = {x: frozenset(b) for x, b in self.bags.items()}
        self.edges = [tuple(e) for e in self.edges]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def node_count(self) -> int:
        return len(self.bags)

    def adjacency(self) -> dict:
        adj = {x: set() for x in self.bags}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def covered_vertices(self) -> set:
        out = set()
        for b in self.bags.values():
            out |= b
        return out

    def validate(self, g: Graph) -> None:
        """Check coverage of vertices and edges plus bag connectivity."""
        if not self.bags:
            raise ValueError("decomposition has no nodes")
        adj = self.adjacency()
        if len(self.edges) != len(self.bags) - 1:
            raise ValueError("tree edge count is off")
        seen = set()
        stack = [next(iter(self.bags))]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x])
        if len(seen) != len(self.bags):
            raise ValueError("decomposition tree is disconnected")
        covered = self.covered_vertices()
        missing = set(g.vertices()) - covered
        if missing:
            raise ValueError(f"vertices not covered: {sorted(map(repr, missing))[:5]}")
        for u, v in g.edges():
            if not any(u in b and v in b for b in self.bags.values()):
                raise ValueError(f"edge {u!r}-{v!r} in no bag")
        for v in covered:
            nodes = {x for x, b in self.bags.items() if v in b}
            comp = {next(iter(nodes))}
            stack = list(comp)
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in nodes and y not in comp:
                        comp.add(y)
                        stack.append(y)
            if comp != nodes:
                raise ValueError(f"bags containing {v!r} are disconnected")

    def write_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(
                json.dumps({"kind": "tree-decomposition", "nodes": self.node_count()})
                + "\n"
            )
            for x, b in self.bags.items():
                fh.write(json.dumps({"node": x, "bag": sorted(b)}) + "\n")
            for a, b in self.edges:
                fh.write(json.dumps({"tree_edge": [a, b]}) + "\n")

    @classmethod
    def read_jsonl(cls, path) -> "TreeDecomposition":
        bags, edges = {}, []
        with open(path) as fh:
            head = json.loads(fh.readline())
            if head.get("kind") != "tree-decomposition":
                raise ValueError("not a tree decomposition file")
            for line in fh:
                rec = json.loads(line)
                if "node" in rec:
                    bags[rec["node"]] = frozenset(rec["bag"])
                else:
                    edges.append(tuple(rec["tree_edge"]))
        return cls(bags, edges)


@dataclass
class PathDecomposition:
    """Bags in path order."""

    bags: list

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, g: Graph) -> None:
        covered = set()
        for b in self.bags:
            covered |= b
        missing = set(g.vertices()) - covered
        if missing:
            raise ValueError(f"vertices not covered: {sorted(map(repr, missing))[:5]}")
        for u, v in g.edges():
            if not any(u in b and v in b for b in self.bags):
                raise ValueError(f"edge {u!r}-{v!r} in no bag")
        for v in covered:
            idx = [i for i, b in enumerate(self.bags) if v in b]
            if idx[-1] - idx[0] + 1 != len(idx):
                raise ValueError(f"bags containing {v!r} are not contiguous")


def normalize_decomposition(td: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges whose one bag contains the other.

    Afterwards no bag is a subset of a neighbouring bag, which caps the
    node count at the number of covered vertices (each leaf then owns a
    private vertex).
    """
    bags = dict(td.bags)
    adj = {x: set(ys) for x, ys in td.adjacency().items()}
    changed = True
    while changed:
        changed = False
        for a in list(bags):
            for b in list(adj[a]):
                if bags[a] <= bags[b]:
                    for c in adj[a]:
                        if c != b:
                            adj[c].discard(a)
                            adj[c].add(b)
                            adj[b].add(c)
                    adj[b].discard(a)
                    del adj[a], bags[a]
                    changed = True
                    break
            if changed:
                break
    seen, edges = set(), []
    for a, ys in adj.items():
        for b in ys:
            key = frozenset((a, b))
            if key not in seen:
                seen.add(key)
                edges.append((a, b))
    return TreeDecomposition(bags, edges)


def _centroid(nodes: set, adj: dict):
    """Tree node whose removal leaves components of at most len(nodes)//2."""
    n = len(nodes)
    start = next(iter(nodes))
    order, parent = [], {start: None}
    stack = [start]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in adj[x]:
            if y in nodes and y != parent[x]:
                parent[y] = x
                stack.append(y)
    size = {x: 1 for x in nodes}
    for x in reversed(order):
        if parent[x] is not None:
            size[parent[x]] += size[x]
    for x in order:
        heaviest = n - size[x]
        for y in adj[x]:
            if y in nodes and parent.get(y) == x:
                heaviest = max(heaviest, size[y])
        if heaviest <= n // 2:
            return x
    raise AssertionError("tree has no centroid")


def _is_path(td: TreeDecomposition):
    adj = td.adjacency()
    if any(len(ys) > 2 for ys in adj.values()):
        return None
    if len(td.edges) != len(td.bags) - 1:
        return None
    start = min(
        (x for x in td.bags if len(adj[x]) <= 1), key=repr, default=None
    )
    if start is None:
        return None
    order, prev = [start], None
    while True:
        nxt = [y for y in adj[order[-1]] if y != prev]
        if not nxt:
            break
        prev = order[-1]
        order.append(nxt[0])
    if len(order) != len(td.bags):
        return None
    return order


def tree_to_path_decomposition(td: TreeDecomposition, n: int | None = None) -> PathDecomposition:
    """Convert a tree decomposition into a path decomposition.

    Path-shaped inputs pass through unchanged.  Otherwise the tree is
    normalized and split at a centroid whose bag is unioned into every
    bag of the recursively built segments, so the width of the result is
    below (w + 1) * (ceil(log2 n) + 1) where w is the input width.
    """
    path_order = _is_path(td)
    if path_order is not None:
        return PathDecomposition([td.bags[x] for x in path_order])
    norm = normalize_decomposition(td)
    if n is None:
        n = max(1, len(norm.covered_vertices()))
    adj = norm.adjacency()

    def rec(nodes: set) -> list:
        if not nodes:
            return []
        c = _centroid(nodes, adj)
        rest = nodes - {c}
        segs = []
        while rest:
            comp = {next(iter(rest))}
            stack = list(comp)
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in rest and y not in comp:
                        comp.add(y)
                        stack.append(y)
            segs.extend(rec(comp))
            rest -= comp
        if not segs:
            segs = [frozenset()]
        return [b | norm.bags[c] for b in segs]

    pd = PathDecomposition(rec(set(norm.bags)))
    cap = (norm.width + 1) * (max(1, n - 1).bit_length() + 1) - 1
    if pd.width > cap:
        raise AssertionError(f"pathwidth {pd.width} exceeds bound {cap}")
    return pd


def path_decomposition_to_intervals(pd: PathDecomposition) -> IntervalRep:
    """Each vertex becomes the index range of the bags containing it."""
    first, last = {}, {}
    for i, b in enumerate(pd.bags):
        for v in b:
            first.setdefault(v, i)
            last[v] = i
    return IntervalRep(
        {v: (Fraction(first[v]), Fraction(last[v])) for v in first}
    )


# ---------------------------------------------------------------------------
# t-trees


@dataclass
class TTree:
    """A maximal graph of treewidth t with its construction order.

    Vertices enter one at a time; each vertex beyond the initial clique
    attaches to a t-clique of the graph built so far.  cliques[v] is the
    family clique of v (its attach set plus v itself, or the initial
    clique for the first t + 1 vertices), colour is a proper greedy
    colouring with t + 1 colours, and owner[v] names an earlier vertex
    whose family clique contains v's attach set.
    """

    t: int
    order: list
    graph: Graph
    attach: dict
    cliques: dict = field(default_factory=dict)
    colour: dict = field(default_factory=dict)
    owner: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.cliques:
            base = frozenset(self.order[: self.t + 1])
            for i, v in enumerate(self.order):
                self.cliques[v] = (
                    base if i <= self.t else self.attach[v] | {v}
                )
        if not self.colour:
            for v in self.order:
                used = {self.colour[w] for w in self.attach[v]}
                self.colour[v] = min(c for c in range(1, self.t + 2) if c not in used)

    @property
    def n(self) -> int:
        return len(self.order)

    def i_parent(self, v, i: int):
        """The member of v's family clique carrying colour i."""
        for w in self.cliques[v]:
            if self.colour[w] == i:
                return w
        raise KeyError(f"no colour-{i} member in the clique of {v!r}")

    def parents(self, v) -> dict:
        return {self.colour[w]: w for w in self.cliques[v]}

    def reachable_ancestors(self, v, dist: int) -> set:
        """Vertices reachable from v by at most dist family-clique hops."""
        reach = {v}
        for _ in range(dist):
            nxt = set(reach)
            for z in reach:
                nxt |= self.cliques[z]
            if nxt == reach:
                break
            reach = nxt
        return reach

    def ancestor_count_bound(self, dist: int) -> int:
        return comb(dist + self.t, self.t)

    def validate(self) -> None:
        t, n = self.t, self.n
        if n < t + 1:
            raise ValueError("need at least t + 1 vertices")
        if set(self.order) != set(self.graph.vertices()) or len(set(self.order)) != n:
            raise ValueError("order does not enumerate the vertex set")
        pos = {v: i for i, v in enumerate(self.order)}
        for v in self.order:
            i = pos[v]
            att = self.attach[v]
            earlier = {w for w in self.graph.neighbors(v) if pos[w] < i}
            if earlier != set(att):
                raise ValueError(f"attach set of {v!r} is not its earlier neighbours")
            if len(att) != min(i, t):
                raise ValueError(f"attach set of {v!r} has wrong size")
            att_l = sorted(att, key=repr)
            for a in range(len(att_l)):
                for b in range(a + 1, len(att_l)):
                    if not self.graph.has_edge(att_l[a], att_l[b]):
                        raise ValueError(f"attach set of {v!r} is not a clique")
        for v in self.order:
            cq = self.cliques[v]
            if len(cq) != t + 1 or len({self.colour[w] for w in cq}) != t + 1:
                raise ValueError(f"family clique of {v!r} misses a colour")
            if self.i_parent(v, self.colour[v]) != v:
                raise ValueError("vertex is not its own colour-parent")
        for v in self.order[1:]:
            u = self.owner.get(v)
            if u is None or pos[u] >= pos[v]:
                raise ValueError(f"owner of {v!r} missing or too late")
            if pos[v] > t and not self.attach[v] <= self.cliques[u]:
                raise ValueError(f"owner clique does not cover attach set of {v!r}")

    def family_decomposition(self) -> TreeDecomposition:
        """Tree decomposition whose bags are the family cliques.

        The parent of each node is its owner; any vertex w inside a bag
        other than its own lies in that bag's attach set, hence also in
        the owner's bag, so the bags containing w chain down to w itself
        and form a subtree.
        """
        bags = {v: self.cliques[v] for v in self.order}
        edges = [(v, self.owner[v]) for v in self.order[1:]]
        td = TreeDecomposition(bags, edges)
        td.validate(self.graph)
        return td


def build_ttree(t: int, n: int, rng_seed: int = 0) -> TTree:
    """Random t-tree on vertices 0..n-1 in construction order.

    Each new vertex drops one random member from the family clique of a
    random earlier vertex and attaches to the remaining t-clique.
    """
    if t < 1 or n < t + 1:
        raise ValueError("need t >= 1 and n >= t + 1")
    rng = random.Random(rng_seed)
    order = list(range(n))
    g = Graph(order, name=f"ttree(t={t}, n={n})")
    attach, owner, fam = {}, {}, {}
    base = frozenset(range(t + 1))
    for i in range(n):
        if i <= t:
            attach[i] = frozenset(range(i))
            fam[i] = base
            if i:
                owner[i] = i - 1
        else:
            u = rng.randrange(i)
            drop = rng.choice(sorted(fam[u]))
            attach[i] = fam[u] - {drop}
            fam[i] = attach[i] | {i}
            owner[i] = u
        for w in attach[i]:
            g.add_edge(i, w)
    tt = TTree(t=t, order=order, graph=g, attach=attach, owner=owner)
    tt.validate()
    return tt


def _mcs_order(vertices: list, adj: dict) -> list:
    """Maximum cardinality search; ties broken by repr for determinism."""
    weight = {v: 0 for v in vertices}
    out, left = [], set(vertices)
    while left:
        v = max(sorted(left, key=repr), key=lambda x: weight[x])
        out.append(v)
        left.remove(v)
        for w in adj[v]:
            if w in left:
                weight[w] += 1
    return out


def ttree_from_decomposition(td: TreeDecomposition, t: int | None = None) -> TTree:
    """Complete the graph described by a tree decomposition to a t-tree.

    The union of bag cliques is chordal, so a maximum cardinality search
    yields an order in which each vertex's earlier neighbours form a
    clique of size at most t.  Attach sets are padded to exactly t
    vertices out of an enclosing family clique, which always exists
    because every clique of a t-tree lies inside some family clique.
    """
    if t is None:
        t = td.width
    verts = sorted(td.covered_vertices(), key=repr)
    if len(verts) < t + 1:
        raise ValueError("decomposition covers fewer than t + 1 vertices")
    adj = {v: set() for v in verts}
    for b in td.bags.values():
        bl = sorted(b, key=repr)
        for i, u in enumerate(bl):
            for w in bl[i + 1 :]:
                adj[u].add(w)
                adj[w].add(u)
    order = _mcs_order(verts, adj)
    pos = {v: i for i, v in enumerate(order)}
    g = Graph(order, name=f"ttree(t={t}) completion")
    attach, owner, fam = {}, {}, {}
    base = frozenset(order[: t + 1])
    for i, v in enumerate(order):
        if i <= t:
            attach[v] = frozenset(order[:i])
            fam[v] = base
            if i:
                owner[v] = order[i - 1]
        else:
            ni = {w for w in adj[v] if pos[w] < i}
            if len(ni) > t:
                raise ValueError("decomposition width below the cliques it induces")
            hull = None
            for u in order[i - 1 :: -1]:
                if ni <= fam[u]:
                    hull = u
                    break
            if hull is None:
                raise AssertionError("earlier neighbours do not form a clique")
            pad = sorted(fam[hull] - ni, key=repr)
            att = set(ni)
            for w in pad:
                if len(att) == t:
                    break
                att.add(w)
            attach[v] = frozenset(att)
            fam[v] = attach[v] | {v}
            owner[v] = hull
        for w in attach[v]:
            g.add_edge(v, w)
    tt = TTree(t=t, order=order, graph=g, attach=attach, owner=owner)
    tt.validate()
    return tt


# ---------------------------------------------------------------------------
# random product instances


@dataclass
class QtInstance:
    """A graph drawn inside host x path, with the host's decomposition."""

    graph: Graph
    witness: ProductWitness
    host: Graph
    decomposition: TreeDecomposition
    t: int
    h: int
    seed: int

    def write_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(
                json.dumps({"kind": "qt-instance", "t": self.t, "h": self.h, "seed": self.seed}) + "\n"
            )
            coords = self.witness.coords
            for g in sorted(coords, key=repr):
                v, y = coords[g]
                fh.write(json.dumps({"gv": g, "c": [v, y]}) + "\n")
            for a, b in self.graph.edges():
                fh.write(json.dumps({"ge": [a, b]}) + "\n")
            for v in self.host.vertices():
                fh.write(json.dumps({"hv": v}) + "\n")
            for u, v in self.host.edges():
                fh.write(json.dumps({"he": [u, v]}) + "\n")
            for x, bag in self.decomposition.bags.items():
                fh.write(json.dumps({"dnode": x, "bag": sorted(bag, key=repr)}) + "\n")
            for a, b in self.decomposition.edges:
                fh.write(json.dumps({"de": [a, b]}) + "\n")

    @classmethod
    def read_jsonl(cls, path) -> "QtInstance":
        def key(v):
            return tuple(v) if isinstance(v, list) else v

        with open(path) as fh:
            head = json.loads(fh.readline())
            if head.get("kind") != "qt-instance":
                raise ValueError("not an instance file")
            coords, g_edges, h_verts, h_edges, bags, d_edges = {}, [], [], [], {}, []
            for line in fh:
                rec = json.loads(line)
                if "gv" in rec:
                    coords[key(rec["gv"])] = (key(rec["c"][0]), rec["c"][1])
                elif "ge" in rec:
                    g_edges.append((key(rec["ge"][0]), key(rec["ge"][1])))
                elif "hv" in rec:
                    h_verts.append(key(rec["hv"]))
                elif "he" in rec:
                    h_edges.append((key(rec["he"][0]), key(rec["he"][1])))
                elif "dnode" in rec:
                    bags[key(rec["dnode"])] = frozenset(key(v) for v in rec["bag"])
                else:
                    d_edges.append((key(rec["de"][0]), key(rec["de"][1])))
        graph = Graph(coords, g_edges, name="qt instance")
        host = Graph(h_verts, h_edges, name="host")
        witness = ProductWitness(graph, (ExplicitFactor(host), PathFactor(head["h"])), coords)
        witness.validate()
        inst = cls(
            graph=graph,
            witness=witness,
            host=host,
            decomposition=TreeDecomposition(bags, d_edges),
            t=head["t"],
            h=head["h"],
            seed=head["seed"],
        )
        inst.decomposition.validate(host)
        return inst


def generate_qt_instance(t: int, n: int, h: int, rng_seed: int = 0) -> QtInstance:
    """Random n-vertex subgraph of (random t-tree) x (path on h rows).

    Every row hosts at least one vertex.  The returned witness places
    the graph inside host x P_h; the decomposition is the host t-tree's
    own family decomposition, so its width is exactly t.
    """
    if h < 1 or n < h:
        raise ValueError("need 1 <= h <= n")
    rng = random.Random(rng_seed)
    n_host = max(t + 1, -(-n // h))
    tt = build_ttree(t, n_host, rng.randrange(1 << 30))
    host = tt.graph
    grid = [(u, y) for y in range(1, h + 1) for u in range(n_host)]
    chosen = set()
    for y in range(1, h + 1):
        chosen.add((rng.randrange(n_host), y))
    pool = [p for p in grid if p not in chosen]
    chosen.update(rng.sample(pool, n - len(chosen)))
    coords = {i: p for i, p in enumerate(sorted(chosen))}
    g = Graph(range(n), name=f"qt(t={t}, n={n}, h={h})")
    for i in range(n):
        u, y = coords[i]
        for j in range(i + 1, n):
            w, z = coords[j]
            if abs(y - z) > 1:
                continue
            if u != w and not host.has_edge(u, w):
                continue
            if rng.random() < 0.5:
                g.add_edge(i, j)
    witness = ProductWitness(g, (ExplicitFactor(host), PathFactor(h)), coords)
    witness.validate()
    return QtInstance(
        graph=g,
        witness=witness,
        host=host,
        decomposition=tt.family_decomposition(),
        t=t,
        h=h,
        seed=rng_seed,
    )
