"""Adjacency labels for product instances, and the graph their tester induces.

Vertices of an instance live in (completed host) x path.  Each one gets a
bitstring label built from per-row search trees over interval ranks: the
label stores the vertex's own tree position, transition codes to the next
row, and the positions, bag colours and adjacency bits of its clique
parents.  A standalone tester maps two labels to an adjacency verdict, so
the set of all labels plus the tester is a graph containing every labelled
instance as an induced subgraph.

Two schemes are implemented.  The legacy scheme ships the full clique path
signature, whose depth can leak unbounded detail about clique parents into
a label.  The default scheme first runs a parent-depth fixup pass that drags
every parent's tree node to within one level of its child's, then ships only
the vertex's own signature plus one overflow bit per row; bag colours stay
injective per bag, so the tester keeps exact.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .bitcore import BitReader, BitWriter, Bst, build_biased_bst
from .closure import IntervalRep, min_depth_in_range, perturb_left_endpoints
from .decomp import (
    QtInstance,
    TTree,
    path_decomposition_to_intervals,
    tree_to_path_decomposition,
    ttree_from_decomposition,
)
from .product import Graph
from .treeseq import LcpCodec, build_tree_sequence


@dataclass(frozen=True)
class LabelParams:
    """Global label-layout parameters; must match across a whole corpus."""

    n: int
    t: int
    version: int = 1
    maxheight: int | None = None  # covers every tree depth a label may store

    def __post_init__(self):
        if self.n < 1 or self.t < 1:
            raise ValueError("need n >= 1 and t >= 1")
        if self.maxheight is None:
            guess = (max(self.n, 2) - 1).bit_length() + (self.t + 1).bit_length() + 8
            object.__setattr__(self, "maxheight", guess)

    @property
    def depth_bits(self) -> int:
        # one spare code above maxheight is reserved as the absent-slot marker
        return (self.maxheight + 1).bit_length()

    @property
    def phi_bits(self) -> int:
        return max(1, self.t.bit_length())

    @property
    def codec(self) -> LcpCodec:
        return LcpCodec(self.maxheight)


def _ancestor_at_depth(tree: Bst, key, depth: int):
    """Node at the given depth on the root path of key."""
    node = tree.root
    for _ in range(depth):
        if node == key:
            raise ValueError(f"key {key!r} is shallower than depth {depth}")
        node = tree.left(node) if key < node else tree.right(node)
    return node


def _chain_top(tree: Bst, nodes):
    """Deepest of a set of nodes that must lie on one root path."""
    ordered = sorted(set(nodes), key=tree.depth)
    for a, b in zip(ordered, ordered[1:]):
        if not tree.is_ancestor(a, b):
            raise AssertionError(f"nodes {a!r} and {b!r} are not on one root path")
    return ordered[-1]


@dataclass
class LabelContext:
    """Everything derived from one instance that labelling needs.

    Rows, clique unions and their per-row search trees are built once by
    build_context; the primed maps (xp, bags_p, psi_p) appear after fixup.
    """

    instance: QtInstance
    params: LabelParams
    tt: TTree
    rep: IntervalRep
    rank: dict
    span: dict  # vertex -> (lo, hi) rank window of its interval
    rows: dict  # y -> sorted row members
    s_plus: dict  # y -> sorted clique-union superset
    trees: dict  # y -> Bst over ranks
    ts_lambda: int
    x: dict  # y -> {vertex: tree key}
    bags: dict  # y -> {tree key: members sorted by rank}
    psi: dict  # y -> {vertex: 1-based slot in its bag}
    row_tree: Bst
    alpha1: dict
    hint: dict
    inv: dict  # (host vertex, row) -> instance vertex
    edge_set: set
    xp: dict | None = None
    bags_p: dict | None = None
    psi_p: dict | None = None

    @property
    def h(self) -> int:
        return self.instance.h

    def sig(self, y: int, key) -> str:
        return self.trees[y].signature(key)

    def node(self, y: int, v, primed: bool):
        return (self.xp if primed else self.x)[y][v]

    def slot(self, y: int, v, primed: bool) -> int:
        return (self.psi_p if primed else self.psi)[y][v]

    def path_string(self, y: int, v, primed: bool) -> str:
        """Signature of the deepest clique-parent node of v in row y."""
        assign = self.xp if primed else self.x
        top = _chain_top(self.trees[y], [assign[y][w] for w in self.tt.cliques[v]])
        return self.trees[y].signature(top)

    def r_string(self, y: int, v) -> str:
        full = self.path_string(y, v, primed=True)
        own = self.sig(y, self.xp[y][v])
        if not full.startswith(own) or len(full) - len(own) > 1:
            raise AssertionError(f"clique path of {v!r} in row {y} overruns its node by more than one level")
        return full[len(own):]


def build_context(
    instance: QtInstance,
    params: LabelParams | None = None,
    rep: IntervalRep | None = None,
    tt: TTree | None = None,
) -> LabelContext:
    """Derive rows, clique unions, rank trees and row machinery for labelling.

    The host is completed to a t-tree (or taken as given), every host edge
    must be covered by the interval representation, and each clique's node
    set is checked to sit on a single root path of its row tree.
    """
    if tt is None:
        tt = ttree_from_decomposition(instance.decomposition)
    for u, v in instance.host.edges():
        if not tt.graph.has_edge(u, v):
            raise ValueError(f"t-tree completion lost host edge {u!r}-{v!r}")
    if params is None:
        params = LabelParams(n=instance.graph.n, t=tt.t)
    if params.t != tt.t:
        raise ValueError(f"instance is a {tt.t}-tree but params.t = {params.t}")
    if rep is None:
        pd = tree_to_path_decomposition(tt.family_decomposition(), n=tt.n)
        rep = path_decomposition_to_intervals(pd)
    rep = perturb_left_endpoints(rep)
    for v in tt.graph.vertices():
        if v not in rep.intervals:
            raise ValueError(f"no interval for host vertex {v!r}")
    for u, v in tt.graph.edges():
        if not rep.meets(u, v):
            raise ValueError(f"interval supergraph misses edge {u!r}-{v!r}")

    order = rep.left_order()
    rank = {v: i for i, v in enumerate(order)}
    lefts = [rep.intervals[v][0] for v in order]
    span = {}
    for v, (a, b) in rep.intervals.items():
        span[v] = (rank[v], bisect_right(lefts, b) - 1)

    h = instance.h
    coords = instance.witness.coords
    rows = {y: set() for y in range(1, h + 1)}
    for v, y in coords.values():
        rows[y].add(v)
    for y in range(1, h + 1):
        if not rows[y]:
            raise ValueError(f"row {y} hosts no vertices")
    s = {0: set(), h + 1: set()}
    for y in range(1, h + 1):
        s[y] = set().union(*(tt.cliques[v] for v in rows[y]))
    s_plus = {y: sorted(s[y - 1] | s[y] | s[y + 1], key=rank.__getitem__) for y in range(1, h + 1)}

    key_rows = [sorted(rank[v] for v in s_plus[y]) for y in range(1, h + 1)]
    ts = build_tree_sequence(key_rows, codec=params.codec)
    trees = {y: ts.trees[y - 1] for y in range(1, h + 1)}
    worst = max(t.height for t in trees.values())
    if worst > params.maxheight:
        raise ValueError(f"tree height {worst} exceeds the layout cap {params.maxheight}")

    x = {}
    for y in range(1, h + 1):
        x[y] = {v: min_depth_in_range(trees[y], *span[v]) for v in s_plus[y]}

    bags, psi = {}, {}
    for y in range(1, h + 1):
        bags[y] = _group_bags(x[y], rank)
        psi[y] = _first_fit(bags[y])

    row_tree = build_biased_bst(range(1, h + 1), {y: max(1, len(s_plus[y])) for y in range(1, h + 1)})
    alpha1 = {y: row_tree.signature(y) for y in range(1, h + 1)}
    hint = {y: _successor_hint(alpha1, y, h) for y in range(1, h + 1)}

    inv = {}
    for g, c in coords.items():
        inv[c] = g
    edge_set = {frozenset((coords[a], coords[b])) for a, b in instance.graph.edges()}
    for pair in edge_set:
        (v1, y1), (v2, y2) = sorted(pair, key=repr)
        if abs(y1 - y2) > 1 or (v1 != v2 and not tt.graph.has_edge(v1, v2)):
            raise ValueError(f"instance edge {v1!r}@{y1}-{v2!r}@{y2} not realizable in the completed product")

    ctx = LabelContext(
        instance=instance,
        params=params,
        tt=tt,
        rep=rep,
        rank=rank,
        span=span,
        rows={y: sorted(rows[y], key=rank.__getitem__) for y in rows},
        s_plus=s_plus,
        trees=trees,
        ts_lambda=ts.lambda_height,
        x=x,
        bags=bags,
        psi=psi,
        row_tree=row_tree,
        alpha1=alpha1,
        hint=hint,
        inv=inv,
        edge_set=edge_set,
    )
    _check_root_paths(ctx, primed=False)
    return ctx


def _group_bags(assign: dict, rank: dict) -> dict:
    bags = defaultdict(list)
    for v in sorted(assign, key=rank.__getitem__):
        bags[assign[v]].append(v)
    return dict(bags)


def _first_fit(bags: dict) -> dict:
    return {v: i + 1 for members in bags.values() for i, v in enumerate(members)}


def _successor_hint(alpha1: dict, y: int, h: int) -> tuple:
    if y == h:
        return ("end", 0)
    s1, s2 = alpha1[y], alpha1[y + 1]
    if s2.startswith(s1 + "1") and set(s2[len(s1) + 1:]) <= {"0"}:
        return ("append", len(s2) - len(s1) - 1)
    if s1.startswith(s2 + "0") and set(s1[len(s2) + 1:]) <= {"1"}:
        return ("strip", len(s1) - len(s2) - 1)
    raise AssertionError(f"rows {y} and {y + 1} break the in-order successor shape")


def _check_root_paths(ctx: LabelContext, primed: bool) -> None:
    # every clique with a labelled member must land on one root path per row
    assign = ctx.xp if primed else ctx.x
    for y in range(1, ctx.h + 1):
        carriers = set().union(*(ctx.rows.get(y + b, []) for b in (-1, 0, 1) if 1 <= y + b <= ctx.h))
        for v in sorted(carriers, key=ctx.rank.__getitem__):
            _chain_top(ctx.trees[y], [assign[y][w] for w in ctx.tt.cliques[v]])


def run_fixup_pass(tree: Bst, assign: dict, cliques: dict, members, sort_key) -> dict:
    """One top-down pass pulling deep clique parents next to their children.

    Visits nodes root first; whenever a vertex sitting at the visited node
    has a clique parent whose node is more than one level deeper, that
    parent's node is replaced by its ancestor one level below the visited
    node.  Returns a new assignment; a second pass is a no-op.
    """
    domain = set(members)
    xp = dict(assign)
    bags = defaultdict(set)
    for v in domain:
        bags[xp[v]].add(v)

    def visit(node):
        base = tree.depth(node)
        for v in sorted(bags.get(node, ()), key=sort_key):
            for w in sorted((cliques[v] & domain), key=sort_key):
                if tree.depth(xp[w]) > base + 1:
                    target = _ancestor_at_depth(tree, xp[w], base + 1)
                    bags[xp[w]].discard(w)
                    xp[w] = target
                    bags[target].add(w)
        for child in (tree.left(node), tree.right(node)):
            if child is not None:
                visit(child)

    visit(tree.root)
    return xp


def fixup(ctx: LabelContext) -> LabelContext:
    """Bound every clique parent's node depth by its child's plus one.

    Fills the primed maps on the context: new node assignments (always
    ancestors of the originals), their bags, and fresh per-bag colours.
    """
    xp, bags_p, psi_p = {}, {}, {}
    cliques = {v: frozenset(ctx.tt.cliques[v]) for v in ctx.tt.order}
    for y in range(1, ctx.h + 1):
        xp[y] = run_fixup_pass(ctx.trees[y], ctx.x[y], cliques, ctx.s_plus[y], ctx.rank.__getitem__)
        for v in ctx.s_plus[y]:
            if not ctx.trees[y].is_ancestor(xp[y][v], ctx.x[y][v]):
                raise AssertionError(f"fixup moved {v!r} off its root path in row {y}")
        bags_p[y] = _group_bags(xp[y], ctx.rank)
        psi_p[y] = _first_fit(bags_p[y])
    ctx.xp, ctx.bags_p, ctx.psi_p = xp, bags_p, psi_p
    _check_root_paths(ctx, primed=True)
    for y in range(1, ctx.h + 1):
        present = set(ctx.s_plus[y])
        for v in ctx.s_plus[y]:
            for w in ctx.tt.cliques[v]:
                if w in present and ctx.trees[y].depth(xp[y][w]) > ctx.trees[y].depth(xp[y][v]) + 1:
                    raise AssertionError(f"parent {w!r} of {v!r} still too deep in row {y}")
    return ctx


def bag_stats(ctx: LabelContext) -> dict:
    """Bag-size measurements against the polylog reference curve.

    On hosts of at most 40 vertices the report also certifies the two
    counting facts behind the bound: clique-hop reachability within
    distance d stays under C(d+t, t), and each post-fixup bag is covered
    by pre-fixup bags of the node's ancestors weighted by those counts.
    """
    if ctx.xp is None:
        raise ValueError("run fixup before asking for bag statistics")
    t = ctx.params.t
    max_bag = max(len(m) for y in ctx.bags for m in ctx.bags[y].values())
    max_bag_p = max(len(m) for y in ctx.bags_p for m in ctx.bags_p[y].values())
    nref = max(ctx.params.n, 4)
    report = {
        "rows": ctx.h,
        "max_bag": max_bag,
        "max_bag_fixed": max_bag_p,
        "reference": t * math.log2(nref) ** (t + 2),
    }
    if ctx.tt.n <= 40:
        for v in ctx.tt.order:
            for dist in range(4):
                found = len(ctx.tt.reachable_ancestors(v, dist))
                if found > ctx.tt.ancestor_count_bound(dist):
                    raise AssertionError(f"{found} vertices reachable from {v!r} within {dist} hops")
        for y in range(1, ctx.h + 1):
            tree = ctx.trees[y]
            for node, members in ctx.bags_p[y].items():
                cover = 0
                for d in range(tree.depth(node) + 1):
                    anc = _ancestor_at_depth(tree, node, tree.depth(node) - d)
                    cover += len(ctx.bags[y].get(anc, [])) * comb(d + t, t)
                if len(members) > cover:
                    raise AssertionError(f"bag at row {y} node {node} beats its ancestor covering")
        report["accounting_ok"] = True
    return report


@dataclass
class Label:
    """Decoded label; the packed bitstring is its identity."""

    scheme: str
    t: int
    alpha1: str
    hint: tuple
    sig: str
    mu: str | None
    phi: int
    depths: dict
    psi: dict
    abits: dict
    r: dict
    has_prev: bool
    has_next: bool
    codec: LcpCodec = field(repr=False, compare=False, default=None)

    def own_signature(self, b: int) -> str | None:
        """Signature of this vertex's own (post-fixup) node in row y+b."""
        base = self._base(b)
        if base is None:
            return None
        d = self.depths.get((self.phi, b))
        if d is None or d > len(base):
            return None
        return base[:d]

    def path_signature(self, b: int) -> str | None:
        """Signature of the deepest clique-parent node in row y+b."""
        base = self._base(b)
        if base is None:
            return None
        if self.scheme == "legacy":
            return base
        return self.own_signature(b) + self.r.get(b, "")

    def _base(self, b: int) -> str | None:
        if b == 0:
            return self.sig
        if b == 1 and self.has_next and self.mu is not None:
            return self.codec.decode(self.sig, self.mu)
        return None


class LegacyLabel(Label):
    """Label shipping the full clique path signature, no fixup."""


def make_label(ctx: LabelContext, v, y: int) -> Label:
    if ctx.xp is None:
        raise ValueError("run fixup before labelling")
    return _label(ctx, v, y, "fixed")


def make_label_legacy(ctx: LabelContext, v, y: int) -> LegacyLabel:
    return _label(ctx, v, y, "legacy")


def _label(ctx: LabelContext, v, y: int, scheme: str):
    if (v, y) not in ctx.inv:
        raise ValueError(f"({v!r}, {y}) is not a vertex of the instance")
    primed = scheme == "fixed"
    t, J = ctx.params.t, ctx.params.codec
    if primed:
        base = ctx.sig(y, ctx.x[y][v])
        following = ctx.sig(y + 1, ctx.x[y + 1][v]) if y < ctx.h else None
    else:
        base = ctx.path_string(y, v, primed=False)
        following = ctx.path_string(y + 1, v, primed=False) if y < ctx.h else None
    mu = None
    if following is not None:
        mu = J.encode(base, following)
        if J.decode(base, mu) != following:
            raise AssertionError(f"transition code for {v!r}@{y} does not round-trip")

    parents = ctx.tt.parents(v)
    depths, psi, abits, rsuf = {}, {}, {}, {}
    for b in (-1, 0, 1):
        yb = y + b
        if not 1 <= yb <= ctx.h:
            continue
        tree = ctx.trees[yb]
        for i in range(1, t + 2):
            p = parents.get(i)
            if p is None:
                continue
            depths[(i, b)] = tree.depth(ctx.node(yb, p, primed))
            psi[(i, b)] = ctx.slot(yb, p, primed)
            abits[(i, b)] = 1 if frozenset(((v, y), (p, yb))) in ctx.edge_set else 0
        if primed:
            rsuf[b] = ctx.r_string(yb, v)

    cls = Label if primed else LegacyLabel
    return cls(
        scheme=scheme,
        t=t,
        alpha1=ctx.alpha1[y],
        hint=ctx.hint[y],
        sig=base,
        mu=mu,
        phi=ctx.tt.colour[v],
        depths=depths,
        psi=psi,
        abits=abits,
        r=rsuf,
        has_prev=y > 1,
        has_next=y < ctx.h,
        codec=J,
    )


_HINT_CODES = {"end": 0, "strip": 1, "append": 2}
_HINT_KINDS = {c: k for k, c in _HINT_CODES.items()}


def pack_label(label: Label, params: LabelParams) -> str:
    """Serialize in field order with fixed-width depths; bit-exact."""
    w = BitWriter()
    w.bits("1" if label.scheme == "legacy" else "0")
    w.bits("1" if label.has_prev else "0")
    w.bits("1" if label.has_next else "0")
    w.prefixed(label.alpha1)
    kind, delta = label.hint
    w.fixed(_HINT_CODES[kind], 2)
    if kind != "end":
        w.gamma(delta + 1)
    w.prefixed(label.sig)
    if label.has_next:
        w.prefixed(label.mu)
    w.fixed(label.phi - 1, params.phi_bits)
    absent = (1 << params.depth_bits) - 1
    for i, b in _slots(label):
        w.fixed(label.depths.get((i, b), absent), params.depth_bits)
    for i, b in _slots(label):
        if (i, b) in label.psi:
            w.gamma(label.psi[(i, b)])
    for i, b in _slots(label):
        w.bits(str(label.abits.get((i, b), 0)))
    if label.scheme != "legacy":
        for b in (-1, 0, 1):
            if (b == -1 and not label.has_prev) or (b == 1 and not label.has_next):
                continue
            rv = label.r.get(b, "")
            w.bits("0" if rv == "" else "1" + rv)
    return w.getvalue()


def _slots(label: Label):
    for b in (-1, 0, 1):
        if (b == -1 and not label.has_prev) or (b == 1 and not label.has_next):
            continue
        for i in range(1, label.t + 2):
            yield i, b


def unpack_label(bits: str, params: LabelParams) -> Label:
    """Inverse of pack_label; malformed input raises, never misreads."""
    try:
        return _unpack(bits, params)
    except (ValueError, KeyError, IndexError) as exc:
        raise ValueError(f"undecodable label: {exc}") from None


def _unpack(bits: str, params: LabelParams) -> Label:
    r = BitReader(bits)
    scheme = "legacy" if r.bits(1) == "1" else "fixed"
    has_prev = r.bits(1) == "1"
    has_next = r.bits(1) == "1"
    alpha1 = r.prefixed()
    kind = _HINT_KINDS[r.fixed(2)]
    delta = r.gamma() - 1 if kind != "end" else 0
    sig = r.prefixed()
    mu = r.prefixed() if has_next else None
    phi = r.fixed(params.phi_bits) + 1
    if phi > params.t + 1:
        raise ValueError(f"colour {phi} out of range")
    shell = Label(scheme, params.t, alpha1, (kind, delta), sig, mu, phi, {}, {}, {}, {}, has_prev, has_next)
    absent = (1 << params.depth_bits) - 1
    depths = {}
    for i, b in _slots(shell):
        d = r.fixed(params.depth_bits)
        if d != absent:
            if d > params.maxheight:
                raise ValueError(f"depth {d} beyond layout cap")
            depths[(i, b)] = d
    psi = {}
    for i, b in _slots(shell):
        if (i, b) in depths:
            psi[(i, b)] = r.gamma()
    abits = {}
    for i, b in _slots(shell):
        abits[(i, b)] = int(r.bits(1))
    rsuf = {}
    if scheme != "legacy":
        for b in (-1, 0, 1):
            if (b == -1 and not has_prev) or (b == 1 and not has_next):
                continue
            rsuf[b] = "" if r.bits(1) == "0" else r.bits(1)
    if not r.at_end():
        raise ValueError("trailing bits")
    if (phi, 0) not in depths:
        raise ValueError("own colour slot missing")
    return type(shell)(
        scheme, params.t, alpha1, (kind, delta), sig, mu, phi,
        depths, psi, abits, rsuf, has_prev, has_next, codec=params.codec,
    ) if scheme == "fixed" else LegacyLabel(
        scheme, params.t, alpha1, (kind, delta), sig, mu, phi,
        depths, psi, abits, rsuf, has_prev, has_next, codec=params.codec,
    )


def _next_alpha(label: Label) -> str | None:
    kind, delta = label.hint
    if kind == "end":
        return None
    if kind == "append":
        return label.alpha1 + "1" + "0" * delta
    cut = len(label.alpha1) - delta - 1
    if cut < 0 or label.alpha1[cut] != "0" or set(label.alpha1[cut + 1:]) - {"1"}:
        raise ValueError("undecodable label: successor hint contradicts the row signature")
    return label.alpha1[:cut]


def adjacency_test(l1: Label, l2: Label) -> bool:
    """Decide adjacency of the two labelled vertices from labels alone.

    Row signatures classify the pair: same row, consecutive rows (either
    order), or too far apart.  Within reach, each side is checked as a
    clique parent of the other by comparing the recovered node signature
    and bag colour against the stored parent slots; a hit reads the
    matching adjacency bit, no hit means no host edge.
    """
    if l1.scheme != l2.scheme or l1.t != l2.t:
        raise ValueError("labels come from different schemes")
    if l1.alpha1 == l2.alpha1:
        duos = ((l1, 0, l2, 0), (l2, 0, l1, 0))
    elif _next_alpha(l1) == l2.alpha1:
        duos = ((l1, 1, l2, 0), (l2, 0, l1, 1))
    elif _next_alpha(l2) == l1.alpha1:
        duos = ((l2, 1, l1, 0), (l1, 0, l2, 1))
    else:
        return False
    for la, ba, lb, bb in duos:
        bit = _parent_bit(la, ba, lb, bb)
        if bit is not None:
            return bool(bit)
    return False


def _parent_bit(la: Label, ba: int, lb: Label, bb: int):
    """Adjacency bit of lb for slot i if la's vertex is its colour-i parent."""
    sa = la.own_signature(ba)
    ca = la.psi.get((la.phi, ba))
    pstr = lb.path_signature(bb)
    if sa is None or ca is None or pstr is None:
        return None
    delta = bb - ba  # row offset of la's vertex relative to lb's
    for i in range(1, lb.t + 2):
        d = lb.depths.get((i, bb))
        if d is None or d > len(pstr):
            continue
        if pstr[:d] == sa and lb.psi.get((i, bb)) == ca:
            return lb.abits.get((i, delta), 0)
    return None


@dataclass
class LabelledInstance:
    """One instance's labels, packed strings, and graph for ground truth."""

    params: LabelParams
    scheme: str
    lam: int
    labels: dict
    packed: dict
    graph: Graph

    def write_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(
                json.dumps(
                    {
                        "kind": "labels",
                        "version": self.params.version,
                        "n": self.params.n,
                        "t": self.params.t,
                        "maxheight": self.params.maxheight,
                        "codec_id": self.params.codec.codec_id,
                        "lam": self.lam,
                        "scheme": self.scheme,
                        "count": len(self.packed),
                    }
                )
                + "\n"
            )
            for g in sorted(self.packed, key=repr):
                fh.write(json.dumps({"v": g, "bits": self.packed[g]}) + "\n")
            for a, b in self.graph.edges():
                fh.write(json.dumps({"ge": [a, b]}) + "\n")

    @classmethod
    def read_jsonl(cls, path) -> "LabelledInstance":
        with open(path) as fh:
            head = json.loads(fh.readline())
            if head.get("kind") != "labels":
                raise ValueError("not a label file")
            params = LabelParams(n=head["n"], t=head["t"], version=head["version"], maxheight=head["maxheight"])
            if params.codec.codec_id != head["codec_id"]:
                raise ValueError("codec mismatch")
            packed, edges = {}, []
            for line in fh:
                rec = json.loads(line)
                if "v" in rec:
                    v = tuple(rec["v"]) if isinstance(rec["v"], list) else rec["v"]
                    packed[v] = rec["bits"]
                else:
                    a, b = rec["ge"]
                    edges.append((tuple(a) if isinstance(a, list) else a, tuple(b) if isinstance(b, list) else b))
        graph = Graph(packed, name="labelled instance")
        for a, b in edges:
            graph.add_edge(a, b)
        labels = {g: unpack_label(bits, params) for g, bits in packed.items()}
        return cls(params, head["scheme"], head["lam"], labels, packed, graph)


def label_instance(ctx: LabelContext, scheme: str = "fixed") -> LabelledInstance:
    """Label every vertex and run the per-instance assertion suite."""
    make = make_label if scheme == "fixed" else make_label_legacy
    coords = ctx.instance.witness.coords
    labels, packed = {}, {}
    for g in sorted(coords, key=repr):
        v, y = coords[g]
        lab = make(ctx, v, y)
        labels[g] = lab
        packed[g] = pack_label(lab, ctx.params)
        back = unpack_label(packed[g], ctx.params)
        if pack_label(back, ctx.params) != packed[g]:
            raise AssertionError(f"label of {g!r} does not survive a pack round-trip")
    seen = {}
    for g, bits in packed.items():
        if bits in seen:
            raise AssertionError(f"vertices {seen[bits]!r} and {g!r} share a label")
        seen[bits] = g
    return LabelledInstance(ctx.params, scheme, ctx.ts_lambda, labels, packed, ctx.instance.graph)


def verify_labelling(li: LabelledInstance) -> int:
    """Check every vertex pair against the tester; returns pairs checked."""
    keys = sorted(li.labels, key=repr)
    checked = 0
    for g1, g2 in combinations(keys, 2):
        got = adjacency_test(li.labels[g1], li.labels[g2])
        want = li.graph.has_edge(g1, g2)
        if got != want:
            raise AssertionError(f"pair {g1!r},{g2!r}: tester says {got}, instance says {want}")
        checked += 1
    return checked


def assemble_universal(corpus: list) -> Graph:
    """Union the corpus labels into one graph wired by the tester.

    Vertices are the distinct packed labels; candidate pairs are pruned
    to equal or successor row signatures, which the tester requires
    anyway.  Every corpus member is then re-checked to be an induced
    subgraph through its own labels.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    first = corpus[0]
    for li in corpus[1:]:
        if li.params != first.params or li.scheme != first.scheme:
            raise ValueError("corpus labelled with different parameters")
    packs = sorted({bits for li in corpus for bits in li.packed.values()})
    decoded = {bits: unpack_label(bits, first.params) for bits in packs}
    un = Graph(packs, name=f"universal(n={first.params.n}, t={first.params.t})")
    by_alpha = defaultdict(list)
    for bits in packs:
        by_alpha[decoded[bits].alpha1].append(bits)
    for bucket in by_alpha.values():
        for b1, b2 in combinations(bucket, 2):
            if adjacency_test(decoded[b1], decoded[b2]):
                un.add_edge(b1, b2)
    for b1 in packs:
        succ = _next_alpha(decoded[b1])
        for b2 in by_alpha.get(succ, ()) if succ is not None else ():
            if adjacency_test(decoded[b1], decoded[b2]):
                un.add_edge(b1, b2)
    for li in corpus:
        keys = sorted(li.packed, key=repr)
        for g1, g2 in combinations(keys, 2):
            if un.has_edge(li.packed[g1], li.packed[g2]) != li.graph.has_edge(g1, g2):
                raise AssertionError(f"instance pair {g1!r},{g2!r} is not induced faithfully")
    return un


def growth_report(un: Graph, params: LabelParams) -> dict:
    """Measured size against the near-linear reference curve."""
    n = max(params.n, 4)
    ln = math.log2(n)
    reference = n * 2 ** math.sqrt(ln * math.log2(ln)) * ln ** (params.t**2)
    return {
        "vertices": un.n,
        "edges": un.m,
        "reference": reference,
        "vertices_within": un.n <= reference,
        "edges_within": un.m <= reference,
    }
