"""The explicit universal graph and its embedding machinery.

Vertices are triples (x, y, z): two bitstrings naming positions in a
per-row tree and in a tree over the rows, plus a depth coordinate used
only to keep embeddings injective.  Adjacency is pure bit arithmetic, so
the graph exists implicitly at any size; small instances can also be
materialized to check the counting bounds.  embed realizes an arbitrary
subgraph of closure(d) x P_h in here, and embed_qt runs the whole
small-treewidth pipeline, landing in an implicit clique product.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

from .bitcore import (
    build_biased_bst,
    check_bits,
    compatible,
    is_prefix,
    lcp_len,
    successor_set,
)
from .closure import ClosureGraph, min_depth_in_range
from .decomp import QtInstance, tree_to_path_decomposition, ttree_from_decomposition
from .decomp import path_decomposition_to_intervals
from .closure import embed_interval_graph
from .product import Graph, PathFactor, ProductWitness
from .treeseq import LcpCodec, build_tree_sequence, lambda_default


@dataclass(frozen=True)
class UgParams:
    """Size parameters: n fixes d = ceil(log2 n), lam is the code slack.

    lam defaults to the smallest value that lets embed certify every
    transition with the default codec (one code is a length field plus a
    suffix of a signature, so width + d + 2 bits always suffice).
    """

    n: int
    lam: int | None = None
    codec: LcpCodec | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n >= 1 required")
        d = (self.n - 1).bit_length()
        if self.lam is None:
            lam = max(1, lambda_default(max(self.n, 2)))
            while True:
                need = LcpCodec(d + lam + 2).width + d + 2
                if need <= lam:
                    break
                lam = need
            object.__setattr__(self, "lam", lam)
        if self.lam < 0:
            raise ValueError("lam >= 0 required")
        if self.codec is None:
            object.__setattr__(self, "codec", LcpCodec(d + self.lam + 2))

    @property
    def d(self) -> int:
        return (self.n - 1).bit_length()

    @property
    def horizon(self) -> int:
        """Cap on row-signature lengths in the successor condition."""
        return self.d + 2

    @property
    def budget(self) -> int:
        """Cap on |x| + |y| for a vertex."""
        return self.d + self.lam + 2


def check_vertex(p: UgParams, v) -> None:
    x, y, z = v
    check_bits(x)
    check_bits(y)
    if len(x) + len(y) > p.budget:
        raise ValueError(f"|x| + |y| = {len(x) + len(y)} exceeds budget {p.budget}")
    if not 0 <= z <= p.d:
        raise ValueError(f"z = {z} outside 0..{p.d}")


def _best_prefix_keep(p: UgParams, x1: str, len_y1: int, x2: str) -> int:
    """Longest prefix of x2 recoverable from a stand-in compatible with x1.

    Stand-ins run over prefixes and extensions of x1 up to the length
    budget; only their shared prefix with x2 matters, and the length
    field of the codec caps what a code can claim.
    """
    cap = p.budget - len_y1
    reach = len(x2) if is_prefix(x1, x2) else lcp_len(x1, x2)
    return min(reach, cap, (1 << p.codec.width) - 1)


def _type2_need(p: UgParams, u, v) -> int | None:
    """Bits the cheapest type-2 certificate for u -> v takes, if any."""
    x1, y1, _ = u
    x2, y2, _ = v
    if len(y1) > p.horizon or y2 not in successor_set(y1, p.horizon):
        return None
    if p.budget - len(y1) < 0:
        return None
    return p.codec.width + len(x2) - _best_prefix_keep(p, x1, len(y1), x2)


def directed_edge(p: UgParams, u, v) -> bool:
    """The one-way condition; is_edge symmetrizes it."""
    x1, y1, _ = u
    x2, y2, _ = v
    if y1 == y2:
        return is_prefix(x2, x1)
    need = _type2_need(p, u, v)
    return need is not None and need <= p.lam


def is_edge(p: UgParams, u, v) -> bool:
    check_vertex(p, u)
    check_vertex(p, v)
    if u == v:
        return False
    return directed_edge(p, u, v) or directed_edge(p, v, u)


def is_edge_exhaustive(p: UgParams, u, v) -> bool:
    """Slow cross-check: search all stand-ins and codes directly.

    Only usable when budgets are tiny; the closed form in is_edge must
    agree with this on every pair.
    """
    check_vertex(p, u)
    check_vertex(p, v)
    if u == v:
        return False

    def one_way(a, b) -> bool:
        x1, y1, _ = a
        x2, y2, _ = b
        if y1 == y2:
            return is_prefix(x2, x1)
        if len(y1) > p.horizon or y2 not in successor_set(y1, p.horizon):
            return False
        w = p.codec.width
        for lx in range(p.budget - len(y1) + 1):
            for bits in iter_product("01", repeat=lx):
                stand_in = "".join(bits)
                if not compatible(stand_in, x1):
                    continue
                for ln in range(w, p.lam + 1):
                    for nb in iter_product("01", repeat=ln):
                        if p.codec.decode(stand_in, "".join(nb)) == x2:
                            return True
        return False

    return one_way(u, v) or one_way(v, u)


# ---------------------------------------------------------------------------
# materialization and counting


def vertex_count_bound(p: UgParams) -> int:
    return (1 << (p.budget + 1)) * (p.budget + 1) ** 2


def edge_count_bound(p: UgParams) -> int:
    return (1 << (p.d + 2 * p.lam + 5)) * (p.budget + 1) ** 6


def materialize(p: UgParams, cap: int = 200_000) -> Graph:
    """Build the graph explicitly; vertices are the (x, y, z) triples.

    Refuses when the vertex-count bound passes cap; at that point the
    implicit interface (is_edge) is the only sensible access path.
    """
    bound = vertex_count_bound(p)
    if bound > cap:
        raise ValueError(
            f"vertex bound {bound} exceeds cap {cap}; query is_edge implicitly instead"
        )
    b, d, lam = p.budget, p.d, p.lam
    by_len = [["".join(t) for t in iter_product("01", repeat=L)] for L in range(b + 1)]
    g = Graph(name=f"ug(n={p.n}, lam={lam})")
    zs = range(d + 1)
    for ly in range(b + 1):
        for y in by_len[ly]:
            for lx in range(b - ly + 1):
                for x in by_len[lx]:
                    for z in zs:
                        g.add_vertex((x, y, z))
    # type 1: prefix pairs within a row
    for ly in range(b + 1):
        for y in by_len[ly]:
            for lx in range(b - ly + 1):
                for x1 in by_len[lx]:
                    for k in range(lx + 1):
                        x2 = x1[:k]
                        for z1 in zs:
                            for z2 in zs:
                                if k == lx and z1 == z2:
                                    continue
                                g.add_edge((x1, y, z1), (x2, y, z2))
    # type 2: successor rows, enumerated by reachable targets
    w = p.codec.width
    capw = (1 << w) - 1
    for ly1 in range(min(p.horizon, b) + 1):
        for y1 in by_len[ly1]:
            budget1 = b - ly1
            for y2 in successor_set(y1, p.horizon):
                ly2 = len(y2)
                for lx2 in range(b - ly2 + 1):
                    for x2 in by_len[lx2]:
                        need = w + lx2 - lam
                        if need > min(lx2, budget1, capw):
                            continue
                        if need <= 0:
                            srcs = (
                                x
                                for lx1 in range(budget1 + 1)
                                for x in by_len[lx1]
                            )
                        else:
                            head = x2[:need]
                            srcs = [x2[:k] for k in range(min(need, budget1 + 1, lx2 + 1))]
                            srcs += [
                                head + tail
                                for lt in range(budget1 - need + 1)
                                for tail in by_len[lt]
                            ]
                        for x1 in srcs:
                            for z1 in zs:
                                for z2 in zs:
                                    g.add_edge((x1, y1, z1), (x2, y2, z2))
    return g


def degree_domination_check(g: Graph, n: int) -> bool:
    """Necessary condition on hosts of all n-vertex bounded-degree forests.

    The degree sequence, sorted descending, must pointwise dominate
    (n-1, n//2 - 1, n//3 - 1, ...), since t disjoint stars with n//t - 1
    leaves each must fit simultaneously.
    """
    if g.n < n:
        return False
    seq = g.degree_sequence()
    return all(seq[i] >= n // (i + 1) - 1 for i in range(n))


# ---------------------------------------------------------------------------
# embeddings


def embed(p: UgParams, w: ProductWitness) -> dict:
    """Map a subgraph of closure(d) x P_h injectively onto edges here.

    Per-row trees come from the tree-sequence builder over the closure
    nodes each row uses; the row tree is biased by tree sizes, so the
    two signature lengths always fit the vertex budget.  Every edge
    image is checked with is_edge; a failing transition certificate
    reports its length against lam.
    """
    if len(w.factors) != 2:
        raise ValueError("expected a closure x path witness")
    cg = w.factors[0]
    if not isinstance(cg, ClosureGraph):
        raise TypeError("first factor must be a ClosureGraph")
    if cg.d > p.d:
        raise ValueError(f"closure height {cg.d} exceeds params d = {p.d}")
    if not w.coords:
        raise ValueError("empty instance")
    rows_used = sorted({c[1] for c in w.coords.values()})
    remap = {y: i for i, y in enumerate(rows_used, start=1)}
    h = len(rows_used)
    coords = {v: (c, remap[y]) for v, (c, y) in w.coords.items()}
    occupied = [set() for _ in range(h + 1)]
    for c, i in coords.values():
        occupied[i].add(c)
    ts = build_tree_sequence([sorted(occupied[i]) for i in range(1, h + 1)], codec=p.codec)
    trees = ts.trees
    row_tree = build_biased_bst(range(1, h + 1), {i: len(trees[i - 1]) for i in range(1, h + 1)})
    zeta = {}
    for v, (c, i) in coords.items():
        lo, hi = cg.descendant_interval(c)
        node = min_depth_in_range(trees[i - 1], lo, hi)
        x = trees[i - 1].signature(node)
        y = row_tree.signature(i)
        if len(x) + len(y) > p.budget:
            raise ValueError(
                f"lambda too small: signatures take {len(x) + len(y)} bits, budget is {p.budget}"
            )
        zeta[v] = (x, y, cg.depth(c))
    if len(set(zeta.values())) != len(zeta):
        raise RuntimeError("embedding collided; depth coordinate failed to separate")
    for a, b in w.graph.edges():
        if not is_edge(p, zeta[a], zeta[b]):
            needs = [
                need
                for need in (_type2_need(p, zeta[a], zeta[b]), _type2_need(p, zeta[b], zeta[a]))
                if need is not None
            ]
            if needs and min(needs) > p.lam:
                raise ValueError(
                    f"lambda too small: transition code needs {min(needs)} bits, lam = {p.lam}"
                )
            raise RuntimeError(f"edge image {zeta[a]} - {zeta[b]} fails adjacency")
    return zeta


@dataclass
class QtEmbedding:
    """Result of the pipeline: triple plus colour per instance vertex."""

    mapping: dict
    omega: int
    params: UgParams
    projection: dict


def embed_qt(p: UgParams, inst: QtInstance) -> QtEmbedding:
    """Full pipeline into (universal graph) x K_omega, implicitly.

    Stages: complete the host's decomposition to a t-tree, convert to a
    path decomposition and intervals, embed those into closure x clique,
    project the instance through that embedding (colours absorb the
    contracted pairs), then apply embed over closure x path.
    """
    tt = ttree_from_decomposition(inst.decomposition)
    for u, v in inst.host.edges():
        if not tt.graph.has_edge(u, v):
            raise ValueError("t-tree completion lost a host edge")
    pd = tree_to_path_decomposition(tt.family_decomposition(), n=tt.n)
    rep = path_decomposition_to_intervals(pd)
    omega = max(1, rep.clique_number())
    row_witness = embed_interval_graph(rep, omega=omega)
    host_cg = row_witness.factors[0]
    if host_cg.d > p.d:
        raise ValueError(f"host closure needs d = {host_cg.d} but params give {p.d}")
    proj, colour = {}, {}
    for v, (u, y) in inst.witness.coords.items():
        node, col = row_witness.coords[u]
        proj[v] = (node, y)
        colour[v] = col
    pg = Graph(sorted(set(proj.values())), name="row projection")
    for a, b in inst.graph.edges():
        if proj[a] != proj[b]:
            pg.add_edge(proj[a], proj[b])
    pw = ProductWitness(pg, (host_cg, PathFactor(inst.h)), {q: q for q in pg.vertices()})
    pw.validate()
    zeta = embed(p, pw)
    mapping = {v: (zeta[proj[v]], colour[v]) for v in inst.graph.vertices()}
    out = QtEmbedding(mapping=mapping, omega=omega, params=p, projection=proj)
    validate_qt_embedding(p, inst, out)
    return out


def validate_qt_embedding(p: UgParams, inst: QtInstance, emb: QtEmbedding) -> None:
    """Edge-by-edge audit of a pipeline result."""
    m = emb.mapping
    if set(m) != set(inst.graph.vertices()):
        raise ValueError("mapping does not cover the instance")
    if len(set(m.values())) != len(m):
        raise ValueError("mapping is not injective")
    for v, (triple, col) in m.items():
        check_vertex(p, triple)
        if not 1 <= col <= emb.omega:
            raise ValueError(f"colour {col} outside 1..{emb.omega}")
    for a, b in inst.graph.edges():
        ta, ca = m[a]
        tb, cb = m[b]
        if ta == tb:
            if ca == cb:
                raise ValueError(f"edge {a!r}-{b!r} collapsed without a colour split")
        elif not is_edge(p, ta, tb):
            raise ValueError(f"edge {a!r}-{b!r} image is a non-edge")
