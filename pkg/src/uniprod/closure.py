"""Closures of complete binary trees and interval-graph embeddings.

The closure of the complete binary tree of height d joins every node to
all of its ancestors.  With nodes numbered 1..2^(d+1)-1 in symmetric
order, all tree relations reduce to arithmetic on trailing zeros, so the
graph never has to be materialized to be queried.

Interval graphs with clique number w embed into the strong product of
such a closure with K_w by balanced separator recursion; that embedding
is the workhorse behind the small-treewidth hosts elsewhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable

from .bitcore import Bst
from .product import CliqueFactor, Graph, ProductWitness


def _tz(v: int) -> int:
    return (v & -v).bit_length() - 1


class ClosureGraph:
    """Closure of the complete binary tree with nodes 1..2^(d+1)-1.

    Node v sits at depth d - j where j is the number of trailing zero
    bits of v; its subtree covers exactly [v - 2^j + 1, v + 2^j - 1].
    """

    def __init__(self, d: int):
        if d < 0:
            raise ValueError("height must be >= 0")
        self.d = d
        self.root = 1 << d

    @property
    def n(self) -> int:
        return (1 << (self.d + 1)) - 1

    def has_vertex(self, v) -> bool:
        return isinstance(v, int) and 1 <= v <= self.n

    def vertices(self):
        return range(1, self.n + 1)

    def depth(self, v: int) -> int:
        return self.d - _tz(v)

    def descendant_interval(self, v: int) -> tuple[int, int]:
        j = _tz(v)
        return v - (1 << j) + 1, v + (1 << j) - 1

    def children(self, v: int) -> tuple[int, ...]:
        j = _tz(v)
        if j == 0:
            return ()
        return v - (1 << (j - 1)), v + (1 << (j - 1))

    def parent(self, v: int) -> int | None:
        if v == self.root:
            return None
        j = _tz(v)
        # the parent is the neighbour at the next level whose subtree contains v
        up = v + (1 << j)
        return up if _tz(up) == j + 1 else v - (1 << j)

    def is_ancestor(self, u: int, v: int) -> bool:
        """True when u lies on the root path of v (u == v counts)."""
        lo, hi = self.descendant_interval(u)
        return lo <= v <= hi

    def root_path(self, v: int) -> list[int]:
        """Ancestors of v from the root down to v itself."""
        path = [self.root]
        while path[-1] != v:
            j = _tz(path[-1]) - 1
            path.append(path[-1] + (1 << j) if v > path[-1] else path[-1] - (1 << j))
        return path

    def adjacent(self, u: int, v: int) -> bool:
        return u != v and (self.is_ancestor(u, v) or self.is_ancestor(v, u))

    def top_in_range(self, lo: int, hi: int) -> int:
        """The unique minimum-depth node with lo <= v <= hi."""
        if not (1 <= lo <= hi <= self.n):
            raise ValueError(f"bad range [{lo}, {hi}]")
        v = self.root
        while not lo <= v <= hi:
            j = _tz(v) - 1
            v += (1 << j) if lo > v else -(1 << j)
        return v

    def graph(self) -> Graph:
        g = Graph(self.vertices(), name=f"C_{self.d}")
        for v in self.vertices():
            for u in self.root_path(v)[:-1]:
                g.add_edge(u, v)
        return g

    def __repr__(self):
        return f"ClosureGraph(d={self.d})"


def min_depth_in_range(t: Bst, lo, hi):
    """The unique shallowest key of t lying in [lo, hi].

    Standard root descent: the first node whose key falls inside the
    range is an ancestor of every other in-range key, hence the minimum
    depth is unique.  Raises if no key of t lies in the range.
    """
    node = t.root
    while node is not None:
        if node < lo:
            node = t.right(node)
        elif node > hi:
            node = t.left(node)
        else:
            return node
    raise ValueError(f"no key of the tree lies in [{lo!r}, {hi!r}]")


# ---------------------------------------------------------------------------
# Interval representations


@dataclass
class IntervalRep:
    """Closed intervals [a_v, b_v] with rational endpoints, one per vertex."""

    intervals: dict[Hashable, tuple[Fraction, Fraction]]

    def __post_init__(self):
        norm = {}
        for v, (a, b) in self.intervals.items():
            a, b = Fraction(a), Fraction(b)
            if a > b:
                raise ValueError(f"empty interval for {v!r}")
            norm[v] = (a, b)
        self.intervals = norm

    @property
    def n(self) -> int:
        return len(self.intervals)

    def meets(self, u, v) -> bool:
        au, bu = self.intervals[u]
        av, bv = self.intervals[v]
        return max(au, av) <= min(bu, bv)

    def intersection_graph(self) -> Graph:
        vs = list(self.intervals)
        g = Graph(vs, name="interval graph")
        for i, u in enumerate(vs):
            for v in vs[i + 1 :]:
                if self.meets(u, v):
                    g.add_edge(u, v)
        return g

    def clique_number(self) -> int:
        """Maximum point load; attained at a left endpoint by Helly."""
        if not self.intervals:
            return 0
        # starts open before ends at the same coordinate (closed intervals)
        events = []
        for a, b in self.intervals.values():
            events.append((a, 0))
            events.append((b, 1))
        events.sort()
        best = cur = 0
        for _, kind in events:
            if kind == 0:
                cur += 1
                best = max(best, cur)
            else:
                cur -= 1
        return best

    def left_order(self) -> list:
        """Vertices by left endpoint, ties broken by repr for determinism."""
        return sorted(self.intervals, key=lambda v: (self.intervals[v][0], repr(v)))

    def write_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(json.dumps({"kind": "intervals", "n": self.n}) + "\n")
            for v, (a, b) in self.intervals.items():
                fh.write(
                    json.dumps(
                        {
                            "v": v,
                            "a": [a.numerator, a.denominator],
                            "b": [b.numerator, b.denominator],
                        }
                    )
                    + "\n"
                )

    @classmethod
    def read_jsonl(cls, path) -> "IntervalRep":
        ivs = {}
        with open(path) as fh:
            head = json.loads(fh.readline())
            if head.get("kind") != "intervals":
                raise ValueError("not an interval file")
            for line in fh:
                rec = json.loads(line)
                v = rec["v"]
                if isinstance(v, list):
                    v = tuple(v)
                ivs[v] = (Fraction(*rec["a"]), Fraction(*rec["b"]))
        return cls(ivs)


def perturb_left_endpoints(rep: IntervalRep) -> IntervalRep:
    """Make left endpoints pairwise distinct, keeping the same graph.

    Already-distinct representations pass through unchanged.  Otherwise
    everything is cleared to integers, stretched by m+1, and each left
    endpoint is offset by the vertex's rank while every right endpoint
    gets the full offset m; order comparisons between old endpoints are
    unchanged because all offsets are below the stretch factor.
    """
    lefts = [a for a, _ in rep.intervals.values()]
    if len(set(lefts)) == len(lefts):
        return IntervalRep(dict(rep.intervals))
    m = rep.n
    scale = 1
    for a, b in rep.intervals.values():
        scale = math.lcm(scale, a.denominator, b.denominator)
    out = {}
    for r, v in enumerate(rep.left_order()):
        a, b = rep.intervals[v]
        out[v] = (Fraction((m + 1) * a * scale + r), Fraction((m + 1) * b * scale + m))
    return IntervalRep(out)


def interval_separator(rep: IntervalRep, omega: int):
    """Split on the median left endpoint.

    Returns (x1, x2, z): z is the clique of intervals covering the
    (n // 2 + 1)-th smallest left endpoint, and no interval of x1 meets
    any interval of x2.  Both sides have at most n // 2 vertices and z
    has at most omega.  Left endpoints must be pairwise distinct.
    """
    order = rep.left_order()
    n = len(order)
    if n == 0:
        return [], [], set()
    lefts = [rep.intervals[v][0] for v in order]
    if len(set(lefts)) != n:
        raise ValueError("left endpoints must be distinct; perturb first")
    pivot = lefts[n // 2]
    z = {v for v, (a, b) in rep.intervals.items() if a <= pivot <= b}
    if len(z) > omega:
        raise ValueError(f"separator clique has {len(z)} > omega = {omega} members")
    x1 = [v for v in order[: n // 2] if v not in z]
    x2 = [v for v in order[n // 2 + 1 :] if v not in z]
    return x1, x2, z


def embed_interval_graph(
    rep: IntervalRep, omega: int | None = None, n: int | None = None
) -> ProductWitness:
    """Embed the intersection graph into closure(ceil(log2 n)) x K_omega.

    Separator recursion: the separator clique goes to a tree node with
    distinct colours, the two sides go to the two child subtrees.  A
    subtree of height h absorbs up to 2^(h+1)-1 vertices, so the height
    ceil(log2 n) derived from the default n = rep.n is always enough.
    """
    rep = perturb_left_endpoints(rep)
    w = rep.clique_number()
    if omega is None:
        omega = max(1, w)
    elif omega < w:
        raise ValueError(f"clique number {w} exceeds omega {omega}")
    if n is None:
        n = rep.n
    elif n < rep.n:
        raise ValueError(f"n = {n} below vertex count {rep.n}")
    d = (n - 1).bit_length() if n else 0
    host = ClosureGraph(d)
    coords = {}

    def place(sub: dict, node: int) -> None:
        if not sub:
            return
        x1, x2, z = interval_separator(IntervalRep(sub), omega)
        for c, v in enumerate(sorted(z, key=repr), start=1):
            coords[v] = (node, c)
        kids = host.children(node)
        if x1:
            place({v: sub[v] for v in x1}, kids[0])
        if x2:
            place({v: sub[v] for v in x2}, kids[1])

    place(dict(rep.intervals), host.root)
    witness = ProductWitness(rep.intersection_graph(), (host, CliqueFactor(omega)), coords)
    witness.validate()
    return witness
