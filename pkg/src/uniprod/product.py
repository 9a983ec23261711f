"""Simple graphs, strong products, and product-membership witnesses.

A witness records an injection of a graph's vertices into coordinate
tuples over a list of host factors; validity means every edge maps to a
pair that is equal-or-adjacent in every coordinate and differs somewhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Iterable


class Graph:
    """Undirected simple graph over hashable vertex ids."""

    def __init__(self, vertices: Iterable = (), edges: Iterable = (), name: str = ""):
        self.name = name
        self._adj: dict[Hashable, set] = {}
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    def add_vertex(self, v) -> None:
        self._adj.setdefault(v, set())

    def add_edge(self, u, v) -> None:
        if u == v:
            raise ValueError(f"loop at {u!r}")
        self._adj.setdefault(u, set()).add(v)
        self._adj.setdefault(v, set()).add(u)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self._adj.values()) // 2

    def vertices(self):
        return self._adj.keys()

    def edges(self):
        seen = set()
        for u, nbrs in self._adj.items():
            for v in nbrs:
                e = frozenset((u, v))
                if e not in seen:
                    seen.add(e)
                    yield u, v

    def has_vertex(self, v) -> bool:
        return v in self._adj

    def has_edge(self, u, v) -> bool:
        return u in self._adj and v in self._adj[u]

    def neighbors(self, v):
        return self._adj[v]

    def degree_sequence(self) -> list[int]:
        return sorted((len(s) for s in self._adj.values()), reverse=True)

    def induced_subgraph(self, keep) -> "Graph":
        keep = set(keep)
        g = Graph(keep, name=self.name)
        for u, v in self.edges():
            if u in keep and v in keep:
                g.add_edge(u, v)
        return g

    def __repr__(self):
        return f"Graph({self.n} vertices, {self.m} edges{', ' + self.name if self.name else ''})"

    def write_jsonl(self, path) -> None:
        """Graph file: a header line then one record per edge (dense int ids)."""
        index = {v: i for i, v in enumerate(sorted(self._adj, key=repr))}
        with open(path, "w") as fh:
            fh.write(json.dumps({"kind": "graph", "n": self.n, "name": self.name}) + "\n")
            for u, v in sorted((min(index[a], index[b]), max(index[a], index[b])) for a, b in self.edges()):
                fh.write(json.dumps({"edge": [u, v]}) + "\n")

    @classmethod
    def read_jsonl(cls, path) -> "Graph":
        with open(path) as fh:
            head = json.loads(fh.readline())
            if head.get("kind") != "graph":
                raise ValueError("not a graph file")
            g = cls(range(head["n"]), name=head.get("name", ""))
            for line in fh:
                rec = json.loads(line)
                g.add_edge(*rec["edge"])
        return g


def path_graph(h: int) -> Graph:
    return Graph(range(1, h + 1), ((i, i + 1) for i in range(1, h)), name=f"P_{h}")


def complete_graph(k: int) -> Graph:
    return Graph(range(1, k + 1), ((i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)), name=f"K_{k}")


def strong_product(a: Graph, b: Graph) -> Graph:
    """Strong product: coordinates pairwise equal-or-adjacent, not all equal."""
    g = Graph(((u, v) for u in a.vertices() for v in b.vertices()), name=f"({a.name})x({b.name})")
    for u1, v1 in g.vertices():
        for u2 in (*a.neighbors(u1), u1):
            for v2 in (*b.neighbors(v1), v1):
                if (u1, v1) != (u2, v2):
                    g.add_edge((u1, v1), (u2, v2))
    return g


# Host factors: anything exposing vertex membership and an adjacency test.


class PathFactor:
    def __init__(self, h: int):
        if h < 1:
            raise ValueError("path length >= 1")
        self.h = h

    @property
    def n(self):
        return self.h

    def has_vertex(self, v):
        return isinstance(v, int) and 1 <= v <= self.h

    def adjacent(self, u, v):
        return abs(u - v) == 1

    def vertices(self):
        return range(1, self.h + 1)

    def __repr__(self):
        return f"PathFactor({self.h})"


class CliqueFactor:
    def __init__(self, k: int):
        if k < 1:
            raise ValueError("clique size >= 1")
        self.k = k

    @property
    def n(self):
        return self.k

    def has_vertex(self, v):
        return isinstance(v, int) and 1 <= v <= self.k

    def adjacent(self, u, v):
        return u != v

    def vertices(self):
        return range(1, self.k + 1)

    def __repr__(self):
        return f"CliqueFactor({self.k})"


class ExplicitFactor:
    def __init__(self, graph: Graph):
        self.graph = graph

    @property
    def n(self):
        return self.graph.n

    def has_vertex(self, v):
        return self.graph.has_vertex(v)

    def adjacent(self, u, v):
        return self.graph.has_edge(u, v)

    def vertices(self):
        return self.graph.vertices()

    def __repr__(self):
        return f"ExplicitFactor({self.graph!r})"


class WitnessError(ValueError):
    pass


@dataclass
class ProductWitness:
    graph: Graph
    factors: tuple
    coords: dict

    def validate(self) -> None:
        """Raise WitnessError unless this is a valid product embedding."""
        n = len(self.factors)
        if set(self.coords) != set(self.graph.vertices()):
            raise WitnessError("coordinate map does not cover the vertex set")
        seen = {}
        for v, c in self.coords.items():
            if len(c) != n:
                raise WitnessError(f"coordinate arity mismatch at {v!r}")
            for f, x in zip(self.factors, c):
                if not f.has_vertex(x):
                    raise WitnessError(f"coordinate {x!r} outside factor {f!r}")
            if c in seen:
                raise WitnessError(f"vertices {seen[c]!r} and {v!r} collide at {c}")
            seen[c] = v
        for u, v in self.graph.edges():
            cu, cv = self.coords[u], self.coords[v]
            for f, x, y in zip(self.factors, cu, cv):
                if x != y and not f.adjacent(x, y):
                    raise WitnessError(f"edge {u!r}{v!r}: {x!r},{y!r} not equal or adjacent in {f!r}")
            # all-equal is impossible here: coords are injective

    def used(self, i: int) -> set:
        return {c[i] for c in self.coords.values()}


def trim_witness(w: ProductWitness) -> ProductWitness:
    """Restrict factors to used coordinates.

    Path factors are compacted monotonically onto 1..h' (consecutive used
    rows stay consecutive, so validity is preserved); other factors become
    explicit induced subgraphs on the used values.
    """
    w.validate()
    new_factors = []
    maps = []
    for i, f in enumerate(w.factors):
        used = w.used(i)
        if isinstance(f, PathFactor):
            order = {r: k + 1 for k, r in enumerate(sorted(used))}
            new_factors.append(PathFactor(len(used)))
            maps.append(order.__getitem__)
        else:
            sub = Graph(used)
            for u in used:
                for v in used:
                    if u != v and f.adjacent(u, v) and not sub.has_edge(u, v):
                        sub.add_edge(u, v)
            new_factors.append(ExplicitFactor(sub))
            maps.append(lambda x: x)
    coords = {v: tuple(m(x) for m, x in zip(maps, c)) for v, c in w.coords.items()}
    out = ProductWitness(w.graph, tuple(new_factors), coords)
    out.validate()
    return out


def lift_embedding(row_embed: dict, new_factors, w: ProductWitness) -> ProductWitness:
    """Replace the first coordinate through an embedding of the first factor.

    row_embed maps each used first-coordinate value to a vertex of the new
    host (a tuple when the host is itself a product, matching new_factors).
    It must be injective and carry the first factor's edges to host edges.
    """
    new_factors = tuple(new_factors)
    first = w.factors[0]
    used = w.used(0)
    if not used <= set(row_embed):
        raise WitnessError("row_embed misses used first-factor vertices")

    def coord(x):
        c = row_embed[x]
        return c if isinstance(c, tuple) else (c,)

    if len({coord(x) for x in used}) != len(used):
        raise WitnessError("row_embed not injective")
    for u in used:
        for v in used:
            if u != v and first.adjacent(u, v):
                cu, cv = coord(u), coord(v)
                for f, x, y in zip(new_factors, cu, cv):
                    if x != y and not f.adjacent(x, y):
                        raise WitnessError(f"row_embed breaks edge {u!r}{v!r} in {f!r}")
    coords = {v: coord(c[0]) + c[1:] for v, c in w.coords.items()}
    out = ProductWitness(w.graph, new_factors + tuple(w.factors[1:]), coords)
    out.validate()
    return out


def validate_subgraph_embedding(g: Graph, mapping: dict, host: Graph) -> None:
    """Check mapping is injective and carries every edge of g to a host edge."""
    if set(mapping) != set(g.vertices()):
        raise WitnessError("mapping does not cover the vertex set")
    if len(set(mapping.values())) != g.n:
        raise WitnessError("mapping not injective")
    for v, x in mapping.items():
        if not host.has_vertex(x):
            raise WitnessError(f"image {x!r} of {v!r} not in host")
    for u, v in g.edges():
        if not host.has_edge(mapping[u], mapping[v]):
            raise WitnessError(f"edge {u!r}{v!r} not preserved")
