"""Hypergraphs, exact-rational measures and the uniform-spread condition.

Vertex sets are handled as sorted tuples of ints.  The canonical order on
vertex sets (used for edge lists, scans and every "first" or tie-break) is
by cardinality, then lexicographic on the sorted elements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

VertexSet = tuple[int, ...]


class ContainerError(Exception):
    """Base class for contract violations raised by this package."""


class SpreadViolation(ContainerError):
    def __init__(self, violation: "Violation"):
        self.violation = violation
        super().__init__(
            f"measure is not uniformly spread at X={list(violation.x)}: "
            f"{violation.value} > {violation.bound}"
        )


class ZeroMass(ContainerError):
    """Renormalisation was asked for on a vertex set carrying no mass."""


def canon_key(s: VertexSet) -> tuple[int, VertexSet]:
    return (len(s), s)


def as_vertex_set(vs: Iterable[int]) -> VertexSet:
    return tuple(sorted(set(int(v) for v in vs)))


def nonempty_subsets(e: VertexSet, max_size: int) -> Iterable[VertexSet]:
    for k in range(1, min(max_size, len(e)) + 1):
        yield from combinations(e, k)


@dataclass(frozen=True)
class Hypergraph:
    """A (<= max_uniformity)-graph on the index range [0, n_vertices)."""

    n_vertices: int
    max_uniformity: int
    edges: tuple[VertexSet, ...]
    _edge_sets: tuple[frozenset, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __init__(self, n_vertices: int, max_uniformity: int, edges: Iterable[Iterable[int]]):
        if n_vertices < 0 or max_uniformity < 1:
            raise ContainerError("need n_vertices >= 0 and max_uniformity >= 1")
        canon = set()
        for e in edges:
            t = tuple(sorted(int(v) for v in e))
            if len(set(t)) != len(t):
                raise ContainerError(f"edge {list(e)} repeats a vertex")
            if not 1 <= len(t) <= max_uniformity:
                raise ContainerError(f"edge {list(t)} has size outside [1, {max_uniformity}]")
            if t[0] < 0 or t[-1] >= n_vertices:
                raise ContainerError(f"edge {list(t)} leaves [0, {n_vertices})")
            canon.add(t)
        ordered = tuple(sorted(canon, key=canon_key))
        object.__setattr__(self, "n_vertices", n_vertices)
        object.__setattr__(self, "max_uniformity", max_uniformity)
        object.__setattr__(self, "edges", ordered)
        object.__setattr__(self, "_edge_sets", tuple(frozenset(e) for e in ordered))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(ordered)})

    def index_of(self, edge: VertexSet) -> int:
        return self._index[edge]

    def has_edge(self, edge: VertexSet) -> bool:
        return edge in self._index

    def edge_set(self, i: int) -> frozenset:
        return self._edge_sets[i]


@dataclass(frozen=True)
class Measure:
    """Exact probability weights on the edges of ``host``."""

    host: Hypergraph
    weights: Mapping[VertexSet, Fraction]

    def __post_init__(self):
        w = {}
        for e, x in self.weights.items():
            e = tuple(sorted(e))
            x = Fraction(x)
            if x < 0:
                raise ContainerError(f"negative weight on {list(e)}")
            if x and not self.host.has_edge(e):
                raise ContainerError(f"weight on {list(e)}, which is not an edge of the host")
            if x:
                w[e] = x
        # an edgeless host carries the empty measure
        if self.host.edges and sum(w.values(), Fraction(0)) != 1:
            raise ContainerError("weights must sum to exactly 1")
        object.__setattr__(self, "weights", w)

    def weight(self, edge: VertexSet) -> Fraction:
        return self.weights.get(edge, Fraction(0))

    def support(self) -> list[VertexSet]:
        return [e for e in self.host.edges if e in self.weights]

    def mass(self, edges: Iterable[VertexSet]) -> Fraction:
        return sum((self.weights.get(e, Fraction(0)) for e in edges), Fraction(0))


@dataclass(frozen=True)
class SpreadParams:
    p: Fraction
    k_const: Fraction

    def __post_init__(self):
        p, k = Fraction(self.p), Fraction(self.k_const)
        if not 0 < p <= 1:
            raise ContainerError(f"p must lie in (0, 1], got {p}")
        if k <= 0:
            raise ContainerError(f"K must be positive, got {k}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k_const", k)


@dataclass(frozen=True)
class Instance:
    """Hypergraph, measure and spread parameters consumed by the algorithms.

    ``universe`` is the active vertex set V (defaults to every index).  Its
    size is the N in every threshold; recursion and iteration shrink it while
    vertex ids stay fixed.
    """

    hypergraph: Hypergraph
    measure: Measure
    spread: SpreadParams
    universe: frozenset = None

    def __post_init__(self):
        if self.measure.host is not self.hypergraph and self.measure.host != self.hypergraph:
            raise ContainerError("measure is hosted on a different hypergraph")
        u = self.universe
        if u is None:
            u = frozenset(range(self.hypergraph.n_vertices))
        else:
            u = frozenset(u)
            if any(not 0 <= v < self.hypergraph.n_vertices for v in u):
                raise ContainerError("universe leaves the vertex index range")
        for e in self.hypergraph.edges:
            if not u.issuperset(e):
                raise ContainerError(f"edge {list(e)} leaves the universe")
        object.__setattr__(self, "universe", u)

    @property
    def n(self) -> int:
        return len(self.universe)

    @property
    def ell(self) -> int:
        return self.hypergraph.max_uniformity

    @cached_property
    def spread_violation(self) -> "Violation | None":
        """Memoised check_spread(self)."""
        return check_spread(self)

    def with_spread(self, p=None, k_const=None) -> "Instance":
        s = SpreadParams(self.spread.p if p is None else p,
                         self.spread.k_const if k_const is None else k_const)
        return Instance(self.hypergraph, self.measure, s, self.universe)


@dataclass(frozen=True)
class Violation:
    x: VertexSet
    value: Fraction
    bound: Fraction


def _check_vertices(x: VertexSet, n_vertices: int):
    for v in x:
        if not 0 <= v < n_vertices:
            raise ContainerError(f"vertex {v} out of range [0, {n_vertices})")


def nu_link(measure: Measure, x: Iterable[int], within: Iterable[VertexSet] | None = None) -> Fraction:
    """nu(<x> ∩ within): total weight of edges of ``within`` containing ``x``."""
    x = as_vertex_set(x)
    _check_vertices(x, measure.host.n_vertices)
    xs = set(x)
    edges = measure.weights.keys() if within is None else within
    w = measure.weights
    total = Fraction(0)
    for e in edges:
        if e in w and xs.issubset(e):
            total += w[e]
    return total


def _link_table(measure: Measure, max_size: int) -> dict[VertexSet, Fraction]:
    table: dict[VertexSet, Fraction] = {}
    for e, x in measure.weights.items():
        for s in nonempty_subsets(e, max_size):
            table[s] = table.get(s, Fraction(0)) + x
    return table


def check_spread(instance: Instance) -> Violation | None:
    """Return None if the measure is (p, K)-uniformly spread, else the first violation.

    Only X inside some support edge can fail; all others have zero link.
    """
    n = instance.n
    p, k = instance.spread.p, instance.spread.k_const
    table = _link_table(instance.measure, instance.ell)
    for x in sorted(table, key=canon_key):
        bound = k * p ** (len(x) - 1) / n
        if table[x] > bound:
            return Violation(x, table[x], bound)
    return None


def min_spread_k(measure: Measure, p, n: int | None = None) -> Fraction:
    """Smallest K for which ``measure`` is (p, K)-uniformly spread on n vertices.

    ``n`` defaults to the host's full index range.
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ContainerError(f"p must lie in (0, 1], got {p}")
    if not measure.weights:
        raise ContainerError("measure has empty support")
    n = measure.host.n_vertices if n is None else n
    table = _link_table(measure, measure.host.max_uniformity)
    return max(v * n / p ** (len(x) - 1) for x, v in table.items())


def induced(h: Hypergraph, c: Iterable[int]) -> Hypergraph:
    """H[c]: the edges lying entirely inside ``c`` (same index range)."""
    cs = frozenset(c)
    _check_vertices(tuple(cs), h.n_vertices)
    return Hypergraph(h.n_vertices, h.max_uniformity, [e for e in h.edges if cs.issuperset(e)])


def renormalize_on(measure: Measure, c: Iterable[int]) -> Measure:
    """Condition ``measure`` on the edges inside ``c``.

    Raises ZeroMass when those edges carry no weight.
    """
    sub = induced(measure.host, c)
    mass = measure.mass(sub.edges)
    if mass == 0:
        raise ZeroMass("no mass inside the requested vertex set")
    return Measure(sub, {e: measure.weight(e) / mass for e in sub.edges if measure.weight(e)})
