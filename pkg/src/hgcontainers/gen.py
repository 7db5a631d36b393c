"""Deterministic instance generators.

Random hypergraphs use ``random.Random(seed)`` (Mersenne Twister, stable
across platforms): ``rng.sample(range(C(n, ell)), m)`` draws ranks, and each
rank is mapped to the ell-subset at that position in lexicographic order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .core import ContainerError, Hypergraph, Measure

KINDS = ("random_uniform", "triangle", "ap3", "edgeless")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContainerError(f"unknown generator kind {self.kind!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ContainerError("seed must be a 64-bit unsigned integer")


def unrank_combination(rank: int, n: int, k: int) -> tuple[int, ...]:
    """The ``rank``-th k-subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for remaining in range(k, 0, -1):
        while comb(n - x - 1, remaining - 1) <= rank:
            rank -= comb(n - x - 1, remaining - 1)
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def random_uniform_hypergraph(n: int, ell: int, m: int, seed: int) -> Hypergraph:
    total = comb(n, ell)
    if m > total:
        raise ContainerError(f"only {total} edges of size {ell} exist on {n} vertices")
    ranks = random.Random(seed).sample(range(total), m)
    return Hypergraph(n, ell, [unrank_combination(r, n, ell) for r in ranks])


def pair_index(i: int, j: int, n: int) -> int:
    """Vertex id of the K_n edge {i, j}, i < j."""
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def triangle_hypergraph(n: int) -> Hypergraph:
    """Vertices are the edges of K_n, hyperedges its triangles."""
    if n < 3:
        raise ContainerError("triangle hypergraph needs n >= 3")
    edges = [(pair_index(a, b, n), pair_index(a, c, n), pair_index(b, c, n))
             for a, b, c in combinations(range(n), 3)]
    return Hypergraph(n * (n - 1) // 2, 3, edges)


def ap_hypergraph(n: int) -> Hypergraph:
    """Vertices [0, n), hyperedges the 3-term arithmetic progressions."""
    if n < 3:
        raise ContainerError("3-AP hypergraph needs n >= 3")
    edges = [(a, a + d, a + 2 * d) for d in range(1, n) for a in range(n - 2 * d)]
    return Hypergraph(n, 3, edges)


def edgeless(n: int, ell: int = 2) -> Hypergraph:
    return Hypergraph(n, ell, [])


def uniform_measure(h: Hypergraph) -> Measure:
    if not h.edges:
        raise ContainerError("uniform measure needs at least one edge")
    w = Fraction(1, len(h.edges))
    return Measure(h, {e: w for e in h.edges})


def generate(spec: GenSpec) -> Hypergraph:
    p = spec.params
    if spec.kind == "random_uniform":
        return random_uniform_hypergraph(int(p["n"]), int(p["ell"]), int(p["m"]), spec.seed)
    if spec.kind == "triangle":
        return triangle_hypergraph(int(p["n"]))
    if spec.kind == "ap3":
        return ap_hypergraph(int(p["n"]))
    return edgeless(int(p["n"]), int(p.get("ell", 2)))
