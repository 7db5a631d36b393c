"""The container lemma: greedy fingerprint rounds, case split and replay.

A run on an instance (H, nu, p, K) with independent set I proceeds in
ceil(Np) rounds.  Each round takes the vertex of I \\ F with the largest link
degree in the residual R = H[V \\ F] \\ D, moves its residual edges into H',
and saturates every small vertex set X whose H'-link exceeds K p^|X| / N
(those X join L and their residual edges move to D).  Afterwards either H'
is heavy, and the problem recurses on the projection {e \\ F : e in H'} of
uniformity one lower, or H' is light and the low-degree vertices of R form
the container directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .core import (
    ContainerError,
    Hypergraph,
    Instance,
    Measure,
    SpreadParams,
    SpreadViolation,
    VertexSet,
    as_vertex_set,
    canon_key,
    nonempty_subsets,
)


class Case(str, Enum):
    BASE = "BaseCase"
    EARLY_EXIT = "EarlyExit"
    CASE1 = "Case1"
    CASE2 = "Case2"


class NotIndependent(ContainerError):
    pass


@dataclass(frozen=True)
class RoundRecord:
    picked_vertex: int
    pick_degree: Fraction
    edges_added_to_hprime: tuple[VertexSet, ...]
    # (X, edges moved into D because of X), in scan order
    sets_added_to_l: tuple[tuple[VertexSet, tuple[VertexSet, ...]], ...]
    r_after: frozenset


@dataclass
class Transcript:
    instance: Instance
    independent_set: VertexSet
    rounds: list[RoundRecord] = field(default_factory=list)
    fingerprint: list[int] = field(default_factory=list)
    l_family: list[VertexSet] = field(default_factory=list)
    d_edges: set = field(default_factory=set)
    hprime: set = field(default_factory=set)
    r_final: set = field(default_factory=set)
    alpha: Fraction = Fraction(0)
    case_taken: Case | None = None
    child: "Transcript | None" = None
    num_rounds: int = 0

    def nu(self, edges: Iterable[VertexSet]) -> Fraction:
        return self.instance.measure.mass(edges)

    @property
    def hprime_mass(self) -> Fraction:
        return self.nu(self.hprime)

    def full_fingerprint(self) -> list[int]:
        out = list(self.fingerprint)
        if self.child is not None:
            out += self.child.full_fingerprint()
        return out

    def walk(self):
        t = self
        while t is not None:
            yield t
            t = t.child


@dataclass(frozen=True)
class LemmaResult:
    fingerprint: VertexSet
    container: frozenset
    transcript: Transcript
    delta_used: Fraction


def alpha_of(ell: int) -> Fraction:
    return Fraction(1, 2 ** (ell + 2))


def num_rounds_for(instance: Instance) -> int:
    return math.ceil(instance.n * instance.spread.p)


def delta_of(ell: int, k_const) -> Fraction:
    """Shrink factor guaranteed by the lemma for uniformity ``ell`` and constant K."""
    if ell < 1:
        raise ContainerError("uniformity must be at least 1")
    k = Fraction(k_const)
    if k <= 0:
        raise ContainerError("K must be positive")
    if ell == 1:
        return 1 / k
    return min(Fraction(1) / (4 * k), delta_of(ell - 1, 2 ** (ell + 3) * k))


def level_constants(ell: int, k_const) -> list[Fraction]:
    """Spread constants met at uniformity ell, ell-1, ..., 1 along Case-1 recursion."""
    ks = [Fraction(k_const)]
    for j in range(ell, 1, -1):
        ks.append(2 ** (j + 3) * ks[-1])
    return ks


def execute_rounds(instance: Instance, candidate_pool: Iterable[int], num_rounds: int,
                   *, reverse_scan: bool = False) -> Transcript:
    """Run the greedy rounds.  ``reverse_scan`` only exists to test scan-order independence."""
    h = instance.hypergraph
    w = instance.measure.weights
    n = instance.n
    p, k = instance.spread.p, instance.spread.k_const
    ell = h.max_uniformity
    pool = set(candidate_pool) & instance.universe

    t = Transcript(instance=instance, independent_set=as_vertex_set(candidate_pool),
                   alpha=alpha_of(ell), num_rounds=num_rounds)
    residual = set(h.edges)
    # link degree of each vertex inside the residual
    rdeg: dict[int, Fraction] = {}
    for e in residual:
        for v in e:
            rdeg[v] = rdeg.get(v, Fraction(0)) + w.get(e, Fraction(0))
    hlink: dict[VertexSet, Fraction] = {}
    in_l: set[VertexSet] = set()
    thresholds = [k * p ** j / n for j in range(ell)]

    def drop(e):
        residual.discard(e)
        for u in e:
            rdeg[u] -= w.get(e, Fraction(0))

    for _ in range(num_rounds):
        cands = pool.difference(t.fingerprint)
        if not cands:
            t.case_taken = Case.EARLY_EXIT
            break
        v = min(cands, key=lambda u: (-rdeg.get(u, Fraction(0)), u))
        degree = rdeg.get(v, Fraction(0))
        added = tuple(sorted((e for e in residual if v in e), key=canon_key))
        t.fingerprint.append(v)
        for e in added:
            t.hprime.add(e)
            drop(e)
            for x in nonempty_subsets(e, ell - 1):
                hlink[x] = hlink.get(x, Fraction(0)) + w.get(e, Fraction(0))

        touched = {x for e in added for x in nonempty_subsets(e, ell - 1)} - in_l
        order = sorted(touched, key=canon_key, reverse=reverse_scan)
        new_l = []
        for x in order:
            if hlink[x] > thresholds[len(x)]:
                in_l.add(x)
                t.l_family.append(x)
                xs = set(x)
                moved = tuple(sorted((e for e in residual if xs.issubset(e)), key=canon_key))
                for e in moved:
                    t.d_edges.add(e)
                    drop(e)
                new_l.append((x, moved))
        t.rounds.append(RoundRecord(v, degree, added, tuple(new_l), frozenset(residual)))

    t.r_final = residual
    return t


def classify_case(t: Transcript) -> Case:
    if t.hprime_mass >= t.alpha * t.instance.spread.p:
        return Case.CASE1
    return Case.CASE2


def reduce_case1(t: Transcript) -> tuple[Instance, VertexSet]:
    """Project H' away from F: the lower-uniformity instance and I \\ F."""
    inst = t.instance
    f = set(t.fingerprint)
    total = t.hprime_mass
    if total <= 0:
        raise ContainerError("reduction needs nu(H') > 0")
    w = inst.measure.weights
    proj: dict[VertexSet, Fraction] = {}
    for e in t.hprime:
        x = tuple(u for u in e if u not in f)
        if not x:
            raise ContainerError(f"edge {list(e)} lies inside the fingerprint")
        proj[x] = proj.get(x, Fraction(0)) + w.get(e, Fraction(0))
    ell = inst.ell - 1
    hh = Hypergraph(inst.hypergraph.n_vertices, ell, proj)
    mu = Measure(hh, {x: m / total for x, m in proj.items()})
    spread = SpreadParams(inst.spread.p, 2 * inst.spread.k_const / t.alpha)
    reduced = Instance(hh, mu, spread, inst.universe - f)
    i_red = tuple(v for v in t.independent_set if v not in f)
    return reduced, i_red


def container_case2(t: Transcript) -> frozenset:
    inst = t.instance
    w = inst.measure.weights
    f = set(t.fingerprint)
    deg: dict[int, Fraction] = {}
    for e in t.r_final:
        for u in e:
            deg[u] = deg.get(u, Fraction(0)) + w.get(e, Fraction(0))
    cap = t.alpha / inst.n
    return frozenset(v for v in inst.universe - f if deg.get(v, Fraction(0)) <= cap)


def _base_container(instance: Instance) -> frozenset:
    w = instance.measure.weights
    heavy = {e[0] for e in instance.hypergraph.edges if w.get(e, 0) > 0}
    return frozenset(instance.universe - heavy)


def _run(instance: Instance, pool: VertexSet, alpha_scale: Fraction) -> tuple[list[int], frozenset, Transcript]:
    ell = instance.ell
    if ell == 1:
        t = Transcript(instance=instance, independent_set=pool, alpha=alpha_of(1), case_taken=Case.BASE)
        t.r_final = set(instance.hypergraph.edges)
        return [], _base_container(instance), t
    t = execute_rounds(instance, pool, num_rounds_for(instance))
    t.alpha *= alpha_scale
    if t.case_taken is Case.EARLY_EXIT:
        return list(t.fingerprint), frozenset(), t
    t.case_taken = classify_case(t)
    if t.case_taken is Case.CASE2:
        return list(t.fingerprint), container_case2(t), t
    reduced, i_red = reduce_case1(t)
    violation = reduced.spread_violation
    if violation is not None:
        raise SpreadViolation(violation)
    f_child, c, t.child = _run(reduced, i_red, alpha_scale)
    return list(t.fingerprint) + f_child, c, t


def run_lemma(instance: Instance, i_set: Iterable[int], *, alpha_scale=1) -> LemmaResult:
    """Fingerprint F ⊆ I and container C with I ⊆ C ∪ F and |C| <= (1 - delta) N.

    ``alpha_scale`` multiplies the case-split constant; it exists for fault
    injection and must be 1 in real use.
    """
    i_set = as_vertex_set(i_set)
    if not instance.universe.issuperset(i_set):
        raise ContainerError("independent set leaves the universe")
    s = set(i_set)
    for e in instance.hypergraph.edges:
        if s.issuperset(e):
            raise NotIndependent(f"edge {list(e)} lies inside the given set")
    violation = instance.spread_violation
    if violation is not None:
        raise SpreadViolation(violation)
    f, c, t = _run(instance, i_set, Fraction(alpha_scale))
    return LemmaResult(tuple(f), c, t, delta_of(instance.ell, instance.spread.k_const))


def reconstruct_lemma(instance: Instance, f_hat: Iterable[int]) -> frozenset:
    """Rebuild the container from any F̂ with F ⊆ F̂ ⊆ I."""
    pool = tuple(v for v in as_vertex_set(f_hat) if v in instance.universe)
    return _run(instance, pool, Fraction(1))[1]
