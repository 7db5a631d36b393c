"""Brute-force ground truth for desk-scale instances."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .core import (
    ContainerError,
    Hypergraph,
    Instance,
    VertexSet,
    canon_key,
    check_spread,
    nonempty_subsets,
    nu_link,
)
from .lemma import Case, LemmaResult, alpha_of, delta_of, num_rounds_for, run_lemma


class BudgetExceeded(ContainerError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial or []


def is_independent(h: Hypergraph, s: Iterable[int]) -> bool:
    s = set(s)
    return not any(s.issuperset(e) for e in h.edges)


def enumerate_independent(h: Hypergraph, maximal_only: bool = False, *, budget: int = 1_000_000,
                          universe: Iterable[int] | None = None) -> list[VertexSet]:
    """All (or all maximal) independent sets of ``h`` within ``universe``, canonical order.

    Backtracks over vertices in increasing order; a vertex may join the
    current set only if no edge ends up fully inside.  ``budget`` caps the
    number of search nodes visited.
    """
    verts = sorted(range(h.n_vertices) if universe is None else set(universe))
    # edges indexed by their largest vertex, so each is tested exactly when it could close
    closing: dict[int, list[frozenset]] = {}
    for e in h.edges:
        closing.setdefault(e[-1], []).append(frozenset(e))
    found: list[VertexSet] = []
    nodes = 0
    cur: list[int] = []

    def can_add(v: int) -> bool:
        s = set(cur)
        s.add(v)
        return not any(e <= s for e in closing.get(v, ()))

    def rec(i: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"enumeration exceeded {budget} search nodes", found)
        if i == len(verts):
            found.append(tuple(cur))
            return
        v = verts[i]
        if can_add(v):
            cur.append(v)
            rec(i + 1)
            cur.pop()
        rec(i + 1)

    rec(0)
    if maximal_only:
        found = [s for s in found if _is_maximal(h, s, verts)]
    found.sort(key=canon_key)
    return found


def _is_maximal(h: Hypergraph, s: VertexSet, verts: list[int]) -> bool:
    ss = set(s)
    for v in verts:
        if v not in ss and is_independent(h, ss | {v}):
            return False
    return True


@dataclass
class SweepViolation:
    instance_id: object
    independent_set: VertexSet
    clause: str
    witness: object = None


@dataclass
class SweepReport:
    instances_checked: int = 0
    independent_sets_checked: int = 0
    violations: list[SweepViolation] = field(default_factory=list)
    cases: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge(self, other: "SweepReport"):
        self.instances_checked += other.instances_checked
        self.independent_sets_checked += other.independent_sets_checked
        self.violations += other.violations
        for k, v in other.cases.items():
            self.cases[k] = self.cases.get(k, 0) + v

    def to_dict(self) -> dict:
        return {
            "instances_checked": self.instances_checked,
            "independent_sets_checked": self.independent_sets_checked,
            "passed": self.passed,
            "cases": dict(sorted(self.cases.items())),
            "violations": [
                {"instance": str(v.instance_id), "independent_set": list(v.independent_set),
                 "clause": v.clause, "witness": str(v.witness)}
                for v in self.violations
            ],
        }


def coverage_check(instance: Instance, run: Callable, *, config=None, budget: int = 1_000_000,
                   instance_id: object = None) -> SweepReport:
    """Run ``run(I)`` for every independent set I and check I ⊆ C ∪ F.

    With ``config`` the full certificate verification is applied as well.
    """
    from .theorem import verify_certificate

    report = SweepReport(instances_checked=1)
    for s in enumerate_independent(instance.hypergraph, budget=budget, universe=instance.universe):
        report.independent_sets_checked += 1
        cert = run(s)
        missing = sorted(set(s) - set(cert.container) - set(cert.fingerprint))
        if missing:
            report.violations.append(SweepViolation(instance_id, s, "I ⊆ C ∪ F", missing))
        if config is not None:
            for chk in verify_certificate(instance, config, s, cert).failed():
                if chk.name != "I ⊆ C ∪ F":
                    report.violations.append(SweepViolation(instance_id, s, chk.name, chk.witness))
    return report


# -- transcript-level checks -------------------------------------------------

def _links(t, edges) -> dict[VertexSet, Fraction]:
    w = t.instance.measure.weights
    out: dict[VertexSet, Fraction] = {}
    for e in edges:
        for x in nonempty_subsets(e, t.instance.ell - 1):
            out[x] = out.get(x, Fraction(0)) + w.get(e, Fraction(0))
    return out


def hprime_link_violations(t, *, disjoint_only: bool) -> list:
    """X with nu(<X> ∩ H') > 2 K p^|X| / N; optionally only X avoiding F."""
    inst = t.instance
    p, k, n = inst.spread.p, inst.spread.k_const, inst.n
    f = set(t.fingerprint)
    bad = []
    for x, v in _links(t, t.hprime).items():
        if disjoint_only and f.intersection(x):
            continue
        if v > 2 * k * p ** len(x) / n:
            bad.append((x, v))
    return sorted(bad, key=lambda b: canon_key(b[0]))


def transcript_violations(t, *, standard_alpha: bool = True) -> list[tuple[str, object]]:
    """Every inequality the lemma's proof relies on, checked exactly on one level."""
    out: list[tuple[str, object]] = []
    inst = t.instance
    ell = inst.ell
    if t.case_taken is Case.BASE:
        return out
    p = inst.spread.p
    mu = inst.measure
    expected_alpha = alpha_of(ell)
    if standard_alpha and t.alpha != expected_alpha:
        out.append(("alpha", t.alpha))
    # literal identity R = H[V \ F] \ D after each round
    f_seen: set[int] = set()
    d_seen: set = set()
    prev_r = None
    for rec in t.rounds:
        f_seen.add(rec.picked_vertex)
        for _, moved in rec.sets_added_to_l:
            d_seen.update(moved)
        expect = {e for e in inst.hypergraph.edges if not f_seen.intersection(e)} - d_seen
        if set(rec.r_after) != expect:
            out.append(("R = H[V∖F]∖D", rec.picked_vertex))
        if prev_r is not None and not rec.r_after <= prev_r:
            out.append(("R non-increasing", rec.picked_vertex))
        prev_r = rec.r_after
    if d_seen != t.d_edges:
        out.append(("D bookkeeping", None))

    h_mass = mu.mass(t.hprime)
    d_mass = mu.mass(t.d_edges)
    for x, v in hprime_link_violations(t, disjoint_only=True):
        out.append(("H′ link bound", (x, v)))
    if h_mass < Fraction(1, 2 ** ell) * p * d_mass:
        out.append(("ν(H′) vs ν(D)", (h_mass, d_mass)))
    pool = set(t.independent_set) - set(t.fingerprint)
    if pool:
        top = max(nu_link(mu, [v], t.r_final) for v in pool)
        if h_mass < len(t.fingerprint) * top:
            out.append(("ν(H′) vs |F|·max degree", (h_mass, top)))
    for rec in t.rounds:
        if rec.pick_degree != nu_link(mu, [rec.picked_vertex], _r_before(t, rec)):
            out.append(("pick degree", rec.picked_vertex))
    if t.case_taken in (Case.CASE1, Case.CASE2):
        oracle_case = Case.CASE1 if h_mass >= expected_alpha * p else Case.CASE2
        if oracle_case is not t.case_taken:
            out.append(("case classification", (t.case_taken.value, h_mass)))
    if t.case_taken is Case.CASE2:
        if not mu.mass(t.r_final) > Fraction(1, 2):
            out.append(("ν(R) > 1/2", mu.mass(t.r_final)))
        if not d_mass < Fraction(1, 4):
            out.append(("ν(D) < 1/4", d_mass))
    if t.case_taken is Case.CASE1 and t.child is not None:
        red = t.child.instance
        v = check_spread(red)
        if v is not None:
            out.append(("reduced spread", v))
        if red.spread.k_const != 2 ** (ell + 3) * inst.spread.k_const:
            out.append(("reduced K", red.spread.k_const))
        if any(not 1 <= len(e) <= ell - 1 for e in red.hypergraph.edges):
            out.append(("reduced edge sizes", red.hypergraph.edges))
    return out


def _r_before(t, rec):
    i = t.rounds.index(rec)
    if i == 0:
        return set(t.instance.hypergraph.edges)
    return t.rounds[i - 1].r_after


def lemma_result_violations(inst: Instance, i_set: VertexSet, r: LemmaResult) -> list[tuple[str, object]]:
    out = []
    f, c, i = set(r.fingerprint), set(r.container), set(i_set)
    if not f <= i:
        out.append(("F ⊆ I", sorted(f - i)))
    if not i <= c | f:
        out.append(("I ⊆ C ∪ F", sorted(i - c - f)))
    if f & c:
        out.append(("F ∩ C = ∅", sorted(f & c)))
    cap = inst.ell * num_rounds_for(inst)
    if len(r.fingerprint) > cap:
        out.append(("|F| ≤ ℓ⌈Np⌉", len(r.fingerprint)))
    delta = delta_of(inst.ell, inst.spread.k_const)
    if len(c) > (1 - delta) * inst.n:
        out.append(("|C| ≤ (1−δ)N", len(c)))
    if not c <= inst.universe:
        out.append(("C ⊆ V", sorted(c - inst.universe)))
    for t in r.transcript.walk():
        out += transcript_violations(t)
    return out


def exhaustive_lemma_sweep(family: Iterable[tuple[object, Instance]], *, sets_for=None,
                           alpha_scale=1, budget: int = 1_000_000) -> SweepReport:
    """Run the lemma on each instance and each of its independent sets; collect violations.

    ``sets_for(instance_id, instance)`` may restrict which independent sets are
    used; by default all of them are.
    """
    report = SweepReport()
    for iid, inst in family:
        report.instances_checked += 1
        sets = (sets_for(iid, inst) if sets_for is not None
                else enumerate_independent(inst.hypergraph, budget=budget, universe=inst.universe))
        for s in sets:
            report.independent_sets_checked += 1
            try:
                r = run_lemma(inst, s, alpha_scale=alpha_scale)
            except ContainerError as exc:
                report.violations.append(SweepViolation(iid, s, "lemma raised", exc))
                continue
            for t in r.transcript.walk():
                key = t.case_taken.value
                report.cases[key] = report.cases.get(key, 0) + 1
            for clause, witness in lemma_result_violations(inst, s, r):
                report.violations.append(SweepViolation(iid, s, clause, witness))
    return report


def iter_graphs(n: int) -> Iterator[Hypergraph]:
    """Every labelled graph on n vertices, by edge bitmask."""
    from itertools import combinations
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Hypergraph(n, 2, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
