"""Iterated container lemma: fingerprint/container certificates.

Starting from C = V, while nu(H[C]) >= eps the lemma is applied to H[C]
with the renormalised measure, universe C, and spread constant K^2/eps^2;
its fingerprint is appended to F and its container replaces C.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable

import mpmath

from .core import (
    ContainerError,
    Instance,
    SpreadParams,
    SpreadViolation,
    VertexSet,
    as_vertex_set,
    check_spread,
    induced,
    renormalize_on,
)
from .lemma import NotIndependent, _run, delta_of, run_lemma

CAPACITY_DPS = 50


@dataclass(frozen=True)
class TheoremConfig:
    epsilon: Fraction
    spread: SpreadParams | None = None

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        if not 0 < eps < 1:
            raise ContainerError(f"epsilon must lie in (0, 1), got {eps}")
        object.__setattr__(self, "epsilon", eps)

    def outer(self, instance: Instance) -> SpreadParams:
        return self.spread if self.spread is not None else instance.spread

    def inner_k(self, instance: Instance) -> Fraction:
        k = self.outer(instance).k_const
        return k * k / (self.epsilon * self.epsilon)


@dataclass(frozen=True)
class IterationRecord:
    universe_size: int
    mass: Fraction
    delta: Fraction
    case_path: tuple[str, ...]
    container_size: int


@dataclass(frozen=True)
class Certificate:
    fingerprint: tuple[int, ...]
    segment_boundaries: tuple[int, ...]
    container: frozenset
    iterations: int
    fingerprint_cap: int
    epsilon: Fraction
    trace: tuple[IterationRecord, ...] = field(default=(), compare=False)
    # lemma transcripts per iteration; only filled by run_theorem
    transcripts: tuple = field(default=(), compare=False, repr=False)

    @property
    def fingerprint_set(self) -> frozenset:
        return frozenset(self.fingerprint)


def _mass_inside(instance: Instance, c: frozenset) -> Fraction:
    return instance.measure.mass(e for e in instance.hypergraph.edges if c.issuperset(e))


def stage_instance(instance: Instance, c: frozenset, config: TheoremConfig) -> Instance:
    """The lemma instance for one iteration: H[C], renormalised measure, universe C."""
    p = config.outer(instance).p
    mu = renormalize_on(instance.measure, c)
    return Instance(induced(instance.hypergraph, c), mu, SpreadParams(p, config.inner_k(instance)), c)


def iteration_bound(ell: int, k_const, epsilon) -> int:
    """ceil(log(K/eps) / log(1 + delta)) for delta = delta(ell, K^2/eps^2)."""
    k, eps = Fraction(k_const), Fraction(epsilon)
    if k / eps <= 1:
        return 0
    delta = delta_of(ell, k * k / (eps * eps))
    with mpmath.workdps(CAPACITY_DPS):
        x = mpmath.log(mpmath.mpf(k.numerator) / k.denominator / (mpmath.mpf(eps.numerator) / eps.denominator))
        y = mpmath.log1p(mpmath.mpf(delta.numerator) / delta.denominator)
        return int(mpmath.ceil(x / y))


def capacity_T(ell: int, k_const, epsilon) -> float:
    """ell * log(K/eps) / log(1 + delta(ell, K^2/eps^2)), evaluated at 50 digits.

    Returns 0 when K/eps <= 1 (the loop can never run).
    """
    k, eps = Fraction(k_const), Fraction(epsilon)
    if not 0 < eps < 1 or k <= 0 or ell < 1:
        raise ContainerError("capacity_T needs ell >= 1, K > 0, 0 < eps < 1")
    if k / eps <= 1:
        return 0.0
    delta = delta_of(ell, k * k / (eps * eps))
    with mpmath.workdps(CAPACITY_DPS):
        ratio = mpmath.mpf(k.numerator * eps.denominator) / (k.denominator * eps.numerator)
        d = mpmath.mpf(delta.numerator) / delta.denominator
        return float(ell * mpmath.log(ratio) / mpmath.log1p(d))


def _check_inputs(instance: Instance, config: TheoremConfig, i_set: VertexSet):
    s = set(i_set)
    if not instance.universe.issuperset(s):
        raise ContainerError("independent set leaves the universe")
    for e in instance.hypergraph.edges:
        if s.issuperset(e):
            raise NotIndependent(f"edge {list(e)} lies inside the given set")
    outer = config.outer(instance)
    v = instance.spread_violation if outer == instance.spread else check_spread(instance.with_spread(outer.p, outer.k_const))
    if v is not None:
        raise SpreadViolation(v)


def _iterate(instance: Instance, config: TheoremConfig, step):
    """Loop shared by run and replay; ``step(stage, c)`` runs one lemma application."""
    outer = config.outer(instance)
    eps = config.epsilon
    n = instance.n
    ell = instance.ell
    delta = delta_of(ell, config.inner_k(instance))
    max_iter = iteration_bound(ell, outer.k_const, eps)
    c = instance.universe
    fingerprint: list[int] = []
    bounds: list[int] = []
    trace: list[IterationRecord] = []
    transcripts = []
    cap = 0
    while True:
        mass = _mass_inside(instance, c)
        if mass < eps:
            break
        if len(trace) >= max(max_iter, 1):
            raise AssertionError("iteration cap exceeded")
        assert len(c) * outer.k_const >= eps * n, "|C| < eps N / K while the loop runs"
        stage = stage_instance(instance, c, config)
        v = stage.spread_violation
        assert v is None, f"renormalised measure not spread: {v}"
        f_new, c_new, t = step(stage, c)
        transcripts.append(t)
        case_path = tuple(x.case_taken.value for x in t.walk())
        assert len(c_new) <= (1 - delta) * len(c), "container did not shrink"
        fingerprint += f_new
        bounds.append(len(fingerprint))
        cap += ell * math.ceil(len(c) * outer.p)
        trace.append(IterationRecord(len(c), mass, delta, case_path, len(c_new)))
        c = c_new
    return Certificate(tuple(fingerprint), tuple(bounds), frozenset(c), len(trace), cap, eps,
                       tuple(trace), tuple(transcripts))


def run_theorem(instance: Instance, config: TheoremConfig, i_set: Iterable[int]) -> Certificate:
    i_set = as_vertex_set(i_set)
    _check_inputs(instance, config, i_set)

    def step(stage, c):
        r = run_lemma(stage, [v for v in i_set if v in c])
        return list(r.fingerprint), r.container, r.transcript

    return _iterate(instance, config, step)


def _replay(instance: Instance, config: TheoremConfig, f_hat: Iterable[int]) -> Certificate:
    f_hat = as_vertex_set(f_hat)

    def step(stage, c):
        pool = tuple(v for v in f_hat if v in c)
        return _run(stage, pool, Fraction(1))

    return _iterate(instance, config, step)


def reconstruct_theorem(instance: Instance, config: TheoremConfig, f_hat: Iterable[int]) -> frozenset:
    """The container determined by any F̂ with F ⊆ F̂ ⊆ I."""
    return _replay(instance, config, f_hat).container


def family_bound(n: int, cap: int) -> int:
    """Number of candidate fingerprints: sum of C(n, s) for s <= cap."""
    return sum(comb(n, s) for s in range(min(cap, n) + 1))


@dataclass
class Family:
    certificates: list[Certificate]
    independent_sets: int
    count_bound: int

    @property
    def size(self) -> int:
        return len(self.certificates)


def _run_one(args):
    instance, config, i_set = args
    return run_theorem(instance, config, i_set)


def build_family(instance: Instance, config: TheoremConfig, *, budget: int = 1_000_000,
                 workers: int = 1) -> Family:
    """One certificate per maximal independent set, deduplicated by fingerprint set."""
    from .oracle import enumerate_independent

    sets = enumerate_independent(instance.hypergraph, maximal_only=True, budget=budget,
                                 universe=instance.universe)
    jobs = [(instance, config, s) for s in sets]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            certs = list(ex.map(_run_one, jobs))
    else:
        certs = [_run_one(j) for j in jobs]
    seen = {}
    for cert in sorted(certs, key=lambda c: (len(c.fingerprint), sorted(c.fingerprint))):
        key = frozenset(cert.fingerprint)
        if key in seen:
            assert seen[key].container == cert.container, "equal fingerprints, different containers"
            continue
        seen[key] = cert
    out = list(seen.values())
    cap = max((c.fingerprint_cap for c in out), default=0)
    return Family(out, len(sets), family_bound(instance.n, cap))


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: object = None


@dataclass
class VerifyReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def verify_certificate(instance: Instance, config: TheoremConfig, i_set: Iterable[int],
                       cert: Certificate) -> VerifyReport:
    i_set = frozenset(i_set)
    f = frozenset(cert.fingerprint)
    c = frozenset(cert.container)
    checks = []
    extra = sorted(f - i_set)
    checks.append(CheckResult("F ⊆ I", not extra, extra or None))
    missing = sorted(i_set - c - f)
    checks.append(CheckResult("I ⊆ C ∪ F", not missing, missing or None))
    both = sorted(f & c)
    checks.append(CheckResult("F ∩ C = ∅", not both, both or None))
    mass = _mass_inside(instance, c)
    checks.append(CheckResult("ν(H[C]) < ε", mass < config.epsilon, None if mass < config.epsilon else str(mass)))
    try:
        replay = _replay(instance, config, f)
    except (ContainerError, AssertionError) as exc:
        checks.append(CheckResult("|F| ≤ cap", False, f"replay failed: {exc}"))
        checks.append(CheckResult("reconstruction", False, f"replay failed: {exc}"))
        return VerifyReport(checks)
    cap = replay.fingerprint_cap
    checks.append(CheckResult("|F| ≤ cap", len(f) <= cap, None if len(f) <= cap else f"|F|={len(f)} > {cap}"))
    same = replay.container == c
    checks.append(CheckResult("reconstruction", same,
                              None if same else {"expected": sorted(replay.container), "got": sorted(c)}))
    return VerifyReport(checks)
