import math
from fractions import Fraction

import mpmath
import pytest

from hgcontainers.core import Hypergraph, Instance, Measure, SpreadParams
from hgcontainers.gen import ap_hypergraph, triangle_hypergraph, uniform_measure
from hgcontainers.lemma import delta_of
from hgcontainers.oracle import enumerate_independent
from hgcontainers.theorem import (
    Certificate,
    TheoremConfig,
    build_family,
    capacity_T,
    family_bound,
    iteration_bound,
    reconstruct_theorem,
    run_theorem,
    verify_certificate,
)

from conftest import c3, random_corpus, uniform_instance

HALF = Fraction(1, 2)


def single_edge_instance():
    """One heavy edge {0,1} among ten vertices; everything else isolated."""
    h = Hypergraph(10, 2, [(0, 1)])
    return Instance(h, uniform_measure(h), SpreadParams(Fraction(1, 10), 100))


def test_c3_worked_run():
    h = c3()
    inst = Instance(h, uniform_measure(h), SpreadParams(Fraction(1, 3), 3))
    cert = run_theorem(inst, TheoremConfig(HALF), [0])
    assert cert.fingerprint == (0,) and cert.container == frozenset()
    assert cert.iterations == 1 and cert.segment_boundaries == (1,)
    assert cert.trace[0].case_path == ("Case1", "BaseCase")
    assert cert.transcripts[0].instance.spread.k_const == 36


def test_light_instance_needs_no_iterations():
    h = Hypergraph(5, 2, [])
    inst = Instance(h, Measure(h, {}), SpreadParams(HALF, 1))
    cert = run_theorem(inst, TheoremConfig(HALF), [0, 1, 2, 3, 4])
    assert cert.iterations == 0 and cert.fingerprint == () and cert.container == set(range(5))


def test_single_edge_run():
    inst = single_edge_instance()
    i_set = range(2, 10)
    cert = run_theorem(inst, TheoremConfig(HALF), i_set)
    assert cert.fingerprint == (2,) and cert.container == set(range(3, 10))
    assert cert.fingerprint_cap == 2
    assert verify_certificate(inst, TheoremConfig(HALF), i_set, cert).passed


def test_capacity_values():
    t = capacity_T(2, 2, HALF)
    with mpmath.workdps(60):
        expect = 2 * mpmath.log(4) / mpmath.log(mpmath.mpf(513) / 512)
    assert t == pytest.approx(float(expect), rel=1e-12)
    assert t == pytest.approx(1420.951269, abs=1e-6)
    assert math.isclose(t, 2 * math.log(4) / math.log1p(1 / 512), rel_tol=1e-12)
    near = capacity_T(2, 1, Fraction(999, 1000))  # K/eps just above 1
    assert 0 < near < 1
    assert capacity_T(2, Fraction(1, 2), Fraction(3, 4)) == 0.0


def test_iteration_bound_matches_float():
    for ell, k, eps in [(2, 2, HALF), (3, 5, Fraction(1, 4)), (2, Fraction(7, 3), Fraction(1, 3))]:
        d = delta_of(ell, Fraction(k) ** 2 / eps ** 2)
        approx = math.log(Fraction(k) / eps) / math.log1p(d)
        assert iteration_bound(ell, k, eps) == math.ceil(approx)


def test_verify_detects_tampering():
    inst = single_edge_instance()
    cfg = TheoremConfig(HALF)
    i_set = list(range(2, 10))
    cert = run_theorem(inst, cfg, i_set)

    dropped = Certificate(cert.fingerprint, cert.segment_boundaries, cert.container - {5},
                          cert.iterations, cert.fingerprint_cap, cert.epsilon)
    rep = verify_certificate(inst, cfg, i_set, dropped)
    failed = {c.name: c.witness for c in rep.failed()}
    assert failed["I ⊆ C ∪ F"] == [5]

    # extra vertices of I: replay is unchanged, the size cap binds
    padded = Certificate(cert.fingerprint + (3, 4), cert.segment_boundaries, cert.container,
                         cert.iterations, cert.fingerprint_cap, cert.epsilon)
    failed = {c.name for c in verify_certificate(inst, cfg, i_set, padded).failed()}
    assert "|F| ≤ cap" in failed and "reconstruction" not in failed

    # a fingerprint missing its vertex replays to a different container
    emptied = Certificate((), (), cert.container, cert.iterations, cert.fingerprint_cap, cert.epsilon)
    failed = {c.name for c in verify_certificate(inst, cfg, i_set, emptied).failed()}
    assert "reconstruction" in failed


def test_family_c3():
    inst = uniform_instance(c3(), HALF)
    fam = build_family(inst, TheoremConfig(HALF))
    assert fam.independent_sets == 3 and fam.size <= 3
    for s in [(0,), (1,), (2,)]:
        assert any(set(s) <= c.container | c.fingerprint_set for c in fam.certificates)


def test_family_edgeless():
    h = Hypergraph(4, 2, [])
    inst = Instance(h, Measure(h, {}), SpreadParams(HALF, 1))
    fam = build_family(inst, TheoremConfig(HALF))
    assert fam.size == 1
    (cert,) = fam.certificates
    assert cert.fingerprint == () and cert.container == set(range(4))


def test_family_triangles_of_k4_covers_triangle_free_graphs():
    inst = uniform_instance(triangle_hypergraph(4), HALF)
    fam = build_family(inst, TheoremConfig(HALF))
    for s in enumerate_independent(inst.hypergraph, maximal_only=True):
        assert any(set(s) <= c.container | c.fingerprint_set for c in fam.certificates)
    assert fam.size <= family_bound(inst.n, max(c.fingerprint_cap for c in fam.certificates))


def test_family_parallel_matches_serial():
    inst = uniform_instance(ap_hypergraph(7), HALF)
    a = build_family(inst, TheoremConfig(HALF))
    b = build_family(inst, TheoremConfig(HALF), workers=2)
    assert a.certificates == b.certificates


def test_reconstruct_from_independent_set():
    cfg = TheoremConfig(HALF)
    for iid, inst in random_corpus()[:80]:
        for s in enumerate_independent(inst.hypergraph, maximal_only=True):
            cert = run_theorem(inst, cfg, s)
            assert reconstruct_theorem(inst, cfg, s) == cert.container, iid
            assert reconstruct_theorem(inst, cfg, cert.fingerprint) == cert.container, iid


def test_equal_fingerprints_equal_containers():
    cfg = TheoremConfig(Fraction(1, 4))
    for iid, inst in random_corpus()[:40]:
        seen = {}
        for s in enumerate_independent(inst.hypergraph):
            cert = run_theorem(inst, cfg, s)
            assert seen.setdefault(cert.fingerprint_set, cert.container) == cert.container, iid


def test_config_validation():
    with pytest.raises(Exception):
        TheoremConfig(Fraction(1))
    with pytest.raises(Exception):
        TheoremConfig(Fraction(0))
