from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hgcontainers.core import (
    ContainerError,
    Hypergraph,
    Instance,
    Measure,
    SpreadParams,
    ZeroMass,
    check_spread,
    induced,
    min_spread_k,
    nu_link,
    renormalize_on,
)
from hgcontainers.gen import uniform_measure

from conftest import c3, k4


def brute_link(weights, x, within):
    return sum((w for e, w in weights.items() if e in within and set(x) <= set(e)), Fraction(0))


def brute_spread(mu, n, p, k):
    """Scan every non-empty X ⊆ [0, n), not only subsets of edges."""
    verts = range(mu.host.n_vertices)
    for size in range(1, n + 1):
        for x in combinations(verts, size):
            val = brute_link(mu.weights, x, set(mu.weights))
            bound = k * p ** (size - 1) / n
            if val > bound:
                return x, val, bound
    return None


@st.composite
def measures(draw, max_n=6, max_ell=3):
    n = draw(st.integers(2, max_n))
    ell = draw(st.integers(1, max_ell))
    cands = [e for k in range(1, ell + 1) for e in combinations(range(n), k)]
    edges = draw(st.lists(st.sampled_from(cands), min_size=1, max_size=8, unique=True))
    raw = draw(st.lists(st.integers(1, 9), min_size=len(edges), max_size=len(edges)))
    total = sum(raw)
    h = Hypergraph(n, ell, edges)
    return Measure(h, {e: Fraction(r, total) for e, r in zip(edges, raw)})


def test_hypergraph_canonical_order_and_dedup():
    h = Hypergraph(4, 3, [(2, 1), (0,), (1, 2), (0, 1, 3)])
    assert h.edges == ((0,), (1, 2), (0, 1, 3))


@pytest.mark.parametrize("edges", [[()], [(0, 0)], [(0, 4)], [(0, 1, 2, 3)]])
def test_hypergraph_rejects_bad_edges(edges):
    with pytest.raises(ContainerError):
        Hypergraph(4, 3, edges)


def test_measure_must_sum_to_one():
    h = c3()
    with pytest.raises(ContainerError):
        Measure(h, {(0, 1): Fraction(1, 2)})
    with pytest.raises(ContainerError):
        Measure(h, {(0, 1): Fraction(1, 2), (0, 3): Fraction(1, 2)})


def test_nu_link_examples():
    mu = uniform_measure(k4())
    assert nu_link(mu, []) == 1
    assert nu_link(mu, [0]) == Fraction(1, 2)
    assert nu_link(mu, [0, 1, 2]) == 0
    with pytest.raises(ContainerError):
        nu_link(mu, [7])


def test_check_spread_examples():
    mu = uniform_measure(k4())
    assert check_spread(Instance(mu.host, mu, SpreadParams(Fraction(1, 3), 2))) is None
    v = check_spread(Instance(mu.host, mu, SpreadParams(Fraction(1, 3), Fraction(3, 2))))
    assert (v.x, v.value, v.bound) == ((0,), Fraction(1, 2), Fraction(3, 8))
    h = Hypergraph(5, 1, [(i,) for i in range(5)])
    mu1 = uniform_measure(h)
    assert check_spread(Instance(h, mu1, SpreadParams(Fraction(1, 7), 1))) is None


def test_min_spread_k_examples():
    assert min_spread_k(uniform_measure(k4()), Fraction(1, 3)) == 2
    assert min_spread_k(uniform_measure(Hypergraph(2, 2, [(0, 1)])), 1) == 2
    assert min_spread_k(uniform_measure(Hypergraph(6, 1, [(i,) for i in range(6)])), Fraction(1, 2)) == 1
    with pytest.raises(ContainerError):
        min_spread_k(Measure(Hypergraph(3, 2, []), {}), Fraction(1, 2))


def test_induced_examples():
    h = c3()
    assert induced(h, range(3)).edges == h.edges
    assert induced(h, [0, 1]).edges == ((0, 1),)
    assert induced(h, []).edges == ()


def test_renormalize_examples():
    mu = uniform_measure(c3())
    assert renormalize_on(mu, range(3)).weights == mu.weights
    assert renormalize_on(mu, [0, 1]).weights == {(0, 1): 1}
    with pytest.raises(ZeroMass):
        renormalize_on(mu, [])


@settings(max_examples=150, deadline=None)
@given(measures(), st.data())
def test_nu_link_matches_brute_force_and_is_monotone(mu, data):
    edges = list(mu.host.edges)
    a = data.draw(st.sets(st.sampled_from(edges)))
    b = a | data.draw(st.sets(st.sampled_from(edges)))
    x = data.draw(st.sets(st.integers(0, mu.host.n_vertices - 1), max_size=3))
    y = x | data.draw(st.sets(st.integers(0, mu.host.n_vertices - 1), max_size=2))
    assert nu_link(mu, x, a) == brute_link(mu.weights, x, a)
    assert nu_link(mu, x, a) <= nu_link(mu, x, b)
    assert nu_link(mu, y, a) <= nu_link(mu, x, a)


@settings(max_examples=150, deadline=None)
@given(measures(), st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)]))
def test_min_spread_k_is_the_threshold(mu, p):
    n = mu.host.n_vertices
    k = min_spread_k(mu, p)
    assert check_spread(Instance(mu.host, mu, SpreadParams(p, k))) is None
    assert brute_spread(mu, n, p, k) is None
    below = k * Fraction(999, 1000)
    v = check_spread(Instance(mu.host, mu, SpreadParams(p, below)))
    assert v is not None
    x, val, bound = brute_spread(mu, n, p, below)
    assert (v.x, v.value, v.bound) == (x, val, bound)


@settings(max_examples=100, deadline=None)
@given(measures(), st.data())
def test_renormalize_sums_to_one(mu, data):
    c = data.draw(st.sets(st.integers(0, mu.host.n_vertices - 1)))
    try:
        sub = renormalize_on(mu, c)
    except ZeroMass:
        assert mu.mass(e for e in mu.host.edges if set(e) <= c) == 0
        return
    assert sum(sub.weights.values()) == 1
    assert all(set(e) <= c for e in sub.weights)


def test_exactness_is_reproducible():
    mu = uniform_measure(k4())
    a = [nu_link(mu, x) for x in [(0,), (0, 1)]]
    b = [nu_link(mu, x) for x in [(0,), (0, 1)]]
    assert a == b and all(isinstance(v, Fraction) for v in a)
