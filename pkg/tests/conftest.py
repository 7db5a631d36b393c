import random
from fractions import Fraction
from functools import lru_cache
from math import comb


from hgcontainers.core import Hypergraph, Instance, SpreadParams, min_spread_k
from hgcontainers.gen import random_uniform_hypergraph, uniform_measure
from hgcontainers.oracle import enumerate_independent, iter_graphs

ACCEPTANCE_LOG: list[str] = []


def uniform_instance(h, p, k=None):
    mu = uniform_measure(h)
    p = Fraction(p)
    return Instance(h, mu, SpreadParams(p, min_spread_k(mu, p) if k is None else k))


def c3():
    return Hypergraph(3, 2, [(0, 1), (0, 2), (1, 2)])


def k4():
    return Hypergraph(4, 2, [(i, j) for i in range(4) for j in range(i + 1, 4)])


@lru_cache(maxsize=None)
def graph_corpus():
    """All labelled graphs on 5 vertices with at least one edge; p = 1/2, K minimal."""
    return tuple((f"g5-{mask}", uniform_instance(h, Fraction(1, 2)))
                 for mask, h in enumerate(iter_graphs(5)) if h.edges)


@lru_cache(maxsize=None)
def random_corpus(count=500):
    out = []
    for seed in range(count):
        rng = random.Random(seed)
        n = rng.randint(4, 10)
        m = rng.randint(1, min(20, comb(n, 3)))
        p = rng.choice([Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)])
        out.append((f"r3-{seed}", uniform_instance(random_uniform_hypergraph(n, 3, m, seed), p)))
    return tuple(out)


_sample_cache: dict = {}


def sample_sets(iid, inst):
    """All maximal independent sets plus up to 8 seeded random independent sets."""
    if iid in _sample_cache:
        return _sample_cache[iid]
    everything = enumerate_independent(inst.hypergraph)
    maximal = set(enumerate_independent(inst.hypergraph, maximal_only=True))
    rng = random.Random(f"sets-{iid}")
    extra = [s for s in everything if s not in maximal]
    picked = rng.sample(extra, min(8, len(extra)))
    _sample_cache[iid] = tuple(sorted(maximal) + sorted(picked))
    return _sample_cache[iid]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
