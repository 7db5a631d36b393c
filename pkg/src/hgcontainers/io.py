"""JSON documents: instances, certificates, transcripts and sweep reports.

Rationals always travel as "numerator/denominator" strings.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .core import ContainerError, Hypergraph, Instance, Measure, SpreadParams
from .lemma import Transcript
from .theorem import Certificate


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ContainerError(f"expected a rational string, got {s!r}")
    if isinstance(s, str) and any(ch in s for ch in ".eE"):
        raise ContainerError(f"decimal {s!r} not accepted; write a/b")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ContainerError(f"bad rational {s!r}") from exc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def write_json(path, doc):
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ContainerError(f"cannot read {path}: {exc}") from exc


def hypergraph_measure_to_doc(h: Hypergraph, mu: Measure | None) -> dict:
    return {
        "n_vertices": h.n_vertices,
        "max_uniformity": h.max_uniformity,
        "edges": [list(e) for e in h.edges],
        "weights": [rat(mu.weight(e)) if mu is not None else "0/1" for e in h.edges],
    }


def doc_to_hypergraph_measure(doc: dict) -> tuple[Hypergraph, Measure]:
    try:
        n = int(doc["n_vertices"])
        ell = int(doc["max_uniformity"])
        edges = [tuple(int(v) for v in e) for e in doc["edges"]]
        weights = [parse_rat(w) for w in doc["weights"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ContainerError(f"malformed instance document: {exc}") from exc
    if len(edges) != len(weights):
        raise ContainerError("edges and weights differ in length")
    h = Hypergraph(n, ell, edges)
    if len(h.edges) != len(edges):
        raise ContainerError("duplicate edges in instance document")
    if sum(weights, Fraction(0)) != (1 if edges else 0):
        raise ContainerError("weights do not sum to exactly 1")
    w = {}
    for e, x in zip(edges, weights):
        w[tuple(sorted(e))] = x
    return h, Measure(h, w)


def load_instance(path, p, k) -> Instance:
    h, mu = doc_to_hypergraph_measure(read_json(path))
    return Instance(h, mu, SpreadParams(p, k))


def certificate_to_doc(cert: Certificate, i_set=None) -> dict:
    doc = {
        "fingerprint": list(cert.fingerprint),
        "segment_boundaries": list(cert.segment_boundaries),
        "container": sorted(cert.container),
        "iterations": cert.iterations,
        "claimed_bounds": {"fingerprint_cap": rat(cert.fingerprint_cap), "epsilon": rat(cert.epsilon)},
    }
    if i_set is not None:
        doc["independent_set"] = sorted(i_set)
    return doc


def doc_to_certificate(doc: dict) -> Certificate:
    try:
        bounds = doc["claimed_bounds"]
        return Certificate(
            fingerprint=tuple(int(v) for v in doc["fingerprint"]),
            segment_boundaries=tuple(int(v) for v in doc["segment_boundaries"]),
            container=frozenset(int(v) for v in doc["container"]),
            iterations=int(doc["iterations"]),
            fingerprint_cap=int(parse_rat(bounds["fingerprint_cap"])),
            epsilon=parse_rat(bounds["epsilon"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ContainerError(f"malformed certificate document: {exc}") from exc


def transcript_to_doc(t: Transcript) -> dict:
    """Edge families become index lists into the transcript instance's edge list."""
    inst = t.instance
    h = inst.hypergraph
    idx = h.index_of

    def edges(es):
        return sorted(idx(e) for e in es)

    return {
        "instance": {
            **hypergraph_measure_to_doc(h, inst.measure),
            "universe": sorted(inst.universe),
            "p": rat(inst.spread.p),
            "K": rat(inst.spread.k_const),
        },
        "independent_set": list(t.independent_set),
        "rounds": [
            {
                "picked_vertex": r.picked_vertex,
                "pick_degree": rat(r.pick_degree),
                "edges_added_to_hprime": [idx(e) for e in r.edges_added_to_hprime],
                "sets_added_to_l": [{"set": list(x), "moved_to_d": [idx(e) for e in moved]}
                                    for x, moved in r.sets_added_to_l],
            }
            for r in t.rounds
        ],
        "fingerprint": list(t.fingerprint),
        "l_family": [list(x) for x in t.l_family],
        "d_edges": edges(t.d_edges),
        "hprime": edges(t.hprime),
        "r_final": edges(t.r_final),
        "alpha": rat(t.alpha),
        "case": t.case_taken.value if t.case_taken else None,
        "child": transcript_to_doc(t.child) if t.child is not None else None,
    }
