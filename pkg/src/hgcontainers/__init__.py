"""Constructive hypergraph containers with exact-rational certificates."""

__version__ = "0.1.0"

from .core import (
    ContainerError,
    Hypergraph,
    Instance,
    Measure,
    SpreadParams,
    SpreadViolation,
    ZeroMass,
    check_spread,
    induced,
    min_spread_k,
    nu_link,
    renormalize_on,
)
from .lemma import (
    Case,
    LemmaResult,
    Transcript,
    classify_case,
    container_case2,
    delta_of,
    execute_rounds,
    reconstruct_lemma,
    reduce_case1,
    run_lemma,
)
from .theorem import (
    Certificate,
    TheoremConfig,
    build_family,
    capacity_T,
    reconstruct_theorem,
    run_theorem,
    verify_certificate,
)
