"""Exact arithmetic and linear algebra substrate: Z, Z/p^N, GF(p^f)."""

from .gf import GF, Zq, gf_kernel, gf_preimage, gf_rank, gf_rref, gf_solve
from .integers import hermite, smith_diagonal, z_kernel, z_solve
from .modules import (
    ZZ,
    FinComplex,
    FinModPresentation,
    InvariantFactors,
    NonComplex,
    SubQuot,
    ZZRing,
    homology,
    homology_subquot,
    invariants_isomorphic,
    kernel,
    mat_mul,
    member,
    normal_form,
    preimage,
    quotient_invariants,
    solve,
    span_contains,
    span_equal,
)
from .zmodp import ZmodRing, howell, intersect, reduce_vector, span_order

__all__ = [
    "GF",
    "Zq",
    "ZZ",
    "ZZRing",
    "ZmodRing",
    "FinComplex",
    "FinModPresentation",
    "InvariantFactors",
    "NonComplex",
    "SubQuot",
    "gf_kernel",
    "gf_preimage",
    "gf_rank",
    "gf_rref",
    "gf_solve",
    "hermite",
    "homology",
    "homology_subquot",
    "howell",
    "intersect",
    "invariants_isomorphic",
    "kernel",
    "mat_mul",
    "member",
    "normal_form",
    "preimage",
    "quotient_invariants",
    "reduce_vector",
    "smith_diagonal",
    "solve",
    "span_contains",
    "span_equal",
    "span_order",
    "z_kernel",
    "z_solve",
]
