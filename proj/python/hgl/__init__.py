"""Hypergraph grammars over first-order linear logic."""

from ._core import (
    HglError,
    Hypergraph,
    alpha_eq,
    corpus,
    derive,
    encode_rules,
    member,
    member_str,
    prove,
    sequent_alpha_eq,
    translate,
)

__all__ = [
    "HglError",
    "Hypergraph",
    "alpha_eq",
    "corpus",
    "derive",
    "encode_rules",
    "member",
    "member_str",
    "prove",
    "sequent_alpha_eq",
    "translate",
]
