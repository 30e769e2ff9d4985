"""Graph immersions over a three-loop bouquet and the finite-stature closure
for the Artin groups A(2,3,2n)."""

from .artin import (
    beta,
    build_red_ngon,
    build_W,
    build_X1,
    build_X2,
    filling_words,
    pi1_generators,
    q_complex,
    q_contractible,
    q_fillable,
)
from .closure import ClosureCertificate, build_table, verify_certificate, verify_w_square
from .formats import decode_certificate, decode_graph, encode_certificate, encode_graph, to_dot
from .graph import (
    ColoredGraph,
    EdgeColor,
    WTag,
    canonical_form,
    connected_components,
    embeds_into,
    fiber_product,
    fold,
    isomorphic,
    project_second,
    prune_to_core,
    rank,
    word,
)

__all__ = [
    "ClosureCertificate",
    "ColoredGraph",
    "EdgeColor",
    "WTag",
    "beta",
    "build_W",
    "build_X1",
    "build_X2",
    "build_red_ngon",
    "build_table",
    "canonical_form",
    "connected_components",
    "decode_certificate",
    "decode_graph",
    "embeds_into",
    "encode_certificate",
    "encode_graph",
    "fiber_product",
    "filling_words",
    "fold",
    "isomorphic",
    "pi1_generators",
    "project_second",
    "prune_to_core",
    "q_complex",
    "q_contractible",
    "q_fillable",
    "rank",
    "to_dot",
    "verify_certificate",
    "verify_w_square",
    "word",
]
