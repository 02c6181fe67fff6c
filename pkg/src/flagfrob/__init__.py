"""Exact-arithmetic cohomology and Frobenius-pushforward engine for SL(n) flags."""

from .rootsys import (
    DotNormalForm,
    TypeALattice,
    WeylElt,
    dot_action,
    dot_action_word,
    make_dominant_dot,
    weyl_dim,
)
from .coh import (
    CohState,
    Certificate,
    coh_line_char0,
    coh_line_charp,
    euler_char,
    replay_certificate,
)
from .kclass import (
    classes_equal,
    kadd,
    kdual,
    keuler,
    keuler_pairing,
    kfrobenius,
    kline,
    krank,
    kscale,
    ktensor,
)
from .sheaves import (
    BundleExpr,
    Catalog,
    Chain,
    Expr,
    build_catalog,
    expr_dual,
    expr_frobenius,
    expr_tensor,
    expr_twist,
    line_expr,
    ref_expr,
)
from .solver import InconsistencyError, SolveCertificate, solve_presented

__version__ = "0.1.0"

__all__ = [
    "BundleExpr",
    "Catalog",
    "Certificate",
    "Chain",
    "CohState",
    "DotNormalForm",
    "Expr",
    "InconsistencyError",
    "SolveCertificate",
    "TypeALattice",
    "WeylElt",
    "build_catalog",
    "classes_equal",
    "coh_line_char0",
    "coh_line_charp",
    "dot_action",
    "dot_action_word",
    "euler_char",
    "expr_dual",
    "expr_frobenius",
    "expr_tensor",
    "expr_twist",
    "kadd",
    "kdual",
    "keuler",
    "keuler_pairing",
    "kfrobenius",
    "kline",
    "krank",
    "kscale",
    "ktensor",
    "line_expr",
    "make_dominant_dot",
    "ref_expr",
    "replay_certificate",
    "solve_presented",
    "weyl_dim",
]
