"""MacLane-Vaquie chains, Okutsu frames and Okutsu equivalence over Q_p."""

from .arith import INF, NEG_INF, InvalidOperand, PBase, format_val, parse_val, vp
from .chains import (
    Branch,
    ExtensionsReport,
    MLVChain,
    NeedsMorePrecision,
    build_chain,
    build_chains,
    okutsu_bound,
    previous_primitive,
    ramification_invariants,
    vF,
)
from .cli import ParseError, parse_poly
from .okutsu import (
    InseparableInput,
    InvalidFrame,
    MeetUndefined,
    OkutsuFrame,
    chain_from_frame,
    distance,
    frame_from_chain,
    is_hos_key,
    krasner_constant,
    meet,
    okutsu_equivalent,
    verify_frame,
    weights,
)
from .poly import Poly, X, resultant
from .residue import FqCtx, FqPoly, ff_extend, ff_factor, ff_is_irreducible, prime_field
from .valuation import (
    InductiveVal,
    InvalidAugmentation,
    RootNode,
    augment,
    depth_zero,
    in_equiv,
    is_key,
    is_minimal,
    newton_polygon,
    node_invariants,
    residual_polynomial,
    truncation,
    value,
)

__version__ = "0.1.0"
