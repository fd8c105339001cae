"""posetdim: dimension invariants of finite posets.

Exact Dushnik-Miller dimension, interval dimension, fractional dimension via
exact rational LP, maximum embedded standard examples, and certified
constructive realizers, with generators for the classical extremal families.
"""

from posetdim.core import (
    BipartitePoset,
    CapExceeded,
    CycleError,
    NotMaximalAntichain,
    Poset,
    PosetError,
    TooLarge,
    antichain_split,
    build_poset,
    canonical_key,
    count_linear_extensions,
    dual,
    enumerate_linear_extensions,
    enumerate_posets,
    height,
    inc0,
    inc_pairs,
    is_isomorphic,
    is_linear_extension,
    max_antichain,
    neighborhoods,
    subposet,
    width,
)

__version__ = "0.1.0"
